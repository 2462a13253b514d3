import numpy as np
import pytest

from gripscribe import (DesignVars, ObjectiveSpec, evaluate_design,
                        grid_search, nelder_mead, nelder_mead_minimize,
                        transmissibility)
from gripscribe.dynamics import with_dampers
from gripscribe.optimize import BOX_HI, BOX_LO


def test_design_vars_box():
    DesignVars(0.05, 0.05)
    with pytest.raises(ValueError):
        DesignVars(0.0, 0.05)
    with pytest.raises(ValueError):
        DesignVars(0.05, 1.5)


def test_objective_spec_validation():
    with pytest.raises(ValueError):
        ObjectiveSpec(tremor_freq=0.4, intent_freq=0.5)
    with pytest.raises(ValueError):
        ObjectiveSpec(intent_floor=0.0)


def test_evaluate_design_is_definition(params, config, imp):
    spec = ObjectiveSpec()
    vars = DesignVars(BOX_LO, BOX_LO)
    trial = with_dampers(params, BOX_LO, BOX_LO)
    g_t = transmissibility(trial, config, imp, spec.tremor_freq).gain
    g_i = transmissibility(trial, config, imp, spec.intent_freq).gain
    expected = g_t + spec.penalty_weight * max(0.0, spec.intent_floor - g_i)
    assert evaluate_design(vars, spec, params, config, imp) == expected


def test_penalty_inactive_above_floor(params, config, imp):
    # defaults keep the intent gain near 1, far above the 0.8 floor
    spec = ObjectiveSpec()
    cost = evaluate_design(DesignVars(0.05, 0.05), spec, params, config, imp)
    g_t = transmissibility(with_dampers(params, 0.05, 0.05), config, imp,
                           spec.tremor_freq).gain
    assert cost == g_t


def test_cost_decreases_with_more_damping(params, config, imp):
    spec = ObjectiveSpec()
    c_low = evaluate_design(DesignVars(0.01, 0.01), spec, params, config, imp)
    c_mid = evaluate_design(DesignVars(0.05, 0.05), spec, params, config, imp)
    assert c_mid < c_low


def test_grid_search_small(params, config, imp):
    spec = ObjectiveSpec()
    result = grid_search(spec, params, config, imp, n_per_axis=2)
    assert len(result.table) == 4
    assert result.cost == min(row[2] for row in result.table)
    values = {BOX_LO, BOX_HI}
    assert {row[0] for row in result.table} == values
    again = grid_search(spec, params, config, imp, n_per_axis=2)
    assert again.table == result.table


def test_nelder_mead_quadratic_converges():
    target = np.array([0.3, -1.2])
    a = np.array([[3.0, 0.4], [0.4, 1.5]])      # SPD

    def fn(x):
        d = x - target
        return d @ a @ d

    x, cost, iters, converged = nelder_mead_minimize(
        fn, np.array([2.0, 2.0]), lo=np.array([-4.0, -4.0]),
        hi=np.array([4.0, 4.0]), tol=1e-7, max_iter=500)
    assert converged
    assert np.abs(x - target).max() < 1e-4
    assert cost < 1e-7


def test_nelder_mead_reports_budget_exhaustion():
    def fn(x):
        return float(np.sum(x * x))

    x, cost, iters, converged = nelder_mead_minimize(
        fn, np.array([3.0, 3.0]), lo=np.array([-4.0, -4.0]),
        hi=np.array([4.0, 4.0]), tol=1e-12, max_iter=3)
    assert not converged
    assert iters == 3
    assert cost <= fn(np.array([3.0, 3.0]))


def test_nelder_mead_stays_in_box(params, config, imp):
    spec = ObjectiveSpec()
    result = nelder_mead(spec, params, config, imp,
                         DesignVars(BOX_HI, BOX_HI), max_iter=15)
    assert BOX_LO <= result.vars.b1 <= BOX_HI
    assert BOX_LO <= result.vars.b2 <= BOX_HI


def test_nelder_mead_never_worse_than_start(params, config, imp):
    spec = ObjectiveSpec()
    start = DesignVars(0.01, 0.01)
    start_cost = evaluate_design(start, spec, params, config, imp)
    result = nelder_mead(spec, params, config, imp, start, max_iter=25)
    assert result.cost <= start_cost


def test_nelder_mead_deterministic(params, config, imp):
    spec = ObjectiveSpec()
    a = nelder_mead(spec, params, config, imp, DesignVars(0.02, 0.08),
                    max_iter=20)
    b = nelder_mead(spec, params, config, imp, DesignVars(0.02, 0.08),
                    max_iter=20)
    assert (a.vars, a.cost, a.iterations, a.converged) == \
        (b.vars, b.cost, b.iterations, b.converged)
