"""Damper tuning: attenuate tremor-band motion while preserving intent motion.

Damping effects span decades, so both the grid and the simplex work in
log10(b) coordinates over the box [1e-3, 1.0]^2 N m s/rad.  The intent floor
enters as a soft penalty; Nelder-Mead handles a smooth penalty better than
rejection, and the log grid doubles as the oracle for the simplex result.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DynamicParams, HandImpedance, with_dampers
from .kinematics import MechanismConfig
from .metrics import transmissibility

BOX_LO = 1e-3  # [N m s/rad]
BOX_HI = 1.0


@dataclass(frozen=True)
class DesignVars:
    b1: float
    b2: float

    def __post_init__(self):
        for name in ("b1", "b2"):
            v = getattr(self, name)
            if not BOX_LO <= v <= BOX_HI:
                raise ValueError(f"{name}={v} outside [{BOX_LO}, {BOX_HI}]")


@dataclass(frozen=True)
class ObjectiveSpec:
    tremor_freq: float = 8.0      # [Hz]
    intent_freq: float = 0.5      # [Hz]
    intent_floor: float = 0.8     # min acceptable intent gain
    penalty_weight: float = 10.0

    def __post_init__(self):
        if not self.tremor_freq > self.intent_freq > 0:
            raise ValueError("need tremor_freq > intent_freq > 0")
        if not 0 < self.intent_floor <= 1:
            raise ValueError("intent_floor must be in (0, 1]")


def evaluate_design(vars: DesignVars, spec: ObjectiveSpec,
                    params: DynamicParams, config: MechanismConfig,
                    imp: HandImpedance) -> float:
    """gain(tremor_freq) plus the penalized intent-gain shortfall."""
    trial = with_dampers(params, vars.b1, vars.b2)
    g_tremor = transmissibility(trial, config, imp, spec.tremor_freq).gain
    g_intent = transmissibility(trial, config, imp, spec.intent_freq).gain
    return g_tremor + spec.penalty_weight * max(0.0, spec.intent_floor - g_intent)


@dataclass
class GridResult:
    best: DesignVars
    cost: float
    table: list  # rows of (b1, b2, cost)


def grid_search(spec: ObjectiveSpec, params: DynamicParams,
                config: MechanismConfig, imp: HandImpedance,
                n_per_axis: int = 11) -> GridResult:
    """Exhaustive log-spaced grid; exact argmin of the evaluated cells.

    Ties break toward smaller b1, then smaller b2.
    """
    if n_per_axis < 2:
        raise ValueError("n_per_axis must be >= 2")
    values = np.logspace(math.log10(BOX_LO), math.log10(BOX_HI), n_per_axis)
    table = []
    best = None
    for b1 in values:
        for b2 in values:
            cost = evaluate_design(DesignVars(b1, b2), spec, params, config, imp)
            table.append((float(b1), float(b2), cost))
            key = (cost, b1, b2)
            if best is None or key < best:
                best = key
    return GridResult(best=DesignVars(best[1], best[2]), cost=best[0], table=table)


def nelder_mead_minimize(fn, start, lo, hi, tol: float = 1e-4,
                         max_iter: int = 200, initial_step: float = 0.25):
    """Box-clamped Nelder-Mead with the standard coefficients (1, 2, 0.5, 0.5).

    Minimizes fn over vectors clamped to [lo, hi] per axis.  Converged when
    the max vertex distance falls below tol.  Returns
    (x_best, f_best, iterations, converged).
    """
    start = np.asarray(start, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    dim = start.size

    def clamp(x):
        return np.minimum(hi, np.maximum(lo, x))

    verts = [clamp(start)]
    for i in range(dim):
        v = verts[0].copy()
        step = initial_step if v[i] + initial_step <= hi[i] else -initial_step
        v[i] += step
        verts.append(clamp(v))
    costs = [fn(v) for v in verts]

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = sorted(range(dim + 1), key=lambda i: costs[i])
        verts = [verts[i] for i in order]
        costs = [costs[i] for i in order]
        spread = max(np.max(np.abs(v - verts[0])) for v in verts[1:])
        if spread < tol:
            converged = True
            break
        iterations += 1

        centroid = np.mean(verts[:-1], axis=0)
        reflected = clamp(centroid + (centroid - verts[-1]))
        f_r = fn(reflected)
        if costs[0] <= f_r < costs[-2]:
            verts[-1], costs[-1] = reflected, f_r
            continue
        if f_r < costs[0]:
            expanded = clamp(centroid + 2.0 * (centroid - verts[-1]))
            f_e = fn(expanded)
            if f_e < f_r:
                verts[-1], costs[-1] = expanded, f_e
            else:
                verts[-1], costs[-1] = reflected, f_r
            continue
        contracted = clamp(centroid + 0.5 * (verts[-1] - centroid))
        f_c = fn(contracted)
        if f_c < costs[-1]:
            verts[-1], costs[-1] = contracted, f_c
            continue
        for i in range(1, dim + 1):
            verts[i] = clamp(verts[0] + 0.5 * (verts[i] - verts[0]))
            costs[i] = fn(verts[i])

    i_best = min(range(dim + 1), key=lambda i: costs[i])
    return verts[i_best], costs[i_best], iterations, converged


@dataclass
class NelderMeadResult:
    vars: DesignVars
    cost: float
    iterations: int
    converged: bool  # False = iteration budget exhausted, best-so-far returned


def nelder_mead(spec: ObjectiveSpec, params: DynamicParams,
                config: MechanismConfig, imp: HandImpedance,
                start: DesignVars, tol: float = 1e-4,
                max_iter: int = 200) -> NelderMeadResult:
    """Simplex search over log10 damper coefficients from `start`."""

    def cost_of_log(z):
        return evaluate_design(DesignVars(10.0 ** z[0], 10.0 ** z[1]),
                               spec, params, config, imp)

    z0 = np.array([math.log10(start.b1), math.log10(start.b2)])
    lo = np.array([math.log10(BOX_LO)] * 2)
    hi = np.array([math.log10(BOX_HI)] * 2)
    z, cost, iterations, converged = nelder_mead_minimize(
        cost_of_log, z0, lo, hi, tol=tol, max_iter=max_iter)
    return NelderMeadResult(
        vars=DesignVars(10.0 ** z[0], 10.0 ** z[1]),
        cost=cost, iterations=iterations, converged=converged)


def grid_to_csv(result: GridResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("b1,b2,cost\n")
        for b1, b2, cost in result.table:
            fh.write(f"{b1!r},{b2!r},{cost!r}\n")
