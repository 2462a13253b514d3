import numpy as np
import pytest

from gripscribe import (HandImpedance, IntentPath, SimTrace, frequency_sweep,
                        path_rmse, simulate, transmissibility)
from gripscribe.dynamics import with_dampers
from gripscribe.metrics import demodulate, operating_state
from gripscribe.signals import compose_target, TremorSpec

# Reference gains from an independent high-order adaptive integration of the
# same model (scipy DOP853 at rtol 1e-10), frozen here as regression anchors.
ORACLE_GAIN = {0.05: 1.000028, 0.25: 1.000686, 8.0: 0.863304}


def test_demodulation_recovers_amplitude_and_phase():
    f = 5.0
    t = np.arange(0.0, 2.0 + 1e-12, 1e-3)      # 10 whole periods
    for amp, phase in ((0.005, -0.4), (0.02, 1.1), (1.0, 0.0)):
        x = 0.3 + amp * np.sin(2 * np.pi * f * t + phase)
        got_amp, got_phase = demodulate(t, x, f)
        assert abs(got_amp - amp) < 1e-3 * amp
        assert abs(got_phase - phase) < 0.01


def test_demodulation_rejects_other_tones():
    f = 5.0
    t = np.arange(0.0, 2.0 + 1e-12, 1e-3)
    x = 0.01 * np.sin(2 * np.pi * f * t) + 0.05 * np.sin(2 * np.pi * 2.0 * t + 0.3)
    amp, _ = demodulate(t, x, f)
    assert abs(amp - 0.01) < 1e-4


def test_quasi_static_gain(params, config, imp):
    point = transmissibility(params, config, imp, 0.05)
    assert abs(point.gain - 1.0) < 0.05
    assert point.gain == pytest.approx(ORACLE_GAIN[0.05], abs=1e-3)


def test_undamped_static_limit(params, config):
    free = with_dampers(params, 1e-12, 1e-12)
    rigid = HandImpedance(k=200.0, d=0.0)
    point = transmissibility(free, config, rigid, 0.05)
    assert abs(point.gain - 1.0) < 0.01


def test_tremor_band_attenuated_vs_intent_band(params, config, imp):
    g8 = transmissibility(params, config, imp, 8.0)
    g05 = transmissibility(params, config, imp, 0.5)
    assert g8.gain < g05.gain
    assert g8.gain == pytest.approx(ORACLE_GAIN[8.0], abs=1e-3)
    assert g8.phase < 0.0                       # pen lags the hand


def test_intent_preservation_floor(params, config, imp):
    assert transmissibility(params, config, imp, 0.5).gain >= 0.8


def test_gain_nonincreasing_in_damping_at_8hz(params, config, imp):
    gains = [transmissibility(with_dampers(params, b, b), config, imp, 8.0).gain
             for b in (0.01, 0.05, 0.2)]
    assert gains[0] > gains[1] > gains[2]


def test_sweep_singleton_matches_pointwise(params, config, imp):
    single = frequency_sweep(params, config, imp, [8.0])
    point = transmissibility(params, config, imp, 8.0)
    assert len(single) == 1
    assert single[0] == point


def test_sweep_validates_input(params, config, imp):
    with pytest.raises(ValueError):
        frequency_sweep(params, config, imp, [2.0, 1.0])
    with pytest.raises(ValueError):
        frequency_sweep(params, config, imp, [0.0, 1.0])


def test_sweep_rolloff_above_resonance(params, config, imp):
    # regression of the actual response shape: a mild hump below ~4 Hz from
    # the hand-damping feedthrough, then monotone rolloff
    pts = frequency_sweep(params, config, imp, [2.0, 4.0, 8.0, 12.0])
    gains = [p.gain for p in pts]
    assert gains[1] > gains[2] > gains[3]
    assert gains[0] > 1.0


def test_path_rmse_zero_and_offset(params, config, imp):
    intent = IntentPath(kind="line", start=(0.0, 0.28), end=(0.04, 0.28),
                        speed=0.01)
    n = 101
    t = np.arange(n) * 1e-3
    pen = np.array([compose_target(intent, TremorSpec(amplitude=0.0), ti)[0]
                    for ti in t])
    trace = SimTrace(dt=1e-3, t=t, target=pen.copy(), states=np.zeros((n, 4)),
                     pen=pen.copy(), work_in=np.zeros(n),
                     dissipated=np.zeros(n), kinetic=np.zeros(n),
                     energy_residual=0.0)
    assert path_rmse(trace, intent) == 0.0
    trace.pen = pen + np.array([3e-3, -4e-3])
    assert path_rmse(trace, intent) == pytest.approx(5e-3, rel=1e-12)


def test_damping_reduces_tremor_rmse(params, config, imp):
    intent = IntentPath(kind="line", start=(-0.04, 0.27), end=(0.04, 0.29),
                        speed=0.02)
    tremor = TremorSpec(kind="sinusoid", amplitude=0.005, frequency=8.0)
    start = operating_state(config)

    def run(p):
        target = lambda t: compose_target(intent, tremor, t)
        s0_pos = compose_target(intent, TremorSpec(amplitude=0.0), 0.0)[0]
        from gripscribe import ik
        branch = ik(config, s0_pos)
        s0 = next((s for s in branch if s.gamma > 0), branch.states[0])
        trace = simulate(p, config, imp, s0, target, 4.0)
        return path_rmse(trace, intent, settle=1.0)

    damped = run(params)
    undamped = run(with_dampers(params, 1e-6, 1e-6))
    assert damped < undamped
