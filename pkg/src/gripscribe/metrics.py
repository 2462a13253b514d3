"""Stabilization metrics: frequency transmissibility and tracking error.

Transmissibility of the nonlinear mechanism depends on posture and drive
amplitude, so the metric pins both: the pen starts at the mid-sheet operating
point (0, 0.28) m from the base (elbow-up branch) and the target oscillates
along x with 5 mm amplitude by default.  Output amplitude and phase are
recovered by quadrature demodulation over a whole number of drive periods,
which kills spectral leakage without windowing.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DynamicParams, HandImpedance, SimTrace, simulate
from .kinematics import MechanismConfig, ik
from .signals import IntentPath, intent_path

OPERATING_POINT = (0.0, 0.28)  # pen position relative to the base [m]


@dataclass(frozen=True)
class TransmissibilityPoint:
    frequency: float  # [Hz]
    gain: float       # pen amplitude / target amplitude
    phase: float      # [rad], negative = pen lags the target


def operating_state(config: MechanismConfig):
    """Elbow-up joint state placing the pen at the sweep operating point."""
    target = (config.base[0] + OPERATING_POINT[0],
              config.base[1] + OPERATING_POINT[1])
    sol = ik(config, target)
    for s in sol.states:
        if s.gamma > 0:
            return s
    return sol.states[0]


def demodulate(t, x, f):
    """(amplitude, phase) of the component of x at frequency f.

    Expects t to span a whole number of periods of f; the mean is removed
    first.  Phase is relative to sin(2*pi*f*t).
    """
    t = np.asarray(t)
    x = np.asarray(x, dtype=float)
    x = x - x.mean()
    w = 2.0 * math.pi * f
    span = t[-1] - t[0]
    i_part = 2.0 / span * np.trapezoid(x * np.sin(w * t), t)
    q_part = 2.0 / span * np.trapezoid(x * np.cos(w * t), t)
    return math.hypot(i_part, q_part), math.atan2(q_part, i_part)


def transmissibility(params: DynamicParams, config: MechanismConfig,
                     imp: HandImpedance, f: float, amplitude: float = 0.005,
                     settle: float = 2.0, measure: float = 4.0,
                     dt: float = 1e-3) -> TransmissibilityPoint:
    """Single-frequency transmissibility of target motion into pen motion.

    The measure window is rounded to the nearest whole period count >= 1.
    """
    if not f > 0:
        raise ValueError("f must be > 0")
    n_periods = max(1, round(measure * f))
    t_measure = n_periods / f
    state0 = operating_state(config)
    cx = config.base[0] + OPERATING_POINT[0]
    cy = config.base[1] + OPERATING_POINT[1]
    w = 2.0 * math.pi * f

    def target(t):
        return ((cx + amplitude * math.sin(w * t), cy),
                (amplitude * w * math.cos(w * t), 0.0))

    trace = simulate(params, config, imp, state0, target,
                     settle + t_measure, dt)
    i0 = int(round(settle / dt))
    amp, phase = demodulate(trace.t[i0:], trace.pen[i0:, 0], f)
    return TransmissibilityPoint(frequency=f, gain=amp / amplitude, phase=phase)


def frequency_sweep(params: DynamicParams, config: MechanismConfig,
                    imp: HandImpedance, freqs, **kwargs):
    """One TransmissibilityPoint per frequency (positive, ascending)."""
    freqs = list(freqs)
    if any(not f > 0 for f in freqs):
        raise ValueError("frequencies must be > 0")
    if sorted(freqs) != freqs:
        raise ValueError("frequencies must be sorted ascending")
    return [transmissibility(params, config, imp, f, **kwargs) for f in freqs]


def path_rmse(trace: SimTrace, intent: IntentPath, settle: float = 0.0) -> float:
    """RMS pen distance from the intent path over rows with t >= settle [m]."""
    if len(trace) == 0:
        raise ValueError("trace is empty")
    mask = trace.t >= settle
    ref = np.array([intent_path(intent, t)[0] for t in trace.t[mask]])
    err = trace.pen[mask] - ref
    return float(np.sqrt(np.mean(np.sum(err * err, axis=1))))


def sweep_to_csv(points, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("f_hz,gain,phase_rad\n")
        for p in points:
            fh.write(f"{p.frequency!r},{p.gain!r},{p.phase!r}\n")
