"""Synthetic tremor and intent-trajectory generators.

Everything here is a pure deterministic function of (spec, seed, t).  Random
draws come from splitmix64 so streams reproduce bit-for-bit anywhere:

    state += 0x9E3779B97F4A7C15            (mod 2^64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)
    u = (z >> 11) / 2^53                   (uniform in [0, 1))

The tremor families are stand-ins: the clinical literature behind this device
names conditions, not motion spectra, so the 4-12 Hz band and the pulse shapes
are design choices, not measured values.
"""

import bisect
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

N_BAND_COMPONENTS = 32


class RandomStream:
    """Sequential uniform [0,1) doubles from splitmix64."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u01(self) -> float:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        z = z ^ (z >> 31)
        return (z >> 11) * 2.0 ** -53


@dataclass(frozen=True)
class TremorSpec:
    kind: str = "sinusoid"      # sinusoid | band_noise | spasm_impulses
    amplitude: float = 0.005    # [m]
    frequency: float = 8.0      # sinusoid [Hz]
    band: tuple = (4.0, 12.0)   # noise band [Hz]
    rate: float = 0.5           # spasm events [1/s]
    width: float = 0.1          # spasm pulse width [s]
    seed: int = 0
    direction: tuple = (1.0, 0.0)  # sinusoid axis (normalized at use)

    def __post_init__(self):
        if self.kind not in ("sinusoid", "band_noise", "spasm_impulses"):
            raise ValueError(f"unknown tremor kind {self.kind!r}")
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if not self.band[0] < self.band[1]:
            raise ValueError("band low must be < band high")
        if self.rate < 0 or self.width <= 0:
            raise ValueError("rate must be >= 0 and width > 0")


def _unit(v):
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise ValueError("direction must be nonzero")
    return v[0] / n, v[1] / n


@lru_cache(maxsize=128)
def _band_components(band, seed):
    """Per-axis (frequency, phase) tables for the random-phase sum.

    Stream order: all (f, phase) pairs of the x axis, then of the y axis.
    """
    rng = RandomStream(seed)
    lo, hi = band
    axes = []
    for _ in range(2):
        fs = np.empty(N_BAND_COMPONENTS)
        phs = np.empty(N_BAND_COMPONENTS)
        for i in range(N_BAND_COMPONENTS):
            fs[i] = lo + (hi - lo) * rng.next_u01()
            phs[i] = 2.0 * math.pi * rng.next_u01()
        axes.append((fs, phs))
    return tuple(axes)


class _SpasmEvents:
    """Seeded homogeneous Poisson pulse train, extended lazily in time."""

    def __init__(self, rate, seed):
        self._rng = RandomStream(seed)
        self._rate = rate
        self._lock = threading.Lock()  # instances are shared across sessions
        self.times = []
        self.angles = []

    def extend_to(self, t: float):
        if self._rate <= 0:
            return
        with self._lock:
            last = self.times[-1] if self.times else 0.0
            while last <= t:
                u = self._rng.next_u01()
                last += -math.log(1.0 - u) / self._rate
                self.times.append(last)
                self.angles.append(2.0 * math.pi * self._rng.next_u01())


@lru_cache(maxsize=128)
def _spasm_events(rate, seed):
    return _SpasmEvents(rate, seed)


def _band_eval(spec, t):
    comps = _band_components(spec.band, spec.seed)
    # per-axis RMS = amplitude/sqrt(2); a sum of 32 unit sinusoids has RMS 4
    scale = spec.amplitude / (4.0 * math.sqrt(2.0))
    out = np.empty(2)
    dout = np.empty(2)
    for ax, (fs, phs) in enumerate(comps):
        arg = 2.0 * math.pi * fs * t + phs
        out[ax] = scale * np.sum(np.sin(arg))
        dout[ax] = scale * np.sum(2.0 * math.pi * fs * np.cos(arg))
    return out, dout


def _spasm_eval(spec, t):
    ev = _spasm_events(spec.rate, spec.seed)
    ev.extend_to(t + spec.width)
    pos = np.zeros(2)
    vel = np.zeros(2)
    i = bisect.bisect_right(ev.times, t)
    j = i - 1
    while j >= 0 and t - ev.times[j] < spec.width:
        tau = t - ev.times[j]
        c, s = math.cos(ev.angles[j]), math.sin(ev.angles[j])
        arg = 2.0 * math.pi * tau / spec.width
        amp = 0.5 * spec.amplitude * (1.0 - math.cos(arg))
        damp = spec.amplitude * math.pi / spec.width * math.sin(arg)
        pos += amp * np.array([c, s])
        vel += damp * np.array([c, s])
        j -= 1
    return pos, vel


def tremor_displacement(spec: TremorSpec, t: float):
    """(displacement [m], velocity [m/s]) of the tremor at time t >= 0."""
    if spec.amplitude == 0.0:
        return np.zeros(2), np.zeros(2)
    if spec.kind == "sinusoid":
        ux, uy = _unit(spec.direction)
        w = 2.0 * math.pi * spec.frequency
        a = spec.amplitude * math.sin(w * t)
        da = spec.amplitude * w * math.cos(w * t)
        return np.array([a * ux, a * uy]), np.array([da * ux, da * uy])
    if spec.kind == "band_noise":
        return _band_eval(spec, t)
    return _spasm_eval(spec, t)


def tremor_signal(spec: TremorSpec, t: float):
    """Tremor displacement [m] at time t (deterministic in (spec, seed, t))."""
    return tremor_displacement(spec, t)[0]


@dataclass(frozen=True)
class IntentPath:
    """C1 intended pen trajectory."""

    kind: str = "line"            # line | circle | lissajous_letter
    start: tuple = (-0.05, 0.26)  # line start [m]
    end: tuple = (0.05, 0.30)     # line end [m]
    center: tuple = (0.0, 0.28)   # circle / lissajous center [m]
    radius: float = 0.05          # circle radius / lissajous amplitude [m]
    lobe_fx: float = 0.3          # lissajous x frequency [Hz]
    lobe_fy: float = 0.2          # lissajous y frequency [Hz]
    speed: float = 0.02           # line / circle pace [m/s]

    def __post_init__(self):
        if self.kind not in ("line", "circle", "lissajous_letter"):
            raise ValueError(f"unknown intent kind {self.kind!r}")
        if self.kind != "lissajous_letter" and not self.speed > 0:
            raise ValueError("speed must be > 0")
        if self.kind != "line" and not self.radius > 0:
            raise ValueError("radius must be > 0")


def intent_path(path: IntentPath, t: float):
    """(position [m], exact velocity [m/s]) of the intent at time t >= 0."""
    if path.kind == "line":
        dx = path.end[0] - path.start[0]
        dy = path.end[1] - path.start[1]
        length = math.hypot(dx, dy)
        if length == 0.0:
            return np.array(path.start, dtype=float), np.zeros(2)
        t_total = length / path.speed
        if t >= t_total:
            return np.array(path.end, dtype=float), np.zeros(2)
        u = t / t_total
        pos = np.array([path.start[0] + u * dx, path.start[1] + u * dy])
        vel = np.array([dx / length, dy / length]) * path.speed
        return pos, vel
    if path.kind == "circle":
        w = path.speed / path.radius
        a = w * t
        pos = np.array([path.center[0] + path.radius * math.cos(a),
                        path.center[1] + path.radius * math.sin(a)])
        vel = np.array([-path.radius * w * math.sin(a),
                        path.radius * w * math.cos(a)])
        return pos, vel
    wx = 2.0 * math.pi * path.lobe_fx
    wy = 2.0 * math.pi * path.lobe_fy
    pos = np.array([path.center[0] + path.radius * math.sin(wx * t),
                    path.center[1] + path.radius * math.sin(wy * t)])
    vel = np.array([path.radius * wx * math.cos(wx * t),
                    path.radius * wy * math.cos(wy * t)])
    return pos, vel


def compose_target(path: IntentPath, tremor: TremorSpec, t: float):
    """Intent plus tremor: the raw hand target fed to the coupling."""
    pos, vel = intent_path(path, t)
    dpos, dvel = tremor_displacement(tremor, t)
    return pos + dpos, vel + dvel
