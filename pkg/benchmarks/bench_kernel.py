#!/usr/bin/env python3
"""Benchmark the compiled stepping kernel against the pure-Python fallback.

Workload: the 8 Hz transmissibility drive from the mid-sheet operating point,
the same inner loop the sweep and optimizer subcommands hammer.

Usage: python benchmarks/bench_kernel.py [n_steps]
"""

import math
import sys
import time

import numpy as np

from gripscribe import DynamicParams, HandImpedance, MechanismConfig
from gripscribe import _core_py
from gripscribe.dynamics import _pack_params
from gripscribe.metrics import operating_state

try:
    from gripscribe import _core
except ImportError:
    _core = None


def build_workload(n, dt=1e-3, f=8.0, amp=0.005):
    config = MechanismConfig()
    s0 = operating_state(config)
    p = _pack_params(DynamicParams(), config, HandImpedance())
    w = 2.0 * math.pi * f
    tj = np.arange(2 * n + 1) * 0.5 * dt
    targets = np.column_stack([
        amp * np.sin(w * tj),
        np.full(tj.size, 0.28),
        amp * w * np.cos(w * tj),
        np.zeros(tj.size),
    ])
    y0 = np.array([s0.theta1, s0.psi2, 0.0, 0.0, 0.0, 0.0])
    return p, y0, targets, dt


def run(mod, p, y0, targets, dt, n):
    states = np.empty((n + 1, 4))
    pen = np.empty((n + 1, 2))
    energy = np.empty((n + 1, 3))
    t0 = time.perf_counter()
    status, done = mod.run_chain(p, y0, targets, dt, states, pen, energy)
    elapsed = time.perf_counter() - t0
    assert status == 0 and done == n
    return elapsed, states


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    p, y0, targets, dt = build_workload(n)

    t_py, states_py = run(_core_py, p, y0, targets, dt, n)
    print(f"python kernel: {n / t_py:12,.0f} steps/s   ({t_py * 1e3:8.1f} ms)")

    if _core is None:
        print("compiled kernel not built (pip install -e . rebuilds it)")
        return

    t_cy, states_cy = run(_core, p, y0, targets, dt, n)
    print(f"cython kernel: {n / t_cy:12,.0f} steps/s   ({t_cy * 1e3:8.1f} ms)")
    print(f"speedup: {t_py / t_cy:.1f}x")
    drift = np.abs(states_cy - states_py).max()
    print(f"max trajectory difference: {drift:.3e} rad (expect ~1e-16)")


if __name__ == "__main__":
    main()
