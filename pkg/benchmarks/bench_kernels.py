#!/usr/bin/env python3
"""Benchmark the jitted path kernels against the interpreted fallback.

Runs the radial BEM integrator and the full skew-product stepper over a
production-sized workload in the current backend, and (when invoked as the
orchestrator, the default) re-launches itself under both MASSSHELL_NUMBA
settings to print a comparison table.

Usage:
    python benchmarks/bench_kernels.py [--paths N] [--steps N] [--quick]
    python benchmarks/bench_kernels.py --single   # time current backend only
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time

import numpy as np


def time_workload(n_paths: int, n_steps: int) -> dict:
    import massshell as ms
    from massshell import _kernels

    params = ms.ModelParams(d=3, m=1.0, gamma=10.0)
    spec = ms.RadialDriftSpec(params=params, kind="ou")
    c_coth, c_tanh, sigma = spec.coefficients()
    dt = 2.0 ** -6
    dummy = np.empty(1)
    dummy2 = np.empty((1, 3))

    # warmup triggers jit compilation when enabled
    z = np.zeros(8)
    _kernels.radial_path(1.0, dt, 8, z, c_coth, c_tanh, 1e-12, 50, dummy, False)
    om = np.array([0.0, 0.0, 1.0])
    _kernels.momentum_path(1.0, om, dt, 8, z, np.zeros((8, 3)), c_coth, c_tanh,
                           1.0, 1e-12, 50, dummy, dummy2, False)

    results = {}
    t0 = time.perf_counter()
    for i in range(n_paths):
        rng = ms.path_rng(0, i)
        dw = rng.standard_normal(n_steps) * (sigma * math.sqrt(dt))
        _kernels.radial_path(1.0, dt, n_steps, dw, c_coth, c_tanh, 1e-12, 50,
                             dummy, False)
    results["radial_bem"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    for i in range(n_paths):
        rng = ms.path_rng(1, i)
        dw = rng.standard_normal(n_steps) * (sigma * math.sqrt(dt))
        z_sph = rng.standard_normal((n_steps, 3))
        om = np.array([0.0, 0.0, 1.0])
        _kernels.momentum_path(1.0, om, dt, n_steps, dw, z_sph, c_coth, c_tanh,
                               1.0, 1e-12, 50, dummy, dummy2, False)
    results["skew_product"] = time.perf_counter() - t0
    results["numba"] = ms.NUMBA_ENABLED
    return results


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=500)
    ap.add_argument("--steps", type=int, default=6400)
    ap.add_argument("--quick", action="store_true", help="tiny workload (CI smoke)")
    ap.add_argument("--single", action="store_true",
                    help="time the current backend and print JSON")
    args = ap.parse_args()
    if args.quick:
        args.paths, args.steps = 20, 256

    if args.single:
        print(json.dumps(time_workload(args.paths, args.steps)))
        return 0

    rows = {}
    for flag in ("1", "0"):
        env = dict(os.environ, MASSSHELL_NUMBA=flag)
        cmd = [sys.executable, __file__, "--single",
               "--paths", str(args.paths), "--steps", str(args.steps)]
        proc = subprocess.run(cmd, capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        rows[flag] = json.loads(proc.stdout.strip().splitlines()[-1])

    n_work = args.paths * args.steps
    print(f"workload: {args.paths} paths x {args.steps} steps ({n_work:,} steps/kernel)")
    print(f"{'kernel':<14} {'numba':>10} {'numpy/py':>10} {'speedup':>9}")
    for name in ("radial_bem", "skew_product"):
        tj, tp = rows["1"][name], rows["0"][name]
        print(f"{name:<14} {tj:>9.3f}s {tp:>9.3f}s {tp / tj:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
