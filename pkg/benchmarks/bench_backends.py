#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the same workload under ITMFLOW_BACKEND=numba and =numpy in separate
interpreters (the backend is chosen at import time) and prints per-task
timings.  Compile time is excluded by a warmup pass.

Usage:  python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import os
import subprocess
import sys
import time


def _workload(repeats: int) -> dict:
    from itmflow import ItmConfig, ScanGrid, scan, solve_sakiadis

    # warmup: triggers numba compilation of both system dimensions
    solve_sakiadis(ItmConfig(root_finder="newton", max_iterations=2))
    solve_sakiadis(ItmConfig(max_iterations=3))

    t0 = time.perf_counter()
    for _ in range(repeats):
        res = solve_sakiadis()
    secant = (time.perf_counter() - t0) / repeats

    t0 = time.perf_counter()
    for _ in range(repeats):
        solve_sakiadis(ItmConfig(root_finder="newton"))
    newton = (time.perf_counter() - t0) / repeats

    t0 = time.perf_counter()
    for _ in range(repeats):
        scan(ScanGrid(0.5, 20.0, 40), -1)
    sweep = (time.perf_counter() - t0) / repeats

    per_eval = secant / res.gamma_evaluations
    return {"secant_solve": secant, "newton_solve": newton,
            "scan_40pts": sweep, "gamma_evaluation": per_eval}


def _worker(repeats: int) -> None:
    import itmflow

    results = _workload(repeats)
    for name, seconds in results.items():
        print(f"{itmflow.BACKEND} {name} {seconds:.6f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        _worker(args.repeats)
        return

    timings = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, ITMFLOW_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeats", str(args.repeats)],
            env=env, capture_output=True, text=True,
        )
        if proc.returncode != 0:
            print(f"{backend}: worker failed\n{proc.stderr}", file=sys.stderr)
            continue
        for line in proc.stdout.strip().splitlines():
            name, task, seconds = line.split()
            timings.setdefault(task, {})[name] = float(seconds)

    print(f"{'task':<20} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for task, by_backend in timings.items():
        nb = by_backend.get("numba")
        np_ = by_backend.get("numpy")
        if nb is None or np_ is None:
            continue
        print(f"{task:<20} {nb * 1e3:>10.3f}ms {np_ * 1e3:>10.3f}ms {np_ / nb:>8.1f}x")


if __name__ == "__main__":
    main()
