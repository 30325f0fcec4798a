"""Compare the compiled kernels against the plain-Python fallback.

Runs the same seeded trajectory in two subprocesses, one with
GROUPFLOW_DISABLE_JIT=1, and reports steps/second for each. The outputs
are also checked for equality, since both paths share one kernel source
and one RNG stream.

Usage: python3 benchmarks/bench_dynamics.py [--nodes 1000] [--sweeps 100]
"""

import argparse
import hashlib
import os
import subprocess
import sys

WORKER = r"""
import sys, time
import numpy as np
from groupflow import JIT_ENABLED, LabeledDigraph, ModelParams, run

n0, n1, sweeps = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3])
params = ModelParams(p_swap=(0.7, 0.5), p_assort=(0.9, 0.8),
                     alpha=(0.2, 0.1), group_sizes=(n0, n1))
g = LabeledDigraph.erdos_renyi(n0, n1, 6.65 / (n0 + n1 - 1),
                               np.random.default_rng(1))
warm = g.copy()
run(warm, params, sweeps=1, sample_every=1, rng=np.random.default_rng(2))

t0 = time.perf_counter()
rec = run(g, params, sweeps=sweeps, sample_every=sweeps, rng=np.random.default_rng(3))
dt = time.perf_counter() - t0
steps = sweeps * (n0 + n1)
sys.stdout.write(f"{'jit' if JIT_ENABLED else 'python'},{steps},{dt:.6f}\n")
sys.stdout.write(rec.to_csv_text())
"""


def run_worker(disable_jit: bool, n0: int, n1: int, sweeps: int):
    env = dict(os.environ, GROUPFLOW_DISABLE_JIT="1" if disable_jit else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER,
                           str(n0), str(n1), str(sweeps)],
                          env=env, capture_output=True, text=True, check=True)
    header, _, body = proc.stdout.partition("\n")
    mode, steps, dt = header.split(",")
    return mode, int(steps), float(dt), hashlib.sha256(body.encode()).hexdigest()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=1000)
    ap.add_argument("--sweeps", type=int, default=100)
    args = ap.parse_args()
    n0 = args.nodes * 2 // 3
    n1 = args.nodes - n0

    results = {}
    for disable in (False, True):
        mode, steps, dt, digest = run_worker(disable, n0, n1, args.sweeps)
        results[mode] = (steps, dt, digest)
        print(f"{mode:>7}: {steps} steps in {dt:.3f}s "
              f"({steps / dt / 1e6:.2f} M steps/s)")
    speedup = results["python"][1] / results["jit"][1]
    print(f"speedup: {speedup:.1f}x")
    if results["jit"][2] != results["python"][2]:
        print("ERROR: trajectories differ between paths", file=sys.stderr)
        return 1
    print("trajectories identical across paths")
    return 0


if __name__ == "__main__":
    sys.exit(main())
