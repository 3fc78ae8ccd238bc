"""Benchmark: compiled episode kernel vs pure-Python fallback.

Runs the same batch of tracking episodes through both backends, checks they
agree bit-for-bit, and reports throughput.

    python benchmarks/bench_kernels.py [--episodes N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from flightdeck._kernels import _csim_available, load_backend
from flightdeck.vehicle import TrackerParams, random_episode


def make_batch(episodes: int, params: TrackerParams, seed: int = 0):
    rng = np.random.default_rng(seed)
    return [
        random_episode(rng, v_plan=0.5, disturb_max=params.disturb_max)
        for _ in range(episodes)
    ]


def run(backend, batch, params: TrackerParams, dt: float = 0.01):
    t0 = time.perf_counter()
    devs = [
        backend.episode_max_deviation(
            p0, v0, rp, rv, d, params.kp, params.kd, params.accel_max, dt
        )
        for p0, v0, rp, rv, d in batch
    ]
    return time.perf_counter() - t0, devs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=500)
    args = parser.parse_args()

    params = TrackerParams()
    batch = make_batch(args.episodes, params)
    steps = sum(len(rv) for _, _, _, rv, _ in batch)

    pysim = load_backend("python")
    py_time, py_devs = run(pysim, batch, params)

    print(f"episodes: {args.episodes} ({steps} tracker steps)")
    print(f"{'backend':<10} {'time':>9} {'steps/s':>12} {'speedup':>8}")
    print(f"{'python':<10} {py_time:>8.3f}s {steps / py_time:>12.0f} {'1.0x':>8}")

    if _csim_available():
        csim = load_backend("compiled")
        c_time, c_devs = run(csim, batch, params)
        print(
            f"{'compiled':<10} {c_time:>8.3f}s {steps / c_time:>12.0f}"
            f" {py_time / c_time:>7.1f}x"
        )
        if py_devs == c_devs:
            print("backends agree bit-for-bit on all episodes")
        else:
            worst = max(abs(a - b) for a, b in zip(py_devs, c_devs))
            print(f"WARNING: backends disagree, worst abs diff {worst}")
    else:
        print("compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
