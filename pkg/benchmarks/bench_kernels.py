"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from topoctl import kernels
from topoctl.cbtc import run_cbtc
from topoctl.network import generate_random
from topoctl.optimizations import optimize
from topoctl.radio import RadioModel


def workloads():
    rng = np.random.default_rng(7)
    angles = np.sort(rng.uniform(0, 2 * math.pi, 200))
    levels = np.sort(rng.integers(1, 300, 200))
    lengths = rng.uniform(1, 500, 60)
    t = generate_random(3, 100, model=RadioModel(growth_factor=1.1))
    return {
        "max_gap(200)": lambda: kernels.max_gap(angles),
        "discover_count(200)": lambda: kernels.discover_count(levels, angles, 5 * math.pi / 6, 1e-9, 0),
        "redundant_flags(60)": lambda: kernels.redundant_flags(angles[:60], lengths, np.arange(60),
                                                               np.zeros(60, dtype=np.int64), math.pi / 3),
        "pipeline(100 nodes)": lambda: optimize(run_cbtc(t, 2 * math.pi / 3), "pairwise"),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = sorted(kernels.BACKENDS)
    if "compiled" not in names:
        print("compiled backend unavailable; only the Python fallback is timed")
    print(f"{'workload':24s}" + "".join(f"{n:>14s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in workloads().items():
        times = {}
        for name in names:
            kernels.use_backend(name)
            number = 3 if label.startswith("pipeline") else 200
            times[name] = min(timeit.repeat(fn, number=number, repeat=args.repeat)) / number
        cells = "".join(f"{times[n] * 1e6:12.1f}us" for n in names)
        ratio = f"{times['python'] / times['compiled']:11.1f}x" if len(names) > 1 else ""
        print(f"{label:24s}{cells}{ratio}")


if __name__ == "__main__":
    main()
