"""Time the compiled and numpy kernel backends on the search workload.

Run: python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""
import argparse
import math
import time

import numpy as np

from reinhardt import _pykernels

try:
    from reinhardt import _ckernels
except ImportError:  # extension not built
    _ckernels = None

CASES = [
    ("theorem_i", 1, (0.5, 0.0, 0.0)),
    ("theorem_ii", 12, (-1.0, 1.0, 2.0)),
    ("theorem_iii", 14, (-2.0, 1.0, math.inf)),
    ("sine_band", 100, (0.0, 0.0, 0.0)),
]


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def run(n, repeat, seed=0):
    rng = np.random.default_rng(seed)
    u1 = rng.uniform(-6, 1, n)
    u2 = rng.uniform(-6, 1, n)
    t1 = rng.uniform(-1, 1, 64)
    t2 = rng.uniform(-1, 1, 64)
    swap = (0.0, 1.0, 1.0, 0.0)
    rows = []
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    for name, code, params in CASES:
        for bname, mod in backends:
            m1, m2 = np.exp(u1), np.exp(u2)
            rows.append((name, "shadow", bname,
                         _best(lambda: mod.shadow(code, params, u1, u2), repeat)))
            rows.append((name, "hinge_batch", bname,
                         _best(lambda: mod.hinge_batch(code, params, swap, t1, t2, u1[:4096],
                                                       u2[:4096]), repeat)))
            k = min(n, 20000)
            rows.append((name, "bisect", bname,
                         _best(lambda: mod.bisect(code, params, m1[:k] * 0, m2[:k] * 0,
                                                  m1[:k] * 50, m2[:k] * 50, 1e-12, 200), repeat)))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rows = run(args.n, args.repeat)
    table = {}
    for case, kernel, backend, t in rows:
        table.setdefault((case, kernel), {})[backend] = t
    print(f"{'case':<12} {'kernel':<12} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for (case, kernel), t in table.items():
        py, cy = t["python"], t.get("cython")
        cys = f"{cy * 1e3:10.2f}" if cy else f"{'n/a':>10}"
        sp = f"{py / cy:8.1f}" if cy else f"{'n/a':>8}"
        print(f"{case:<12} {kernel:<12} {py * 1e3:10.2f} {cys} {sp}")


if __name__ == "__main__":
    main()
