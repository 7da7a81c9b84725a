#!/usr/bin/env python3
"""Benchmark the compiled overlap kernel against the pure-Python fallback.

Runs the all-pairs overlap report on a planar layout (worst case: nothing
overlaps, so every candidate pair is examined) and on a self-overlapping
spiral layout, plus the incremental first-overlap search both backends use
inside overlap_radius.

    python benchmarks/bench_overlap.py [--radius 24] [--repeats 3]
"""

import argparse
import time

import numpy as np

from hexconf import ball, develop, linear_factor
from hexconf import _overlap_py
from hexconf.layout import _layout_arrays, _min_face_area

try:
    from hexconf import _overlap as _overlap_cy
except ImportError:
    _overlap_cy = None


def _arrays(m_slope, n_slope, radius):
    layout = develop(linear_factor(m_slope, n_slope, ball((0, 0), radius)))
    _, tris, keys = _layout_arrays(layout)
    return tris, keys, 1e-10 * _min_face_area(tris)


def _time(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--radius", type=int, default=24,
                        help="ball radius for the planar case")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    cases = [
        ("planar, R=%d" % args.radius, _arrays(0.0, 0.0, args.radius)),
        ("spiral at overlap radius", _arrays(0.2, 0.0, 7)),
    ]
    backends = [("python", _overlap_py)]
    if _overlap_cy is not None:
        backends.append(("cython", _overlap_cy))
    else:
        print("compiled kernel not available; showing the fallback only")

    for label, (tris, keys, threshold) in cases:
        print(f"\n== {label}: {len(tris)} faces ==")
        rows = {}
        for name, impl in backends:
            full, report = _time(lambda: impl.all_overlaps(tris, keys, threshold),
                                 args.repeats)
            thresholds = np.full(len(tris), threshold)
            first, _ = _time(
                lambda: impl.first_overlap_ordered(tris, keys, thresholds),
                args.repeats)
            rows[name] = (full, first)
            print(f"{name:>8}: all_overlaps {full * 1e3:9.2f} ms "
                  f"({len(report)} pairs), first_overlap {first * 1e3:9.2f} ms")
        if len(rows) == 2:
            speed_full = rows["python"][0] / rows["cython"][0]
            speed_first = rows["python"][1] / rows["cython"][1]
            print(f"{'speedup':>8}: all_overlaps {speed_full:8.1f}x, "
                  f"first_overlap {speed_first:8.1f}x")


if __name__ == "__main__":
    main()
