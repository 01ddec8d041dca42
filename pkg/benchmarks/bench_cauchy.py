"""Benchmark: compiled Cauchy-sum kernel vs the numpy fallback.

Run after ``python setup.py build_ext --inplace`` (or an installed
build) to compare both backends on the portrait-sized workload, then on
an actual quarter-factor portrait.

    python benchmarks/bench_cauchy.py [--quick]
"""

import argparse
import sys
import time

import numpy as np

from qpdiff import _cauchy_numpy
from qpdiff._backend import BACKEND
from qpdiff.contour import contour_point, default_contour
from qpdiff.portrait import PortraitSpec, render

try:
    from qpdiff import _cauchy_core
except ImportError:
    _cauchy_core = None


def bench_kernel(n_nodes: int, n_targets: int, repeats: int = 3):
    rng = np.random.default_rng(42)
    nodes = rng.normal(size=n_nodes) + 1j * (rng.normal(size=n_nodes) - 4.0)
    coef_hi = rng.normal(size=n_nodes) + 1j * rng.normal(size=n_nodes)
    coef_lo = 0.5 * coef_hi
    targets = rng.normal(size=n_targets) * 6 + 1j * rng.normal(size=n_targets) * 6

    rows = []
    impls = [("numpy", _cauchy_numpy.cauchy_pair_sums)]
    if _cauchy_core is not None:
        impls.append(("compiled", _cauchy_core.cauchy_pair_sums))
    baseline = None
    for name, fn in impls:
        best = np.inf
        for _ in range(repeats):
            t0 = time.time()
            hi, lo = fn(nodes, coef_hi, coef_lo, targets)
            best = min(best, time.time() - t0)
        if baseline is None:
            baseline = (hi, lo)
            err = 0.0
        else:
            err = max(np.max(np.abs(hi - baseline[0])),
                      np.max(np.abs(lo - baseline[1])))
        rows.append((name, best, err))
    return rows


def bench_portrait(res: int):
    spec = default_contour(3.0)
    pspec = PortraitSpec(window=(-6, 6, -6, 6), resolution=(res, res),
                         function="k_pp",
                         params=(("k", 3.0),
                                 ("alpha1", contour_point(spec, 10.0))))
    t0 = time.time()
    render(pspec, contour=spec)
    return time.time() - t0


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="smaller workload")
    args = parser.parse_args(argv)

    n_nodes, n_targets, res = (1024, 20_000, 120) if args.quick \
        else (4096, 160_000, 400)
    print(f"active backend: {BACKEND}")
    print(f"kernel workload: {n_nodes} nodes x {n_targets} targets")
    rows = bench_kernel(n_nodes, n_targets)
    for name, secs, err in rows:
        print(f"  {name:10s} {secs:8.2f} s   max abs dev {err:.2e}")
    if len(rows) == 2 and rows[1][1] > 0:
        print(f"  speedup: {rows[0][1] / rows[1][1]:.1f}x")
    print(f"portrait k_pp {res}x{res} with active backend:")
    print(f"  {bench_portrait(res):8.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
