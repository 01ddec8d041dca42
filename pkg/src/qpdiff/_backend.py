"""Import-time selection of the multi-target Cauchy-sum kernel.

The compiled extension is optional: it is built by ``pip install`` when
a C toolchain is available (or by ``python setup.py build_ext
--inplace``), and the numpy fallback keeps every feature working
without it.  ``BACKEND`` records which implementation is active;
``benchmarks/bench_cauchy.py`` compares the two.
"""

from __future__ import annotations

try:
    from ._cauchy_core import cauchy_pair_sums

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    from ._cauchy_numpy import cauchy_pair_sums

    BACKEND = "numpy"

__all__ = ["cauchy_pair_sums", "BACKEND"]
