"""Evaluation kernels with a compiled fast path.

The Cython extension (delaymargin._kernels._core) is used when it was built;
otherwise the NumPy implementation is selected. Both expose the same
array-in/array-out functions, and `backend_name()` reports which one is live.
benchmarks/bench_kernels.py compares the two.
"""

try:
    from . import _core as _impl
except ImportError:  # extension not built on this platform
    from . import _numpy as _impl

from . import _numpy

logmag = _impl.logmag
logmag_d1 = _impl.logmag_d1
logmag_d2 = _impl.logmag_d2
argsum = _impl.argsum
argsum_d1 = _impl.argsum_d1
argsum_d2 = _impl.argsum_d2
rational_eval = _impl.rational_eval
charfun = _impl.charfun


def backend_name():
    return _impl.BACKEND


__all__ = [
    "argsum",
    "argsum_d1",
    "argsum_d2",
    "backend_name",
    "charfun",
    "logmag",
    "logmag_d1",
    "logmag_d2",
    "rational_eval",
]
