"""Kernel backend chosen at import: compiled if available, numpy otherwise.

Set ``PNSFI_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python_backend

try:
    if os.environ.get("PNSFI_PURE_PYTHON", "").strip() not in ("", "0"):
        raise ImportError("compiled kernels disabled by PNSFI_PURE_PYTHON")
    from . import _ckernels as compiled_backend
except ImportError:
    compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

classify = _impl.classify
type_counts = _impl.type_counts
tally = _impl.tally
tally_paired = _impl.tally_paired
simulate_arms = _impl.simulate_arms
