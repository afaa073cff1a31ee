"""Kernel selection: compiled extension when importable, numpy otherwise.

Set ``PERMUC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _tabu_py

if os.environ.get("PERMUC_PURE_PYTHON"):
    _impl = _tabu_py
else:
    try:
        from . import _tabu as _impl
    except ImportError:  # extension not built
        _impl = _tabu_py

BACKEND = "cython" if _impl is not _tabu_py else "python"
tabu_search = _impl.tabu_search
qap_cost = _impl.qap_cost
