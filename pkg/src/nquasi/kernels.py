"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``NQUASI_PURE_PYTHON`` is set to a non-empty value, the
numpy/pure-Python fallback is used. Both backends return identical results.
"""

import os

from . import _pykernels

try:
    if os.environ.get("NQUASI_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _ckernels as _backend

    BACKEND = "cython"
except ImportError:
    _backend = _pykernels
    BACKEND = "python"

latin_violation = _backend.latin_violation
isotopy_search = _backend.isotopy_search


def available_backends():
    """Return the kernel modules importable in this environment, by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
