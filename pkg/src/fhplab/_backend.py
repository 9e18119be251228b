"""Kernel backend selection, done once at import.

The compiled extension is preferred when present.  Set FHPLAB_BACKEND=python
to force the pure fallback (useful for benchmarks and equivalence tests), or
FHPLAB_BACKEND=cython to fail loudly when the extension is missing.
"""

import os

_requested = os.environ.get("FHPLAB_BACKEND", "").strip().lower()

if _requested == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _kernels_py as _impl

        BACKEND = "python"

count_intersecting_pairs = _impl.count_intersecting_pairs
count_intersecting_triples = _impl.count_intersecting_triples
count_intersecting_k = _impl.count_intersecting_k
depth_counts = _impl.depth_counts
