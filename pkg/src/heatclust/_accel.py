"""Select the compiled kernels when available, else the pure-Python ones.

Set ``HEATCLUST_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if not os.environ.get("HEATCLUST_PURE_PYTHON"):
    try:
        from . import _core as _impl  # noqa: F811
    except ImportError:
        _impl = _fallback
    else:
        BACKEND = "cython"

pairwise_distances = _impl.pairwise_distances
neighbor_counts = _impl.neighbor_counts
radius_components = _impl.radius_components
pivoted_elimination = _impl.pivoted_elimination
