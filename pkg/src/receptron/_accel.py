"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy/pure
Python fallback is used.  Set ``RECEPTRON_PURE_PYTHON=1`` to force the
fallback (the benchmark and the backend-parity tests rely on this).
"""

import os

from receptron import _fallback

if os.environ.get("RECEPTRON_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from receptron import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "python" if _impl is _fallback else "cython"

rect_complement_sum = _impl.rect_complement_sum
min_violations = _impl.min_violations
orbit_labels = _impl.orbit_labels
