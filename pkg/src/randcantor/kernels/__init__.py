"""Hot loops: counter-mode digit streams and lazy tree walks.

The compiled extension ``_ccore`` is used when it imports; otherwise the
pure-Python ``_pycore`` takes over with identical results. Setting the
environment variable ``RANDCANTOR_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pycore

if os.environ.get("RANDCANTOR_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pycore
else:
    try:
        from . import _ccore as _impl
    except ImportError:
        _impl = _pycore

BACKEND = _impl.BACKEND
MAX_DEPTH = _pycore.MAX_DEPTH

philox4x64 = _impl.philox4x64
digit = _impl.digit
digits = _impl.digits
hit_search = _impl.hit_search
level_hits = _impl.level_hits
preimage_mass = _impl.preimage_mass

# label-callback walkers exist only in Python; they serve materialized codes
hit_search_labels = _pycore.hit_search_labels
level_hits_labels = _pycore.level_hits_labels
preimage_mass_labels = _pycore.preimage_mass_labels

__all__ = [
    "BACKEND", "MAX_DEPTH", "philox4x64", "digit", "digits", "hit_search",
    "level_hits", "preimage_mass", "hit_search_labels", "level_hits_labels",
    "preimage_mass_labels",
]
