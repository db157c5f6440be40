"""Counting kernels: compiled extension when available, pure Python otherwise.

Set FO2KC_PURE=1 to force the pure backend (used by the kernel benchmark).
"""

import os

from . import pure as _pure

if os.environ.get("FO2KC_PURE"):
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _fastcount as _impl

        BACKEND = "c"
    except ImportError:
        _impl = _pure
        BACKEND = "python"


def count_sat(code, nvars):
    return _impl.count_sat(code, nvars)


def enum_sat(code, nvars, limit):
    return _impl.enum_sat(code, nvars, limit)
