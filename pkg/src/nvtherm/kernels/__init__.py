"""Numerical kernel backend selection.

The compiled extension (``nvtherm.kernels._ext``) is preferred when it
imports; otherwise the NumPy fallback (``nvtherm.kernels.pure``) is used.
Set ``NVTHERM_KERNELS=pure`` or ``NVTHERM_KERNELS=ext`` to force a backend;
forcing ``ext`` raises if the extension is unavailable.
"""

import os

from . import pure

_requested = os.environ.get("NVTHERM_KERNELS", "").strip().lower()
if _requested == "pure":
    _impl = pure
else:
    try:
        from . import _ext as _impl
    except ImportError:
        if _requested == "ext":
            raise
        _impl = pure

BACKEND = _impl.BACKEND
lorentz_mixture = _impl.lorentz_mixture
lorentz_mixture_jacobian = _impl.lorentz_mixture_jacobian
odmr_profile = _impl.odmr_profile
odmr_profile_jacobian = _impl.odmr_profile_jacobian
jacobi_eigh = _impl.jacobi_eigh


def backend_name():
    """Name of the active kernel backend, ``"ext"`` or ``"pure"``."""
    return BACKEND
