"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when
``REVPERIM_PURE_PYTHON`` is set to a non-empty value, the numpy versions are used.
``BACKEND`` names the active implementation.
"""
import os

from . import _kernels_py

if os.environ.get("REVPERIM_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

radial_points = _impl.radial_points
polygon_eval = _impl.polygon_eval
scan_disk_grid = _impl.scan_disk_grid

__all__ = ["BACKEND", "radial_points", "polygon_eval", "scan_disk_grid"]
