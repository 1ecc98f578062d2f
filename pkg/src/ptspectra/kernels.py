"""Select the shooting kernel: compiled if available, else pure Python.

Set PTSPECTRA_PURE_PYTHON=1 to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("PTSPECTRA_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import shoot, shoot_record
else:
    try:
        from ._kernels import shoot, shoot_record
        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import shoot, shoot_record

__all__ = ["BACKEND", "shoot", "shoot_record"]
