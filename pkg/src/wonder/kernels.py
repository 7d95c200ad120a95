"""Kernel backend selection.

The compiled extension is preferred; set ``WONDER_PURE_PYTHON=1`` to force
the pure-Python kernel (used by the benchmark to compare both).
"""

import os

if os.environ.get("WONDER_PURE_PYTHON"):
    from wonder._kernel_py import bareiss_echelon

    KERNEL_BACKEND = "python"
else:
    try:
        from wonder._kernel import bareiss_echelon

        KERNEL_BACKEND = "compiled"
    except ImportError:
        from wonder._kernel_py import bareiss_echelon

        KERNEL_BACKEND = "python"

__all__ = ["bareiss_echelon", "KERNEL_BACKEND"]
