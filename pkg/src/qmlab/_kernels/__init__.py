"""Kernel backend selection.

The compiled extension is preferred; set ``QMLAB_PURE_PYTHON=1`` to force the
fallback (used by the backend-equivalence tests and the benchmark).
"""
import os

if os.environ.get("QMLAB_PURE_PYTHON"):
    from ._pure import dijkstra_csr, triangle_scan

    BACKEND = "pure"
else:
    try:
        from ._core import dijkstra_csr, triangle_scan

        BACKEND = "cython"
    except ImportError:
        from ._pure import dijkstra_csr, triangle_scan

        BACKEND = "pure"

__all__ = ["dijkstra_csr", "triangle_scan", "BACKEND"]
