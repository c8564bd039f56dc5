"""Kernel selection: compiled extension when built, pure Python otherwise.

Set HEXPLORE_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""
import os

if os.environ.get("HEXPLORE_PURE_PYTHON"):
    from ._pykernels import distance_field

    USING_COMPILED = False
else:
    try:
        from ._ckernels import distance_field

        USING_COMPILED = True
    except ImportError:
        from ._pykernels import distance_field

        USING_COMPILED = False

__all__ = ["distance_field", "USING_COMPILED"]
