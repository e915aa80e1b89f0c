"""Kernel backend selection: compiled extension if available, else pure Python.

Set the environment variable ``PHOTONSTAT_PURE_PYTHON=1`` before import to
force the fallback (useful for benchmarking and debugging).
"""

import os

if os.environ.get("PHOTONSTAT_PURE_PYTHON"):
    from . import _pykernels as _impl

    USING_COMPILED = False
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        USING_COMPILED = True
    except ImportError:
        from . import _pykernels as _impl

        USING_COMPILED = False

ladder_sums = _impl.ladder_sums
