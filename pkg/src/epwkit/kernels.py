"""Backend selection for the mod-p elimination kernels.

The compiled Cython module is used when it was built; otherwise the numpy
fallback is loaded. Set ``EPWKIT_KERNELS=python`` to force the fallback.
"""
from __future__ import annotations

import os

if os.environ.get("EPWKIT_KERNELS", "").lower() == "python":
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND: str = _impl.BACKEND
rref_mod_p = _impl.rref_mod_p
rank_mod_p = _impl.rank_mod_p
batch_rank_mod_p = _impl.batch_rank_mod_p


def backends() -> dict:
    """Every importable backend module keyed by name (used by tests and benchmarks)."""
    from . import _pykernels

    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
