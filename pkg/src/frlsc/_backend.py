"""Backend selection: compiled extension if importable, numpy fallback otherwise.

Set FRLSC_BACKEND=python (or =compiled) to force a choice; forcing the
compiled backend raises if the extension was not built.
"""

import os

from . import _kernels_py

_forced = os.environ.get("FRLSC_BACKEND", "").lower()

if _forced == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl
        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _kernels_py
        BACKEND = "python"

pairwise_sqdist = _impl.pairwise_sqdist
cross_sqdist = _impl.cross_sqdist
apply_exp_kernel = _impl.apply_exp_kernel
