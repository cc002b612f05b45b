"""Backend selection for the hot loop.

The compiled extension is used when it imports; set ``CAVITYWALK_BACKEND=python``
to force the numpy fallback.
"""

import os

from . import _purepy

BACKEND = "python"
delocalization_series = _purepy.delocalization_series

if os.environ.get("CAVITYWALK_BACKEND", "").lower() != "python":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        delocalization_series = _kernels.delocalization_series


def available_backends():
    """Map backend name to kernel for every backend importable here."""
    out = {"python": _purepy.delocalization_series}
    try:
        from . import _kernels
    except ImportError:
        return out
    out["cython"] = _kernels.delocalization_series
    return out
