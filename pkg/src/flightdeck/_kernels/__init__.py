"""Episode-simulation kernels: compiled extension with pure-Python fallback.

The compiled backend is selected automatically when present; set
``FLIGHTDECK_PURE_PYTHON=1`` to force the fallback.  Both backends implement
the same functions with identical arithmetic, so results are bit-equal (the
benchmark and the equivalence tests check this).
"""

import os


def _csim_available() -> bool:
    try:
        from . import _csim  # noqa: F401
    except ImportError:
        return False
    return True


def load_backend(name: str):
    """Return the kernel module for 'compiled' or 'python'."""
    if name == "compiled":
        from . import _csim

        return _csim
    if name == "python":
        from . import pysim

        return pysim
    raise ValueError(f"unknown kernel backend {name!r}")


if os.environ.get("FLIGHTDECK_PURE_PYTHON"):
    from . import pysim as _impl
else:
    try:
        from . import _csim as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pysim as _impl

BACKEND = _impl.BACKEND
episode_max_deviation = _impl.episode_max_deviation

__all__ = ["BACKEND", "episode_max_deviation", "load_backend"]
