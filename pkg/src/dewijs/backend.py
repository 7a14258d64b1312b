"""Sampling backend selection: compiled extension or pure-Python fallback.

The compiled kernels (dewijs._core, Cython) are used when importable; the
pure-Python module is a drop-in replacement producing bit-identical output.
Set DEWIJS_BACKEND=python or DEWIJS_BACKEND=compiled to force a choice;
forcing "compiled" raises if the extension is missing.
"""

import os
from concurrent.futures import ThreadPoolExecutor

from . import _sampling_py

try:
    from . import _core
except ImportError:  # pragma: no cover - build-dependent
    _core = None

_FORCED = os.environ.get("DEWIJS_BACKEND", "").strip().lower()
if _FORCED == "python":
    _impl = _sampling_py
elif _FORCED == "compiled":
    if _core is None:
        raise ImportError(
            "DEWIJS_BACKEND=compiled but dewijs._core is not built"
        )
    _impl = _core
else:
    _impl = _core if _core is not None else _sampling_py


def active_backend():
    return "compiled" if _impl is _core and _core is not None else "python"


def get_impl(name=None):
    """Return a kernel module: the active one, or 'python'/'compiled' by name."""
    if name is None:
        return _impl
    if name == "python":
        return _sampling_py
    if name == "compiled":
        if _core is None:
            raise ImportError("compiled backend is not available")
        return _core
    raise ValueError(f"unknown backend {name!r}")


def wos_angles(*args, **kwargs):
    return _impl.wos_angles(*args, **kwargs)


def euler_angles(*args, **kwargs):
    return _impl.euler_angles(*args, **kwargs)


def occupation_sums(*args, **kwargs):
    return _impl.occupation_sums(*args, **kwargs)


def run_per_worker(calls):
    """Run one zero-argument callable per worker, preserving order.

    Uses a thread pool when more than one worker is requested and the
    compiled kernels are active (they release the GIL); the combination
    order is by worker index either way, so results are deterministic.
    """
    if len(calls) == 1 or active_backend() != "compiled":
        return [call() for call in calls]
    with ThreadPoolExecutor(max_workers=len(calls)) as pool:
        futures = [pool.submit(call) for call in calls]
        return [f.result() for f in futures]
