"""Select the compiled kernel module, falling back to pure Python.

Set ``QCLAB_PURE_PY=1`` to force the fallback (used by the backend parity
tests and the benchmark script).
"""
import os

if os.environ.get("QCLAB_PURE_PY"):
    from . import _core_py as kernels
else:
    try:
        from . import _core as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as kernels

COMPILED = bool(getattr(kernels, "COMPILED", False))


def backend_name() -> str:
    return "compiled" if COMPILED else "pure-python"
