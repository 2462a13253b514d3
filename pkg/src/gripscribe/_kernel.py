"""Stepping-kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python kernel when the
extension is absent or when GRIPSCRIBE_PURE_PYTHON=1 is set (handy for
benchmarks and parity tests).  Both expose run_chain with identical semantics.
"""

import os

from . import _core_py

if os.environ.get("GRIPSCRIBE_PURE_PYTHON") == "1":
    _impl = _core_py
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _core_py

run_chain = _impl.run_chain
BACKEND = _impl.BACKEND


def available_backends():
    """Names of the kernel implementations importable in this install."""
    names = ["python"]
    try:
        from . import _core  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names
