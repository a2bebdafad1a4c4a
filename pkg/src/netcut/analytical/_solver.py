"""Backend selection for the SMO kernel.

Prefers the compiled extension when it imported cleanly; falls back to the
numpy implementation otherwise. ``NETCUT_SMO_BACKEND=python`` forces the
fallback (useful for benchmarking and parity tests).
"""

from __future__ import annotations

import os

from . import _smo_py

try:
    from . import _smo_core
except ImportError:
    _smo_core = None

if _smo_core is not None and os.environ.get("NETCUT_SMO_BACKEND") != "python":
    _impl = _smo_core
else:
    _impl = _smo_py

BACKEND: str = _impl.BACKEND
solve = _impl.solve
