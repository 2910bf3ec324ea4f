"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``EXPLICIT_MINIMIZERS_PURE_PYTHON`` is set to a
non-empty value other than ``0``, the numpy implementations are used.
"""

from __future__ import annotations

import os

from . import _kernels_py

_force_pure = os.environ.get("EXPLICIT_MINIMIZERS_PURE_PYTHON", "") not in ("", "0")

_impl = _kernels_py
if not _force_pure:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
angular_kernel = _impl.angular_kernel
pair_energy = _impl.pair_energy
pair_energy_grad = _impl.pair_energy_grad


def compiled_available() -> bool:
    try:
        from . import _ckernels  # noqa: F401
    except ImportError:
        return False
    return True
