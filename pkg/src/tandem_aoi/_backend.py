"""Import-time selection of the simulation kernel.

The compiled extension is preferred when it imported cleanly; otherwise
the pure-Python mirror takes over (identical results, roughly an order
of magnitude slower).  Set TANDEM_AOI_KERNEL=python or =compiled to
force a choice, e.g. for the parity tests and the benchmark.
"""

from __future__ import annotations

import os

from . import _kernel_py

try:
    from . import _kernel  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build environment
    _kernel = None

_BY_NAME = {"python": _kernel_py}
if _kernel is not None:
    _BY_NAME["compiled"] = _kernel

DEFAULT = os.environ.get("TANDEM_AOI_KERNEL", "").strip().lower() or (
    "compiled" if _kernel is not None else "python"
)


def available() -> tuple[str, ...]:
    return tuple(sorted(_BY_NAME))


def get_kernel(name: str | None = None):
    """Resolve a kernel by name; None means the import-time default.

    Returns (run_callable, resolved_name).
    """
    resolved = (name or DEFAULT).strip().lower()
    if resolved not in _BY_NAME:
        raise ValueError(
            f"unknown or unavailable kernel {resolved!r}; have {available()}"
        )
    return _BY_NAME[resolved].run, resolved
