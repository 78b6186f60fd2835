"""Backend selection for the integer kernels.

The compiled extension is used when it imports; ``STABWALL_PURE=1`` forces
the Python reference. Inputs whose intermediate values could overflow 64-bit
integers always go to the Python version.
"""

from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if os.environ.get("STABWALL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined, no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _fits_int64(parent: list[int], cubics: list[list[int]], shift: int) -> bool:
    # |S|,|P| <= B; |W| <= 24 B^2; the two Taylor shifts grow it by at most (|shift|+2)^5 * 2^5
    b = max(abs(c) for row in cubics for c in row) * (sum(parent) + 1)
    return 24 * b * b * (abs(shift) + 2) ** 5 * 32 < 2**62


def closed_subsets(succ: list[int]) -> list[int]:
    """Sorted bitmasks of successor-closed vertex sets."""
    if _compiled is not None and len(succ) <= 62:
        return sorted(_compiled.closed_subsets(list(succ)))
    return sorted(_kernels_py.closed_subsets(succ))


def box_wall_screen(parent: list[int], cubics: list[list[int]], shift: int) -> list[tuple]:
    if _compiled is not None and _fits_int64(parent, cubics, shift):
        return list(_compiled.box_wall_screen(list(parent), [list(r) for r in cubics], shift))
    return _kernels_py.box_wall_screen(parent, cubics, shift)
