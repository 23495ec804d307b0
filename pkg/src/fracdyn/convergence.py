"""Observed convergence orders from error sequences on halving grids."""

from __future__ import annotations

import math
from collections.abc import Sequence

__all__ = ["observed_orders", "ROUNDOFF_FLOOR"]

# errors at or below this are treated as exact: their ratios carry no order
ROUNDOFF_FLOOR = 1e-10


def observed_orders(errors: Sequence[float], ratio: float = 2.0, floor: float = ROUNDOFF_FLOOR) -> list[float | None]:
    """``log(e_k / e_{k+1}) / log(ratio)`` for consecutive levels.

    ``None`` marks a pair where either error is at the roundoff floor.
    """
    out: list[float | None] = []
    for e0, e1 in zip(errors, errors[1:]):
        if e0 <= floor or e1 <= floor:
            out.append(None)
        else:
            out.append(math.log(e0 / e1) / math.log(ratio))
    return out
