"""Hilbert space-filling curve index mapping for square sub-grids.

The curve places consecutive indices in 4-neighbor-adjacent cells, so
items that are close in a linear order stay close in the grid.
"""

from __future__ import annotations

import math


def side_length(order: int) -> int:
    """Grid side for a curve of the given order (2**order)."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    return 1 << order


def d2xy(order: int, d: int) -> tuple[int, int]:
    """Map curve index d to a (col, row) cell of the 2**order square grid.

    Iterated rotate-and-offset construction; orientation is fixed so that
    d = 0 maps to (0, 0) and, for order 1, the sequence 0..3 visits
    (0,0), (0,1), (1,1), (1,0).
    """
    side = side_length(order)
    if not 0 <= d < side * side:
        raise ValueError(f"index {d} out of range for order {order}")
    x = y = 0
    t = d
    s = 1
    while s < side:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        x, y = _rotate(s, x, y, rx, ry)
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return x, y


def xy2d(order: int, x: int, y: int) -> int:
    """Inverse of :func:`d2xy`."""
    side = side_length(order)
    if not (0 <= x < side and 0 <= y < side):
        raise ValueError(f"cell ({x}, {y}) out of range for order {order}")
    d = 0
    s = side // 2
    while s > 0:
        rx = 1 if (x & s) > 0 else 0
        ry = 1 if (y & s) > 0 else 0
        d += s * s * ((3 * rx) ^ ry)
        x, y = _rotate(s, x, y, rx, ry)
        s //= 2
    return d


def _rotate(s: int, x: int, y: int, rx: int, ry: int) -> tuple[int, int]:
    if ry == 0:
        if rx == 1:
            x = s - 1 - x
            y = s - 1 - y
        x, y = y, x
    return x, y


def subgrid_order(n_items: int) -> int:
    """Smallest curve order whose grid holds n_items cells.

    ceil(log2(ceil(sqrt(n)))), clamped to 1 because the order must be a
    positive integer; trailing cells stay empty when n is not 4**order.
    """
    if n_items < 1:
        raise ValueError("need at least one item")
    side = math.isqrt(n_items - 1) + 1  # ceil(sqrt(n))
    return max(1, (side - 1).bit_length())
