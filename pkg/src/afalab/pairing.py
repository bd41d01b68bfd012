"""Cantor pairing, the project-wide coding of pairs of naturals."""

from math import isqrt


def pair(x: int, y: int) -> int:
    """Return <x, y> = (x + y)(x + y + 1)/2 + y."""
    if x < 0 or y < 0:
        raise ValueError(f"pairing is defined on naturals, got ({x}, {y})")
    w = x + y
    return w * (w + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError(f"cannot unpair negative code {z}")
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y
