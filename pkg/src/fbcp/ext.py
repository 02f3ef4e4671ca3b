"""Extended rationals: exact ``Fraction``/``int`` values plus an absorbing infinity."""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def fmt(x) -> str:
    """Render an extended rational as ``inf``, ``n`` or ``p/q``."""
    if is_inf(x):
        return "inf" if x > 0 else "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse(text: str):
    text = text.strip()
    if text in ("inf", "∞"):
        return INF
    return normalize(Fraction(text))


def normalize(x):
    """Integers stay integers, other rationals stay Fractions."""
    if is_inf(x):
        return INF
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def to_json(x):
    """JSON form: ints as numbers, other values as strings."""
    if is_inf(x):
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return fmt(x)
