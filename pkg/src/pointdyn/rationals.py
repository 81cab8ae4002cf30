"""Exact rational scalars and their wire format.

Every quantity in this package is a `fractions.Fraction`; floats never
appear in core computations. The wire format is "p/q" with an explicit
denominator, also for integers ("0/1", "2/1"), so that serialized
reports are canonical.
"""

from fractions import Fraction

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class RationalFormatError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or a bare integer string into an exact rational."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise RationalFormatError(f"not a rational: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def as_rational(value) -> Fraction:
    """Coerce int / Fraction / "p/q" string; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise RationalFormatError(f"exact rational required, got {type(value).__name__}")


def dyadic_below(q: Fraction) -> Fraction:
    """Largest power of two 1/2^k strictly below q (q > 0)."""
    if q <= 0:
        raise ValueError("need a positive bound")
    step = ONE
    while step >= q:
        step /= 2
    return step
