"""Exact number parsing and canonical decimal formatting."""

from fractions import Fraction
from numbers import Rational


def to_fraction(value):
    """Convert an int, float, decimal string or Fraction to an exact Fraction.

    Floats go through ``repr`` so ``0.1`` becomes ``1/10`` rather than the
    binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite number {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and friends
    return to_fraction(value.item()) if hasattr(value, "item") else Fraction(value)


def _terminating(q):
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    return d == 1, max(twos, fives)


def _exact_decimal(q, places):
    sign = "-" if q < 0 else ""
    scaled = abs(q.numerator) * (10**places // q.denominator)
    digits = str(scaled).rjust(places + 1, "0")
    head, tail = digits[:-places], digits[-places:].rstrip("0")
    return f"{sign}{head}.{tail}" if tail else f"{sign}{head}"


def format_number(value):
    """Canonical text for a number.

    Integers print bare, terminating rationals print as their exact decimal,
    anything else prints as the shortest float repr rewritten without an
    exponent.  Parsing the output with :func:`to_fraction` and formatting again
    gives the same string.
    """
    q = to_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    ok, places = _terminating(q)
    if not ok:
        q = Fraction(repr(float(q)))
        if q.denominator == 1:
            return str(q.numerator)
        ok, places = _terminating(q)
    return _exact_decimal(q, places)
