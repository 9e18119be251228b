"""Rational-safe JSON helpers shared by the report types and the CLI."""

from fractions import Fraction

SCHEMA_VERSION = 1


def rat_to_json(q):
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def rat_from_json(obj):
    if isinstance(obj, dict):
        return Fraction(obj["num"], obj["den"])
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    raise ValueError(f"cannot read rational from {obj!r}")


def parse_rational(text):
    """Parse '2/3', '2', or '0.5' into an exact Fraction."""
    return Fraction(text)
