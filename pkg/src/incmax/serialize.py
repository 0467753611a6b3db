"""Number parsing and artifact formatting.

Exact quantities travel as fraction strings ("17/40"), floats as their
shortest round-trip decimal form.  Every artifact writer in the package
funnels through :func:`format_number` so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from typing import Iterable, Sequence, Union

Num = Union[int, float, Fraction]


def exact(*values) -> bool:
    """True when every operand is an int or Fraction (no rounding anywhere)."""
    return all(isinstance(v, (int, Fraction)) for v in values)


def div(x: Num, y: Num) -> Num:
    """x / y, as an exact Fraction whenever both operands are exact."""
    if exact(x, y):
        return Fraction(x) / Fraction(y)
    return x / y


def ge(a: Num, b: Num, tol: float = 1e-12) -> bool:
    """a >= b, exactly for exact operands, else with relative slack."""
    if exact(a, b):
        return a >= b
    if a == float("inf"):
        return True
    return a >= b - tol * max(1.0, abs(a), abs(b))


def gt(a: Num, b: Num, tol: float = 1e-12) -> bool:
    """a > b with the same exact/tolerant split as ge()."""
    if exact(a, b):
        return a > b
    if a == float("inf"):
        return True
    return a > b - tol * max(1.0, abs(a), abs(b))


def is_close(a: Num, b: Num, tol: float = 1e-12) -> bool:
    if exact(a, b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def parse_number(raw) -> Num:
    """Turn a JSON scalar into a number, keeping exactness where offered.

    Strings with a slash are exact fractions and bare digit strings are
    ints; anything with a decimal point or exponent is a float, so a
    formatted float comes back bit for bit rather than silently promoted
    to the fraction its decimal digits happen to spell.
    """
    if isinstance(raw, bool):
        raise ValueError(f"not a number: {raw!r}")
    if isinstance(raw, (int, float)):
        return raw
    if isinstance(raw, str):
        text = raw.strip()
        if text in ("inf", "-inf"):
            return float(text)
        if "/" in text:
            frac = Fraction(text)
            return int(frac) if frac.denominator == 1 else frac
        if any(ch in text for ch in ".eE"):
            return float(text)
        return int(text)
    raise ValueError(f"not a number: {raw!r}")


def format_number(x: Num) -> str:
    """Shortest faithful text form: ints bare, fractions as p/q, floats via repr."""
    if isinstance(x, bool):
        raise ValueError(f"not a number: {x!r}")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if x == float("inf"):
            return "inf"
        if x == float("-inf"):
            return "-inf"
        return repr(x)
    raise ValueError(f"not a number: {x!r}")


def format_cell(x) -> str:
    if isinstance(x, str):
        return x
    return format_number(x)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write rows with the shared number formatting, one header line first."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])


def write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
