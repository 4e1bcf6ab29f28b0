"""Canonical JSON encoding for exact values.

Big integers serialize as decimal strings and rationals as "p/q" (or "p" when
integral) so artifacts survive hosts without bignums.  Dumps are key-sorted
with fixed separators: identical payloads give byte-identical files.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction


def rat_str(x) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)  # Fraction accepts both "p" and "p/q"
    raise ValueError(f"cannot parse rational from {s!r}")


def int_str(x: int) -> str:
    return str(int(x))


def parse_int(s) -> int:
    if isinstance(s, bool):
        raise ValueError("expected integer, got bool")
    if isinstance(s, int):
        return s
    return int(str(s), 10)


def int_list(xs) -> list:
    return [int_str(x) for x in xs]


def parse_int_list(xs) -> tuple:
    return tuple(parse_int(x) for x in xs)


def canonical_dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def write_artifact(path, payload: dict) -> None:
    """Write canonical JSON to `path`, or stdout when path is None/'-'."""
    text = canonical_dumps(payload)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_json(path) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
