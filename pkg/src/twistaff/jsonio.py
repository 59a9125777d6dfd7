"""JSON encoding shared by the CLI and the serialization round-trip tests.

Rationals travel as strings "p/q" in lowest terms; cyclotomic scalars as
{"conductor": L, "coeffs": [...]} in the power basis; matrices as nested
row lists.  Every report carries a "schema": "v1" marker.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from .cyclo import Cyc


def frac_str(q) -> str:
    return str(Fraction(q))


def cyc_to_json(c: Cyc) -> dict:
    return {"conductor": c.L, "coeffs": [str(Fraction(n, c.den)) for n in c.num]}


def cyc_from_json(obj) -> Cyc:
    L = int(obj["conductor"])
    fracs = [Fraction(x) for x in obj["coeffs"]]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    return Cyc(L, tuple(int(f * den) for f in fracs), den)


def mat_to_json(m) -> list:
    return [[cyc_to_json(c) for c in row] for row in m]


def mat_from_json(rows, L: int | None = None):
    out = tuple(tuple(cyc_from_json(c) for c in row) for row in rows)
    if L is not None:
        out = tuple(tuple(c.lift(L) if c.L != L else c for c in row) for row in out)
    return out


def element_to_json(a) -> dict:
    """DoubleExtElement as {"z": ..., "modes": {...}, "t": ...}."""
    return {
        "z": cyc_to_json(a.z),
        "modes": {str(n): mat_to_json(m) for n, m in a.loop.terms},
        "t": cyc_to_json(a.t),
    }


def element_from_json(obj):
    from .loopalg import DoubleExtElement, LoopElement

    z = cyc_from_json(obj["z"])
    terms = tuple((int(n), mat_from_json(m, z.L)) for n, m in obj.get("modes", {}).items())
    return DoubleExtElement(z, LoopElement(terms), cyc_from_json(obj["t"]))


def dump_report(obj, path=None) -> str:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
