"""Exact JSON round-trips for series, connections, opers and reports.

Every rational is written as a [numerator, denominator] pair and every
tower coefficient through the tower's own representation, so a load
followed by a dump reproduces the original file byte for byte (keys are
emitted in fixed order and the term lists are sorted by exponent).
"""

import json
from fractions import Fraction

from .chevalley import build_algebra
from .connection import FormalConnection
from .errors import UnsupportedConnectionError
from .opers import OperForm
from .series import LaurentSeries
from .scalars import tower_from_description

SCHEMA = 1


def _frac_pair(q):
    q = Fraction(q)
    return [q.numerator, q.denominator]


def _pair_frac(obj):
    return Fraction(obj[0], obj[1])


def series_to_json(s: LaurentSeries) -> dict:
    terms = [
        {"e": _frac_pair(e), "c": s.tower.rep_to_json(c)} for e, c in s.terms()
    ]
    return {
        "tower": s.tower.describe(),
        "ram": s.ram,
        "trunc": None if s.trunc_order() is None else _frac_pair(s.trunc_order()),
        "terms": terms,
    }


def series_from_json(obj) -> LaurentSeries:
    tower = tower_from_description(obj.get("tower", {"kind": "rational"}))
    terms = [
        (_pair_frac(t["e"]), tower.rep_from_json(t["c"])) for t in obj["terms"]
    ]
    trunc = None if obj.get("trunc") is None else _pair_frac(obj["trunc"])
    return LaurentSeries.from_terms(tower, terms, trunc)


def _key_to_str(key) -> str:
    kind, payload = key
    if kind == "h":
        return "h:%d" % payload
    return "e:" + ",".join(str(x) for x in payload)


def _str_to_key(s: str):
    kind, payload = s.split(":", 1)
    if kind == "h":
        return ("h", int(payload))
    return ("e", tuple(int(x) for x in payload.split(",")))


def connection_to_json(conn: FormalConnection, rep_which=None) -> dict:
    """Matrix plus, for structured connections, the algebra-valued form.

    The matrix alone supports every invariant computation; the form block
    is what allows a reloaded connection to be gauged and canonicalized.
    """
    out = {"schema": SCHEMA, "coord": conn.variable}
    if conn.structured:
        from .connection import default_representation

        which = rep_which or default_representation(conn.algebra)
        mat = conn.matrix(which)
        out["rep"] = {
            "algebra": conn.algebra.name,
            "which": which,
            "dim": len(mat),
        }
        out["algebra"] = conn.algebra.name
        out["form"] = {
            _key_to_str(k): series_to_json(s)
            for k, s in sorted(conn.form.items(), key=lambda kv: _key_to_str(kv[0]))
        }
    else:
        mat = conn.matrix()
        out["rep"] = {"dim": len(mat)}
    out["matrix"] = [[series_to_json(x) for x in row] for row in mat]
    return out


def connection_from_json(obj) -> FormalConnection:
    coord = obj.get("coord", "t")
    if coord == "global":
        coord = "t"
    if "form" in obj and "algebra" in obj:
        alg = build_algebra(obj["algebra"])
        form = {
            _str_to_key(k): series_from_json(v) for k, v in obj["form"].items()
        }
        return FormalConnection(variable=coord, algebra=alg, form=form)
    if "matrix" not in obj:
        kind = "a canonical form" if "v" in obj else "no connection data"
        raise UnsupportedConnectionError(
            "file holds %s; expected a connection with a matrix block" % kind)
    matrix = [[series_from_json(x) for x in row] for row in obj["matrix"]]
    return FormalConnection(variable=coord, matrix=matrix)


def oper_to_json(oper: OperForm) -> dict:
    return {
        "schema": SCHEMA,
        "type": oper.algebra.rs.letter,
        "rank": oper.algebra.rank,
        "coord": oper.variable,
        "v": [series_to_json(s) for s in oper.coefficients],
    }


def oper_from_json(obj) -> OperForm:
    alg = build_algebra((obj["type"], obj["rank"]))
    coeffs = [series_from_json(s) for s in obj["v"]]
    return OperForm(alg, coeffs, variable=obj.get("coord", "t"))


def jsonable(value):
    """Rationals become 'p/q' strings; containers recurse; scalars pass.

    Used for report witness data, where readability matters more than
    reconstruction (reports are outputs, never inputs).
    """
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


def dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def load(path):
    with open(path) as fh:
        return json.load(fh)
