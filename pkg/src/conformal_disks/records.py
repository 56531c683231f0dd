"""Text records for maps, configurations, polynomials, distributions
and observables, plus the report/correlator lines the CLI prints.

Every record is a plain dict of JSON types.  ``dumps`` renders one record
per line with a fixed key order and compact separators so identical
inputs produce byte-identical output.  Exact scalars survive the round
trip: rationals are written as "p/q" strings, Gaussian rationals as a
pair of such strings, floats stay floats (shortest repr, which Python
parses back to the same bits).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .conformal import (
    Dilation,
    HolomorphicSeries,
    Mobius,
    Orthogonal,
    SpecialConformal,
    Translation,
    Word,
)
from .errors import RecordError
from .exact import GaussianRational
from .operad import DiskConfiguration, DiskEmbedding, make_configuration
from .polynomial import Polynomial

__all__ = [
    "dumps",
    "loads",
    "map_record",
    "parse_map",
    "config_record",
    "parse_config",
    "polynomial_record",
    "parse_polynomial",
    "distribution_record",
    "parse_distribution",
    "observable_record",
    "parse_observable",
    "correlator_record",
    "report_record",
]


# ---------------------------------------------------------------------------
# scalar codec
# ---------------------------------------------------------------------------


def scalar_record(c):
    """Encode an exact or floating scalar as a JSON value."""
    if isinstance(c, bool):
        raise RecordError("booleans are not scalars")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, GaussianRational):
        return [str(c.re), str(c.im)]
    if isinstance(c, float):
        return c
    if isinstance(c, complex):
        return [c.real, c.imag]
    raise RecordError(f"cannot encode scalar of type {type(c).__name__}")


def parse_scalar(v):
    if isinstance(v, bool):
        raise RecordError("booleans are not scalars")
    if isinstance(v, (int, float)):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise RecordError(f"bad rational literal {v!r}") from exc
    if isinstance(v, list) and len(v) == 2:
        if all(isinstance(x, str) for x in v):
            return GaussianRational(parse_scalar(v[0]), parse_scalar(v[1]))
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
            return complex(v[0], v[1])
    raise RecordError(f"cannot parse scalar {v!r}")


def _require(rec, key, kinds):
    if not isinstance(rec, dict) or key not in rec:
        raise RecordError(f"record is missing the {key!r} field")
    v = rec[key]
    if not isinstance(v, kinds) or isinstance(v, bool):
        raise RecordError(f"field {key!r} has the wrong type")
    return v


def _int_list(rec, key):
    v = _require(rec, key, list)
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise RecordError(f"field {key!r} must be a list of integers")
    return [int(x) for x in v]


# ---------------------------------------------------------------------------
# conformal maps
# ---------------------------------------------------------------------------

_GENERATORS = {
    "translation": lambda g: Translation(g["a"]),
    "orthogonal": lambda g: Orthogonal(g["matrix"]),
    "dilation": lambda g: Dilation(g["R"]),
    "special_conformal": lambda g: SpecialConformal(g["b"]),
}


def map_record(phi) -> dict:
    if isinstance(phi, DiskEmbedding):
        phi = phi.map
    if isinstance(phi, (Word, Mobius, HolomorphicSeries)):
        return phi.record()
    raise RecordError(f"cannot encode map of type {type(phi).__name__}")


def parse_map(rec: dict):
    if not isinstance(rec, dict):
        raise RecordError("map record must be an object")
    if "word" in rec:
        dim = _require(rec, "dim", int)
        gens = []
        for g in _require(rec, "word", list):
            kind = _require(g, "kind", str)
            if kind not in _GENERATORS:
                raise RecordError(f"unknown generator kind {kind!r}")
            try:
                gens.append(_GENERATORS[kind](g))
            except (KeyError, TypeError, ValueError) as exc:
                raise RecordError(f"bad {kind} generator record") from exc
        return Word(dim, gens)
    if "series" in rec:
        if _require(rec, "dim", int) != 2:
            raise RecordError("series maps exist only in dimension 2")
        coeffs = [complex(a, b) for a, b in _require(rec, "series", list)]
        return HolomorphicSeries(coeffs, radius=float(_require(rec, "radius", (int, float))))
    if "mobius" in rec:
        if _require(rec, "dim", int) != 2:
            raise RecordError("Mobius maps exist only in dimension 2")
        rows = _require(rec, "mobius", list)
        return Mobius([[complex(a, b) for a, b in row] for row in rows])
    raise RecordError("map record needs a 'word', 'series' or 'mobius' field")


# ---------------------------------------------------------------------------
# disk configurations
# ---------------------------------------------------------------------------


def config_record(cfg: DiskConfiguration) -> dict:
    rec = cfg.record()
    if cfg.arity == 0:
        rec["dim"] = cfg.dim  # empty configurations carry no maps to read it from
    return rec


def parse_config(rec: dict, dim: int | None = None) -> DiskConfiguration:
    arity = _require(rec, "arity", int)
    embeds = [DiskEmbedding(parse_map(r)) for r in _require(rec, "embeddings", list)]
    if len(embeds) != arity:
        raise RecordError("arity does not match the number of embeddings")
    if not embeds:
        dim = rec.get("dim", dim)
        if dim is None:
            raise RecordError("empty configuration record needs a 'dim' field")
    return make_configuration(embeds, dim=dim)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _term_record(alpha, c) -> dict:
    if isinstance(c, GaussianRational):
        den = c.re.denominator * c.im.denominator // math.gcd(
            c.re.denominator, c.im.denominator
        )
        num = [int(c.re.numerator * (den // c.re.denominator)),
               int(c.im.numerator * (den // c.im.denominator))]
    else:
        num, den = int(c.numerator), int(c.denominator)
    return {"alpha": list(alpha), "num": num, "den": den}


def polynomial_record(p: Polynomial) -> dict:
    terms = [_term_record(a, c) for a, c in sorted(p.coeffs.items())]
    return {"d": p.dim, "n": p.degree, "terms": terms}


def parse_polynomial(rec: dict) -> Polynomial:
    d = _require(rec, "d", int)
    coeffs = {}
    for t in _require(rec, "terms", list):
        alpha = tuple(_int_list(t, "alpha"))
        den = _require(t, "den", int)
        num = t.get("num")
        if isinstance(num, list):
            c = GaussianRational(Fraction(num[0], den), Fraction(num[1], den))
        elif isinstance(num, int) and not isinstance(num, bool):
            c = Fraction(num, den)
        else:
            raise RecordError("term field 'num' must be an integer or a pair")
        if alpha in coeffs:
            raise RecordError(f"duplicate multi-index {alpha}")
        coeffs[alpha] = c
    p = Polynomial(d, coeffs)
    if "n" in rec and p.degree != rec["n"] and not (p.is_zero() and rec["n"] in (-1, 0)):
        raise RecordError("stated degree does not match the terms")
    return p


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


def distribution_record(t) -> dict:
    rec: dict = {"d": t.dim}
    if t.points is not None:
        rec["points"] = [
            {
                "a": [str(x) for x in atom.center],
                "alpha": list(atom.alpha),
                "coef": scalar_record(atom.coef),
            }
            for atom in t.points
        ]
    else:
        # sequence-only distributions store the expansion itself
        seq = t.sequence
        rec["sequence"] = [polynomial_record(seq[n]) for n in sorted(seq)]
    if t.certificate is not None:
        rec["certificate"] = {"C": t.certificate[0], "rho": t.certificate[1]}
    rec["truncation"] = t.truncation
    return rec


def parse_distribution(rec: dict):
    from .distributions import HarmonicDistribution

    d = _require(rec, "d", int)
    points = None
    if "points" in rec:
        points = []
        for a in _require(rec, "points", list):
            center = tuple(parse_scalar(x) for x in _require(a, "a", list))
            if not all(isinstance(x, (int, Fraction)) for x in center):
                raise RecordError("atom centers must be exact rationals")
            if "coef" not in a:
                raise RecordError("atom record is missing the 'coef' field")
            points.append((center, tuple(_int_list(a, "alpha")), parse_scalar(a["coef"])))
    sequence = None
    if "sequence" in rec:
        sequence = {}
        for pr in _require(rec, "sequence", list):
            p = parse_polynomial(pr)
            sequence[p.degree] = p
    cert = None
    if rec.get("certificate") is not None:
        c = rec["certificate"]
        cert = (_require(c, "C", (int, float)), _require(c, "rho", (int, float)))
    trunc = rec.get("truncation")
    if points is None and sequence is None:
        raise RecordError("distribution record needs 'points' or 'sequence'")
    return HarmonicDistribution(
        d, points=points, sequence=sequence, certificate=cert, truncation=trunc
    )


# ---------------------------------------------------------------------------
# observables and results
# ---------------------------------------------------------------------------


def observable_record(f) -> dict:
    return {
        "d": f.dim,
        "terms": [
            {"coef": scalar_record(coef), "word": [distribution_record(t) for t in word]}
            for coef, word in f.terms
        ],
    }


def parse_observable(rec: dict):
    from .fock import Observable

    d = _require(rec, "d", int)
    terms = []
    for t in _require(rec, "terms", list):
        if "coef" not in t:
            raise RecordError("observable term is missing the 'coef' field")
        coef = parse_scalar(t["coef"])
        word = tuple(parse_distribution(r) for r in _require(t, "word", list))
        terms.append((coef, word))
    return Observable(d, terms)


def correlator_record(value, matchings: int) -> dict:
    return {"value": scalar_record(value), "matchings": int(matchings)}


def report_record(check: str, lhs, rhs, residual, tolerance, passed: bool) -> dict:
    return {
        "check": check,
        "lhs": _as_float(lhs),
        "rhs": _as_float(rhs),
        "residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(passed),
    }


def _as_float(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return float(v)


# ---------------------------------------------------------------------------
# line-oriented i/o
# ---------------------------------------------------------------------------


def dumps(rec: dict) -> str:
    """One record, one line, stable key order."""
    return json.dumps(rec, separators=(",", ":"), allow_nan=False)


def loads(line: str) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"invalid record: {exc}") from exc
    if not isinstance(rec, dict):
        raise RecordError("record must be a JSON object")
    return rec
