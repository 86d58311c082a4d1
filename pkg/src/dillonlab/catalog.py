"""Function families and seeded random corpora.

Random generation uses numpy's PCG64 bit generator (``np.random.Generator``
seeded with an integer), so a (family, parameters, seed) triple always
rebuilds the same table.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gf2n
from .errors import InvalidArguments, ParseError
from .vbf import (
    QuadraticAnf, from_anf, from_truth_table, from_univariate, moebius, read_anf, read_truth_table, restrict,
)

FAMILIES = ("gold", "x3_plus_tr_x9", "univariate", "truth-table", "anf", "random-quadratic")
_ALIASES = {
    "gold": "gold",
    "x3tr9": "x3_plus_tr_x9",
    "x3_plus_tr_x9": "x3_plus_tr_x9",
    "tt": "truth-table",
    "anf": "anf",
    "rand2": "random-quadratic",
    "uni": "univariate",
}


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def gold(n1, i, modulus=None):
    """X^(2^i + 1) over GF(2^n1)."""
    if n1 < 3 or not 1 <= i < n1:
        raise InvalidArguments(f"gold needs n1 >= 3 and 1 <= i < n1, got ({n1}, {i})")
    ctx = gf2n.make_field(n1, modulus)
    f = from_univariate(ctx, {(1 << i) + 1: 1})
    f.provenance.update({"family": "gold", "n1": n1, "i": i, "apn_expected": math.gcd(i, n1) == 1})
    return f


def x3_tr9(n1, modulus=None):
    """X^3 + Tr(X^9) over GF(2^n1); the trace bit is embedded as the field's 0 or 1."""
    if n1 < 3:
        raise InvalidArguments("x3_tr9 needs n1 >= 3")
    ctx = gf2n.make_field(n1, modulus)
    xs = gf2n.elements(ctx)
    cube = gf2n.power_array(ctx, xs, 3)
    tr = gf2n.trace_array(ctx, gf2n.power_array(ctx, xs, 9)).astype(np.uint64)
    f = from_truth_table(n1, n1, cube ^ tr, {"family": "x3_plus_tr_x9", "n1": n1, **ctx.describe()})
    return f


def restriction_basis(ctx, restriction):
    if restriction in ("t0", "trace-zero"):
        return gf2n.trace_zero_basis(ctx)
    return gf2n.hyperplane_basis(ctx, int(restriction))


@dataclass
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    restriction: object = None
    text: str = ""

    def build(self):
        return restricted(self)


def _field_of(f):
    n1 = f.provenance.get("n1", f.n)
    modulus = f.provenance.get("modulus")
    return gf2n.make_field(n1, int(modulus, 16) if modulus else None)


def _base(spec):
    p = spec.params
    modulus = p.get("modulus")
    if spec.family == "gold":
        i = p.get("i", 1)
        if math.gcd(i, p["n"]) != 1:
            warnings.warn(f"gold(n={p['n']}, i={i}) has gcd > 1 and is not APN", stacklevel=3)
        return gold(p["n"], i, modulus)
    if spec.family == "x3_plus_tr_x9":
        return x3_tr9(p["n"], modulus)
    if spec.family == "univariate":
        ctx = gf2n.make_field(p["n"], modulus)
        f = from_univariate(ctx, p["terms"])
        f.provenance["n1"] = p["n"]
        return f
    if spec.family == "truth-table":
        return read_truth_table(p["path"])
    if spec.family == "anf":
        return from_anf(read_anf(p["path"]), {"path": p["path"]})
    if spec.family == "random-quadratic":
        anf = random_quadratic(p["n"], p["m"], p.get("seed", 0), p.get("density"))
        return from_anf(anf, {"family": "random-quadratic", "n": p["n"], "m": p["m"],
                              "seed": p.get("seed", 0), "density": p.get("density")})
    raise InvalidArguments(f"unknown family {spec.family!r}")


def restricted(spec):
    """Build the base function and restrict it to the requested hyperplane, if any."""
    f = _base(spec)
    if spec.restriction is None:
        if spec.text:
            f.provenance["spec"] = spec.text
        return f
    if spec.family not in ("gold", "x3_plus_tr_x9", "univariate"):
        raise InvalidArguments("restriction needs a field-defined family")
    ctx = _field_of(f)
    g = restrict(f, restriction_basis(ctx, spec.restriction))
    g.provenance["restriction"] = "t0" if spec.restriction in ("t0", "trace-zero") else hex(int(spec.restriction))
    if spec.text:
        g.provenance["spec"] = spec.text
    return g


def _int(v):
    return int(v, 0)


def parse_spec(text, modulus=None):
    """Parse "gold:n=9,i=1[,restrict=t0]", "x3tr9:n=9", "tt:<path>", "anf:<path>",
    "rand2:n=6,m=8,seed=42" or "uni:n=5,terms=3:1;5:2"."""
    if ":" not in text:
        raise ParseError(f"family spec {text!r} lacks a ':'")
    head, rest = text.split(":", 1)
    family = _ALIASES.get(head)
    if family is None:
        raise ParseError(f"unknown family {head!r}")
    if family in ("truth-table", "anf"):
        return FamilySpec(family, {"path": rest}, None, text)
    params, restriction = {}, None
    for item in filter(None, rest.split(",")):
        if "=" not in item:
            raise ParseError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        try:
            if k == "restrict":
                restriction = "t0" if v in ("t0", "trace-zero") else _int(v)
            elif k == "terms":
                terms = {}
                for t in v.split(";"):
                    e, _, c = t.partition(":")
                    terms[_int(e)] = _int(c) if c else 1
                params["terms"] = terms
            elif k == "density":
                params[k] = float(v)
            elif k in ("n", "m", "i", "seed", "modulus"):
                params[k] = _int(v)
            else:
                raise ParseError(f"unknown parameter {k!r}")
        except ValueError:
            raise ParseError(f"bad value in {item!r}") from None
    if modulus is not None and "modulus" not in params:
        params["modulus"] = modulus
    required = {"gold": ("n",), "x3_plus_tr_x9": ("n",), "univariate": ("n", "terms"),
                "random-quadratic": ("n", "m")}[family]
    for k in required:
        if k not in params:
            raise ParseError(f"{head} spec needs {k}=")
    if restriction is not None and restriction != "t0" and restriction == 0:
        raise ParseError("hyperplane alpha must be nonzero")
    return FamilySpec(family, params, restriction, text)


def build(text, modulus=None):
    return parse_spec(text, modulus).build()


def random_quadratic(n, m, seed=0, density=None):
    """Random quadratic ANF with a_0 = 0.

    Each a_{i,j} and a_k is uniform on F_2^m; with ``density`` each one is
    instead nonzero with that probability (uniform over nonzero words).
    """
    if n < 2:
        raise InvalidArguments("random_quadratic needs n >= 2")
    rng = rng_for(seed)
    pairs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]

    def draw(k):
        if density is None:
            return [int(c) for c in rng.integers(0, 1 << m, size=k)]
        on = rng.random(k) < density
        vals = rng.integers(1, 1 << m, size=k)
        return [int(c) if o else 0 for c, o in zip(vals, on)]

    quad = dict(zip(pairs, draw(len(pairs))))
    lin = draw(n)
    return QuadraticAnf(n, m, quad, tuple(lin), 0)


def random_cubic(n, m, rng):
    """Random ANF of degree <= 3 (dense), as a truth table."""
    coeffs = np.zeros(1 << n, dtype=np.uint64)
    for idx in range(1 << n):
        if bin(idx).count("1") <= 3:
            coeffs[idx] = rng.integers(0, 1 << m)
    return from_truth_table(n, m, moebius(coeffs), {"family": "random-cubic"})


def random_table(n, m, rng):
    return from_truth_table(n, m, rng.integers(0, 1 << m, size=1 << n), {"family": "random-table"})


def corpus(size=500, seed=2024, max_n=6, max_m=8):
    """Mixed corpus for cross-validation: quadratics, cubics, random tables,
    Gold maps and their hyperplane restrictions."""
    rng = rng_for(seed)
    out = []
    for n1 in range(3, max_n + 2):
        if n1 > max_m:
            break
        for i in range(1, n1):
            if n1 <= max_n:
                out.append(gold(n1, i))
            g = restrict(gold(n1, i), gf2n.trace_zero_basis(gf2n.make_field(n1)))
            g.provenance["restriction"] = "t0"
            out.append(g)
        if n1 <= max_n:
            out.append(x3_tr9(n1))
        if n1 >= 4:
            ctx = gf2n.make_field(n1)
            for alpha in (2, 3):
                g = restrict(gold(n1, 1), gf2n.hyperplane_basis(ctx, alpha))
                g.provenance["restriction"] = hex(alpha)
                out.append(g)
    k = 0
    while len(out) < size:
        n = int(rng.integers(2, max_n + 1))
        m = int(rng.integers(1, max_m + 1))
        kind = k % 4
        if kind in (0, 1):
            density = None if kind == 0 else float(rng.choice([0.2, 0.5]))
            s = int(rng.integers(0, 2**31))
            anf = random_quadratic(n, m, s, density)
            out.append(from_anf(anf, {"family": "random-quadratic", "seed": s, "density": density}))
        elif kind == 2:
            out.append(random_cubic(n, m, rng))
        else:
            out.append(random_table(n, m, rng))
        k += 1
    return out
