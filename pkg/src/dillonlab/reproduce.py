"""Named reproduction experiments.

Each experiment returns a list of Claim records; an experiment passes when
every claim does. Runtime budgets are claims too.
"""
import math
import time
from dataclasses import dataclass

import numpy as np

from . import catalog, gf2n, spectra
from .dproperty import (
    applicable_methods, check_d, d_check_bruteforce, d_check_hyperplane_quadratic, d_check_plateaued,
    dimension_bounds, omega_report, replay_witnesses, verify_moment_identities, walsh_moment,
)
from .errors import InvalidArguments
from .vbf import from_anf, from_truth_table, is_quadratic, restrict

SLOW = ("extension-17",)

# hand-evaluated floor(log2(|AFF_{2,n}| + 1)) and 2n - 3
GENERAL_BOUNDS = {3: 3, 4: 7, 5: 10, 6: 13, 7: 16, 8: 19, 9: 22, 10: 25}
QUADRATIC_BOUNDS = {n: 2 * n - 3 for n in range(4, 11)}


@dataclass
class Claim:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  ({self.seconds:.2f} s)  {self.detail}".rstrip()


class _Clock:
    def __init__(self):
        self.t0 = time.perf_counter()

    def lap(self):
        t = time.perf_counter()
        dt, self.t0 = t - self.t0, t
        return dt


def _budget(name, seconds, limit):
    return Claim(f"{name} runtime < {limit:g} s", seconds < limit, f"took {seconds:.2f} s", seconds)


def _restricted(family, n1, i=1):
    f = catalog.gold(n1, i) if family == "gold" else catalog.x3_tr9(n1)
    g = restrict(f, gf2n.trace_zero_basis(gf2n.make_field(n1)))
    g.provenance["restriction"] = "t0"
    return g


def dillon_baseline(threads=1):
    out, clock, start = [], _Clock(), time.perf_counter()
    for n in range(3, 9):
        for i in range(1, n):
            if math.gcd(i, n) != 1:
                continue
            f = catalog.gold(n, i)
            apn = spectra.is_apn(f)
            methods = applicable_methods(f, quadratic=True, plateaued=True)
            verdicts = {m: check_d(f, m, threads=threads).verdict for m in methods}
            ok = apn and all(v == "D-function" for v in verdicts.values())
            bad = [m for m, v in verdicts.items() if v != "D-function"]
            out.append(Claim(f"gold({n},{i}) APN and D under {len(methods)} methods", ok,
                             f"apn={apn}" + (f" non-D: {bad}" if bad else ""), clock.lap()))
    out.append(_budget("dillon-baseline", time.perf_counter() - start, 10))
    return out


def remark_n7(threads=1):
    clock = _Clock()
    g = _restricted("gold", 7)
    delta = spectra.differential_uniformity(g)
    rep = d_check_bruteforce(g, witnesses=True, full_missing=True, threads=threads)
    secs = clock.lap()
    missing = ", ".join(hex(v) for v in rep.missing)
    return [
        Claim("restricted gold(7,1) is a (6,7)-function", (g.n, g.m) == (6, 7), f"({g.n}, {g.m})", 0.0),
        Claim("restricted gold(7,1) has delta_F = 2", delta == 2, f"delta_F = {delta}", 0.0),
        Claim("restricted gold(7,1) is not-D with nonempty missing set",
              not rep.is_d and rep.missing_total > 0,
              f"missing {{{missing}}} under modulus {rep.modulus}", secs),
        _budget("remark-n7", secs, 1),
    ]


def family_even(threads=1):
    out, start = [], time.perf_counter()
    clock = _Clock()
    for n1, i in ((6, 1), (8, 1), (8, 3), (10, 1), (10, 3)):
        g = _restricted("gold", n1, i)
        rep = d_check_hyperplane_quadratic(g, threads=threads)
        out.append(Claim(f"restricted gold({n1},{i}) is D", rep.is_d,
                         f"({g.n}, {g.m}), covered {rep.covered}/{1 << g.m}", clock.lap()))
    out.append(_budget("family-even", time.perf_counter() - start, 5))
    return out


def _odd(dims, budget, threads):
    out, start = [], time.perf_counter()
    clock = _Clock()
    for n1 in dims:
        for family in ("gold", "x3_plus_tr_x9"):
            g = _restricted(family, n1)
            rep = d_check_hyperplane_quadratic(g, threads=threads)
            label = f"gold({n1},1)" if family == "gold" else f"x3_tr9({n1})"
            out.append(Claim(f"restricted {label} is D (hyperplane-quadratic)", rep.is_d,
                             f"({g.n}, {g.m}), covered {rep.covered}/{1 << g.m}", clock.lap()))
    out.append(_budget(f"dimensions {list(dims)}", time.perf_counter() - start, budget))
    return out


def family_odd(threads=1):
    return _odd((9, 11, 13, 15), 60 if threads <= 1 else 15, threads)


def extension_17(threads=1):
    return _odd((17,), 900, threads)


def _enumerate_affine_planes(n):
    """Count 4-sets {p0 < p1 < p2 < p0^p1^p2} directly."""
    xs = np.arange(1 << n, dtype=np.int64)
    total = 0
    for p0 in range(1 << n):
        p1 = xs[xs > p0][:, None]
        p2 = xs[None, :]
        p3 = p0 ^ p1 ^ p2
        total += int(np.count_nonzero((p2 > p1) & (p3 > p2)))
    return total


def _enumerate_vector_planes(n):
    return sum(1 for _ in spectra.plane_directions(n))


def bounds(threads=1, corpus_size=500):
    out, clock, start = [], _Clock(), time.perf_counter()
    got = {n: dimension_bounds(n).m_max for n in GENERAL_BOUNDS}
    out.append(Claim("general bound matches hand values, n = 3..10", got == GENERAL_BOUNDS,
                     str(got), clock.lap()))
    below = all(dimension_bounds(n).m_max < 3 * n - 4 for n in GENERAL_BOUNDS)
    out.append(Claim("general bound < 3n - 4", below, "", 0.0))
    gotq = {n: dimension_bounds(n, quadratic=True).m_max for n in QUADRATIC_BOUNDS}
    out.append(Claim("quadratic bound equals 2n - 3, n = 4..10", gotq == QUADRATIC_BOUNDS,
                     str(gotq), clock.lap()))
    aff = {n: (_enumerate_affine_planes(n), spectra.count_affine_planes(n)) for n in range(2, 9)}
    vec = {n: (_enumerate_vector_planes(n), spectra.count_vector_planes(n)) for n in range(2, 9)}
    out.append(Claim("|AFF_{2,n}| formula matches enumeration, n <= 8",
                     all(a == b for a, b in aff.values()), f"n=3: {aff[3][0]}", clock.lap()))
    out.append(Claim("|V_{2,n}| formula matches enumeration, n <= 8",
                     all(a == b for a, b in vec.values()), f"n=3: {vec[3][0]}", clock.lap()))
    violations, n_d = [], 0
    for f in catalog.corpus(corpus_size):
        if f.n <= 2 or not check_d(f).is_d:
            continue
        n_d += 1
        quad = is_quadratic(f)
        if f.m > dimension_bounds(f.n).m_max:
            violations.append((f.n, f.m, "general"))
        if quad and f.n > 3 and f.m > dimension_bounds(f.n, quadratic=True).m_max:
            violations.append((f.n, f.m, "quadratic"))
        if f.m < f.n and spectra.is_apn(f):
            violations.append((f.n, f.m, "lower"))
    out.append(Claim("no corpus D-function violates its m-range", not violations,
                     f"{n_d} D-functions checked, violations {violations[:5]}", clock.lap()))
    out.append(_budget("bounds", time.perf_counter() - start, 30))
    return out


def strongly_plateaued(threads=1, corpus_size=500):
    out, clock, start = [], _Clock(), time.perf_counter()
    quads = [f for f in catalog.corpus(corpus_size) if is_quadratic(f)]
    mism = 0
    for f in quads:
        a = d_check_plateaued(f, full_missing=True)
        b = d_check_bruteforce(f, full_missing=True)
        mism += (a.verdict, a.missing) != (b.verdict, b.missing)
    out.append(Claim("plateaued agrees with bruteforce on corpus quadratics", mism == 0,
                     f"{len(quads)} quadratics, {mism} mismatches", clock.lap()))
    for n1 in (5, 7):
        g = _restricted("gold", n1)
        om = omega_report(g)
        bf = d_check_bruteforce(g)
        out.append(Claim(f"omega_report on restricted gold({n1},1): structure holds, verdict matches bruteforce",
                         om.verdict == bf.verdict,
                         f"{om.structure}, verdict {om.verdict}, min |Omega_w| = {om.min_omega()}", clock.lap()))
    out.extend(_n2(threads, clock))
    out.append(_budget("strongly-plateaued", time.perf_counter() - start, 30))
    return out


def _n2(threads, clock):
    ctx = gf2n.make_field(3)
    out = []
    for i in (1, 2):
        verdicts = []
        for alpha in range(1, 8):
            g = restrict(catalog.gold(3, i), gf2n.hyperplane_basis(ctx, alpha))
            verdicts.append(d_check_bruteforce(g, threads=threads).verdict)
        out.append(Claim(f"gold(3,{i}) restricted to each of the 7 hyperplanes is not-D",
                         all(v == "not-D-function" for v in verdicts), "", clock.lap()))
    return out


def n2_negative(threads=1):
    return _n2(threads, _Clock())


def moment_identities(threads=1, count=50, seed=7):
    out, clock, start = [], _Clock(), time.perf_counter()
    rng = catalog.rng_for(seed)
    tally = {"fourth-moment": [0, 0], "cubic-moment-quadratic": [0, 0], "plateaued-amplitudes": [0, 0]}
    failures = []
    for k in range(count):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 6))
        if k % 2 == 0:
            f = from_anf(catalog.random_quadratic(n, m, int(rng.integers(0, 2**31))))
        else:
            f = from_truth_table(n, m, rng.integers(0, 1 << m, size=1 << n))
        for res in verify_moment_identities(f):
            if res.status == "skipped":
                continue
            tally[res.name][0] += 1
            tally[res.name][1] += res.holds
            if not res.holds:
                failures.append((res.name, n, m, res.first_discrepancy))
    for name, (ran, held) in tally.items():
        out.append(Claim(f"identity {name} holds exactly", ran > 0 and ran == held,
                         f"{held}/{ran} functions", 0.0))
    out[-1].seconds = clock.lap()
    for n1 in (4, 5):
        f = catalog.gold(n1, 1)
        got = int(np.sum(walsh_moment(f, 3, normalized=True)))
        want = (1 << (2 * n1)) * (3 * (1 << n1) - 2)
        out.append(Claim(f"gold({n1},1): sum W^3 = 2^(n+m)(3*2^n - 2)", got == want,
                         f"{got} vs {want}", clock.lap()))
    out.append(_budget("moment-identities", time.perf_counter() - start, 120))
    return out


def cross_validate(threads=1, corpus_size=500, seed=2024):
    out, clock, start = [], _Clock(), time.perf_counter()
    funcs = catalog.corpus(corpus_size, seed)
    disagreements, replay_fail, runs = [], 0, 0
    for idx, f in enumerate(funcs):
        reps = {m: check_d(f, m, witnesses=True, full_missing=True) for m in applicable_methods(f)}
        runs += len(reps)
        keys = {(r.verdict, tuple(r.missing)) for r in reps.values()}
        if len(keys) > 1:
            disagreements.append(idx)
        replay_fail += sum(not replay_witnesses(f, r) for r in reps.values())
    out.append(Claim(f"corpus of {len(funcs)} functions has n <= 6, m <= 8",
                     len(funcs) >= 500 and all(f.n <= 6 and f.m <= 8 for f in funcs), "", 0.0))
    out.append(Claim("all applicable methods agree on verdict and missing set", not disagreements,
                     f"{runs} checker runs, discrepancies at {disagreements[:10]}", clock.lap()))
    out.append(Claim("every witness replays", replay_fail == 0, f"{replay_fail} failures", 0.0))
    out.append(_budget("cross-validate", time.perf_counter() - start, 300))
    return out


EXPERIMENTS = {
    "dillon-baseline": dillon_baseline,
    "remark-n7": remark_n7,
    "family-even": family_even,
    "family-odd": family_odd,
    "extension-17": extension_17,
    "bounds": bounds,
    "strongly-plateaued": strongly_plateaued,
    "n2-negative": n2_negative,
    "moment-identities": moment_identities,
    "cross-validate": cross_validate,
}


def run(name, threads=1):
    if name not in EXPERIMENTS:
        raise InvalidArguments(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    return EXPERIMENTS[name](threads=threads)
