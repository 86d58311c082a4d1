"""Acceptance gate: one test per criterion, exact integer checks, wall-clock budgets."""
import math
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE

from dillonlab import catalog, gf2n, spectra
from dillonlab.dproperty import (
    applicable_methods, check_d, d_check_bruteforce, d_check_hyperplane_quadratic, d_check_plateaued,
    dimension_bounds, omega_report, replay_witnesses, verify_moment_identities, walsh_moment,
)
from dillonlab.reproduce import GENERAL_BOUNDS, _enumerate_affine_planes
from dillonlab.vbf import AffineMap, ea_transform, from_anf, from_truth_table, is_quadratic, moebius, restrict, to_anf


class Gate:
    def __init__(self, num, budget):
        self.num, self.budget = num, budget
        self.failures = []
        self.t0 = time.perf_counter()

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def close(self, summary):
        secs = time.perf_counter() - self.t0
        self.check(secs < self.budget, f"runtime {secs:.1f} s over budget {self.budget} s")
        ok = not self.failures
        detail = summary if ok else "; ".join(self.failures[:5])
        ACCEPTANCE[self.num] = (ok, f"{detail} [{secs:.2f} s / {self.budget} s]")
        assert ok, detail


def t0_restriction(f, n1):
    g = restrict(f, gf2n.trace_zero_basis(gf2n.make_field(n1)))
    g.provenance["restriction"] = "t0"
    return g


def test_criterion_01_dillon_baseline():
    gate = Gate(1, 10)
    count = 0
    for n in range(3, 9):
        for i in range(1, n):
            if math.gcd(i, n) != 1:
                continue
            f = catalog.gold(n, i)
            gate.check(spectra.is_apn(f), f"gold({n},{i}) not APN")
            for m in applicable_methods(f):
                rep = check_d(f, m, threads=1)
                gate.check(rep.is_d, f"gold({n},{i}) {m}: {rep.verdict}")
                count += 1
    gate.close(f"{count} checker runs on APN Gold maps n=3..8, all D")


def test_criterion_02_remark_n7():
    gate = Gate(2, 1)
    g = t0_restriction(catalog.gold(7, 1), 7)
    gate.check((g.n, g.m) == (6, 7), f"shape ({g.n}, {g.m})")
    delta = spectra.differential_uniformity(g)
    gate.check(delta == 2, f"delta_F = {delta}")
    rep = d_check_bruteforce(g, full_missing=True, threads=1)
    gate.check(not rep.is_d and rep.missing_total > 0, "coverage is complete")
    gate.check(rep.modulus == "0x83", f"modulus {rep.modulus}")
    gate.close(f"not-D, missing {[hex(v) for v in rep.missing]} with modulus {rep.modulus}")


def test_criterion_03_even_family():
    gate = Gate(3, 5)
    for n1, i in ((6, 1), (8, 1), (8, 3), (10, 1), (10, 3)):
        rep = check_d(t0_restriction(catalog.gold(n1, i), n1), threads=1)
        gate.check(rep.is_d, f"restricted gold({n1},{i}) {rep.verdict}")
    gate.close("5 restricted Gold maps are D")


def test_criterion_04_odd_dimensions():
    gate = Gate(4, 60)
    for n1 in (9, 11, 13, 15):
        for f in (catalog.gold(n1, 1), catalog.x3_tr9(n1)):
            g = t0_restriction(f, n1)
            rep = d_check_hyperplane_quadratic(g, threads=1)
            gate.check(rep.is_d, f"{f.provenance['family']}({n1}) restricted: {rep.verdict}")
    gate.close("gold and x3_tr9 restricted to T_0 are D for n1 = 9, 11, 13, 15 (single-threaded)")


@pytest.mark.slow
def test_criterion_05_extension_17():
    gate = Gate(5, 900)
    for f in (catalog.gold(17, 1), catalog.x3_tr9(17)):
        g = t0_restriction(f, 17)
        rep = d_check_hyperplane_quadratic(g, threads=8)
        gate.check(rep.is_d, f"{f.provenance['family']}(17) restricted: {rep.verdict}")
    gate.close("gold(17,1) and x3_tr9(17) restricted to T_0 are D")


def test_criterion_06_cross_validation(corpus):
    gate = Gate(6, 300)
    gate.check(len(corpus) >= 500 and all(f.n <= 6 and f.m <= 8 for f in corpus), "corpus shape")
    kinds = {f.provenance.get("family") for f in corpus}
    gate.check({"random-quadratic", "random-cubic", "random-table", "gold"} <= kinds, f"kinds {kinds}")
    runs = 0
    for idx, f in enumerate(corpus):
        reps = {m: check_d(f, m, full_missing=True, threads=1) for m in applicable_methods(f)}
        runs += len(reps)
        keys = {(r.verdict, tuple(r.missing)) for r in reps.values()}
        gate.check(len(keys) == 1, f"function {idx}: {dict((m, r.missing) for m, r in reps.items())}")
        if is_quadratic(f):
            gate.check({"moment3-quadratic", "hyperplane-quadratic", "anf-span", "plateaued"} <= set(reps),
                       f"function {idx}: quadratic methods missing")
    gate.close(f"{len(corpus)} functions, {runs} checker runs, 0 discrepancies")


def test_criterion_07_moment_identities():
    gate = Gate(7, 120)
    rng = catalog.rng_for(7)
    ran = {"fourth-moment": 0, "cubic-moment-quadratic": 0, "plateaued-amplitudes": 0}
    for k in range(50):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 6))
        if k % 2 == 0:
            f = from_anf(catalog.random_quadratic(n, m, int(rng.integers(0, 2**31))))
        else:
            f = from_truth_table(n, m, rng.integers(0, 1 << m, size=1 << n))
        for res in verify_moment_identities(f):
            if res.status == "skipped":
                continue
            ran[res.name] += 1
            gate.check(res.holds, f"{res.name} on function {k}: {res.first_discrepancy}")
    gate.check(all(ran.values()), f"an identity never ran: {ran}")
    for n in (4, 5):
        got = int(np.sum(walsh_moment(catalog.gold(n, 1), 3, normalized=True)))
        gate.check(got == (1 << (2 * n)) * (3 * (1 << n) - 2), f"gold({n},1) cubic moment {got}")
    gate.close(f"identities exact on every point; runs per identity {ran}")


def test_criterion_08_plateaued(corpus):
    gate = Gate(8, 30)
    quads = [f for f in corpus if is_quadratic(f)]
    for idx, f in enumerate(quads):
        a = d_check_plateaued(f, full_missing=True)
        b = d_check_bruteforce(f, full_missing=True)
        gate.check((a.verdict, a.missing) == (b.verdict, b.missing), f"quadratic {idx} disagrees")
    for n1 in (5, 7):
        g = t0_restriction(catalog.gold(n1, 1), n1)
        om = omega_report(g)  # raises on any failed structural assertion
        n = n1 - 1
        gate.check(om.structure["bent_count"] == 1 << n, f"|B| for n={n}")
        gate.check(om.structure["nonbent_count"] == (1 << n) - 1, f"|NB| for n={n}")
        gate.check(om.structure["nonbent_dims"] == [2], f"l_v for n={n}")
        gate.check(om.structure["sum_2l_minus_1"] == 3 * ((1 << n) - 1), f"sum for n={n}")
        gate.check(om.verdict == d_check_bruteforce(g).verdict, f"omega verdict for n={n}")
    ctx = gf2n.make_field(3)
    for i in (1, 2):
        for alpha in range(1, 8):
            g = restrict(catalog.gold(3, i), gf2n.hyperplane_basis(ctx, alpha))
            gate.check(not d_check_bruteforce(g).is_d, f"gold(3,{i}) on H_{alpha} is D")
    gate.close(f"{len(quads)} quadratics agree; omega structure holds for n=4,6; n=2 restrictions not-D")


def test_criterion_09_bounds(corpus):
    gate = Gate(9, 30)
    for n, want in GENERAL_BOUNDS.items():
        got = dimension_bounds(n).m_max
        gate.check(got == want and got < 3 * n - 4, f"general n={n}: {got}")
    for n in range(4, 11):
        got = dimension_bounds(n, quadratic=True).m_max
        gate.check(got == 2 * n - 3, f"quadratic n={n}: {got}")
    for n in range(2, 9):
        gate.check(_enumerate_affine_planes(n) == spectra.count_affine_planes(n), f"|AFF_2,{n}|")
        vec = sum(1 for _ in spectra.plane_directions(n))
        gate.check(vec == spectra.count_vector_planes(n), f"|V_2,{n}|")
    n_d = 0
    for f in corpus:
        if f.n <= 2 or not check_d(f).is_d:
            continue
        n_d += 1
        gate.check(f.m <= dimension_bounds(f.n).m_max, f"({f.n},{f.m}) above general bound")
        if f.n > 3 and is_quadratic(f):
            gate.check(f.m <= dimension_bounds(f.n, quadratic=True).m_max, f"({f.n},{f.m}) above quadratic bound")
        if spectra.is_apn(f):
            gate.check(f.m >= f.n, f"APN ({f.n},{f.m}) below m_min")
    gate.close(f"bounds match hand values; {n_d} corpus D-functions inside their range; plane counts exact")


def test_criterion_10_properties(corpus):
    gate = Gate(10, 120)
    rng = catalog.rng_for(10)
    for idx, f in enumerate(corpus):
        for v in range(1 << f.m):
            gate.check(spectra.walsh_row(f, v).parseval_ok(), f"Parseval {idx} v={v}")
        for a in range(1, 1 << f.n):
            c = spectra.ddt_row(f, a).counts
            gate.check(c.sum() == 1 << f.n and not np.any(c % 2), f"DDT row {idx} a={a}")
        prof = spectra.plateaued_profile(f)
        for v, ell in prof.structure_dims.items():
            gate.check(prof.amplitudes[v] ** 2 == 1 << (f.n + ell), f"lambda^2 {idx} v={v}")
        gate.check(np.array_equal(moebius(to_anf(f)), f.table.astype(np.uint64)), f"Moebius {idx}")
        if idx % 5 == 0:
            g = ea_transform(f, AffineMap.random(f.m, f.m, rng, invertible=True),
                             AffineMap.random(f.n, f.n, rng, invertible=True), AffineMap.random(f.n, f.m, rng))
            gate.check(check_d(f).verdict == check_d(g).verdict, f"EA invariance {idx}")
        for m in applicable_methods(f):
            rep = check_d(f, m, witnesses=True, threads=1)
            gate.check(replay_witnesses(f, rep), f"witness replay {idx} {m}")
    gate.close("Parseval, DDT rows, partially-bent amplitudes, Moebius, EA invariance, witness replay")
