import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dillonlab import gf2n
from dillonlab.errors import InvalidArguments, InvalidBasis, InvalidModulus


def test_default_moduli():
    assert gf2n.make_field(3).modulus == 0b1011
    assert gf2n.make_field(1).modulus == 0b11
    assert gf2n.make_field(7).modulus == 0x83  # x^7 + x + 1
    assert gf2n.make_field(8).modulus == 0x11B


def test_irreducibility():
    assert gf2n.is_irreducible(0b111)
    assert not gf2n.is_irreducible(0b101)  # (x+1)^2
    assert gf2n.is_irreducible(0b11111)
    assert not gf2n.is_irreducible(0b10101)  # (x^2+x+1)^2
    # brute-force oracle on degree <= 8
    for p in range(4, 1 << 9):
        d = p.bit_length() - 1
        has_factor = any(
            gf2n.poly_mod(p, q) == 0 for q in range(2, 1 << (d // 2 + 1)) if 1 <= q.bit_length() - 1 < d
        )
        assert gf2n.is_irreducible(p) == (not has_factor), hex(p)


def test_bad_modulus():
    with pytest.raises(InvalidModulus):
        gf2n.make_field(3, 0b1001)  # x^3 + 1 = (x+1)(x^2+x+1)
    with pytest.raises(InvalidModulus):
        gf2n.make_field(3, 0b111)
    with pytest.raises(InvalidArguments):
        gf2n.make_field(0)


def test_small_products():
    ctx = gf2n.make_field(3)
    assert gf2n.mul(ctx, 0b010, 0b100) == 0b011  # x * x^2 = x + 1
    assert gf2n.power(ctx, 0, 0) == 1
    assert gf2n.power(ctx, 0b010, 7) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.data())
def test_field_axioms(n, data):
    ctx = gf2n.make_field(n)
    a, b, c = (data.draw(st.integers(0, ctx.order - 1)) for _ in range(3))
    assert gf2n.mul(ctx, a, b) == gf2n.mul(ctx, b, a)
    assert gf2n.mul(ctx, a, gf2n.mul(ctx, b, c)) == gf2n.mul(ctx, gf2n.mul(ctx, a, b), c)
    assert gf2n.mul(ctx, a, b ^ c) == gf2n.mul(ctx, a, b) ^ gf2n.mul(ctx, a, c)
    if a:
        assert gf2n.power(ctx, a, ctx.order - 1) == 1
    assert gf2n.abs_trace(ctx, a ^ b) == gf2n.abs_trace(ctx, a) ^ gf2n.abs_trace(ctx, b)
    assert gf2n.abs_trace(ctx, gf2n.mul(ctx, a, a)) == gf2n.abs_trace(ctx, a)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_vectorised_matches_scalar(n):
    ctx = gf2n.make_field(n)
    xs = gf2n.elements(ctx)
    ys = xs[::-1].copy()
    prod = gf2n.mul_array(ctx, xs, ys)
    assert [int(v) for v in prod] == [gf2n.mul(ctx, int(a), int(b)) for a, b in zip(xs, ys)]
    cubes = gf2n.power_array(ctx, xs, 3)
    assert [int(v) for v in cubes] == [gf2n.power(ctx, int(a), 3) for a in xs]
    tr = gf2n.trace_array(ctx, xs)
    assert [int(v) for v in tr] == [gf2n.abs_trace(ctx, int(a)) for a in xs]


@pytest.mark.parametrize("n", [2, 3, 4, 7, 9])
def test_trace_kernel(n):
    ctx = gf2n.make_field(n)
    basis = gf2n.trace_zero_basis(ctx)
    assert basis.dim == n - 1
    span = basis.span()
    assert len(set(span.tolist())) == 1 << (n - 1)
    assert all(gf2n.abs_trace(ctx, int(x)) == 0 for x in span)


@pytest.mark.parametrize("alpha", range(1, 16))
def test_hyperplane_basis(alpha):
    ctx = gf2n.make_field(4)
    span = gf2n.hyperplane_basis(ctx, alpha).span()
    want = {x for x in range(16) if gf2n.abs_trace(ctx, gf2n.mul(ctx, alpha, x)) == 0}
    assert set(span.tolist()) == want


def test_hyperplane_one_is_trace_zero():
    ctx = gf2n.make_field(6)
    assert gf2n.hyperplane_basis(ctx, 1) == gf2n.trace_zero_basis(ctx)


def test_rel_trace():
    ctx = gf2n.make_field(6)
    for a in range(64):
        t = gf2n.rel_trace(ctx, 2, a, embed=True)
        assert gf2n.power(ctx, t, 4) == t  # lands in GF(4)
        assert 0 <= gf2n.rel_trace(ctx, 2, a) < 4
    assert gf2n.rel_trace(ctx, 6, 5, embed=True) == 5
    with pytest.raises(InvalidArguments):
        gf2n.rel_trace(ctx, 4, 1)


def test_rel_trace_transitive():
    ctx = gf2n.make_field(6)
    for a in range(64):
        t3 = gf2n.rel_trace(ctx, 3, a, embed=True)
        # Tr^3_1 on GF(8) inside GF(64): t + t^2 + t^4
        t1 = t3 ^ gf2n.power(ctx, t3, 2) ^ gf2n.power(ctx, t3, 4)
        assert t1 == gf2n.abs_trace(ctx, a)


def test_subspace_basis_validation():
    with pytest.raises(InvalidBasis):
        gf2n.SubspaceBasis(3, (1, 2, 3))
    with pytest.raises(InvalidBasis):
        gf2n.SubspaceBasis(2, (4,))
    s = gf2n.SubspaceBasis.standard(4, 3)
    assert s.dim == 3 and sorted(s.span().tolist()) == list(range(8))


def test_describe():
    d = gf2n.make_field(5).describe()
    assert d == {"n": 5, "modulus": "0x25", "polynomial": "x^5+x^2+1"}
