"""Binary field GF(2^n) arithmetic, trace maps and hyperplane bases.

Elements are integers in polynomial basis: bit i holds the coefficient of x^i.
"""
from dataclasses import dataclass, field

import numpy as np

from ._bits import parity, parity_array, rank_gf2, span_array
from .errors import InvalidArguments, InvalidBasis, InvalidModulus

MAX_FIELD_BITS = 32


def clmul(a, b):
    """Carry-less product of two polynomials over F_2."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a, m):
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_gcd(a, b):
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _mulmod(a, b, m):
    return poly_mod(clmul(a, b), m)


def is_irreducible(poly):
    """Ben-Or test: gcd(x^(2^i) - x, f) = 1 for i = 1 .. deg/2."""
    d = poly.bit_length() - 1
    if d < 1:
        return False
    if d == 1:
        return True
    if not poly & 1:
        return False
    x = 0b10
    t = x
    for _ in range(d // 2):
        t = _mulmod(t, t, poly)
        if poly_gcd(poly, t ^ x) != 1:
            return False
    return True


def poly_str(poly):
    terms = []
    for i in range(poly.bit_length() - 1, -1, -1):
        if poly >> i & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return "+".join(terms) if terms else "0"


@dataclass(frozen=True)
class FieldCtx:
    n: int
    modulus: int
    generator_checked: bool = True
    trace_mask: int = field(default=0, repr=False, compare=False)

    @property
    def order(self):
        return 1 << self.n

    @property
    def modulus_hex(self):
        return hex(self.modulus)

    @property
    def modulus_str(self):
        return poly_str(self.modulus)

    def describe(self):
        return {"n": self.n, "modulus": self.modulus_hex, "polynomial": self.modulus_str}


def make_field(n, modulus=None):
    """Build a field context; default modulus is the smallest irreducible of degree n
    with nonzero constant term."""
    if not 1 <= n <= MAX_FIELD_BITS:
        raise InvalidArguments(f"field degree must be in [1, {MAX_FIELD_BITS}], got {n}")
    if modulus is None:
        modulus = next(p for p in range((1 << n) | 1, 1 << (n + 1), 2) if is_irreducible(p))
    else:
        modulus = int(modulus)
        if modulus.bit_length() - 1 != n:
            raise InvalidModulus(f"modulus {modulus:#x} does not have degree {n}")
        if not is_irreducible(modulus):
            raise InvalidModulus(f"modulus {poly_str(modulus)} is reducible over F_2")
    ctx = FieldCtx(n, modulus, True)
    mask = 0
    for i in range(n):
        if abs_trace(ctx, 1 << i):
            mask |= 1 << i
    object.__setattr__(ctx, "trace_mask", mask)
    return ctx


def _check(ctx, *words):
    for w in words:
        if not 0 <= w < ctx.order:
            raise InvalidArguments(f"{w:#x} is not an element of GF(2^{ctx.n})")


def mul(ctx, a, b):
    _check(ctx, a, b)
    return _mulmod(a, b, ctx.modulus)


def power(ctx, a, e):
    """a**e by square-and-multiply; power(ctx, 0, 0) == 1."""
    if e < 0:
        raise InvalidArguments("negative exponent")
    _check(ctx, a)
    r = 1
    while e:
        if e & 1:
            r = _mulmod(r, a, ctx.modulus)
        a = _mulmod(a, a, ctx.modulus)
        e >>= 1
    return r


def abs_trace(ctx, a):
    _check(ctx, a)
    t = 0
    s = a
    for _ in range(ctx.n):
        t ^= s
        s = _mulmod(s, s, ctx.modulus)
    if t not in (0, 1):
        raise AssertionError(f"trace of {a:#x} left the prime field")
    return t


def rel_trace(ctx, m, a, embed=False):
    """Tr^n_m(a). Returned as an m-bit coordinate word over the canonical
    (reduced echelon) basis of the subfield GF(2^m), or as the field element
    itself with ``embed=True``."""
    if m < 1 or ctx.n % m:
        raise InvalidArguments(f"{m} does not divide {ctx.n}")
    _check(ctx, a)
    t = 0
    s = a
    for _ in range(ctx.n // m):
        t ^= s
        for _ in range(m):
            s = _mulmod(s, s, ctx.modulus)
    if embed:
        return t
    return _subfield_coords(ctx, m, t)


def _subfield_basis(ctx, m):
    # kernel of the linear map x -> x^(2^m) + x, in reduced echelon form
    images = []
    for i in range(ctx.n):
        s = 1 << i
        for _ in range(m):
            s = _mulmod(s, s, ctx.modulus)
        images.append(s ^ (1 << i))
    return _kernel_rref(images, ctx.n)


def _kernel_rref(images, n):
    """Kernel of the linear map e_i -> images[i], as a fully reduced basis."""
    # row-reduce the augmented rows (image | e_i)
    rows = [(img, 1 << i) for i, img in enumerate(images)]
    pivot_rows = {}
    kernel = []
    for img, tag in rows:
        while img:
            top = img.bit_length() - 1
            if top not in pivot_rows:
                pivot_rows[top] = (img, tag)
                break
            pimg, ptag = pivot_rows[top]
            img ^= pimg
            tag ^= ptag
        if not img:
            kernel.append(tag)
    # reduced echelon form keyed on the highest bit
    reduced = {}
    for v in sorted(kernel):
        for top in sorted(reduced, reverse=True):
            if v >> top & 1:
                v ^= reduced[top]
        if v:
            top = v.bit_length() - 1
            for t2 in list(reduced):
                if reduced[t2] >> top & 1:
                    reduced[t2] ^= v
            reduced[top] = v
    return [reduced[t] for t in sorted(reduced)]


def _subfield_coords(ctx, m, t):
    basis = _subfield_basis(ctx, m)
    coords = 0
    for i, b in enumerate(basis):
        top = b.bit_length() - 1
        if t >> top & 1:
            coords |= 1 << i
            t ^= b
    if t:
        raise AssertionError("value is not in the subfield")
    return coords


@dataclass(frozen=True)
class SubspaceBasis:
    ambient_n: int
    vectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(int(v) for v in self.vectors))
        for v in self.vectors:
            if not 0 <= v < 1 << self.ambient_n:
                raise InvalidBasis(f"vector {v:#x} outside F_2^{self.ambient_n}")
        if rank_gf2(self.vectors) != len(self.vectors):
            raise InvalidBasis("basis vectors are linearly dependent")

    @property
    def dim(self):
        return len(self.vectors)

    def span(self):
        """Span elements; entry y = XOR of vectors[i] over the set bits of y."""
        return span_array(self.vectors)

    @classmethod
    def standard(cls, n, k=None):
        k = n if k is None else k
        return cls(n, tuple(1 << i for i in range(k)))


def _linear_form_kernel(n, form):
    """Kernel basis of x -> parity(form & x); pivot is the lowest set bit of form."""
    if not form:
        raise InvalidArguments("zero linear form has no hyperplane kernel")
    p = (form & -form).bit_length() - 1
    vecs = []
    for i in range(n):
        if i == p:
            continue
        vecs.append((1 << i) | (1 << p) if form >> i & 1 else 1 << i)
    return SubspaceBasis(n, tuple(vecs))


def trace_zero_basis(ctx):
    if ctx.n < 2:
        raise InvalidArguments("trace-zero hyperplane needs n >= 2")
    return _linear_form_kernel(ctx.n, ctx.trace_mask)


def hyperplane_basis(ctx, alpha):
    """Basis of H_alpha = {x : Tr(alpha x) = 0}."""
    if alpha == 0:
        raise InvalidArguments("alpha must be nonzero")
    _check(ctx, alpha)
    form = 0
    for i in range(ctx.n):
        if parity(mul(ctx, alpha, 1 << i) & ctx.trace_mask):
            form |= 1 << i
    return _linear_form_kernel(ctx.n, form)


# vectorised helpers over numpy arrays of field elements

def mul_array(ctx, a, b):
    n, mod = ctx.n, np.uint64(ctx.modulus)
    a = np.asarray(a, dtype=np.uint64).copy()
    b = np.asarray(b, dtype=np.uint64)
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    r = np.zeros(a.shape, dtype=np.uint64)
    top = np.uint64(n)
    one = np.uint64(1)
    for i in range(n):
        bit = (b >> np.uint64(i)) & one
        r ^= a * bit
        a = a << one
        a ^= ((a >> top) & one) * mod
    return r


def power_array(ctx, a, e):
    a = np.asarray(a, dtype=np.uint64)
    r = np.ones(a.shape, dtype=np.uint64)
    while e:
        if e & 1:
            r = mul_array(ctx, r, a)
        e >>= 1
        if e:
            a = mul_array(ctx, a, a)
    return r


def trace_array(ctx, a):
    return parity_array(np.asarray(a, dtype=np.uint64) & np.uint64(ctx.trace_mask))


def elements(ctx):
    return np.arange(ctx.order, dtype=np.uint64)
