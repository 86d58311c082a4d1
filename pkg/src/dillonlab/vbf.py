"""Vectorial Boolean functions F: F_2^n -> F_2^m held as truth tables."""
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gf2n
from ._bits import popcount, rank_gf2, span_array
from .errors import InvalidAffine, InvalidArguments, InvalidBasis, InvalidTable, ParseError, PreconditionError

MAX_N = 24
MAX_M = 32


class VBF:
    """An (n, m)-function. ``table[x]`` is the m-bit image of the n-bit word x."""

    __slots__ = ("n", "m", "table", "provenance")

    def __init__(self, n, m, table, provenance=None):
        if not 1 <= n <= MAX_N:
            raise InvalidTable(f"input size n={n} outside [1, {MAX_N}]")
        if not 1 <= m <= MAX_M:
            raise InvalidTable(f"output size m={m} outside [1, {MAX_M}]")
        arr = np.asarray(table)
        if arr.ndim != 1 or arr.shape[0] != 1 << n:
            raise InvalidTable(f"table must have exactly 2^{n} = {1 << n} entries, got {arr.shape}")
        if arr.size and (arr.min() < 0 or int(arr.max()) >= 1 << m):
            raise InvalidTable(f"table entries must be < 2^{m}")
        arr = arr.astype(np.uint32)
        arr.setflags(write=False)
        self.n = n
        self.m = m
        self.table = arr
        self.provenance = dict(provenance or {})

    def __call__(self, x):
        return int(self.table[x])

    def __len__(self):
        return 1 << self.n

    def __eq__(self, other):
        return (
            isinstance(other, VBF)
            and self.n == other.n
            and self.m == other.m
            and np.array_equal(self.table, other.table)
        )

    __hash__ = None

    def __repr__(self):
        label = self.provenance.get("family", "table")
        return f"VBF(n={self.n}, m={self.m}, {label})"

    def words(self):
        return [int(v) for v in self.table]

    @property
    def table64(self):
        return self.table.astype(np.uint64)

    def is_normalized(self):
        return self.table[0] == 0


@dataclass(frozen=True)
class QuadraticAnf:
    """Quadratic ANF with 1-indexed variables: bit i-1 of the input word is x_i."""

    n: int
    m: int
    a_quad: dict = field(default_factory=dict)
    a_lin: tuple = ()
    a_const: int = 0

    def __post_init__(self):
        quad = {}
        for (i, j), c in dict(self.a_quad).items():
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidArguments(f"bad quadratic index ({i}, {j})")
            key = (min(i, j), max(i, j))
            c = int(c)
            _check_word(c, self.m)
            quad[key] = quad.get(key, 0) ^ c
        object.__setattr__(self, "a_quad", {k: v for k, v in sorted(quad.items()) if v})
        lin = tuple(int(c) for c in self.a_lin) or (0,) * self.n
        if len(lin) != self.n:
            raise InvalidArguments(f"need {self.n} linear coefficients, got {len(lin)}")
        for c in lin:
            _check_word(c, self.m)
        object.__setattr__(self, "a_lin", lin)
        _check_word(int(self.a_const), self.m)

    def coeff(self, i, j):
        """a_{i,j} with the symmetric convention a_{i,j} = a_{j,i}; zero on the diagonal."""
        if i == j:
            return 0
        return self.a_quad.get((min(i, j), max(i, j)), 0)


def _check_word(c, bits):
    if not 0 <= c < 1 << bits:
        raise InvalidArguments(f"coefficient {c:#x} does not fit in {bits} bits")


@dataclass(frozen=True)
class AffineMap:
    """x -> (matrix . x) XOR offset.

    ``matrix`` lists the images of the unit vectors: matrix[i] is the
    dim_out-bit column selected by bit i of x.
    """

    dim_in: int
    dim_out: int
    matrix: tuple
    offset: int = 0

    def __post_init__(self):
        cols = tuple(int(c) for c in self.matrix)
        if len(cols) != self.dim_in:
            raise InvalidAffine(f"need {self.dim_in} columns, got {len(cols)}")
        for c in cols + (self.offset,):
            if not 0 <= c < 1 << self.dim_out:
                raise InvalidAffine(f"word {c:#x} does not fit in {self.dim_out} bits")
        object.__setattr__(self, "matrix", cols)

    def __call__(self, x):
        y = self.offset
        i = 0
        while x:
            if x & 1:
                y ^= self.matrix[i]
            x >>= 1
            i += 1
        return y

    def apply_array(self, xs):
        xs = np.asarray(xs, dtype=np.uint64)
        out = np.full(xs.shape, self.offset, dtype=np.uint64)
        for i, c in enumerate(self.matrix):
            out ^= ((xs >> np.uint64(i)) & np.uint64(1)) * np.uint64(c)
        return out

    def is_invertible(self):
        return self.dim_in == self.dim_out and rank_gf2(self.matrix) == self.dim_in

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(1 << i for i in range(n)), 0)

    @classmethod
    def zero(cls, dim_in, dim_out):
        return cls(dim_in, dim_out, (0,) * dim_in, 0)

    @classmethod
    def random(cls, dim_in, dim_out, rng, invertible=False):
        while True:
            cols = tuple(int(c) for c in rng.integers(0, 1 << dim_out, size=dim_in))
            off = int(rng.integers(0, 1 << dim_out))
            amap = cls(dim_in, dim_out, cols, off)
            if not invertible or amap.is_invertible():
                return amap


# constructors

def from_truth_table(n, m, words, provenance=None):
    arr = words if isinstance(words, np.ndarray) else np.asarray(list(words), dtype=np.int64)
    return VBF(n, m, arr, provenance)


def from_univariate(ctx, coeffs, provenance=None):
    """Evaluate sum b_i X^i at every element of ctx's field."""
    xs = gf2n.elements(ctx)
    out = np.zeros(ctx.order, dtype=np.uint64)
    for e, b in sorted(coeffs.items()):
        if not 0 <= e < ctx.order:
            raise InvalidArguments(f"exponent {e} outside [0, 2^{ctx.n} - 1]")
        if b == 0:
            continue
        term = gf2n.power_array(ctx, xs, e)
        if b != 1:
            term = gf2n.mul_array(ctx, term, np.uint64(b))
        out ^= term
    prov = {"family": "univariate", "coeffs": {int(e): int(b) for e, b in coeffs.items()},
            **ctx.describe()}
    prov.update(provenance or {})
    return VBF(ctx.n, ctx.n, out, prov)


def from_anf(anf, provenance=None):
    n = anf.n
    xs = np.arange(1 << n, dtype=np.uint64)
    out = np.full(1 << n, anf.a_const, dtype=np.uint64)
    bits = [((xs >> np.uint64(k)) & np.uint64(1)) for k in range(n)]
    for k, c in enumerate(anf.a_lin):
        if c:
            out ^= bits[k] * np.uint64(c)
    for (i, j), c in anf.a_quad.items():
        out ^= (bits[i - 1] & bits[j - 1]) * np.uint64(c)
    prov = {"family": "anf"}
    prov.update(provenance or {})
    return VBF(n, anf.m, out, prov)


def moebius(table):
    """Binary Moebius transform of a word array (self-inverse)."""
    a = np.array(table, dtype=np.uint64)
    size = a.shape[0]
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a[:, 1, :] ^= a[:, 0, :]
        a = a.reshape(size)
        h <<= 1
    return a


def to_anf(f):
    """Full ANF: coefficient a_I stored at the index whose set bits form I."""
    return moebius(f.table)


def degree(f):
    coeffs = to_anf(f)
    idx = np.nonzero(coeffs)[0]
    if idx.size == 0:
        return 0
    return max(popcount(int(i)) for i in idx)


def is_quadratic(f, probes=16, seed=0):
    quad = degree(f) <= 2
    if quad and f.n >= 2:
        # second derivatives of a quadratic map are constant
        rng = np.random.default_rng(seed)
        xs = np.arange(1 << f.n, dtype=np.uint64)
        t = f.table64
        for a, b in rng.integers(0, 1 << f.n, size=(probes, 2)):
            d2 = t[xs] ^ t[xs ^ np.uint64(a)] ^ t[xs ^ np.uint64(b)] ^ t[xs ^ np.uint64(a ^ b)]
            assert np.all(d2 == d2[0]), "degree <= 2 but a second derivative is not constant"
    return quad


def to_quadratic_anf(f):
    coeffs = to_anf(f)
    quad, lin = {}, [0] * f.n
    for idx in np.nonzero(coeffs)[0]:
        idx = int(idx)
        c = int(coeffs[idx])
        w = popcount(idx)
        if w > 2:
            raise PreconditionError(f"function has degree > 2 (monomial {idx:#x})")
        if w == 1:
            lin[idx.bit_length() - 1] = c
        elif w == 2:
            lo = (idx & -idx).bit_length()
            hi = idx.bit_length()
            quad[(lo, hi)] = c
    return QuadraticAnf(f.n, f.m, quad, tuple(lin), int(coeffs[0]))


def restrict(f, basis):
    """(k, m)-function y -> f(sum y_i basis[i])."""
    if basis.ambient_n != f.n:
        raise InvalidBasis(f"basis lives in F_2^{basis.ambient_n}, function in F_2^{f.n}")
    if rank_gf2(basis.vectors) != len(basis.vectors) or not basis.vectors:
        raise InvalidBasis("basis is rank deficient")
    pts = span_array(basis.vectors)
    prov = dict(f.provenance)
    prov["restriction_basis"] = [hex(v) for v in basis.vectors]
    return VBF(basis.dim, f.m, f.table[pts], prov)


def normalize(f):
    prov = dict(f.provenance)
    prov["normalized"] = True
    return VBF(f.n, f.m, f.table ^ f.table[0], prov)


def ea_transform(f, a1, a2, add):
    """x -> a1(f(a2(x))) XOR add(x)."""
    if (a1.dim_in, a1.dim_out) != (f.m, f.m) or (a2.dim_in, a2.dim_out) != (f.n, f.n):
        raise InvalidAffine("affine map dimensions do not match the function")
    if (add.dim_in, add.dim_out) != (f.n, f.m):
        raise InvalidAffine("added map must go from F_2^n to F_2^m")
    if not a1.is_invertible() or not a2.is_invertible():
        raise InvalidAffine("outer and inner maps must be invertible")
    xs = np.arange(1 << f.n, dtype=np.uint64)
    inner = a2.apply_array(xs)
    out = a1.apply_array(f.table64[inner]) ^ add.apply_array(xs)
    prov = dict(f.provenance)
    prov["ea_transformed"] = True
    return VBF(f.n, f.m, out, prov)


def derivative(f, a, x):
    return int(f.table[x] ^ f.table[x ^ a])


def second_derivative(f, a, b, x):
    t = f.table
    return int(t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b])


# file formats

def write_truth_table(f, path):
    width = max(1, (f.m + 3) // 4)
    lines = [f"vbf n={f.n} m={f.m}"]
    lines += [f"{int(v):0{width}x}" for v in f.table]
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_header(line, kind):
    parts = line.split()
    if not parts or parts[0] != kind:
        raise ParseError(f"expected header '{kind} n=<n> m=<m>', got {line!r}")
    kv = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
    try:
        return int(kv["n"]), int(kv["m"])
    except (KeyError, ValueError):
        raise ParseError(f"header {line!r} lacks n= and m=") from None


def _content_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def read_truth_table(path):
    lines = list(_content_lines(Path(path).read_text()))
    if not lines:
        raise ParseError(f"{path}: empty file")
    n, m = _parse_header(lines[0], "vbf")
    try:
        words = [int(w, 16) for w in lines[1:]]
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return from_truth_table(n, m, words, {"family": "truth-table", "path": str(path)})


def write_anf(anf, path):
    lines = [f"anf n={anf.n} m={anf.m}"]
    lines += [f"{i} {j} {c:x}" for (i, j), c in sorted(anf.a_quad.items())]
    lines += [f"{k} {c:x}" for k, c in enumerate(anf.a_lin, start=1) if c]
    if anf.a_const:
        lines.append(f"0 {anf.a_const:x}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_anf(path):
    lines = list(_content_lines(Path(path).read_text()))
    if not lines:
        raise ParseError(f"{path}: empty file")
    n, m = _parse_header(lines[0], "anf")
    quad, lin, const = {}, [0] * n, 0
    for line in lines[1:]:
        toks = line.split()
        try:
            if len(toks) == 3:
                i, j, c = int(toks[0]), int(toks[1]), int(toks[2], 16)
                key = (min(i, j), max(i, j))
                quad[key] = quad.get(key, 0) ^ c
            elif len(toks) == 2:
                k, c = int(toks[0]), int(toks[1], 16)
                if k == 0:
                    const ^= c
                elif 1 <= k <= n:
                    lin[k - 1] ^= c
                else:
                    raise ParseError(f"{path}: variable index {k} outside 1..{n}")
            else:
                raise ParseError(f"{path}: cannot parse line {line!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"{path}: {exc}") from None
    return QuadraticAnf(n, m, quad, tuple(lin), const)
