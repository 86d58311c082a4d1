"""Walsh spectra, difference distribution rows and plateaued structure.

Everything is computed row-wise (one component v or one difference a at a
time); the full 2^n x 2^m tables are never materialised.
"""
import csv
from dataclasses import dataclass, field

import numpy as np

from ._bits import parity_array
from .errors import InvalidArguments

_BLOCK_ELEMS = 1 << 21


def fwht(a, axis=-1):
    """Unnormalised Walsh-Hadamard transform along ``axis`` (exact for integer input)."""
    a = np.array(a, copy=True)
    a = np.moveaxis(a, axis, -1)
    shape = a.shape
    size = shape[-1]
    if size & (size - 1):
        raise InvalidArguments("transform length must be a power of two")
    h = 1
    while h < size:
        a = a.reshape(shape[:-1] + (size // (2 * h), 2, h))
        lo = a[..., 0, :].copy()
        hi = a[..., 1, :]
        a[..., 0, :] += hi
        a[..., 1, :] = lo - hi
        h <<= 1
    return np.moveaxis(a.reshape(shape), -1, axis)


def sign_rows(f, vs):
    """(-1)^{v . F(x)} for each v in ``vs`` (rows) and x (columns)."""
    vs = np.asarray(vs, dtype=np.uint64).reshape(-1, 1)
    return 1 - 2 * parity_array(f.table64[None, :] & vs).astype(np.int64)


def walsh_block(f, vs):
    """Walsh rows W_F(., v) for several components at once, shape (len(vs), 2^n)."""
    return fwht(sign_rows(f, vs), axis=1)


def iter_walsh_blocks(f, vs=None):
    """Yield (vs_block, walsh_block) covering every component in ``vs`` (default: all of F_2^m)."""
    if vs is None:
        vs = np.arange(1 << f.m, dtype=np.uint64)
    vs = np.asarray(vs, dtype=np.uint64)
    rows = max(1, _BLOCK_ELEMS >> f.n)
    for start in range(0, vs.shape[0], rows):
        chunk = vs[start:start + rows]
        yield chunk, walsh_block(f, chunk)


@dataclass
class WalshRow:
    v: int
    values: np.ndarray

    def parseval_ok(self):
        n = self.values.shape[0].bit_length() - 1
        return int(np.sum(self.values.astype(object) ** 2)) == 1 << (2 * n)


@dataclass
class DdtRow:
    a: int
    counts: np.ndarray

    @property
    def support(self):
        return np.nonzero(self.counts)[0]


def walsh_row(f, v):
    if not 0 <= v < 1 << f.m:
        raise InvalidArguments(f"component {v:#x} outside F_2^{f.m}")
    return WalshRow(int(v), walsh_block(f, [v])[0])


def nonlinearity(f):
    best = 0
    for _, w in iter_walsh_blocks(f, np.arange(1, 1 << f.m, dtype=np.uint64)):
        best = max(best, int(np.abs(w).max()))
    # integer division is exact: max |W| is even for n >= 1
    return (1 << (f.n - 1)) - best // 2


def derivative_values(f, a):
    xs = np.arange(1 << f.n, dtype=np.uint64)
    t = f.table64
    return t ^ t[xs ^ np.uint64(a)]


def ddt_row(f, a):
    if not 0 < a < 1 << f.n:
        raise InvalidArguments("difference a must be a nonzero n-bit word")
    if f.m > 26:
        raise InvalidArguments("DDT rows are limited to m <= 26")
    counts = np.bincount(derivative_values(f, a).astype(np.int64), minlength=1 << f.m)
    return DdtRow(int(a), counts)


def _row_max(f, a):
    _, c = np.unique(derivative_values(f, a), return_counts=True)
    return int(c.max())


def differential_uniformity(f):
    return max(_row_max(f, a) for a in range(1, 1 << f.n))


def is_apn(f):
    return differential_uniformity(f) == 2


def autocorrelation_block(walsh):
    """Autocorrelation sum_x (-1)^{D_a F_v(x)} for every a, from the Walsh rows."""
    n = walsh.shape[1].bit_length() - 1
    sq = walsh.astype(np.int64) ** 2
    return fwht(sq, axis=1) >> n


def linear_structures(f, v):
    """V(v) = {a : D_a F_v is constant}, by direct scan over a."""
    vals = parity_array(f.table64 & np.uint64(v))
    xs = np.arange(1 << f.n)
    return [a for a in range(1 << f.n) if np.all((vals ^ vals[xs ^ a]) == (vals[0] ^ vals[a]))]


@dataclass
class PlateauedProfile:
    n: int
    m: int
    amplitudes: dict
    is_plateaued: bool
    structure_dims: dict
    partially_bent: set
    bent_set: set
    nonbent_set: list
    is_strongly_plateaued: bool = field(default=False)

    @property
    def bent_set_size(self):
        return len(self.bent_set)

    def amplitude_histogram(self):
        hist = {}
        for lam in self.amplitudes.values():
            key = "not-plateaued" if lam is None else str(lam)
            hist[key] = hist.get(key, 0) + 1
        return dict(sorted(hist.items()))


def plateaued_profile(f):
    """Amplitude, linear-structure dimension and bentness of every nonzero component."""
    if 3 * f.n > 62:
        raise InvalidArguments("plateaued profile is limited to n <= 20")
    full = 1 << f.n
    amplitudes, dims = {}, {}
    pb, bent = set(), set()
    half = 1 << (f.n // 2) if f.n % 2 == 0 else None
    for vs, w in iter_walsh_blocks(f, np.arange(1, 1 << f.m, dtype=np.uint64)):
        absw = np.abs(w)
        peak = absw.max(axis=1)
        flat = np.all((absw == 0) | (absw == peak[:, None]), axis=1)
        ac = autocorrelation_block(w)
        absac = np.abs(ac)
        pbent = np.all((absac == 0) | (absac == full), axis=1)
        nstruct = np.count_nonzero(absac == full, axis=1)
        for k, v in enumerate(vs):
            v = int(v)
            if peak[k] == 0:
                raise AssertionError(f"component {v:#x} has an all-zero Walsh row")
            amplitudes[v] = int(peak[k]) if flat[k] else None
            if pbent[k]:
                pb.add(v)
                dims[v] = int(nstruct[k]).bit_length() - 1
            if half is not None and np.all(absw[k] == half):
                bent.add(v)
    plateaued = all(lam is not None for lam in amplitudes.values())
    nonbent = sorted(v for v in amplitudes if v not in bent)
    return PlateauedProfile(
        f.n, f.m, amplitudes, plateaued, dims, pb, bent, nonbent,
        is_strongly_plateaued=len(pb) == len(amplitudes),
    )


def delta_set(f, a):
    """Delta_a = {v : D_a F_v constant}, always a subspace of F_2^m containing 0."""
    if not 0 < a < 1 << f.n:
        raise InvalidArguments("a must be a nonzero n-bit word")
    d = derivative_values(f, a)
    diffs = np.unique(d ^ d[0])
    vs = np.arange(1 << f.m, dtype=np.uint64)
    ok = np.ones(vs.shape[0], dtype=bool)
    for s in diffs:
        ok &= parity_array(vs & s) == 0
    return set(int(v) for v in np.nonzero(ok)[0])


# 2-dimensional planes

def count_affine_planes(n):
    return (1 << n) * ((1 << n) - 1) * ((1 << (n - 1)) - 1) // 12


def count_vector_planes(n):
    return ((1 << n) - 1) * ((1 << (n - 1)) - 1) // 3


def plane_directions(n):
    """Canonical basis pairs (a, b) of every 2-dimensional subspace: a < b < a ^ b."""
    for a in range(1, 1 << n):
        for b in range(a + 1, 1 << n):
            if b < a ^ b and a < a ^ b:
                yield a, b


@dataclass
class PhiImage:
    planes: str
    n_planes: int
    values: set
    witnesses: dict

    def __contains__(self, value):
        return value in self.values


def phi_image(f, planes="affine"):
    """Image of A -> sum_{x in A} F(x) over 2-dim affine planes (or vector planes).

    Each plane is visited once through its canonical representative: the
    canonical direction pair and the smallest element of the coset.
    Witnesses map each value to one plane (x, x^a, x^b, x^a^b).
    """
    if planes not in ("affine", "vector"):
        raise InvalidArguments("planes must be 'affine' or 'vector'")
    t = f.table64
    xs = np.arange(1 << f.n, dtype=np.uint64)
    values, witnesses = set(), {}
    total = 0
    for a, b in plane_directions(f.n):
        ua, ub = np.uint64(a), np.uint64(b)
        if planes == "vector":
            reps = np.zeros(1, dtype=np.uint64)
        else:
            reps = xs[(xs < (xs ^ ua)) & (xs < (xs ^ ub)) & (xs < (xs ^ ua ^ ub))]
        vals = t[reps] ^ t[reps ^ ua] ^ t[reps ^ ub] ^ t[reps ^ ua ^ ub]
        total += reps.shape[0]
        uniq, idx = np.unique(vals, return_index=True)
        for val, i in zip(uniq.tolist(), idx.tolist()):
            if val not in witnesses:
                x = int(reps[i])
                witnesses[val] = (x, x ^ a, x ^ b, x ^ a ^ b)
        values.update(uniq.tolist())
    return PhiImage(planes, total, values, witnesses)


def write_csv(values, path_or_file, header=("index", "value")):
    """Dump a row as index,value lines."""
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, v in enumerate(values):
            w.writerow([i, int(v)])
    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)

