"""D-property checkers.

A function F has the D-property when F(x)+F(y)+F(z)+F(x+y+z) takes every
value of F_2^m. Each checker below computes the same attained set through a
different characterisation, so verdicts and missing sets must coincide.
"""
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import SimpleNamespace

import numpy as np

from . import spectra
from ._bits import max_bits, parity, parity_array, rank_gf2, span_array
from .errors import InvalidArguments, InvalidBasis, PreconditionError, SizeLimitError, StructuralMismatch
from .gf2n import SubspaceBasis
from .vbf import from_anf, is_quadratic, normalize, to_quadratic_anf

D_FUNCTION = "D-function"
NOT_D_FUNCTION = "not-D-function"
METHODS = (
    "bruteforce", "ddt", "moment4", "moment3-quadratic",
    "hyperplane-quadratic", "anf-span", "plateaued",
)
MISSING_LIMIT = 32
SCHEMA = "dreport/1"

_SCAN_ELEMS = 1 << 20


@dataclass
class DReport:
    n: int
    m: int
    method: str
    verdict: str
    covered: int
    missing: list
    missing_total: int
    witnesses: dict = field(default_factory=dict)
    modulus: str = None
    provenance: dict = field(default_factory=dict)
    threads: int = 1
    elapsed_ms: float = 0.0
    runtime_note: str = ""
    extras: dict = field(default_factory=dict, repr=False)

    @property
    def is_d(self):
        return self.verdict == D_FUNCTION

    def to_json(self):
        return {
            "schema": SCHEMA,
            "n": self.n,
            "m": self.m,
            "method": self.method,
            "verdict": self.verdict,
            "covered": self.covered,
            "missing_total": self.missing_total,
            "missing": [hex(v) for v in self.missing],
            "witnesses": {
                hex(val): {"a": hex(w[0]), "b": hex(w[1]), **({"x": hex(w[2])} if len(w) > 2 else {})}
                for val, w in sorted(self.witnesses.items())
            },
            "modulus": self.modulus,
            "provenance": _jsonable(self.provenance),
            "threads": self.threads,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _report(f, method, attained, t0, *, witnesses=None, full_missing=False, threads=1, note="",
            extras=None):
    """Build a report from a boolean coverage array over F_2^m."""
    missing_idx = np.nonzero(~attained)[0]
    total = int(missing_idx.shape[0])
    shown = missing_idx if full_missing else missing_idx[:MISSING_LIMIT]
    return DReport(
        n=f.n,
        m=f.m,
        method=method,
        verdict=D_FUNCTION if total == 0 else NOT_D_FUNCTION,
        covered=int(attained.shape[0]) - total,
        missing=[int(v) for v in shown],
        missing_total=total,
        witnesses=dict(witnesses or {}),
        modulus=f.provenance.get("modulus"),
        provenance=dict(f.provenance),
        threads=threads,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        runtime_note=note,
        extras=extras or {},
    )


def _guard_coverage(f):
    if f.m > max_bits(28):
        raise SizeLimitError(f"coverage set of 2^{f.m} values exceeds the size guard")


def _require_quadratic(f, method):
    if not is_quadratic(f):
        raise PreconditionError(f"{method} requires a quadratic function")


class _Coverage:
    """Shared bitset over F_2^m with optional first-witness tracking."""

    def __init__(self, m, witnesses):
        self.size = 1 << m
        self.seen = np.zeros(self.size, dtype=bool)
        self.want = witnesses
        self.witnesses = {}
        self.done = threading.Event()
        self.lock = threading.Lock()

    def add(self, vals, decode):
        vals = vals.ravel()
        if self.want:
            uniq, idx = np.unique(vals, return_index=True)
            with self.lock:
                new = ~self.seen[uniq]
                for val, i in zip(uniq[new].tolist(), idx[new].tolist()):
                    self.witnesses[val] = decode(i)
                self.seen[uniq] = True
        else:
            self.seen[vals] = True
        if np.count_nonzero(self.seen) == self.size:
            self.done.set()


def _run_blocks(cov, n_blocks, block_fn, threads):
    """Evaluate blocks 0..n_blocks-1, merging into ``cov``; stop once coverage is full."""
    if threads <= 1 or n_blocks <= 1:
        for k in range(n_blocks):
            if cov.done.is_set():
                break
            cov.add(*block_fn(k))
        return

    def worker(w):
        for k in range(w, n_blocks, threads):
            if cov.done.is_set():
                return
            cov.add(*block_fn(k))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(worker, range(threads)))


def _mode_note(threads):
    if threads <= 1:
        return "single-threaded scan; witnesses are the first hits in scan order"
    return f"{threads}-thread scan; witnesses depend on scheduling"


def _pair_scan(t, alphas, betas, m, witnesses, threads):
    """Coverage of t[a] ^ t[b] ^ t[a ^ b] over a in alphas, b in betas (t normalised)."""
    cov = _Coverage(m, witnesses)
    rows = max(1, _SCAN_ELEMS // max(1, betas.shape[0]))
    n_blocks = -(-alphas.shape[0] // rows)
    tb = t[betas]

    def block(k):
        a = alphas[k * rows:(k + 1) * rows]
        vals = t[a][:, None] ^ tb[None, :] ^ t[a[:, None] ^ betas[None, :]]

        def decode(i):
            ai, bi = divmod(i, betas.shape[0])
            return (int(a[ai]), int(betas[bi]), 0)
        return vals, decode

    _run_blocks(cov, n_blocks, block, threads)
    return cov


# checkers

def d_check_bruteforce(f, witnesses=False, full_missing=False, threads=1):
    """Direct scan of the attained set.

    Quadratic input: all D^2_{a,b}F(0), i.e. F(a)+F(b)+F(a+b) after
    normalisation. Otherwise all F(x)+F(y)+F(z)+F(x+y+z); witnesses are
    (a, b, x) with D^2_{a,b}F(x) equal to the value.
    """
    t0 = time.perf_counter()
    _guard_coverage(f)
    g = normalize(f)
    t = g.table64
    xs = np.arange(1 << f.n, dtype=np.uint64)
    if is_quadratic(f):
        if 2 * f.n > max_bits(34):
            raise SizeLimitError("pair scan exceeds the size guard; use hyperplane-quadratic")
        cov = _pair_scan(t, xs, xs, f.m, witnesses, threads)
        note = "quadratic pair scan; " + _mode_note(threads)
    else:
        if 3 * f.n > max_bits(30):
            raise SizeLimitError(
                f"triple scan over 2^{3 * f.n} points exceeds the size guard; use the ddt or moment4 method"
            )
        cov = _Coverage(f.m, witnesses)
        yz = xs[:, None] ^ xs[None, :]
        fyz = t[:, None] ^ t[None, :]

        def block(x):
            ux = np.uint64(x)
            vals = t[x] ^ fyz ^ t[yz ^ ux]

            def decode(i):
                y, z = divmod(i, 1 << f.n)
                return (x ^ y, x ^ z, x)
            return vals, decode

        _run_blocks(cov, 1 << f.n, block, threads)
        note = "general triple scan; " + _mode_note(threads)
    return _report(f, "bruteforce", cov.seen, t0, witnesses=cov.witnesses, full_missing=full_missing,
                   threads=threads, note=note)


def d_check_ddt(f, witnesses=False, full_missing=False):
    """Union over rows alpha of the pairwise sums of the DDT row support."""
    t0 = time.perf_counter()
    _guard_coverage(f)
    cov = _Coverage(f.m, witnesses)
    t = f.table64
    xs = np.arange(1 << f.n, dtype=np.uint64)
    for alpha in range(1, 1 << f.n):
        if cov.done.is_set():
            break
        d = t ^ t[xs ^ np.uint64(alpha)]
        support, first_x = np.unique(d, return_index=True)
        vals = support[:, None] ^ support[None, :]

        def decode(i, alpha=alpha, first_x=first_x):
            i1, i2 = divmod(i, first_x.shape[0])
            w1, w2 = int(first_x[i1]), int(first_x[i2])
            return (alpha, w1 ^ w2, w1)
        cov.add(vals, decode)
    return _report(f, "ddt", cov.seen, t0, witnesses=cov.witnesses, full_missing=full_missing)


def _exact_dtype(bits):
    return np.int64 if bits <= 62 else object


def walsh_moment(f, power, normalized=False):
    """H(v) = sum_u W_F(u, v)^power for every v in F_2^m."""
    g = normalize(f) if normalized else f
    dtype = _exact_dtype(power * f.n + f.m + 1)
    out = np.zeros(1 << f.m, dtype=dtype)
    for vs, w in spectra.iter_walsh_blocks(g):
        w = w.astype(dtype)
        out[vs.astype(np.int64)] = np.sum(w ** power, axis=1)
    return out


def hadamard(values):
    """Fourier-Hadamard transform of a pseudo-Boolean function given as a table."""
    return spectra.fwht(values)


def _moment_guard(f):
    if f.n + f.m > max_bits(28):
        raise SizeLimitError(f"n + m = {f.n + f.m} exceeds the moment size guard")


def d_check_moment4(f, b_filter=None, full_missing=False):
    """Positivity of the Fourier-Hadamard transform of H_4(v) = sum_u W^4(u, v) at b != 0.

    The transform at b equals 2^(n+m) times the number of triples with
    F(x)+F(y)+F(z)+F(x+y+z) = b; those counts are kept in ``extras``.
    """
    t0 = time.perf_counter()
    _moment_guard(f)
    h4 = walsh_moment(f, 4)
    transform = hadamard(h4)
    scale = 1 << (f.n + f.m)
    if any(int(v) % scale for v in transform):
        raise AssertionError("fourth-moment transform is not a multiple of 2^(n+m)")
    counts = transform // scale
    attained = np.asarray(counts > 0, dtype=bool)
    note = ""
    if b_filter is not None:
        keep = np.zeros_like(attained)
        keep[np.asarray(list(b_filter), dtype=np.int64)] = True
        attained = attained | ~keep
        note = "restricted to the requested b values"
    return _report(f, "moment4", attained, t0, full_missing=full_missing, note=note,
                   extras={"transform": transform, "triple_counts": counts})


def d_check_moment3_quadratic(f, full_missing=False):
    """Positivity of the transform of H_3(v) = sum_u W^3(u, v) for normalised quadratic F.

    W_{F+b}(u, v) = (-1)^{v.b} W_F(u, v), so the transform at b is the cubic
    moment of F + b.
    """
    t0 = time.perf_counter()
    _require_quadratic(f, "moment3-quadratic")
    _moment_guard(f)
    h3 = walsh_moment(f, 3, normalized=True)
    transform = hadamard(h3)
    scale = 1 << (f.n + f.m)
    if any(int(v) % scale for v in transform):
        raise AssertionError("cubic-moment transform is not a multiple of 2^(n+m)")
    counts = transform // scale
    return _report(f, "moment3-quadratic", np.asarray(counts > 0, dtype=bool), t0,
                   full_missing=full_missing,
                   extras={"transform": transform, "pair_counts": counts, "zero_value": transform[0]})


def gray_span(basis):
    """Span of ``basis`` enumerated in Gray-code order (one XOR between neighbours)."""
    out = np.zeros(1 << len(basis), dtype=np.uint64)
    cur = 0
    for i in range(1, out.shape[0]):
        cur ^= basis[(i & -i).bit_length() - 1]
        out[i] = cur
    return out


def d_check_hyperplane_quadratic(f, k_basis=None, witnesses=False, full_missing=False, threads=1):
    """Scan D^2_{alpha,beta}F(0) with alpha restricted to an (n-1)-dim subspace K."""
    t0 = time.perf_counter()
    _require_quadratic(f, "hyperplane-quadratic")
    _guard_coverage(f)
    if k_basis is None:
        k_basis = SubspaceBasis.standard(f.n, f.n - 1)
    if k_basis.ambient_n != f.n or k_basis.dim != f.n - 1:
        raise InvalidBasis(f"K must be an {f.n - 1}-dimensional subspace of F_2^{f.n}")
    t = normalize(f).table64
    alphas = gray_span(k_basis.vectors)
    betas = np.arange(1 << f.n, dtype=np.uint64)
    cov = _pair_scan(t, alphas, betas, f.m, witnesses, threads)
    return _report(f, "hyperplane-quadratic", cov.seen, t0, witnesses=cov.witnesses,
                   full_missing=full_missing, threads=threads, note=_mode_note(threads),
                   extras={"k_basis": [hex(v) for v in k_basis.vectors]})


def _echelon(vectors, tags):
    """Reduced basis with combination tags: returns [(vec, tag)], vec unique per pivot."""
    pivots = {}
    for v, tag in zip(vectors, tags):
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, tag)
                break
            pv, pt = pivots[top]
            v ^= pv
            tag ^= pt
    # full reduction so the key is canonical
    keys = sorted(pivots)
    for top in keys:
        v, tag = pivots[top]
        for other in keys:
            if other != top and pivots[other][0] >> top & 1:
                ov, ot = pivots[other]
                pivots[other] = (ov ^ v, ot ^ tag)
    return [pivots[k] for k in keys]


def anf_generators(anf, alpha):
    """g_i = D^2_{alpha, e_i}F(0) = sum_{j != i, alpha_j = 1} a_{i,j}, for i = 1..n."""
    gens = []
    for i in range(1, anf.n + 1):
        g = 0
        for j in range(1, anf.n + 1):
            if j != i and alpha >> (j - 1) & 1:
                g ^= anf.coeff(i, j)
        gens.append(g)
    return gens


def d_check_anf_span(anf, witnesses=False, full_missing=False, provenance=None):
    """Union over J of span{sum_{j in J minus i} a_{i,j} : i = 1..n}."""
    t0 = time.perf_counter()
    if anf.n > max_bits(20):
        raise SizeLimitError("anf-span loops over 2^(n-1) subsets; n exceeds the size guard")
    if anf.m > max_bits(28):
        raise SizeLimitError("coverage exceeds the size guard")
    seen = np.zeros(1 << anf.m, dtype=bool)
    wit = {}
    full = 1 << anf.m
    done_spans = set()
    n = anf.n
    # Gray-code walk over J subset of {1..n-1}: toggling j updates every g_i by a_{i,j}
    gens = [0] * n
    alpha = 0
    for step in range(1 << (n - 1)):
        if step:
            j = (step & -step).bit_length()  # 1-indexed variable toggled
            alpha ^= 1 << (j - 1)
            for i in range(1, n + 1):
                gens[i - 1] ^= anf.coeff(i, j)
        basis = _echelon(gens, [1 << i for i in range(n)])
        key = tuple(v for v, _ in basis)
        if key in done_spans and not witnesses:
            continue
        done_spans.add(key)
        vals = span_array([v for v, _ in basis])
        if witnesses:
            betas = span_array([tag for _, tag in basis])
            new = ~seen[vals]
            for val, beta in zip(vals[new].tolist(), betas[new].tolist()):
                wit[val] = (alpha, beta, 0)
        seen[vals] = True
        if np.count_nonzero(seen) == full:
            break
    meta = SimpleNamespace(n=anf.n, m=anf.m, provenance=dict(provenance or {"family": "anf"}))
    return _report(meta, "anf-span", seen, t0, witnesses=wit, full_missing=full_missing)


@dataclass(frozen=True)
class UltraTransitiveSet:
    """Set of 1-indexed off-diagonal pairs closed under (i,j),(l,k) -> (i,k) for i != k."""

    n: int
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        for i, j in pairs:
            if i == j or not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvalidArguments(f"pair ({i}, {j}) is not off-diagonal in [{self.n}]^2")
        object.__setattr__(self, "pairs", pairs)

    @property
    def reduced(self):
        """Drop every symmetric couple {(i,j), (j,i)} fully contained in the set."""
        return frozenset(p for p in self.pairs if (p[1], p[0]) not in self.pairs)

    def is_ultra_transitive(self):
        if not self.pairs:
            return False
        firsts = {i for i, _ in self.pairs}
        seconds = {k for _, k in self.pairs}
        return all((i, k) in self.pairs for i in firsts for k in seconds if i != k)

    def coefficient_sum(self, anf, reduced=True):
        s = 0
        for i, j in (self.reduced if reduced else self.pairs):
            s ^= anf.coeff(i, j)
        return s

    @classmethod
    def from_directions(cls, n, alpha1, alpha2):
        """(Supp(alpha1) x Supp(alpha2)) minus the diagonal."""
        s1 = [i + 1 for i in range(n) if alpha1 >> i & 1]
        s2 = [j + 1 for j in range(n) if alpha2 >> j & 1]
        return cls(n, frozenset((i, j) for i in s1 for j in s2 if i != j))


def _kernel(gens, n):
    """Kernel of beta -> XOR of gens[i] over set bits i of beta."""
    kernel = []
    pivots = {}
    for i, g in enumerate(gens):
        v, tag = g, 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = (v, tag)
                break
            pv, pt = pivots[top]
            v ^= pv
            tag ^= pt
        if not v:
            kernel.append(tag)
    return kernel


def apn_check_anf(anf):
    """APN test for a quadratic ANF.

    For each nonzero alpha the kernel of beta -> D^2_{alpha,beta}F(0) must be
    exactly {0, alpha}. Returns (is_apn, witness) where the witness is the
    ultra-transitive set (Supp(alpha) x Supp(beta)) minus the diagonal, whose
    reduced coefficient sum vanishes.
    """
    n = anf.n
    for alpha in range(1, 1 << n):
        gens = anf_generators(anf, alpha)
        if rank_gf2(gens) == n - 1:
            continue
        kern = span_array(_kernel(gens, n)).tolist()
        beta = next(int(b) for b in kern if b not in (0, alpha))
        witness = UltraTransitiveSet.from_directions(n, alpha, beta)
        if witness.coefficient_sum(anf) != 0 or not witness.reduced:
            raise AssertionError("ultra-transitive witness does not replay")
        return False, witness
    return True, None


def plateaued_lambda_table(profile):
    """Lambda(0) = 2^(2n), Lambda(v) = lambda_v^2 otherwise."""
    dtype = _exact_dtype(2 * profile.n + profile.m + 1)
    lam = np.zeros(1 << profile.m, dtype=dtype)
    lam[0] = 1 << (2 * profile.n)
    for v, a in profile.amplitudes.items():
        lam[v] = a * a
    return lam


def d_check_plateaued(f, profile=None, full_missing=False):
    """Positivity of 2^(2n) + sum_{v != 0} lambda_v^2 (-1)^{v.w} at every w.

    The transform divided by 2^m counts the pairs (a, b) with
    D^2_{a,b}F(x) = w; that count does not depend on x.
    """
    t0 = time.perf_counter()
    if profile is None:
        profile = spectra.plateaued_profile(f)
    if not profile.is_plateaued:
        raise PreconditionError("plateaued method requires a plateaued function")
    transform = hadamard(plateaued_lambda_table(profile))
    scale = 1 << f.m
    if any(int(v) % scale for v in transform) or transform.min() < 0:
        raise AssertionError("plateaued transform is not a non-negative multiple of 2^m")
    counts = transform // scale
    return _report(f, "plateaued", np.asarray(counts > 0, dtype=bool), t0, full_missing=full_missing,
                   extras={"transform": transform, "pair_counts": counts})


def plateaued_image(f):
    """{F(x)+F(y)+F(x+y)} for normalised F, computed directly."""
    t = normalize(f).table64
    xs = np.arange(1 << f.n, dtype=np.uint64)
    seen = np.zeros(1 << f.m, dtype=bool)
    seen[(t[:, None] ^ t[None, :] ^ t[xs[:, None] ^ xs[None, :]]).ravel()] = True
    return seen


@dataclass
class OmegaReport:
    n: int
    omega: np.ndarray
    threshold: float
    verdict: str
    missing: list
    structure: dict

    @property
    def is_d(self):
        return self.verdict == D_FUNCTION

    def min_omega(self):
        return int(self.omega.min())


def omega_report(f, profile=None):
    """|Omega_w| criterion for strongly plateaued APN (n, n+1)-functions, n even."""
    n = f.n
    if f.m != n + 1:
        raise StructuralMismatch(f"expected an (n, n+1)-function, got ({f.n}, {f.m})")
    if n % 2:
        raise StructuralMismatch("n must be even")
    if profile is None:
        profile = spectra.plateaued_profile(f)
    if not profile.is_strongly_plateaued:
        raise StructuralMismatch("function is not strongly plateaued")
    if not spectra.is_apn(f):
        raise StructuralMismatch("function is not APN")
    nb = profile.nonbent_set
    dims = profile.structure_dims
    structure = {
        "bent_count": profile.bent_set_size,
        "nonbent_count": len(nb),
        "nonbent_dims": sorted({dims[v] for v in nb}),
        "sum_2l_minus_1": sum((1 << dims[v]) - 1 for v in dims),
    }
    checks = [
        (profile.bent_set_size == 1 << n, f"|B| = {profile.bent_set_size}, expected 2^n = {1 << n}"),
        (len(nb) == (1 << n) - 1, f"|NB| = {len(nb)}, expected 2^n - 1 = {(1 << n) - 1}"),
        (all(dims[v] == 2 for v in nb), f"l_v on NB is {structure['nonbent_dims']}, expected 2"),
        (structure["sum_2l_minus_1"] == 3 * ((1 << n) - 1),
         f"sum (2^l_v - 1) = {structure['sum_2l_minus_1']}, expected {3 * ((1 << n) - 1)}"),
    ]
    for ok, msg in checks:
        if not ok:
            raise StructuralMismatch(msg)
    indicator = np.zeros(1 << f.m, dtype=np.int64)
    indicator[np.asarray(nb, dtype=np.int64)] = 1
    signed = hadamard(indicator)  # sum_{v in NB} (-1)^{v.w}
    omega = (len(nb) + signed) // 2
    threshold = ((1 << n) - 1) / 3
    bad = np.nonzero(3 * omega <= (1 << n) - 1)[0]
    return OmegaReport(
        n=n,
        omega=omega,
        threshold=threshold,
        verdict=D_FUNCTION if bad.size == 0 else NOT_D_FUNCTION,
        missing=[int(w) for w in bad],
        structure=structure,
    )


@dataclass(frozen=True)
class DimensionBounds:
    n: int
    quadratic: bool
    m_min: int
    m_max: int
    strict_upper: int
    planes: int

    def admits(self, m):
        return self.m_min <= m <= self.m_max


def dimension_bounds(n, quadratic=False):
    """Admissible output sizes m for an APN D-function on n input bits.

    General case: n <= m <= floor(log2(|AFF_{2,n}| + 1)) < 3n - 4.
    Quadratic case: n <= m <= floor(log2(|V_{2,n}| + 1)) = 2n - 3.
    """
    if quadratic:
        if n <= 3:
            raise InvalidArguments("quadratic bound needs n > 3")
        planes = spectra.count_vector_planes(n)
        strict = 2 * n - 2
    else:
        if n <= 2:
            raise InvalidArguments("general bound needs n > 2")
        planes = spectra.count_affine_planes(n)
        strict = 3 * n - 4
    m_max = (planes + 1).bit_length() - 1
    if m_max >= strict:
        raise AssertionError("bound is not below its closed form")
    return DimensionBounds(n, quadratic, n, m_max, strict, planes)


def second_order_spectrum(f, gamma, eta):
    """N_F(gamma, eta, omega) for every omega, as an array of 2^m counts."""
    if f.m > 26:
        raise InvalidArguments("spectrum arrays are limited to m <= 26")
    xs = np.arange(1 << f.n, dtype=np.uint64)
    t = f.table64
    g, e = np.uint64(gamma), np.uint64(eta)
    vals = t ^ t[xs ^ g] ^ t[xs ^ e] ^ t[xs ^ g ^ e]
    return np.bincount(vals.astype(np.int64), minlength=1 << f.m)


def second_order_totals(f):
    """sum_{gamma, eta} N_F(gamma, eta, omega) for every omega."""
    xs = np.arange(1 << f.n, dtype=np.uint64)
    t = f.table64
    totals = np.zeros(1 << f.m, dtype=np.int64)
    for gamma in range(1 << f.n):
        g = np.uint64(gamma)
        e = xs[:, None]
        x = xs[None, :]
        vals = t[x] ^ t[x ^ g] ^ t[x ^ e] ^ t[x ^ g ^ e]
        totals += np.bincount(vals.ravel().astype(np.int64), minlength=1 << f.m)
    return totals


def d_check_second_order(f, full_missing=False):
    """D-property read off the second-order differential spectrum."""
    t0 = time.perf_counter()
    totals = second_order_totals(f)
    return _report(f, "bruteforce", totals > 0, t0, full_missing=full_missing,
                   note="second-order differential spectrum")


@dataclass
class IdentityResult:
    name: str
    status: str
    reason: str = ""
    first_discrepancy: object = None
    checked: int = 0

    @property
    def holds(self):
        return self.status == "equal"


def _signs(rows, cols):
    rows = np.asarray(rows, dtype=np.uint64)[:, None]
    cols = np.asarray(cols, dtype=np.uint64)[None, :]
    return 1 - 2 * parity_array(rows & cols).astype(np.int64)


def _full_walsh(f):
    return spectra.walsh_block(f, np.arange(1 << f.m, dtype=np.uint64))


def verify_moment_identities(f, points=None):
    """Check the three moment / second-order-spectrum identities exactly.

    1. sum_{u,v} (-1)^{v.b} W_F^4(u,v) = 2^(n+m) sum N_F(., ., b)
    2. sum_{u,v} W_{F+b}^3(u,v)        = 2^m sum N_F(., ., b)   (quadratic, F(0) = 0)
    3. sum_{v != 0} lambda_v^2 (-1)^{v.w} = 2^(m-n) sum N_F(., ., w) - 2^(2n)   (plateaued)

    Left-hand sides come straight from the Walsh table; right-hand sides from
    the second-order differential spectrum.
    """
    if f.n + f.m > max_bits(22):
        raise SizeLimitError("moment identities are limited to n + m <= 22")
    n, m = f.n, f.m
    pts = np.arange(1 << m) if points is None else np.asarray(list(points), dtype=np.int64)
    totals = second_order_totals(f).astype(object)
    dtype = _exact_dtype(4 * n + m + 2)
    walsh = _full_walsh(f).astype(dtype)
    vs = np.arange(1 << m)
    signs = _signs(pts, vs).astype(dtype)
    results = []

    def compare(name, lhs, rhs):
        res = IdentityResult(name, "equal", checked=len(pts))
        for b, l, r in zip(pts.tolist(), lhs, rhs):
            if int(l) != int(r):
                res.status, res.first_discrepancy = "unequal", (b, int(l), int(r))
                break
        results.append(res)

    h4 = np.sum(walsh ** 4, axis=1)
    compare("fourth-moment", signs @ h4, [(1 << (n + m)) * totals[b] for b in pts.tolist()])

    if not is_quadratic(f):
        results.append(IdentityResult("cubic-moment-quadratic", "skipped", "function is not quadratic"))
    elif f.table[0] != 0:
        results.append(IdentityResult("cubic-moment-quadratic", "skipped", "function is not normalized"))
    else:
        lhs = []
        for b in pts.tolist():
            shifted = f.__class__(n, m, f.table ^ np.uint32(b))
            lhs.append(int(np.sum(_full_walsh(shifted).astype(dtype) ** 3)))
        compare("cubic-moment-quadratic", lhs, [(1 << m) * totals[b] for b in pts.tolist()])

    profile = spectra.plateaued_profile(f)
    if not profile.is_plateaued:
        results.append(IdentityResult("plateaued-amplitudes", "skipped", "function is not plateaued"))
    else:
        lam2 = np.zeros(1 << m, dtype=object)
        for v, lam in profile.amplitudes.items():
            lam2[v] = lam * lam
        lhs = (signs.astype(object) @ lam2) * (1 << n)
        # both sides scaled by 2^n so the comparison stays integral when m < n
        rhs = [(totals[w] << m) - (1 << (3 * n)) for w in pts.tolist()]
        compare("plateaued-amplitudes", lhs, rhs)
    return results


def check_d(f, method="auto", **kwargs):
    """Route to a checker: hyperplane for quadratics, ddt otherwise."""
    if method == "auto":
        if is_quadratic(f):
            method = "hyperplane-quadratic"
        elif 3 * f.n <= 18:
            method = "bruteforce"
        else:
            method = "ddt"
    if method == "bruteforce":
        return d_check_bruteforce(f, **kwargs)
    if method == "ddt":
        return d_check_ddt(f, **_only(kwargs, "witnesses", "full_missing"))
    if method == "moment4":
        return d_check_moment4(f, **_only(kwargs, "full_missing"))
    if method == "moment3-quadratic":
        return d_check_moment3_quadratic(f, **_only(kwargs, "full_missing"))
    if method == "hyperplane-quadratic":
        return d_check_hyperplane_quadratic(f, **_only(kwargs, "witnesses", "full_missing", "threads", "k_basis"))
    if method == "anf-span":
        _require_quadratic(f, "anf-span")
        return d_check_anf_span(to_quadratic_anf(f), provenance=f.provenance,
                                **_only(kwargs, "witnesses", "full_missing"))
    if method == "plateaued":
        return d_check_plateaued(f, **_only(kwargs, "full_missing"))
    raise InvalidArguments(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


def _only(kwargs, *names):
    return {k: v for k, v in kwargs.items() if k in names}


def applicable_methods(f, quadratic=None, plateaued=None):
    quadratic = is_quadratic(f) if quadratic is None else quadratic
    methods = ["ddt"]
    if quadratic or 3 * f.n <= max_bits(30):
        methods.insert(0, "bruteforce")
    if f.n + f.m <= max_bits(28):
        methods.append("moment4")
    if quadratic:
        if f.n + f.m <= max_bits(28):
            methods.append("moment3-quadratic")
        methods += ["hyperplane-quadratic", "anf-span"]
    if plateaued is None:
        plateaued = quadratic or (3 * f.n <= 62 and spectra.plateaued_profile(f).is_plateaued)
    if plateaued:
        methods.append("plateaued")
    return methods


def replay_witnesses(f, report):
    """True when every witness (a, b[, x]) reproduces its value via D^2_{a,b}F(x)."""
    t = f.table
    for val, w in report.witnesses.items():
        a, b = w[0], w[1]
        x = w[2] if len(w) > 2 else 0
        if int(t[x] ^ t[x ^ a] ^ t[x ^ b] ^ t[x ^ a ^ b]) != val:
            return False
    return True
