"""SL2(F_p) and GL2(F_p) acting on the projective line.

Points of P^1 are the integers 0..p with ``p`` standing for infinity. Functions
on F_p are extended to P^1 by f(infinity) = 0.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import reports
from .config import get_config
from .energy import energy
from .errors import DomainError, IndependenceError, check_guard
from .fpcore import (
    FieldCtx,
    SetFp,
    inverse_set,
    inverse_table,
    legendre,
    make_field,
    null_combination,
    parse_poly,
    parse_rational,
    poly_degree,
    poly_eval,
    poly_mul,
    sumset,
)
from .transform import IntFn, as_intfn

logger = logging.getLogger(__name__)

DENSE_MAX_P = 13
LIST_MAX_P = 31
ENCODE_MAX_P = 46337
TRIPLING_MAX = 2000
FAMILY_KINDS = ("Sprime", "S", "Srational", "GL2fam")

Point = int


# -- elements ---------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class GL2Elem:
    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            if not 0 <= getattr(self, name) < self.p:
                raise DomainError(f"matrix entry {name}={getattr(self, name)} is not reduced mod {self.p}")
        if self.det == 0:
            raise DomainError("matrix is degenerate")

    @property
    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.p

    @property
    def trace(self) -> int:
        return (self.a + self.d) % self.p

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "GL2Elem") -> "GL2Elem":
        if other.p != self.p:
            raise DomainError("matrices over different fields")
        p = self.p
        return element(
            p,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GL2Elem":
        k = pow(self.det, -1, self.p)
        return element(self.p, k * self.d, -k * self.b, -k * self.c, k * self.a)

    def act(self, z: Point) -> Point:
        """gz = (az + b)/(cz + d) on P^1."""
        p = self.p
        if z == p:
            return self.a * pow(self.c, -1, p) % p if self.c else p
        den = (self.c * z + self.d) % p
        if den == 0:
            return p
        return (self.a * z + self.b) * pow(den, -1, p) % p


@dataclass(frozen=True, order=True)
class SL2Elem(GL2Elem):
    def __post_init__(self) -> None:
        super().__post_init__()
        if self.det != 1:
            raise DomainError(f"det={self.det}, not an SL2 element")


def element(p: int, a: int, b: int, c: int, d: int) -> GL2Elem:
    """Reduce mod p; determinant 1 gives an SL2Elem."""
    a, b, c, d = a % p, b % p, c % p, d % p
    if (a * d - b * c) % p == 1:
        return SL2Elem(a, b, c, d, p)
    return GL2Elem(a, b, c, d, p)


def identity(p: int) -> SL2Elem:
    return SL2Elem(1, 0, 0, 1, p)


def sl2_mul(g: GL2Elem, h: GL2Elem) -> GL2Elem:
    return g * h


def sl2_inv(g: GL2Elem) -> GL2Elem:
    return g.inverse()


def act(g: GL2Elem, z: Point) -> Point:
    return g.act(z)


# -- vectorised element arrays ----------------------------------------------------


def _as_array(elems: Iterable[GL2Elem]) -> np.ndarray:
    rows = [e.as_tuple() for e in elems]
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


def _from_array(arr: np.ndarray, p: int) -> List[GL2Elem]:
    return [element(p, *map(int, row)) for row in arr]


def _mul_arr(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    a = X[..., 0] * Y[..., 0] + X[..., 1] * Y[..., 2]
    b = X[..., 0] * Y[..., 1] + X[..., 1] * Y[..., 3]
    c = X[..., 2] * Y[..., 0] + X[..., 3] * Y[..., 2]
    d = X[..., 2] * Y[..., 1] + X[..., 3] * Y[..., 3]
    return np.stack([a, b, c, d], axis=-1) % p


def _inv_arr(X: np.ndarray, p: int) -> np.ndarray:
    det = (X[..., 0] * X[..., 3] - X[..., 1] * X[..., 2]) % p
    k = inverse_table(p)[det]
    out = np.stack([X[..., 3], -X[..., 1], -X[..., 2], X[..., 0]], axis=-1)
    return (out * k[..., None]) % p


def _det_arr(X: np.ndarray, p: int) -> np.ndarray:
    return (X[..., 0] * X[..., 3] - X[..., 1] * X[..., 2]) % p


def _encode(X: np.ndarray, p: int) -> np.ndarray:
    check_guard("matrix encoding", p, ENCODE_MAX_P)
    return ((X[..., 0] * p + X[..., 1]) * p + X[..., 2]) * p + X[..., 3]


def _decode(codes: np.ndarray, p: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    d = codes % p
    c = (codes // p) % p
    b = (codes // (p * p)) % p
    a = codes // (p * p * p)
    return np.stack([a, b, c, d], axis=-1)


def action_table(X: np.ndarray, p: int) -> np.ndarray:
    """Row i is the permutation z -> g_i z of P^1."""
    inv = inverse_table(p)
    z = np.arange(p, dtype=np.int64)[None, :]
    a, b, c, d = (X[:, i][:, None] for i in range(4))
    num = (a * z + b) % p
    den = (c * z + d) % p
    finite = np.where(den == 0, p, num * inv[den] % p)
    at_inf = np.where(X[:, 2] == 0, p, X[:, 0] * inv[X[:, 2]] % p)
    return np.concatenate([finite, at_inf[:, None]], axis=1)


def _all_sl2(p: int) -> np.ndarray:
    inv = inverse_table(p)
    rows = []
    units = np.arange(1, p, dtype=np.int64)
    a, b = np.meshgrid(units, np.arange(p, dtype=np.int64), indexing="ij")
    rows.append(np.stack([a.ravel(), b.ravel(), np.zeros(a.size, np.int64), inv[a.ravel()]], axis=1))
    c, a, d = np.meshgrid(units, np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    c, a, d = c.ravel(), a.ravel(), d.ravel()
    b = ((a * d - 1) % p) * inv[c] % p
    rows.append(np.stack([a, b, c, d], axis=1))
    return np.concatenate(rows)


def sl2_order(p: int) -> int:
    return p**3 - p


def sl2_elements(ctx: FieldCtx) -> List[SL2Elem]:
    check_guard("sl2_elements", ctx.p, LIST_MAX_P, advice="enumerate SL2 only for p <= 31")
    arr = _all_sl2(ctx.p)
    return [SL2Elem(*map(int, row), ctx.p) for row in arr[np.argsort(_encode(arr, ctx.p))]]


@dataclass(frozen=True, eq=False)
class DenseGroup:
    """All of SL2(F_p) with a multiplication table, for p <= 13."""

    p: int
    elems: np.ndarray = field(repr=False)
    codes: np.ndarray = field(repr=False)
    table: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.codes)

    def index(self, X: np.ndarray) -> np.ndarray:
        codes = _encode(X, self.p)
        idx = np.searchsorted(self.codes, codes)
        if np.any(idx >= self.order) or np.any(self.codes[np.minimum(idx, self.order - 1)] != codes):
            raise DomainError("matrix is not in SL2")
        return idx


@lru_cache(maxsize=4)
def dense_group(p: int) -> DenseGroup:
    check_guard("dense SL2", p, DENSE_MAX_P, advice="dense group algebra needs p <= 13")
    elems = _all_sl2(p)
    codes = _encode(elems, p)
    order = np.argsort(codes)
    elems, codes = elems[order], codes[order]
    n = len(codes)
    table = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        table[i] = np.searchsorted(codes, _encode(_mul_arr(elems[i][None, :], elems, p), p))
    inverse = np.searchsorted(codes, _encode(_inv_arr(elems, p), p))
    logger.debug("dense SL2 table for p=%d, order %d", p, n)
    for arr in (elems, codes, table, inverse):
        arr.setflags(write=False)
    return DenseGroup(p=p, elems=elems, codes=codes, table=table, inverse=inverse)


# -- group functions --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupFn:
    p: int
    weights: Mapping[GL2Elem, Fraction]
    total_mass: Fraction = field(init=False)

    def __post_init__(self) -> None:
        clean = {}
        for g, w in self.weights.items():
            if g.p != self.p:
                raise DomainError("group function mixes fields")
            w = Fraction(w)
            if w:
                clean[g] = w
        object.__setattr__(self, "weights", clean)
        object.__setattr__(self, "total_mass", sum(clean.values(), Fraction(0)))

    def __call__(self, g: GL2Elem) -> Fraction:
        return self.weights.get(g, Fraction(0))

    def __len__(self) -> int:
        return len(self.weights)

    def support(self) -> List[GL2Elem]:
        return sorted(self.weights, key=GL2Elem.as_tuple)

    def is_symmetric(self) -> bool:
        return all(self.weights.get(g.inverse(), 0) == w for g, w in self.weights.items())

    def is_probability(self) -> bool:
        return self.total_mass == 1 and all(w > 0 for w in self.weights.values())

    def norm_l2_sq(self) -> Fraction:
        return sum((w * w for w in self.weights.values()), Fraction(0))

    def arrays(self) -> Tuple[np.ndarray, List[Fraction]]:
        keys = self.support()
        return _as_array(keys), [self.weights[g] for g in keys]


def delta(p: int, g: GL2Elem | None = None) -> GroupFn:
    return GroupFn(p, {g if g is not None else identity(p): Fraction(1)})


def indicator_fn(elems: Iterable[GL2Elem]) -> GroupFn:
    elems = list(elems)
    if not elems:
        raise DomainError("indicator of an empty family needs a field")
    return GroupFn(elems[0].p, {g: Fraction(1) for g in elems})


def uniform_measure(elems: Iterable[GL2Elem]) -> GroupFn:
    elems = set(elems)
    if not elems:
        raise DomainError("uniform measure on an empty set")
    w = Fraction(1, len(elems))
    return GroupFn(next(iter(elems)).p, {g: w for g in elems})


def haar(ctx: FieldCtx) -> GroupFn:
    return uniform_measure(sl2_elements(ctx))


def random_sl2(p: int, rng: np.random.Generator) -> SL2Elem:
    while True:
        a, c, d = (int(v) for v in rng.integers(0, p, size=3))
        if c:
            return SL2Elem(a, (a * d - 1) * pow(c, -1, p) % p, c, d, p)
        if a:
            return SL2Elem(a, d, 0, pow(a, -1, p), p)


def random_symmetric_measure(ctx: FieldCtx, n: int, seed: int) -> GroupFn:
    """Uniform measure on n random elements together with their inverses."""
    p = ctx.p
    if not 1 <= n <= sl2_order(p):
        raise DomainError(f"cannot draw {n} distinct elements of SL2(F_{p})")
    rng = np.random.Generator(np.random.PCG64(seed))
    chosen: set = set()
    while len(chosen) < n:
        chosen.add(random_sl2(p, rng))
    return uniform_measure(chosen | {g.inverse() for g in chosen})


def is_generating(elems: Iterable[GL2Elem], p: int) -> bool:
    G = dense_group(p)
    arr = _as_array(elems)
    if not len(arr):
        return False
    gens = G.index(arr)
    reached = np.zeros(G.order, dtype=bool)
    reached[gens] = True
    frontier = gens
    while len(frontier):
        nxt = np.unique(G.table[np.ix_(frontier, gens)].ravel())
        frontier = nxt[~reached[nxt]]
        reached[frontier] = True
    return bool(reached.all())


# -- convolutions -----------------------------------------------------------------


def _p1_values(f: IntFn | SetFp | Sequence, p: int) -> np.ndarray:
    if isinstance(f, (IntFn, SetFp)):
        f = as_intfn(f)
        values = [f.at(x) for x in range(p)] + [Fraction(0)]
    else:
        values = [Fraction(v) for v in f]
        if len(values) == p:
            values.append(Fraction(0))
    if len(values) != p + 1:
        raise DomainError(f"function on P^1 needs {p + 1} values")
    return np.array(values, dtype=object)


def gconv(F: GroupFn, f: IntFn | SetFp | Sequence) -> List[Fraction]:
    """(F*f)(x) = sum_g F(g) f(g^-1 x) for x in P^1."""
    p = F.p
    fvals = _p1_values(f, p)
    out = np.array([Fraction(0)] * (p + 1), dtype=object)
    if not len(F):
        return list(out)
    arr, weights = F.arrays()
    table = action_table(_inv_arr(arr, p), p)
    for row, w in zip(table, weights):
        out = out + w * fvals[row]
    return list(out)


def group_conv(mu: GroupFn, nu: GroupFn) -> GroupFn:
    if mu.p != nu.p:
        raise DomainError("group functions over different fields")
    p = mu.p
    if not len(mu) or not len(nu):
        return GroupFn(p, {})
    check_guard("group_conv", len(mu) * len(nu), get_config().tuple_guard)
    A, wa = mu.arrays()
    B, wb = nu.arrays()
    codes = _encode(_mul_arr(A[:, None, :], B[None, :, :], p), p)
    acc: Dict[int, Fraction] = {}
    for i, w in enumerate(wa):
        for code, v in zip(codes[i].tolist(), wb):
            acc[code] = acc.get(code, Fraction(0)) + w * v
    keys = np.array(list(acc), dtype=np.int64)
    elems = _from_array(_decode(keys, p), p)
    return GroupFn(p, dict(zip(elems, acc.values())))


def _dense_rows(G: DenseGroup, u: np.ndarray, v: np.ndarray, rows: Sequence[int]) -> np.ndarray:
    out = np.zeros(G.order, dtype=object)
    for i in rows:
        out[G.table[i]] += u[i] * v
    return out


def _dense_conv(G: DenseGroup, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    rows = [i for i in range(G.order) if u[i]]
    threads = get_config().threads
    if threads <= 1 or len(rows) < 2 * threads:
        return _dense_rows(G, u, v, rows)
    chunks = [rows[i::threads] for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda part: _dense_rows(G, u, v, part), chunks))
    out = parts[0]
    for part in parts[1:]:
        out = out + part
    return out


def flatten_profile(mu: GroupFn, k_max: int = 4) -> List[Fraction]:
    """e_k = ||mu^(2^k)||_2^2 - 1/|SL2| for k = 0..k_max, exactly."""
    if not mu.is_probability():
        raise DomainError("flattening needs a probability measure")
    if not mu.is_symmetric():
        raise DomainError("flattening needs a symmetric measure")
    if k_max < 0:
        raise DomainError("k_max must be non-negative")
    check_guard("flatten_profile", k_max, get_config().k_cap)
    G = dense_group(mu.p)
    arr, weights = mu.arrays()
    denom = math.lcm(*(w.denominator for w in weights))
    u = np.zeros(G.order, dtype=object)
    for i, w in zip(G.index(arr), weights):
        u[i] = w.numerator * (denom // w.denominator)
    floor = Fraction(1, G.order)
    profile = []
    for k in range(k_max + 1):
        profile.append(Fraction(sum(int(v) * int(v) for v in u), denom * denom) - floor)
        logger.debug("flatten_profile p=%d k=%d e_k=%s", mu.p, k, float(profile[-1]))
        if k < k_max:
            u = _dense_conv(G, u, u)
            denom = denom * denom
    return profile


def flatten_depth(profile: Sequence[Fraction], p: int) -> Optional[int]:
    """Smallest k with e_k < 2/|SL2(F_p)|."""
    target = Fraction(2, sl2_order(p))
    return next((k for k, e in enumerate(profile) if e < target), None)


def flatten_rows(profile: Sequence[Fraction], p: int, suite: str = "flatten") -> List[reports.BoundReport]:
    rows = []
    for k, e in enumerate(profile):
        rows.append(reports.assert_le(suite, f"f:flattering (e_{k} >= 0)", 0, e))
        if k:
            rows.append(reports.assert_le(suite, f"f:flattering (e_{k} <= e_{k - 1})", e, profile[k - 1]))
    depth = flatten_depth(profile, p)
    rows.append(
        reports.ratio_row(
            suite, "t:flattering (depth)", profile[-1], Fraction(1, sl2_order(p)),
            note=f"depth={depth if depth is not None else 'not reached'}",
        )
    )
    return rows


def measured_depth(elems: Sequence[GL2Elem], k_max: int = 3) -> Optional[int]:
    """Flattening depth of the uniform measure on S^-1 S."""
    if not elems:
        return None
    p = elems[0].p
    if p > DENSE_MAX_P:
        return None
    arr = _as_array(elems)
    if np.any(_det_arr(arr, p) != 1):
        return None
    prods = _mul_arr(_inv_arr(arr, p)[:, None, :], arr[None, :, :], p).reshape(-1, 4)
    codes = np.unique(_encode(prods, p))
    mu = uniform_measure(_from_array(_decode(codes, p), p))
    return flatten_depth(flatten_profile(mu, min(k_max, get_config().k_cap)), p)


def tripling(A: Sequence[GL2Elem], suite: str = "flatten") -> reports.BoundReport:
    """|AAA| against |A| with the measured growth exponent."""
    n = len(A)
    if n == 0:
        raise DomainError("tripling of an empty set")
    check_guard("tripling", n, TRIPLING_MAX, advice="tripling enumerates |A|^2 products first")
    p = A[0].p
    arr = _as_array(A)
    pairs = np.unique(_encode(_mul_arr(arr[:, None, :], arr[None, :, :], p), p))
    check_guard("tripling", len(pairs) * n, get_config().tuple_guard)
    AA = _decode(pairs, p)
    triples = np.array([], dtype=np.int64)
    for start in range(0, len(AA), 4096):
        chunk = _mul_arr(AA[start:start + 4096, None, :], arr[None, :, :], p)
        triples = np.union1d(triples, _encode(chunk, p).ravel())
    size = len(triples)
    exponent = math.log(size) / math.log(n) - 1 if n > 1 else 0.0
    return reports.ratio_row(suite, "t:Harald_SL2", size, n, note=f"growth exponent={exponent:.6g}")


# -- matrix families --------------------------------------------------------------


@dataclass(frozen=True)
class MatrixFamily:
    kind: str
    p: int
    sets: Tuple[SetFp, ...]
    elements: Tuple[GL2Elem, ...]
    degree: int = 0
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.elements)

    def array(self) -> np.ndarray:
        return _as_array(self.elements)

    def dets(self) -> Counter:
        return Counter(g.det for g in self.elements)

    @property
    def size_scale(self) -> int:
        """M in the escape bounds of this family kind."""
        if self.kind == "Srational":
            return self.degree
        return max((len(s) for s in self.sets), default=0)


def _check_independent(family_name: str, polys: Dict[str, Tuple[int, ...]], p: int) -> None:
    names = list(polys)
    combo = null_combination([polys[n] for n in names], p)
    if combo is not None:
        terms = " + ".join(f"{c}*{n}" for c, n in zip(combo, names) if c)
        raise IndependenceError(family=family_name, combination=f"{terms} = 0 mod {p}")


def rational_conditions(r1, r2, p: int) -> int:
    """Validate the independence conditions for S_{r1,r2}; returns the maximal degree."""
    (p1, q1), (p2, q2) = parse_rational(r1, "r1"), parse_rational(r2, "r2")
    mul = lambda f, g: poly_mul(f, g, p)  # noqa: E731
    _check_independent("Srational {p1, q1}", {"p1": p1, "q1": q1}, p)
    _check_independent("Srational {p2, q2}", {"p2": p2, "q2": q2}, p)
    _check_independent(
        "Srational products",
        {"p1p2": mul(p1, p2), "p1q2": mul(p1, q2), "p2q1": mul(p2, q1), "q1q2": mul(q1, q2)},
        p,
    )
    _check_independent(
        "Srational cubic products",
        {
            "p1q1q2": mul(mul(p1, q1), q2),
            "p1p2q1": mul(mul(p1, p2), q1),
            "p1^2p2": mul(mul(p1, p1), p2),
            "q1^2q2": mul(mul(q1, q1), q2),
            "q1^2p2": mul(mul(q1, q1), p2),
        },
        p,
    )
    return max(poly_degree(f, p) for f in (p1, q1, p2, q2))


def family(kind: str, sets: Sequence[SetFp], r1=None, r2=None) -> MatrixFamily:
    if kind not in FAMILY_KINDS:
        raise DomainError(f"unknown family {kind!r}; expected one of {', '.join(FAMILY_KINDS)}")
    sets = tuple(sets)
    expected = {"Sprime": 1, "S": 2, "Srational": 1, "GL2fam": 3}[kind]
    if len(sets) != expected:
        raise DomainError(f"family {kind} takes {expected} sets, got {len(sets)}")
    p = sets[0].p
    if any(s.p != p for s in sets):
        raise DomainError("family sets live over different fields")

    skipped = 0
    degree = 0
    rows: List[Tuple[int, int, int, int]] = []
    if kind == "Sprime":
        rows = [(0, p - 1, 1, a) for a in sets[0]]
    elif kind == "S":
        B1, B2 = sets
        rows = [(b, (a * b - 1) % p, 1, a) for a in B1 for b in B2]
    elif kind == "Srational":
        degree = rational_conditions(r1, r2, p)
        (p1, q1), (p2, q2) = parse_rational(r1), parse_rational(r2)
        for b in sets[0]:
            den1, den2 = poly_eval(q1, b, p), poly_eval(q2, b, p)
            if den1 == 0 or den2 == 0:
                skipped += 1
                continue
            s1 = poly_eval(p1, b, p) * pow(den1, -1, p) % p
            s2 = poly_eval(p2, b, p) * pow(den2, -1, p) % p
            rows.append((1, s1, s2, (1 + s1 * s2) % p))
    else:
        for b1, b2, b3 in product(*sets):
            if (b3 - b1 * b2) % p == 0:
                skipped += 1
                continue
            rows.append((1, b1, b2, b3))

    elements = tuple(sorted({element(p, *row) for row in rows}, key=GL2Elem.as_tuple))
    if skipped:
        logger.debug("family %s: skipped %d parameters", kind, skipped)
    return MatrixFamily(kind=kind, p=p, sets=sets, elements=elements, degree=degree, skipped=skipped)


# -- subgroup detectors -----------------------------------------------------------


def least_nonresidue(ctx: FieldCtx) -> int:
    return next(x for x in range(2, ctx.p) if legendre(ctx, x) == -1)


@lru_cache(maxsize=32)
def _dihedral(p: int, eps: int) -> np.ndarray:
    """Normaliser of the torus {(x, eps*z; z, x)}: the torus together with w * torus."""
    torus = [(x, eps * z % p, z, x) for x in range(p) for z in range(p) if (x * x - eps * z * z) % p == 1]
    w = next((x, (-eps * z) % p, z, (-x) % p) for x in range(p) for z in range(p) if (eps * z * z - x * x) % p == 1)
    T = np.array(torus, dtype=np.int64)
    D = np.concatenate([T, _mul_arr(np.array(w, dtype=np.int64)[None, :], T, p)])
    return D[np.unique(_encode(D, p), return_index=True)[1]]


def dihedral_subgroups(ctx: FieldCtx) -> Dict[int, np.ndarray]:
    """Split (eps = 1) and non-split (eps = least non-residue) dihedral subgroups."""
    return {eps: _dihedral(ctx.p, eps) for eps in (1, least_nonresidue(ctx))}


def fixed_points(g: GL2Elem) -> List[Point]:
    return [z for z in range(g.p + 1) if g.act(z) == z]


def borel_detector(elems: Sequence[GL2Elem]) -> Optional[Point]:
    """A point of P^1 fixed by every element, if any."""
    if not elems:
        return None
    p = elems[0].p
    table = action_table(_as_array(elems), p)
    common = np.all(table == np.arange(p + 1)[None, :], axis=0)
    hits = np.flatnonzero(common)
    return int(hits[0]) if len(hits) else None


def unipotent_detector(elems: Sequence[GL2Elem]) -> bool:
    return borel_detector(elems) is not None and all(g.trace == 2 % g.p for g in elems)


def dihedral_detector(elems: Sequence[GL2Elem]) -> bool:
    """True when the elements lie in a conjugate of a dihedral subgroup."""
    if not elems:
        return True
    p = elems[0].p
    G = dense_group(p)
    X = _as_array(elems)
    conj = _inv_arr(G.elems, p)
    for D in dihedral_subgroups(make_field(p)).values():
        members = np.zeros(G.order, dtype=bool)
        members[G.index(D)] = True
        inside = np.ones(G.order, dtype=bool)
        for x in X:
            y = _mul_arr(_mul_arr(conj, np.broadcast_to(x, conj.shape), p), G.elems, p)
            inside &= members[G.index(y)]
        if inside.any():
            return True
    return False


# -- coset escape -----------------------------------------------------------------


def _escape_multiset(S: MatrixFamily) -> Tuple[np.ndarray, np.ndarray]:
    """SL2 elements with multiplicities: S itself, or same-det quotients s^-1 s' for GL2."""
    p = S.p
    arr = S.array()
    if not len(arr):
        return arr, np.zeros(0, dtype=np.int64)
    if S.kind != "GL2fam":
        return arr, np.ones(len(arr), dtype=np.int64)
    dets = _det_arr(arr, p)
    check_guard("coset_escape", int(sum(np.count_nonzero(dets == l) ** 2 for l in np.unique(dets))),
                get_config().tuple_guard)
    codes = []
    for lam in np.unique(dets):
        block = arr[dets == lam]
        codes.append(_encode(_mul_arr(_inv_arr(block, p)[:, None, :], block[None, :, :], p), p).ravel())
    uniq, counts = np.unique(np.concatenate(codes), return_counts=True)
    return _decode(uniq, p), counts


def borel_intersection(X: np.ndarray, weights: np.ndarray, p: int) -> int:
    """max over g1, g2 of the weight of g1 B g2, via s(u) = v over P^1 x P^1."""
    if not len(X):
        return 0
    table = action_table(X, p)
    cells = np.arange(p + 1)[None, :] * (p + 1) + table
    hist = np.bincount(cells.ravel(), weights=np.repeat(weights, p + 1), minlength=(p + 1) ** 2)
    return int(round(hist.max()))


def _coset_labels(D: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    return _encode(_mul_arr(D[:, None, :], Y[None, :, :], p), p).min(axis=0)


def dihedral_intersection(X: np.ndarray, weights: np.ndarray, D: np.ndarray, g1s: np.ndarray, p: int) -> int:
    """max over g1 in ``g1s`` and g2 of the weight of g1 D g2."""
    if not len(X):
        return 0
    best = 0
    inv_g1 = _inv_arr(g1s, p)
    for h in inv_g1:
        labels = _coset_labels(D, _mul_arr(h[None, :], X, p), p)
        _, inverse = np.unique(labels, return_inverse=True)
        best = max(best, int(np.bincount(inverse, weights=weights).max()))
    return best


def coset_escape(S: MatrixFamily, trials: int = 64, seed: int = 0, suite: str = "escape") -> List[reports.BoundReport]:
    """Largest intersection of the family with Borel and dihedral double cosets."""
    if trials < 1:
        raise DomainError("coset_escape needs at least one trial")
    p = S.p
    X, weights = _escape_multiset(S)
    M = S.size_scale

    if p <= DENSE_MAX_P:
        g1s = dense_group(p).elems
        coverage = "exhaustive"
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        g1s = _as_array([identity(p)] + [random_sl2(p, rng) for _ in range(trials - 1)])
        coverage = f"sampled {trials}"

    borel = borel_intersection(X, weights, p)
    dihedral = max(
        (dihedral_intersection(X, weights, D, g1s, p) for D in dihedral_subgroups(make_field(p)).values()),
        default=0,
    )
    note = f"|S|={len(S)} M={M} dihedral {coverage}"

    if S.kind == "Sprime":
        ref = math.sqrt(len(S)) if len(S) else 0.0
        flag = " exceeds |S'|^(1/2)" if borel > ref else ""
        rows = [
            reports.ratio_row(suite, "f:intersection (S')", borel, ref or None, note=note + flag),
            reports.ratio_row(suite, "f:intersection+ (S')", dihedral, 8 * ref or None, note=note),
        ]
        # S' lies in the single coset w B, so two elements already beat |S'|^(1/2).
        if len(S) > 1:
            rows.append(reports.assert_true(suite, "f:intersection fails for S'", borel > ref, lhs=borel, rhs=ref, note=note))
        return rows
    bounds = {
        "S": (("f:intersection", M), ("f:intersection+", 8 * M)),
        "Srational": (("f*:intersection-", 2 * M), ("f*:intersection+", 12 * M)),
        "GL2fam": (("f:GL2-", 100 * M**4), ("f:GL2+", 100 * M**4)),
    }[S.kind]
    (borel_claim, borel_bound), (dihedral_claim, dihedral_bound) = bounds
    rows = [
        reports.assert_le(suite, borel_claim, borel, borel_bound, note=note),
        reports.assert_le(suite, dihedral_claim, dihedral, dihedral_bound, note=note),
    ]
    for row in rows:
        if row.failed:
            logger.warning("coset_escape: %s violated (%s > %s)", row.claim_ref, row.lhs, row.rhs)
    return rows


# -- counting ---------------------------------------------------------------------


@dataclass
class CountResult:
    value: object
    rows: List[reports.BoundReport]
    skipped: int = 0


def _cf_step(a: int, p: int) -> np.ndarray:
    """z -> 1/(a + z) on P^1."""
    inv = inverse_table(p)
    z = np.arange(p, dtype=np.int64)
    s = (a + z) % p
    finite = np.where(s == 0, p, inv[s])
    return np.append(finite, 0)


def cf_count(A: SetFp, k: int, suite: str = "cf") -> CountResult:
    """N(x) = #{(a_1..a_k) in A^k : [a_1, ..., a_k] = x} for x in P^1."""
    if k < 1:
        raise DomainError("continued fractions need k >= 1")
    cfg = get_config()
    p, n = A.p, len(A)
    total = n**k
    if k > cfg.k_cap:
        check_guard("cf_count", total, cfg.tuple_guard, advice="lower k or raise SUMPROD_TUPLE_GUARD")
    dtype = np.int64 if total < 2**62 else object
    steps = [_cf_step(a, p) for a in A]
    counts = np.zeros(p + 1, dtype=dtype)
    counts[0] = 1
    for _ in range(k):
        nxt = np.zeros(p + 1, dtype=dtype)
        for perm in steps:
            nxt[perm] += counts
        counts = nxt

    values = [int(v) for v in counts]
    main = Fraction(total, p)
    worst = max(range(p), key=lambda x: abs(values[x] - main)) if n else 0
    rows = [
        reports.assert_eq(suite, "t:CF_growth (mass)", sum(values), total),
        reports.ratio_row(
            suite, "t:CF_growth", values[worst], main if main else None, main_term=main,
            note=f"k={k} |A|={n} worst x={worst} N(inf)={values[p]}",
        ),
    ]
    return CountResult(value=tuple(values), rows=rows)


def _flatten_k(depth: Optional[int]) -> Tuple[int, str]:
    if depth is None:
        return 0, "depth unmeasured, k=0"
    return depth, f"k={depth} from flattening depth"


def action_count(
    S: MatrixFamily,
    f1: IntFn | SetFp,
    f2: IntFn | SetFp,
    depth: Optional[int] = None,
    suite: str = "cf",
) -> CountResult:
    """sigma = sum_{s, a} f1(a) f2(s a) against |S| <f1><f2> / p."""
    p = S.p
    f1, f2 = as_intfn(f1), as_intfn(f2)
    if f1.p != p or f2.p != p:
        raise DomainError("functions and family live over different fields")
    if depth is None and p <= DENSE_MAX_P and len(S):
        depth = measured_depth(list(S.elements))
    k, k_note = _flatten_k(depth)

    v1 = np.array(f1.values, dtype=object)
    v2 = np.array(list(f2.values) + [0], dtype=object)
    total = 0
    if len(S):
        table = action_table(S.array(), p)[:, :p]
        for row in table:
            total += int(np.dot(v1, v2[row]))
    sigma = Fraction(total, f1.denom * f2.denom)
    main = Fraction(len(S)) * f1.total() * f2.total() / p
    rhs = 2 * math.sqrt(float(f1.norm_l2_sq()) * float(f2.norm_l2_sq())) * len(S) * p ** (-1 / 2 ** (k + 2))
    row = reports.ratio_row(suite, "f:counting", sigma, rhs or None, main_term=main, note=f"|S|={len(S)} {k_note}")
    return CountResult(value=sigma, rows=[row])


def inverse_diff_count(
    A1: SetFp,
    A2: SetFp,
    lam: int = 1,
    B: SetFp | None = None,
    depth: Optional[int] = None,
    suite: str = "cf",
) -> CountResult:
    """#{(a1, a2) : 1/a1 - 1/a2 = lam} with zeros excluded."""
    p = A1.p
    if lam % p == 0:
        raise DomainError("lambda must be nonzero")
    skipped = int(0 in A1) + int(0 in A2)
    X, Y = inverse_set(A1), inverse_set(A2)
    ys = Y.mask()
    count = int(sum(ys[(x - lam) % p] for x in X))
    rows: List[reports.BoundReport] = []
    if B is not None and len(A1) and len(A2) and len(B):
        k, k_note = _flatten_k(depth)
        K1 = Fraction(len(sumset(A1, B)), len(A1))
        K2 = Fraction(len(sumset(A2, B)), len(A2))
        main = K1 * K2 * len(A1) * len(A2) / p
        rhs = float(main) + 2 * math.sqrt(float(K1 * K2 * len(A1) * len(A2))) * p ** (-1 / 2 ** (k + 2))
        rows.append(reports.ratio_row(suite, "f:1/A", count, rhs, note=f"K1={K1} K2={K2} {k_note}"))
        e = energy("+", inverse_set(A1), inverse_set(B))
        e_main = K1 * K1 * len(A1) ** 2 * len(B) ** 2 / p
        e_rhs = float(K1) ** 1.25 * len(A1) ** 1.25 * len(B) ** 1.5 + float(K1 * K1) * len(A1) ** 2
        rows.append(reports.ratio_row(suite, "f:1/A_energy", e, e_rhs, main_term=e_main, note=f"K={K1}"))
    if skipped:
        logger.debug("inverse_diff_count: excluded %d zero elements", skipped)
    return CountResult(value=count, rows=rows, skipped=skipped)


def poly_shift_count(
    A: SetFp,
    B: SetFp,
    p1: Sequence[int],
    p2: Sequence[int],
    depth: Optional[int] = None,
    suite: str = "cf",
) -> CountResult:
    """Collisions and image size of (a, b) -> p1(b) + 1/(a + p2(b))."""
    p = A.p
    p1, p2 = parse_poly(p1, "p1"), parse_poly(p2, "p2")
    for name, poly in (("p1", p1), ("p2", p2)):
        if poly_degree(poly, p) < 1:
            raise DomainError(f"{name} must be non-constant mod {p}")
    inv = inverse_table(p)
    r = np.zeros(p, dtype=np.int64)
    a = A.array()
    skipped = 0
    for b in B:
        den = (a + poly_eval(p2, b, p)) % p
        ok = den != 0
        skipped += int(np.count_nonzero(~ok))
        np.add.at(r, (poly_eval(p1, b, p) + inv[den[ok]]) % p, 1)
    collisions = sum(int(v) * int(v) for v in r)
    image = int(np.count_nonzero(r))

    k, k_note = _flatten_k(depth)
    main = Fraction(len(A) ** 2 * len(B) ** 2, p)
    rows = [
        reports.ratio_row(suite, "f:pol", collisions, main or None, main_term=main, note=f"skipped={skipped}"),
        reports.ratio_row(suite, "f:pol'", image, min(p, len(A) * p ** (1 / 2 ** (k + 2))) or None, note=k_note),
    ]
    return CountResult(value=(collisions, image), rows=rows, skipped=skipped)


@dataclass
class GL2Image:
    size: int
    dets: Dict[int, int]
    degenerate: int
    skipped: int
    rows: List[reports.BoundReport]


def gl2_image(
    A: SetFp,
    B1: SetFp,
    B2: SetFp,
    B3: SetFp,
    escape: bool = True,
    suite: str = "cf",
) -> GL2Image:
    """Image of A under a -> (a + b1)/(a b2 + b3) over P^1, with the determinant spectrum.

    Matrices with b3 = b1 b2 are singular: they are tallied in ``degenerate`` and
    contribute nothing to the image or the spectrum.
    """
    p = A.p
    check_guard("gl2_image", len(A) * len(B1) * len(B2) * len(B3), get_config().tuple_guard)
    inv = inverse_table(p)
    a = A.array()
    seen = np.zeros(p + 1, dtype=bool)
    dets: Counter = Counter()
    degenerate = skipped = 0
    b3 = B3.array()
    for b1, b2 in product(B1, B2):
        num = (a[None, :] + b1) % p
        den = (a[None, :] * b2 + b3[:, None]) % p
        det = (b3 - b1 * b2) % p
        nondeg = det != 0
        degenerate += int(np.count_nonzero(~nondeg))
        dets.update(det[nondeg].tolist())
        undefined = (num == 0) & (den == 0)
        skipped += int(np.count_nonzero(undefined))
        values = np.where(den == 0, p, num * inv[den] % p)
        seen[values[~undefined & nondeg[:, None]]] = True
    size = int(np.count_nonzero(seen))

    G = sum(dets.values())
    spread = len(dets)
    squares = sum(v * v for v in dets.values())
    rows = [
        reports.ratio_row(suite, "f:GL2_rational", size, min(p, len(A)) or None,
                          note=f"degenerate={degenerate} skipped={skipped}"),
    ]
    if G:
        rows.append(
            reports.assert_le(suite, "f:r_BB-B (Cauchy-Schwarz)", Fraction(G * G, spread), squares,
                              note=f"|G|={G} |det G|={spread}")
        )
    if escape and G:
        rows.extend(coset_escape(family("GL2fam", (B1, B2, B3)), suite=suite))
    return GL2Image(size=size, dets=dict(sorted(dets.items())), degenerate=degenerate, skipped=skipped, rows=rows)


# -- Frobenius ---------------------------------------------------------------------


def gram_matrix(f: IntFn) -> np.ndarray:
    """K(x, y) = sum_g f(g^-1 x) f(g^-1 y) over SL2, on P^1, in numerators."""
    p = f.p
    G = dense_group(p)
    table = action_table(G.elems[G.inverse], p)
    values = np.array(list(f.values) + [0], dtype=np.int64)
    M = values[table]
    return M.T @ M


def _top_eigenvalue(K: np.ndarray, iterations: int = 500, tol: float = 1e-13) -> float:
    n = K.shape[0]
    rng = np.random.Generator(np.random.PCG64(0))
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    Kf = K.astype(float)
    value = 0.0
    for _ in range(iterations):
        w = Kf @ v
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v_next = w / norm
        value_next = float(v_next @ Kf @ v_next)
        v = v_next
        if abs(value_next - value) <= tol * max(value_next, 1.0):
            value = value_next
            break
        value = value_next
    return value


def frobenius_check(
    F: GroupFn | None,
    f: IntFn,
    phi: IntFn | None = None,
    mode: str = "inequality",
    suite: str = "flatten",
) -> List[reports.BoundReport]:
    if f.total() != 0:
        raise DomainError("Frobenius bound needs a mean-zero f")
    p = f.p
    norm_f = math.sqrt(float(f.norm_l2_sq()))
    if mode == "inequality":
        if F is None or phi is None:
            raise DomainError("inequality mode needs F and phi")
        conv = gconv(F, f)
        lhs = sum((conv[x] * phi.at(x) for x in range(p)), Fraction(0))
        rhs = 2 * p * math.sqrt(float(F.norm_l2_sq())) * math.sqrt(float(phi.norm_l2_sq())) * norm_f
        return [reports.assert_le(suite, "f:Frobenious", float(abs(lhs)), rhs, rel_tol=1e-9)]
    if mode == "power-iteration":
        K = gram_matrix(f)
        trace = Fraction(int(np.trace(K)), f.denom**2)
        lam = math.sqrt(max(_top_eigenvalue(K), 0.0)) / f.denom
        return [
            reports.assert_eq(suite, "tmp:05.11.2017_1 (trace)", trace, sl2_order(p) * f.norm_l2_sq()),
            reports.assert_le(suite, "l:Frobenious (lambda_1)", lam, 2 * p * norm_f * (1 + 1e-6),
                              note="power iteration on the P^1 Gram operator"),
        ]
    raise DomainError(f"unknown Frobenius mode {mode!r}")
