"""Prime-field arithmetic, subgroups, characters and deterministic set generation."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError, FieldError

logger = logging.getLogger(__name__)

MAX_PRIME = 2**20
RNG_ALGORITHM = "numpy.random.PCG64"


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def _is_primitive_root(g: int, p: int, prime_divisors: Iterable[int]) -> bool:
    return all(pow(g, (p - 1) // q, p) != 1 for q in prime_divisors)


@dataclass(frozen=True, eq=False)
class FieldCtx:
    p: int
    g: int
    dlog: np.ndarray = field(repr=False)
    exp: np.ndarray = field(repr=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldCtx) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("FieldCtx", self.p))

    def log(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise DomainError("discrete log of 0 is undefined")
        return int(self.dlog[x])

    def power(self, k: int) -> int:
        return int(self.exp[k % (self.p - 1)])

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise DomainError("0 has no inverse")
        return pow(x, -1, self.p)


@lru_cache(maxsize=64)
def make_field(p: int) -> FieldCtx:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise FieldError(f"{p} is not an odd prime")
    if p > MAX_PRIME:
        raise FieldError(f"p={p} exceeds the supported range p <= 2**20")
    divisors = list(factorize(p - 1))
    g = 2
    while not _is_primitive_root(g, p, divisors):
        g += 1
    exp = np.empty(p - 1, dtype=np.int64)
    dlog = np.full(p, -1, dtype=np.int64)
    value = 1
    for i in range(p - 1):
        exp[i] = value
        dlog[value] = i
        value = value * g % p
    exp.setflags(write=False)
    dlog.setflags(write=False)
    logger.debug("field p=%s primitive root g=%s", p, g)
    return FieldCtx(p=p, g=g, dlog=dlog, exp=exp)


@dataclass(frozen=True)
class SetFp:
    field: FieldCtx
    elems: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.field.p
        prev = -1
        for x in self.elems:
            if not 0 <= x < p:
                raise DomainError(f"element {x} outside [0, {p})")
            if x <= prev:
                raise DomainError("elements must be strictly increasing")
            prev = x

    @classmethod
    def of(cls, ctx: FieldCtx, values: Iterable[int]) -> "SetFp":
        return cls(field=ctx, elems=tuple(sorted({int(v) % ctx.p for v in values})))

    @property
    def p(self) -> int:
        return self.field.p

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (int, np.integer)) and int(x) in self._members

    @property
    def _members(self) -> frozenset[int]:
        return frozenset(self.elems)

    def array(self) -> np.ndarray:
        return np.asarray(self.elems, dtype=np.int64)

    def mask(self) -> np.ndarray:
        out = np.zeros(self.p, dtype=np.int64)
        out[list(self.elems)] = 1
        return out

    def union(self, other: "SetFp") -> "SetFp":
        return SetFp.of(self.field, self.elems + other.elems)

    def intersection(self, other: "SetFp") -> "SetFp":
        return SetFp.of(self.field, self._members & other._members)

    def difference(self, other: "SetFp") -> "SetFp":
        return SetFp.of(self.field, self._members - other._members)

    def is_symmetric(self) -> bool:
        return all((-x) % self.p in self._members for x in self.elems)


def full_set(ctx: FieldCtx) -> SetFp:
    return SetFp(field=ctx, elems=tuple(range(ctx.p)))


def nonzero_set(ctx: FieldCtx) -> SetFp:
    return SetFp(field=ctx, elems=tuple(range(1, ctx.p)))


def neg_set(A: SetFp) -> SetFp:
    return SetFp.of(A.field, (-x for x in A))


def shift(A: SetFp, t: int) -> SetFp:
    return SetFp.of(A.field, (x + t for x in A))


def dilate(A: SetFp, lam: int) -> SetFp:
    return SetFp.of(A.field, (lam * x for x in A))


def inverse_set(A: SetFp) -> SetFp:
    """1/A with 0 dropped."""
    p = A.p
    return SetFp.of(A.field, (pow(x, -1, p) for x in A if x))


def sumset(A: SetFp, B: SetFp) -> SetFp:
    if not len(A) or not len(B):
        return SetFp(field=A.field, elems=())
    sums = (A.array()[:, None] + B.array()[None, :]) % A.p
    return SetFp(field=A.field, elems=tuple(int(x) for x in np.unique(sums)))


def productset(A: SetFp, B: SetFp) -> SetFp:
    if not len(A) or not len(B):
        return SetFp(field=A.field, elems=())
    prods = (A.array()[:, None] * B.array()[None, :]) % A.p
    return SetFp(field=A.field, elems=tuple(int(x) for x in np.unique(prods)))


def subgroup(ctx: FieldCtx, t: int) -> SetFp:
    p = ctx.p
    if t < 1 or (p - 1) % t:
        raise DomainError(f"subgroup order {t} does not divide p-1={p - 1}")
    step = (p - 1) // t
    return SetFp.of(ctx, (ctx.power(step * i) for i in range(t)))


def coset(ctx: FieldCtx, t: int, xi: int) -> SetFp:
    if xi % ctx.p == 0:
        raise DomainError("coset representative must be nonzero")
    return dilate(subgroup(ctx, t), xi)


def quadratic_residues(ctx: FieldCtx) -> SetFp:
    return subgroup(ctx, (ctx.p - 1) // 2)


def legendre(ctx: FieldCtx, x: int) -> int:
    x %= ctx.p
    if x == 0:
        return 0
    return 1 if ctx.dlog[x] % 2 == 0 else -1


def inverse_table(p: int) -> np.ndarray:
    """x -> 1/x mod p with 0 -> 0."""
    return _inverse_table(p)


@lru_cache(maxsize=16)
def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    table[1:] = [pow(x, -1, p) for x in range(1, p)]
    table.setflags(write=False)
    return table


# -- polynomials over F_p, coefficients lowest degree first -----------------------


def parse_poly(coeffs: Iterable[int] | None, name: str = "polynomial") -> tuple[int, ...]:
    if coeffs is None:
        raise DomainError(f"{name} is missing")
    try:
        out = tuple(int(c) for c in coeffs)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a list of integer coefficients") from exc
    if not out:
        raise DomainError(f"{name} is empty")
    return out


def parse_rational(spec, name: str = "rational") -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A (numerator, denominator) pair of coefficient lists."""
    if spec is None or len(spec) != 2:
        raise DomainError(f"{name} must be a (numerator, denominator) pair of coefficient lists")
    return parse_poly(spec[0], f"{name} numerator"), parse_poly(spec[1], f"{name} denominator")


def poly_trim(coeffs: Iterable[int], p: int) -> tuple[int, ...]:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_degree(coeffs: Iterable[int], p: int) -> int:
    """Degree mod p; the zero polynomial has degree -1."""
    return len(poly_trim(coeffs, p)) - 1


def poly_eval(coeffs: Iterable[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(tuple(coeffs)):
        acc = (acc * x + c) % p
    return acc


def poly_mul(f: Iterable[int], g: Iterable[int], p: int) -> tuple[int, ...]:
    f, g = tuple(f), tuple(g)
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return poly_trim(out, p)


def null_combination(rows: list[tuple[int, ...]], p: int) -> list[int] | None:
    """Nonzero c with sum c_i rows_i = 0 mod p, or None when the rows are independent."""
    n = len(rows)
    width = max((len(r) for r in rows), default=0)
    # augmented [rows | identity] so the elimination tracks the combination
    matrix = [[c % p for c in r] + [0] * (width - len(r)) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    pivot_row = 0
    for col in range(width):
        pivot = next((r for r in range(pivot_row, n) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[pivot_row], matrix[pivot] = matrix[pivot], matrix[pivot_row]
        inv = pow(matrix[pivot_row][col], -1, p)
        matrix[pivot_row] = [v * inv % p for v in matrix[pivot_row]]
        for r in range(n):
            if r != pivot_row and matrix[r][col]:
                factor = matrix[r][col]
                matrix[r] = [(v - factor * w) % p for v, w in zip(matrix[r], matrix[pivot_row])]
        pivot_row += 1
    for r in range(pivot_row, n):
        if not any(matrix[r][:width]):
            return matrix[r][width:]
    return None


@dataclass(frozen=True, eq=False)
class CharTable:
    """Multiplicative character stored as root-of-unity indices.

    ``index[x] = k`` means chi(x) = exp(2*pi*i*k/order); ``index[0] = -1`` encodes chi(0) = 0.
    """

    field: FieldCtx
    order: int
    index: np.ndarray = field(repr=False)

    def __call__(self, x: int) -> complex:
        k = int(self.index[x % self.field.p])
        if k < 0:
            return 0j
        return complex(np.exp(2j * np.pi * k / self.order))

    def values(self) -> np.ndarray:
        out = np.exp(2j * np.pi * self.index / self.order)
        out[self.index < 0] = 0
        return out


def mul_char(ctx: FieldCtx, d: int, j: int = 1) -> CharTable:
    p = ctx.p
    if d <= 1 or (p - 1) % d:
        raise DomainError(f"character order {d} must divide p-1={p - 1} and exceed 1")
    if np.gcd(j, d) != 1:
        raise DomainError(f"exponent {j} does not give a character of exact order {d}")
    index = np.full(p, -1, dtype=np.int64)
    index[1:] = (ctx.dlog[1:] * j) % d
    index.setflags(write=False)
    return CharTable(field=ctx, order=d, index=index)


@dataclass(frozen=True)
class SetSpec:
    kind: str
    p: int
    n: int | None = None
    seed: int | None = None
    lo: int | None = None
    hi: int | None = None
    t: int | None = None
    shift: int | None = None
    values: tuple[int, ...] = ()
    path: str | None = None


SPEC_KINDS = {"random", "interval", "subgroup", "shifted-subgroup", "coset", "explicit", "file", "full"}
_INT_KEYS = {"p", "n", "seed", "lo", "hi", "t", "shift"}


def parse_set_spec(text: str) -> SetSpec:
    """Parse ``kind:key=value,...`` (explicit sets carry ``{v1,v2,...}``)."""
    if ":" not in text:
        raise DomainError(f"malformed set spec {text!r}: expected kind:params")
    kind, rest = text.split(":", 1)
    kind = kind.strip().lower()
    if kind not in SPEC_KINDS:
        raise DomainError(f"unknown set kind {kind!r}")
    values: tuple[int, ...] = ()
    brace = re.search(r"\{([^}]*)\}", rest)
    if brace:
        raw = [item.strip() for item in brace.group(1).split(",") if item.strip()]
        try:
            values = tuple(int(item) for item in raw)
        except ValueError as exc:
            raise DomainError(f"malformed explicit set in {text!r}") from exc
        rest = rest[: brace.start()] + rest[brace.end():]
    params: dict[str, object] = {}
    for item in (chunk.strip() for chunk in rest.split(",")):
        if not item:
            continue
        if "=" not in item:
            raise DomainError(f"malformed parameter {item!r} in {text!r}")
        key, value = (piece.strip() for piece in item.split("=", 1))
        if key in _INT_KEYS:
            try:
                params[key] = int(value)
            except ValueError as exc:
                raise DomainError(f"parameter {key} must be an integer in {text!r}") from exc
        elif key == "path":
            params[key] = value
        else:
            raise DomainError(f"unknown parameter {key!r} in {text!r}")
    if "p" not in params:
        raise DomainError(f"set spec {text!r} is missing p")
    return SetSpec(kind=kind, values=values, **params)  # type: ignore[arg-type]


def read_set_file(ctx: FieldCtx, path: str | Path) -> SetFp:
    values = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(int(text))
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: not a decimal residue: {text!r}") from exc
    return SetFp.of(ctx, values)


def _require(spec: SetSpec, *names: str) -> None:
    missing = [name for name in names if getattr(spec, name) is None]
    if missing:
        raise DomainError(f"{spec.kind} set spec is missing {', '.join(missing)}")


def gen_set(spec: SetSpec) -> SetFp:
    ctx = make_field(spec.p)
    p = ctx.p
    if spec.kind == "random":
        _require(spec, "n", "seed")
        assert spec.n is not None and spec.seed is not None
        if spec.n > p or spec.n < 0:
            raise DomainError(f"cannot draw {spec.n} distinct residues from F_{p}")
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        picked = rng.choice(p, size=spec.n, replace=False)
        return SetFp.of(ctx, (int(x) for x in picked))
    if spec.kind == "interval":
        _require(spec, "lo", "hi")
        assert spec.lo is not None and spec.hi is not None
        if spec.hi - spec.lo + 1 > p:
            raise DomainError(f"interval [{spec.lo},{spec.hi}] is longer than p={p}")
        return SetFp.of(ctx, range(spec.lo, spec.hi + 1))
    if spec.kind == "subgroup":
        _require(spec, "t")
        assert spec.t is not None
        return subgroup(ctx, spec.t)
    if spec.kind == "shifted-subgroup":
        _require(spec, "t", "shift")
        assert spec.t is not None and spec.shift is not None
        return shift(subgroup(ctx, spec.t), spec.shift)
    if spec.kind == "coset":
        _require(spec, "t", "shift")
        assert spec.t is not None and spec.shift is not None
        return coset(ctx, spec.t, spec.shift)
    if spec.kind == "explicit":
        return SetFp.of(ctx, spec.values)
    if spec.kind == "file":
        _require(spec, "path")
        assert spec.path is not None
        return read_set_file(ctx, spec.path)
    if spec.kind == "full":
        return full_set(ctx)
    raise DomainError(f"unknown set kind {spec.kind!r}")


def random_set(ctx: FieldCtx, n: int, seed: int) -> SetFp:
    return gen_set(SetSpec(kind="random", p=ctx.p, n=n, seed=seed))
