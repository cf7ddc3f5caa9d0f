"""Fourier transform over Z/p and exact additive / multiplicative convolutions."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Sequence

import numpy as np

from . import reports
from .config import get_config
from .errors import DomainError
from .fpcore import FieldCtx, SetFp

logger = logging.getLogger(__name__)

TRACK = "track"
EXCLUDE = "exclude"
ZERO_POLICIES = (TRACK, EXCLUDE)

# (prime, primitive root); each prime is c * 2**k + 1 with k >= 23
NTT_PRIMES = (
    (998244353, 3),
    (469762049, 3),
    (167772161, 3),
    (754974721, 11),
    (2013265921, 31),
)
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class IntFn:
    field: FieldCtx
    values: tuple[int, ...]
    denom: int = 1

    def __post_init__(self) -> None:
        if len(self.values) != self.field.p:
            raise DomainError(f"IntFn needs {self.field.p} values, got {len(self.values)}")
        if self.denom < 1:
            raise DomainError("denominator must be positive")

    @property
    def p(self) -> int:
        return self.field.p

    def at(self, x: int) -> Fraction:
        return Fraction(self.values[x % self.p], self.denom)

    def array(self) -> np.ndarray:
        return np.array(self.values, dtype=object)

    def as_float(self) -> np.ndarray:
        return np.array([v / self.denom for v in self.values], dtype=float)

    def total(self) -> Fraction:
        return Fraction(sum(self.values), self.denom)

    def norm_l1(self) -> Fraction:
        return Fraction(sum(abs(v) for v in self.values), self.denom)

    def norm_l2_sq(self) -> Fraction:
        return Fraction(sum(v * v for v in self.values), self.denom**2)

    def max_abs(self) -> Fraction:
        return Fraction(max(abs(v) for v in self.values), self.denom)

    def support(self) -> List[int]:
        return [x for x, v in enumerate(self.values) if v]

    def is_zero(self) -> bool:
        return not any(self.values)

    def reflect(self) -> "IntFn":
        """x -> f(-x)."""
        p = self.p
        return IntFn(self.field, tuple(self.values[(-x) % p] for x in range(p)), self.denom)

    def scale(self, c: int) -> "IntFn":
        return IntFn(self.field, tuple(c * v for v in self.values), self.denom)

    def pointwise(self, other: "IntFn") -> "IntFn":
        _same_field(self, other)
        return IntFn(
            self.field,
            tuple(a * b for a, b in zip(self.values, other.values)),
            self.denom * other.denom,
        )

    def power(self, k: int) -> "IntFn":
        return IntFn(self.field, tuple(v**k for v in self.values), self.denom**k)

    def __add__(self, other: "IntFn") -> "IntFn":
        _same_field(self, other)
        return IntFn(
            self.field,
            tuple(a * other.denom + b * self.denom for a, b in zip(self.values, other.values)),
            self.denom * other.denom,
        )

    def __neg__(self) -> "IntFn":
        return self.scale(-1)

    def __sub__(self, other: "IntFn") -> "IntFn":
        return self + (-other)


def _same_field(f: IntFn, g: IntFn) -> None:
    if f.p != g.p:
        raise DomainError(f"functions live on different fields (p={f.p} and p={g.p})")


def from_values(ctx: FieldCtx, values: Iterable[int], denom: int = 1) -> IntFn:
    return IntFn(ctx, tuple(int(v) for v in values), denom)


def zero(ctx: FieldCtx) -> IntFn:
    return IntFn(ctx, (0,) * ctx.p)


def delta(ctx: FieldCtx, x0: int = 0) -> IntFn:
    values = [0] * ctx.p
    values[x0 % ctx.p] = 1
    return IntFn(ctx, tuple(values))


def constant(ctx: FieldCtx, c: int = 1) -> IntFn:
    return IntFn(ctx, (c,) * ctx.p)


def indicator(A: SetFp) -> IntFn:
    values = [0] * A.p
    for x in A:
        values[x] = 1
    return IntFn(A.field, tuple(values))


def balanced(A: SetFp) -> IntFn:
    """f_A = A - |A|/p, stored as (p*A - |A|)/p."""
    p, n = A.p, len(A)
    members = set(A.elems)
    return IntFn(A.field, tuple((p if x in members else 0) - n for x in range(p)), p)


def as_intfn(f: IntFn | SetFp) -> IntFn:
    return indicator(f) if isinstance(f, SetFp) else f


# -- exact cyclic convolution ------------------------------------------------------


def _naive_cyclic(a: Sequence[int], b: Sequence[int]) -> List[int]:
    n = len(a)
    bound = max((abs(v) for v in a), default=0) * sum(abs(v) for v in b)
    dtype = np.int64 if bound < _INT64_SAFE else object
    B = np.array(b, dtype=dtype)
    out = np.zeros(n, dtype=dtype)
    for y, value in enumerate(a):
        if value:
            out += int(value) * np.roll(B, y)
    return [int(v) for v in out]


@lru_cache(maxsize=32)
def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _powers(root: int, m: int, q: int) -> np.ndarray:
    out = np.ones(max(m, 1), dtype=np.int64)
    k = 1
    while k < m:
        top = min(2 * k, m)
        out[k:top] = out[: top - k] * pow(root, k, q) % q
        k *= 2
    return out[:m]


def _ntt(a: np.ndarray, q: int, g: int, invert: bool = False) -> np.ndarray:
    n = a.size
    a = a[_bit_reverse(n)]
    root = pow(g, (q - 1) // n, q)
    if invert:
        root = pow(root, -1, q)
    roots = _powers(root, n // 2, q)
    length = 2
    while length <= n:
        half = length // 2
        twiddles = roots[:: n // length][:half]
        blocks = a.reshape(-1, length)
        u = blocks[:, :half].copy()
        v = blocks[:, half:] * twiddles % q
        blocks[:, :half] = (u + v) % q
        blocks[:, half:] = (u - v) % q
        length *= 2
    if invert:
        a = a * pow(n, -1, q) % q
    return a


def _linear_mod(a: Sequence[int], b: Sequence[int], size: int, prime: tuple[int, int]) -> np.ndarray:
    q, g = prime
    fa = np.zeros(size, dtype=np.int64)
    fb = np.zeros(size, dtype=np.int64)
    fa[: len(a)] = [v % q for v in a]
    fb[: len(b)] = [v % q for v in b]
    prod = _ntt(fa, q, g) * _ntt(fb, q, g) % q
    return _ntt(prod, q, g, invert=True)


def _crt(residues: Sequence[np.ndarray], primes: Sequence[int]) -> np.ndarray:
    x = residues[0].astype(object)
    modulus = primes[0]
    for r, q in zip(residues[1:], primes[1:]):
        t = ((r.astype(object) - x) % q) * pow(modulus, -1, q) % q
        x = x + modulus * t
        modulus *= q
    half = modulus // 2
    return np.where(x > half, x - modulus, x)


def _ntt_cyclic(a: Sequence[int], b: Sequence[int], threads: int = 1) -> List[int] | None:
    n = len(a)
    bound = sum(abs(v) for v in a) * max((abs(v) for v in b), default=0)
    primes: list[tuple[int, int]] = []
    modulus = 1
    for prime in NTT_PRIMES:
        if modulus > 2 * bound:
            break
        primes.append(prime)
        modulus *= prime[0]
    if modulus <= 2 * bound:
        logger.debug("coefficient bound %s exceeds the NTT prime product; using direct path", bound)
        return None
    size = 1 << max(0, (2 * n - 2).bit_length())
    logger.debug("NTT length %s over %s prime(s)", size, len(primes))
    if threads > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            residues = list(pool.map(lambda pr: _linear_mod(a, b, size, pr), primes))
    else:
        residues = [_linear_mod(a, b, size, pr) for pr in primes]
    linear = _crt(residues, [q for q, _ in primes])
    out = [int(v) for v in linear[:n]]
    for i in range(n - 1):
        out[i] += int(linear[n + i])
    return out


def cyclic_convolve(a: Sequence[int], b: Sequence[int], method: str | None = None) -> List[int]:
    """Exact cyclic convolution of two equal-length integer sequences."""
    if len(a) != len(b):
        raise DomainError("cyclic convolution needs equal lengths")
    config = get_config()
    method = method or "auto"
    if method not in ("auto", "naive", "ntt"):
        raise DomainError(f"unknown convolution method {method!r}")
    use_ntt = method == "ntt" or (method == "auto" and len(a) >= config.ntt_threshold)
    if use_ntt:
        out = _ntt_cyclic(a, b, threads=config.threads)
        if out is not None:
            return out
    return _naive_cyclic(a, b)


def add_conv(f: IntFn, g: IntFn, method: str | None = None) -> IntFn:
    """(f*g)(x) = sum_y f(y) g(x-y)."""
    _same_field(f, g)
    values = cyclic_convolve(f.values, g.values, method)
    return IntFn(f.field, tuple(values), f.denom * g.denom)


def add_corr(f: IntFn, g: IntFn, method: str | None = None) -> IntFn:
    """(f o g)(x) = sum_y f(y) g(y+x); r_{A-A} = add_corr(A, A)."""
    return add_conv(f.reflect(), g, method)


def mul_conv(f: IntFn, g: IntFn, zero_policy: str = TRACK, method: str | None = None) -> IntFn:
    """result(x) = sum_{uv = x} f(u) g(v), via dlog on F_p^*."""
    _same_field(f, g)
    if zero_policy not in ZERO_POLICIES:
        raise DomainError(f"zero_policy must be one of {ZERO_POLICIES}")
    ctx = f.field
    exp = ctx.exp
    fa = [f.values[int(x)] for x in exp]
    ga = [g.values[int(x)] for x in exp]
    conv = cyclic_convolve(fa, ga, method)
    values = [0] * ctx.p
    for i, x in enumerate(exp):
        values[int(x)] = conv[i]
    if zero_policy == TRACK:
        f0, g0 = f.values[0], g.values[0]
        values[0] = f0 * sum(g.values) + g0 * sum(f.values) - f0 * g0
    return IntFn(ctx, tuple(values), f.denom * g.denom)


# -- complex transform -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Spectrum:
    field: FieldCtx
    coeffs: np.ndarray = field(repr=False)

    def __getitem__(self, xi: int) -> complex:
        return complex(self.coeffs[xi % self.field.p])

    def max_nontrivial(self) -> float:
        return float(np.max(np.abs(self.coeffs[1:]))) if self.field.p > 1 else 0.0

    def inverse(self) -> np.ndarray:
        """f(x) = (1/p) sum_xi f^(xi) e(xi x)."""
        return np.conj(transform_array(np.conj(self.coeffs))) / self.field.p


@lru_cache(maxsize=16)
def root_table(p: int) -> np.ndarray:
    """e(k/p) for k < p; the argument is reduced exactly before exponentiation."""
    table = np.exp(2j * np.pi * np.arange(p) / p)
    table.setflags(write=False)
    return table


def _bluestein(x: np.ndarray) -> np.ndarray:
    n = x.size
    m = 1 << (2 * n - 1).bit_length()
    k = np.arange(n, dtype=np.int64)
    chirp = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    a = np.zeros(m, dtype=complex)
    a[:n] = x * chirp
    b = np.zeros(m, dtype=complex)
    b[:n] = np.conj(chirp)
    if n > 1:
        b[-(n - 1):] = np.conj(chirp[1:n])[::-1]
    c = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))
    return c[:n] * chirp


def _naive_dft(x: np.ndarray) -> np.ndarray:
    p = x.size
    roots = root_table(p)
    idx = np.arange(p, dtype=np.int64)
    out = np.empty(p, dtype=complex)
    for xi in range(p):
        terms = x * roots[(-xi * idx) % p]
        out[xi] = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return out


def transform_array(values: np.ndarray, method: str = "auto") -> np.ndarray:
    x = np.asarray(values, dtype=complex)
    if method == "naive" or (method == "auto" and x.size <= 64):
        return _naive_dft(x)
    if method not in ("auto", "chirp"):
        raise DomainError(f"unknown transform method {method!r}")
    return _bluestein(x)


def dft(f: IntFn, method: str = "auto") -> Spectrum:
    """f^(xi) = sum_x f(x) e(-xi x)."""
    return Spectrum(f.field, transform_array(f.as_float(), method))


def dft_naive(f: IntFn) -> Spectrum:
    return dft(f, method="naive")


def energy_fourier(A: SetFp, B: SetFp) -> tuple[int, float]:
    """E+(A,B) exactly and as (1/p) sum |A^|^2 |B^|^2."""
    fa, fb = indicator(A), indicator(B)
    exact = sum(v * v for v in add_conv(fa, fb).values)
    spec_a, spec_b = dft(fa).coeffs, dft(fb).coeffs
    weights = np.abs(spec_a) ** 2 * np.abs(spec_b) ** 2
    return exact, math.fsum(weights) / A.p


def identity_suite(f: IntFn, g: IntFn, suite: str = "identities") -> List[reports.BoundReport]:
    _same_field(f, g)
    p = f.p
    fhat, ghat = dft(f).coeffs, dft(g).coeffs
    n2f, n2g = f.norm_l2_sq(), g.norm_l2_sq()
    scale = max(math.sqrt(float(n2f) * float(n2g)), 1e-300)
    rows = []

    plancherel = Fraction(sum(a * b for a, b in zip(f.values, g.values)), f.denom * g.denom)
    terms = fhat * np.conj(ghat)
    spectral = complex(math.fsum(terms.real), math.fsum(terms.imag)) / p
    rows.append(reports.assert_close(suite, "F_Par", plancherel, spectral, scale=scale))

    conv = add_conv(f, g)
    conv_sq = conv.norm_l2_sq()
    power = np.abs(fhat) ** 2 * np.abs(ghat) ** 2
    rows.append(
        reports.assert_close(
            suite, "svertka", conv_sq, math.fsum(power) / p,
            scale=max(float(conv_sq), float(f.norm_l1() ** 2 * g.norm_l1() ** 2) / p, 1e-300),
        )
    )

    restored = dft(f).inverse()
    residual = float(np.max(np.abs(restored - f.as_float())))
    rows.append(
        reports.assert_le(
            suite, "f:inverse", residual, 1e-6 * max(float(f.max_abs()), 1.0),
            note="max pointwise residual of the inversion formula",
        )
    )

    conv_hat = dft(conv).coeffs
    product = fhat * ghat
    top = max(float(np.max(np.abs(product))), float(f.norm_l1() * g.norm_l1()) / p, 1e-300)
    rows.append(
        reports.assert_le(
            suite, "f:F_svertka (f*g)", float(np.max(np.abs(conv_hat - product))) / top, 1e-6,
        )
    )
    corr_hat = dft(add_corr(f, g)).coeffs
    rows.append(
        reports.assert_le(
            suite, "f:F_svertka (f o g)",
            float(np.max(np.abs(corr_hat - np.conj(fhat) * ghat))) / top, 1e-6,
        )
    )

    self_f, self_g = add_corr(f, f), add_corr(g, g)
    energy = Fraction(sum(a * b for a, b in zip(self_f.values, self_g.values)), self_f.denom * self_g.denom)
    rows.append(
        reports.assert_close(
            suite, "f:energy_Fourier", energy, math.fsum(power) / p,
            scale=max(float(abs(energy)), float(f.norm_l1() ** 2 * g.norm_l1() ** 2) / p, 1e-300),
        )
    )
    return rows
