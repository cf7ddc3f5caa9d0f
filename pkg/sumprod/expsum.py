"""Exponential and character sums over F_p with the explicit saving exponents."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import reports
from .config import get_config
from .energy import energy
from .errors import DomainError
from .fpcore import CharTable, FieldCtx, SetFp, parse_rational, poly_eval
from .transform import TRACK, IntFn, as_intfn, indicator, mul_conv, root_table, transform_array

logger = logging.getLogger(__name__)

ERR_PER_TERM = 1e-12
VARIANTS = ("three-set", "four-set", "k-free")
SPECIAL_KINDS = ("inv-shift-e", "inv-shift-chi", "rational-e", "rational-chi")

__all__ = [
    "CSum",
    "ExponentSpec",
    "SpecialSum",
    "bound_exponent",
    "instance_delta",
    "multilinear_bound",
    "multilinear_sum",
    "product_delta",
    "ps_new_ratio",
    "root_table",
    "special_sums",
    "special_sums_report",
    "trilinear_bilinear_sum",
    "trilinear_sum",
]


@dataclass(frozen=True)
class CSum:
    value: complex
    term_count: int

    @property
    def abs_bound(self) -> int:
        return self.term_count

    @property
    def err_est(self) -> float:
        return ERR_PER_TERM * max(self.term_count, 1)

    def within_trivial(self) -> bool:
        return abs(self.value) <= self.term_count + self.err_est


@dataclass(frozen=True)
class ExponentSpec:
    delta: float
    r: int
    exponent: float
    variant: str
    k: Optional[int] = None


def _fsum_complex(terms: np.ndarray) -> complex:
    terms = np.asarray(terms, dtype=complex).ravel()
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _weights(values, size: int, name: str) -> np.ndarray:
    if values is None:
        return np.ones(size, dtype=complex)
    w = np.asarray(values, dtype=complex)
    if w.shape != (size,):
        raise DomainError(f"weights {name} need shape ({size},), got {w.shape}")
    if np.any(np.abs(w) > 1 + 1e-12):
        raise DomainError(f"weights {name} must be bounded by 1 in modulus")
    return w


def _matrix(values, shape: Tuple[int, int], name: str) -> np.ndarray:
    if values is None:
        return np.ones(shape, dtype=complex)
    w = np.asarray(values, dtype=complex)
    if w.shape != shape:
        raise DomainError(f"weights {name} need shape {shape}, got {w.shape}")
    if np.any(np.abs(w) > 1 + 1e-12):
        raise DomainError(f"weights {name} must be bounded by 1 in modulus")
    return w


def _same_p(*sets: SetFp) -> int:
    primes = {s.p for s in sets}
    if len(primes) != 1:
        raise DomainError(f"sets live over different fields: {sorted(primes)}")
    return primes.pop()


def _character_sums(h: np.ndarray) -> np.ndarray:
    """G(t) = sum_z h(z) e(tz) for every t."""
    p = h.size
    spec = transform_array(h)
    return spec[(-np.arange(p)) % p]


def trilinear_sum(X: SetFp, Y: SetFp, Z: SetFp, alpha=None, beta=None, gamma=None) -> CSum:
    """S(X,Y,Z) = sum alpha_x beta_y gamma_z e(xyz), collapsed over t = xy."""
    p = _same_p(X, Y, Z)
    a = _weights(alpha, len(X), "alpha")
    b = _weights(beta, len(Y), "beta")
    c = _weights(gamma, len(Z), "gamma")
    terms = len(X) * len(Y) * len(Z)
    if terms == 0:
        return CSum(0j, 0)

    products = np.outer(X.array(), Y.array()) % p
    w = np.zeros(p, dtype=complex)
    np.add.at(w, products.ravel(), np.outer(a, b).ravel())

    h = np.zeros(p, dtype=complex)
    h[Z.array()] = c
    value = _fsum_complex(w * _character_sums(h))
    return CSum(value, terms)


def _bilinear_rows(xs: np.ndarray, rho, sigma, tau, ys: np.ndarray, zs: np.ndarray, p: int) -> List[complex]:
    roots = root_table(p)
    yz = np.outer(ys, zs) % p
    out = []
    for i, x in enumerate(xs):
        phase = roots[(int(x) * yz) % p]
        out.append(_fsum_complex(rho[i][:, None] * sigma[i][None, :] * tau * phase))
    return out


def trilinear_bilinear_sum(X: SetFp, Y: SetFp, Z: SetFp, rho=None, sigma=None, tau=None) -> CSum:
    """T(X,Y,Z) = sum rho_{x,y} sigma_{x,z} tau_{y,z} e(xyz) by direct summation."""
    p = _same_p(X, Y, Z)
    nx, ny, nz = len(X), len(Y), len(Z)
    r = _matrix(rho, (nx, ny), "rho")
    s = _matrix(sigma, (nx, nz), "sigma")
    t = _matrix(tau, (ny, nz), "tau")
    terms = nx * ny * nz
    if terms == 0:
        return CSum(0j, 0)

    xs, ys, zs = X.array(), Y.array(), Z.array()
    threads = max(1, get_config().threads)
    if threads == 1 or nx < 2 * threads:
        partial = _bilinear_rows(xs, r, s, t, ys, zs, p)
    else:
        chunks = np.array_split(np.arange(nx), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_bilinear_rows, xs[idx], r[idx], s[idx], t, ys, zs, p) for idx in chunks]
            partial = [v for fut in futures for v in fut.result()]
    return CSum(_fsum_complex(np.array(partial, dtype=complex)), terms)


def multilinear_sum(*sets: SetFp) -> CSum:
    """sum over a_1..a_r of e(a_1 ... a_r) for 3 <= r <= 5."""
    if not 3 <= len(sets) <= 5:
        raise DomainError(f"multilinear sums take 3 to 5 sets, got {len(sets)}")
    p = _same_p(*sets)
    terms = math.prod(len(s) for s in sets)
    if terms == 0:
        return CSum(0j, 0)

    dist = indicator(sets[0])
    for s in sets[1:-1]:
        dist = mul_conv(dist, indicator(s), zero_policy=TRACK)
    logger.debug("multilinear_sum: product distribution over %d sets, p=%d", len(sets) - 1, p)

    h = np.zeros(p, dtype=complex)
    h[sets[-1].array()] = 1.0
    counts = np.array([float(v) for v in dist.values])
    return CSum(_fsum_complex(counts * _character_sums(h)), terms)


def bound_exponent(delta: float, r: int = 3, variant: str = "three-set") -> ExponentSpec:
    """Saving exponent e such that the sum is at most prod|A_j| * p^(-e)."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if variant == "three-set":
        log_term = max(math.log2(8 / delta), 0.0)
        return ExponentSpec(delta, r, delta / (8 * log_term + 4), variant)
    if variant == "four-set":
        steps = max(math.ceil(0.5 * math.log2(200 / delta)), 1)
        return ExponentSpec(delta, r, delta / (16 * steps**2), variant)
    if variant == "k-free":
        l = max(math.ceil(2 * math.log2(8 / delta)), 1)
        k = max(math.ceil(math.log2(l)), 0)
        return ExponentSpec(delta, r, delta / (4 * l), variant, k=k)
    raise DomainError(f"unknown exponent variant {variant!r}; expected one of {', '.join(VARIANTS)}")


def instance_delta(value: float, trivial: float, p: int) -> float:
    """delta with |value| = trivial * p^(-delta); infinite for a vanishing sum."""
    value = abs(value)
    if trivial <= 0:
        return 0.0
    if value == 0:
        return math.inf
    return math.log(trivial / value) / math.log(p)


def product_delta(*sets: SetFp) -> float:
    """delta with prod |A_j| = p^(1 + delta)."""
    p = _same_p(*sets)
    size = math.prod(len(s) for s in sets)
    if not size:
        raise DomainError("product_delta needs non-empty sets")
    return math.log(size) / math.log(p) - 1


def multilinear_bound(X: SetFp, Y: SetFp, Z: SetFp, k: int) -> float:
    p = _same_p(X, Y, Z)
    if k < 1:
        raise DomainError("multilinear bound needs k >= 1")
    nx, ny, nz = len(X), len(Y), len(Z)
    if not nx * ny * nz:
        return 0.0
    e = 2.0 ** -(k + 1)
    return nx * ny * nz * (nz**-e + (p / (nx * ny * nz)) ** e * (nx * ny) ** (2.0 ** -(2**k)))


def ps_new_ratio(X: SetFp, Y: SetFp, Z: SetFp, suite: str = "multilinear") -> List[reports.BoundReport]:
    """Both sides of the trilinear and bilinear-weighted bounds with |X| >= |Y| >= |Z|."""
    p = _same_p(X, Y, Z)
    X, Y, Z = sorted((X, Y, Z), key=len, reverse=True)
    nx, ny, nz = len(X), len(Y), len(Z)
    if not nx * ny * nz:
        raise DomainError("trilinear bounds need non-empty sets")
    S = abs(trilinear_sum(X, Y, Z).value)
    T = abs(trilinear_bilinear_sum(X, Y, Z).value)

    e_mul = float(energy("x", Z))
    e_add = float(energy("+", Y))
    log_y = math.log2(ny) if ny > 1 else 0.0
    rhs_s = (
        log_y**0.25 * p**0.25 * nx**0.75 * ny**0.625 * nz**0.5 * e_mul**0.125 * e_add**0.0625
        + nx**0.75 * ny * nz
    )
    rhs_t = p**0.125 * nx**0.875 * (ny * nz) ** (29 / 32) * (ny * nz) ** (-1 / 3072)
    return [
        reports.ratio_row(suite, "c:PS_new (S)", S, rhs_s, note=f"|X|={nx} |Y|={ny} |Z|={nz}"),
        reports.ratio_row(suite, "c:PS_new (T)", T, rhs_t, note=f"|X|={nx} |Y|={ny} |Z|={nz}"),
    ]


# -- special sums ------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialSum:
    kind: str
    csum: CSum
    skipped: int

    @property
    def value(self) -> complex:
        return self.csum.value


def _vector(f: IntFn | SetFp) -> np.ndarray:
    return as_intfn(f).as_float().astype(complex)


def _char_shifts(g: np.ndarray, chi: CharTable) -> np.ndarray:
    """H(s) = sum_y g(y) chi(y + s) for every s."""
    p = g.size
    spec_g = np.fft.fft(g)
    return np.fft.ifft(spec_g[(-np.arange(p)) % p] * np.fft.fft(chi.values()))


def special_sums(
    kind: str,
    f: IntFn | SetFp,
    g: IntFn | SetFp,
    B: SetFp,
    char: CharTable | None = None,
    r1=None,
    r2=None,
) -> SpecialSum:
    """Bilinear sums twisted by x -> 1/(x+b_1) + b_2 or by a Moebius map with coefficients in B.

    Terms with a vanishing denominator are dropped; ``skipped`` counts the dropped
    (x, b) pairs over the support of f.
    """
    if kind not in SPECIAL_KINDS:
        raise DomainError(f"unknown special sum {kind!r}; expected one of {', '.join(SPECIAL_KINDS)}")
    ctx: FieldCtx = B.field
    p = ctx.p
    fv, gv = _vector(f), _vector(g)
    if fv.size != p or gv.size != p:
        raise DomainError("f, g and B must live over the same field")
    if kind.endswith("chi") and (char is None or char.field.p != p):
        raise DomainError(f"{kind} needs a multiplicative character over F_{p}")
    if kind.startswith("rational"):
        (p1, q1), (p2, q2) = parse_rational(r1, "r1"), parse_rational(r2, "r2")

    support = [x for x in range(p) if fv[x] != 0]
    bs = B.array()
    terms = len(support) * int(np.count_nonzero(gv)) * len(B) ** (2 if kind.startswith("inv") else 1)
    if not len(B) or not support:
        return SpecialSum(kind, CSum(0j, terms), 0)

    if kind.endswith("-e"):
        inner = _character_sums(gv)
    else:
        inner = _char_shifts(gv, char)

    skipped = 0
    partial = []
    for x in support:
        if kind.startswith("inv"):
            shifts = (x + bs) % p
            ok = shifts != 0
            skipped += int(np.count_nonzero(~ok))
            if not ok.any():
                continue
            u = np.array([ctx.inv(int(s)) for s in shifts[ok]], dtype=np.int64)
            args = (u[:, None] + bs[None, :]) % p
        else:
            args_list = []
            for b in bs:
                a1, c1 = poly_eval(p1, int(b), p), poly_eval(q1, int(b), p)
                a2, c2 = poly_eval(p2, int(b), p), poly_eval(q2, int(b), p)
                num = (c1 * c2 * x + a1 * c2) % p
                den = (a2 * c1 * x + c1 * c2 + a1 * a2) % p
                if den == 0:
                    skipped += 1
                    continue
                args_list.append(num * ctx.inv(den) % p)
            if not args_list:
                continue
            args = np.array(args_list, dtype=np.int64)
        partial.append(fv[x] * _fsum_complex(inner[args]))

    if skipped:
        logger.debug("special_sums(%s): skipped %d vanishing denominators", kind, skipped)
    return SpecialSum(kind, CSum(_fsum_complex(np.array(partial, dtype=complex)), terms), skipped)


def special_sums_report(
    result: SpecialSum,
    f: IntFn | SetFp,
    g: IntFn | SetFp,
    B: SetFp,
    delta: float | None = None,
    suite: str = "multilinear",
) -> reports.BoundReport:
    """Ratio of |sum| against ||f||_2 ||g||_2 sqrt(p) |B|^m p^(-delta)."""
    p = B.p
    f, g = as_intfn(f), as_intfn(g)
    power = 2 if result.kind.startswith("inv") else 1
    d = 0.0 if delta is None else delta
    rhs = math.sqrt(float(f.norm_l2_sq()) * float(g.norm_l2_sq()) * p) * len(B) ** power * p ** (-d)
    notes = [f"delta={d:.6g}", f"skipped={result.skipped}"]
    if f.total() != 0:
        notes.append("f is not mean-zero")
    claim = "c:new_exp_sums" if power == 2 else "c:R[A,B,B]"
    return reports.ratio_row(suite, f"{claim} ({result.kind})", abs(result.value), rhs, note=" ".join(notes))
