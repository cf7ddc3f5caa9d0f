"""Energy-type quantities: E+, Ex, E+_k, T+_k, D×_k, D'_k, N, N', sigma_P and the subgroup suite."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from . import reports
from .config import get_config
from .errors import DomainError, InvarianceError, check_guard
from .fpcore import FieldCtx, SetFp, inverse_set, legendre, productset
from .transform import (
    EXCLUDE,
    TRACK,
    IntFn,
    add_conv,
    add_corr,
    as_intfn,
    balanced,
    dft,
    from_values,
    indicator,
    mul_conv,
)

logger = logging.getLogger(__name__)

EnergyValue = Fraction

ADD_OPS = {"+", "add", "plus"}
MUL_OPS = {"x", "*", "×", "mul", "times"}


def _sum_sq(f: IntFn) -> EnergyValue:
    return Fraction(sum(v * v for v in f.values), f.denom**2)


def _k_cap(k: int, operation: str) -> None:
    if k < 1:
        raise DomainError(f"{operation}: k must be at least 1, got {k}")
    check_guard(operation, k, get_config().k_cap, advice="raise SUMPROD_K_CAP to allow larger k")


def rep_fn(kind: str, A: SetFp, B: SetFp | None = None, k: int = 2) -> IntFn:
    """Representation function r_{A+B}, r_{A-B}, r_{AB}, r_{A/B} or r_{kA}."""
    if kind == "kA":
        if k < 1:
            raise DomainError("k-fold sumset needs k >= 1")
        f = indicator(A)
        result = f
        for _ in range(k - 1):
            result = add_conv(result, f)
        return result
    if B is None:
        B = A
    if A.p != B.p:
        raise DomainError("sets live on different fields")
    if kind == "A+B":
        return add_conv(indicator(A), indicator(B))
    if kind == "A-B":
        return add_corr(indicator(B), indicator(A))
    if kind == "A*B":
        return mul_conv(indicator(A), indicator(B), TRACK)
    if kind == "A/B":
        return mul_conv(indicator(A), indicator(inverse_set(B)), TRACK)
    raise DomainError(f"unknown representation kind {kind!r}")


def energy(op: str, A: SetFp, B: SetFp | None = None) -> EnergyValue:
    """E+(A,B) or Ex(A,B) as a quadruple count (zero products included)."""
    B = A if B is None else B
    if op in ADD_OPS:
        return _sum_sq(rep_fn("A+B", A, B))
    if op in MUL_OPS:
        return _sum_sq(rep_fn("A*B", A, B))
    raise DomainError(f"unknown energy operation {op!r}")


def energy_fn(f: IntFn | SetFp, g: IntFn | SetFp) -> EnergyValue:
    """E+(f,g) = sum_x (f*g)(x)^2."""
    return _sum_sq(add_conv(as_intfn(f), as_intfn(g)))


def energy_k(f: IntFn | SetFp, k: int) -> EnergyValue:
    """E+_k(f) = sum_x (f o f)(x)^k."""
    _k_cap(k, "energy_k")
    h = as_intfn(f)
    r = add_corr(h, h)
    return Fraction(sum(v**k for v in r.values), r.denom**k)


def tk(f: IntFn | SetFp, k: int) -> EnergyValue:
    """T+_k(f) = sum_x r_{kf}(x)^2."""
    _k_cap(k, "tk")
    h = as_intfn(f)
    r = h
    for _ in range(k - 1):
        r = add_conv(r, h)
    return _sum_sq(r)


def energy4(f1: IntFn | SetFp, f2: IntFn | SetFp, f3: IntFn | SetFp, f4: IntFn | SetFp) -> EnergyValue:
    """sum_{x,y,z} f1(x) f2(y) f3(x+z) f4(y+z) = sum_z (f1 o f3)(z) (f2 o f4)(z)."""
    left = add_corr(as_intfn(f1), as_intfn(f3))
    right = add_corr(as_intfn(f2), as_intfn(f4))
    return Fraction(sum(a * b for a, b in zip(left.values, right.values)), left.denom * right.denom)


def _difference_rep(A: SetFp | IntFn) -> IntFn:
    h = as_intfn(A)
    return add_corr(h, h)


def dtimes_k(A: SetFp | IntFn, k: int, zero_policy: str = TRACK) -> EnergyValue:
    """Collisions of products of k differences; Z counts the tuples whose product is 0."""
    if k < 1:
        raise DomainError(f"dtimes_k: k must be at least 1, got {k}")
    check_guard("dtimes_k", k, get_config().dtimes_cap, advice="raise SUMPROD_DTIMES_CAP to allow larger k")
    if zero_policy not in (TRACK, EXCLUDE):
        raise DomainError(f"unknown zero policy {zero_policy!r}")
    r = _difference_rep(A)
    nonzero = from_values(r.field, (0,) + r.values[1:], r.denom)
    R = nonzero
    for _ in range(k - 1):
        R = mul_conv(R, nonzero, EXCLUDE)
    collisions = sum(v * v for v in R.values[1:])
    if zero_policy == TRACK:
        zeros = sum(r.values) ** k - sum(R.values[1:])
        collisions += zeros * zeros
    return Fraction(collisions, R.denom**2)


def dprime_k(A: SetFp, k: int) -> EnergyValue:
    """D'_k(A) = T+_k(r_{AA}); k = 1 gives Ex(A)."""
    return tk(rep_fn("A*B", A, A), k)


def n_quantity(A: SetFp, B: SetFp | None = None, C: SetFp | None = None) -> EnergyValue:
    """N(A,B,C) = |{a(b-c) = a'(b'-c')}|."""
    B = A if B is None else B
    C = A if C is None else C
    S = mul_conv(indicator(A), rep_fn("A-B", B, C), TRACK)
    return _sum_sq(S)


def nprime(A: SetFp) -> EnergyValue:
    """N'(A) = |{a1 a2 + a3 = a1' a2' + a3'}|."""
    return _sum_sq(add_conv(rep_fn("A*B", A, A), indicator(A)))


def sigma_p(A: SetFp, P: SetFp) -> EnergyValue:
    r = rep_fn("A-B", A, A)
    return Fraction(sum(r.values[x] for x in P))


def change_qg_check(f: IntFn | SetFp, P: SetFp, k: int, suite: str = "energy") -> reports.BoundReport:
    """(sum_{x in P} r_{f-f}(x)^k)^4 <= ||f||_2^{4k} E+_{2k}(f) E+(P), asserted exactly."""
    if 0 in P:
        raise DomainError("P must lie in F_p^*")
    h = as_intfn(f)
    r = add_corr(h, h)
    inner = Fraction(sum(r.values[x] ** k for x in P), r.denom**k)
    lhs = inner**4
    rhs = h.norm_l2_sq() ** (2 * k) * energy_k(h, 2 * k) * energy("+", P)
    return reports.assert_le(suite, f"l:change_QG k={k}", lhs, rhs)


# -- constant-free inequality bundle --------------------------------------------


def _sum_sqrt_ge(values: Sequence[int | Fraction], target: int | Fraction, digits: int = 12) -> bool:
    """(sum sqrt(v))^2 >= target with integer square roots at 10**digits resolution."""
    scale = 10**digits
    lower = 0
    upper = 0
    for v in values:
        root = math.isqrt(int(Fraction(v) * scale * scale))
        lower += root
        upper += root + 1
    bound = Fraction(target) * scale * scale
    if lower * lower >= bound:
        return True
    if upper * upper < bound:
        return False
    return True


def union_norm_check(parts: Sequence[SetFp], X: SetFp, suite: str = "energy") -> reports.BoundReport:
    """(sum_j Ex(A_j, X)^{1/2})^2 >= Ex(union A_j, X) for disjoint parts."""
    seen: set[int] = set()
    for part in parts:
        if seen & set(part.elems):
            raise DomainError("parts must be disjoint")
        seen |= set(part.elems)
    union = SetFp.of(X.field, seen)
    per_part = [energy("x", part, X) for part in parts]
    total = energy("x", union, X)
    holds = _sum_sqrt_ge(per_part, total)
    lhs = sum(math.sqrt(float(v)) for v in per_part) ** 2
    return reports.assert_true(suite, "Ex norm over disjoint parts", holds, lhs=lhs, rhs=total)


def crude_checks(A: SetFp, B: SetFp | None = None, k_max: int = 4, suite: str = "inequalities") -> List[reports.BoundReport]:
    """Constant-free energy inequalities evaluated exactly on A (and B)."""
    B = A if B is None else B
    a, b = len(A), len(B)
    rows = []
    e_ab = energy("+", A, B)
    rows.append(reports.assert_le(suite, "f:E_CS |A|^2|B|", e_ab, a * a * b))
    rows.append(reports.assert_le(suite, "f:E_CS |B|^2|A|", e_ab, b * b * a))
    rows.append(reports.assert_le(suite, "f:E_CS (|A||B|)^{3/2}", e_ab * e_ab, (a * b) ** 3))

    t_prev = tk(A, 1)
    for k in range(2, k_max + 1):
        t_k = tk(A, k)
        rows.append(reports.assert_le(suite, f"f:T_f_12 k={k}", t_k, a * a * t_prev))
        rows.append(reports.assert_le(suite, f"f:T_f_12' k={k}", t_k, a ** (2 * k - 2) * a))
        t_prev = t_k

    e_values = {k: energy_k(A, k) for k in range(1, k_max + 1)}
    for k, e_k in e_values.items():
        rows.append(reports.assert_true(suite, f"|A|^k <= E_k <= |A|^(k+1) k={k}", a**k <= e_k <= a ** (k + 1), lhs=e_k))
        for l in range(1, k):
            rows.append(reports.assert_le(suite, f"f:E_k_crude k={k} l={l}", e_k, a ** (k - l) * e_values[l]))

    fa = balanced(A)
    for k in range(2, k_max + 1, 2):
        value = energy_k(fa, k)
        rows.append(reports.assert_true(suite, f"f:E_k_Fourier k={k}", value >= 0, lhs=value, rhs=0))

    e_a, e_b = energy("+", A), energy("+", B)
    for label, quad in (("A,B,A,B", (A, B, A, B)), ("A,A,B,B", (A, A, B, B))):
        value = energy4(*quad)
        rows.append(reports.assert_le(suite, f"f:E_Ho ({label})", value**4, e_a * e_a * e_b * e_b))
    return rows


# -- subgroup-invariant suite ---------------------------------------------------


@dataclass
class GammaReport:
    gamma: SetFp
    f: IntFn
    rows: List[reports.BoundReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(row.failed for row in self.rows)


def check_invariance(gamma: SetFp, f: IntFn) -> None:
    p = f.p
    for x in range(1, p):
        for g in gamma:
            if f.values[x * g % p] != f.values[x]:
                raise InvarianceError(x=x, gamma=g)


def legendre_fn(ctx: FieldCtx) -> IntFn:
    return from_values(ctx, (legendre(ctx, x) for x in range(ctx.p)))


def _norm1(f: IntFn) -> float:
    return float(f.norm_l1())


def _norm2(f: IntFn) -> float:
    return math.sqrt(float(f.norm_l2_sq()))


def _shape_log(f: IntFn) -> float:
    n1, n2 = _norm1(f), _norm2(f)
    return 1 + math.log2(n1 / n2) if n2 else 1.0


def exp_sum_row(gamma: SetFp, f: IntFn, suite: str = "gamma") -> reports.BoundReport:
    p = f.p
    delta = math.log(len(gamma)) / math.log(p)
    peak = dft(f).max_nontrivial()
    rhs = _norm1(f) * p ** (-5 * delta / 2 ** (7 + 2 / delta)) if delta > 0 else _norm1(f)
    return reports.ratio_row(suite, "c:exp_sums max|f^|", peak, rhs, note=f"delta={delta:.6g}")


def q_shift_row(gamma: SetFp, f: IntFn, k: int, suite: str = "gamma") -> reports.BoundReport:
    """Either branch of the E_{2^{k+1}} dichotomy; the second branch is exact."""
    big = energy_k(f, 2 ** (k + 1))
    n2sq = f.norm_l2_sq()
    second = 2 * n2sq ** (2 ** (k + 1))
    if big <= second:
        return reports.assert_le(suite, f"t:Q_shift k={k} (second branch)", big, second)
    small = energy_k(f, 2**k)
    shape = _shape_log(f) * float(n2sq) ** (2**k) * float(small) * len(gamma) ** (-1 / 8) * 32
    measured = (float(big) / shape) ** 4 if shape else float("inf")
    return reports.ratio_row(
        suite, f"t:Q_shift k={k} (first branch)", big, shape,
        note=f"implied C_*={measured:.6g}",
    )


def e_k_sigma_rows(f: IntFn, B: SetFp, g: IntFn, k: int, suite: str = "gamma") -> List[reports.BoundReport]:
    """Hölder chain for sum over x in B of (g o f)(x)^s, s = 1, 2, 4, ..., 2^k."""
    rows = []
    e_big = energy_k(f, 2 ** (k + 1))
    premise = e_big <= 2 * f.norm_l2_sq() ** (2 ** (k + 1))
    e_b = energy("+", B)
    b = len(B)
    corr = add_corr(g, f)
    n2g, n2f = g.norm_l2_sq(), f.norm_l2_sq()
    s = 1
    while s <= 2**k:
        value = Fraction(sum(corr.values[x] ** s for x in B), corr.denom**s)
        power = 2 ** (k + 2) // s
        chain_rhs = Fraction(b) ** (power - 4) * n2g ** (2 ** (k + 1)) * e_big * e_b
        rows.append(reports.assert_le(suite, f"f:E_k_sigma+ Hölder chain k={k} s={s}", abs(value) ** power, chain_rhs))
        bound = b * math.sqrt(float(n2g)) ** s * math.sqrt(float(n2f)) ** s * (2 * float(e_b) / b**4) ** (s / 2 ** (k + 2))
        if premise:
            rows.append(reports.assert_le(suite, f"f:E_k_sigma+ k={k} s={s}", float(abs(value)), bound, rel_tol=1e-9))
        else:
            rows.append(
                reports.ratio_row(
                    suite, f"f:E_k_sigma+ k={k} s={s}", float(abs(value)), bound,
                    note="premise E_{2^(k+1)}(f) <= 2||f||^(2^(k+2)) fails",
                )
            )
        s *= 2
    return rows


def max_fcf_row(gamma: SetFp, f: IntFn, k: int, suite: str = "gamma") -> reports.BoundReport:
    r = add_corr(f, f)
    peak = float(max(abs(v) for v in r.values[1:])) / r.denom if f.p > 1 else 0.0
    rhs = float(f.norm_l2_sq()) * (2 / len(gamma)) ** (1 / 2 ** (k + 1))
    return reports.ratio_row(suite, f"f:max_fcf k={k}", peak, rhs)


def multiplicative_energy_l(h: IntFn, l: int) -> EnergyValue:
    """Ex_l(h) = sum_{x != 0} r_{h/h}(x)^l."""
    _k_cap(l, "multiplicative_energy_l")
    p = h.p
    inv = from_values(h.field, (h.values[pow(x, -1, p)] if x else 0 for x in range(p)), h.denom)
    r = mul_conv(h, inv, EXCLUDE)
    return Fraction(sum(v**l for v in r.values[1:]), r.denom**l)


def translate(f: IntFn, t: int = 1) -> IntFn:
    """x -> f(x - t)."""
    p = f.p
    return from_values(f.field, (f.values[(x - t) % p] for x in range(p)), f.denom)


def g_plus_one_exponent(gamma: SetFp, f: IntFn, k: int = 1) -> int:
    """l = 2^(k+s+1) + 1 with s = ceil(2 log||f||_1 / log(|Gamma|/2))."""
    g = len(gamma)
    norm1 = float(f.norm_l1())
    if g <= 2 or norm1 <= 1:
        s = 0
    else:
        s = max(0, math.ceil(2 * math.log(norm1) / math.log(g / 2)))
    return 2 ** (k + s + 1) + 1


def g_plus_one_row(
    gamma: SetFp, f: IntFn, k: int = 1, l: int | None = None, suite: str = "gamma"
) -> reports.BoundReport:
    """Ex_l of the translate x -> f(x - 1) against 3||f||_2^(2l)."""
    note = ""
    if l is None:
        l = g_plus_one_exponent(gamma, f, k)
        cap = get_config().k_cap
        if l > cap:
            logger.warning("g_plus_one_row: l=%s exceeds k cap %s; reporting l=%s", l, cap, cap)
            note = f"l={l} capped to {cap}"
            l = cap
    value = multiplicative_energy_l(translate(f), l)
    rhs = 3 * f.norm_l2_sq() ** l
    return reports.ratio_row(suite, f"c:G+1 l={l}", value, rhs, note=note)


def gamma_suite(gamma: SetFp, f: IntFn, k_max: int = 3, suite: str = "gamma") -> GammaReport:
    check_invariance(gamma, f)
    if f.total() != 0:
        raise DomainError("gamma_suite needs a function with zero sum")
    cap = get_config().k_cap
    p = f.p
    report = GammaReport(gamma=gamma, f=f)
    rows = report.rows
    g = len(gamma)
    t2 = tk(f, 2)
    log4 = math.log2(p) ** 4
    for k in range(1, k_max + 1):
        if 2**k > cap:
            logger.warning("gamma_suite: T_%s exceeds k cap %s; stopping at k=%s", 2**k, cap, k - 1)
            break
        t_gamma = tk(gamma, 2**k)
        rows.append(
            reports.assert_le(
                suite, f"f:T_k_G_intr lower k={k}", Fraction(g ** (2 ** (k + 1)), p), t_gamma,
            )
        )
        if k >= 2:
            t_f = tk(f, 2**k)
            rhs = 2.0 ** (3 * k * k) * log4 ** (k - 1) * _norm1(f) ** (2 ** (k + 1) - 4) * g ** ((1 - k) / 2) * float(t2)
            rows.append(reports.ratio_row(suite, f"f:T_k_G k={k}", t_f, rhs))
    if not f.is_zero():
        rows.append(exp_sum_row(gamma, f, suite))
        rows.append(g_plus_one_row(gamma, f, suite=suite))
    for k in range(2, k_max + 1):
        if 2 ** (k + 1) > cap:
            break
        if f.is_zero():
            rows.append(reports.assert_le(suite, f"t:Q_shift k={k} (second branch)", Fraction(0), Fraction(0)))
            continue
        rows.append(q_shift_row(gamma, f, k, suite))
        rows.extend(e_k_sigma_rows(f, gamma, f, k, suite))
        rows.append(max_fcf_row(gamma, f, k, suite))
    chi = legendre_fn(f.field)
    for k in range(2, max(k_max, 2) + 1):
        if k > cap:
            break
        expected = (p - 1) ** k + (p - 1) * (-1) ** k
        rows.append(reports.assert_eq(suite, f"E_k(legendre) k={k}", energy_k(chi, k), Fraction(expected)))
    return report


# -- ratio reports for bounds with implicit constants ----------------------------


def _log2(x: float) -> float:
    return math.log2(x) if x > 1 else 1.0


def small_energy_ratio(Q: SetFp, A: SetFp, suite: str = "energy") -> reports.BoundReport:
    """E+(Q) against C_*(M^2|Q|^4/p + M^{3/2}|Q|^3/|A|^{1/2}) with M = |QA|/|Q|."""
    q, a, p = len(Q), len(A), Q.p
    M = len(productset(Q, A)) / q
    rhs = M * M * q**4 / p + M**1.5 * q**3 / math.sqrt(a)
    return reports.ratio_row(suite, "l:AA_small_energy", energy("+", Q), rhs, note=f"M={M:.6g}")


def dtimes_bound_ratio(A: SetFp, k: int = 2, suite: str = "energy") -> List[reports.BoundReport]:
    a, p = len(A), A.p
    value = dtimes_k(A, k)
    main = Fraction(a ** (4 * k), p)
    e_plus = float(energy("+", A))
    if k == 2:
        rhs = _log2(a) ** 2 * a**5 * math.sqrt(e_plus)
        claim = "t:D_times k=2"
    else:
        rhs = _log2(a) ** 4 * a ** (4 * k - 2 - 2 ** (-k + 2)) * e_plus ** (1 / 2 ** (k - 1))
        claim = f"t:D_times k={k}"
    rows = [reports.ratio_row(suite, claim, value, rhs, main_term=main)]
    if k == 2:
        rows.append(reports.ratio_row(suite, "t:D_uncond |A|^{13/2-1/434}", value, a ** (6.5 - 1 / 434)))
    return rows


def n_bound_ratio(A: SetFp, B: SetFp, suite: str = "energy") -> reports.BoundReport:
    """N(B,A,A) - |A|^4|B|^2/p against Ex(B)^{1/2} E+(A)^{1/4} |A|^{5/2} log|A|."""
    a, b, p = len(A), len(B), A.p
    value = n_quantity(B, A, A)
    main = Fraction(a**4 * b * b, p)
    rhs = math.sqrt(float(energy("x", B))) * float(energy("+", A)) ** 0.25 * a**2.5 * _log2(a)
    return reports.ratio_row(suite, "c:N(A)", value, rhs, main_term=main)


def nprime_bound_ratio(A: SetFp, suite: str = "energy") -> reports.BoundReport:
    a, p = len(A), A.p
    rhs = a**2.5 * math.sqrt(float(energy("+", A))) * float(energy("x", A)) ** 0.25 * _log2(a)
    return reports.ratio_row(suite, "c:N'(A)", nprime(A), rhs, main_term=Fraction(a**6, p))


def weighted_incidence_ratio(alpha: IntFn, beta: IntFn, C: SetFp, suite: str = "energy") -> reports.BoundReport:
    """sum_x r^2_{alpha beta + C}(x) against the weighted incidence error shape."""
    if any(v < 0 for v in alpha.values) or any(v < 0 for v in beta.values):
        raise DomainError("weights must be non-negative")
    r = add_conv(mul_conv(alpha, beta, TRACK), indicator(C))
    value = _sum_sq(r)
    n1a, n1b = alpha.norm_l1(), beta.norm_l1()
    n2a, n2b = math.sqrt(float(alpha.norm_l2_sq())), math.sqrt(float(beta.norm_l2_sq()))
    c = len(C)
    main = (n1a * n1b * c) ** 2 / alpha.p
    L = _log2(float(n1a * n1b) * c / (n2a * n2b)) if n2a and n2b else 1.0
    rhs = L**4 * float(n1a * n1b) * n2a * n2b * c**1.5
    return reports.ratio_row(suite, "cor:weight_inc", value, rhs, main_term=main)


def random_partition(A: SetFp, parts: int, rng: np.random.Generator) -> List[SetFp]:
    labels = rng.integers(0, parts, size=len(A))
    return [SetFp.of(A.field, (x for x, lab in zip(A.elems, labels) if lab == j)) for j in range(parts)]
