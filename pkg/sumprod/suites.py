"""Verification suites.

Each suite draws its instances from a PCG64 stream seeded by (seed, p) and returns
report rows. ``small`` shrinks primes, sizes and trial counts to desk-check scale.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from . import decompose, energy, expsum, incidence, oracle, reports, sl2, transform
from .errors import DomainError
from .fpcore import RNG_ALGORITHM, FieldCtx, SetFp, coset, make_field, mul_char, quadratic_residues
from .transform import IntFn

logger = logging.getLogger(__name__)

PRNG = RNG_ALGORITHM

Rows = List[reports.BoundReport]

RATIONAL_R1 = ((0, 1), (1,))
RATIONAL_R2 = ((0, 0, 1), (1,))


@dataclass(frozen=True)
class SuiteParams:
    p: int | None = None
    seed: int = 0
    small: bool = False

    def primes(self, full: Sequence[int], small: Sequence[int]) -> Tuple[int, ...]:
        if self.p is not None:
            return (self.p,)
        return tuple(small if self.small else full)

    def count(self, full: int, small: int) -> int:
        return small if self.small else full

    def rng(self, *salt: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64([self.seed, *salt]))


def _sample(ctx: FieldCtx, rng: np.random.Generator, lo: int, hi: int, nonzero: bool = False) -> SetFp:
    pool = np.arange(1 if nonzero else 0, ctx.p)
    n = min(int(rng.integers(lo, hi + 1)), len(pool))
    return SetFp.of(ctx, (int(x) for x in rng.choice(pool, size=n, replace=False)))


def _int_fn(ctx: FieldCtx, rng: np.random.Generator, bound: int = 5) -> IntFn:
    return transform.from_values(ctx, rng.integers(-bound, bound + 1, size=ctx.p))


def _sparse_fn(ctx: FieldCtx, rng: np.random.Generator, size: int, bound: int = 3) -> IntFn:
    values = np.zeros(ctx.p, dtype=np.int64)
    support = rng.choice(ctx.p, size=min(size, ctx.p), replace=False)
    values[support] = rng.integers(1, bound + 1, size=len(support))
    return transform.from_values(ctx, values)


def _mean_zero_fn(ctx: FieldCtx, rng: np.random.Generator, bound: int = 5) -> IntFn:
    values = rng.integers(-bound, bound + 1, size=ctx.p)
    values[0] -= values.sum()
    return transform.from_values(ctx, values)


def _unit_weights(rng: np.random.Generator, shape) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(shape))


# -- identities -----------------------------------------------------------------


def identities(params: SuiteParams) -> Rows:
    rows: Rows = []
    for p in params.primes((101, 257, 1009, 4099), (101, 257)):
        ctx, rng = make_field(p), params.rng(p)
        for _ in range(params.count(50, 5)):
            rows.extend(transform.identity_suite(_int_fn(ctx, rng, 10), _int_fn(ctx, rng, 10)))
        A, B = _sample(ctx, rng, 1, p // 4), _sample(ctx, rng, 1, p // 4)
        exact, spectral = transform.energy_fourier(A, B)
        rows.append(reports.assert_close("identities", "f:energy_Fourier (sets)", exact, spectral, note=f"p={p}"))
    return rows


# -- oracle equivalence ---------------------------------------------------------


def _eq(name: str, fast, slow, p: int) -> reports.BoundReport:
    return reports.assert_eq("oracle", f"oracle {name}", fast, slow, note=f"p={p}")


def _close(name: str, fast: complex, slow: complex, p: int) -> reports.BoundReport:
    return reports.assert_close("oracle", f"oracle {name}", fast, slow, note=f"p={p}")


def _oracle_counts(ctx: FieldCtx, rng: np.random.Generator, k_top: int) -> Rows:
    p = ctx.p
    A = _sample(ctx, rng, 1, 4)
    B = _sample(ctx, rng, 1, 5)
    C = _sample(ctx, rng, 1, 5)
    D = _sample(ctx, rng, 1, 3)
    rows = [
        _eq("E+", energy.energy("+", A, B), oracle.brute("E+", A, B), p),
        _eq("Ex", energy.energy("x", A, B), oracle.brute("Ex", A, B), p),
    ]
    for k in range(1, k_top + 1):
        rows.append(_eq(f"E+_{k}", energy.energy_k(A, k), oracle.brute("E+_k", A, k), p))
        rows.append(_eq(f"T+_{k}", energy.tk(A, k), oracle.brute("T+_k", A, k), p))
    for k in (1, 2):
        rows.append(_eq(f"Dx_{k}", energy.dtimes_k(A, k), oracle.brute("Dx_k", A, k), p))
        rows.append(_eq(f"D'_{k}", energy.dprime_k(A, k), oracle.brute("D'_k", A, k), p))
    rows.append(_eq("N", energy.n_quantity(A, B, C), oracle.brute("N", A, B, C), p))
    rows.append(_eq("N'", energy.nprime(A), oracle.brute("N'", A), p))
    P = SetFp.of(ctx, [x for x in B if x] + [(-x) % p for x in B if x])
    rows.append(_eq("sigma_P", energy.sigma_p(A, P), oracle.brute("sigma_P", A, P), p))
    x = int(rng.integers(p))
    for kind in ("A+B", "A-B", "A*B", "A/B"):
        rows.append(_eq(f"r_{kind}({x})", energy.rep_fn(kind, A, B).values[x], oracle.brute("rep", kind, A, B, x), p))

    rows.append(_eq("T", incidence.collinear_triples(A), oracle.brute("T", A), p))
    quad = (A, D, C if len(C) <= 3 else D, D)
    slow_q = oracle.brute("Q", *quad)
    rows.append(_eq("Q", incidence.collinear_quadruples(*quad), slow_q, p))
    rows.append(_eq("q_function", incidence.q_function(*quad).total, slow_q, p))

    lines = incidence.LineSet.random(ctx, int(rng.integers(1, 2 * p)), rng)
    rows.append(_eq("point_line", incidence.count_point_line(A, B, lines), oracle.brute("point_line", A, B, lines.lines), p))
    pts = incidence.PointSet3.of(ctx, rng.integers(0, p, size=(int(rng.integers(1, 12)), 3)).tolist())
    raw = rng.integers(0, p, size=(int(rng.integers(1, 12)), 4))
    raw[~raw[:, :3].any(axis=1), 2] = 1
    planes = incidence.PlaneSet.of(ctx, raw.tolist())
    rows.append(
        _eq("point_plane", incidence.point_plane_incidences(pts, planes),
            oracle.brute("point_plane", pts.points, planes.planes, p), p)
    )
    return rows


def _oracle_sl2(ctx: FieldCtx, rng: np.random.Generator, k_top: int) -> Rows:
    p = ctx.p
    A = _sample(ctx, rng, 1, 5)
    A2 = _sample(ctx, rng, 1, 5)
    B1, B2, B3 = (_sample(ctx, rng, 1, 3) for _ in range(3))
    rows = []
    for k in range(1, min(k_top, 3) + 1):
        rows.append(_eq(f"cf k={k}", list(sl2.cf_count(A, k).value), oracle.brute("cf", A, k), p))
    lam = int(rng.integers(1, p))
    rows.append(_eq("inverse_diff", sl2.inverse_diff_count(A, A2, lam).value, oracle.brute("inverse_diff", A, A2, lam), p))
    p1, p2 = (int(rng.integers(p)), 1), (int(rng.integers(p)), 0, 1)
    rows.append(_eq("poly_shift", sl2.poly_shift_count(A, B1, p1, p2).value, oracle.brute("poly_shift", A, B1, p1, p2), p))
    rows.append(_eq("gl2_image", sl2.gl2_image(A, B1, B2, B3, escape=False).size, oracle.brute("gl2_image", A, B1, B2, B3), p))
    S = sl2.family("S", (B1, B2))
    f1, f2 = _int_fn(ctx, rng, 3), _int_fn(ctx, rng, 3)
    rows.append(
        _eq("action", sl2.action_count(S, f1, f2, depth=0).value,
            oracle.brute("action", [g.as_tuple() for g in S.elements], f1.values, f2.values, p), p)
    )
    return rows


def _oracle_sums(ctx: FieldCtx, rng: np.random.Generator) -> Rows:
    p = ctx.p
    X, Y, Z = (_sample(ctx, rng, 1, 5) for _ in range(3))
    alpha, beta, gamma = (_unit_weights(rng, len(S)) for S in (X, Y, Z))
    rows = [
        _close("trilinear", expsum.trilinear_sum(X, Y, Z, alpha, beta, gamma).value,
               oracle.brute("trilinear", X, Y, Z, alpha, beta, gamma), p),
    ]
    rho, sigma, tau = (
        _unit_weights(rng, (len(X), len(Y))),
        _unit_weights(rng, (len(X), len(Z))),
        _unit_weights(rng, (len(Y), len(Z))),
    )
    rows.append(
        _close("trilinear_bilinear", expsum.trilinear_bilinear_sum(X, Y, Z, rho, sigma, tau).value,
               oracle.brute("trilinear_bilinear", X, Y, Z, rho, sigma, tau), p)
    )
    extra = [_sample(ctx, rng, 1, 3) for _ in range(int(rng.integers(0, 3)))]
    sets = (X, Y, Z, *extra)
    rows.append(_close(f"multilinear r={len(sets)}", expsum.multilinear_sum(*sets).value, oracle.brute("multilinear", *sets), p))

    f, g = _sparse_fn(ctx, rng, 4), _sparse_fn(ctx, rng, 4)
    B = _sample(ctx, rng, 1, 3)
    chi = mul_char(ctx, 2)
    fv, gv = f.as_float().tolist(), g.as_float().tolist()
    for kind in expsum.SPECIAL_KINDS:
        fast = expsum.special_sums(kind, f, g, B, char=chi, r1=RATIONAL_R1, r2=RATIONAL_R2)
        slow, skipped = oracle.brute("special", kind, fv, gv, B, char=chi, r1=RATIONAL_R1, r2=RATIONAL_R2)
        rows.append(_close(f"special {kind}", fast.value, slow, p))
        rows.append(_eq(f"special {kind} (skipped)", fast.skipped, skipped, p))
    return rows


def oracle_suite(params: SuiteParams) -> Rows:
    rows: Rows = []
    k_top = 3 if params.small else 4
    for p in params.primes((7, 11, 31, 101), (7, 11)):
        ctx, rng = make_field(p), params.rng(p)
        for _ in range(params.count(20, 3)):
            rows.extend(_oracle_counts(ctx, rng, k_top))
            rows.extend(_oracle_sl2(ctx, rng, k_top))
            rows.extend(_oracle_sums(ctx, rng))
    return rows


# -- constant-free inequalities -------------------------------------------------


def _frobenius_rows(p: int, params: SuiteParams) -> Rows:
    ctx, rng = make_field(p), params.rng(p, 1)
    rows: Rows = []
    for _ in range(params.count(1000, 20)):
        F = sl2.random_symmetric_measure(ctx, int(rng.integers(1, 6)), int(rng.integers(2**31)))
        rows.extend(sl2.frobenius_check(F, _mean_zero_fn(ctx, rng), _int_fn(ctx, rng)))
    return rows


def inequalities(params: SuiteParams) -> Rows:
    rows: Rows = []
    p = params.p or 101
    ctx, rng = make_field(p), params.rng(p)
    k_max = 3 if params.small else 4
    for trial in range(params.count(100, 5)):
        A, B = _sample(ctx, rng, 2, 12), _sample(ctx, rng, 2, 12)
        rows.extend(energy.crude_checks(A, B, k_max=k_max))
        P = _sample(ctx, rng, 1, 10, nonzero=True)
        rows.append(energy.change_qg_check(transform.balanced(A), P, 2, suite="inequalities"))
        rows.append(energy.union_norm_check(energy.random_partition(A, 3, rng), B, suite="inequalities"))
        if trial < 5:
            rows.append(energy.small_energy_ratio(A, B, suite="inequalities"))
            rows.extend(energy.dtimes_bound_ratio(A, 2, suite="inequalities"))
            rows.append(energy.n_bound_ratio(A, B, suite="inequalities"))
            rows.append(energy.nprime_bound_ratio(A, suite="inequalities"))
            rows.append(
                energy.weighted_incidence_ratio(
                    _sparse_fn(ctx, rng, 8), _sparse_fn(ctx, rng, 8), B, suite="inequalities",
                )
            )

    for q in params.primes((13, 29), (13,)):
        qctx = make_field(q)
        rows.extend(energy.gamma_suite(quadratic_residues(qctx), energy.legendre_fn(qctx), k_max=3).rows)

    for q in params.primes((5, 7, 11, 13), (5, 7)):
        rows.extend(_frobenius_rows(q, params))
    for q in params.primes((5, 7), (5,)):
        qctx, qrng = make_field(q), params.rng(q, 2)
        for _ in range(params.count(5, 2)):
            rows.extend(sl2.frobenius_check(None, _mean_zero_fn(qctx, qrng), mode="power-iteration"))
    return rows


# -- design bound and incidences --------------------------------------------------


def design(params: SuiteParams) -> Rows:
    rows: Rows = []
    for q in params.primes((2, 3, 5), (2, 3)):
        n = len(incidence.projective_points(q))
        rng = params.rng(q)
        for trial in range(params.count(100, 10)):
            alpha = rng.standard_normal(n)
            alpha -= alpha.mean()
            beta = rng.standard_normal(n)
            rows.extend(incidence.design_bound_check(q, alpha, beta, check_matrix=trial == 0))

    ctx = make_field(31 if params.small else 101)
    rng = params.rng(ctx.p)
    pts = incidence.PointSet3.of(ctx, rng.integers(0, ctx.p, size=(40, 3)).tolist())
    raw = rng.integers(0, ctx.p, size=(80, 4))
    raw[~raw[:, :3].any(axis=1), 0] = 1
    rows.extend(incidence.point_plane_report(pts, incidence.PlaneSet.of(ctx, raw.tolist())))
    A, B = _sample(ctx, rng, 5, 15), _sample(ctx, rng, 5, 15)
    rows.append(incidence.point_line_incidences(A, B, incidence.LineSet.random(ctx, 60, rng)))
    return rows


# -- collinear triples and quadruples desk check ----------------------------------


def tq(params: SuiteParams) -> Rows:
    rows: Rows = []
    p = params.p or (101 if params.small else 1009)
    ctx = make_field(p)
    sizes = (10, 20) if params.small else (100, 150, 200)
    for seed in range(params.count(5, 2)):
        rng = params.rng(p, seed)
        for n in sizes:
            A = SetFp.of(ctx, (int(x) for x in rng.choice(p, size=min(n, p), replace=False)))
            rows.extend(incidence.triples_report(A))
            rows.extend(incidence.quadruples_report(A))
    return rows


# -- SL2 -------------------------------------------------------------------------


def _generating_measure(ctx: FieldCtx, rng: np.random.Generator) -> sl2.GroupFn:
    while True:
        mu = sl2.random_symmetric_measure(ctx, 2, int(rng.integers(2**31)))
        if sl2.is_generating(mu.support(), ctx.p):
            return mu


def flatten(params: SuiteParams) -> Rows:
    rows: Rows = []
    for p in params.primes((5, 7, 11), (5,)):
        ctx, rng = make_field(p), params.rng(p)
        order = sl2.sl2_order(p)
        haar = sl2.flatten_profile(sl2.haar(ctx), 2)
        rows.append(reports.assert_true("flatten", f"Haar e_k = 0, p={p}", all(e == 0 for e in haar), lhs=max(haar), rhs=0))
        point = sl2.flatten_profile(sl2.delta(p), 3)
        rows.append(
            reports.assert_true(
                "flatten", f"delta e_k constant, p={p}", len(set(point)) == 1,
                lhs=point[-1], rhs=1 - Fraction(1, order),
            )
        )

        mu = _generating_measure(ctx, rng)
        k_max = 6 if p == 5 else (3 if params.small else 4)
        profile = sl2.flatten_profile(mu, k_max)
        rows.extend(sl2.flatten_rows(profile, p))
        if p == 5:
            rows.append(
                reports.assert_true(
                    "flatten", "t:flattering (e_6 < 10/|SL2|)", profile[6] < Fraction(10, order),
                    lhs=profile[6], rhs=Fraction(10, order),
                )
            )
        rows.append(sl2.tripling(mu.support()))
    return rows


def escape(params: SuiteParams) -> Rows:
    rows: Rows = []
    for p in params.primes((7, 11, 13), (7,)):
        ctx, rng = make_field(p), params.rng(p)
        B1, B2 = _sample(ctx, rng, 2, 4), _sample(ctx, rng, 2, 4)
        rows.extend(sl2.coset_escape(sl2.family("S", (B1, B2)), seed=params.seed))
        rows.extend(
            sl2.coset_escape(
                sl2.family("Srational", (_sample(ctx, rng, 3, 6),), RATIONAL_R1, RATIONAL_R2), seed=params.seed,
            )
        )
        rows.extend(sl2.coset_escape(sl2.family("Sprime", (_sample(ctx, rng, 3, 6),)), seed=params.seed))
        gl2 = tuple(_sample(ctx, rng, 2, 3) for _ in range(3))
        rows.extend(sl2.coset_escape(sl2.family("GL2fam", gl2), seed=params.seed))

        upper = [sl2.SL2Elem(t, int(rng.integers(1, p)), 0, pow(t, -1, p), p) for t in range(1, p)]
        rows.append(reports.assert_eq("escape", f"Borel detector, p={p}", sl2.borel_detector(upper), p))
        unipotent = [sl2.SL2Elem(1, b, 0, 1, p) for b in range(p)]
        rows.append(reports.assert_true("escape", f"unipotent detector, p={p}", sl2.unipotent_detector(unipotent)))
        if p <= sl2.DENSE_MAX_P:
            dihedral = sl2.dihedral_subgroups(ctx)[1]
            rows.append(
                reports.assert_true(
                    "escape", f"dihedral detector, p={p}",
                    sl2.dihedral_detector([sl2.element(p, *map(int, row)) for row in dihedral]),
                )
            )
    return rows


def cf(params: SuiteParams) -> Rows:
    rows: Rows = []
    p = params.p or (101 if params.small else 1009)
    ctx = make_field(p)
    n, k = (20, 3) if params.small else (200, 6)
    for seed in range(params.count(3, 1)):
        rng = params.rng(p, seed)
        A = SetFp.of(ctx, (int(x) for x in rng.choice(p, size=min(n, p), replace=False)))
        rows.extend(sl2.cf_count(A, k).rows)

        A1, A2 = _sample(ctx, rng, 5, 20), _sample(ctx, rng, 5, 20)
        B = _sample(ctx, rng, 2, 6)
        rows.extend(sl2.inverse_diff_count(A1, A2, 1, B).rows)
        rows.extend(sl2.poly_shift_count(A1, B, (0, 1), (1, 0, 1)).rows)
        B1, B2, B3 = (_sample(ctx, rng, 2, 4) for _ in range(3))
        rows.extend(sl2.gl2_image(A1, B1, B2, B3, escape=p <= sl2.DENSE_MAX_P).rows)
        rows.extend(sl2.action_count(sl2.family("S", (B1, B2)), A1, A2, depth=0 if p > sl2.DENSE_MAX_P else None).rows)
    return rows


# -- multilinear sums -------------------------------------------------------------


def _special_rows(params: SuiteParams) -> Rows:
    p = 7 if params.small else 11
    ctx, rng = make_field(p), params.rng(p, 3)
    f, g = _mean_zero_fn(ctx, rng, 3), _int_fn(ctx, rng, 3)
    B = _sample(ctx, rng, 2, 3)
    depth = sl2.measured_depth(list(sl2.family("S", (B, B)).elements))
    delta = None if depth is None else 1 / 2 ** (depth + 2)
    chi = mul_char(ctx, 2)
    rows = []
    for kind in expsum.SPECIAL_KINDS:
        result = expsum.special_sums(kind, f, g, B, char=chi, r1=RATIONAL_R1, r2=RATIONAL_R2)
        rows.append(expsum.special_sums_report(result, f, g, B, delta))
    return rows


def multilinear(params: SuiteParams) -> Rows:
    rows: Rows = []
    for p in params.primes((7, 101), (7,)):
        ctx = make_field(p)
        full = SetFp.of(ctx, range(p))
        S = expsum.trilinear_sum(full, full, full)
        rows.append(reports.assert_close("multilinear", f"S(F_p,F_p,F_p) = p(2p-1), p={p}", S.value, p * (2 * p - 1)))

    p = params.p or (101 if params.small else 257)
    ctx, rng = make_field(p), params.rng(p)
    side = max(2, math.ceil(p ** 0.4) + 2)
    X, Y, Z = (_sample(ctx, rng, side, side + 4) for _ in range(3))
    terms = len(X) * len(Y) * len(Z)
    delta = expsum.product_delta(X, Y, Z)
    if delta > 0:
        spec = expsum.bound_exponent(delta, 3, "three-set")
        S = expsum.trilinear_sum(X, Y, Z)
        rows.append(
            reports.ratio_row(
                "multilinear", "f:etropy_exp_intr", abs(S.value), terms * p ** (-spec.exponent),
                note=f"delta={delta:.6g} exponent={spec.exponent:.6g}",
            )
        )
        W = _sample(ctx, rng, side, side + 4)
        four = expsum.bound_exponent(expsum.product_delta(X, Y, Z, W), 4, "four-set")
        S4 = expsum.multilinear_sum(X, Y, Z, W)
        rows.append(
            reports.ratio_row(
                "multilinear", "f:etropy_exp_2", abs(S4.value), S4.term_count * p ** (-four.exponent),
                note=f"delta={four.delta:.6g} exponent={four.exponent:.6g}",
            )
        )
        kfree = expsum.bound_exponent(delta, 3, "k-free")
        k = max(kfree.k or 1, 1)
        rows.append(
            reports.ratio_row("multilinear", f"f:multilinear k={k}", abs(S.value), expsum.multilinear_bound(X, Y, Z, k))
        )
    else:
        logger.warning("multilinear: |X||Y||Z|=%d does not exceed p=%d", terms, p)
    rows.extend(expsum.ps_new_ratio(X, Y, Z))
    rows.extend(_special_rows(params))
    return rows


# -- decomposition ------------------------------------------------------------------


def _largest_subgroup(ctx: FieldCtx, limit: int) -> int:
    return max(t for t in range(1, limit + 1) if (ctx.p - 1) % t == 0)


def _decompose_inputs(ctx: FieldCtx, n: int, rng: np.random.Generator) -> Dict[str, SetFp]:
    return {
        "interval": SetFp.of(ctx, range(1, n + 1)),
        "subgroup-coset": coset(ctx, _largest_subgroup(ctx, n), ctx.power(1)),
        "random": SetFp.of(ctx, (int(x) for x in rng.choice(ctx.p, size=n, replace=False))),
    }


def decompose_suite(params: SuiteParams) -> Rows:
    rows: Rows = []
    p = params.p or (211 if params.small else 2003)
    n, M = (20, 2) if params.small else (120, 4)
    ctx, rng = make_field(p), params.rng(p)
    n = min(n, p // (2 * M))
    X = SetFp.of(ctx, (int(x) for x in rng.choice(p, size=n, replace=False)))
    for label, A in _decompose_inputs(ctx, n, rng).items():
        B, C, cert = decompose.bw_decompose(A, M)
        note = f"input={label} |A|={len(A)} |B|={len(B)} |C|={len(C)}"
        rows.append(reports.assert_le("decompose", "t:BW_as (iterations <= |A|)", len(cert.iterations), len(A), note=note))
        rows.extend(decompose.verify_bw(cert, X))
        again, rest, _ = decompose.bw_decompose(B, M, scale=len(A))
        rows.append(
            reports.assert_true("decompose", "t:BW_as (idempotent)", again == B and not len(rest), lhs=len(again), rhs=len(B), note=note)
        )
        rows.append(
            reports.assert_true(
                "decompose", "misha_pigeonhole sandwich", all(it.sandwich for it in cert.iterations),
                lhs=len(cert.iterations), note=note,
            )
        )
    return rows


SUITES: Dict[str, Callable[[SuiteParams], Rows]] = {
    "identities": identities,
    "oracle": oracle_suite,
    "inequalities": inequalities,
    "design": design,
    "tq": tq,
    "flatten": flatten,
    "escape": escape,
    "cf": cf,
    "multilinear": multilinear,
    "decompose": decompose_suite,
}


def suite_names() -> List[str]:
    return [*SUITES, "all"]


def _selected(name: str) -> Iterable[str]:
    if name == "all":
        return list(SUITES)
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; expected one of {', '.join(suite_names())}")
    return [name]


def run_suite(name: str, p: int | None = None, seed: int = 0, small: bool = False) -> reports.Report:
    params = SuiteParams(p=p, seed=seed, small=small)
    report = reports.Report(metadata={"suite": name, "p": p, "seed": seed, "small": small, "prng": PRNG})
    for key in _selected(name):
        logger.info("running suite %s (p=%s seed=%s small=%s)", key, p, seed, small)
        report.extend(SUITES[key](params))
    failed = report.failed
    if failed:
        logger.warning("suite %s: %d ASSERT rows failed", name, len(failed))
    return report
