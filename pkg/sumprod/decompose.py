"""Splitting a set into an additively unstructured part and a multiplicatively small part.

Every step is exact: energies are rationals and fractional powers are compared
after raising both sides to an integer power.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from . import reports
from .energy import energy, rep_fn
from .errors import DomainError
from .fpcore import SetFp, productset, sumset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Pigeonhole:
    A_star: SetFp
    q: int
    levels: int
    sigma: int

    @property
    def sandwich(self) -> bool:
        """|A_*| q <= sigma_P(A) <= 2 L |A_*| q."""
        low = len(self.A_star) * self.q
        return low <= self.sigma <= 2 * self.levels * low


@dataclass(frozen=True)
class Iteration:
    b_size: int
    energy: Fraction
    delta: Fraction
    p_size: int
    extracted: int
    q: int
    sandwich: bool = True


@dataclass
class DecompCert:
    A: SetFp
    M: Fraction
    scale: int
    B: SetFp
    C: SetFp
    iterations: List[Iteration] = field(default_factory=list)

    @property
    def parts_ok(self) -> bool:
        """B and C are disjoint and cover A."""
        return not set(self.B.elems) & set(self.C.elems) and self.B.union(self.C) == self.A


def _dyadic_level(v: Fraction) -> int:
    """j with 2^j < v <= 2^(j+1), for v > 0."""
    j = v.numerator.bit_length() - v.denominator.bit_length()
    while Fraction(2) ** j >= v:
        j -= 1
    while Fraction(2) ** (j + 1) < v:
        j += 1
    return j


def misha_pigeonhole(A: SetFp, P: SetFp) -> Pigeonhole:
    """Dyadic class of x -> r_{A+P}(x) on A with the largest contribution.

    Classes are 2^j <= r < 2^(j+1); q is the lower edge. Ties go to the larger q.
    """
    if A.p != P.p:
        raise DomainError("A and P live over different fields")
    if not P.is_symmetric():
        raise DomainError("P must satisfy P = -P")
    r = rep_fn("A+B", A, P)
    classes: Dict[int, List[int]] = {}
    totals: Dict[int, int] = {}
    for x in A:
        value = r.values[x]
        if value <= 0:
            continue
        j = value.bit_length() - 1
        classes.setdefault(j, []).append(x)
        totals[j] = totals.get(j, 0) + value
    sigma = sum(totals.values())
    if not classes:
        return Pigeonhole(A_star=SetFp.of(A.field, ()), q=0, levels=0, sigma=0)
    best = max(classes, key=lambda j: (totals[j], j))
    return Pigeonhole(A_star=SetFp.of(A.field, classes[best]), q=2**best, levels=len(classes), sigma=sigma)


def _threshold_met(e: Fraction, M: Fraction, scale: int, b: int) -> bool:
    """E+(f_B, B) <= scale^(2/3) |B|^(7/3) / M, compared as cubes."""
    if e <= 0:
        return True
    return (e * M) ** 3 <= scale**2 * b**7


def _check_m(A: SetFp, M: Fraction) -> None:
    if M < 1 or (len(A) and M > Fraction(A.p, 2 * len(A))):
        raise DomainError(f"M={M} outside 1 <= M <= p/(2|A|) = {A.p}/{2 * len(A)}")


def bw_decompose(A: SetFp, M, scale: int | None = None) -> Tuple[SetFp, SetFp, DecompCert]:
    """A = B + C with E+(B) - |B|^4/p <= |A|^(2/3) |B|^(7/3) / M.

    ``scale`` replaces |A| in the threshold, so a second run on B with the
    original |A| leaves B untouched.
    """
    M = Fraction(M)
    _check_m(A, M)
    scale = len(A) if scale is None else scale
    p = A.p
    B = A
    C = SetFp.of(A.field, ())
    cert = DecompCert(A=A, M=M, scale=scale, B=B, C=C)

    while len(B):
        b = len(B)
        e = energy("+", B) - Fraction(b**4, p)
        if _threshold_met(e, M, scale, b):
            break

        r = rep_fn("A-B", B, B)
        shift = Fraction(b * b, p)
        levels: Dict[int, List[int]] = {}
        weight: Dict[int, Fraction] = {}
        for x, count in enumerate(r.values):
            if count <= 0:
                continue
            v = abs(count - shift)
            if v == 0:
                continue
            j = _dyadic_level(v)
            levels.setdefault(j, []).append(x)
            weight[j] = weight.get(j, Fraction(0)) + v * v
        best = max(levels, key=lambda j: (weight[j], j))
        P = SetFp.of(A.field, levels[best])
        found = misha_pigeonhole(B, P)
        if not len(found.A_star):
            raise DomainError("pigeonhole returned an empty class")
        cert.iterations.append(
            Iteration(
                b_size=b, energy=e, delta=Fraction(2) ** best, p_size=len(P),
                extracted=len(found.A_star), q=found.q, sandwich=found.sandwich,
            )
        )
        logger.debug(
            "bw_decompose: |B|=%d E=%s delta=2^%d |P|=%d moved %d (q=%d)",
            b, e, best, len(P), len(found.A_star), found.q,
        )
        B = B.difference(found.A_star)
        C = C.union(found.A_star)

    cert.B, cert.C = B, C
    return B, C, cert


def side_conditions(cert: DecompCert, X: SetFp) -> Dict[str, bool]:
    """Conditions under which the discarded incidence term is negligible."""
    M, a, x = cert.M, len(cert.A), len(X)
    window = M**3 <= x and x * M**3 <= a * a
    large_b = all(it.b_size**2 * M**3 >= a * a and it.b_size**3 >= it.energy for it in cert.iterations)
    return {"tmp:22.12_1": bool(window), "tmp:22.12_2": bool(large_b)}


def _plus_branch(sum_size: int, a: int, p: int) -> bool:
    """|A+A| >= min(|A|^(6/5), p/2) / 5."""
    return (5 * sum_size) ** 5 >= a**6 or 10 * sum_size >= p


def verify_bw(cert: DecompCert, X: SetFp, suite: str = "decompose") -> List[reports.BoundReport]:
    A, B, C, M = cert.A, cert.B, cert.C, cert.M
    p, a, b = A.p, len(A), len(B)
    rows = []

    e = energy("+", B) - Fraction(b**4, p)
    rhs = cert.scale ** (2 / 3) * b ** (7 / 3) / float(M)
    rows.append(
        reports.assert_true(
            suite, "f:BW_as_1", _threshold_met(e, M, cert.scale, b), lhs=e, rhs=rhs,
            note=f"|B|={b} iterations={len(cert.iterations)}",
        )
    )
    rows.append(reports.assert_true(suite, "t:BW_as (partition)", cert.parts_ok, lhs=len(B) + len(C), rhs=a))

    flags = side_conditions(cert, X)
    failed = [name for name, ok in flags.items() if not ok]
    if failed:
        logger.warning("verify_bw: side conditions %s fail; the E x (C, X) bound is not promised", ", ".join(failed))
    rhs_c = float(M) ** 2 * len(X) ** 2 * a * a / p + float(M) ** 1.5 * a * len(X) ** 1.5
    side_note = " ".join(f"{name}={'ok' if ok else 'fails'}" for name, ok in flags.items())
    if len(C):
        rows.append(reports.ratio_row(suite, "f:BW_as_2", energy("x", C, X), rhs_c, note=side_note))
    else:
        rows.append(reports.assert_le(suite, "f:BW_as_2", 0, rhs_c, note="C is empty"))

    plus = len(sumset(A, A))
    if _plus_branch(plus, a, p):
        rows.append(
            reports.assert_true(suite, "c:p_sum-prod (|A+A|)", True, lhs=plus, rhs=min(a ** 1.2, p / 2) / 5)
        )
    else:
        times = len(productset(A, A))
        rows.append(
            reports.ratio_row(
                suite, "c:p_sum-prod (|AA|)", times, min(p * a ** -0.4, a ** 1.2),
                note=f"|A+A|={plus} below the additive branch",
            )
        )
    return rows
