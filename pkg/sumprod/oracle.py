"""Brute-force reference values, written straight from the set-builder definitions.

Nothing here calls the fast paths. Every function checks the tuple count against
the configured guard before enumerating.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .config import get_config
from .errors import DomainError, check_guard
from .fpcore import SetFp

INF = None


def _guard(name: str, count: int) -> None:
    check_guard(f"oracle {name}", count, get_config().tuple_guard, advice="use a smaller instance")


def _e(x: int, p: int) -> complex:
    return cmath.exp(2j * math.pi * (x % p) / p)


def _inv(x: int, p: int) -> Optional[int]:
    x %= p
    return pow(x, -1, p) if x else None


def _collisions(values) -> int:
    return sum(c * c for c in Counter(values).values())


# -- energies ---------------------------------------------------------------------


def additive_energy(A: SetFp, B: SetFp | None = None) -> int:
    B = A if B is None else B
    p = A.p
    _guard("E+", (len(A) * len(B)) ** 2)
    return sum(
        1
        for a1, b1, a2, b2 in product(A, B, A, B)
        if (a1 + b1 - a2 - b2) % p == 0
    )


def multiplicative_energy(A: SetFp, B: SetFp | None = None) -> int:
    B = A if B is None else B
    p = A.p
    _guard("Ex", (len(A) * len(B)) ** 2)
    return sum(1 for a1, b1, a2, b2 in product(A, B, A, B) if (a1 * b1 - a2 * b2) % p == 0)


def energy_k(A: SetFp, k: int) -> int:
    """#{a1 - a1' = ... = ak - ak'}."""
    p = A.p
    _guard("E+_k", len(A) ** (2 * k))
    total = 0
    for tup in product(A, repeat=2 * k):
        diffs = {(tup[2 * i] - tup[2 * i + 1]) % p for i in range(k)}
        total += len(diffs) == 1
    return total


def tk(A: SetFp, k: int) -> int:
    """#{a1 + ... + ak = a1' + ... + ak'}."""
    p = A.p
    _guard("T+_k", len(A) ** (2 * k))
    return sum(1 for tup in product(A, repeat=2 * k) if (sum(tup[:k]) - sum(tup[k:])) % p == 0)


def dtimes_k(A: SetFp, k: int) -> int:
    """#{(a1-a1')...(ak-ak') = (b1-b1')...(bk-bk')}, zero products included."""
    p = A.p
    _guard("Dx_k", len(A) ** (2 * k))
    products = []
    for tup in product(A, repeat=2 * k):
        value = 1
        for i in range(k):
            value = value * (tup[2 * i] - tup[2 * i + 1]) % p
        products.append(value)
    return _collisions(products)


def dprime_k(A: SetFp, k: int) -> int:
    """#{a1 b1 + ... + ak bk = a1' b1' + ... + ak' bk'}."""
    p = A.p
    _guard("D'_k", len(A) ** (2 * k))
    return _collisions(
        sum(tup[2 * i] * tup[2 * i + 1] for i in range(k)) % p for tup in product(A, repeat=2 * k)
    )


def n_quantity(A: SetFp, B: SetFp | None = None, C: SetFp | None = None) -> int:
    B = A if B is None else B
    C = A if C is None else C
    p = A.p
    _guard("N", len(A) * len(B) * len(C))
    return _collisions(a * (b - c) % p for a, b, c in product(A, B, C))


def nprime(A: SetFp) -> int:
    p = A.p
    _guard("N'", len(A) ** 3)
    return _collisions((a1 * a2 + a3) % p for a1, a2, a3 in product(A, repeat=3))


def sigma_p(A: SetFp, P: SetFp) -> int:
    p = A.p
    members = set(P)
    return sum(1 for a, b in product(A, A) if (a - b) % p in members)


def rep(kind: str, A: SetFp, B: SetFp, x: int) -> int:
    p = A.p
    ops: Dict[str, Callable[[int, int], Optional[int]]] = {
        "A+B": lambda a, b: (a + b) % p,
        "A-B": lambda a, b: (a - b) % p,
        "A*B": lambda a, b: a * b % p,
        "A/B": lambda a, b: a * _inv(b, p) % p if b % p else None,
    }
    if kind not in ops:
        raise DomainError(f"unknown representation {kind!r}")
    return sum(1 for a, b in product(A, B) if ops[kind](a, b) == x % p)


# -- collinearity and incidences -----------------------------------------------------


def _det3(P1, P2, P3, p: int) -> int:
    (x1, y1), (x2, y2), (x3, y3) = P1, P2, P3
    return (x1 * (y2 - y3) - y1 * (x2 - x3) + (x2 * y3 - x3 * y2)) % p


def collinear_triples(A: SetFp) -> int:
    p = A.p
    points = list(product(A, A))
    _guard("T", len(points) ** 3)
    return sum(1 for P1, P2, P3 in product(points, repeat=3) if _det3(P1, P2, P3, p) == 0)


def collinear_quadruples(A: SetFp, B: SetFp | None = None, C: SetFp | None = None, D: SetFp | None = None) -> int:
    B = A if B is None else B
    C = A if C is None else C
    D = A if D is None else D
    p = A.p
    grids = [list(product(S, S)) for S in (A, B, C, D)]
    _guard("Q", math.prod(len(g) for g in grids))
    total = 0
    for P1, P2, P3, P4 in product(*grids):
        if all(_det3(X, Y, Z, p) == 0 for X, Y, Z in ((P1, P2, P3), (P1, P2, P4), (P1, P3, P4), (P2, P3, P4))):
            total += 1
    return total


def point_plane(points: Sequence[Tuple[int, int, int]], planes: Sequence[Tuple[int, int, int, int]], p: int) -> int:
    _guard("point_plane", len(points) * len(planes))
    return sum(
        1
        for (x, y, z), (u, v, w, c) in product(points, planes)
        if (u * x + v * y + w * z - c) % p == 0
    )


def point_line(A: SetFp, B: SetFp, lines: Sequence[Tuple[int, int]]) -> int:
    """Lines are (m, c) meaning y = m x + c, with m = p for x = c."""
    p = A.p
    _guard("point_line", len(A) * len(B) * len(lines))
    total = 0
    for a, b in product(A, B):
        for m, c in lines:
            if m == p:
                total += a == c
            else:
                total += (b - m * a - c) % p == 0
    return total


# -- exponential sums -----------------------------------------------------------------


def trilinear(X: SetFp, Y: SetFp, Z: SetFp, alpha=None, beta=None, gamma=None) -> complex:
    p = X.p
    _guard("trilinear", len(X) * len(Y) * len(Z))
    total = 0j
    for i, x in enumerate(X):
        for j, y in enumerate(Y):
            for k, z in enumerate(Z):
                w = (alpha[i] if alpha is not None else 1) * (beta[j] if beta is not None else 1)
                w *= gamma[k] if gamma is not None else 1
                total += w * _e(x * y * z, p)
    return total


def trilinear_bilinear(X: SetFp, Y: SetFp, Z: SetFp, rho=None, sigma=None, tau=None) -> complex:
    p = X.p
    _guard("trilinear_bilinear", len(X) * len(Y) * len(Z))
    total = 0j
    for k, z in reversed(list(enumerate(Z))):
        for j, y in reversed(list(enumerate(Y))):
            for i, x in reversed(list(enumerate(X))):
                w = (rho[i][j] if rho is not None else 1) * (sigma[i][k] if sigma is not None else 1)
                w *= tau[j][k] if tau is not None else 1
                total += w * _e(x * y * z, p)
    return total


def multilinear(*sets: SetFp) -> complex:
    p = sets[0].p
    _guard("multilinear", math.prod(len(s) for s in sets))
    return sum((_e(math.prod(t), p) for t in product(*sets)), 0j)


def _eval(coeffs: Sequence[int], x: int, p: int) -> int:
    return sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p


def special(kind: str, f: Sequence, g: Sequence, B: SetFp, char=None, r1=None, r2=None) -> Tuple[complex, int]:
    """Literal sums over x, y and B; f, g are value lists of length p. Returns (value, skipped)."""
    p = B.p
    inner = len(B) ** 2 if kind.startswith("inv") else len(B)
    _guard("special", p * p * inner)
    total = 0j
    skipped = 0
    for x in range(p):
        if not f[x]:
            continue
        if kind.startswith("inv"):
            args = []
            for b1 in B:
                u = _inv(x + b1, p)
                if u is None:
                    skipped += 1
                    continue
                args.extend((u, b2) for b2 in B)
        else:
            (p1, q1), (p2, q2) = r1, r2
            args = []
            for b in B:
                a1, c1 = _eval(p1, b, p), _eval(q1, b, p)
                a2, c2 = _eval(p2, b, p), _eval(q2, b, p)
                # x -> (x + r1) / (1 + r2 (x + r1)) with r_i = a_i / c_i, denominators cleared
                num = (c1 * c2 * x + a1 * c2) % p
                den = (a2 * c1 * x + c1 * c2 + a1 * a2) % p
                if den == 0:
                    skipped += 1
                    continue
                args.append((num * _inv(den, p) % p, 0))
        for y in range(p):
            if not g[y]:
                continue
            for u, shift in args:
                if kind.endswith("-e"):
                    total += f[x] * g[y] * _e(y * (u + shift), p)
                else:
                    total += f[x] * g[y] * char(y + u + shift)
    return total, skipped


# -- SL2 ----------------------------------------------------------------------------


def _act(m: Tuple[int, int, int, int], z, p: int):
    a, b, c, d = m
    if z is INF:
        return a * _inv(c, p) % p if c % p else INF
    den = (c * z + d) % p
    if den == 0:
        return INF
    return (a * z + b) * _inv(den, p) % p


def _mul(g, h, p: int):
    a, b, c, d = g
    e, f, k, l = h
    return ((a * e + b * k) % p, (a * f + b * l) % p, (c * e + d * k) % p, (c * f + d * l) % p)


def cf_counts(A: SetFp, k: int) -> List[int]:
    """Counts of [a1, ..., ak] = 1/(a1 + 1/(a2 + ... + 1/ak)) over P^1; index p is infinity."""
    p = A.p
    _guard("cf", len(A) ** k)
    counts: Counter = Counter()
    for tup in product(A, repeat=k):
        z = 0
        for a in reversed(tup):
            if z is INF:
                z = 0
                continue
            s = (a + z) % p
            z = INF if s == 0 else _inv(s, p)
        counts[p if z is INF else z] += 1
    return [counts[x] for x in range(p + 1)]


def flatten(weights: Dict[Tuple[int, int, int, int], Fraction], p: int, k_max: int) -> List[Fraction]:
    """||mu^(2^k)||^2 - 1/|SL2| by repeated dense squaring."""
    order = p**3 - p
    _guard("flatten", order * order)
    mu = dict(weights)
    out = []
    for k in range(k_max + 1):
        out.append(sum((w * w for w in mu.values()), Fraction(0)) - Fraction(1, order))
        if k == k_max:
            break
        nxt: Dict = {}
        for g, wg in mu.items():
            for h, wh in mu.items():
                key = _mul(g, h, p)
                nxt[key] = nxt.get(key, Fraction(0)) + wg * wh
        mu = {g: w for g, w in nxt.items() if w}
    return out


def tripling(elems: Sequence[Tuple[int, int, int, int]], p: int) -> int:
    _guard("tripling", len(elems) ** 3)
    return len({_mul(_mul(a, b, p), c, p) for a, b, c in product(elems, repeat=3)})


def action_count(elems: Sequence[Tuple[int, int, int, int]], f1: Sequence, f2: Sequence, p: int) -> Fraction:
    _guard("action", len(elems) * p)
    total = Fraction(0)
    for s in elems:
        for a in range(p):
            image = _act(s, a, p)
            if image is not INF:
                total += Fraction(f1[a]) * Fraction(f2[image])
    return total


def inverse_diff(A1: SetFp, A2: SetFp, lam: int) -> int:
    p = A1.p
    _guard("inverse_diff", len(A1) * len(A2))
    return sum(
        1
        for a1, a2 in product(A1, A2)
        if a1 % p and a2 % p and (_inv(a1, p) - _inv(a2, p) - lam) % p == 0
    )


def poly_shift(A: SetFp, B: SetFp, p1: Sequence[int], p2: Sequence[int]) -> Tuple[int, int]:
    p = A.p
    _guard("poly_shift", (len(A) * len(B)) ** 2)
    values = []
    for a, b in product(A, B):
        den = (a + _eval(p2, b, p)) % p
        if den:
            values.append((_eval(p1, b, p) + _inv(den, p)) % p)
    collisions = sum(1 for v, w in product(values, values) if v == w)
    return collisions, len(set(values))


def gl2_image(A: SetFp, B1: SetFp, B2: SetFp, B3: SetFp) -> int:
    p = A.p
    _guard("gl2_image", len(A) * len(B1) * len(B2) * len(B3))
    image = set()
    for a, b1, b2, b3 in product(A, B1, B2, B3):
        if (b3 - b1 * b2) % p == 0:
            continue
        num, den = (a + b1) % p, (a * b2 + b3) % p
        if num == 0 and den == 0:
            continue
        image.add(INF if den == 0 else num * _inv(den, p) % p)
    return len(image)


QUANTITIES: Dict[str, Callable] = {
    "E+": additive_energy,
    "Ex": multiplicative_energy,
    "E+_k": energy_k,
    "T+_k": tk,
    "Dx_k": dtimes_k,
    "D'_k": dprime_k,
    "N": n_quantity,
    "N'": nprime,
    "sigma_P": sigma_p,
    "rep": rep,
    "T": collinear_triples,
    "Q": collinear_quadruples,
    "point_plane": point_plane,
    "point_line": point_line,
    "trilinear": trilinear,
    "trilinear_bilinear": trilinear_bilinear,
    "multilinear": multilinear,
    "special": special,
    "cf": cf_counts,
    "flatten": flatten,
    "tripling": tripling,
    "action": action_count,
    "inverse_diff": inverse_diff,
    "poly_shift": poly_shift,
    "gl2_image": gl2_image,
}


def brute(name: str, *args, **kwargs):
    if name not in QUANTITIES:
        raise DomainError(f"no oracle for {name!r}; known: {', '.join(sorted(QUANTITIES))}")
    return QUANTITIES[name](*args, **kwargs)
