"""Local solubility: Hilbert symbols, diagonal conics, and bounded p-adic search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence, Union

from .double_equation import DoubleEquation
from .exact_math import factor_integer, lcm_of_denominators, primitive_integer_vector, squarefree_part, to_rat

INFINITY = "inf"
Place = Union[int, str]

DEFAULT_PRECISION = 6
# primitive residues examined before giving up with "unknown"
SEARCH_BUDGET = 200_000


def _is_infinite(place) -> bool:
    return place == INFINITY or place is None or (isinstance(place, float) and math.isinf(place))


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _square_class_int(q: Fraction) -> int:
    # n/d and n*d differ by the square d^2
    return q.numerator * q.denominator


def hilbert_symbol(a, b, place: Place) -> int:
    """Hilbert symbol (a, b)_v for nonzero rationals at a prime or at infinity.

    It is +1 exactly when z² = a x² + b y² has a nonzero solution over Q_v.
    """
    a, b = to_rat(a), to_rat(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if _is_infinite(place):
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    A, B = _square_class_int(a), _square_class_int(b)
    alpha, beta = _valuation(A, p), _valuation(B, p)
    u, v = A // p**alpha, B // p**beta
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * _legendre(u, p) ** beta * _legendre(v, p) ** alpha


def relevant_places(*values) -> list[Place]:
    """Infinity plus every prime dividing 2 and the given nonzero rationals."""
    primes = {2}
    for q in values:
        q = to_rat(q)
        for n in (q.numerator, q.denominator):
            if abs(n) > 1:
                primes.update(factor_integer(n))
    return [INFINITY] + sorted(primes)


@dataclass(frozen=True)
class DiagConic:
    """a X² + b Y² + c Z² = 0 with nonzero integer coefficients."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            val = getattr(self, name)
            if isinstance(val, bool) or int(val) != val or val == 0:
                raise ValueError(f"coefficient {name}={val!r} must be a nonzero integer")
            object.__setattr__(self, name, int(val))

    def __call__(self, X, Y, Z):
        return self.a * X * X + self.b * Y * Y + self.c * Z * Z

    def normalized(self) -> tuple["DiagConic", tuple[Fraction, Fraction, Fraction]]:
        """Squarefree, pairwise coprime form plus the coordinate multipliers.

        A solution ``(X, Y, Z)`` of the normalized form gives
        ``(m0 X, m1 Y, m2 Z)`` on the original one.
        """
        coef = [self.a, self.b, self.c]
        mult = [Fraction(1)] * 3
        for i in range(3):
            sf = squarefree_part(coef[i])
            s = math.isqrt(coef[i] // sf)
            coef[i] = sf
            mult[i] /= s
        changed = True
        while changed:
            changed = False
            g = math.gcd(*coef)
            if g > 1:
                coef = [c // g for c in coef]
            for i, j in ((0, 1), (0, 2), (1, 2)):
                g = math.gcd(coef[i], coef[j])
                if g > 1:
                    k = 3 - i - j
                    coef[i] //= g
                    coef[j] //= g
                    coef[k] *= g
                    mult[i] /= g
                    mult[j] /= g
                    changed = True
        return DiagConic(*coef), tuple(mult)


@dataclass(frozen=True)
class ConicResult:
    soluble: bool
    witness: tuple[int, int, int] | None
    obstructions: tuple[Place, ...]
    normalized: DiagConic


def _search(C: DiagConic, xmax: int, ymax: int, nonzero: bool) -> tuple[int, int, int] | None:
    # nonnegative (x, y) in order of height max(x, y)
    for h in range(0, max(xmax, ymax) + 1):
        for x in range(0, min(h, xmax) + 1):
            for y in ([h] if x < h else range(0, min(h, ymax) + 1)):
                if y > ymax:
                    continue
                num = -(C.a * x * x + C.b * y * y)
                if num % C.c:
                    continue
                zz = num // C.c
                if zz < 0:
                    continue
                z = math.isqrt(zz)
                if z * z != zz or (x, y, z) == (0, 0, 0):
                    continue
                if nonzero and 0 in (x, y, z):
                    continue
                return x, y, z
    return None


PREFERRED_HEIGHT = 64


def conic_soluble(C: DiagConic) -> ConicResult:
    """Decide rational solubility of a diagonal conic.

    Insoluble forms come back with every place where the Hilbert symbol
    (-ac, -bc) is -1.  Soluble ones carry a primitive integer witness on
    the original form, preferring one with no zero coordinate.
    """
    N, mult = C.normalized()
    A, B = -N.a * N.c, -N.b * N.c
    bad = tuple(v for v in relevant_places(N.a, N.b, N.c) if hilbert_symbol(A, B, v) == -1)
    if bad:
        return ConicResult(False, None, bad, N)
    # Holzer: a solution exists with |x| <= sqrt|bc|, |y| <= sqrt|ac|
    hx, hy = math.isqrt(abs(N.b * N.c)), math.isqrt(abs(N.a * N.c))
    found = _search(N, max(hx, PREFERRED_HEIGHT), max(hy, PREFERRED_HEIGHT), nonzero=True)
    if found is None:
        found = _search(N, hx, hy, nonzero=False)
    if found is None:  # pragma: no cover - would contradict Hasse-Minkowski
        raise ArithmeticError(f"no witness found for locally soluble {C}")
    W = primitive_integer_vector([m * f for m, f in zip(mult, found)])
    W = tuple(abs(w) for w in W)
    assert C(*W) == 0
    return ConicResult(True, W, (), N)


# --------------------------------------------------------------------------
# double equations over Z_p


def integral_model(de: DoubleEquation) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """Clear denominators of each equation by a square factor (u -> d u)."""
    rows = []
    for row in (de.row1, de.row2):
        d = lcm_of_denominators(row)
        rows.append(tuple(int(c * d * d) for c in row))
    return rows[0], rows[1]


def _residuals(r1, r2, w):
    X, U, V, Z = w
    f1 = r1[0] * X * X + r1[1] * X * Z + r1[2] * Z * Z - U * U
    f2 = r2[0] * X * X + r2[1] * X * Z + r2[2] * Z * Z - V * V
    return f1, f2


def _minors(r1, r2, w):
    X, U, V, Z = w
    g1 = (2 * r1[0] * X + r1[1] * Z, -2 * U, 0, r1[1] * X + 2 * r1[2] * Z)
    g2 = (2 * r2[0] * X + r2[1] * Z, 0, -2 * V, r2[1] * X + 2 * r2[2] * Z)
    return [g1[i] * g2[j] - g1[j] * g2[i] for i in range(4) for j in range(i + 1, 4)]


def _hensel_liftable(r1, r2, w, p: int, level: int) -> bool:
    # a 2x2 Jacobian minor of valuation e with F = 0 mod p^(2e+1) lifts to Z_p
    for m in _minors(r1, r2, w):
        if m % p**level == 0:
            continue
        e = _valuation(m, p)
        if 2 * e + 1 <= level:
            return True
    return False


def padic_insoluble_system(de: DoubleEquation, prime: int, precision: int = DEFAULT_PRECISION) -> str:
    """One-sided local certificate: ``"insoluble"`` or ``"unknown"``.

    Walks primitive projective solutions modulo p, p², ..., p^k (points at
    infinity included).  If the tree dies out, no Q_p point exists.  If
    some residue passes the Hensel test, a Q_p point exists and the answer
    is ``"unknown"``; so it is when the depth or the search budget runs out.
    """
    if precision < 1:
        raise ValueError("precision must be at least 1")
    p = prime
    r1, r2 = integral_model(de)
    # primitive representatives, normalized so the first unit coordinate is 1
    level = 1
    frontier = []
    for lead in range(4):
        for rest in product(range(p), repeat=3 - lead):
            w = (0,) * lead + (1,) + rest
            f1, f2 = _residuals(r1, r2, w)
            if f1 % p == 0 and f2 % p == 0:
                frontier.append((lead, w))
    budget = SEARCH_BUDGET
    while True:
        if not frontier:
            return "insoluble"
        if any(_hensel_liftable(r1, r2, w, p, level) for _, w in frontier):
            return "unknown"
        if level >= precision:
            return "unknown"
        mod = p ** (level + 1)
        step = p**level
        nxt = []
        for lead, w in frontier:
            free = [i for i in range(4) if i != lead]
            for delta in product(range(p), repeat=3):
                cand = list(w)
                for i, d in zip(free, delta):
                    cand[i] += d * step
                f1, f2 = _residuals(r1, r2, cand)
                if f1 % mod == 0 and f2 % mod == 0:
                    nxt.append((lead, tuple(cand)))
            budget -= p**3
            if budget < 0:
                return "unknown"
        frontier = nxt
        level += 1


def local_obstructions(de: DoubleEquation, primes: Sequence[int], precision: int = DEFAULT_PRECISION) -> list[int]:
    """The primes among ``primes`` where the system is certified insoluble."""
    return [p for p in primes if padic_insoluble_system(de, p, precision) == "insoluble"]


def candidate_bad_primes(de: DoubleEquation, limit: int = 50) -> list[int]:
    """2 plus the primes below ``limit`` where the model has bad reduction."""
    from .double_equation import has_good_reduction

    primes = [q for q in range(2, limit) if all(q % r for r in range(2, math.isqrt(q) + 1))]
    return [q for q in primes if q == 2 or not has_good_reduction(de, q)]

