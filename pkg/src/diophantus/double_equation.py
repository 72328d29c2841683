"""Double equations ``a1 x^2 + b1 x + c1 = u^2``, ``a2 x^2 + b2 x + c2 = v^2``.

The curve lives in P^3 with coordinates ``(X:U:V:Z)`` and ``x = X/Z``.
Everything here is exact; points are stored projectively as coprime
integer 4-tuples so that points at infinity need no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .exact_math import (
    ModPoly,
    UniPoly,
    factor_difference,
    is_squarefree,
    poly_gcd,
    primitive_integer_vector,
    rational_sqrt,
    squarefree_mod_p,
    to_rat,
)


class MethodInapplicable(Exception):
    """The factor-and-split method cannot produce a point for this input."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class PointAtInfinity(MethodInapplicable):
    """The equation for x lost its linear term; the new point lies at infinity."""

    def __init__(self, detail: str = ""):
        super().__init__("point at infinity", detail)


class DegenerateSecant(ValueError):
    pass


class BadReduction(ValueError):
    pass


@dataclass(frozen=True)
class DoubleEquation:
    a1: Fraction
    b1: Fraction
    c1: Fraction
    a2: Fraction
    b2: Fraction
    c2: Fraction

    def __post_init__(self):
        for name in ("a1", "b1", "c1", "a2", "b2", "c2"):
            object.__setattr__(self, name, to_rat(getattr(self, name)))
        p1, p2 = self.p1, self.p2
        if p1.is_zero() or p2.is_zero():
            raise ValueError("both quadratics must be nonzero")
        # p1/p2 constant <=> the 2x3 coefficient matrix has rank 1
        r1, r2 = self.row1, self.row2
        if all(r1[i] * r2[j] == r1[j] * r2[i] for i in range(3) for j in range(i + 1, 3)):
            raise ValueError("the two quadratics are proportional; the curve is reducible")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "DoubleEquation":
        if len(coeffs) != 6:
            raise ValueError("six coefficients a1,b1,c1,a2,b2,c2 expected")
        return cls(*coeffs)

    @property
    def row1(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a1, self.b1, self.c1)

    @property
    def row2(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a2, self.b2, self.c2)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self.row1 + self.row2

    @property
    def p1(self) -> UniPoly:
        return UniPoly.quadratic(self.a1, self.b1, self.c1)

    @property
    def p2(self) -> UniPoly:
        return UniPoly.quadratic(self.a2, self.b2, self.c2)

    def residuals(self, pt: "CurvePoint") -> tuple[int, int]:
        """Homogeneous residuals ``P_i(X,Z) - U^2`` and ``P_i(X,Z) - V^2``.

        Evaluated on the integer representative, so both vanish exactly on
        the curve.
        """
        X, U, V, Z = pt.coords
        f1 = self.a1 * X * X + self.b1 * X * Z + self.c1 * Z * Z - U * U
        f2 = self.a2 * X * X + self.b2 * X * Z + self.c2 * Z * Z - V * V
        return f1, f2

    def contains(self, pt: "CurvePoint") -> bool:
        return self.residuals(pt) == (0, 0)


@dataclass(frozen=True)
class CurvePoint:
    """Projective point ``(X:U:V:Z)``, coprime integers, first nonzero positive."""

    coords: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.coords) != 4:
            raise ValueError("four projective coordinates expected")
        object.__setattr__(self, "coords", primitive_integer_vector(self.coords))

    @classmethod
    def affine(cls, x, u, v) -> "CurvePoint":
        return cls((to_rat(x), to_rat(u), to_rat(v), Fraction(1)))

    @classmethod
    def projective(cls, X, U, V, Z) -> "CurvePoint":
        return cls(tuple(to_rat(c) for c in (X, U, V, Z)))

    @property
    def at_infinity(self) -> bool:
        return self.coords[3] == 0

    def _affine(self, i: int) -> Fraction:
        if self.at_infinity:
            raise ValueError(f"{self} is at infinity and has no affine coordinates")
        return Fraction(self.coords[i], self.coords[3])

    @property
    def x(self) -> Fraction:
        return self._affine(0)

    @property
    def u(self) -> Fraction:
        return self._affine(1)

    @property
    def v(self) -> Fraction:
        return self._affine(2)

    def as_affine(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.x, self.u, self.v

    def flip_u(self) -> "CurvePoint":
        X, U, V, Z = self.coords
        return CurvePoint((X, -U, V, Z))

    def flip_v(self) -> "CurvePoint":
        X, U, V, Z = self.coords
        return CurvePoint((X, U, -V, Z))

    def height(self) -> int:
        """Largest |numerator| among the affine coordinates (projective max if at infinity)."""
        if self.at_infinity:
            return max(abs(c) for c in self.coords)
        return max(abs(c.numerator) for c in self.as_affine())

    def __str__(self):
        if self.at_infinity:
            return "(" + ":".join(map(str, self.coords)) + ")"
        return "(" + ", ".join(str(c) for c in self.as_affine()) + ")"


@dataclass(frozen=True)
class FactorPair:
    """Linear factors of the difference quadric and the pencil parameter."""

    f1: UniPoly
    f2: UniPoly
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("pencil parameter must be nonzero")


@dataclass(frozen=True)
class DoubleEqClass:
    heath_case: str
    genus: int
    smooth: bool
    reducible: bool
    first_order: bool
    alpha1: Fraction | None
    alpha2: Fraction | None
    difference_factors: tuple[UniPoly, UniPoly] | None = field(default=None, compare=False)

    @property
    def has_points_at_infinity(self) -> bool:
        return self.alpha1 is not None and self.alpha2 is not None


def is_smooth(de: DoubleEquation) -> bool:
    """p1*p2 of degree 3 or 4 without repeated roots."""
    prod = de.p1 * de.p2
    return prod.degree in (3, 4) and is_squarefree(prod)


def is_reducible(de: DoubleEquation) -> bool:
    # proportional quadratics are rejected on construction
    for p in (de.p1, de.p2):
        if p.degree < 1 or not is_squarefree(p):
            return True
    return False


def classify(de: DoubleEquation) -> DoubleEqClass:
    alpha1 = rational_sqrt(de.a1)
    alpha2 = rational_sqrt(de.a2)
    if de.a1 == de.a2 and de.a1 != 0 and alpha1 is not None:
        case = "I"
    elif de.a1 != 0 and alpha1 is not None and de.a2 == 0:
        case = "II"
    elif de.c1 == 0 and de.c2 == 0:
        case = "III"
    else:
        case = "other"
    smooth = is_smooth(de)
    reducible = is_reducible(de)
    diff = de.p1 - de.p2
    return DoubleEqClass(
        heath_case=case,
        genus=1 if smooth else 0,
        smooth=smooth,
        reducible=reducible,
        first_order=de.a1 == 0 and de.a2 == 0,
        alpha1=alpha1,
        alpha2=alpha2,
        difference_factors=None if diff.is_zero() else factor_difference(diff),
    )


def coprime(de: DoubleEquation) -> bool:
    return poly_gcd(de.p1, de.p2).degree == 0


# --------------------------------------------------------------------------
# solvers


def solve_genus0(de: DoubleEquation, factors: Sequence) -> CurvePoint:
    """Split the constant difference into two given numbers and take half-sum and half-difference.

    The square of the half-sum goes to the equation with the larger constant.
    """
    f, g = (to_rat(c) for c in factors)
    if de.a1 != 0 or de.a2 != 0:
        raise ValueError("first-order double equation (a1 = a2 = 0) required")
    if de.b1 != de.b2:
        raise ValueError("the difference p1 - p2 must be constant (b1 = b2)")
    if de.b1 == 0:
        raise ValueError("both sides are constant; there is no unknown to solve for")
    if f == g or f == -g:
        raise ValueError(f"degenerate split ({f}, {g}): one of the squares vanishes")
    diff = de.c1 - de.c2
    if f * g == diff:
        u, v = (f + g) / 2, (f - g) / 2
    elif f * g == -diff:
        u, v = (f - g) / 2, (f + g) / 2
    else:
        raise ValueError(f"factors multiply to {f * g}, but the difference is {diff}")
    x = (u * u - de.c1) / de.b1
    return CurvePoint.affine(x, u, v)


def case_i_pencil(de: DoubleEquation, sign: int = 1) -> tuple[FactorPair, Fraction]:
    """Factor pair ``(m1 x + n1, 1)`` and the parameter aimed at ``(1:±α:±α:0)``.

    Returns the pair (with its scale) and the chosen square root α.
    """
    alpha = rational_sqrt(de.a1)
    if de.a1 != de.a2 or de.a1 == 0 or alpha is None:
        raise MethodInapplicable("not case I", "a1 = a2 must be a nonzero square")
    alpha *= 1 if sign >= 0 else -1
    m1, n1 = de.b1 - de.b2, de.c1 - de.c2
    if m1 == 0:
        raise MethodInapplicable("no lambda", "b1 = b2 leaves lambda = 2*alpha/(b1 - b2) undefined")
    lam = 2 * alpha / m1
    pair = FactorPair(UniPoly.of(n1, m1), UniPoly.of(1), lam)
    return pair, alpha


def solve_case_i(de: DoubleEquation, cls: DoubleEqClass | None = None, sign: int = 1) -> CurvePoint:
    """Intersect the curve with the ruling line through ``(1:α:α:0)``.

    ``sign=-1`` aims at ``(1:-α:-α:0)`` instead.
    """
    if cls is not None and cls.heath_case != "I":
        raise MethodInapplicable("not case I", f"classified as {cls.heath_case}")
    pair, alpha = case_i_pencil(de, sign)
    lam = pair.scale
    n1 = pair.f1.coeff(0)
    # u = alpha*x + k with k = (lam*n1 + 1/lam)/2; u^2 = p1 is then linear in x
    k = (lam * n1 + 1 / lam) / 2
    slope = 2 * alpha * k - de.b1
    if slope == 0:
        raise PointAtInfinity("the linear term cancels together with the quadratic one")
    x = (de.c1 - k * k) / slope
    u = alpha * x + k
    v = u - 1 / lam
    return CurvePoint.affine(x, u, v)


def solve_case_ii(de: DoubleEquation, cls: DoubleEqClass | None = None) -> CurvePoint:
    """Heath case II: a1 = α² and a2 = 0, with λ = 1 so that v is constant."""
    if cls is not None and cls.heath_case != "II":
        raise MethodInapplicable("not case II", f"classified as {cls.heath_case}")
    alpha = rational_sqrt(de.a1)
    if de.a1 == 0 or alpha is None or de.a2 != 0:
        raise MethodInapplicable("not case II", "a1 must be a nonzero square and a2 = 0")
    # rescale the second equation by k^2 so that its constant matches c1
    if de.c1 == de.c2:
        k = Fraction(1)
    elif de.c2 == 0 or de.c1 == 0:
        raise ValueError("cannot scale the second equation to c1 = c2 (one constant is zero)")
    else:
        k = rational_sqrt(de.c1 / de.c2)
        if k is None:
            raise ValueError(f"c1/c2 = {de.c1 / de.c2} is not a rational square; cannot scale to c1 = c2")
    b2 = k * k * de.b2
    v_scaled = (de.b1 - b2) / (2 * alpha)
    if b2 == 0:
        raise PointAtInfinity("the second equation has no linear term after scaling")
    x = (v_scaled * v_scaled - de.c1) / b2
    u = alpha * x + v_scaled
    return CurvePoint.affine(x, u, v_scaled / k)


def points_at_infinity(de: DoubleEquation) -> dict[str, CurvePoint]:
    """The rational points with Z = 0, keyed P1..P4 (empty when a1 or a2 is not a square)."""
    a1, a2 = rational_sqrt(de.a1), rational_sqrt(de.a2)
    if a1 is None or a2 is None or (a1 == 0 and a2 == 0):
        return {}
    signs = {"P1": (1, 1), "P2": (-1, -1), "P3": (-1, 1), "P4": (1, -1)}
    out: dict[str, CurvePoint] = {}
    for name, (s1, s2) in signs.items():
        pt = CurvePoint.projective(1, s1 * a1, s2 * a2, 0)
        if pt not in out.values():
            out[name] = pt
    return out


def _kernel(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of the right null space of a small rational matrix."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [e * inv for e in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -m[i][free]
        basis.append(vec)
    return basis


def secant_line(de: DoubleEquation, P: CurvePoint) -> tuple[list[Fraction], list[Fraction], Fraction]:
    """The two linear forms cutting out the line ``L_{P,λ}`` through P, and λ.

    With ``G = V0^2 P1(X,Z) - U0^2 P2(X,Z) = (Z0 X - X0 Z) H(X,Z)`` the line is
    ``V0 U + U0 V = λ H`` and ``V0 U - U0 V = λ^-1 (Z0 X - X0 Z)`` with
    ``λ = 2 U0 V0 / H(X0, Z0)``.  Forms are coefficient rows in (X, U, V, Z).
    """
    X0, U0, V0, Z0 = P.coords
    if U0 == 0 or V0 == 0:
        raise DegenerateSecant(f"degenerate secant: {P} has a vanishing square root")
    gA = V0 * V0 * de.a1 - U0 * U0 * de.a2
    gB = V0 * V0 * de.b1 - U0 * U0 * de.b2
    if Z0 != 0:
        hX = gA / Z0
        hZ = (gB + X0 * hX) / Z0
    else:
        hZ = -(V0 * V0 * de.c1 - U0 * U0 * de.c2) / X0
        hX = -gB / X0
    h0 = hX * X0 + hZ * Z0
    if h0 == 0:
        raise DegenerateSecant(f"tangential degeneracy: h vanishes at {P}")
    lam = Fraction(2 * U0 * V0) / h0
    row1 = [-lam * hX, Fraction(V0), Fraction(U0), -lam * hZ]
    row2 = [-Fraction(Z0) / lam, Fraction(V0), Fraction(-U0), Fraction(X0) / lam]
    return row1, row2, lam


def _quadric1(de: DoubleEquation, w: Sequence[Fraction]) -> Fraction:
    X, U, V, Z = w
    return de.a1 * X * X + de.b1 * X * Z + de.c1 * Z * Z - U * U


def fermat_step(de: DoubleEquation, P: CurvePoint) -> CurvePoint:
    """Second intersection of the curve with the secant line ``L_{P,λ}`` through P.

    Along the line ``s P + r D`` the first quadric restricts to a binary
    quadratic with the known root ``r = 0``; the other root is read off its
    coefficients.
    """
    if not de.contains(P):
        raise ValueError(f"{P} is not on the curve")
    row1, row2, _ = secant_line(de, P)
    p = [Fraction(c) for c in P.coords]
    basis = _kernel([row1, row2], 4)
    d = next(
        (b for b in basis if any(b[i] * p[j] != b[j] * p[i] for i in range(4) for j in range(i + 1, 4))),
        None,
    )
    if d is None or len(basis) != 2:
        raise DegenerateSecant("the secant conditions do not cut out a line")
    fd = _quadric1(de, d)
    cross = _quadric1(de, [a + b for a, b in zip(p, d)]) - fd  # F(P) = 0
    if fd == 0 and cross == 0:
        raise DegenerateSecant("the secant line lies on the first quadric")
    r = [fd * a - cross * b for a, b in zip(p, d)]
    R = CurvePoint(tuple(r))
    if not de.contains(R):  # pragma: no cover - guards the U0 != 0 argument
        raise ArithmeticError(f"secant construction left the curve at {R}")
    return R


def fermat_iterates(de: DoubleEquation, start: CurvePoint, steps: int) -> Iterator[CurvePoint]:
    """Successive points ``start -> R1 -> R2 -> ...`` (``steps`` of them)."""
    pt = start
    for _ in range(steps):
        pt = fermat_step(de, pt)
        yield pt


def fermat_coefficient(n: int) -> int:
    """Multiple of R reached after n secant steps from the origin: (1 - (-3)^n) / 4."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (1 - (-3) ** n) // 4


def solve(de: DoubleEquation, factors: Sequence | None = None, sign: int = 1) -> CurvePoint:
    """Dispatch to the applicable construction, or raise :class:`MethodInapplicable`."""
    cls = classify(de)
    if cls.first_order:
        if factors is None:
            raise MethodInapplicable("factors required", "first-order equation: supply two numbers whose product is the difference")
        return solve_genus0(de, factors)
    if cls.heath_case == "I":
        return solve_case_i(de, cls, sign=sign)
    if cls.heath_case == "II":
        return solve_case_ii(de, cls)
    inf = points_at_infinity(de)
    if inf:
        start = inf["P1"] if sign >= 0 else inf["P2"]
        try:
            return fermat_step(de, start)
        except DegenerateSecant as exc:
            raise MethodInapplicable("no lambda", str(exc)) from exc
    if cls.difference_factors is None:
        raise MethodInapplicable("irreducible difference", "p1 - p2 has no rational linear factors")
    raise MethodInapplicable("no lambda", "no rational point at infinity to aim the ruling at")


def is_admissible(pt: CurvePoint) -> bool:
    """All affine coordinates strictly positive (the only solutions Diophantus accepts)."""
    return not pt.at_infinity and all(c > 0 for c in pt.as_affine())


# --------------------------------------------------------------------------
# reduction modulo p


def check_good_reduction(de: DoubleEquation, prime: int) -> None:
    """Raise :class:`BadReduction` unless the model stays a smooth genus-one curve mod ``prime``.

    Criterion: the binary quartic ``P1(X,Z) P2(X,Z)`` is squarefree over F_p,
    i.e. the affine product is squarefree of degree >= 3 after reduction.
    """
    if prime == 2:
        raise BadReduction("squares are degenerate in characteristic 2")
    if any(c.denominator % prime == 0 for c in de.coeffs):
        raise BadReduction(f"{prime} divides a coefficient denominator")
    prod = de.p1 * de.p2
    red = ModPoly.from_unipoly(prod, prime)
    if red.degree < 3 or not squarefree_mod_p(prod, prime):
        raise BadReduction(f"p1*p2 acquires a repeated root modulo {prime}")


def has_good_reduction(de: DoubleEquation, prime: int) -> bool:
    try:
        check_good_reduction(de, prime)
    except BadReduction:
        return False
    return True


def reduce_point_mod_p(de: DoubleEquation, P: CurvePoint, prime: int) -> tuple[int, int, int, int]:
    """Coordinatewise reduction of the coprime integer representative of P."""
    check_good_reduction(de, prime)
    if not de.contains(P):
        raise ValueError(f"{P} is not on the curve")
    return tuple(c % prime for c in P.coords)


def projectively_equal_mod_p(a: Sequence[int], b: Sequence[int], prime: int) -> bool:
    if all(c % prime == 0 for c in a) or all(c % prime == 0 for c in b):
        raise ValueError("the zero vector is not a projective point")
    n = len(a)
    return all((a[i] * b[j] - a[j] * b[i]) % prime == 0 for i in range(n) for j in range(i + 1, n))


def same_reduction(de: DoubleEquation, P: CurvePoint, Q: CurvePoint, prime: int) -> bool:
    """Whether P and Q reduce to the same point of the curve over F_p."""
    return projectively_equal_mod_p(reduce_point_mod_p(de, P, prime), reduce_point_mod_p(de, Q, prime), prime)
