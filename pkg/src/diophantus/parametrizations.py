"""Closed-form engines producing rational points on each of the six surfaces."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_math import to_rat
from .surfaces import RatPoint


class ExcludedParameter(ValueError):
    """Parameter lies on the indeterminacy locus of an engine."""


def ii20_param(lam, mu) -> RatPoint:
    """x^2 + y = u^2, x + y^2 = v^2 via y = 2λx + λ², v = 2λx + μ."""
    lam, mu = to_rat(lam), to_rat(mu)
    den = 4 * lam**3 - 4 * lam * mu + 1
    if den == 0:
        raise ExcludedParameter(f"indeterminacy: 4λ³ - 4λμ + 1 = 0 at λ={lam}, μ={mu}")
    x = (mu**2 - lam**4) / den
    return RatPoint(x=x, y=2 * lam * x + lam**2, u=x + lam, v=2 * lam * x + mu)


def ii20_inverse(P) -> tuple[Fraction, Fraction]:
    lam = to_rat(P["u"]) - to_rat(P["x"])
    mu = to_rat(P["v"]) - 2 * lam * to_rat(P["x"])
    return lam, mu


@dataclass(frozen=True)
class ProductSum:
    """Product P and sum S with S, P + S and P - S all squares."""

    product: Fraction
    sum: Fraction
    sqrt_sum: Fraction
    sqrt_plus: Fraction
    sqrt_minus: Fraction


def ii31_ps(a, r) -> ProductSum:
    """Take b = 2r²a, so 2ab = (2ra)² and a² + b² ± 2ab = (a ± b)²."""
    a, r = to_rat(a), to_rat(r)
    if a == 0 or r == 0:
        raise ExcludedParameter("a and r must be nonzero")
    return ProductSum(
        product=(4 * r**4 + 1) * a**2,
        sum=4 * r**2 * a**2,
        sqrt_sum=2 * r * a,
        sqrt_plus=a * (2 * r**2 + 1),
        sqrt_minus=a * (2 * r**2 - 1),
    )


def ii31_conic_point(a) -> tuple[Fraction, Fraction]:
    """Point (m, n) = (a + 1/(2a), a - 1/(2a)) on m² - n² = 2."""
    a = to_rat(a)
    if a == 0:
        raise ExcludedParameter("a must be nonzero")
    return a + 1 / (2 * a), a - 1 / (2 * a)


def ii31_param(lam, a) -> RatPoint:
    lam, a = to_rat(lam), to_rat(a)
    if lam == 0 or a == 0:
        raise ExcludedParameter("λ and a must be nonzero")
    m, n = ii31_conic_point(a)
    k = a**2 + 1 / (4 * a**2)  # = n² + 1
    x = lam**2 + k
    u = x / lam
    return RatPoint(x=x, y=k * x / lam**2, u=u, v=m * u, w=n * u)


def iii17_sigma(t) -> RatPoint:
    """Section of (x,y,u,v,w) -> v/x built from u + w = 2tx, u - w = 1/(2t)."""
    t = to_rat(t)
    d4 = 16 * t**4 - 8 * t**2
    d3 = 16 * t**3 - 8 * t
    if t == 0 or d4 == 0 or d3 == 0:
        raise ExcludedParameter(f"excluded parameter t={t}")
    return RatPoint(
        x=(16 * t**2 + 1) / d4,
        y=Fraction(9) / (16 * t**2 - 8),
        u=(20 * t**2 - 1) / d3,
        v=(16 * t**2 + 1) / d3,
        w=(12 * t**2 + 3) / d3,
    )


def iii17_fibre(t):
    """The double equation cut out on the fibre v = t x (x = the unknown)."""
    from .double_equation import DoubleEquation

    t = to_rat(t)
    if t == 0:
        raise ExcludedParameter("the fibre over t = 0 is degenerate")
    return DoubleEquation(t * t, t * t, -1, t * t, t * t - 1, -1)


def iv18_section(t) -> RatPoint:
    """After the base change u = t², v = x³ + t⁶ forces 4t⁶x³ = x."""
    t = to_rat(t)
    if t == 0:
        raise ExcludedParameter("excluded parameter t=0")
    return RatPoint(
        x=1 / (2 * t**3),
        y=(8 * t**15 - 1) / (8 * t**9),
        u=t**2,
        v=(8 * t**15 + 1) / (8 * t**9),
    )


def iv32_fibre_constant(t0, n) -> Fraction:
    """Right-hand side (t0⁴ - 1)((n - 1)t0² - n - 1) of the fibre conic t0²U² - V² = ..."""
    t0, n = to_rat(t0), to_rat(n)
    return (t0**4 - 1) * ((n - 1) * t0**2 - n - 1)


def iv32_solve_fibre(t0, n=6, l0=None, m0=None) -> RatPoint:
    """Three parts x, y, z of n with xy - z = u² and xy + z = v².

    The second part is y = (t0² + 1)/(t0² - 1); ``l0 * m0`` must split the
    fibre constant.  Without a split the default is (product, 1).
    """
    t0, n = to_rat(t0), to_rat(n)
    if t0 == 0 or t0 * t0 == 1:
        raise ExcludedParameter(f"excluded parameter t0={t0}")
    rhs = iv32_fibre_constant(t0, n)
    if l0 is None and m0 is None:
        l0, m0 = rhs, Fraction(1)
    elif l0 is None or m0 is None:
        raise ValueError("supply both factors l0 and m0, or neither")
    l0, m0 = to_rat(l0), to_rat(m0)
    if l0 * m0 != rhs:
        raise ValueError(f"factors multiply to {l0 * m0}, expected {rhs}")
    if l0 == m0 or l0 == -m0:
        raise ValueError(f"degenerate factor pair ({l0}, {m0})")
    s = t0 * t0 - 1
    y = (t0 * t0 + 1) / s
    big_u = (l0 + m0) / (2 * t0)  # (t0² - 1) * sqrt(xy + z)
    big_v = (l0 - m0) / 2  # (t0² - 1) * sqrt(xy - z)
    a = (t0 * t0 + 1) * ((n - 1) * t0 * t0 - n - 1)
    z = (a - big_u**2) / (2 * s)
    x = n - y - z
    return RatPoint(x=x, y=y, z=z, u=big_v / s, v=big_u / s)


def _primitive_triple(p, q, c) -> tuple[int, int, int]:
    p, q, c = to_rat(p), to_rat(q), to_rat(c)
    den = math.lcm(p.denominator, q.denominator, c.denominator)
    ints = [int(v * den) for v in (p, q, c)]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


def v29_curve(p, q, c) -> RatPoint:
    """Point on x⁴ + y⁴ + z⁴ = w² from a Pythagorean triple p² + q² = c².

    With m = p² + q², x⁴ + p⁴ + q⁴ = (x² - m)² reduces to x = pq/c.
    The witness is returned as |x² - m|.
    """
    p, q, c = (to_rat(v) for v in (p, q, c))
    if c == 0:
        raise ExcludedParameter("c must be nonzero")
    if p * p + q * q != c * c:
        raise ExcludedParameter(f"({p}, {q}, {c}) is not a Pythagorean triple")
    p, q, c = _primitive_triple(p, q, c)
    x = Fraction(p * q, c)
    return RatPoint(x=x, y=p, z=q, w=abs(x * x - (p * p + q * q)))


ENGINES = {
    "II20": (ii20_param, ("lambda", "mu")),
    "II31": (ii31_param, ("lambda", "a")),
    "III17": (iii17_sigma, ("t",)),
    "IV18": (iv18_section, ("t",)),
    "IV32": (iv32_solve_fibre, ("t0", "n", "l0", "m0")),
    "V29": (v29_curve, ("p", "q", "c")),
}
