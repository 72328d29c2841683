"""Exact arithmetic over the rationals and over small prime fields.

Rationals are :class:`fractions.Fraction` throughout; it already keeps
numerator and denominator coprime with a positive denominator, which is
exactly the canonical form every other module relies on for equality and
hashing.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rat = Fraction

MAX_PRIME = 2**61


def to_rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: nothing in this package should ever go through
    binary floating point.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def fmt_rat(q: Fraction) -> str:
    # str(Fraction) already omits a denominator of 1
    return str(q)


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def rat_arith(a, b, op: str) -> Fraction:
    """Apply one of ``add``, ``sub``, ``mul``, ``div`` to two rationals.

    Division by zero raises ``ZeroDivisionError``.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    a, b = to_rat(a), to_rat(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError(f"division of {a} by zero")
    return fn(a, b)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0:
        raise ValueError("iroot of a negative integer")
    if k == 2:
        return math.isqrt(n)
    if n < 2:
        return n
    # Newton iteration from an overestimate
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def rational_root(q, k: int = 2) -> Fraction | None:
    """The rational k-th root of ``q`` if there is one, else ``None``.

    Square roots are returned nonnegative.  Odd roots of negative numbers
    are negative.
    """
    q = to_rat(q)
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_root(-q, k)
        return None if r is None else -r
    n, d = q.numerator, q.denominator
    rn, rd = iroot(n, k), iroot(d, k)
    if rn**k == n and rd**k == d:
        return Fraction(rn, rd)
    return None


def rational_sqrt(q) -> Fraction | None:
    return rational_root(q, 2)


def is_square(q) -> bool:
    return rational_sqrt(q) is not None


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def primitive_integer_vector(values: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers with first nonzero entry positive."""
    vals = [to_rat(v) for v in values]
    if all(v == 0 for v in vals):
        raise ValueError("the zero vector has no projective normalization")
    den = lcm_of_denominators(vals)
    ints = [int(v * den) for v in vals]
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    ints = [i // g for i in ints]
    first = next(i for i in ints if i != 0)
    if first < 0:
        ints = [-i for i in ints]
    return tuple(ints)


def factor_integer(n: int) -> dict[int, int]:
    """Prime factorization of a nonzero integer (sign dropped)."""
    if n == 0:
        raise ValueError("cannot factor zero")
    from sympy import factorint

    return {int(p): int(e) for p, e in factorint(abs(n)).items()}


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel: ``n = squarefree_part(n) * s**2``."""
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factor_integer(n).items():
        if e % 2:
            out *= p
    return sign * out


def weighted_normalize(values: Sequence, weights: Sequence[int]) -> tuple[int, ...]:
    """Normalize a point of weighted projective space to primitive integers.

    Scaling acts as ``c_i -> s**w_i * c_i``.  The result is integral, no prime
    ``p`` satisfies ``p**w_i | c_i`` for every ``i``, and the first nonzero
    odd-weight coordinate is positive (when there is one).
    """
    vals = [to_rat(v) for v in values]
    if len(vals) != len(weights) or any(w < 1 for w in weights):
        raise ValueError("one positive weight per coordinate required")
    if all(v == 0 for v in vals):
        raise ValueError("the zero vector has no projective normalization")
    # s must clear every denominator: p**ceil(e/w) for each p**e || den
    need: dict[int, int] = {}
    for v, w in zip(vals, weights):
        if v.denominator > 1:
            for p, e in factor_integer(v.denominator).items():
                need[p] = max(need.get(p, 0), -(-e // w))
    s = 1
    for p, e in need.items():
        s *= p**e
    ints = [int(v * s**w) for v, w in zip(vals, weights)]
    # remove common weighted content
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    if g > 1:
        for p in factor_integer(g):
            while all(i % p**w == 0 for i, w in zip(ints, weights)):
                ints = [i // p**w for i, w in zip(ints, weights)]
    odd = [i for i, w in zip(ints, weights) if w % 2 and i != 0]
    if odd and odd[0] < 0:
        ints = [-i if w % 2 else i for i, w in zip(ints, weights)]
    return tuple(ints)


# --------------------------------------------------------------------------
# univariate polynomials over Q


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    cs = [to_rat(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    coeffs: tuple[Fraction, ...] = ()
    var: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def of(cls, *coeffs, var: str = "x") -> "UniPoly":
        return cls(tuple(coeffs), var)

    @classmethod
    def quadratic(cls, a, b, c, var: str = "x") -> "UniPoly":
        """``a x^2 + b x + c``."""
        return cls((c, b, a), var)

    @property
    def degree(self) -> int:
        # zero polynomial gets -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = to_rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly((to_rat(other),), self.var)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)), self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return UniPoly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(tuple(out), self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly((Fraction(1),), self.var)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 1)
        while len(rem) > other.degree and rem:
            shift = len(rem) - 1 - other.degree
            f = rem[-1] / other.lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[shift + i] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return UniPoly(tuple(q), self.var), UniPoly(tuple(rem), self.var)

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i), self.var)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly(tuple(c / self.lead for c in self.coeffs), self.var)

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive in Z[x]."""
        if self.is_zero():
            return Fraction(0)
        den = lcm_of_denominators(self.coeffs)
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, int(c * den))
        return Fraction(g, den)

    def primitive(self) -> "UniPoly":
        """Primitive integer polynomial with positive leading coefficient."""
        if self.is_zero():
            return self
        p = UniPoly(tuple(c / self.content() for c in self.coeffs), self.var)
        return -p if p.lead < 0 else p

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else self.var if i == 1 else f"{self.var}^{i}"
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}" if mono else f"{abs(c)}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(p: UniPoly) -> bool:
    """No repeated root over the algebraic closure of Q."""
    if p.is_zero():
        return False
    return poly_gcd(p, p.derivative()).degree == 0


def quad_roots(p: UniPoly) -> list[Fraction]:
    """All rational roots, with multiplicity, of a nonzero polynomial of degree <= 2.

    The list is empty when the discriminant is not a rational square.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    if p.degree > 2:
        raise ValueError("quad_roots handles degree <= 2 only")
    if p.degree == 0:
        return []
    if p.degree == 1:
        return [-p.coeff(0) / p.coeff(1)]
    c, b, a = p.coeffs
    s = rational_sqrt(b * b - 4 * a * c)
    if s is None:
        return []
    return [(-b + s) / (2 * a), (-b - s) / (2 * a)]


def factor_difference(d: UniPoly) -> tuple[UniPoly, UniPoly] | None:
    """Split a nonzero polynomial of degree <= 2 into two factors of degree <= 1.

    The first factor is a primitive integer polynomial with positive leading
    coefficient (for degree 0 input it is the constant itself).  Returns
    ``None`` for a quadratic irreducible over Q.
    """
    if d.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if d.degree > 2:
        raise ValueError("factor_difference handles degree <= 2 only")
    one = UniPoly((Fraction(1),), d.var)
    if d.degree == 0:
        return d, one
    if d.degree == 1:
        f1 = d.primitive()
        return f1, d // f1
    roots = quad_roots(d)
    if not roots:
        return None
    f1 = UniPoly((-roots[0], Fraction(1)), d.var).primitive()
    f2, rem = d.divmod(f1)
    assert rem.is_zero()
    return f1, f2


# --------------------------------------------------------------------------
# polynomials over F_p


def _check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or p >= MAX_PRIME:
        raise ValueError(f"modulus must be a prime below 2**61, got {p!r}")
    if p < 1000:
        composite = any(p % q == 0 for q in range(2, math.isqrt(p) + 1))
    else:
        from sympy import isprime

        composite = not isprime(p)
    if composite:
        raise ValueError(f"{p} is not prime")
    return p


def reduce_rat(q, p: int) -> int:
    """Image of a p-integral rational in Z/p."""
    q = to_rat(q)
    if q.denominator % p == 0:
        raise ValueError(f"{q} is not integral at {p}")
    return q.numerator * pow(q.denominator, -1, p) % p


@dataclass(frozen=True)
class ModPoly:
    """Dense polynomial over F_p, coefficients lowest degree first."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        cs = [c % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_unipoly(cls, f: UniPoly, p: int) -> "ModPoly":
        _check_prime(p)
        return cls(tuple(reduce_rat(c, p) for c in f.coeffs), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def derivative(self) -> "ModPoly":
        return ModPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i), self.p)

    def monic(self) -> "ModPoly":
        if self.is_zero():
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return ModPoly(tuple(c * inv for c in self.coeffs), self.p)

    def __mod__(self, other: "ModPoly") -> "ModPoly":
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        inv = pow(other.coeffs[-1], -1, p)
        while len(rem) > other.degree and rem:
            shift = len(rem) - 1 - other.degree
            f = rem[-1] * inv % p
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = (rem[shift + i] - f * c) % p
            while rem and rem[-1] == 0:
                rem.pop()
        return ModPoly(tuple(rem), p)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def modpoly_gcd(a: ModPoly, b: ModPoly) -> ModPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_mod_p(f: UniPoly, prime: int) -> bool:
    """Whether the reduction of ``f`` modulo ``prime`` has no repeated root.

    A reduction that collapses to a constant counts as squarefree only when
    the constant is nonzero.  Raises ``ValueError`` if ``prime`` divides a
    coefficient denominator.
    """
    fp = ModPoly.from_unipoly(f, prime)
    if fp.is_zero():
        return False
    return modpoly_gcd(fp, fp.derivative()).degree == 0


# --------------------------------------------------------------------------
# sparse multivariate polynomials over Q

Monomial = tuple[int, ...]


class MultiPoly:
    """Sparse polynomial in labelled variables with rational coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, variables: Sequence[str] = ()):
        self.variables = tuple(variables)
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(self.variables):
                raise ValueError(f"exponent vector {mono} does not match variables {self.variables}")
            if any(e < 0 for e in mono):
                raise ValueError("negative exponent")
            c = to_rat(c)
            if c:
                c = clean.get(mono, Fraction(0)) + c
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self.terms = clean

    @classmethod
    def const(cls, c, variables: Sequence[str]) -> "MultiPoly":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        mono = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls({mono: 1}, variables)

    @classmethod
    def gens(cls, variables: Sequence[str]) -> tuple["MultiPoly", ...]:
        return tuple(cls.var(v, variables) for v in variables)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("variable lists differ")
            return other
        return MultiPoly.const(other, self.variables)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                other = self._lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return MultiPoly(out, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return MultiPoly(out, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.const(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def used_variables(self) -> set[str]:
        return {v for m in self.terms for v, e in zip(self.variables, m) if e}

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = []
        for v in self.variables:
            if v in point:
                vals.append(to_rat(point[v]))
            elif any(m[len(vals)] for m in self.terms):
                raise KeyError(v)
            else:
                vals.append(Fraction(0))
        acc = Fraction(0)
        for mono, c in self.terms.items():
            t = c
            for x, e in zip(vals, mono):
                if e:
                    t *= x**e
            acc += t
        return acc

    def to_json(self) -> dict[str, str]:
        return {",".join(map(str, m)): fmt_rat(c) for m, c in sorted(self.terms.items(), reverse=True)}

    @classmethod
    def from_json(cls, data: Mapping[str, str], variables: Sequence[str]) -> "MultiPoly":
        terms = {}
        for key, c in data.items():
            mono = tuple(int(e) for e in key.split(",")) if key else ()
            terms[mono] = to_rat(c)
        return cls(terms, variables)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for mono, c in sorted(self.terms.items(), reverse=True):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, mono) if e]
            if not factors:
                out.append(str(c))
            elif c == 1:
                out.append("*".join(factors))
            elif c == -1:
                out.append("-" + "*".join(factors))
            else:
                out.append(f"{c}*" + "*".join(factors))
        return " + ".join(out).replace("+ -", "- ")
