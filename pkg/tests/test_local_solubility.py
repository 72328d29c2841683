import math
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.abc import X, Y, Z
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from diophantus.double_equation import DoubleEquation
from diophantus.local_solubility import (
    INFINITY,
    DiagConic,
    candidate_bad_primes,
    conic_soluble,
    hilbert_symbol,
    local_obstructions,
    padic_insoluble_system,
    relevant_places,
)
from diophantus.parametrizations import iii17_fibre

nonzero = st.integers(-60, 60).filter(bool)


def brute_hilbert(a: int, b: int, p: int) -> int:
    """(a, b)_p by searching z^2 = a x^2 + b y^2 modulo p^N for a liftable primitive solution.

    a and b must have p-valuation at most 1, so every partial derivative of a
    primitive solution has valuation <= v(2) + 1 and N = 2 v(2) + 3 suffices.
    """
    N = 5 if p == 2 else 3
    M = p**N
    roots = {}
    for z in range(M):
        roots.setdefault(z * z % M, []).append(z)

    def val(n):
        if n % M == 0:
            return N
        return next(e for e in range(N) if n % p ** (e + 1))

    for x, y in product(range(M), repeat=2):
        for z in roots.get((a * x * x + b * y * y) % M, ()):
            if x % p == 0 and y % p == 0 and z % p == 0:
                continue
            e = min(val(2 * z), val(2 * a * x), val(2 * b * y))
            if 2 * e + 1 <= N:
                return 1
    return -1


class TestHilbert:
    def test_minus_one_at_two(self):
        assert hilbert_symbol(-1, -1, 2) == -1

    def test_square_first_argument(self):
        for place in (INFINITY, 2, 3, 5, 7):
            assert hilbert_symbol(1, -7, place) == 1

    def test_real_place(self):
        assert hilbert_symbol(2, -1, INFINITY) == 1
        assert hilbert_symbol(-2, -1, INFINITY) == -1

    def test_zero(self):
        with pytest.raises(ValueError):
            hilbert_symbol(0, 3, 5)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_against_brute_force(self, p):
        units = [u for u in range(-7, 8) if u and u % p]
        values = units[:4] + [p * u for u in units[:3]]
        for a in values:
            for b in values:
                assert hilbert_symbol(a, b, p) == brute_hilbert(a, b, p), (a, b, p)

    @settings(max_examples=500)
    @given(nonzero, nonzero)
    def test_reciprocity(self, a, b):
        prod = 1
        for v in relevant_places(a, b):
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1

    @given(nonzero, nonzero, nonzero, st.sampled_from([2, 3, 5, 7, INFINITY]))
    def test_bimultiplicative(self, a, b, c, v):
        assert hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v)


class TestConic:
    def test_iv32_conic(self):
        res = conic_soluble(DiagConic(3, -1, -16))
        assert not res.soluble
        assert {2, 3} <= set(res.obstructions)
        assert (res.normalized.a, res.normalized.b, res.normalized.c) == (3, -1, -1)

    def test_one_one_two(self):
        assert conic_soluble(DiagConic(1, 1, -2)).witness == (1, 1, 1)

    def test_m2_minus_n2(self):
        res = conic_soluble(DiagConic(1, -1, -2))
        assert res.soluble
        assert DiagConic(1, -1, -2)(*res.witness) == 0

    def test_zero_coefficient(self):
        with pytest.raises(ValueError):
            DiagConic(1, 0, 2)

    def test_definite(self):
        res = conic_soluble(DiagConic(1, 1, 1))
        assert not res.soluble and INFINITY in res.obstructions

    @settings(max_examples=300, deadline=None)
    @given(st.integers(-40, 40).filter(bool), st.integers(-40, 40).filter(bool), st.integers(-40, 40).filter(bool))
    def test_agrees_with_sympy_legendre(self, a, b, c):
        res = conic_soluble(DiagConic(a, b, c))
        if res.soluble:
            assert DiagConic(a, b, c)(*res.witness) == 0
            assert any(res.witness)
        # sympy's descent expects squarefree, pairwise coprime coefficients
        N = res.normalized
        found = diop_ternary_quadratic_normal(N.a * X**2 + N.b * Y**2 + N.c * Z**2)
        if found[0] is not None:
            assert N(*found) == 0 and any(found)
        assert res.soluble == (found[0] is not None)

    def test_insoluble_have_no_small_points(self):
        rng = random.Random(3)
        checked = 0
        while checked < 25:
            C = DiagConic(*(rng.choice([-1, 1]) * rng.randint(1, 30) for _ in range(3)))
            if conic_soluble(C).soluble:
                continue
            for x in range(51):
                for y in range(51):
                    num = -(C.a * x * x + C.b * y * y)
                    if (x, y) == (0, 0) or num % C.c:
                        continue
                    zz = num // C.c
                    assert zz < 0 or math.isqrt(zz) ** 2 != zz, (C, x, y)
            checked += 1


FACTORED = DoubleEquation(3, 0, -1, 1, 0, 1)


class TestPadic:
    def test_two_adic(self):
        assert padic_insoluble_system(FACTORED, 2, 4) == "insoluble"

    def test_three_adic(self):
        assert padic_insoluble_system(FACTORED, 3, 3) == "insoluble"

    def test_fibre_unknown(self):
        assert padic_insoluble_system(DoubleEquation(4, 4, -1, 4, 3, -1), 7, 2) == "unknown"

    def test_bad_precision(self):
        with pytest.raises(ValueError):
            padic_insoluble_system(FACTORED, 3, 0)

    def test_obstruction_report(self):
        assert local_obstructions(FACTORED, candidate_bad_primes(FACTORED), 6) == [2, 3]

    @pytest.mark.parametrize("t", [2, 3, "1/2"])
    def test_soluble_fibres_never_insoluble(self, t):
        de = iii17_fibre(t)
        for p in candidate_bad_primes(de, 20):
            assert padic_insoluble_system(de, p) == "unknown"

    @pytest.mark.parametrize("coeffs", [(0, 1, 2, 0, 1, 3), (4, 15, 0, 4, -1, -4), (1, 2, 1, 0, 1, 1)])
    def test_systems_with_points(self, coeffs):
        de = DoubleEquation(*coeffs)
        for p in (2, 3, 5):
            assert padic_insoluble_system(de, p, 4) == "unknown"


@given(nonzero, nonzero, nonzero)
def test_normalized_form_is_reduced(a, b, c):
    from diophantus.exact_math import squarefree_part

    N, mult = DiagConic(a, b, c).normalized()
    coef = (N.a, N.b, N.c)
    assert all(squarefree_part(k) == k for k in coef)
    assert math.gcd(N.a, N.b) == math.gcd(N.a, N.c) == math.gcd(N.b, N.c) == 1
    # a solution of the normalized form maps to one of the original
    W = conic_soluble(N).witness
    if W is not None:
        assert DiagConic(a, b, c)(*(m * w for m, w in zip(mult, W))) == 0
