"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

import os
import random
import sys
import time
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from diophantus import double_equation as dq  # noqa: E402
from diophantus import parametrizations as pz  # noqa: E402
from diophantus.local_solubility import DiagConic, conic_soluble, hilbert_symbol, padic_insoluble_system, relevant_places  # noqa: E402
from diophantus.surfaces import RatPoint, membership, surface  # noqa: E402
from oracles import jacobian_singular  # noqa: E402

TIME_LIMIT = 1.0


def _rand_rat(rng, bound=1000, nonzero=False):
    while True:
        q = F(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def golden_solutions():
    ii20 = pz.ii20_param(1, -2)
    yield ii20["x"] == F(3, 13) and ii20["y"] == F(19, 13)
    yield membership(surface("II31"), RatPoint(x=F(3, 2), y=F(15, 2), u=3, v=F(9, 2), w=F(3, 2)))
    iii17 = pz.iii17_sigma(2)
    yield tuple(iii17[k] for k in "xyuvw") == (F(65, 224), F(9, 56), F(79, 112), F(65, 112), F(51, 112))
    iv18 = pz.iv18_section(2)
    yield (iv18["x"], iv18["y"]) == (F(1, 16), F(262143, 4096))
    iv32 = pz.iv32_solve_fibre(2, 6, 15, 13)
    yield (iv32["x"], iv32["y"], iv32["z"]) == (F(5, 3), F(5, 3), F(8, 3))
    v29 = pz.v29_curve(3, 4, 5)
    yield v29["x"] == F(12, 5) and v29["w"] == F(481, 25)
    for name, P in (("II20", ii20), ("III17", iii17), ("IV18", iv18), ("IV32", iv32), ("V29", v29)):
        yield membership(surface(name), P)


def double_equation_solver():
    p = dq.solve(dq.DoubleEquation(4, 15, 0, 4, -1, -4))
    yield p.as_affine() == (F(5, 4), 5, 1)
    q = dq.solve(dq.DoubleEquation(0, 1, 2, 0, 1, 3), factors=(4, F(1, 4)))
    yield q.x == F(97, 64)
    yield dq.DoubleEquation(0, 1, 2, 0, 1, 3).contains(q)


def fermat_coefficients():
    yield [dq.fermat_coefficient(n) for n in range(6)] == [0, 1, -2, 7, -20, 61]
    yield all(dq.fermat_coefficient(n + 1) == 1 - 3 * dq.fermat_coefficient(n) for n in range(31))


def reduction_check():
    de = pz.iii17_fibre(2)
    yield dq.has_good_reduction(de, 7)
    yield not dq.has_good_reduction(de, 5)
    P = dq.CurvePoint.affine(F(65, 224), F(79, 112), F(51, 112))
    red = dq.reduce_point_mod_p(de, P, 7)
    yield red == (2, 4, 4, 0)
    inf = dq.reduce_point_mod_p(de, dq.points_at_infinity(de)["P1"], 7)
    yield dq.projectively_equal_mod_p(red, inf, 7)


def insolubility_certificates():
    res = conic_soluble(DiagConic(3, -1, -16))
    yield not res.soluble and {2, 3} <= set(res.obstructions)
    de = dq.DoubleEquation(3, 0, -1, 1, 0, 1)
    yield padic_insoluble_system(de, 2, 4) == "insoluble"
    yield padic_insoluble_system(de, 3, 4) == "insoluble"


def _engine_args(name, rng):
    if name == "II20":
        return _rand_rat(rng), _rand_rat(rng)
    if name == "II31":
        return _rand_rat(rng, nonzero=True), _rand_rat(rng, nonzero=True)
    if name in ("III17", "IV18"):
        return (_rand_rat(rng, nonzero=True),)
    if name == "IV32":
        return _rand_rat(rng, nonzero=True), rng.randint(1, 1000)
    m = rng.randint(2, 1000)
    n = rng.randint(1, m - 1)
    return m * m - n * n, 2 * m * n, m * m + n * n


def engine_membership():
    rng = random.Random(6)
    for name, (fn, _) in pz.ENGINES.items():
        drawn = 0
        while drawn < 200:
            args = _engine_args(name, rng)
            try:
                P = fn(*args)
            except pz.ExcludedParameter:
                continue
            S = surface("IV32", n=args[1]) if name == "IV32" else surface(name)
            drawn += 1
            yield membership(S, P)


def ii20_round_trip():
    rng = random.Random(7)
    drawn = 0
    while drawn < 200:
        lam, mu = _rand_rat(rng), _rand_rat(rng)
        if 4 * lam**3 - 4 * lam * mu + 1 == 0:
            continue
        drawn += 1
        yield pz.ii20_inverse(pz.ii20_param(lam, mu)) == (lam, mu)


def hilbert_reciprocity():
    rng = random.Random(8)
    for _ in range(500):
        a = rng.choice([-1, 1]) * rng.randint(1, 10**4)
        b = rng.choice([-1, 1]) * rng.randint(1, 10**4)
        prod = 1
        for v in relevant_places(a, b):
            prod *= hilbert_symbol(a, b, v)
        yield prod == 1


def classifier_oracle():
    rng = random.Random(9)
    drawn = 0
    while drawn < 100:
        try:
            de = dq.DoubleEquation.from_coeffs([rng.randint(-3, 3) for _ in range(6)])
        except ValueError:
            continue
        drawn += 1
        yield dq.classify(de).smooth == (not jacobian_singular(de))


def fermat_distinctness():
    de = pz.iii17_fibre(2)
    pts = list(dq.fermat_iterates(de, dq.points_at_infinity(de)["P1"], 4))
    yield len(pts) == 4
    yield all(de.contains(p) for p in pts)
    yield len(set(pts)) == 4
    heights = [p.height() for p in pts]
    yield all(h1 < h2 for h1, h2 in zip(heights, heights[1:]))


CRITERIA = [
    (1, "golden solutions of the six surfaces", golden_solutions),
    (2, "double-equation solver (III.13, II.11)", double_equation_solver),
    (3, "Fermat coefficient table and recurrence", fermat_coefficients),
    (4, "reduction of the III.17 fibre at 5 and 7", reduction_check),
    (5, "insolubility certificates", insolubility_certificates),
    (6, "engine membership, 200 draws x 6 engines", engine_membership),
    (7, "II20 inverse round trip, 200 draws", ii20_round_trip),
    (8, "Hilbert reciprocity, 500 pairs", hilbert_reciprocity),
    (9, "smoothness vs Jacobian rank, 100 instances", classifier_oracle),
    (10, "four distinct Fermat iterates with growing height", fermat_distinctness),
]


def evaluate(check):
    start = time.perf_counter()
    try:
        results = list(check())
        failures = results.count(False)
        detail = f"{len(results) - failures}/{len(results)} checks"
        ok = failures == 0
    except Exception as exc:  # a crash is a failure, reported as such
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed >= TIME_LIMIT:
        ok, detail = False, detail + f", over the {TIME_LIMIT:.0f} s budget"
    return ok, f"{detail}, {elapsed * 1000:.0f} ms"


def line(num, title, ok, detail):
    return f"AC{num:>2} {'PASS' if ok else 'FAIL'}  {title} ({detail})"


@pytest.mark.parametrize("num,title,check", CRITERIA, ids=[f"AC{n}" for n, _, _ in CRITERIA])
def test_acceptance(num, title, check, capsys):
    ok, detail = evaluate(check)
    with capsys.disabled():
        print("\n" + line(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    all_ok = True
    for num, title, check in CRITERIA:
        ok, detail = evaluate(check)
        all_ok &= ok
        print(line(num, title, ok, detail))
    sys.exit(0 if all_ok else 1)
