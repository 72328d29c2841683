from fractions import Fraction

from hypothesis import strategies as st

from diophantus.double_equation import DoubleEquation


def rationals(max_num=1000, max_den=1000, nonzero=False):
    num = st.integers(-max_num, max_num)
    if nonzero:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, max_den))


def _valid(coeffs) -> bool:
    try:
        DoubleEquation.from_coeffs(coeffs)
    except ValueError:
        return False
    return True


def small_double_equations(bound=3):
    """Integer double equations with coefficients in [-bound, bound] that pass validation."""
    c = st.integers(-bound, bound)
    return st.tuples(c, c, c, c, c, c).filter(_valid).map(DoubleEquation.from_coeffs)
