from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gapcert.exact import I, ONE, ZERO, ExactComplex, as_exact
from gapcert.linalg import SparseEchelon, exact_rank

q = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 100)
z = st.builds(ExactComplex, q, q)


def test_float_reads_as_decimal():
    assert as_exact(0.1) == ExactComplex(Fraction(1, 10))
    assert as_exact("3/7").re == Fraction(3, 7)


def test_unit_relations():
    assert I * I == -ONE
    assert (ONE + I).conjugate() == ONE - I
    assert not ZERO
    assert complex(ExactComplex(1, -2)) == 1 - 2j


@given(z, z, z)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if b:
        assert (a / b) * b == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_echelon_rank_and_normal_form():
    rows = [{3: 1, 1: 2}, {2: 1, 1: 1}, {3: 2, 2: 2, 1: 6}]
    assert exact_rank(rows) == 2
    ech = SparseEchelon()
    for r in rows:
        ech.add_row(r)
    # col 3 = -2·col 1 and col 2 = -col 1 modulo the rows
    assert ech.normal_form(3) == {1: -2}
    assert ech.reduce({3: 1, 2: 1}) == {1: -3}


@given(st.lists(st.dictionaries(st.integers(0, 6), q, max_size=4), max_size=8))
def test_rank_matches_sympy(rows):
    import sympy

    m = sympy.Matrix([[r.get(c, 0) for c in range(7)] for r in rows]) if rows else sympy.zeros(0, 7)
    assert exact_rank(rows) == m.rank()
