import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapcert.errors import InputError
from gapcert.exact import ExactComplex
from gapcert.pauli import (
    PauliPoly,
    PauliString,
    all_strings,
    commutator,
    hamiltonian_from_json,
    hamiltonian_to_json,
    mixed_state_moment,
    mul_strings,
    strings_commute,
    to_matrix,
)

N = 3
strings = st.tuples(*[st.integers(0, 3)] * N).map(lambda ops: PauliString.from_ops(ops))
coeffs = st.integers(-3, 3).map(ExactComplex)
polys = st.dictionaries(strings, coeffs, max_size=4).map(lambda d: PauliPoly(N, d))


def test_single_site_table():
    x, y, zz = (PauliString.parse(1, a + "1") for a in "XYZ")
    assert mul_strings(x, y) == (ExactComplex(0, 1), zz)
    assert mul_strings(y, x) == (ExactComplex(0, -1), zz)
    assert mul_strings(zz, zz) == (ExactComplex(1), PauliString.identity(1))


def test_string_count_and_labels():
    assert len(all_strings(2)) == 16
    assert len(all_strings(3, 1)) == 10
    assert PauliString.parse(3, "X1 Z3").support == (1, 3)


@given(strings, strings)
def test_matrix_homomorphism(p, q):
    c, r = mul_strings(p, q)
    assert np.allclose(to_matrix(p) @ to_matrix(q), complex(c) * to_matrix(r))
    assert strings_commute(p, q) == np.allclose(to_matrix(p) @ to_matrix(q), to_matrix(q) @ to_matrix(p))


@settings(max_examples=40)
@given(polys, polys, polys)
def test_poly_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).adjoint() == b.adjoint() * a.adjoint()
    assert np.allclose(to_matrix(commutator(a, b)), to_matrix(a) @ to_matrix(b) - to_matrix(b) @ to_matrix(a))


@given(polys)
def test_trace_moment(a):
    m = to_matrix(a)
    assert np.isclose(complex(mixed_state_moment(a)), np.trace(m) / m.shape[0])


def test_parse_forms():
    h = PauliPoly.parse(2, "-Z1 - 1/2 X1 X2 + 3")
    assert h.coefficient(PauliString.parse(2, "X1 X2")) == ExactComplex(-0.5)
    assert h.identity_coefficient == ExactComplex(3)
    assert h.is_hermitian()
    assert not PauliPoly.parse(1, "1 X1").scale(ExactComplex(0, 1)).is_hermitian()


def test_json_round_trip():
    h = PauliPoly.parse(3, "0.25 X1 Y2 - Z3 + 2")
    assert hamiltonian_from_json(hamiltonian_to_json(h)) == h


@pytest.mark.parametrize(
    "data, needle",
    [
        ({"terms": []}, "n"),
        ({"n": 0, "terms": []}, "positive"),
        ({"n": 2, "terms": [{"coeff": 1, "ops": [[1, "Z"]]}, {"coeff": 1, "ops": [[3, "Z"]]}]}, "term 1"),
        ({"n": 2, "terms": [{"coeff": 1, "ops": [[1, "Q"]]}]}, "term 0"),
        ({"n": 2, "terms": [{"coeff": 1, "ops": [[1, "Z"], [1, "X"]]}]}, "repeated"),
        ({"n": 2, "terms": [{"coeff": True, "ops": []}]}, "term 0"),
    ],
)
def test_json_diagnostics(data, needle):
    with pytest.raises(InputError, match=needle):
        hamiltonian_from_json(data)


def test_identity_accumulates():
    data = {"n": 1, "terms": [{"coeff": 1, "ops": []}, {"coeff": "1/2", "ops": []}]}
    assert hamiltonian_from_json(data).identity_coefficient == ExactComplex("3/2")


def test_all_pairs_anticommute_or_commute():
    for p, q in itertools.product(all_strings(2), repeat=2):
        a, b = to_matrix(p), to_matrix(q)
        assert np.allclose(a @ b, b @ a) or np.allclose(a @ b, -b @ a)
