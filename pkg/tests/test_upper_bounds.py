import numpy as np
import pytest

from conftest import random_local, z_field
from gapcert.errors import DegreeError, DomainError
from gapcert.exact import ExactComplex
from gapcert.oracle import spectrum
from gapcert.pauli import PauliPoly, PauliString, all_strings
from gapcert.upper_bounds import (
    PauliWordBasis,
    PseudoState,
    build_eeb,
    eeb_upper,
    ground_state_moments,
    lasserre_upper,
)


def test_word_basis_sizes():
    assert len(PauliWordBasis(3, 1)) == 1 + 9
    assert len(PauliWordBasis(2, 2)) == 16
    assert PauliWordBasis(2, 0)[0] == PauliString.identity(2)


@pytest.mark.parametrize("n", [2, 3])
def test_lasserre_z_field_values(n):
    vals = [lasserre_upper(z_field(n), d).certified_bound for d in range(n + 1)]
    assert vals[0] == pytest.approx(0, abs=1e-9)
    assert vals[1] == pytest.approx(-np.sqrt(n), abs=1e-7)
    assert vals[-1] == pytest.approx(-n, abs=1e-7)


@pytest.mark.parametrize("seed", range(3))
def test_lasserre_monotone_and_above_ground(seed):
    h = random_local(3, np.random.default_rng(seed))
    lam1 = spectrum(h).lam1
    prev = np.inf
    for d in range(4):
        rep = lasserre_upper(h, d)
        assert rep.certified_bound >= lam1 - 1e-8
        assert rep.certified_bound <= prev + 1e-9
        prev = rep.certified_bound
    assert prev == pytest.approx(lam1, abs=1e-7)


def test_lasserre_witness_is_a_state():
    rep = lasserre_upper(random_local(2, np.random.default_rng(4)), 1)
    g = rep.witness
    assert np.trace(g).real == pytest.approx(1)
    assert np.linalg.eigvalsh(g)[0] >= -1e-12


@pytest.mark.parametrize("seed", range(3))
def test_ground_state_is_eeb_feasible(seed):
    h = random_local(3, np.random.default_rng(seed))
    for d in (1, 2):
        prob = build_eeb(h, d)
        y = ground_state_moments(h, prob.cap)
        assert prob.equality_residual(y) <= 1e-9
        x = prob.params_from_moments(y)
        assert min(prob.block_min_eigs(x)) >= -1e-9
        assert prob.sdp.objective(x) == pytest.approx(spectrum(h).lam1, abs=1e-9)


@pytest.mark.parametrize("n", [2, 3])
def test_eeb_full_degree_is_exact(n):
    rep = eeb_upper(z_field(n), n)
    assert rep.certified_bound == pytest.approx(-n, abs=1e-6)
    assert rep.certified_bound >= -n - 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_eeb_random_bounds(seed):
    h = random_local(2, np.random.default_rng(seed))
    lam1 = spectrum(h).lam1
    hi = eeb_upper(h, 2)
    lo = eeb_upper(h, 2, minimize=True)
    assert hi.certified_bound >= lam1 - 1e-8
    assert lo.value <= lam1 + 1e-6 <= hi.value + 2e-6
    assert hi.method == "eeb" and lo.method == "eeb-min"


def test_pseudo_state_cap():
    rep = eeb_upper(z_field(3), 1)
    ps = rep.witness
    assert isinstance(ps, PseudoState)
    assert ps[PauliString.identity(3)] == 1.0
    assert ps[PauliString.parse(3, "Z1")] == pytest.approx(1, abs=1e-5)
    assert ps.expect(z_field(3)).real == pytest.approx(rep.value, abs=1e-6)
    with pytest.raises(DegreeError):
        ps[PauliString.parse(3, "X1 X2 X3")]


def test_explicit_cap_too_small():
    with pytest.raises(DegreeError):
        build_eeb(random_local(3, np.random.default_rng(0)), 2, cap=2)
    assert build_eeb(z_field(3), 1, cap=3).cap == 3


def test_constant_hamiltonian():
    h = PauliPoly.identity(2, 2)
    assert eeb_upper(h, 1).certified_bound == pytest.approx(2)
    assert lasserre_upper(h, 1).certified_bound == pytest.approx(2)


def test_domain_errors():
    bad = PauliPoly.parse(2, "Z1").scale(ExactComplex(0, 1))
    with pytest.raises(DomainError):
        lasserre_upper(bad, 1)
    with pytest.raises(DomainError):
        eeb_upper(bad, 1)
    with pytest.raises(DomainError):
        eeb_upper(z_field(2), 0)
    with pytest.raises(DomainError):
        lasserre_upper(z_field(2), -1)
