import numpy as np
import pytest

from conftest import random_local, z_field
from gapcert.errors import DomainError, ResourceError
from gapcert.exact import ExactComplex
from gapcert.lower_bound import (
    build_system,
    encode_hamiltonian,
    prepare_lower,
    single_site_cliques,
    solve_lower,
    support_cliques,
)
from gapcert.ncpoly import HermiticityConfig, enumerate_words
from gapcert.oracle import antisym_action, spectrum
from gapcert.pauli import PauliPoly, PauliString
from gapcert.sdp import solve, weak_duality


def wedge_moments(h: PauliPoly):
    """E[w] on the lowest eigenvector of H acting on the antisymmetric square."""
    w, v = np.linalg.eigh(antisym_action(h))
    psi = v[:, 0]
    ops = {}

    def op(letter):
        g = letter.gen
        if g not in ops:
            letters = {g.i: g.a} if g.kind == "S" else {g.i: g.a, g.j: g.b}
            ops[g] = antisym_action(PauliString(h.n, letters))
        return ops[g].conj().T if letter.star else ops[g]

    def moment(word):
        vec = psi
        for x in reversed(word):
            vec = op(x) @ vec
        return complex(psi.conj() @ vec)

    return moment, float(w[0])


def _evaluate(form, x):
    return sum(float(v) * (1.0 if k == -1 else x[k]) for k, v in form.items())


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_wedge_state_is_feasible_level1(seed):
    h = random_local(2, np.random.default_rng(seed))
    npa = prepare_lower(h, 1)
    moment, target = wedge_moments(h)
    x = npa.params_from_moments(moment)
    assert min(np.linalg.eigvalsh(b)[0] for b in npa.sdp.dense_blocks(x)) >= -1e-9
    assert npa.sdp.objective(x) == pytest.approx(target, abs=1e-9)
    # every degree <= 2 word is an exact affine function of the parameters
    for w in enumerate_words(2, 2):
        fr, fi = npa.moment_form(w)
        assert complex(_evaluate(fr, x), _evaluate(fi, x)) == pytest.approx(moment(w), abs=1e-9)


def test_wedge_state_is_feasible_level2():
    h = random_local(2, np.random.default_rng(7))
    npa = prepare_lower(h, 2)
    moment, target = wedge_moments(h)
    x = npa.params_from_moments(moment)
    assert min(np.linalg.eigvalsh(b)[0] for b in npa.sdp.dense_blocks(x)) >= -1e-9
    assert npa.sdp.objective(x) == pytest.approx(target, abs=1e-9)
    assert npa.stats["parameters"] == npa.sdp.m
    # 1 + 15 + 15*16/2 standard words: commutators reduce ab - ba to letters.
    # The complex block is stored in its doubled real form.
    moment = npa.sdp.blocks[0]
    assert moment.embedded and moment.dim == 2 * 136


def test_wedge_state_is_feasible_sparse_n3():
    h = random_local(3, np.random.default_rng(3))
    cl = single_site_cliques(3, 2) + [((1, 2), 1), ((1, 3), 1), ((2, 3), 1)]
    npa = prepare_lower(h, 2, cliques=cl)
    moment, target = wedge_moments(h)
    x = npa.params_from_moments(moment)
    assert min(np.linalg.eigvalsh(b)[0] for b in npa.sdp.dense_blocks(x)) >= -1e-9
    assert npa.sdp.objective(x) == pytest.approx(target, abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_level1_sound(seed):
    h = random_local(2, np.random.default_rng(100 + seed))
    sp = spectrum(h)
    rep = solve_lower(h, 1)
    assert rep.certificate_status == "certified"
    assert rep.certified_bound <= rep.dual_value
    assert rep.certified_bound <= sp.lam1 + sp.lam2 + 1e-6


def test_relaxed_solve_obeys_eps_weak_duality():
    npa = prepare_lower(random_local(2, np.random.default_rng(5)), 1)
    for relax in (0.0, 1e-6):
        sol = solve(npa.sdp, relax=relax)
        gap, floor = weak_duality(npa.sdp, sol)
        assert gap >= floor - 1e-12
        assert floor >= -relax * sum(np.trace(y) for y in sol.Y) - 1e-7


def test_known_small_instance():
    h = PauliPoly.parse(2, "1/2 X1 X2 - 3/10 Z1")
    sp = spectrum(h)
    assert solve_lower(h, 1).certified_bound == pytest.approx(sp.lam1 + sp.lam2, abs=1e-5)


def test_identity_shift():
    h = PauliPoly.parse(2, "1/2 X1 X2 - 3/10 Z1")
    a = solve_lower(h, 1).certified_bound
    b = solve_lower(h + PauliPoly.identity(2, 3), 1).certified_bound
    assert b - a == pytest.approx(6, abs=1e-6)


def test_non_hermitian_t_letters_still_sound():
    h = PauliPoly.parse(2, "1/2 X1 X2 - 3/10 Z1 + 1/5 Y2")
    sp = spectrum(h)
    rep = solve_lower(h, 1, config=HermiticityConfig(t_hermitian=False))
    assert rep.certified_bound <= sp.lam1 + sp.lam2 + 1e-6


def test_n3_sites_z_field():
    rep = solve_lower(z_field(3), 2, cliques="sites")
    assert rep.certified_bound == pytest.approx(-4, abs=1e-5)
    # pair inequalities need T letters, which single-site cliques do not carry
    assert rep.stats["dropped_inequalities"] == ["pair_1_2", "pair_1_3", "pair_2_3"]


def test_moment_block_size_level1():
    moment = prepare_lower(z_field(2), 1).sdp.blocks[0]
    assert moment.embedded and moment.dim == 2 * 16


def test_gp_encoding():
    h = PauliPoly.parse(3, "X1 X2 X3")
    assert encode_hamiltonian(h)[0].degree == 3
    assert encode_hamiltonian(h, encoding="gp")[0].degree == 2
    h2 = random_local(2, np.random.default_rng(8))
    obj, _ = encode_hamiltonian(h2, encoding="gp")
    assert obj.degree == 1
    npa = prepare_lower(h2, 1, encoding="gp")
    moment, target = wedge_moments(h2)
    x = npa.params_from_moments(moment)
    assert npa.sdp.objective(x) == pytest.approx(target, abs=1e-9)
    sp = spectrum(h2)
    assert solve_lower(h2, 1, encoding="gp").certified_bound <= sp.lam1 + sp.lam2 + 1e-6


def test_t_free_is_looser_than_t_hermitian():
    h = random_local(2, np.random.default_rng(9))
    sp = spectrum(h)
    free = solve_lower(h, 1, config=HermiticityConfig(t_hermitian=False)).certified_bound
    herm = solve_lower(h, 1).certified_bound
    assert free <= herm + 1e-6 <= sp.lam1 + sp.lam2 + 2e-6


def test_monotone_in_level_nested_cliques():
    h = random_local(3, np.random.default_rng(10))
    pairs = [((1, 2), 1), ((1, 3), 1), ((2, 3), 1)]
    lo = solve_lower(h, 1, cliques=single_site_cliques(3, 1) + pairs).certified_bound
    hi = solve_lower(h, 2, cliques=single_site_cliques(3, 2) + pairs).certified_bound
    sp = spectrum(h)
    # monotone up to the solver's relative stopping gap
    slack = 1e-5 * (1 + abs(hi))
    assert lo <= hi + slack
    assert hi <= sp.lam1 + sp.lam2 + 1e-6


def test_encoding_and_domain():
    obj, shift = encode_hamiltonian(PauliPoly.parse(2, "X1 X2 + 2"))
    assert shift == 4 and obj.degree == 2
    obj, shift = encode_hamiltonian(PauliPoly.identity(2, 2))
    assert not obj and shift == 4
    with pytest.raises(DomainError):
        prepare_lower(z_field(2), 0)
    with pytest.raises(DomainError):
        encode_hamiltonian(PauliPoly.parse(1, "Z1"))
    with pytest.raises(DomainError):
        encode_hamiltonian(PauliPoly.parse(2, "Z1").scale(ExactComplex(0, 1)))


def test_system_contents():
    s2 = build_system(2)
    assert s2.C4 == 12 and s2.pair_constant == 12
    assert s2.relation_counts["cubic"] == 6
    assert [q.name for q in s2.inequalities] == ["pair_1_2", "sites"]
    s3 = build_system(3, relation_sites=[(1,), (2,), (3,)])
    assert s3.pair_constant == 36 and s3.letter_bounds["T"] == pytest.approx(6, rel=1e-14)
    assert build_system(3, pair_mode="paper", relation_sites=[(1,), (2,), (3,)]).pair_constant == 12


def test_cliques():
    h = PauliPoly.parse(3, "X1 X2 + Z3")
    assert support_cliques(h, 2) == [((3,), 2), ((1, 2), 2)]
    assert single_site_cliques(2, 1) == [((1,), 1), ((2,), 1)]


def test_universe_cap():
    with pytest.raises(ResourceError):
        prepare_lower(z_field(3), 2)
