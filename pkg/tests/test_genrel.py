import pytest

from gapcert.errors import DomainError, RelationError
from gapcert.genrel import (
    FAMILIES,
    Relation,
    RelationSet,
    bracket,
    candidate_counts,
    enumerate_A,
    expand,
    f_map,
    g_map,
    gen_relations,
    gp_map,
    leaf,
    span_check,
    verify_relations,
)
from gapcert.ncpoly import S, T
from gapcert.pauli import PauliPoly, PauliString, all_strings


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_f_inverts_g_and_gprime(n):
    for p in all_strings(n)[1:]:
        want = PauliPoly.from_string(p)
        assert f_map(g_map(p), n) == want, p
        assert f_map(gp_map(p), n) == want, p


def test_g_depth_and_leaves():
    p = PauliString.parse(4, "X1 Y2 Z3 X4")
    t = g_map(p)
    assert t.depth == 3
    assert [g.kind for g in t.leaves()] == ["S", "T", "T", "T"]
    first = gp_map(p).leaves()[0]
    assert first.kind == "T" and first.sites == (1, 2)
    with pytest.raises(DomainError):
        g_map(PauliString.identity(2))


def test_expand_commutator():
    t = bracket(leaf(S(1, 1)), leaf(S(1, 2)))
    e = expand(t)
    assert len(e) == 2 and e.degree == 2


@pytest.mark.parametrize("n, rank", [(1, 3), (2, 15)])
def test_span(n, rank):
    assert span_check(n) == rank


def test_relations_n2_exact():
    rs = gen_relations(2)
    report = verify_relations(rs)
    assert report.ok and report.total == len(rs)
    assert set(rs.counts()) == set(FAMILIES)
    # every family except 4c (needs three sites) is populated at n = 2
    assert rs.counts()["4c"] == 0 and all(v > 0 for k, v in rs.counts().items() if k != "4c")
    # deduplication only removes candidates
    cand = candidate_counts(2)
    assert all(rs.counts()[f] <= cand[f] for f in FAMILIES)


def test_relation_family_subset():
    rs = gen_relations(2, families=["4a"])
    assert set(v for k, v in rs.counts().items() if v) == {15}


def test_bad_relation_is_named():
    bogus = Relation("4a", ("bogus",), bracket(leaf(S(1, 1)), leaf(S(1, 2))), ())
    rs = RelationSet(2, [bogus])
    with pytest.raises(RelationError, match="4a"):
        verify_relations(rs)


def test_relation_json():
    r = next(iter(gen_relations(2, families=["4a"])))
    js = r.to_json()
    assert js["family"] == "4a" and js["expanded"]
    assert all(len(t["coeff"]) == 2 for t in js["expanded"])


def test_enumerate_A_size():
    assert len(enumerate_A(2)) == 15
    assert len(enumerate_A(3, 2)) == 9 + 27
    with pytest.raises(DomainError):
        enumerate_A(2, 3)
