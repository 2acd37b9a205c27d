import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapcert.errors import InputError, SolverError
from gapcert.sdp import SdpBuilder, certify_dual, export_sdpa, read_sdpa, solve, weak_duality


def _two_by_two():
    # min x  s.t. [[x, 1], [1, x]] ⪰ 0, optimum 1
    b = SdpBuilder(1)
    k = b.add_block("m", 2)
    b.add(1, k, 0, 0, 1.0)
    b.add(1, k, 1, 1, 1.0)
    b.add(0, k, 0, 1, -1.0)
    b.c[0] = 1.0
    return b.build()


def random_sdp(seed: int, m: int = 4, dims=(3, 2), sense="min"):
    """Strictly primal and dual feasible by construction."""
    rng = np.random.default_rng(seed)
    b = SdpBuilder(m, sense)
    x0 = rng.normal(size=m)
    y0 = []
    c = np.zeros(m)
    for k, d in enumerate(dims):
        b.add_block(f"b{k}", d)
        fs = []
        for i in range(m):
            a = rng.normal(size=(d, d))
            fs.append(a + a.T)
        slack = np.eye(d) + 0.1 * np.diag(rng.random(d))
        f0 = sum(x * f for x, f in zip(x0, fs)) - slack
        for i, f in enumerate([f0] + fs):
            for r in range(d):
                for s in range(r, d):
                    b.add(i, k, r, s, f[r, s])
        g = rng.normal(size=(d, d))
        y = g @ g.T + np.eye(d)
        y0.append(y)
        c += np.array([np.sum(f * y) for f in fs])
    b.c[:] = c if sense == "min" else -c
    return b.build()


def test_known_optimum():
    sol = solve(_two_by_two())
    assert sol.status == "optimal"
    assert sol.primal_objective == pytest.approx(1.0, abs=1e-7)
    assert sol.dual_objective == pytest.approx(1.0, abs=1e-7)


def test_equality_constraints():
    b = SdpBuilder(2)
    k = b.add_block("m", 2)
    b.add(1, k, 0, 0, 1.0)
    b.add(2, k, 1, 1, 1.0)
    b.add(0, k, 0, 1, -1.0)
    b.c[:] = [1.0, 1.0]
    b.add_equality({0: 1.0, 1: -1.0}, 0.0)
    sol = solve(b.build())
    assert sol.x == pytest.approx([1.0, 1.0], abs=1e-6)
    assert sol.value == pytest.approx(2.0, abs=1e-7)


def test_inconsistent_equalities():
    b = SdpBuilder(1)
    k = b.add_block("m", 1)
    b.add(1, k, 0, 0, 1.0)
    b.add_equality({0: 1.0}, 0.0)
    b.add_equality({0: 1.0}, 1.0)
    with pytest.raises(SolverError):
        solve(b.build())


def test_hermitian_block_gives_largest_eigenvalue():
    h = np.array([[1.0, 0.5 - 0.7j], [0.5 + 0.7j, -0.3]])
    b = SdpBuilder(1)
    entries = {
        (0, 0): ({0: 1.0, -1: -h[0, 0].real}, {}),
        (1, 1): ({0: 1.0, -1: -h[1, 1].real}, {}),
        (0, 1): ({-1: -h[0, 1].real}, {-1: -h[0, 1].imag}),
    }
    blk = b.add_hermitian("tI-H", 2, entries)
    b.c[0] = 1.0
    p = b.build()
    assert p.blocks[blk].embedded and p.blocks[blk].dim == 4
    sol = solve(p)
    assert sol.value == pytest.approx(np.linalg.eigvalsh(h)[-1], abs=1e-7)


@settings(max_examples=12)
@given(st.integers(0, 10_000), st.sampled_from(["min", "max"]))
def test_weak_duality_and_convergence(seed, sense):
    p = random_sdp(seed, sense=sense)
    sol = solve(p)
    assert sol.status in ("optimal", "near_optimal")
    sgn = 1 if sense == "min" else -1
    assert sgn * (sol.primal_objective - sol.dual_objective) >= -1e-7
    assert sol.gap <= 1e-6
    gap, floor = weak_duality(p, sol)
    assert gap >= floor - 1e-12 and floor >= -1e-7
    for x in p.dense_blocks(sol.x):
        assert np.linalg.eigvalsh(x)[0] >= -1e-7


def test_certified_bound_is_one_sided():
    p = random_sdp(3)
    sol = solve(p, tol=1e-4)
    cert = certify_dual(p, sol, [1e3] * len(p.blocks), x_bounds=1e3)
    assert cert.status == "certified" and cert.margin >= 0
    assert cert.bound <= solve(p).primal_objective + 1e-9
    with pytest.raises(ValueError):
        certify_dual(p, sol, [1.0])
    assert certify_dual(p, sol, [None, None]).status == "residuals-only"


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_sdpa_round_trip_bit_exact(tmp_path_factory, seed):
    d = tmp_path_factory.mktemp("sdpa")
    p = random_sdp(seed, m=3, dims=(2, 3))
    export_sdpa(p, d / "a.dat-s")
    q = read_sdpa(d / "a.dat-s")
    for name in ("c", "mat", "blk", "row", "col", "val"):
        assert np.array_equal(getattr(p, name), getattr(q, name)), name
    assert q.sense == p.sense and q.offset == p.offset and q.blocks == p.blocks
    export_sdpa(q, d / "b.dat-s")
    assert (d / "a.dat-s").read_bytes() == (d / "b.dat-s").read_bytes()


def test_sdpa_equalities_and_embedding_survive(tmp_path):
    b = SdpBuilder(2, "max")
    b.add_hermitian("h", 2, {(0, 0): ({0: 1.0}, {}), (1, 1): ({1: 1.0}, {}), (0, 1): ({-1: 0.5}, {-1: 0.25})})
    b.add_equality({0: 1.0, 1: 1.0}, 1.0)
    b.c[:] = [1.0, 2.0]
    b.offset = 0.5
    p = b.build()
    export_sdpa(p, tmp_path / "e.dat-s")
    q = read_sdpa(tmp_path / "e.dat-s")
    assert q.blocks == p.blocks and q.sense == "max" and q.offset == 0.5
    assert np.array_equal(q.eq_a.toarray(), p.eq_a.toarray()) and np.array_equal(q.eq_b, p.eq_b)


def test_sdpa_malformed(tmp_path):
    f = tmp_path / "bad.dat-s"
    f.write_text("2\n1\n2\n1.0 2.0\n1 1 1\n")
    with pytest.raises(InputError):
        read_sdpa(f)
    f.write_text("x\n")
    with pytest.raises(InputError):
        read_sdpa(f)


def test_refuses_empty_export(tmp_path):
    with pytest.raises(InputError):
        export_sdpa(SdpBuilder(0).build(), tmp_path / "z.dat-s")
