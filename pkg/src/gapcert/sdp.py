"""Block-diagonal SDPs in SDPA form, a dense interior-point solver, SDPA I/O
and dual-certificate post-processing.

Conventions follow the SDPA file format. The primal problem is

    min  c·x + offset   s.t.  X = Σ_i x_i F_i - F_0 ⪰ 0,  A_eq x = b_eq

and its dual is ``max <F_0, Y> + offset s.t. <F_i, Y> = c_i, Y ⪰ 0`` (after
the equality rows are eliminated). ``sense="max"`` problems are solved as
``min -c·x`` and reported back in the caller's sense.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from os import PathLike
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import InputError, ResourceError, SolverError

__all__ = [
    "Block",
    "SdpProblem",
    "SdpBuilder",
    "Solution",
    "Certificate",
    "solve",
    "export_sdpa",
    "read_sdpa",
    "certify_dual",
    "weak_duality",
    "MAX_BLOCK_DIM",
    "MAX_EQ_ROWS",
]

MAX_BLOCK_DIM = 1500
MAX_EQ_ROWS = 200_000
NEAR_TOL = 1e-5
EQ_BLOCK = "__equalities__"


@dataclass(frozen=True)
class Block:
    """``embedded`` marks the real form [[A, -B], [B, A]] of a complex Hermitian
    block; the solver then keeps its iterates in that form and halves its work."""

    name: str
    dim: int
    diagonal: bool = False
    embedded: bool = False


@dataclass
class SdpProblem:
    """Immutable-by-convention SDP data.

    ``entries`` holds five parallel arrays ``(mat, blk, row, col, val)`` with
    ``row <= col``; ``mat = 0`` is F_0, ``mat = i`` is F_i (1-based like SDPA).
    """

    blocks: tuple
    c: np.ndarray
    mat: np.ndarray
    blk: np.ndarray
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray
    offset: float = 0.0
    sense: str = "min"
    eq_a: sp.csr_matrix | None = None
    eq_b: np.ndarray | None = None
    var_names: tuple | None = None

    @property
    def m(self) -> int:
        return len(self.c)

    @property
    def n_eq(self) -> int:
        return 0 if self.eq_a is None else self.eq_a.shape[0]

    @property
    def total_dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def block_index(self, name: str) -> int:
        for k, b in enumerate(self.blocks):
            if b.name == name:
                return k
        raise KeyError(name)

    def dense_blocks(self, x: np.ndarray) -> list[np.ndarray]:
        """X(x) = Σ x_i F_i - F_0 per block."""
        out = [np.zeros((b.dim, b.dim)) for b in self.blocks]
        coef = np.concatenate(([-1.0], np.asarray(x, dtype=float)))[self.mat]
        v = coef * self.val
        for k in range(len(self.blocks)):
            sel = self.blk == k
            r, cc, vv = self.row[sel], self.col[sel], v[sel]
            np.add.at(out[k], (r, cc), vv)
            off = r != cc
            np.add.at(out[k], (cc[off], r[off]), vv[off])
        return out

    def matrix(self, i: int, k: int) -> np.ndarray:
        """Dense F_i restricted to block k."""
        b = self.blocks[k]
        out = np.zeros((b.dim, b.dim))
        sel = (self.mat == i) & (self.blk == k)
        r, cc, vv = self.row[sel], self.col[sel], self.val[sel]
        np.add.at(out, (r, cc), vv)
        off = r != cc
        np.add.at(out, (cc[off], r[off]), vv[off])
        return out

    def objective(self, x) -> float:
        return float(self.c @ x) + self.offset


class SdpBuilder:
    """Accumulates entries; duplicate coordinates are summed on build."""

    def __init__(self, m: int, sense: str = "min"):
        if sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        self.m = m
        self.sense = sense
        self.blocks: list[Block] = []
        self.c = np.zeros(m)
        self.offset = 0.0
        self._e: list[tuple] = []
        self._eq: list[tuple] = []
        self.var_names = None

    def add_block(self, name: str, dim: int, diagonal: bool = False, embedded: bool = False) -> int:
        if dim <= 0:
            raise ValueError("block dimension must be positive")
        self.blocks.append(Block(name, dim, diagonal, embedded))
        return len(self.blocks) - 1

    def add(self, mat: int, blk: int, i: int, j: int, value: float):
        """Add ``value`` at (i, j) and, implicitly, (j, i) of F_mat."""
        if value == 0:
            return
        if i > j:
            i, j = j, i
        if self.blocks[blk].diagonal and i != j:
            raise ValueError("off-diagonal entry in a diagonal block")
        self._e.append((mat, blk, i, j, float(value)))

    def add_affine(self, blk: int, i: int, j: int, form: dict, sign: float = 1.0):
        """Add ``sign * form`` at (i, j); ``form`` maps variable index -> coefficient, -1 -> constant."""
        for key, v in form.items():
            if key == -1:
                # X = Σ x F - F0, so constants go into F0 with flipped sign
                self.add(0, blk, i, j, -sign * float(v))
            else:
                self.add(key + 1, blk, i, j, sign * float(v))

    def add_hermitian(self, name: str, r: int, entries: dict) -> int:
        """Add an r×r Hermitian affine block.

        ``entries[(p, q)] = (re_form, im_form)`` for p <= q. The block is stored
        as its real form [[Re, -Im], [Im, Re]] only when some imaginary part is
        present.
        """
        if any(im for _, im in entries.values()):
            blk = self.add_block(name, 2 * r, embedded=True)
            for (p, q), (fr, fi) in entries.items():
                self.add_affine(blk, p, q, fr)
                self.add_affine(blk, r + p, r + q, fr)
                if fi:
                    self.add_affine(blk, p, r + q, fi, -1.0)
                    if p != q:
                        self.add_affine(blk, q, r + p, fi, 1.0)
        else:
            blk = self.add_block(name, r)
            for (p, q), (fr, _) in entries.items():
                self.add_affine(blk, p, q, fr)
        return blk

    def add_equality(self, coeffs: dict, rhs: float):
        self._eq.append((dict(coeffs), float(rhs)))

    def build(self) -> SdpProblem:
        if self._e:
            arr = np.array([e[:4] for e in self._e], dtype=np.int64)
            vals = np.array([e[4] for e in self._e])
            key = np.lexsort((arr[:, 3], arr[:, 2], arr[:, 1], arr[:, 0]))
            arr, vals = arr[key], vals[key]
            uniq, inv = np.unique(arr, axis=0, return_inverse=True)
            summed = np.zeros(len(uniq))
            np.add.at(summed, inv.ravel(), vals)
            keep = summed != 0
            arr, vals = uniq[keep], summed[keep]
        else:
            arr, vals = np.zeros((0, 4), dtype=np.int64), np.zeros(0)
        eq_a = eq_b = None
        if self._eq:
            rows, cols, data = [], [], []
            for r, (coeffs, _) in enumerate(self._eq):
                for i, v in coeffs.items():
                    rows.append(r)
                    cols.append(i)
                    data.append(v)
            eq_a = sp.csr_matrix((data, (rows, cols)), shape=(len(self._eq), self.m))
            eq_b = np.array([b for _, b in self._eq])
        return SdpProblem(
            tuple(self.blocks),
            self.c.copy(),
            arr[:, 0].copy(),
            arr[:, 1].copy(),
            arr[:, 2].copy(),
            arr[:, 3].copy(),
            vals,
            float(self.offset),
            self.sense,
            eq_a,
            eq_b,
            None if self.var_names is None else tuple(self.var_names),
        )


@dataclass
class Solution:
    x: np.ndarray
    X: list
    Y: list
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    gap: float
    iterations: int
    status: str
    wall_time: float = 0.0
    history: list = field(default_factory=list)
    dual_eq: np.ndarray | None = None
    relax: float = 0.0

    @property
    def value(self) -> float:
        return self.primal_objective


# -- interior point ------------------------------------------------------------


class _Data:
    """Per-block sparse vec(F_i) columns for the reduced problem."""

    def __init__(self, p: SdpProblem, x0: np.ndarray, null: np.ndarray | None):
        self.dims = [b.dim for b in p.blocks]
        self.embedded = [b.embedded and b.dim % 2 == 0 for b in p.blocks]
        m_full = p.m
        self.A = []
        self.F0 = []
        for k, d in enumerate(self.dims):
            sel = p.blk == k
            mat, r, cc, v = p.mat[sel], p.row[sel], p.col[sel], p.val[sel]
            off = r != cc
            rows = np.concatenate((r * d + cc, (cc * d + r)[off]))
            cols = np.concatenate((mat, mat[off]))
            vals = np.concatenate((v, v[off]))
            full = sp.csc_matrix((vals, (rows, cols)), shape=(d * d, m_full + 1))
            f0 = full[:, 0].toarray().ravel()
            fi = full[:, 1:]
            if x0 is not None:
                # x = x0 + N z, so F0 shifts by the particular solution
                f0 = f0 - fi @ x0
            if null is not None:
                fi = sp.csc_matrix(fi @ null)
            self.F0.append(f0.reshape(d, d))
            self.A.append(sp.csc_matrix(fi))
        self.m = self.A[0].shape[1] if self.A else 0
        self.active = [np.flatnonzero(np.diff(a.indptr)) for a in self.A]
        self._gram = None
        self._cplx = {}

    def complex_cols(self, k: int) -> sp.csc_matrix:
        if k not in self._cplx:
            self._cplx[k] = _complex_columns(self.A[k], self.dims[k])
        return self._cplx[k]

    def gram_solve(self, r):
        """Minimal-norm w with <F_i, Σ_j w_j F_j> = r_i (Gram matrix factored once)."""
        if self._gram is None:
            g = sum((a.T @ a) for a in self.A).toarray()
            g += 1e-14 * max(1.0, np.abs(np.diag(g)).max()) * np.eye(self.m)
            try:
                self._gram = sla.cho_factor(g, lower=True)
            except np.linalg.LinAlgError:
                self._gram = False
        if self._gram is False:
            return None
        return sla.cho_solve(self._gram, r)

    def lin(self, x) -> list[np.ndarray]:
        return [(a @ x).reshape(d, d) for a, d in zip(self.A, self.dims)]

    def adj(self, mats) -> np.ndarray:
        out = np.zeros(self.m)
        for a, mmat in zip(self.A, mats):
            out += a.T @ mmat.ravel()
        return out


def _inv_psd(mat):
    c, low = sla.cho_factor(mat, lower=True)
    return sla.cho_solve((c, low), np.eye(mat.shape[0]))


def _max_step(mat, dmat) -> float:
    """Largest α with mat + α·dmat ⪰ 0 (inf if unbounded)."""
    try:
        low = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return 0.0
    t = sla.solve_triangular(low, dmat, lower=True)
    t = sla.solve_triangular(low, t.T, lower=True)
    lam = np.linalg.eigvalsh((t + t.T) / 2)[0]
    return math.inf if lam >= 0 else -1.0 / lam


def _complex_columns(a: sp.csc_matrix, d: int) -> sp.csc_matrix:
    """Columns of an embedded block as complex h×h matrices (A + iB from [[A,-B],[B,A]])."""
    h = d // 2
    coo = a.tocoo()
    p, q = np.divmod(coo.row, d)
    left = q < h
    top = left & (p < h)
    bottom = left & (p >= h)
    rows = np.concatenate((p[top] * h + q[top], (p[bottom] - h) * h + q[bottom]))
    vals = np.concatenate((coo.data[top], 1j * coo.data[bottom]))
    cols = np.concatenate((coo.col[top], coo.col[bottom]))
    return sp.csc_matrix((vals, (rows, cols)), shape=(h * h, a.shape[1]))


def _schur(data: _Data, Xinv, Y, chunk: int = 64) -> np.ndarray:
    """B_ij = <F_i, X^-1 F_j Y>, one sparse outer-product sum per column.

    Embedded blocks are handled in complex arithmetic at half the size,
    since the real embedding is an algebra homomorphism.
    """
    m = data.m
    B = np.zeros((m, m))
    for k, (xi, y, d) in enumerate(zip(Xinv, Y, data.dims)):
        a = data.A[k]
        if a.nnz == 0:
            continue
        if data.embedded[k]:
            h = d // 2
            a = data.complex_cols(k)
            xi = xi[:h, :h] + 1j * xi[h:, :h]
            y = y[:h, :h] + 1j * y[h:, :h]
            at = a.conj().T.tocsr()
            dtype, scale = complex, 2.0
        else:
            h = d
            at = a.T.tocsr()
            dtype, scale = float, 1.0
        ip, ix, dv = a.indptr, a.indices, a.data
        for s in range(0, m, chunk):
            e = min(s + chunk, m)
            W = np.zeros((e - s, h, h), dtype=dtype)
            for i in range(s, e):
                lo, hi = ip[i], ip[i + 1]
                if lo == hi:
                    continue
                r = ix[lo:hi]
                W[i - s] = xi[:, r // h] @ (dv[lo:hi, None] * y[r % h, :])
            prod = at @ W.reshape(e - s, h * h).T
            B[:, s:e] += scale * (prod.real if dtype is complex else prod)
    return (B + B.T) / 2


def _project(mats, embedded):
    """Symmetrize, and restore the embedded form where it applies."""
    out = []
    for x, emb in zip(mats, embedded):
        x = (x + x.T) / 2
        if emb:
            h = x.shape[0] // 2
            a = (x[:h, :h] + x[h:, h:]) / 2
            b = (x[h:, :h] - x[:h, h:]) / 2
            x = np.block([[a, -b], [b, a]])
        out.append(x)
    return out


def solve(
    p: SdpProblem,
    tol: float = 1e-8,
    max_iter: int = 100,
    gamma: float = 0.98,
    init_scale: float | tuple | None = None,
    verbose: bool = False,
    relax: float = 0.0,
) -> Solution:
    """Infeasible primal-dual path following with the HKM direction and
    Mehrotra predictor-corrector steps.

    ``relax > 0`` solves with X ⪰ -relax·I instead, which gives moment
    problems without a strictly feasible point an interior. The returned Y is
    still feasible for the original dual and every reported number refers to
    the original problem.
    """
    t0 = time.perf_counter()
    if not p.blocks:
        raise SolverError("problem has no blocks")
    if any(b.dim > MAX_BLOCK_DIM for b in p.blocks) or p.total_dim > MAX_BLOCK_DIM * 4:
        raise ResourceError(f"block dimensions {[b.dim for b in p.blocks]} exceed the cap")
    if p.n_eq > MAX_EQ_ROWS:
        raise ResourceError(f"{p.n_eq} equality rows exceed the cap {MAX_EQ_ROWS}")
    sign = 1.0 if p.sense == "min" else -1.0
    c_full = sign * p.c

    x0 = null = None
    c = c_full
    off = 0.0
    if p.n_eq:
        a_eq = p.eq_a.toarray()
        x0 = np.linalg.lstsq(a_eq, p.eq_b, rcond=None)[0]
        if np.linalg.norm(a_eq @ x0 - p.eq_b) > 1e-9 * (1 + np.linalg.norm(p.eq_b)):
            raise SolverError("equality constraints are inconsistent")
        null = sla.null_space(a_eq)
        c = null.T @ c_full
        off = float(c_full @ x0)
    data = _Data(p, x0, null)
    if relax:
        data.F0 = [f - relax * np.eye(f.shape[0]) for f in data.F0]
    m = data.m
    dims = data.dims
    ntot = sum(dims)

    def lift(z):
        if null is None:
            return z
        return x0 + null @ z

    F0 = data.F0
    history = []
    if m == 0:
        X = [-f for f in F0]
        feas = all(np.linalg.eigvalsh(x)[0] >= -tol for x in X)
        Y = [np.zeros((d, d)) for d in dims]
        x = lift(np.zeros(0))
        return _finish(p, x, X, Y, 0, "optimal" if feas else "infeasible", t0, history, sign, relax)

    scale = init_scale
    if isinstance(scale, tuple):
        scale, yscale = scale
    elif scale is None:
        fn = max(1.0, max(np.abs(f).max() for f in F0))
        cn = max(1.0, np.abs(c).max())
        scale = 10.0 * max(fn, cn, math.sqrt(ntot))
        yscale = cn
    else:
        yscale = scale
    z = np.zeros(m)
    X = [scale * np.eye(d) for d in dims]
    Y = [yscale * np.eye(d) for d in dims]
    f0n = 1.0 + math.sqrt(sum(np.sum(f * f) for f in F0))
    cnorm = 1.0 + np.linalg.norm(c)
    status = "max_iter"
    it = 0
    best = None
    bests: list = []
    for it in range(1, max_iter + 1):
        AX = data.lin(z)
        P = [ax - f0 - xx for ax, f0, xx in zip(AX, F0, X)]  # Σ z F - F0 - X
        dres = c - data.adj(Y)
        pobj = float(c @ z)
        dobj = float(sum(np.sum(f * y) for f, y in zip(F0, Y)))
        pinf = math.sqrt(sum(np.sum(q * q) for q in P)) / f0n
        dinf = np.linalg.norm(dres) / cnorm
        gap = abs(pobj - dobj) / max(1.0, abs(pobj), abs(dobj))
        mu = sum(np.sum(xx * y) for xx, y in zip(X, Y)) / ntot
        history.append({"iter": it, "pobj": pobj + off, "dobj": dobj + off, "pinf": pinf, "dinf": dinf, "gap": gap, "mu": mu})
        if verbose:
            print(f"{it:3d} p={pobj + off:+.10e} d={dobj + off:+.10e} pinf={pinf:.1e} dinf={dinf:.1e} gap={gap:.1e}")
        score = max(pinf, dinf, gap)
        if best is None or score < best[0]:
            best = (score, z.copy(), [q.copy() for q in X], [q.copy() for q in Y])
        if pinf <= tol and dinf <= tol and gap <= tol:
            status = "optimal"
            break
        bests.append(best[0])
        if len(bests) > 4 and best[0] <= NEAR_TOL and bests[-1] > 0.5 * bests[-4]:
            # progress has stalled at a usable accuracy
            status = "near_optimal"
            break
        try:
            Xinv = [_inv_psd(xx) for xx in X]
        except np.linalg.LinAlgError:
            status = "numerical_failure"
            break
        B = _schur(data, Xinv, Y)
        try:
            chol = sla.cho_factor(B, lower=True)
            solve_b = lambda r: sla.cho_solve(chol, r)  # noqa: E731
        except np.linalg.LinAlgError:
            reg = 1e-12 * max(1.0, np.abs(np.diag(B)).max())
            try:
                chol = sla.cho_factor(B + reg * np.eye(m), lower=True)
                solve_b = lambda r: sla.cho_solve(chol, r)  # noqa: E731
            except np.linalg.LinAlgError:
                status = "numerical_failure"
                break

        def direction(R):
            # dY = X^{-1}(R - dX Y), dX = Σ dz F + P
            G = [xi @ (r - q @ y) for xi, r, q, y in zip(Xinv, R, P, Y)]
            rhs = data.adj([(g + g.T) / 2 for g in G]) - dres
            dz = solve_b(rhs)
            dX = [l + q for l, q in zip(data.lin(dz), P)]
            dY = [xi @ (r - dx @ y) for xi, r, dx, y in zip(Xinv, R, dX, Y)]
            dY = [(d + d.T) / 2 for d in dY]
            # the Schur solve loses accuracy near the end; put dY back on the dual-feasible set
            w = data.gram_solve(dres - data.adj(dY))
            if w is not None:
                dY = [d + e for d, e in zip(dY, data.lin(w))]
            return dz, dX, dY

        R = [-xx @ y for xx, y in zip(X, Y)]
        dzp, dXp, dYp = direction(R)
        ap = min(1.0, min(_max_step(xx, d) for xx, d in zip(X, dXp)))
        ad = min(1.0, min(_max_step(y, d) for y, d in zip(Y, dYp)))
        mu_aff = sum(np.sum((xx + ap * dx) * (y + ad * dy)) for xx, dx, y, dy in zip(X, dXp, Y, dYp)) / ntot
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0
        R = [sigma * mu * np.eye(d) - xx @ y - dx @ dy for d, xx, y, dx, dy in zip(dims, X, Y, dXp, dYp)]
        dz, dX, dY = direction(R)
        ap = min(1.0, gamma * min(_max_step(xx, d) for xx, d in zip(X, dX)))
        ad = min(1.0, gamma * min(_max_step(y, d) for y, d in zip(Y, dY)))
        if ap < 1e-10 and ad < 1e-10:
            status = "stalled"
            break
        z = z + ap * dz
        X = [xx + ap * d for xx, d in zip(X, dX)]
        X = _project(X, data.embedded)
        Y = [y + ad * d for y, d in zip(Y, dY)]
        Y = _project(Y, data.embedded)
    if status not in ("optimal",) and best is not None:
        _, z, X, Y = best
    x = lift(z)
    return _finish(p, x, X, Y, it, status, t0, history, sign, relax)


def _finish(p: SdpProblem, x, X, Y, it, status, t0, history, sign, relax=0.0) -> Solution:
    """Recompute every reported number from the returned matrices."""
    Xc = p.dense_blocks(x)
    c = sign * p.c
    F0 = [p.matrix(0, k) for k in range(len(p.blocks))]
    pres = math.sqrt(sum(np.sum(np.minimum(np.linalg.eigvalsh(xx), 0.0) ** 2) for xx in Xc))
    # dual residual r_i = c_i - <F_i, Y>, in the problem's own sense
    r = c - _adj_full(p, Y)
    dual_eq = None
    if p.n_eq:
        # multipliers of the equality rows absorb the residual in their span
        a = p.eq_a.toarray()
        dual_eq = np.linalg.lstsq(a.T, r, rcond=None)[0]
        r = r - a.T @ dual_eq
    pobj = float(c @ x)
    dobj = float(sum(np.sum(f * y) for f, y in zip(F0, Y)))
    if dual_eq is not None:
        dobj += float(dual_eq @ p.eq_b)
    dres = float(np.linalg.norm(r))
    gap = abs(pobj - dobj) / max(1.0, abs(pobj), abs(dobj))
    return Solution(
        x=np.asarray(x, dtype=float),
        X=Xc,
        Y=[np.asarray(y) for y in Y],
        primal_objective=sign * pobj + p.offset,
        dual_objective=sign * dobj + p.offset,
        primal_residual=pres,
        dual_residual=dres,
        gap=gap,
        iterations=it,
        status=status,
        wall_time=time.perf_counter() - t0,
        history=history,
        dual_eq=dual_eq,
        relax=relax,
    )


def weak_duality(p: SdpProblem, s: Solution) -> tuple[float, float]:
    """``(gap, floor)`` with gap = primal - dual in the minimizing sense.

    gap equals <X, Y> + r·x + μ·(A x - b) exactly, so with Y ⪰ 0 it can be no
    lower than floor = Σ_b min(0, λ_min(X_b))·tr(Y_b) - |r·x| - |μ·(A x - b)|.
    floor is 0 up to rounding for an exactly feasible x, and about
    -relax·tr(Y) for a relaxed solve.
    """
    sign = 1.0 if p.sense == "min" else -1.0
    gap = sign * (s.primal_objective - s.dual_objective)
    floor = 0.0
    for xx, yy in zip(p.dense_blocks(s.x), s.Y):
        floor += min(0.0, float(np.linalg.eigvalsh(xx)[0])) * max(0.0, float(np.trace(yy)))
        floor += min(0.0, float(np.linalg.eigvalsh(yy)[0])) * float(np.abs(xx).sum())
    r = sign * p.c - _adj_full(p, s.Y)
    if p.n_eq and s.dual_eq is not None:
        r = r - p.eq_a.T @ s.dual_eq
        floor -= abs(float(s.dual_eq @ (p.eq_a @ s.x - p.eq_b)))
    floor -= abs(float(r @ s.x))
    return gap, floor


def _adj_full(p: SdpProblem, Y) -> np.ndarray:
    """<F_i, Y> for i = 1..m over the unreduced problem."""
    out = np.zeros(p.m)
    sel = p.mat > 0
    mat, blk, r, cc, v = p.mat[sel], p.blk[sel], p.row[sel], p.col[sel], p.val[sel]
    for k in range(len(p.blocks)):
        s = blk == k
        y = Y[k]
        w = np.where(r[s] == cc[s], 1.0, 2.0) * v[s] * y[r[s], cc[s]]
        np.add.at(out, mat[s] - 1, w)
    return out


# -- dual certificate ---------------------------------------------------------


@dataclass
class Certificate:
    status: str
    margin: float | None
    bound: float | None
    dual_objective: float
    block_min_eig: list
    block_terms: list
    residual_term: float


def certify_dual(p: SdpProblem, s: Solution, trace_caps: Sequence, x_bounds=None) -> Certificate:
    """Rigor margin for the dual objective of a solved problem.

    margin = Σ_b max(0, -λ_min(Y_b))·cap_b + Σ_i |r_i|·xbound_i, where
    r_i = c_i - <F_i, Y> is the dual residual and xbound_i bounds |x_i| on the
    true feasible point. For ``min`` problems the certified bound is
    ``dual_objective - margin`` (a lower bound); for ``max`` problems
    ``dual_objective + margin`` (an upper bound).
    """
    if len(trace_caps) != len(p.blocks):
        raise ValueError("one trace cap per block is required")
    eigs = [float(np.linalg.eigvalsh(y)[0]) if y.size else 0.0 for y in s.Y]
    if any(cap is None for cap in trace_caps):
        return Certificate("residuals-only", None, None, s.dual_objective, eigs, [], math.nan)
    terms = [max(0.0, -e) * float(cap) for e, cap in zip(eigs, trace_caps)]
    sign = 1.0 if p.sense == "min" else -1.0
    r = sign * p.c - _adj_full(p, s.Y)
    if p.n_eq and s.dual_eq is not None:
        r = r - p.eq_a.T @ s.dual_eq
    if x_bounds is None:
        if np.any(r != 0):
            return Certificate("residuals-only", None, None, s.dual_objective, eigs, terms, math.nan)
        res_term = 0.0
    else:
        res_term = float(np.abs(r) @ np.broadcast_to(np.asarray(x_bounds, dtype=float), r.shape))
    margin = float(sum(terms)) + res_term
    bound = s.dual_objective - sign * margin
    return Certificate("certified", margin, bound, s.dual_objective, eigs, terms, res_term)


# -- SDPA files -----------------------------------------------------------------


def export_sdpa(p: SdpProblem, path: str | PathLike) -> None:
    """Write the sparse SDPA format.

    Metadata the format cannot carry (sense, offset, block names, equality
    rows) goes into ``*`` comment lines. Equality rows are also written as a
    diagonal block of paired inequalities so external solvers see the same
    feasible set. Floats use ``repr`` so a re-read is bit-exact.
    """
    if p.m == 0 or not p.blocks:
        raise InputError("refusing to export an empty problem (no variables or no blocks)")
    blocks = list(p.blocks)
    mat, blk, row, col, val = (a.tolist() for a in (p.mat, p.blk, p.row, p.col, p.val))
    lines = ["* sparse SDPA file written by gapcert", f"* sense {p.sense}", f"* offset {p.offset!r}"]
    for k, b in enumerate(blocks):
        lines.append(f"* block {k + 1} {b.name}")
        if b.embedded:
            lines.append(f"* embedded {k + 1}")
    if p.n_eq:
        a = p.eq_a.tocoo()
        k_eq = len(blocks) + 1
        lines.append(f"* equalities {p.n_eq} block {k_eq}")
        blocks.append(Block(EQ_BLOCK, 2 * p.n_eq, True))
        for r_, c_, v_ in sorted(zip(a.row.tolist(), a.col.tolist(), a.data.tolist())):
            for sgn, off in ((1.0, 0), (-1.0, p.n_eq)):
                mat.append(c_ + 1)
                blk.append(k_eq - 1)
                row.append(r_ + off)
                col.append(r_ + off)
                val.append(sgn * v_)
        for r_, b_ in enumerate(p.eq_b.tolist()):
            for sgn, off in ((1.0, 0), (-1.0, p.n_eq)):
                if b_:
                    mat.append(0)
                    blk.append(k_eq - 1)
                    row.append(r_ + off)
                    col.append(r_ + off)
                    val.append(sgn * b_)
    if p.var_names:
        for i, name in enumerate(p.var_names):
            lines.append(f"* var {i + 1} {name}")
    lines.append(str(p.m))
    lines.append(str(len(blocks)))
    lines.append(" ".join(str(-b.dim if b.diagonal else b.dim) for b in blocks))
    lines.append(" ".join(repr(float(v)) for v in p.c))
    order = sorted(range(len(val)), key=lambda t: (mat[t], blk[t], row[t], col[t]))
    for t in order:
        lines.append(f"{mat[t]} {blk[t] + 1} {row[t] + 1} {col[t] + 1} {val[t]!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sdpa(path: str | PathLike) -> SdpProblem:
    """Parse a sparse SDPA file; gapcert metadata comments are honoured if present."""
    meta_sense, meta_offset, names, eq_block, n_eq, var_names = "min", 0.0, {}, None, 0, {}
    embedded = set()
    body: list[str] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line[0] in '*"':
                tok = line[1:].split()
                if len(tok) >= 2 and tok[0] == "sense":
                    meta_sense = tok[1]
                elif len(tok) >= 2 and tok[0] == "offset":
                    meta_offset = float(tok[1])
                elif len(tok) >= 3 and tok[0] == "block":
                    names[int(tok[1]) - 1] = " ".join(tok[2:])
                elif len(tok) >= 4 and tok[0] == "equalities":
                    n_eq, eq_block = int(tok[1]), int(tok[3]) - 1
                elif len(tok) >= 2 and tok[0] == "embedded":
                    embedded.add(int(tok[1]) - 1)
                elif len(tok) >= 3 and tok[0] == "var":
                    var_names[int(tok[1]) - 1] = " ".join(tok[2:])
                continue
            body.append(line.replace(",", " ").replace("{", " ").replace("}", " ").replace("(", " ").replace(")", " "))
    try:
        m = int(body[0].split()[0])
        nb = int(body[1].split()[0])
        sizes = [int(float(t)) for t in body[2].split()[:nb]]
        c = np.array([float(t) for t in body[3].split()[:m]])
    except (IndexError, ValueError) as exc:
        raise InputError(f"{path}: malformed SDPA header ({exc})") from exc
    b = SdpBuilder(m, meta_sense)
    for k, s in enumerate(sizes):
        if k != eq_block:
            b.add_block(names.get(k, f"block{k + 1}"), abs(s), s < 0, k in embedded)
    b.c[:] = c
    b.offset = meta_offset
    eq_rows: dict[int, dict] = {}
    eq_rhs: dict[int, float] = {}
    for ln, line in enumerate(body[4:], start=5):
        tok = line.split()
        if len(tok) < 5:
            raise InputError(f"{path}: entry line {ln} has {len(tok)} fields")
        mat, blk, i, j = (int(t) for t in tok[:4])
        v = float(tok[4])
        if not (0 <= mat <= m and 1 <= blk <= nb):
            raise InputError(f"{path}: entry line {ln} out of range")
        if blk - 1 == eq_block:
            r_ = i - 1
            if r_ >= n_eq:
                continue  # mirrored half
            if mat == 0:
                eq_rhs[r_] = v
            else:
                eq_rows.setdefault(r_, {})[mat - 1] = v
            continue
        k = blk - 1 if eq_block is None or blk - 1 < eq_block else blk - 2
        b._e.append((mat, k, min(i, j) - 1, max(i, j) - 1, v))
    for r_ in range(n_eq):
        b.add_equality(eq_rows.get(r_, {}), eq_rhs.get(r_, 0.0))
    if var_names:
        b.var_names = [var_names.get(i, "") for i in range(m)]
    return b.build()
