"""Upper bounds on λ1(H), both posed in Pauli-string coordinates.

``lasserre_upper`` minimizes the energy of P*P (normalized) over polynomials
P of locality <= d, which is a trace-one PSD Gram matrix G against
K[u, v] = φ(u v H), φ the normalized trace. Any PSD trace-one G is a real
state, so its energy is an upper bound on λ1 by construction.

``eeb_upper`` maximizes φ̃(H) over pseudo-states satisfying positivity, the
stationarity equalities φ̃([H, b]) = 0 and the zero-temperature
energy-entropy-balance block [φ̃(u [H, v])] ⪰ 0. The ground state is feasible,
so the maximum is an upper bound on λ1.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from gmpy2 import mpq

from .errors import DegreeError, DomainError, SolverError
from .exact import ExactComplex
from .linalg import SparseEchelon
from .pauli import PauliPoly, PauliString, all_strings, mul_strings, to_matrix
from .report import BoundReport
from .sdp import SdpBuilder, certify_dual, solve

__all__ = [
    "PauliWordBasis",
    "PseudoState",
    "lasserre_upper",
    "eeb_upper",
    "EebProblem",
    "build_eeb",
    "ground_state_moments",
]


class PauliWordBasis:
    """Pauli strings of support <= d, identity first, in canonical order."""

    def __init__(self, n: int, d: int):
        if d < 0:
            raise DomainError("basis degree must be >= 0")
        self.n = n
        self.d = min(d, n)
        self.strings = all_strings(n, self.d)
        self.index = {s: i for i, s in enumerate(self.strings)}

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.strings)

    def __getitem__(self, i: int) -> PauliString:
        return self.strings[i]

    def product(self, i: int, j: int) -> tuple[ExactComplex, PauliString]:
        return mul_strings(self.strings[i], self.strings[j])


@dataclass(frozen=True)
class PseudoState:
    """Real values y_P = φ̃(P) for every string with support <= cap."""

    n: int
    cap: int
    values: dict

    def __getitem__(self, p: PauliString) -> float:
        if p.weight > self.cap:
            raise DegreeError(f"{p.label()} has support {p.weight} beyond the pseudo-state cap {self.cap}")
        if p.is_identity:
            return 1.0
        return self.values[p]

    def expect(self, h: PauliPoly) -> complex:
        return sum(_c(c) * self[p] for p, c in h.terms.items())


def _c(x: ExactComplex) -> complex:
    return complex(float(x.re), float(x.im))


# -- Lasserre ------------------------------------------------------------------


def _lasserre_matrix(h: PauliPoly, basis: PauliWordBasis) -> np.ndarray:
    N = len(basis)
    K = np.zeros((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            ph, w = basis.product(i, j)
            c = h.terms.get(w)
            if c is not None:
                # φ(u v H) = phase · h_w since φ(w P) = δ_{w,P}
                K[i, j] = _c(ph * c)
    return K


def lasserre_upper(h: PauliPoly, d: int, tol: float = 1e-9) -> BoundReport:
    """Level-d reweighting bound; B_d ≥ λ1 and B_d is non-increasing in d."""
    t0 = time.perf_counter()
    if d < 0:
        raise DomainError("degree d must be >= 0")
    if not h.is_hermitian():
        raise DomainError("Hamiltonian must have real Pauli coefficients")
    basis = PauliWordBasis(h.n, d)
    N = len(basis)
    K = _lasserre_matrix(h, basis)
    # maximize t subject to K - t·I ⪰ 0; the dual variable is the Gram matrix G
    b = SdpBuilder(1, "max")
    entries = {}
    for p in range(N):
        for q in range(p, N):
            fr = {-1: K[p, q].real} if K[p, q].real else {}
            fi = {-1: K[p, q].imag} if K[p, q].imag else {}
            if p == q:
                fr[0] = -1.0
            entries[p, q] = (fr, fi)
    blk = b.add_hermitian("gram", N, entries)
    b.c[0] = 1.0
    b.var_names = ["t"]
    prob = b.build()
    sol = solve(prob, tol=tol)
    Y = sol.Y[0]
    if prob.blocks[blk].embedded:
        Z = Y[:N, :N] + 1j * Y[N:, :N]
    else:
        Z = Y.astype(complex)
    # repair: clip to PSD and renormalize, then the energy of G = conj(Z) is exact up to rounding
    Z = (Z + Z.conj().T) / 2
    w, V = np.linalg.eigh(Z)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        # degenerate dual; fall back to the minimizing eigenvector of K
        w, V = np.zeros(N), np.linalg.eigh(K)[1]
        w[0] = 1.0
    Z = (V * w) @ V.conj().T
    Z /= np.trace(Z).real
    energy = float(np.sum(K * Z.conj()).real)
    hnorm = sum(abs(_c(c)) for c in h.terms.values())
    margin = 64 * np.finfo(float).eps * N * (1 + hnorm)
    return BoundReport(
        value=sol.primal_objective,
        dual_value=energy,
        certified_bound=energy + margin,
        rigor_margin=margin,
        primal_residual=sol.primal_residual,
        dual_residual=sol.dual_residual,
        gap=sol.gap,
        level=d,
        status=sol.status,
        wall_time=time.perf_counter() - t0,
        method="lasserre",
        iterations=sol.iterations,
        stats={"basis_size": N, "eig_min_K": float(np.linalg.eigvalsh(K)[0])},
        witness=Z.conj(),
    )


# -- energy-entropy balance ----------------------------------------------------


def _commutator_terms(h: PauliPoly, v: PauliString) -> list:
    """[H, v] as (coefficient, string) pairs; only anticommuting terms survive."""
    out = {}
    for p, c in h.terms.items():
        ph1, w = mul_strings(p, v)
        ph2, _ = mul_strings(v, p)
        coef = (ph1 - ph2) * c
        if coef.re or coef.im:
            out[w] = out.get(w, ExactComplex(0)) + coef
    return [(c, w) for w, c in out.items() if c.re or c.im]


@dataclass
class EebProblem:
    """Reduced EEB program together with the maps back to pseudo-states."""

    h: PauliPoly
    d: int
    cap: int
    strings: list
    param_keys: list
    sdp: object
    trace_caps: list
    x_bounds: np.ndarray
    echelon: SparseEchelon
    eq_rows: list
    stats: dict

    def pseudo_state(self, x: np.ndarray) -> PseudoState:
        pidx = self._pidx
        vals = {}
        for k, s in enumerate(self.strings):
            nf = self.echelon.normal_form(k)
            vals[s] = sum(float(c) * (1.0 if key == -1 else x[pidx[key]]) for key, c in nf.items())
        return PseudoState(self.h.n, self.cap, vals)

    @property
    def _pidx(self) -> dict:
        return {k: i for i, k in enumerate(self.param_keys)}

    def params_from_moments(self, y: dict) -> np.ndarray:
        """Parameter vector of a full moment vector y (string -> value)."""
        return np.array([y[self.strings[k]] for k in self.param_keys])

    def equality_residual(self, y: dict) -> float:
        """Largest |φ̃([H, b])| over the stationarity rows for moments y."""
        worst = 0.0
        for row in self.eq_rows:
            val = sum(float(c) * (1.0 if k == -1 else y[self.strings[k]]) for k, c in row.items())
            worst = max(worst, abs(val))
        return worst

    def block_min_eigs(self, x: np.ndarray) -> list:
        return [float(np.linalg.eigvalsh(m)[0]) for m in self.sdp.dense_blocks(x)]


def build_eeb(h: PauliPoly, d: int, cap: int | None = None) -> EebProblem:
    if d < 1:
        raise DomainError("eeb_upper needs d >= 1")
    if not h.is_hermitian():
        raise DomainError("Hamiltonian must have real Pauli coefficients")
    n = h.n
    deg_h = h.degree
    required = min(n, 2 * d + max(deg_h, 1) - 1)
    if cap is None:
        cap = required
    elif cap < required:
        raise DegreeError(f"pseudo-state cap {cap} is too small: degree {d} with deg(H) = {deg_h} needs cap {required}")
    cap = min(cap, n)
    strings = all_strings(n, cap)[1:]
    key = {s: k for k, s in enumerate(strings)}
    ident = PauliString.identity(n)

    def k_of(w: PauliString) -> int:
        if w == ident:
            return -1
        if w not in key:
            raise DegreeError(f"{w.label()} leaves the pseudo-state cap {cap}")
        return key[w]

    # stationarity φ̃([H, b]) = 0 for deg b <= 2d; y is real so each complex row gives two real rows
    ech = SparseEchelon()
    eq_rows = []
    for b in all_strings(n, min(2 * d, n))[1:]:
        re_row: dict = {}
        im_row: dict = {}
        for c, w in _commutator_terms(h, b):
            k = k_of(w)
            if c.re:
                re_row[k] = re_row.get(k, 0) + c.re
            if c.im:
                im_row[k] = im_row.get(k, 0) + c.im
        for row in (re_row, im_row):
            row = {k: v for k, v in row.items() if v}
            if row:
                eq_rows.append(row)
                ech.add_row(row)
    if -1 in ech:
        raise SolverError("stationarity equalities are inconsistent with y_I = 1")
    param_keys = sorted(k for k in range(len(strings)) if k not in ech)
    pidx = {k: i for i, k in enumerate(param_keys)}

    def y_form(w: PauliString) -> dict:
        k = k_of(w)
        if k == -1:
            return {-1: mpq(1)}
        return {(pidx[j] if j >= 0 else -1): v for j, v in ech.normal_form(k).items()}

    def add(dst: dict, coef, f: dict):
        for j, v in f.items():
            nv = dst.get(j, 0) + coef * v
            if nv:
                dst[j] = nv
            else:
                dst.pop(j, None)

    def cform(terms) -> tuple[dict, dict]:
        """(Re, Im) forms of Σ coef·y_w."""
        re_f: dict = {}
        im_f: dict = {}
        for c, w in terms:
            f = y_form(w)
            if c.re:
                add(re_f, c.re, f)
            if c.im:
                add(im_f, c.im, f)
        return re_f, im_f

    basis = PauliWordBasis(n, d)
    N = len(basis)
    sdpb = SdpBuilder(len(param_keys), "max")
    sdpb.var_names = ["y[" + strings[k].label() + "]" for k in param_keys]
    caps = []
    moment = {}
    for p in range(N):
        for q in range(p, N):
            ph, w = basis.product(p, q)
            moment[p, q] = cform([(ph, w)])
    blk = sdpb.add_hermitian("moment", N, moment)
    copies = 2 if sdpb.blocks[blk].embedded else 1
    caps.append(copies * N * (1 + 1e-12))

    comm = [_commutator_terms(h, v) for v in basis]
    eeb = {}
    for p in range(N):
        u = basis[p]
        for q in range(N):
            terms = []
            for c, w in comm[q]:
                ph, z = mul_strings(u, w)
                terms.append((ph * c, z))
            eeb[p, q] = cform(terms)
    entries = {}
    for p in range(N):
        for q in range(p, N):
            fr, fi = eeb[p, q]
            gr, gi = eeb[q, p]
            if fr != gr or fi != {j: -v for j, v in gi.items()}:
                raise SolverError(f"EEB block not Hermitian after elimination at ({p}, {q})")
            if p == q and fi:
                raise SolverError("EEB block has a non-real diagonal entry")
            entries[p, q] = (fr, fi)
    hnorm = sum(abs(_c(c)) for p, c in h.terms.items() if not p.is_identity)
    if any(fr or fi for fr, fi in entries.values()):
        blk = sdpb.add_hermitian("eeb", N, entries)
        copies = 2 if sdpb.blocks[blk].embedded else 1
        caps.append(copies * N * 2.0 * hnorm * (1 + 1e-12))
    obj_re, obj_im = cform([(c, p) for p, c in h.terms.items()])
    for j, v in obj_re.items():
        if j == -1:
            sdpb.offset += float(v)
        else:
            sdpb.c[j] += float(v)
    prob = sdpb.build()
    stats = {
        "cap": cap,
        "basis_size": N,
        "moments": len(strings),
        "parameters": len(param_keys),
        "equality_rows": len(eq_rows),
        "blocks": [(b.name, b.dim) for b in prob.blocks],
    }
    return EebProblem(h, d, cap, strings, param_keys, prob, caps, np.ones(len(param_keys)), ech, eq_rows, stats)


def eeb_upper(
    h: PauliPoly,
    d: int,
    cap: int | None = None,
    minimize: bool = False,
    tol: float = 1e-9,
    relax: float = 1e-8,
) -> BoundReport:
    """Zero-temperature EEB bound. ``minimize=True`` gives the (uncertified
    for this purpose) lower end of the same feasible set, for diagnostics."""
    t0 = time.perf_counter()
    prob = build_eeb(h, d, cap)
    sdp = prob.sdp
    if minimize:
        sdp = dataclasses.replace(sdp, sense="min")
    if sdp.m == 0:
        value = float(sdp.offset)
        return BoundReport(value, value, value, 0.0, 0.0, 0.0, 0.0, d, "optimal", time.perf_counter() - t0, "eeb", 0, prob.stats)
    sol = solve(sdp, tol=tol, relax=relax)
    if sol.status not in ("optimal", "near_optimal") and sol.gap > 1e-4:
        raise SolverError(f"EEB solve ended with status {sol.status}", solution=sol)
    # the caps and |y| <= 1 only need to hold at the true ground state, which they do
    cert = certify_dual(sdp, sol, prob.trace_caps, prob.x_bounds)
    return BoundReport(
        value=sol.primal_objective,
        dual_value=sol.dual_objective,
        certified_bound=cert.bound,
        rigor_margin=cert.margin,
        primal_residual=sol.primal_residual,
        dual_residual=sol.dual_residual,
        gap=sol.gap,
        level=d,
        status=sol.status,
        wall_time=time.perf_counter() - t0,
        method="eeb-min" if minimize else "eeb",
        iterations=sol.iterations,
        stats=prob.stats,
        certificate_status=cert.status,
        witness=prob.pseudo_state(sol.x),
    )


def ground_state_moments(h: PauliPoly, cap: int | None = None) -> dict:
    """y_P = <ψ|P|ψ> for the lowest eigenvector ψ (exact diagonalization)."""
    m = to_matrix(h)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    psi = v[:, 0]
    out = {}
    for s in all_strings(h.n, cap)[1:]:
        out[s] = float(np.real(psi.conj() @ (to_matrix(s) @ psi)))
    return out
