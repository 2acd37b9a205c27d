"""NPA relaxation whose value lower-bounds λ1(H) + λ2(H).

The program is posed over the generators S_i^a, T_ij^ab subject to the Lie
relations, the cubic eigenvalue constraint and two operator inequalities.
The moment functional E is reduced exactly before anything is handed to
the floating-point solver:

1. every row E[a q b] = 0 (q an equality, total degree <= 2k) goes into an
   exact echelon over words, so E only needs values on *standard* words;
2. E[1] = 1 and E[w*] = conj E[w] are eliminated over the reals, leaving
   free parameters that are the real or imaginary part of one standard-word
   moment each;
3. moment and localizing matrices are indexed by words that are standard
   modulo the relations of degree <= k, which loses nothing.

Optional cliques restrict all of the above to letters supported inside
given site sets; any such restriction is still a valid lower bound.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import DomainError, InputError, ResourceError, SolverError
from .exact import ExactComplex
from .genrel import expand, g_map, gen_relations, gp_map
from .linalg import SparseEchelon
from .ncpoly import DEFAULT_CONFIG, HermiticityConfig, Letter, NcPoly, S, T, alphabet
from .oracle import pair_bound
from .pauli import PauliPoly
from .report import BoundReport
from .sdp import SdpBuilder, SdpProblem, Solution, certify_dual, solve

__all__ = [
    "Inequality",
    "ConstraintSystem",
    "encode_hamiltonian",
    "build_system",
    "NpaProblem",
    "MomentProblem",
    "build_npa",
    "BoundReport",
    "prepare_lower",
    "solve_lower",
    "single_site_cliques",
    "support_cliques",
    "MAX_UNIVERSE",
]

MAX_UNIVERSE = 400_000
MAX_ROWS = 2_000_000


@dataclass(frozen=True)
class Inequality:
    """``poly ⪰ 0`` as an operator, with ``norm`` an upper bound on ||poly||."""

    name: str
    poly: NcPoly
    norm: Fraction
    sites: tuple


@dataclass
class ConstraintSystem:
    n: int
    config: HermiticityConfig
    equalities: list
    equality_tags: list
    inequalities: list
    C4: Fraction
    pair_constant: Fraction
    relation_counts: dict

    @property
    def letter_bounds(self) -> dict:
        """Operator-norm bound of each generator on the target representation."""
        t = math.sqrt(float(self.pair_constant)) * (1 + 1e-15)
        return {"S": 2.0, "T": t}


def encode_hamiltonian(h: PauliPoly, config: HermiticityConfig = DEFAULT_CONFIG, encoding: str = "g"):
    """Objective NcPoly Σ c_P expand(g_map(P)) and the shift 2·c_I.

    ``encoding="gp"`` uses gp_map instead, which is one degree lower on every
    string of weight >= 2 (a 2-local term becomes a single T letter).
    """
    if encoding not in ("g", "gp"):
        raise InputError(f"unknown encoding {encoding!r}")
    lift = g_map if encoding == "g" else gp_map
    if h.n < 2:
        raise DomainError("the lower-bound pipeline needs n >= 2")
    if not h.is_hermitian():
        raise DomainError("Hamiltonian must have real Pauli coefficients")
    obj = NcPoly()
    shift = Fraction(0)
    for p, c in h.terms.items():
        if p.is_identity:
            shift = 2 * Fraction(int(c.re.numerator), int(c.re.denominator))
            continue
        obj = obj + expand(lift(p)).scale(c)
    if not config.t_hermitian:
        # T* is a separate letter here; the Hermitian part has the same value on the target
        obj = (obj + obj.adjoint(config)).scale(ExactComplex(1, 0) / 2)
    return obj.normalize_letters(config), shift


def _cubic(i: int, a: int) -> NcPoly:
    x = Letter(S(i, a))
    return NcPoly({(x, x, x): 1, (x,): -4})


def build_system(
    n: int,
    config: HermiticityConfig = DEFAULT_CONFIG,
    pair_mode: str = "validated",
    relation_sites: Sequence[Iterable[int]] | None = None,
) -> ConstraintSystem:
    """Assemble the equalities and operator inequalities.

    ``relation_sites`` limits relation generation to generators supported in
    each listed site set (the union is used); the default is all sites.
    """
    if n < 2:
        raise DomainError("build_system needs n >= 2")
    groups = [tuple(range(1, n + 1))] if relation_sites is None else [tuple(sorted(s)) for s in relation_sites]
    eqs, tags, seen = [], [], set()
    counts: dict = {}
    for g in groups:
        if len(g) < 2:
            continue
        rs = gen_relations(n, sites=g)
        for r in rs:
            poly = r.poly()
            key = poly.normalized().key()
            if key in seen:
                continue
            seen.add(key)
            eqs.append(poly)
            tags.append(r.family)
            counts[r.family] = counts.get(r.family, 0) + 1
    # single-site su(2) relations still matter when every group is a single site
    if all(len(g) < 2 for g in groups):
        for g in groups:
            (i,) = g
            for a in (1, 2, 3):
                for b in (1, 2, 3):
                    if a < b:
                        c = 6 - a - b
                        sign = 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1
                        x, y, z = Letter(S(i, a)), Letter(S(i, b)), Letter(S(i, c))
                        eqs.append(NcPoly({(x, y): 1, (y, x): -1, (z,): ExactComplex(0, -2 * sign)}))
                        tags.append("4a")
                        counts["4a"] = counts.get("4a", 0) + 1
    for i in range(1, n + 1):
        for a in (1, 2, 3):
            eqs.append(_cubic(i, a))
            tags.append("cubic")
    c4 = pair_bound(2)
    pc = pair_bound(n, pair_mode)
    ineqs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            terms = {(): ExactComplex(pc)}
            for a in (1, 2, 3):
                for b in (1, 2, 3):
                    t = T(i, j, a, b)
                    w = (config.adjoint_letter(Letter(t)), Letter(t))
                    terms[w] = ExactComplex(-1)
            ineqs.append(Inequality(f"pair_{i}_{j}", NcPoly(terms), Fraction(pc), (i, j)))
    terms = {(): ExactComplex(8 * (n - 1))}
    for i in range(1, n + 1):
        for a in (1, 2, 3):
            x = Letter(S(i, a))
            terms[(x, x)] = ExactComplex(-1)
    ineqs.append(Inequality("sites", NcPoly(terms), Fraction(8 * (n - 1)), tuple(range(1, n + 1))))
    counts["cubic"] = 3 * n
    return ConstraintSystem(n, config, eqs, tags, ineqs, c4, pc, counts)


def single_site_cliques(n: int, k: int) -> list:
    return [((i,), k) for i in range(1, n + 1)]


def support_cliques(h: PauliPoly, k: int) -> list:
    """One clique per maximal term support (single sites for 1-local H)."""
    sups = {p.support for p in h.terms if not p.is_identity}
    sups |= {(i,) for i in range(1, h.n + 1)}
    maximal = [s for s in sups if not any(set(s) < set(t) for t in sups)]
    return [(tuple(s), k) for s in sorted(maximal, key=lambda s: (len(s), s))]


# -- the exact reduction -------------------------------------------------------


class _Words:
    """Integer codes for words: base-(L+1) digits 1..L, so code order is deg-lex."""

    def __init__(self, letters: list, config: HermiticityConfig):
        self.letters = letters
        self.index = {x: i + 1 for i, x in enumerate(letters)}
        self.base = len(letters) + 1
        self.adj = [0] + [self.index[config.adjoint_letter(x)] for x in letters]
        self.config = config

    def encode(self, word) -> int:
        c = 0
        for x in word:
            c = c * self.base + self.index[x]
        return c

    def digits(self, code: int) -> list:
        out = []
        while code:
            code, d = divmod(code, self.base)
            out.append(d)
        out.reverse()
        return out

    def length(self, code: int) -> int:
        n = 0
        while code:
            code //= self.base
            n += 1
        return n

    def adjoint(self, code: int) -> int:
        c = 0
        for d in reversed(self.digits(code)):
            c = c * self.base + self.adj[d]
        return c

    def word(self, code: int) -> tuple:
        return tuple(self.letters[d - 1] for d in self.digits(code))

    def poly_terms(self, poly: NcPoly) -> list:
        return [(self.encode(w), len(w), c) for w, c in poly.terms.items()]


def _words_upto(letter_idx: list, base: int, k: int) -> list:
    """Codes by degree: out[d] is the list of codes of length d."""
    out = [[0]]
    for _ in range(k):
        out.append([c * base + x for c in out[-1] for x in letter_idx])
    return out


@dataclass
class NpaProblem:
    """Solver-ready SDP plus everything needed to interpret its variables."""

    sdp: SdpProblem
    n: int
    k: int
    cliques: list
    shift: float
    param_keys: list
    trace_caps: list
    x_bounds: np.ndarray
    block_bases: dict
    stats: dict
    words: _Words = field(repr=False)
    _e2: SparseEchelon = field(repr=False)
    _real: SparseEchelon = field(repr=False)

    def moment_form(self, word) -> tuple[dict, dict]:
        """Affine forms (Re, Im) of E[word] over parameter indices; key -1 is the constant."""
        return _complex_form(self._e2, self._real, self.words.encode(word) if isinstance(word, tuple) else word, self._pidx)

    @property
    def _pidx(self):
        return {k: i for i, k in enumerate(self.param_keys)}

    def params_from_moments(self, moment) -> np.ndarray:
        """Parameter vector of a functional given as ``moment(word) -> complex``."""
        out = np.zeros(len(self.param_keys))
        for i, key in enumerate(self.param_keys):
            code, part = divmod(key, 2)
            v = moment(self.words.word(code))
            out[i] = v.imag if part else v.real
        return out


# the name used for the moment-problem record elsewhere in the docs
MomentProblem = NpaProblem


def _real_form(real: SparseEchelon, key: int) -> dict:
    return real.normal_form(key)


def _complex_form(e2: SparseEchelon, real: SparseEchelon, code: int, pidx: dict | None = None):
    re_f: dict = {}
    im_f: dict = {}
    for t, c in e2.normal_form(code).items():
        if not isinstance(c, ExactComplex):
            c = ExactComplex(c)
        fr, fi = real.normal_form(2 * t), real.normal_form(2 * t + 1)
        if c.re:
            _axpy(re_f, c.re, fr)
            _axpy(im_f, c.re, fi)
        if c.im:
            _axpy(re_f, -c.im, fi)
            _axpy(im_f, c.im, fr)
    if pidx is not None:
        re_f = {(pidx[k] if k >= 0 else -1): v for k, v in re_f.items()}
        im_f = {(pidx[k] if k >= 0 else -1): v for k, v in im_f.items()}
    return re_f, im_f


def _axpy(row: dict, c, other: dict):
    for k, v in other.items():
        nv = row.get(k, 0) + c * v
        if nv:
            row[k] = nv
        else:
            row.pop(k, None)


def _clique_letters(words: _Words, sites) -> list:
    s = set(sites)
    return [i + 1 for i, x in enumerate(words.letters) if set(x.gen.sites) <= s]


def _poly_letters_in(poly_terms, allowed: set, words: _Words) -> bool:
    return all(d in allowed for code, _, _ in poly_terms for d in words.digits(code))


class _Stage1:
    """H-independent part of the relaxation: word codes, clique universes and
    the exact echelon of the equality rows. Reused across Hamiltonians."""

    def __init__(self, system: ConstraintSystem, cliques: tuple, say, t_start: float):
        config = system.config
        letters = alphabet(system.n, config)
        W = _Words(letters, config)
        base = W.base
        eq_terms = []
        for q in system.equalities:
            for p in (q, q.adjoint(config)):
                eq_terms.append(W.poly_terms(p.normalize_letters(config)))
        clique_data = []
        universe = 0
        for sites, lv in cliques:
            idx = _clique_letters(W, sites)
            allowed = set(idx)
            by_deg = _words_upto(idx, base, 2 * lv)
            universe += sum(len(x) for x in by_deg)
            eqs = [t for t in eq_terms if _poly_letters_in(t, allowed, W)]
            clique_data.append((sites, lv, idx, allowed, by_deg, eqs))
        if universe > MAX_UNIVERSE:
            raise ResourceError(f"moment universe of {universe} words exceeds the cap {MAX_UNIVERSE}")
        e2 = SparseEchelon()
        nrows = 0
        for sites, lv, idx, allowed, by_deg, eqs in clique_data:
            for row in _rows_for(eqs, by_deg, 2 * lv, base):
                nrows += 1
                if nrows > MAX_ROWS:
                    raise ResourceError(f"more than {MAX_ROWS} equality rows")
                e2.add_row(row)
        say(f"stage 1: {nrows} rows, {len(e2)} pivots, {time.perf_counter() - t_start:.1f}s")
        self.system = system
        self.words = W
        self.clique_data = clique_data
        self.e2 = e2
        self.nrows = nrows
        self.universe = universe
        self._basis: dict = {}

    def basis(self, ci: int, lev: int) -> list:
        """Words of degree <= lev in clique ci that are standard modulo rows of degree <= lev."""
        key = (ci, lev)
        if key not in self._basis:
            sites, lv, idx, allowed, by_deg, eqs = self.clique_data[ci]
            ech = SparseEchelon()
            for row in _rows_for(eqs, by_deg, lev, self.words.base):
                ech.add_row(row)
            self._basis[key] = [c for d in range(lev + 1) for c in by_deg[d] if c not in ech]
        return self._basis[key]


def _rows_for(eqs, by_deg, budget: int, base: int):
    """Rows a·q·b with total degree <= budget, lowest degree first."""
    jobs = []
    for t in eqs:
        dq = max(l for _, l, _ in t)
        if dq > budget:
            continue
        for tot in range(budget - dq + 1):
            jobs.append((dq + tot, dq, tot, t))
    jobs.sort(key=lambda j: (j[0], j[1]))
    for _, _, tot, t in jobs:
        for da in range(tot + 1):
            db = tot - da
            sb = base**db
            for ca in by_deg[da]:
                pre = [(ca * base**l + cw, c) for cw, l, c in t]
                for cb in by_deg[db]:
                    yield {code * sb + cb: c for code, c in pre}


_STAGE1_CACHE: dict = {}


def _stage1(system: ConstraintSystem, cliques: tuple, say, t_start: float) -> _Stage1:
    key = (id(system), cliques)
    hit = _STAGE1_CACHE.get(key)
    if hit is not None and hit.system is system:
        return hit
    if len(_STAGE1_CACHE) >= 4:
        _STAGE1_CACHE.clear()
    sk = _Stage1(system, cliques, say, t_start)
    _STAGE1_CACHE[key] = sk
    return sk


def build_npa(
    system: ConstraintSystem,
    objective: NcPoly,
    k: int,
    shift=0,
    cliques: Sequence | None = None,
    log=None,
) -> NpaProblem:
    """Assemble the level-k relaxation (optionally clique-restricted)."""
    t_start = time.perf_counter()
    if k < 1:
        raise DomainError("level k = 0 gives a degenerate problem; use k >= 1")
    n = system.n
    config = system.config
    if cliques is None:
        cliques = [(tuple(range(1, n + 1)), k)]
    cliques = [(tuple(sorted(s)), int(lv)) for s, lv in cliques]
    say = log or (lambda *a: None)
    sk = _stage1(system, tuple(cliques), say, t_start)
    W, base, letters, clique_data, e2 = sk.words, sk.words.base, sk.words.letters, sk.clique_data, sk.e2
    nrows, universe, basis = sk.nrows, sk.universe, sk.basis

    # block specs: (name, clique index, level, inequality or None)
    specs = []
    for ci, (sites, lv, *_rest) in enumerate(clique_data):
        specs.append((f"moment[{','.join(map(str, sites))}]", ci, lv, None))
    dropped = []
    for ineq in system.inequalities:
        terms = W.poly_terms(ineq.poly.normalize_letters(config))
        dq = ineq.poly.degree
        placed = False
        for ci, (sites, lv, idx, allowed, by_deg, eqs) in enumerate(clique_data):
            if set(ineq.sites) <= set(sites) and _poly_letters_in(terms, allowed, W):
                lev = lv - math.ceil(dq / 2)
                if lev >= 0:
                    specs.append((f"{ineq.name}[{','.join(map(str, sites))}]", ci, lev, ineq))
                    placed = True
        if not placed:
            # level-0 fallback: E[q] >= 0 needs every word of q inside some clique universe
            homes = []
            for code, l, _ in terms:
                home = next(
                    (ci for ci, cd in enumerate(clique_data) if l <= 2 * cd[1] and all(d in cd[3] for d in W.digits(code))),
                    None,
                )
                homes.append(home)
            if all(h is not None for h in homes):
                specs.append((f"{ineq.name}[level0]", None, 0, ineq))
            else:
                dropped.append(ineq.name)

    # entries as exact complex words: entry(p, q) = Σ coeff * E[code]
    def entry_terms(tp: int, tq: int, ineq) -> list:
        a = W.adjoint(tp)
        lq = W.length(tq)
        if ineq is None:
            return [(a * base**lq + tq, ExactComplex(1))]
        out = []
        for cw, l, c in W.poly_terms(ineq.poly.normalize_letters(config)):
            out.append(((a * base**l + cw) * base**lq + tq, c))
        return out

    # collect standard words that will be referenced, then close under adjoint
    obj_terms = W.poly_terms(objective.normalize_letters(config))
    for code, l, _ in obj_terms:
        ok = any(l <= 2 * cd[1] and all(d in cd[3] for d in W.digits(code)) for cd in clique_data)
        if not ok:
            raise DomainError(f"objective word {W.word(code)} is not inside any clique at this level")
    block_words = []
    needed: set = {0}
    for name, ci, lev, ineq in specs:
        bw = basis(ci, lev) if ci is not None else [0]
        block_words.append(bw)
        for p_i, tp in enumerate(bw):
            for tq in bw[p_i:]:
                for code, _ in entry_terms(tp, tq, ineq):
                    needed.update(e2.normal_form(code))
    for code, _, _ in obj_terms:
        needed.update(e2.normal_form(code))
    frontier = list(needed)
    while frontier:
        s = frontier.pop()
        for t in e2.normal_form(W.adjoint(s)):
            if t not in needed:
                needed.add(t)
                frontier.append(t)
    std = sorted(needed)
    say(f"stage 1 done: {len(std)} standard words, {time.perf_counter() - t_start:.1f}s")

    # stage 2: normalization and Hermiticity over the reals
    real = SparseEchelon()
    one = mpq(1)
    real.add_row({0: one, -1: -one})
    real.add_row({1: one})
    for s in std:
        nf = e2.normal_form(W.adjoint(s))
        row_re: dict = {2 * s: -one}
        row_im: dict = {2 * s + 1: one}
        for t, c in nf.items():
            if not isinstance(c, ExactComplex):
                c = ExactComplex(c)
            for row, key, val in (
                (row_re, 2 * t, c.re),
                (row_re, 2 * t + 1, -c.im),
                (row_im, 2 * t + 1, c.re),
                (row_im, 2 * t, c.im),
            ):
                if val:
                    nv = row.get(key, 0) + val
                    if nv:
                        row[key] = nv
                    else:
                        row.pop(key)
        real.add_row(row_re)
        real.add_row(row_im)
    if -1 in real:
        raise SolverError("the moment constraints are inconsistent (E[1] = 1 violated)")
    keys = set()
    for s in std:
        for part in (0, 1):
            keys.update(k_ for k_ in real.normal_form(2 * s + part) if k_ >= 0)
    param_keys = sorted(keys)
    pidx = {k_: i for i, k_ in enumerate(param_keys)}
    m = len(param_keys)
    say(f"stage 2: {m} real parameters, {time.perf_counter() - t_start:.1f}s")

    # letter-product norm bounds
    lb = system.letter_bounds
    letter_norm = [0.0] + [lb[x.gen.kind] for x in letters]

    def word_bound(code: int) -> float:
        out = 1.0
        for d in W.digits(code):
            out *= letter_norm[d]
        return out

    sdpb = SdpBuilder(m, "min")
    names = []
    for key in param_keys:
        code, part = divmod(key, 2)
        names.append(("Im" if part else "Re") + "E[" + " ".join(str(x) for x in W.word(code)) + "]")
    sdpb.var_names = names
    caps = []
    block_bases = {}

    def form(code_terms) -> tuple[dict, dict]:
        re_f: dict = {}
        im_f: dict = {}
        for code, c in code_terms:
            fr, fi = _complex_form(e2, real, code, pidx)
            if c.re:
                _axpy(re_f, c.re, fr)
                _axpy(im_f, c.re, fi)
            if c.im:
                _axpy(re_f, -c.im, fi)
                _axpy(im_f, c.im, fr)
        return re_f, im_f

    for (name, ci, lev, ineq), bw in zip(specs, block_words):
        r = len(bw)
        forms = {}
        for p_i, tp in enumerate(bw):
            for q_i in range(p_i, r):
                tq = bw[q_i]
                f = form(entry_terms(tp, tq, ineq))
                if p_i != q_i:
                    g = form(entry_terms(tq, tp, ineq))
                    neg_im = {k_: -v for k_, v in g[1].items()}
                    if f[0] != g[0] or f[1] != neg_im:
                        raise SolverError(f"block {name} is not exactly Hermitian at ({p_i}, {q_i})")
                elif f[1]:
                    raise SolverError(f"block {name} has a non-real diagonal entry")
                forms[p_i, q_i] = f
        blk = sdpb.add_hermitian(name, r, forms)
        qnorm = 1.0 if ineq is None else float(ineq.norm)
        bsum = sum(word_bound(t) ** 2 for t in bw)
        copies = 2 if sdpb.blocks[blk].embedded else 1
        caps.append(copies * qnorm * bsum * (1 + 1e-12))
        block_bases[name] = [W.word(t) for t in bw]

    obj_re, obj_im = form([(code, c) for code, _, c in obj_terms])
    if obj_im:
        raise SolverError("objective is not real on Hermitian functionals")
    for key, v in obj_re.items():
        if key == -1:
            sdpb.offset += float(v)
        else:
            sdpb.c[key] += float(v)
    sdpb.offset += float(shift)
    x_bounds = np.array([word_bound(key // 2) for key in param_keys])
    stats = {
        "universe_words": universe,
        "equality_rows": nrows,
        "pivots": len(e2),
        "standard_words": len(std),
        "parameters": m,
        "blocks": [(b.name, b.dim) for b in sdpb.blocks],
        "dropped_inequalities": dropped,
        "build_seconds": time.perf_counter() - t_start,
    }
    say(f"built: blocks {stats['blocks']}, {stats['build_seconds']:.1f}s")
    return NpaProblem(
        sdpb.build(), n, k, cliques, float(shift), param_keys, caps, x_bounds, block_bases, stats, W, e2, real
    )


# -- solving --------------------------------------------------------------------


def lower_report(npa: NpaProblem, sol: Solution, t0: float) -> BoundReport:
    cert = certify_dual(npa.sdp, sol, npa.trace_caps, npa.x_bounds)
    return BoundReport(
        value=sol.primal_objective,
        dual_value=sol.dual_objective,
        certified_bound=cert.bound,
        rigor_margin=cert.margin,
        primal_residual=sol.primal_residual,
        dual_residual=sol.dual_residual,
        gap=sol.gap,
        level=npa.k,
        status=sol.status,
        wall_time=time.perf_counter() - t0,
        iterations=sol.iterations,
        stats=dict(npa.stats),
        certificate_status=cert.status,
    )


@lru_cache(maxsize=8)
def _cached_system(n, config, pair_mode, groups) -> ConstraintSystem:
    return build_system(n, config, pair_mode, relation_sites=groups)


def prepare_lower(
    h: PauliPoly,
    k: int,
    config: HermiticityConfig = DEFAULT_CONFIG,
    cliques: Sequence | str | None = None,
    pair_mode: str = "validated",
    log=None,
    encoding: str = "g",
) -> NpaProblem:
    """Build (without solving) the relaxation that :func:`solve_lower` solves."""
    if isinstance(cliques, str):
        if cliques not in ("support", "sites"):
            raise InputError(f"unknown clique layout {cliques!r}")
        cliques = support_cliques(h, k) if cliques == "support" else single_site_cliques(h.n, k)
    # cheap size estimate first, so oversized requests fail before relation generation
    for sites, lv in cliques or [(tuple(range(1, h.n + 1)), k)]:
        n_letters = len(alphabet(h.n, config, sites))
        est = sum(n_letters**d for d in range(2 * lv + 1))
        if est > MAX_UNIVERSE:
            raise ResourceError(f"moment universe of about {est} words exceeds the cap {MAX_UNIVERSE}")
    groups = None if cliques is None else tuple(tuple(sorted(s)) for s, _ in cliques)
    system = _cached_system(h.n, config, pair_mode, groups)
    obj, shift = encode_hamiltonian(h, config, encoding)
    return build_npa(system, obj, k, shift, cliques, log)


def solve_lower(
    h: PauliPoly,
    k: int,
    config: HermiticityConfig = DEFAULT_CONFIG,
    cliques: Sequence | str | None = None,
    pair_mode: str = "validated",
    tol: float = 1e-8,
    max_iter: int = 60,
    relax: float = 1e-6,
    log=None,
    encoding: str = "g",
) -> BoundReport:
    """Solve the level-k relaxation for H and certify its dual value.

    ``cliques`` may be ``None`` (all sites), ``"support"`` (maximal term
    supports of H), ``"sites"`` (single sites) or an explicit list of
    ``(sites, level)`` pairs.
    """
    t0 = time.perf_counter()
    npa = prepare_lower(h, k, config, cliques, pair_mode, log, encoding)
    sol = solve(npa.sdp, tol=tol, max_iter=max_iter, relax=relax)
    if sol.status not in ("optimal", "near_optimal") and sol.gap > 1e-4:
        raise SolverError(f"lower-bound solve ended with status {sol.status}", solution=sol)
    return lower_report(npa, sol, t0)
