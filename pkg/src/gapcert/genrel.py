"""Generators and relations presenting su(2^n).

``f_map`` sends S(i, a) to the Pauli sigma_i^a and T(i, j, a, b) to
sigma_i^a sigma_j^b. ``g_map``/``gp_map`` invert it on Pauli strings by
nested commutators. Every scalar in this module (tree prefactors and
relation right-hand sides) is obtained by exact evaluation under
``f_map``; none is copied from a closed-form table.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DomainError, RelationError
from .exact import ExactComplex
from .linalg import exact_rank
from .ncpoly import Generator, Letter, NcPoly, S, T
from .pauli import PauliPoly, PauliString, _I_POWERS, _mul_ops, all_strings

__all__ = [
    "CommTree",
    "leaf",
    "bracket",
    "f_map",
    "f_string",
    "g_map",
    "gp_map",
    "expand",
    "enumerate_A",
    "s_generators",
    "t_generators",
    "Relation",
    "RelationSet",
    "gen_relations",
    "candidate_counts",
    "verify_relations",
    "span_check",
    "FAMILIES",
]

FAMILIES = ("4a", "4b", "4c", "4d", "4e", "4f", "4g")

# cyclic pair (b, a) with [sigma^b, sigma^a] = 2i sigma^c, indexed by c
_CYCLIC = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


class CommTree:
    """``scalar * node`` where node is a Generator or a pair of unscaled trees."""

    __slots__ = ("scalar", "node")

    def __init__(self, scalar, node):
        self.scalar = scalar if isinstance(scalar, ExactComplex) else ExactComplex(scalar)
        if isinstance(node, tuple) and not isinstance(node, Generator):
            left, right = node
            if left.scalar != 1 or right.scalar != 1:
                raise ValueError("sub-trees must carry scalar 1; use bracket()")
        self.node = node

    @property
    def is_leaf(self) -> bool:
        return isinstance(self.node, Generator)

    def unscaled(self) -> "CommTree":
        return self if self.scalar == 1 else CommTree(1, self.node)

    def scaled(self, c) -> "CommTree":
        return CommTree(self.scalar * c, self.node)

    def leaves(self) -> list[Generator]:
        if self.is_leaf:
            return [self.node]
        return self.node[0].leaves() + self.node[1].leaves()

    @property
    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(self.node[0].depth, self.node[1].depth)

    def shape(self):
        """Scalar-free structural key."""
        if self.is_leaf:
            return self.node
        return (self.node[0].shape(), self.node[1].shape())

    def __eq__(self, other):
        return isinstance(other, CommTree) and self.scalar == other.scalar and self.shape() == other.shape()

    def __hash__(self):
        return hash((self.scalar, self.shape()))

    def _body(self) -> str:
        if self.is_leaf:
            return str(self.node)
        return f"[{self.node[0]._body()}, {self.node[1]._body()}]"

    def __repr__(self):
        if self.scalar == 1:
            return self._body()
        return f"({self.scalar})·{self._body()}"


def leaf(gen: Generator, scalar=1) -> CommTree:
    return CommTree(scalar, gen)


def bracket(x: CommTree, y: CommTree) -> CommTree:
    return CommTree(x.scalar * y.scalar, (x.unscaled(), y.unscaled()))


def s_generators(n: int, sites: Iterable[int] | None = None) -> list[Generator]:
    sites = sorted(range(1, n + 1) if sites is None else sites)
    return [S(i, a) for i in sites for a in (1, 2, 3)]


def t_generators(n: int, sites: Iterable[int] | None = None) -> list[Generator]:
    sites = sorted(range(1, n + 1) if sites is None else sites)
    return [T(i, j, a, b) for i, j in combinations(sites, 2) for a in (1, 2, 3) for b in (1, 2, 3)]


def _check_gen(gen: Generator, n: int):
    if not all(1 <= s <= n for s in gen.sites):
        raise DomainError(f"{gen} has a site outside 1..{n}")


def _gen_ops(gen: Generator, n: int) -> tuple:
    ops = [0] * n
    ops[gen.i - 1] = gen.a
    if gen.kind == "T":
        ops[gen.j - 1] = gen.b
    return tuple(ops)


def _eval(node, n: int):
    """Image of an unscaled node as (ExactComplex, ops) or None for zero."""
    if isinstance(node, Generator):
        _check_gen(node, n)
        return ExactComplex(1), _gen_ops(node, n)
    left = _eval(node[0].node, n)
    if left is None:
        return None
    right = _eval(node[1].node, n)
    if right is None:
        return None
    k1, p = _mul_ops(left[1], right[1])
    k2, _ = _mul_ops(right[1], left[1])
    if k1 == k2:
        return None
    # anticommuting strings: pq - qp = 2 pq
    return left[0] * right[0] * _I_POWERS[k1] * 2, p


def f_string(t: CommTree, n: int):
    """``(coefficient, PauliString)`` image of a tree, or ``None`` if it maps to 0."""
    img = _eval(t.node, n)
    if img is None:
        return None
    return t.scalar * img[0], PauliString.from_ops(img[1])


def f_map(t: CommTree, n: int) -> PauliPoly:
    img = f_string(t, n)
    if img is None:
        return PauliPoly(n)
    return PauliPoly(n, {img[1]: img[0]})


def _fix_scalar(tree: CommTree, p: PauliString) -> CommTree:
    img = f_string(tree, p.n)
    if img is None or img[1] != p:
        raise RelationError(f"tree {tree} does not evaluate to a multiple of {p.label()}")
    return CommTree(ExactComplex(1) / img[0], tree.node)


def g_map(p: PauliString) -> CommTree:
    """Nested commutator with innermost leaf S on the smallest support site."""
    if p.is_identity:
        raise DomainError("the identity string is not in su(2^n)")
    sup = p.support
    c = [p.ops[i - 1] for i in sup]
    m = len(sup)
    if m == 1:
        return leaf(S(sup[0], c[0]))
    # (b_j, a_j) is the cyclic pair excluding c_j, b_m = c_m
    b = [_CYCLIC[cj][0] for cj in c]
    a = [_CYCLIC[cj][1] for cj in c]
    b[-1] = c[-1]
    tree = leaf(S(sup[0], b[0]))
    for j in range(m - 1):
        tree = bracket(tree, leaf(T(sup[j], sup[j + 1], a[j], b[j + 1])))
    return _fix_scalar(tree, p)


def gp_map(p: PauliString) -> CommTree:
    """Nested commutator with innermost leaf T on the two smallest sites.

    Single-site strings have no T to start from and map to S, as in g_map.
    """
    if p.is_identity:
        raise DomainError("the identity string is not in su(2^n)")
    sup = p.support
    c = [p.ops[i - 1] for i in sup]
    m = len(sup)
    if m == 1:
        return leaf(S(sup[0], c[0]))
    b = [_CYCLIC[cj][0] for cj in c]
    a = [_CYCLIC[cj][1] for cj in c]
    b[-1] = c[-1]
    tree = leaf(T(sup[0], sup[1], c[0], b[1]))
    for j in range(1, m - 1):
        tree = bracket(tree, leaf(T(sup[j], sup[j + 1], a[j], b[j + 1])))
    return _fix_scalar(tree, p)


def expand(t: CommTree) -> NcPoly:
    """Associative expansion: brackets become ``xy - yx``."""

    def rec(node) -> dict:
        if isinstance(node, Generator):
            return {(Letter(node),): ExactComplex(1)}
        x, y = rec(node[0].node), rec(node[1].node)
        out: dict = {}
        for u, cu in x.items():
            for v, cv in y.items():
                c = cu * cv
                w = u + v
                out[w] = out.get(w, ExactComplex(0)) + c
                w = v + u
                out[w] = out.get(w, ExactComplex(0)) - c
        return out

    return NcPoly(rec(t.node)).scale(t.scalar)


def enumerate_A(n: int, max_support: int | None = None) -> list[CommTree]:
    """The basis elements g_map(P), P ranging over strings with support <= max_support."""
    max_support = n if max_support is None else max_support
    if max_support > n:
        raise DomainError(f"max_support {max_support} exceeds n = {n}")
    return [g_map(p) for p in all_strings(n, max_support)[1:]]


# -- relations ---------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """``lhs == sum(rhs)`` in the Lie algebra."""

    family: str
    index: tuple
    lhs: CommTree
    rhs: tuple = ()

    def poly(self) -> NcPoly:
        out = expand(self.lhs)
        for t in self.rhs:
            out = out - expand(t)
        return out

    def image(self, n: int) -> PauliPoly:
        out = f_map(self.lhs, n)
        for t in self.rhs:
            out = out - f_map(t, n)
        return out

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "index": [str(g) for g in self.index],
            "lhs": repr(self.lhs),
            "rhs": [repr(t) for t in self.rhs],
            "expanded": [
                {"word": [str(x) for x in w], "coeff": c.to_json()} for w, c in self.poly().sorted_terms()
            ],
        }


@dataclass
class RelationSet:
    n: int
    relations: list = field(default_factory=list)

    def counts(self) -> dict:
        c = Counter(r.family for r in self.relations)
        return {f: c.get(f, 0) for f in FAMILIES}

    def polys(self) -> list[NcPoly]:
        return [r.poly() for r in self.relations]

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)


def _rhs_from_image(img, use_prime: bool) -> tuple:
    if img is None:
        return ()
    coeff, p = img
    t = gp_map(p) if use_prime else g_map(p)
    return (t.scaled(coeff),)


def _connected(gens: Sequence[Generator]) -> bool:
    seen = set(gens[0].sites)
    for g in gens[1:]:
        if not seen.intersection(g.sites):
            return False
        seen.update(g.sites)
    return True


def _swap_shared(t1: Generator, t2: Generator):
    """Swap the axes two T generators carry on their single shared site."""
    shared = set(t1.sites) & set(t2.sites)
    (s,) = shared

    def axis(g):
        return g.a if g.i == s else g.b

    def with_axis(g, x):
        return T(g.i, g.j, x, g.b) if g.i == s else T(g.i, g.j, g.a, x)

    return with_axis(t1, axis(t2)), with_axis(t2, axis(t1))


def _candidates(n: int, sites=None):
    """Yield (family, index, lhs tree, use_prime) for every candidate relation."""
    ss = s_generators(n, sites)
    ts = t_generators(n, sites)
    for g1, g2 in combinations(ss, 2):
        yield "4a", (g1, g2), bracket(leaf(g1), leaf(g2)), False
    for g1 in ss:
        for g2 in ts:
            yield "4b", (g1, g2), bracket(leaf(g1), leaf(g2)), True
    for g1, g2 in combinations(ts, 2):
        shared = len(set(g1.sites) & set(g2.sites))
        if shared == 1:
            yield "4c", (g1, g2), bracket(leaf(g1), leaf(g2)), None
        else:
            yield "4d", (g1, g2), bracket(leaf(g1), leaf(g2)), False
    for g1, g2 in combinations(ts, 2):
        if not _connected((g1, g2)):
            continue
        inner = bracket(leaf(g1), leaf(g2))
        for g3 in ts:
            if not _connected((g1, g2, g3)):
                continue
            outer = bracket(inner, leaf(g3))
            yield "4e", (g1, g2, g3), outer, True
            for g4 in ts:
                if _connected((g1, g2, g3, g4)):
                    yield "4f", (g1, g2, g3, g4), bracket(outer, leaf(g4)), True
    for g1 in ss:
        for g2 in ts:
            if g1.i not in g2.sites:
                continue
            inner = bracket(leaf(g1), leaf(g2))
            for g3 in ts:
                if _connected((g1, g2, g3)):
                    yield "4g", (g1, g2, g3), bracket(inner, leaf(g3)), False


def candidate_counts(n: int, families: Iterable[str] = FAMILIES) -> dict:
    """Index tuples surviving the support-connectivity filter, per family.

    Cheap enough for n = 4, where full exact generation of 4f is not.
    """
    families = set(families)
    ss = len(s_generators(n))
    ts = t_generators(n)
    out = {f: 0 for f in FAMILIES}
    out["4a"] = ss * (ss - 1) // 2
    out["4b"] = ss * len(ts)
    for g1, g2 in combinations(ts, 2):
        shared = len(set(g1.sites) & set(g2.sites))
        out["4c" if shared == 1 else "4d"] += 1
    sup_t = Counter(g.sites for g in ts)
    for g1, g2 in combinations(ts, 2):
        if not _connected((g1, g2)):
            continue
        base = set(g1.sites) | set(g2.sites)
        n3 = sum(cnt for s, cnt in sup_t.items() if base & set(s))
        out["4e"] += n3
        if "4f" in families:
            for s3, cnt3 in sup_t.items():
                if not base & set(s3):
                    continue
                b3 = base | set(s3)
                out["4f"] += cnt3 * sum(cnt for s, cnt in sup_t.items() if b3 & set(s))
    for i in range(1, n + 1):
        for s2, cnt2 in sup_t.items():
            if i in s2:
                b2 = set(s2)
                out["4g"] += 3 * cnt2 * sum(cnt for s, cnt in sup_t.items() if b2 & set(s))
    return {f: out[f] for f in FAMILIES if f in families}


def gen_relations(n: int, families: Iterable[str] = FAMILIES, sites: Iterable[int] | None = None) -> RelationSet:
    """Generate the relation families, pruned of 0 = 0 and deduplicated.

    ``sites`` restricts every generator to a subset of the sites (used by the
    clique-sparse lower bound); the result is still a set of valid relations.
    """
    if n < 2:
        raise DomainError("gen_relations needs n >= 2 (no T generators exist for n = 1)")
    families = set(families)
    seen = set()
    out = RelationSet(n)
    for fam, index, lhs, prime in _candidates(n, sites):
        if fam not in families:
            continue
        img = f_string(lhs, n)
        if fam == "4c":
            if img is None:
                rhs = ()
            else:
                u1, u2 = _swap_shared(*index)
                other = bracket(leaf(u1), leaf(u2))
                oimg = f_string(other, n)
                rhs = (other.scaled(img[0] / oimg[0]),)
        else:
            rhs = _rhs_from_image(img, prime)
        rel = Relation(fam, index, lhs, rhs)
        poly = rel.poly()
        if not poly:
            continue
        key = poly.normalized().key()
        if key in seen:
            continue
        seen.add(key)
        out.relations.append(rel)
    return out


@dataclass
class RelationReport:
    n: int
    counts: dict
    total: int
    ok: bool


def verify_relations(rs: RelationSet) -> RelationReport:
    """Check every relation maps to exactly zero; raise naming the first that does not."""
    for r in rs:
        if r.image(rs.n):
            raise RelationError(f"relation {r.family} {r.index} maps to {r.image(rs.n)!r}, not 0")
    return RelationReport(rs.n, rs.counts(), len(rs), True)


def span_check(n: int) -> int:
    """Exact rank of the images of enumerate_A over the Pauli basis; raises if < 4^n - 1."""
    if n > 4:
        raise DomainError("span_check is limited to n <= 4")
    strings = {s: idx for idx, s in enumerate(all_strings(n))}
    rows = []
    for t in enumerate_A(n):
        img = f_map(t, n)
        rows.append({strings[s]: c for s, c in img.terms.items()})
    rank = exact_rank(rows)
    if rank != 4**n - 1:
        raise RelationError(f"span rank {rank} != {4**n - 1}")
    return rank
