"""Exact arithmetic on linear combinations of n-qubit Pauli strings.

Conventions: sites are 1-indexed, axes are 1, 2, 3 for X, Y, Z, and the
Pauli matrices are the usual ones (``X @ X = I``, ``[X, Y] = 2i Z``).
"""

from __future__ import annotations

import json
from functools import reduce
from itertools import combinations, product
from os import PathLike
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionError, InputError, ResourceError
from .exact import ExactComplex, as_exact

__all__ = [
    "AXIS_NAMES",
    "PauliString",
    "PauliPoly",
    "mul_strings",
    "commutator",
    "mixed_state_moment",
    "to_matrix",
    "all_strings",
    "load_hamiltonian",
    "hamiltonian_from_json",
    "hamiltonian_to_json",
    "MATRIX_CAP",
]

AXIS_NAMES = {1: "X", 2: "Y", 3: "Z"}
_AXIS_CODES = {"X": 1, "Y": 2, "Z": 3, "x": 1, "y": 2, "z": 3, 1: 1, 2: 2, 3: 3}

MATRIX_CAP = 6

_I_POWERS = (
    ExactComplex(1),
    ExactComplex(0, 1),
    ExactComplex(-1),
    ExactComplex(0, -1),
)

# single-site product sigma^a sigma^b = i^k sigma^c, indexed [a][b] -> (k, c)
_SITE_TABLE = [[(0, b) if a == 0 else (0, a) if b == 0 else None for b in range(4)] for a in range(4)]
for _a in (1, 2, 3):
    _SITE_TABLE[_a][_a] = (0, 0)
    for _b in (1, 2, 3):
        if _a != _b:
            _c = 6 - _a - _b
            _SITE_TABLE[_a][_b] = (1 if (_a, _b, _c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else 3, _c)

_MATRICES = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _axis(value) -> int:
    try:
        return _AXIS_CODES[value]
    except (KeyError, TypeError):
        raise InputError(f"unknown Pauli axis {value!r}") from None


class PauliString:
    """Tensor product of single-site Paulis; identity on unlisted sites."""

    __slots__ = ("n", "ops", "_hash")

    def __init__(self, n: int, letters: Mapping[int, object] | Iterable = ()):
        ops = [0] * n
        items = letters.items() if isinstance(letters, Mapping) else letters
        for site, axis in items:
            if not 1 <= site <= n:
                raise DimensionError(f"site {site} outside 1..{n}")
            ops[site - 1] = _axis(axis)
        self.n = n
        self.ops = tuple(ops)
        self._hash = hash((n, self.ops))

    @classmethod
    def from_ops(cls, ops: Iterable[int]) -> "PauliString":
        ops = tuple(ops)
        s = cls.__new__(cls)
        s.n = len(ops)
        s.ops = ops
        s._hash = hash((s.n, ops))
        return s

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls.from_ops((0,) * n)

    @classmethod
    def parse(cls, n: int, label: str) -> "PauliString":
        """``"X1 Z3"`` style labels; ``"I"`` or ``""`` is the identity."""
        letters = []
        for tok in label.replace("*", " ").split():
            if tok in ("I", "1"):
                continue
            letters.append((int(tok[1:]), tok[0]))
        return cls(n, letters)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, a in enumerate(self.ops) if a)

    @property
    def letters(self) -> dict[int, int]:
        return {i + 1: a for i, a in enumerate(self.ops) if a}

    @property
    def weight(self) -> int:
        return sum(1 for a in self.ops if a)

    @property
    def is_identity(self) -> bool:
        return not any(self.ops)

    def sort_key(self):
        sup = self.support
        return (len(sup), sup, tuple(self.ops[i - 1] for i in sup))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __eq__(self, other):
        return isinstance(other, PauliString) and self.ops == other.ops

    def __hash__(self):
        return self._hash

    def label(self) -> str:
        if self.is_identity:
            return "I"
        return "".join(f"{AXIS_NAMES[a]}{i}" for i, a in self.letters.items())

    def __repr__(self):
        return f"PauliString({self.n}, {self.label()!r})"


def _mul_ops(p: tuple, q: tuple) -> tuple[int, tuple]:
    k = 0
    out = []
    for a, b in zip(p, q):
        dk, c = _SITE_TABLE[a][b]
        k += dk
        out.append(c)
    return k & 3, tuple(out)


def mul_strings(p: PauliString, q: PauliString) -> tuple[ExactComplex, PauliString]:
    """Return ``(phase, r)`` with ``p @ q == phase * r`` and phase in {±1, ±i}."""
    if p.n != q.n:
        raise DimensionError(f"cannot multiply strings on {p.n} and {q.n} sites")
    k, ops = _mul_ops(p.ops, q.ops)
    return _I_POWERS[k], PauliString.from_ops(ops)


def strings_commute(p: PauliString, q: PauliString) -> bool:
    anti = 0
    for a, b in zip(p.ops, q.ops):
        if a and b and a != b:
            anti ^= 1
    return not anti


class PauliPoly:
    """Exact linear combination of Pauli strings on ``n`` sites.

    Treated as immutable; zero coefficients are never stored.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[PauliString, object] | None = None):
        self.n = n
        clean = {}
        for s, c in (terms or {}).items():
            if s.n != n:
                raise DimensionError(f"string on {s.n} sites in a {n}-site polynomial")
            c = as_exact(c)
            if c:
                clean[s] = c
        self.terms = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def _trusted(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = dict(sorted(((s, c) for s, c in terms.items() if c), key=lambda kv: kv[0].sort_key()))
        return p

    @classmethod
    def identity(cls, n: int, coeff=1) -> "PauliPoly":
        return cls(n, {PauliString.identity(n): coeff})

    @classmethod
    def from_string(cls, s: PauliString, coeff=1) -> "PauliPoly":
        return cls(s.n, {s: coeff})

    @classmethod
    def parse(cls, n: int, text: str) -> "PauliPoly":
        """Parse ``"-1 Z1 + 0.5 X1 X2"`` (coefficient, then space-separated letters)."""
        terms: dict[PauliString, ExactComplex] = {}
        for chunk in text.replace("-", "+-").split("+"):
            toks = chunk.split()
            if not toks:
                continue
            coeff = ExactComplex(1)
            if toks[0].startswith("-"):
                coeff = ExactComplex(-1)
                toks = ([toks[0][1:]] if len(toks[0]) > 1 else []) + toks[1:]
            if toks and toks[0][0] in "0123456789./":
                coeff = coeff * as_exact(toks[0])
                toks = toks[1:]
            s = PauliString.parse(n, " ".join(toks))
            terms[s] = terms.get(s, ExactComplex(0)) + coeff
        return cls(n, terms)

    def _check(self, other: "PauliPoly"):
        if self.n != other.n:
            raise DimensionError(f"operands on {self.n} and {other.n} sites")

    def __add__(self, other):
        if not isinstance(other, PauliPoly):
            other = PauliPoly.identity(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out[s] + c if s in out else c
        return PauliPoly._trusted(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return PauliPoly._trusted(self.n, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PauliPoly):
            other = PauliPoly.identity(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PauliPoly":
        c = as_exact(c)
        return PauliPoly._trusted(self.n, {s: v * c for s, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, PauliPoly):
            return self.scale(other)
        self._check(other)
        out: dict[PauliString, ExactComplex] = {}
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                k, ops = _mul_ops(s.ops, t.ops)
                r = PauliString.from_ops(ops)
                v = a * b * _I_POWERS[k]
                out[r] = out[r] + v if r in out else v
        return PauliPoly._trusted(self.n, out)

    def __rmul__(self, other):
        return self.scale(other)

    def adjoint(self) -> "PauliPoly":
        return PauliPoly._trusted(self.n, {s: c.conjugate() for s, c in self.terms.items()})

    def is_hermitian(self) -> bool:
        return all(c.is_real for c in self.terms.values())

    def coefficient(self, s: PauliString) -> ExactComplex:
        return self.terms.get(s, ExactComplex(0))

    @property
    def identity_coefficient(self) -> ExactComplex:
        return self.coefficient(PauliString.identity(self.n))

    @property
    def degree(self) -> int:
        """Largest support size among the terms (0 for constants)."""
        return max((s.weight for s in self.terms), default=0)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PauliPoly):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return f"PauliPoly({self.n}, 0)"
        body = " + ".join(f"{c}*{s.label()}" for s, c in self.terms.items())
        return f"PauliPoly({self.n}, {body})"


def commutator(p: PauliPoly, q: PauliPoly) -> PauliPoly:
    """``p q - q p``; only anticommuting string pairs contribute."""
    p._check(q)
    out: dict[PauliString, ExactComplex] = {}
    for s, a in p.terms.items():
        for t, b in q.terms.items():
            if strings_commute(s, t):
                continue
            k, ops = _mul_ops(s.ops, t.ops)
            r = PauliString.from_ops(ops)
            v = a * b * _I_POWERS[k] * 2
            out[r] = out[r] + v if r in out else v
    return PauliPoly._trusted(p.n, out)


def mixed_state_moment(p: PauliPoly) -> ExactComplex:
    """Expectation in the maximally mixed state: the identity coefficient."""
    return p.identity_coefficient


def _string_matrix(ops: tuple) -> np.ndarray:
    return reduce(np.kron, (_MATRICES[a] for a in ops), np.ones((1, 1), dtype=complex))


def to_matrix(p: PauliPoly | PauliString, cap: int = MATRIX_CAP) -> np.ndarray:
    """Dense ``2^n x 2^n`` matrix; site 1 is the most significant tensor factor."""
    if p.n > cap:
        raise ResourceError(f"dense matrix for n={p.n} exceeds the cap n<={cap}")
    if isinstance(p, PauliString):
        return _string_matrix(p.ops)
    dim = 2**p.n
    out = np.zeros((dim, dim), dtype=complex)
    for s, c in p.terms.items():
        out += complex(c) * _string_matrix(s.ops)
    return out


def all_strings(n: int, max_weight: int | None = None) -> list[PauliString]:
    """All strings of support size <= max_weight, identity first, canonical order."""
    max_weight = n if max_weight is None else min(max_weight, n)
    out = [PauliString.identity(n)]
    for w in range(1, max_weight + 1):
        for sites in combinations(range(1, n + 1), w):
            for axes in product((1, 2, 3), repeat=w):
                out.append(PauliString(n, zip(sites, axes)))
    return out


# -- JSON Hamiltonian format ------------------------------------------------


def hamiltonian_from_json(data: Mapping) -> PauliPoly:
    """Build a PauliPoly from ``{"n": int, "terms": [{"coeff", "ops"}]}``."""
    if not isinstance(data, Mapping) or "n" not in data or "terms" not in data:
        raise InputError('Hamiltonian JSON needs top-level "n" and "terms"')
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f'"n" must be a positive integer, got {n!r}')
    terms: dict[PauliString, ExactComplex] = {}
    for idx, term in enumerate(data["terms"]):
        try:
            raw = term["coeff"]
            if isinstance(raw, bool):
                raise InputError("boolean coefficient")
            if isinstance(raw, (list, tuple)):
                if len(raw) != 2 or not all(isinstance(v, str) for v in raw):
                    raise InputError("complex coefficients are [re, im] rational strings")
                coeff = as_exact(tuple(raw))
            elif isinstance(raw, (int, float, str)):
                coeff = as_exact(raw)
            else:
                raise InputError(f"unsupported coefficient {raw!r}")
            letters = []
            seen = set()
            for op in term["ops"]:
                site, axis = op
                if not isinstance(site, int) or isinstance(site, bool):
                    raise InputError(f"site {site!r} is not an integer")
                if axis not in ("X", "Y", "Z"):
                    raise InputError(f"axis {axis!r} is not X, Y or Z")
                if site in seen:
                    raise InputError(f"site {site} repeated")
                seen.add(site)
                letters.append((site, axis))
            s = PauliString(n, letters)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"term {idx}: {exc}") from exc
        terms[s] = terms[s] + coeff if s in terms else coeff
    return PauliPoly(n, terms)


def load_hamiltonian(path: str | PathLike) -> PauliPoly:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return hamiltonian_from_json(data)


def hamiltonian_to_json(h: PauliPoly) -> dict:
    terms = []
    for s, c in h.terms.items():
        terms.append({
            "coeff": c.to_json(),
            "ops": [[site, AXIS_NAMES[a]] for site, a in s.letters.items()],
        })
    return {"n": h.n, "terms": terms}
