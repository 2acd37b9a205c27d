"""Noncommutative *-polynomials over the S/T generator letters.

A word is a tuple of :class:`Letter`; the empty tuple is the unit. No
reduction modulo relations happens here: relations enter the moment
problem as explicit linear constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, NamedTuple

from .exact import ExactComplex, as_exact

__all__ = [
    "Generator",
    "S",
    "T",
    "Letter",
    "HermiticityConfig",
    "NcPoly",
    "alphabet",
    "enumerate_words",
    "format_word",
]


class Generator(NamedTuple):
    """``S(i, a)`` has ``j = b = 0``; ``T(i, j, a, b)`` needs ``i < j``."""

    kind: str
    i: int
    j: int
    a: int
    b: int

    @property
    def sites(self) -> tuple[int, ...]:
        return (self.i,) if self.kind == "S" else (self.i, self.j)

    def __str__(self):
        if self.kind == "S":
            return f"S{self.i}^{self.a}"
        return f"T{self.i}{self.j}^{{{self.a},{self.b}}}"


def S(i: int, a: int) -> Generator:
    return Generator("S", i, 0, a, 0)


def T(i: int, j: int, a: int, b: int) -> Generator:
    if not i < j:
        raise ValueError(f"T generators need i < j, got ({i}, {j})")
    return Generator("T", i, j, a, b)


class Letter(NamedTuple):
    gen: Generator
    star: bool = False

    def __str__(self):
        return f"{self.gen}*" if self.star else str(self.gen)


@dataclass(frozen=True)
class HermiticityConfig:
    """S letters are always Hermitian; T letters are Hermitian unless ``t_hermitian`` is off."""

    t_hermitian: bool = True

    def is_hermitian(self, gen: Generator) -> bool:
        return gen.kind == "S" or self.t_hermitian

    def normalize(self, letter: Letter) -> Letter:
        if letter.star and self.is_hermitian(letter.gen):
            return Letter(letter.gen)
        return letter

    def adjoint_letter(self, letter: Letter) -> Letter:
        if self.is_hermitian(letter.gen):
            return Letter(letter.gen)
        return Letter(letter.gen, not letter.star)


DEFAULT_CONFIG = HermiticityConfig()

Word = tuple  # tuple[Letter, ...]


def format_word(word: Word) -> str:
    return " · ".join(str(x) for x in word) if word else "1"


def adjoint_word(word: Word, config: HermiticityConfig = DEFAULT_CONFIG) -> Word:
    return tuple(config.adjoint_letter(x) for x in reversed(word))


class NcPoly:
    """Map from words to exact complex coefficients; zeros are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            c = as_exact(c)
            if c:
                clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def _trusted(cls, terms):
        p = cls.__new__(cls)
        p.terms = {w: c for w, c in terms.items() if c}
        return p

    @classmethod
    def unit(cls, coeff=1) -> "NcPoly":
        return cls({(): coeff})

    @classmethod
    def letter(cls, x: Letter | Generator, coeff=1) -> "NcPoly":
        if isinstance(x, Generator):
            x = Letter(x)
        return cls({(x,): coeff})

    def __add__(self, other):
        if not isinstance(other, NcPoly):
            other = NcPoly.unit(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return NcPoly._trusted(out)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly._trusted({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NcPoly):
            other = NcPoly.unit(other)
        return self + (-other)

    def scale(self, c) -> "NcPoly":
        c = as_exact(c)
        return NcPoly._trusted({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                c = a * b
                out[w] = out[w] + c if w in out else c
        return NcPoly._trusted(out)

    def __rmul__(self, other):
        return self.scale(other)

    def adjoint(self, config: HermiticityConfig = DEFAULT_CONFIG) -> "NcPoly":
        return NcPoly._trusted({adjoint_word(w, config): c.conjugate() for w, c in self.terms.items()})

    def normalize_letters(self, config: HermiticityConfig) -> "NcPoly":
        out: dict = {}
        for w, c in self.terms.items():
            w = tuple(config.normalize(x) for x in w)
            out[w] = out[w] + c if w in out else c
        return NcPoly._trusted(out)

    def is_hermitian(self, config: HermiticityConfig = DEFAULT_CONFIG) -> bool:
        return self.normalize_letters(config) == self.adjoint(config).normalize_letters(config)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def constant(self) -> ExactComplex:
        return self.terms.get((), ExactComplex(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def normalized(self) -> "NcPoly":
        """Scale so the leading (largest) word has coefficient 1."""
        if not self.terms:
            return self
        lead = max(self.terms, key=lambda w: (len(w), w))
        return self.scale(ExactComplex(1) / self.terms[lead])

    def key(self):
        return tuple(sorted(((w, c.re, c.im) for w, c in self.terms.items()), key=lambda t: (len(t[0]), t[0])))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "NcPoly(0)"
        return "NcPoly(" + " + ".join(f"{c}*[{format_word(w)}]" for w, c in self.sorted_terms()) + ")"


def alphabet(n: int, config: HermiticityConfig = DEFAULT_CONFIG, sites: Iterable[int] | None = None) -> list[Letter]:
    """Ordered letters: all S by (site, axis), then T by (i, j, a, b), then starred T if T is free."""
    sites = sorted(set(range(1, n + 1) if sites is None else sites))
    out = [Letter(S(i, a)) for i in sites for a in (1, 2, 3)]
    ts = [Letter(T(i, j, a, b)) for idx, i in enumerate(sites) for j in sites[idx + 1:] for a in (1, 2, 3) for b in (1, 2, 3)]
    out += ts
    if not config.t_hermitian:
        out += [Letter(x.gen, True) for x in ts]
    return out


def enumerate_words(n: int, k: int, config: HermiticityConfig = DEFAULT_CONFIG, sites=None) -> list[Word]:
    """All words of degree <= k, graded lexicographic by (degree, letter index)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    letters = alphabet(n, config, sites)
    out: list[Word] = [()]
    for d in range(1, k + 1):
        out.extend(product(letters, repeat=d))
    return out
