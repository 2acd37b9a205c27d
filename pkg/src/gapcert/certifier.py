"""Spectral-gap certificates: gap ≥ A − 2B.

A is a certified lower bound on λ1 + λ2 and B a certified upper bound on
λ1, so λ2 − λ1 = (λ1 + λ2) − 2λ1 ≥ A − 2B. Each bound already carries its
own rigor margin in the one-sided direction; nothing cancels.
"""

from __future__ import annotations

import hashlib
import json
import math
import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from . import __version__
from .errors import DomainError, InputError, SolverError
from .ncpoly import DEFAULT_CONFIG, HermiticityConfig
from .oracle import load_constants
from .pauli import PauliPoly, hamiltonian_to_json, to_matrix
from .report import BoundReport

__all__ = ["GapCertificate", "certify_gap", "default_cliques", "hamiltonian_hash", "SCHEMA"]

SCHEMA = "gapcert-certificate/1"

# fields that change from run to run without changing the mathematics
VOLATILE = ("created", "wall_time", "build_seconds", "platform")


def hamiltonian_hash(h: PauliPoly) -> str:
    return hashlib.sha256(json.dumps(hamiltonian_to_json(h), sort_keys=True).encode()).hexdigest()


@dataclass
class GapCertificate:
    n: int
    A: dict
    B: dict
    provenance: dict = field(default_factory=dict)

    @property
    def gap_lower_bound(self) -> float:
        """Recomputed from the stored bounds every time it is read."""
        a, b = self.A.get("certified_bound"), self.B.get("certified_bound")
        if a is None or b is None:
            return -math.inf
        return float(a) - 2.0 * float(b)

    @property
    def nontrivial(self) -> bool:
        return self.gap_lower_bound > 0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "n": self.n,
            "A": self.A,
            "B": self.B,
            "gap_lower_bound": self.gap_lower_bound,
            "nontrivial": self.nontrivial,
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "GapCertificate":
        if data.get("schema") != SCHEMA:
            raise InputError(f"unknown certificate schema {data.get('schema')!r}")
        try:
            cert = cls(int(data["n"]), dict(data["A"]), dict(data["B"]), dict(data.get("provenance", {})))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc
        stored = data.get("gap_lower_bound")
        if stored is not None and not math.isclose(stored, cert.gap_lower_bound, rel_tol=0, abs_tol=1e-12):
            raise InputError(f"stored gap_lower_bound {stored} disagrees with A - 2B = {cert.gap_lower_bound}")
        return cert

    def stable_json(self) -> dict:
        """The certificate without timings and timestamps, for determinism checks."""

        def strip(obj):
            if isinstance(obj, dict):
                return {k: strip(v) for k, v in obj.items() if k not in VOLATILE}
            if isinstance(obj, list):
                return [strip(v) for v in obj]
            return obj

        return strip(self.to_json())


def default_cliques(h: PauliPoly, k: int):
    """Clique layout used when none is given.

    Up to two sites the full relaxation is used. From three sites on, each
    single site gets level k and every multi-site term support gets level 1;
    this is a sub-relaxation, hence still a valid lower bound.
    """
    if h.n <= 2:
        return None
    out = [((i,), k) for i in range(1, h.n + 1)]
    sups = {p.support for p in h.terms if p.weight >= 2}
    maximal = [s for s in sups if not any(set(s) < set(t) for t in sups)]
    out += [(tuple(s), 1) for s in sorted(maximal, key=lambda s: (len(s), s))]
    return out


def _closed_form_n1(h: PauliPoly) -> tuple[BoundReport, BoundReport]:
    """n = 1: λ1 + λ2 = tr H and λ1 from the 2×2 spectrum, both with float margins."""
    m = to_matrix(h)
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    scale = 1.0 + float(np.abs(m).max())
    eps = 16 * np.finfo(float).eps * scale
    tr = float(np.trace(m).real)
    a = BoundReport(tr, tr, tr - eps, eps, 0.0, 0.0, 0.0, 0, "optimal", 0.0, "closed-form")
    b = BoundReport(float(vals[0]), float(vals[0]), float(vals[0]) + eps, eps, 0.0, 0.0, 0.0, 0, "optimal", 0.0, "closed-form")
    return a, b


def certify_gap(
    h: PauliPoly,
    k: int = 2,
    upper_method: str = "eeb",
    d: int | None = None,
    cliques: Sequence | str | None = "auto",
    config: HermiticityConfig = DEFAULT_CONFIG,
    pair_mode: str = "validated",
    tol: float = 1e-8,
    log=None,
) -> GapCertificate:
    """Run both bounds and combine them.

    Errors from either stage are re-raised as :class:`SolverError` with the
    stage named in the message.
    """
    from .lower_bound import solve_lower
    from .upper_bounds import eeb_upper, lasserre_upper

    if upper_method not in ("lasserre", "eeb"):
        raise InputError(f"unknown upper-bound method {upper_method!r}")
    if not h.is_hermitian():
        raise DomainError("Hamiltonian must have real Pauli coefficients")
    n = h.n
    if d is None:
        d = n
    t0 = time.perf_counter()
    settings = {
        "k": k,
        "upper_method": upper_method,
        "d": d,
        "tol": tol,
        "pair_mode": pair_mode,
        "t_hermitian": config.t_hermitian,
    }
    if n == 1:
        A, B = _closed_form_n1(h)
        settings["path"] = "closed-form n=1"
    else:
        if cliques == "auto":
            cliques = default_cliques(h, k)
        settings["cliques"] = None if cliques is None else (cliques if isinstance(cliques, str) else [[list(s), lv] for s, lv in cliques])
        try:
            A = solve_lower(h, k, config=config, cliques=cliques, pair_mode=pair_mode, tol=tol, log=log)
        except SolverError as exc:
            raise SolverError(f"lower-bound stage: {exc}", solution=exc.solution) from exc
        try:
            B = lasserre_upper(h, d, tol=tol) if upper_method == "lasserre" else eeb_upper(h, d, tol=tol)
        except SolverError as exc:
            raise SolverError(f"upper-bound stage ({upper_method}): {exc}", solution=exc.solution) from exc
    consts = load_constants()
    prov = {
        "input_hash": hamiltonian_hash(h),
        "constants_hash": consts["hash"],
        "settings": settings,
        "gapcert_version": __version__,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_time": time.perf_counter() - t0,
        "platform": platform.platform(),
    }
    return GapCertificate(n, A.to_json(), B.to_json(), prov)
