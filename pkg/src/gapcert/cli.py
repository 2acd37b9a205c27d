"""Command-line entry point.

Exit codes: 0 success, 1 trivial certificate under --require-nontrivial,
2 input error, 3 solver failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import (
    DegreeError,
    DimensionError,
    DomainError,
    InputError,
    RelationError,
    ResourceError,
    SolverError,
    VerificationError,
)
from .pauli import PauliPoly, load_hamiltonian

log = logging.getLogger("gapcert")

EXIT_OK, EXIT_TRIVIAL, EXIT_INPUT, EXIT_SOLVER, EXIT_VERIFY = 0, 1, 2, 3, 4

CLIQUE_CHOICES = ("auto", "full", "sites", "support")


@dataclass
class RunConfig:
    """Validated flags for one invocation. Defaults match the argparse ones."""

    subcommand: str
    hamiltonian: Path | None = None
    level: int = 2
    upper: str = "eeb"
    degree: int | None = None
    solver: str = "internal"
    tol: float = 1e-8
    out: Path | None = None
    cliques: str = "auto"
    verbosity: int = 0

    def validate(self):
        if self.level is not None and self.level < 0:
            raise InputError("--level must be non-negative")
        if self.degree is not None and self.degree < 0:
            raise InputError("--degree must be non-negative")
        if not self.tol > 0:
            raise InputError("--tol must be positive")
        if self.hamiltonian is not None and not self.hamiltonian.is_file():
            raise InputError(f"{self.hamiltonian}: no such file")
        return self


def _cliques(choice: str, h: PauliPoly, k: int):
    from .certifier import default_cliques

    if choice == "auto":
        return default_cliques(h, k)
    return None if choice == "full" else choice


def _emit(payload: dict, out: Path | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out is not None:
        out.write_text(text + "\n")
        log.info("wrote %s", out)
    print(text)


def _say(msg: str):
    log.info(msg)


# -- subcommands ----------------------------------------------------------------


def cmd_certify(cfg: RunConfig, args) -> int:
    from .certifier import certify_gap

    h = load_hamiltonian(cfg.hamiltonian)
    if cfg.solver == "export-only":
        return _export(cfg, h)
    cert = certify_gap(h, cfg.level, cfg.upper, cfg.degree, cliques=_cliques(cfg.cliques, h, cfg.level), tol=cfg.tol, log=_say)
    _emit(cert.to_json(), cfg.out)
    if args.require_nontrivial and not cert.nontrivial:
        log.warning("certificate is trivial: gap >= %.6g", cert.gap_lower_bound)
        return EXIT_TRIVIAL
    return EXIT_OK


def cmd_lower(cfg: RunConfig, args) -> int:
    from .lower_bound import solve_lower

    h = load_hamiltonian(cfg.hamiltonian)
    rep = solve_lower(h, cfg.level, cliques=_cliques(cfg.cliques, h, cfg.level), tol=cfg.tol, log=_say)
    _emit(rep.to_json(), cfg.out)
    return EXIT_OK


def cmd_upper(cfg: RunConfig, args) -> int:
    from .upper_bounds import eeb_upper, lasserre_upper

    h = load_hamiltonian(cfg.hamiltonian)
    d = h.n if cfg.degree is None else cfg.degree
    rep = lasserre_upper(h, d, tol=cfg.tol) if cfg.upper == "lasserre" else eeb_upper(h, d, tol=cfg.tol)
    _emit(rep.to_json(), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    from . import oracle
    from .genrel import gen_relations, span_check, verify_relations

    n = args.n
    if n < 1:
        raise InputError("--n must be positive")
    results = {}
    failed = []

    def run(name, fn):
        try:
            results[name] = fn()
        except (RelationError, VerificationError) as exc:
            results[name] = {"ok": False, "error": str(exc)}
            failed.append(name)

    def rep(r):
        if not r.ok:
            failed.append(r.name)
        return {"ok": r.ok, **r.details}

    if n >= 2:
        run("relations", lambda: verify_relations(gen_relations(n)).counts)
    if n <= 4:
        run("span_check", lambda: {"rank": span_check(n)})
    if n <= 5:
        run("plethysm", lambda: rep(oracle.verify_plethysm(n)))
    if n <= oracle.ANTISYM_CAP:
        run("eigenvalue_constraint", lambda: rep(oracle.verify_eigenvalue_constraint(n)))
        run("site_constraint", lambda: rep(oracle.verify_site_constraint(n)))
        if n >= 2:
            used = oracle.pair_bound(n, "validated")
            run("pair_constraint", lambda: rep(oracle.verify_pair_constraint(n, used)))
            # C4 itself is only valid for n = 2; reported, fatal only on request
            c4 = oracle.verify_pair_constraint(n)
            results["pair_constraint_C4"] = {"ok": c4.ok, "fatal": args.strict_c4, **c4.details}
            if args.strict_c4 and not c4.ok:
                failed.append("pair_constraint_C4")
    _emit({"n": n, "suites": results, "failed": failed, "ok": not failed}, cfg.out)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_derive(cfg: RunConfig, args) -> int:
    from .oracle import derive_constants, load_constants

    table = derive_constants()
    _emit(table, cfg.out)
    if args.check and table["hash"] != load_constants()["hash"]:
        log.error("derived constants differ from the packaged table")
        return EXIT_VERIFY
    return EXIT_OK


def _export(cfg: RunConfig, h: PauliPoly) -> int:
    from .lower_bound import prepare_lower
    from .sdp import export_sdpa

    if cfg.out is None:
        raise InputError("--out is required for SDPA export")
    npa = prepare_lower(h, cfg.level, cliques=_cliques(cfg.cliques, h, cfg.level), log=_say)
    export_sdpa(npa.sdp, cfg.out)
    meta = {
        "file": str(cfg.out),
        "level": cfg.level,
        "sense": npa.sdp.sense,
        "offset": npa.sdp.offset,
        "m": npa.sdp.m,
        "block_sizes": [b.dim for b in npa.sdp.blocks],
        "stats": npa.stats,
    }
    print(json.dumps(meta, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_export(cfg: RunConfig, args) -> int:
    return _export(cfg, load_hamiltonian(cfg.hamiltonian))


def cmd_check(cfg: RunConfig, args) -> int:
    from .certifier import GapCertificate

    try:
        data = json.loads(Path(args.certificate).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{args.certificate}: {exc}") from exc
    cert = GapCertificate.from_json(data)
    print(json.dumps({"gap_lower_bound": cert.gap_lower_bound, "nontrivial": cert.nontrivial}))
    if args.require_nontrivial and not cert.nontrivial:
        return EXIT_TRIVIAL
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gapcert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gapcert {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="progress on stderr (-vv for debug)")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, level=True, upper=False):
        sp.add_argument("--hamiltonian", required=True, type=Path, help="Hamiltonian JSON file")
        if level:
            sp.add_argument("--level", type=int, default=2, help="NPA level k (default 2)")
            sp.add_argument("--cliques", choices=CLIQUE_CHOICES, default="auto",
                            help="moment-matrix layout; auto = full for n<=2, sparse otherwise")
        if upper:
            sp.add_argument("--upper", choices=("lasserre", "eeb"), default="eeb")
            sp.add_argument("--degree", type=int, default=None, help="upper-bound degree d (default n)")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--out", type=Path, default=None)

    sp = sub.add_parser("certify-gap", help="certify gap >= A - 2B")
    common(sp, upper=True)
    sp.add_argument("--solver", choices=("internal", "export-only"), default="internal")
    sp.add_argument("--require-nontrivial", action="store_true")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("lower-bound", help="certified lower bound on lambda1 + lambda2")
    common(sp)
    sp.set_defaults(func=cmd_lower)

    sp = sub.add_parser("upper-bound", help="certified upper bound on lambda1")
    common(sp, level=False, upper=True)
    sp.set_defaults(func=cmd_upper)

    sp = sub.add_parser("verify", help="exact-algebra and representation suites")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--strict-c4", action="store_true",
                    help="also fail when C4 does not bound the pair operator (expected for n >= 3)")
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("derive-constants", help="recompute the constants table")
    sp.add_argument("--check", action="store_true", help="exit 4 if it differs from the packaged table")
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("export-sdpa", help="write the lower-bound SDP in SDPA sparse format")
    common(sp)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("check-certificate", help="re-read a certificate and recompute A - 2B")
    sp.add_argument("certificate", type=Path)
    sp.add_argument("--require-nontrivial", action="store_true")
    sp.set_defaults(func=cmd_check)
    return p


def _config(args) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        hamiltonian=getattr(args, "hamiltonian", None),
        level=getattr(args, "level", 2),
        upper=getattr(args, "upper", "eeb"),
        degree=getattr(args, "degree", None),
        solver=getattr(args, "solver", "internal"),
        tol=getattr(args, "tol", 1e-8),
        out=getattr(args, "out", None),
        cliques=getattr(args, "cliques", "auto"),
        verbosity=args.verbose,
    ).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(_config(args), args)
    except (InputError, DomainError, DegreeError, DimensionError, ResourceError) as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except SolverError as exc:
        log.error("solver failure: %s", exc)
        return EXIT_SOLVER
    except (VerificationError, RelationError) as exc:
        log.error("verification failure: %s", exc)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
