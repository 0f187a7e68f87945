"""Command line front end.

Exit codes: 0 success / duality verified, 1 usage or input error,
2 finiteness certificate not established, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .corpus import builtin
from .duality import NOT_CERTIFIED, VERIFIED, DegreeOutOfRange, Duality, dual_report
from .report import InputError, load, report_json, report_text
from .wpoly import WPoly, canonical_names

EXIT_OK, EXIT_USAGE, EXIT_UNCERTIFIED, EXIT_MISMATCH = 0, 1, 2, 3

log = logging.getLogger("morleyduality")


def _verdict_code(verdict: str) -> int:
    return {VERIFIED: EXIT_OK, NOT_CERTIFIED: EXIT_UNCERTIFIED}.get(verdict, EXIT_MISMATCH)


def _fmt_vec(v) -> str:
    return "[" + ", ".join(str(x) for x in v) + "]"


def _fmt_matrix(m) -> list[str]:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return [f"({m.shape[0]}x{m.shape[1]} matrix)"]
    return ["  " + _fmt_vec(row) for row in m]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="system description file")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here (check)")
    common.add_argument("--slack", type=int, help="window above delta (default max m + max d)")
    common.add_argument("--search-bound", type=int, help="certificate search bound (default sum d + max m)")
    common.add_argument("--nu", type=int, help="internal degree")
    common.add_argument("--p", type=int, help="homological index")
    common.add_argument("--quiet", action="store_true", help="suppress normal output")

    parser = argparse.ArgumentParser(prog="morleyduality", parents=[common],
                                     description="Morley forms and the Koszul-homology duality.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("hilbert", "Hilbert function of B and the finiteness certificate"),
        ("homology", "dimension and class representatives of H_p(K)_nu"),
        ("delta", "the Morley form Delta"),
        ("lambda", "the form Lambda"),
        ("nabla", "the bigraded component nabla_{nu, delta-nu}"),
        ("omega", "matrix of omega_nu into the torsion of H_{r-n}"),
        ("check", "full duality report"),
        ("selftest", "run the built-in corpus"),
    ]:
        sub.add_parser(name, parents=[common], help=help_)
    return parser


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    def emit(line: str = ""):
        if not args.quiet:
            out.write(line + "\n")

    try:
        if args.command == "selftest":
            return _selftest(args, emit)
        _require(args, "input")
        inp, cfg = load(args.input)
        dual = Duality(cfg, args.slack, args.search_bound)
        return COMMANDS[args.command](args, inp, dual, emit, out)
    except (InputError, DegreeOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _hilbert(args, inp, dual, emit, out) -> int:
    if dual.certified:
        top = max(dual.s0 - 1, 0)
        emit(f"certificate: certified, s0 = {dual.s0}")
    else:
        top = dual.search_bound
        emit(f"certificate: not certified within search bound {dual.search_bound}")
    for q, h in enumerate(dual.quotient.hilbert(top)):
        emit(f"{q}: {h}")
    return EXIT_OK if dual.certified else EXIT_UNCERTIFIED


def _homology(args, inp, dual, emit, out) -> int:
    _require(args, "nu")
    p = dual.p if args.p is None else args.p
    h = dual.ctx.homology(p, args.nu)
    emit(f"H_{p}(K)_{args.nu}: dim K = {h.ambient}, cycles = {h.cycle_dim}, "
         f"boundaries = {h.boundary_dim}, homology = {h.dim}")
    names = canonical_names(dual.cfg.n, "X")
    for k in range(h.dim):
        unit = dual.field.eye(h.dim)[k]
        emit(f"  class {k + 1}: " + h.lift_chain(unit).format(names))
    return EXIT_OK


def _delta(args, inp, dual, emit, out) -> int:
    names = canonical_names(dual.cfg.n, "X") + canonical_names(dual.cfg.n, "Y")
    for t in dual.morley.delta.terms(names) or ["0"]:
        emit(t)
    return EXIT_OK


def _lambda(args, inp, dual, emit, out) -> int:
    for t in dual.morley.lam.terms(canonical_names(dual.cfg.n, "X")) or ["0"]:
        emit(t)
    return EXIT_OK


def _nabla(args, inp, dual, emit, out) -> int:
    _require(args, "nu")
    nu, q = args.nu, dual.delta - args.nu
    if not 0 <= nu <= dual.delta:
        raise DegreeOutOfRange(f"degree {nu} outside [0, {dual.delta}]")
    xs, ys = canonical_names(dual.cfg.n, "X"), canonical_names(dual.cfg.n, "Y")
    emit(f"nabla_({nu},{q}):")
    piece = dual.quotient.b_piece(q)
    for u, mono in zip(dual.quotient.dual_basis(q), piece.basis):
        label = WPoly(dual.cfg.ring, {mono: 1}).format(ys)
        chain = dual.omega_chain(u, nu)
        emit(f"  [{label}] ⊗ {chain.format(xs)}")
    return EXIT_OK


def _omega(args, inp, dual, emit, out) -> int:
    _require(args, "nu")
    if not dual.certified:
        emit("certificate not established; omega into the torsion is undefined here")
        return EXIT_UNCERTIFIED
    m = dual.omega_matrix(args.nu)
    emit(f"omega_{args.nu}: {m.shape[0]}x{m.shape[1]} (torsion x dual of B_{dual.delta - args.nu})")
    for line in _fmt_matrix(m):
        emit(line)
    return EXIT_OK


def _check(args, inp, dual, emit, out) -> int:
    rep = dual_report(dual)
    if args.json:
        Path(args.json).write_text(report_json(rep, inp))
    if not args.quiet:
        out.write(report_text(rep, inp))
    return _verdict_code(rep.verdict)


def _selftest(args, emit) -> int:
    failures = 0
    for name, cfg, expected in builtin():
        rep = dual_report(Duality(cfg, args.slack, args.search_bound))
        ok = rep.verdict == expected
        failures += not ok
        emit(f"{'PASS' if ok else 'FAIL'}  {name}: {rep.verdict}")
    emit(f"{failures} failure(s)")
    return EXIT_OK if failures == 0 else EXIT_MISMATCH


COMMANDS = {
    "hilbert": _hilbert,
    "homology": _homology,
    "delta": _delta,
    "lambda": _lambda,
    "nabla": _nabla,
    "omega": _omega,
    "check": _check,
}


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
