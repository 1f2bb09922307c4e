"""Command-line interface: ``mergedecomp <subcommand> ...``.

Exit codes: 0 success (or SEPARABLE), 3 INSEPARABLE, 2 usage, input or cap
errors, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import MergeDecompError, ResourceError, VerificationError
from .psat import FAMILY_CAP
from .sgcore.semigroup import CLOSURE_CAP, Semigroup

EXIT_OK, EXIT_ERROR, EXIT_INSEPARABLE, EXIT_VERIFY = 0, 2, 3, 4

SUBCOMMANDS = ("gen", "pointlikes", "witness", "decompose", "merge-check", "separate", "selftest")


@dataclass
class CommandPlan:
    subcommand: str
    inputs: list[Path] = field(default_factory=list)
    cap: int = CLOSURE_CAP
    family_cap: int = FAMILY_CAP
    max_depth: int = 64
    max_len: int = 6
    verbose: bool = False
    fixture: str | None = None
    t1: list[str] | None = None
    t2: list[str] | None = None
    only: list[int] | None = None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mergedecomp", description="Finite semigroup merge decompositions, pointlikes and separation.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive, default=CLOSURE_CAP, help="closure size cap (default %(default)s)")
    common.add_argument("--family-cap", type=_positive, default=FAMILY_CAP, help="saturation family cap (default %(default)s)")
    common.add_argument("--max-depth", type=_positive, default=64, help="recursion depth cap (default %(default)s)")
    common.add_argument("--max-len", type=_positive, default=6, help="longest word checked (default %(default)s)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    g = sub.add_parser("gen", parents=[common], help="close a .tgen file of transformations into a .sg table")
    g.add_argument("input", type=Path)
    g = sub.add_parser("pointlikes", parents=[common], help="print the aperiodic pointlike subsets of a .sg semigroup")
    g.add_argument("input", type=Path)
    g = sub.add_parser("witness", parents=[common], help="build and check the aperiodic witness for a .sg semigroup")
    g.add_argument("input", type=Path)
    g = sub.add_parser("decompose", parents=[common], help="print a verified decomposition certificate")
    g.add_argument("input", type=Path)
    g = sub.add_parser("merge-check", parents=[common], help="check the merge decomposition on all short words")
    g.add_argument("input", type=Path, nargs="?")
    g.add_argument("--fixture", choices=("lz2", "u1"))
    g.add_argument("--t1", nargs="+", metavar="ELEM", help="generators of T1 (labels or indices)")
    g.add_argument("--t2", nargs="+", metavar="ELEM", help="generators of T2 (labels or indices)")
    g = sub.add_parser("separate", parents=[common], help="decide first-order separability of two .dfa languages")
    g.add_argument("first", type=Path)
    g.add_argument("second", type=Path)
    g = sub.add_parser("selftest", parents=[common], help="run the acceptance suite on the fixture corpus")
    g.add_argument("--only", type=int, nargs="+", metavar="N", help="run only these criteria")
    return p


def parse_args(argv: Sequence[str] | None = None) -> CommandPlan:
    parser = build_parser()
    ns = parser.parse_args(argv)
    plan = CommandPlan(ns.subcommand, cap=ns.cap, family_cap=ns.family_cap, max_depth=ns.max_depth, max_len=ns.max_len, verbose=ns.verbose)
    if ns.subcommand == "separate":
        plan.inputs = [ns.first, ns.second]
    elif ns.subcommand == "merge-check":
        if (ns.input is None) == (ns.fixture is None):
            parser.error("merge-check takes exactly one of INPUT or --fixture")
        if ns.fixture and (ns.t1 or ns.t2):
            parser.error("--t1/--t2 apply to an INPUT semigroup, not to a fixture")
        if (ns.t1 is None) != (ns.t2 is None):
            parser.error("--t1 and --t2 must be given together")
        plan.inputs = [ns.input] if ns.input else []
        plan.fixture, plan.t1, plan.t2 = ns.fixture, ns.t1, ns.t2
    elif ns.subcommand == "selftest":
        plan.only = ns.only
    else:
        plan.inputs = [ns.input]
    for path in plan.inputs:
        if not path.is_file():
            parser.error(f"input file not found: {path}")
    return plan


# -- commands ---------------------------------------------------------------


def _load_sg(path: Path) -> Semigroup:
    from .sgcore.io import parse_sg

    return parse_sg(path.read_text())


def _element(S: Semigroup, token: str) -> int:
    if S.labels is not None and token in S.labels:
        return S.labels.index(token)
    try:
        v = int(token)
    except ValueError:
        raise MergeDecompError(f"unknown element {token!r}", "cli") from None
    if not 0 <= v < S.n:
        raise MergeDecompError(f"element index {v} out of range", "cli")
    return v


def cmd_gen(plan: CommandPlan, out) -> int:
    from .sgcore.io import format_sg, parse_tgen, transformation_semigroup

    maps = parse_tgen(plan.inputs[0].read_text())
    c = transformation_semigroup(maps, plan.cap)
    out.write(format_sg(c.semigroup))
    return EXIT_OK


def cmd_pointlikes(plan: CommandPlan, out) -> int:
    from .psat import henckell_pointlikes

    fam = henckell_pointlikes(_load_sg(plan.inputs[0]), plan.family_cap)
    out.write(fam.format())
    return EXIT_OK


def cmd_witness(plan: CommandPlan, out) -> int:
    from .psat import format_subset
    from .witness import format_witness, pointlikes_with_certificate

    S = _load_sg(plan.inputs[0])
    cert = pointlikes_with_certificate(S, plan.max_len, plan.cap)
    w = cert.witness
    out.write(f"|S| = {S.n}\n|A| = {len(w.phi.alphabet)}\n|T| = {w.T.n}\ndepth = {w.depth}\n")
    out.write(f"k(phi) = {cert.k}\nk(2^|A| variant) = {cert.k_statement}\n")
    for t in range(w.T.n):
        member = "in Sat" if w.P[t] in cert.family.members else "NOT in Sat"
        out.write(f"fiber {w.T.label(t)}: {format_subset(S, w.P[t])} {member}\n")
    for name, ok in cert.checks.items():
        out.write(f"check {name}: {'ok' if ok else 'FAIL'}\n")
    out.write(f"cross-validation: {'agree' if cert.checks['families agree'] else 'DISAGREE'} ({len(cert.family)} pointlike sets)\n")
    if plan.verbose:
        out.write(format_witness(w))
    return EXIT_OK if cert.ok else EXIT_VERIFY


def cmd_decompose(plan: CommandPlan, out) -> int:
    from .krd import format_certificate, kr_decompose, verify_tree

    S = _load_sg(plan.inputs[0])
    t = kr_decompose(S, plan.cap, plan.max_depth)
    rep = verify_tree(t)
    out.write(format_certificate(t, rep))
    inv = ", ".join(f"{kind}[{n}] x{c}" for (kind, n), c in sorted(rep.leaves.items()))
    out.write(f"leaves: {inv}\n")
    out.write(f"depth: {t.depth}\n")
    out.write(f"verify: {'ok' if rep.ok else 'FAIL'}\n")
    for f in rep.failures():
        out.write(f"  {f.path} {f.kind}: {f.status}\n")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_merge_check(plan: CommandPlan, out) -> int:
    from .krd import minimal_generating_set
    from .merge import division_from_cover, lz2_input, u1_input, verify_merge
    from .sgcore.semigroup import generated_mask, mask_elements

    division_ok = True
    if plan.fixture:
        inp = {"lz2": lz2_input, "u1": u1_input}[plan.fixture]()
    else:
        S = _load_sg(plan.inputs[0])
        if plan.t1 is not None:
            g1 = [_element(S, x) for x in plan.t1]
            g2 = [_element(S, x) for x in plan.t2]
        else:
            A = minimal_generating_set(S)
            if len(A) < 2:
                raise MergeDecompError("S is cyclic; give --t1 and --t2 explicitly", "cli")
            g1, g2 = A[:1], A[1:]
        T1 = mask_elements(generated_mask(S, g1))
        T2 = mask_elements(generated_mask(S, g2))
        cd = division_from_cover(S, T1, T2, plan.cap)
        inp = cd.merge.input
        division_ok = bool(cd.division.check())
        out.write(f"cover: |T1| = {len(T1)}, |T2| = {len(T2)}, |T0| = {len(cd.T0)}\n")
        out.write(f"division of S into the merge image: {'ok' if division_ok else 'FAIL'}\n")
    out.write(f"fixture: {plan.fixture}\n" if plan.fixture else f"input: {plan.inputs[0].name}\n")
    rep = verify_merge(inp, plan.max_len, cap=plan.cap)
    out.write(f"image size: {rep.image_size}\nwords checked: {rep.words_checked} (length <= {plan.max_len})\n")
    out.write(f"counterexamples: {len(rep.counterexamples)}\n")
    for w, got, want in rep.counterexamples[:10]:
        out.write(f"  {' '.join(map(str, w))}: f(psi_M(w)) = {got}, tau(w) = {want}\n")
    return EXIT_OK if rep.ok and division_ok else EXIT_VERIFY


def cmd_separate(plan: CommandPlan, out) -> int:
    from .langsep import decide_fo_separability, parse_dfa

    d1 = parse_dfa(plan.inputs[0].read_text())
    d2 = parse_dfa(plan.inputs[1].read_text())
    v = decide_fo_separability(d1, d2, plan.cap)
    out.write(v.format() + "\n")
    return EXIT_OK if v.separable else EXIT_INSEPARABLE


def cmd_selftest(plan: CommandPlan, out) -> int:
    from .selftest import format_report, run_selftest

    results = run_selftest(set(plan.only) if plan.only else None)
    out.write(format_report(results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VERIFY


COMMANDS = {
    "gen": cmd_gen,
    "pointlikes": cmd_pointlikes,
    "witness": cmd_witness,
    "decompose": cmd_decompose,
    "merge-check": cmd_merge_check,
    "separate": cmd_separate,
    "selftest": cmd_selftest,
}


def run(plan: CommandPlan, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[plan.subcommand](plan, out)
    except ResourceError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    except VerificationError as exc:
        err.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except MergeDecompError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        err.write(f"error: [cli] {exc}\n")
        return EXIT_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
