"""Command line front end: ``delcoh {cohomology,relative,holonomy,verify}``.

Exit codes: 0 success (and all checks PASS), 1 parse or validation error,
2 unknown name, 3 mathematical precondition violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .characters import CharacterRep, rel_holonomy
from .cone import relative_cohomology
from .core_algebra import frac_mod1
from .report import VerificationReport
from .sequences import DEFAULT_SAMPLES, verify_les4, verify_mixed_les, verify_thm_diagram
from .simplicial import Chain, cohomology
from .workspace import EXIT_INVALID, EXIT_MATH, EXIT_OK, WorkspaceError, load_workspace

WHICH = ("les1", "les2", "les3", "les4", "diagram", "all")


def _q(x) -> str:
    x = frac_mod1(x)
    return f"{x.numerator}/{x.denominator}"


def cmd_cohomology(args) -> int:
    ws = load_workspace(args.workspace)
    K = ws.complex(args.complex)
    print(cohomology(K, args.degree, args.coeff))
    return EXIT_OK


def cmd_relative(args) -> int:
    ws = load_workspace(args.workspace)
    f = ws.map(args.map)
    print(relative_cohomology(f, args.degree, args.coeff))
    return EXIT_OK


def cmd_holonomy(args) -> int:
    ws = load_workspace(args.workspace)
    r = ws.character(args.character)
    z = ws.cycle(args.cycle)
    if isinstance(r, CharacterRep):
        if not isinstance(z, Chain) or z.complex != r.K:
            raise WorkspaceError("an absolute character needs an absolute cycle on the same complex", EXIT_MATH)
        if z.degree != r.p:
            raise WorkspaceError(f"degree mismatch: character {r.p}, cycle {z.degree}", EXIT_MATH)
        if z.degree >= 1 and not z.boundary().is_zero():
            raise WorkspaceError("the chain is not a cycle", EXIT_MATH)
        print(_q(r.holonomy(z.coefficients)))
        return EXIT_OK
    if isinstance(z, Chain):
        raise WorkspaceError("a relative character needs a relative cycle", EXIT_MATH)
    try:
        print(_q(rel_holonomy(r, z)))
    except ValueError as e:
        raise WorkspaceError(str(e), EXIT_MATH) from None
    return EXIT_OK


def run_verify(f, p: int, which: str, samples: int, seed: int) -> list[VerificationReport]:
    todo = ["les1", "les2", "les3", "les4", "diagram"] if which == "all" else [which]
    out = []
    for w in todo:
        if w in ("les1", "les2", "les3"):
            out.append(verify_mixed_les(f, p, w.upper(), samples, seed))
        elif w == "les4":
            out.append(verify_les4(f, p, samples, seed))
        else:
            out.append(verify_thm_diagram(f, p, samples, seed))
    return out


def cmd_verify(args) -> int:
    ws = load_workspace(args.workspace)
    f = ws.map(args.map)
    seed = args.seed
    env = os.environ.get("DELCOH_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise WorkspaceError(f"DELCOH_SEED must be an integer, got {env!r}", EXIT_INVALID) from None
    if args.p < 1:
        raise WorkspaceError("verification needs p >= 1", EXIT_MATH)
    reports = run_verify(f, args.p, args.which, args.samples, seed)
    if args.format == "json":
        print(json.dumps({"reports": [r.to_dict() for r in reports]}, sort_keys=True, indent=1, ensure_ascii=False))
    else:
        print("\n".join(r.to_text(witnesses=args.witnesses) for r in reports))
    return EXIT_OK if all(r.passed for r in reports) else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are parse errors (exit 1), not unknown references
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="delcoh", description="Relative Deligne cohomology and differential characters")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("cohomology", help="H^n(K) of a complex")
    c.add_argument("workspace")
    c.add_argument("complex")
    c.add_argument("degree", type=int)
    c.add_argument("--coeff", choices=("Z", "Q", "RZ"), default="Z")
    c.set_defaults(func=cmd_cohomology)

    r = sub.add_parser("relative", help="H^n(X, Y, f) of a map")
    r.add_argument("workspace")
    r.add_argument("map")
    r.add_argument("degree", type=int)
    r.add_argument("--coeff", choices=("Z", "Q", "RZ"), default="Z")
    r.set_defaults(func=cmd_relative)

    h = sub.add_parser("holonomy", help="holonomy of a character on a cycle, as a/b in [0, 1)")
    h.add_argument("workspace")
    h.add_argument("character")
    h.add_argument("cycle")
    h.set_defaults(func=cmd_holonomy)

    v = sub.add_parser("verify", help="check the mixed exact sequences and the three-row diagram")
    v.add_argument("workspace")
    v.add_argument("map")
    v.add_argument("p", type=int)
    v.add_argument("--which", choices=WHICH, default="all")
    v.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--witnesses", action="store_true", help="print preimage witnesses in text output")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WorkspaceError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
