"""Run every verification on every built-in fixture pair and print a summary table.

    python scripts/verify_all_fixtures.py [--samples 20] [--seed 0] [--degrees 1 2] [--json out.json]

Exit status is 0 iff every check passes.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from delcoh.cone import verify_les
from delcoh.fixtures import PAIRS
from delcoh.sequences import verify_les4, verify_mixed_les, verify_thm_diagram


@dataclass
class RunConfig:
    samples: int = 20
    seed: int = 0
    degrees: tuple[int, ...] = (1, 2)
    les_range: tuple[int, int] = (0, 3)
    pairs: tuple[str, ...] = field(default_factory=lambda: tuple(sorted(PAIRS)))


def run(cfg: RunConfig):
    reports = []
    for name in cfg.pairs:
        f = PAIRS[name]()
        for coeff in ("Z", "Q"):
            reports.append((name, "-", f"LES/{coeff}", verify_les(f, coeff, cfg.les_range)))
        for p in cfg.degrees:
            for tag in ("LES1", "LES2", "LES3"):
                reports.append((name, p, tag, verify_mixed_les(f, p, tag, cfg.samples, cfg.seed)))
            reports.append((name, p, "LES4", verify_les4(f, p, cfg.samples, cfg.seed)))
            reports.append((name, p, "diagram", verify_thm_diagram(f, p, cfg.samples, cfg.seed)))
    return reports


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=RunConfig.samples)
    ap.add_argument("--seed", type=int, default=RunConfig.seed)
    ap.add_argument("--degrees", type=int, nargs="+", default=list(RunConfig().degrees))
    ap.add_argument("--json", help="also write all reports to this file")
    args = ap.parse_args(argv)
    cfg = RunConfig(samples=args.samples, seed=args.seed, degrees=tuple(args.degrees))

    t0 = time.perf_counter()
    reports = run(cfg)
    dt = time.perf_counter() - t0
    print(f"{'pair':<10} {'p':>2} {'check':<9} {'nodes':>5}  status")
    for name, p, tag, rep in reports:
        print(f"{name:<10} {p!s:>2} {tag:<9} {len(rep.nodes):>5}  {'PASS' if rep.passed else 'FAIL'}")
        for node in rep.failures():
            print(f"    FAIL {node.label}: {node.details}")
    ok = all(rep.passed for *_, rep in reports)
    print(f"{len(reports)} reports, {'all PASS' if ok else 'FAILURES'} in {dt:.1f}s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([{"pair": n, "p": p, "check": t, "report": r.to_dict()} for n, p, t, r in reports],
                      fh, sort_keys=True, indent=1, ensure_ascii=False)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
