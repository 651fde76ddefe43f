"""Freeze sample_character(seed=0) outputs into tests/golden/sample_character_seed0.json.

The golden file pins the sampler: any change to the RNG stream or to the node
layouts shows up as a test failure.  Regenerate deliberately with
    python scripts/make_golden.py
"""

import json
from pathlib import Path

from delcoh.fixtures import PAIRS
from delcoh.sequences import KINDS, sample_character
from delcoh.workspace import character_entry

OUT = Path(__file__).resolve().parent.parent / "tests" / "golden" / "sample_character_seed0.json"


def golden() -> dict:
    out = {}
    for name in sorted(PAIRS):
        f = PAIRS[name]()
        for p in (1, 2):
            for kind in KINDS:
                r = sample_character(f, p, kind, seed=0)
                if kind == "absolute-X":
                    e = character_entry("x", r, complex_name="X")
                elif kind == "absolute-Y":
                    e = character_entry("x", r, complex_name="Y")
                else:
                    e = character_entry("x", r, map_name=name)
                del e["name"]
                out[f"{name}/p={p}/{kind}"] = e
    return out


def main() -> None:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(golden(), sort_keys=True, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
