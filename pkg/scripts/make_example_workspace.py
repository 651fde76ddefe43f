"""Write docs/equator.jsonl, the worked example workspace for the equator ↪ ∂Δ³ pair.

Run from the repository root:  python scripts/make_example_workspace.py
"""

from fractions import Fraction
from pathlib import Path

from delcoh.characters import gauge_move, make_character, make_relative, phi_f
from delcoh.core_algebra import matvec
from delcoh.fixtures import circle, equator, sphere2
from delcoh.workspace import character_entry, complex_entry, dump_entries, map_entry

OUT = Path(__file__).resolve().parent.parent / "docs" / "equator.jsonl"


def main() -> None:
    X, Y = sphere2(), circle(3)
    f = equator()
    entries = [complex_entry("sphere", X), complex_entry("equator_circle", Y),
               map_entry("equator", f, "equator_circle", "sphere")]

    quarter = make_relative(f, 2, [Fraction(1, 4), 0, 0, 0], claimed_type="I")
    gauged = gauge_move(quarter, S_X=[Fraction(1, 3), 0, Fraction(-1, 2), 0, 0, 0], S_Y=[Fraction(1, 5), 0, 0],
                        u_X=[0, 1, 0, 0], u_Y=[0, 0, -1])
    trivial = make_relative(f, 2, [0, 0, 0, 0])
    # δs for s = 1/2 at vertex 1: a closed cochain with integral (zero) periods
    rho_tilde = matvec(X.coboundary(0), [0, Fraction(1, 2), 0, 0])
    half = phi_f(f, 1, rho_tilde)
    flat = make_character(Y, 1, [Fraction(1, 2), 0, Fraction(1, 3)])  # edges (01), (02), (12)

    entries += [
        character_entry("quarter_face", quarter, "equator"),
        character_entry("quarter_face_gauged", gauged, "equator"),
        character_entry("trivial", trivial, "equator"),
        character_entry("half_edge", half, "equator"),
        character_entry("flat_circle", flat, complex_name="equator_circle"),
        {"kind": "cycle", "name": "cap", "map": "equator", "degree": 2,
         "C": [[[0, 1, 2], 1]], "C_prime": [[[0, 1], -1], [[1, 2], -1], [[0, 2], 1]]},
        {"kind": "cycle", "name": "edge01", "map": "equator", "degree": 1,
         "C": [[[0, 1], 1]], "C_prime": [[[0], 1], [[1], -1]]},
        {"kind": "cycle", "name": "loop", "complex": "equator_circle", "degree": 1,
         "chain": [[[0, 1], 1], [[1, 2], 1], [[2, 0], 1]]},
    ]
    OUT.write_text(dump_entries(entries), encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
