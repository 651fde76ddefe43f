"""Algebraic mapping cone of f^#, relative cohomology and its long exact sequence.

For ``f: Y -> X`` the cone in degree n is ``C^n(X) + C^{n-1}(Y)`` with

    D = [[ δ_X ,   0  ],
         [ f^# , -δ_Y ]]

acting on column vectors ``(a, b)``.  Its transpose is the relative boundary
``∂(C, C') = (∂C + f_*C', -∂C')``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core_algebra import (
    FGAbelianGroup,
    IntMatrix,
    RZModuleInvariants,
    block,
    hstack,
    integer_kernel,
    matvec,
    rational_solve,
    solve_integer,
    subquotient_structure,
)
from .report import VerificationReport, map_fingerprint
from .simplicial import Coefficients, SimplicialMap, cochain_cohomology

RINGS = ("Z", "Q", "RZ")


class ConeComplex:
    """The cone of the cochain map f^#: C^•(X) -> C^•(Y)."""

    def __init__(self, f: SimplicialMap, ring: Coefficients = "Z"):
        if ring not in RINGS:
            raise ValueError(f"unknown coefficient ring {ring!r}")
        self.f = f
        self.ring = ring
        self.X = f.target
        self.Y = f.source
        self._d: dict[int, IntMatrix] = {}

    def __repr__(self) -> str:
        return f"ConeComplex({self.f.name or '?'}, {self.ring})"

    def size(self, n: int) -> int:
        return self.X.count(n) + self.Y.count(n - 1)

    def split_at(self, n: int, v: Sequence) -> tuple[list, list]:
        k = self.X.count(n)
        if len(v) != self.size(n):
            raise ValueError(f"cone vector of length {len(v)} in degree {n} (expected {self.size(n)})")
        return list(v[:k]), list(v[k:])

    def join(self, a: Sequence, b: Sequence) -> list:
        return list(a) + list(b)

    def differential(self, n: int) -> IntMatrix:
        if n not in self._d:
            X, Y, f = self.X, self.Y, self.f
            self._d[n] = block([
                [X.coboundary(n), IntMatrix.zeros(X.count(n + 1), Y.count(n - 1))],
                [f.cochain_map(n), -Y.coboundary(n - 1)],
            ])
        return self._d[n]


def cone_differential(cone: ConeComplex, n: int, ring: Coefficients | None = None) -> IntMatrix:
    if ring is not None and ring != cone.ring:
        raise ValueError(f"ring mismatch: cone is over {cone.ring}, asked for {ring}")
    return cone.differential(n)


def relative_cohomology(f: SimplicialMap, n: int, coeff: Coefficients = "Z") -> FGAbelianGroup | RZModuleInvariants:
    """H^n(X, Y, f; coeff) as the cohomology of the cone."""
    if n < 0:
        raise ValueError("negative degree")
    return cochain_cohomology(ConeComplex(f, "Z").differential, n, coeff)


# --------------------------------------------------------------------------
# cohomology groups with generators, used for maps between them


@dataclass
class CohomologyGroup:
    """H^n of a cochain complex with explicit generators."""

    label: str
    d_prev: IntMatrix  # C^{n-1} -> C^n
    d_next: IntMatrix  # C^n -> C^{n+1}

    def __post_init__(self):
        self.cocycles = integer_kernel(self.d_next)
        self.structure = subquotient_structure(self.cocycles, self.d_prev)

    @property
    def dim(self) -> int:
        return self.d_next.cols

    def is_coboundary(self, v: Sequence[int]) -> bool:
        return bool(solve_integer(self.d_prev, v))

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """Coordinates of the class of the cocycle v on the structure generators.

        Torsion coordinates are reduced modulo their orders.
        """
        W = IntMatrix.from_columns([list(w) for w in self.structure.generator_witnesses], self.dim)
        sol = solve_integer(hstack(W, self.d_prev), v)
        if not sol:
            raise ValueError(f"not a cocycle of {self.label}: {sol.certificate}")
        k = len(self.structure.generator_witnesses)
        coords = sol.x[:k]
        for i, d in enumerate(self.structure.torsion):
            coords[i] %= d
        return coords


def _cone_groups(f: SimplicialMap, n: int):
    cone = ConeComplex(f)
    X, Y = f.target, f.source
    return (
        CohomologyGroup(f"H^{n - 1}(Y)", Y.coboundary(n - 2), Y.coboundary(n - 1)),
        CohomologyGroup(f"H^{n}(X,Y,f)", cone.differential(n - 1), cone.differential(n)),
        cone,
    )


def bockstein_vector(cone: ConeComplex, n: int, b: Sequence) -> list:
    """Cone cochain (0, b) of degree n for a (n-1)-cochain b on Y."""
    return [0] * cone.X.count(n) + list(b)


def connecting_hom(f: SimplicialMap, n: int, coeff: Coefficients = "Z") -> IntMatrix:
    """H^{n-1}(Y) -> H^n(X, Y, f), b -> [(0, b)], on the Smith-adapted generators.

    Rows index generators of the target, columns generators of the source.
    Over Q only the free generators are kept.
    """
    if coeff not in ("Z", "Q"):
        raise ValueError("connecting_hom is defined for Z or Q coefficients")
    HY, HC, cone = _cone_groups(f, n)
    cols = []
    for w in HY.structure.generator_witnesses:
        cols.append(HC.coordinates(bockstein_vector(cone, n, w)))
    M = IntMatrix.from_columns(cols, len(HC.structure.generator_witnesses))
    if coeff == "Q":
        tY, tC = len(HY.structure.torsion), len(HC.structure.torsion)
        M = M.submatrix(range(tC, M.rows), range(tY, M.cols))
    return M


# --------------------------------------------------------------------------
# exactness of the pure-coefficient long exact sequence


@dataclass
class _SeqNode:
    group: CohomologyGroup
    out_map: IntMatrix | None  # cochain-level map to the next node


def les_nodes(f: SimplicialMap, lo: int, hi: int) -> list[_SeqNode]:
    """... -> H^n(X,Y,f) -> H^n(X) -> H^n(Y) -> H^{n+1}(X,Y,f) -> ... for n in [lo, hi]."""
    cone = ConeComplex(f)
    X, Y = f.target, f.source
    nodes = []
    for n in range(lo, hi + 1):
        HC = CohomologyGroup(f"H^{n}(X,Y,f)", cone.differential(n - 1), cone.differential(n))
        HX = CohomologyGroup(f"H^{n}(X)", X.coboundary(n - 1), X.coboundary(n))
        HY = CohomologyGroup(f"H^{n}(Y)", Y.coboundary(n - 1), Y.coboundary(n))
        project = hstack(IntMatrix.identity(X.count(n)), IntMatrix.zeros(X.count(n), Y.count(n - 1)))
        restrict = f.cochain_map(n)
        bock = IntMatrix([[0] * Y.count(n) for _ in range(X.count(n + 1))] +
                         IntMatrix.identity(Y.count(n)).data,
                         X.count(n + 1) + Y.count(n), Y.count(n))
        nodes += [_SeqNode(HC, project), _SeqNode(HX, restrict), _SeqNode(HY, bock)]
    nodes[-1].out_map = None
    return nodes


def _image_preimage_lattices(A: CohomologyGroup, phi: IntMatrix, B: CohomologyGroup, psi: IntMatrix, C: CohomologyGroup):
    image = hstack(phi @ A.cocycles, B.d_prev)
    # kernel of psi on cocycles of B: psi Z a = d_C y
    Zb = B.cocycles
    sys_ = hstack(psi @ Zb, -C.d_prev)
    ker = integer_kernel(sys_)
    ker_cocycles = Zb @ ker.submatrix(range(Zb.cols), range(ker.cols))
    kernel = hstack(ker_cocycles, B.d_prev)
    return image, kernel


def verify_les(f: SimplicialMap, coeff: Coefficients = "Z", degrees: tuple[int, int] = (0, 3)) -> VerificationReport:
    """Certify exactness of the long exact sequence of f on the given degree range."""
    if coeff not in ("Z", "Q"):
        raise ValueError("element-level LES checks need Z or Q; R/Z nodes are handled by the sequences module")
    lo, hi = degrees
    nodes = les_nodes(f, lo, hi)
    rep = VerificationReport(f"LES of {f.name or 'f'} over {coeff}, degrees {lo}..{hi}",
                             fixture_hash=map_fingerprint(f))
    for k in range(1, len(nodes) - 1):
        A, B, C = nodes[k - 1].group, nodes[k].group, nodes[k + 1].group
        phi, psi = nodes[k - 1].out_map, nodes[k].out_map
        details, witnesses, ok = {}, [], True
        # (i) composites vanish on generators
        comp = psi @ phi
        for w in A.structure.generator_witnesses:
            v = matvec(comp, list(w))
            if not (C.is_coboundary(v) if coeff == "Z" else rational_solve(C.d_prev, v) is not None):
                ok = False
                details["composite"] = "nonzero"
        # (ii) image and kernel have the same invariants
        image, kernel = _image_preimage_lattices(A, phi, B, psi, C)
        im_s = subquotient_structure(image, B.d_prev)
        ker_s = subquotient_structure(kernel, B.d_prev)
        if coeff == "Z":
            same = im_s.invariants() == ker_s.invariants()
        else:
            same = im_s.free_rank == ker_s.free_rank
        details["image"] = str(im_s if coeff == "Z" else FGAbelianGroup(im_s.free_rank))
        details["kernel"] = str(ker_s if coeff == "Z" else FGAbelianGroup(ker_s.free_rank))
        ok &= same
        # (iii) preimage witnesses for kernel generators
        lift = hstack(phi @ A.cocycles, B.d_prev)
        for g in ker_s.generator_witnesses:
            if coeff == "Z":
                sol = solve_integer(lift, list(g))
                found = sol.x if sol else None
            else:
                found = rational_solve(lift, list(g))
            if found is None:
                ok = False
                details["preimage"] = "missing"
            else:
                a = matvec(A.cocycles, found[: A.cocycles.cols])
                witnesses.append({"kernel_element": list(g), "preimage": a})
        rep.add(f"{A.label} -> [{B.label}] -> {C.label}", ok, details, witnesses)
    return rep


def rational_class_is_zero(d_prev: IntMatrix, v: Sequence[Fraction]) -> bool:
    return rational_solve(d_prev, v) is not None
