"""Cochain representatives of absolute and relative differential characters.

An absolute character of degree p on K is a pair ``(T, c)``: a rational
p-cochain T (the holonomy lift) and an integer (p+1)-cocycle c (the Chern
cocycle).  Curvature is ``ω = δT + c`` and holonomy on a p-cycle z is
``<T, z> mod 1``.  Two pairs give the same character iff the curvatures agree
and the T's differ by something integral on every p-cycle.

A relative character of degree p for ``f: Y -> X`` is the same thing on the
cone complex: ``T = (T_X, T_Y)`` in degree p and ``c = (c_X, c_Y)`` a cone
cocycle in degree p+1.  The cone curvature ``DT + c`` has components
``ω = δT_X + c_X`` on X and ``ρ = f^#T_X - δT_Y + c_Y`` on Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cone import ConeComplex
from .core_algebra import (
    IntMatrix,
    MixedSystem,
    hstack,
    dot,
    frac_mod1,
    integer_kernel,
    integral_on_sublattice,
    is_integral,
    matvec,
    solve_mod_integers,
    vstack,
)
from .simplicial import RelativeCycle, SimplicialComplex, SimplicialMap

TYPE_TAGS = ("I", "II", "II'", "III", "IV")


def _fracs(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _ints(v, what: str) -> tuple[int, ...]:
    out = []
    for i, x in enumerate(v):
        q = Fraction(x)
        if q.denominator != 1:
            raise ValueError(f"{what}[{i}] = {q} is not an integer")
        out.append(int(q))
    return tuple(out)


def _first_nonzero(v) -> int | None:
    return next((i for i, x in enumerate(v) if x), None)


def _sub(u, v):
    return [a - b for a, b in zip(u, v)]


# --------------------------------------------------------------------------
# cycle bases (cached per complex / map and degree)


@lru_cache(maxsize=None)
def _abs_cycles(K: SimplicialComplex, p: int) -> IntMatrix:
    return integer_kernel(K.boundary(p)) if p >= 1 else IntMatrix.identity(K.count(p))


_cones: dict[int, ConeComplex] = {}


def cone_of(f: SimplicialMap) -> ConeComplex:
    key = id(f)
    cone = _cones.get(key)
    if cone is None or cone.f is not f:
        cone = _cones[key] = ConeComplex(f)
    return cone


_rel_cycle_cache: dict[tuple[int, int], tuple[SimplicialMap, IntMatrix]] = {}


def relative_cycle_basis(f: SimplicialMap, p: int) -> IntMatrix:
    """Columns ``(C, C')`` spanning the relative p-cycles Z_p(f)."""
    hit = _rel_cycle_cache.get((id(f), p))
    if hit is not None and hit[0] is f:
        return hit[1]
    L = integer_kernel(cone_of(f).differential(p - 1).T)
    _rel_cycle_cache[(id(f), p)] = (f, L)
    return L


# --------------------------------------------------------------------------
# absolute characters


@dataclass(frozen=True)
class CharacterRep:
    K: SimplicialComplex = field(repr=False)
    p: int
    T: tuple[Fraction, ...]
    c: tuple[int, ...]

    @property
    def curvature(self) -> list[Fraction]:
        return [a + b for a, b in zip(matvec(self.K.coboundary(self.p), self.T), self.c)]

    omega = curvature

    def holonomy(self, z: Sequence[int]) -> Fraction:
        if len(z) != self.K.count(self.p):
            raise ValueError(f"chain of length {len(z)} for a degree {self.p} character")
        return frac_mod1(dot(self.T, z))

    def __add__(self, other: "CharacterRep") -> "CharacterRep":
        _same_shape(self, other)
        return CharacterRep(self.K, self.p, tuple(a + b for a, b in zip(self.T, other.T)),
                            tuple(a + b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "CharacterRep":
        return CharacterRep(self.K, self.p, tuple(-a for a in self.T), tuple(-a for a in self.c))

    def __sub__(self, other: "CharacterRep") -> "CharacterRep":
        return self + (-other)


AbsoluteYCharacter = CharacterRep  # a degree p-1 character on Y, acting on degree p relative ones


def _same_shape(x, y):
    if type(x) is not type(y) or x.p != y.p:
        raise ValueError("characters of different kind or degree")
    if isinstance(x, CharacterRep) and x.K != y.K:
        raise ValueError("characters on different complexes")
    if isinstance(x, RelCharacterRep) and not _same_map(x.f, y.f):
        raise ValueError("relative characters for different maps")


def _same_map(f: SimplicialMap, g: SimplicialMap) -> bool:
    return f is g or (f.source == g.source and f.target == g.target and f.vertex_map == g.vertex_map)


def make_character(K: SimplicialComplex, p: int, T: Sequence, c: Sequence | None = None) -> CharacterRep:
    """Validated absolute character of degree p on K."""
    if p < 0:
        raise ValueError("negative degree")
    if c is None:
        c = [0] * K.count(p + 1)
    if len(T) != K.count(p) or len(c) != K.count(p + 1):
        raise ValueError(f"shape mismatch: need {K.count(p)} values for T and {K.count(p + 1)} for c")
    c = _ints(c, "c")
    dc = matvec(K.coboundary(p + 1), c)
    bad = _first_nonzero(dc)
    if bad is not None:
        raise ValueError(f"Chern cochain is not a cocycle: δc ≠ 0 on {K.simplices[p + 2][bad]}")
    return CharacterRep(K, p, _fracs(T), c)


def trivial_character(K: SimplicialComplex, p: int) -> CharacterRep:
    return CharacterRep(K, p, (Fraction(0),) * K.count(p), (0,) * K.count(p + 1))


def characters_equal(x, y) -> bool:
    """Equality of the underlying characters (absolute or relative)."""
    _same_shape(x, y)
    if isinstance(x, RelCharacterRep):
        if x.omega != y.omega or x.rho != y.rho:
            return False
        return integral_on_sublattice(_sub(x.T, y.T), relative_cycle_basis(x.f, x.p))
    if x.curvature != y.curvature:
        return False
    return integral_on_sublattice(_sub(x.T, y.T), _abs_cycles(x.K, x.p))


# --------------------------------------------------------------------------
# relative characters


@dataclass(frozen=True)
class RelCharacterRep:
    f: SimplicialMap = field(repr=False)
    p: int
    T_X: tuple[Fraction, ...]
    T_Y: tuple[Fraction, ...]
    c_X: tuple[int, ...]
    c_Y: tuple[int, ...]
    type_tag: str = "II"

    @property
    def X(self) -> SimplicialComplex:
        return self.f.target

    @property
    def Y(self) -> SimplicialComplex:
        return self.f.source

    @property
    def T(self) -> list[Fraction]:
        return list(self.T_X) + list(self.T_Y)

    @property
    def c(self) -> list[int]:
        return list(self.c_X) + list(self.c_Y)

    @property
    def omega(self) -> list[Fraction]:
        return [a + b for a, b in zip(matvec(self.X.coboundary(self.p), self.T_X), self.c_X)]

    @property
    def rho(self) -> list[Fraction]:
        fT = matvec(self.f.cochain_map(self.p), self.T_X)
        dT = matvec(self.Y.coboundary(self.p - 1), self.T_Y)
        return [a - b + c for a, b, c in zip(fT, dT, self.c_Y)]

    def holonomy(self, C: Sequence[int], C_prime: Sequence[int]) -> Fraction:
        return frac_mod1(dot(self.T_X, C) + dot(self.T_Y, C_prime))

    def _combine(self, other: "RelCharacterRep", sign: int) -> "RelCharacterRep":
        _same_shape(self, other)
        tag = self.type_tag if self.type_tag == other.type_tag else "II"
        return RelCharacterRep(
            self.f, self.p,
            tuple(a + sign * b for a, b in zip(self.T_X, other.T_X)),
            tuple(a + sign * b for a, b in zip(self.T_Y, other.T_Y)),
            tuple(a + sign * b for a, b in zip(self.c_X, other.c_X)),
            tuple(a + sign * b for a, b in zip(self.c_Y, other.c_Y)),
            tag,
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return replace(self, T_X=tuple(-a for a in self.T_X), T_Y=tuple(-a for a in self.T_Y),
                       c_X=tuple(-a for a in self.c_X), c_Y=tuple(-a for a in self.c_Y))


def _rho_integral_periods(f: SimplicialMap, p: int, rho: Sequence[Fraction]) -> str | None:
    """None if ρ is closed with integral periods on Y, otherwise a reason."""
    Y = f.source
    d = matvec(Y.coboundary(p), rho)
    bad = _first_nonzero(d)
    if bad is not None:
        return f"ρ is not closed: δρ ≠ 0 on {Y.simplices[p + 1][bad]}"
    Z = _abs_cycles(Y, p)
    for z in Z.columns():
        v = dot(rho, z)
        if Fraction(v).denominator != 1:
            return f"ρ has period {v} on the Y-cycle {z}"
    return None


def make_relative(f: SimplicialMap, p: int, T_X: Sequence, T_Y: Sequence | None = None,
                  c_X: Sequence | None = None, c_Y: Sequence | None = None,
                  claimed_type: str = "II") -> RelCharacterRep:
    """Validated relative character rep of degree p (tags I, II, II', III, IV)."""
    if claimed_type not in TYPE_TAGS:
        raise ValueError(f"unknown type tag {claimed_type!r}")
    X, Y = f.target, f.source
    T_Y = [0] * Y.count(p - 1) if T_Y is None else T_Y
    c_X = [0] * X.count(p + 1) if c_X is None else c_X
    c_Y = [0] * Y.count(p) if c_Y is None else c_Y
    for name, v, n in (("T_X", T_X, X.count(p)), ("T_Y", T_Y, Y.count(p - 1)),
                       ("c_X", c_X, X.count(p + 1)), ("c_Y", c_Y, Y.count(p))):
        if len(v) != n:
            raise ValueError(f"shape mismatch: {name} has length {len(v)}, expected {n}")
    r = RelCharacterRep(f, p, _fracs(T_X), _fracs(T_Y), _ints(c_X, "c_X"), _ints(c_Y, "c_Y"), claimed_type)
    dcX = matvec(X.coboundary(p + 1), r.c_X)
    bad = _first_nonzero(dcX)
    if bad is not None:
        raise ValueError(f"cone cocycle condition fails: δc_X ≠ 0 on {X.simplices[p + 2][bad]}")
    mix = _sub(matvec(f.cochain_map(p + 1), r.c_X), matvec(Y.coboundary(p), r.c_Y))
    bad = _first_nonzero(mix)
    if bad is not None:
        raise ValueError(f"cone cocycle condition fails: f^#c_X - δc_Y ≠ 0 on {Y.simplices[p + 1][bad]}")
    if claimed_type == "I":
        rho = r.rho
        bad = _first_nonzero(rho)
        if bad is not None:
            raise ValueError(f"type I needs ρ = 0, but ρ = {rho[bad]} on {Y.simplices[p][bad]}")
        fo = matvec(f.cochain_map(p + 1), r.omega)
        bad = _first_nonzero(fo)
        if bad is not None:  # pragma: no cover - implied by ρ = 0
            raise ValueError(f"type I needs f^#ω = 0, fails on {Y.simplices[p + 1][bad]}")
    elif claimed_type == "II'":
        why = _rho_integral_periods(f, p, r.rho)
        if why:
            raise ValueError(f"type II' violated: {why}")
    return r


def trivial_relative(f: SimplicialMap, p: int, tag: str = "II") -> RelCharacterRep:
    X, Y = f.target, f.source
    z = Fraction(0)
    return RelCharacterRep(f, p, (z,) * X.count(p), (z,) * Y.count(p - 1),
                           (0,) * X.count(p + 1), (0,) * Y.count(p), tag)


def rel_holonomy(r: RelCharacterRep, zc: RelativeCycle) -> Fraction:
    if zc.degree != r.p:
        raise ValueError(f"degree mismatch: character of degree {r.p}, cycle of degree {zc.degree}")
    if not _same_map(zc.f, r.f):
        raise ValueError("relative cycle is for a different map")
    return r.holonomy(zc.C.coefficients, zc.C_prime.coefficients)


def gauge_move(r: RelCharacterRep, S_X=None, S_Y=None, u_X=None, u_Y=None) -> RelCharacterRep:
    """T -> T + D(S) + u, c -> c - D(u), for rational S and integer u."""
    f, p = r.f, r.p
    X, Y = f.target, f.source
    S_X = [0] * X.count(p - 1) if S_X is None else S_X
    S_Y = [0] * Y.count(p - 2) if S_Y is None else S_Y
    u_X = [0] * X.count(p) if u_X is None else list(_ints(u_X, "u_X"))
    u_Y = [0] * Y.count(p - 1) if u_Y is None else list(_ints(u_Y, "u_Y"))
    D = cone_of(f).differential
    dS = matvec(D(p - 1), list(S_X) + list(S_Y))
    u = u_X + u_Y
    du = matvec(D(p), u)
    T = [a + b + c for a, b, c in zip(r.T, dS, u)]
    c = [a - b for a, b in zip(r.c, du)]
    nx, ny = X.count(p), X.count(p + 1)
    return replace(r, T_X=_fracs(T[:nx]), T_Y=_fracs(T[nx:]), c_X=tuple(c[:ny]), c_Y=tuple(c[ny:]))


# --------------------------------------------------------------------------
# trivialization kinds and Λ_ω


@dataclass(frozen=True)
class Trivialization:
    kind: str  # "geometric" | "strong-topological" | "topological-only"
    rho: tuple[Fraction, ...]
    rho_integral: bool

    def __str__(self) -> str:
        if self.kind == "strong-topological":
            return f"strong-topological ({'integral' if self.rho_integral else 'non-integral'} ρ)"
        return self.kind


def trivialization_kind(r: RelCharacterRep) -> Trivialization:
    """Classify the trivialization carried by r.

    ρ = 0 is geometric (type I).  Otherwise the cone data is a strong
    topological trivialization, and ρ is reported along with whether it is
    integral (type II').  A type III orbit only remembers ρ up to Y-curvatures,
    so it is reported as topological-only.
    """
    rho = tuple(r.rho)
    integral = _rho_integral_periods(r.f, r.p, rho) is None
    if r.type_tag == "III":
        return Trivialization("topological-only", rho, integral)
    if not any(rho):
        return Trivialization("geometric", rho, True)
    return Trivialization("strong-topological", rho, integral)


def in_lambda_omega(omega: Sequence, rho: Sequence, f: SimplicialMap, degree: int | None = None) -> bool:
    """Is (ω, ρ) a closed relative cochain with integral periods?

    ``degree`` is the degree of ω; it is inferred from the lengths when unambiguous.
    """
    X, Y = f.target, f.source
    if degree is None:
        fits = [n for n in range(0, X.dim + 2) if X.count(n) == len(omega) and Y.count(n - 1) == len(rho)]
        if len(fits) != 1:
            raise ValueError("cannot infer the degree of (ω, ρ); pass degree=")
        degree = fits[0]
    q = degree
    if X.count(q) != len(omega) or Y.count(q - 1) != len(rho):
        raise ValueError("ω and ρ do not have matching degrees")
    D = cone_of(f).differential(q)
    v = list(omega) + list(rho)
    bad = _first_nonzero(matvec(D, v))
    if bad is not None:
        raise ValueError("precondition fails: need δω = 0 and δρ = f^#ω")
    return integral_on_sublattice(v, relative_cycle_basis(f, q))


# --------------------------------------------------------------------------
# maps between the relative theories


def embed_I_to_II(r: RelCharacterRep) -> RelCharacterRep:
    if r.type_tag != "I":
        raise ValueError("embed_I_to_II expects a type I rep")
    return replace(r, type_tag="II")


def act_on_II(xi: CharacterRep, r: RelCharacterRep) -> RelCharacterRep:
    """Action of a degree p-1 character (ξ, η) on Y: χ -> χ - ξ∘π₂, ρ -> ρ + η."""
    if xi.p != r.p - 1 or xi.K != r.Y:
        raise ValueError(f"need a degree {r.p - 1} character on Y")
    return replace(
        r,
        T_Y=tuple(a - b for a, b in zip(r.T_Y, xi.T)),
        c_Y=tuple(a + b for a, b in zip(r.c_Y, xi.c)),
        type_tag="II" if r.type_tag in ("I", "II'") else r.type_tag,
    )


def type_III_witness(r1: RelCharacterRep, r2: RelCharacterRep) -> CharacterRep | None:
    """A character ξ on Y with ξ·r1 = r2, or None."""
    _same_shape(r1, r2)
    if r1.omega != r2.omega:
        return None
    f, p = r1.f, r1.p
    Y = f.source
    nX = f.target.count(p)
    L = relative_cycle_basis(f, p)
    dY = Y.coboundary(p - 1)
    # δT_ξ ≡ ρ2 - ρ1 and <T_ξ, C'> ≡ <T1 - T2, (C, C')> modulo integers
    Cp_rows = IntMatrix([col[nX:] for col in L.columns()], L.cols, Y.count(p - 1))
    A = vstack(dY, Cp_rows)
    dT = _sub(r1.T, r2.T)
    b = _sub(r2.rho, r1.rho) + [dot(dT, col) for col in L.columns()]
    T_xi = solve_mod_integers(A, b)
    if T_xi is None:
        return None
    eta = _sub(r2.rho, r1.rho)
    c_xi = [e - d for e, d in zip(eta, matvec(dY, T_xi))]
    xi = make_character(Y, p - 1, T_xi, c_xi)
    assert characters_equal(act_on_II(xi, r1), r2), "type III witness failed to verify"
    return xi


def same_type_III(r1: RelCharacterRep, r2: RelCharacterRep) -> bool:
    return type_III_witness(r1, r2) is not None


def phi_f(f: SimplicialMap, p: int, rho_tilde: Sequence) -> RelCharacterRep:
    """Type II' rep whose holonomy is (C, C') -> <ρ̃, C> mod 1.

    ρ̃ is a closed rational p-cochain on X with integral periods.  The rep is
    T = (ρ̃, 0), c = 0, so ω = 0 and ρ = f^#ρ̃.
    """
    X = f.target
    rt = _fracs(rho_tilde)
    if len(rt) != X.count(p):
        raise ValueError(f"ρ̃ must be a {p}-cochain on X ({X.count(p)} values)")
    bad = _first_nonzero(matvec(X.coboundary(p), rt))
    if bad is not None:
        raise ValueError(f"precondition fails: ρ̃ is not closed (δρ̃ ≠ 0 on {X.simplices[p + 1][bad]})")
    vals = [dot(rt, z) for z in _abs_cycles(X, p).columns()]
    if not is_integral(vals):
        raise ValueError(f"precondition fails: ρ̃ has non-integral periods {vals}")
    return make_relative(f, p, rt, None, None, None, "II'")


def type_IV_witness(r1: RelCharacterRep, r2: RelCharacterRep) -> tuple[Fraction, ...] | None:
    """ρ̃ with r1 equal to r2 + φ_f(ρ̃), or None.

    A closed ρ̃ with integral periods is δs + κ for a rational s and an
    integer cocycle κ, so we solve for (s, κ) with ω_Δ = 0,
    ρ_Δ = f^#(δs + κ) and <T_Δ, (C, C')> - <δs, C> integral on relative cycles.
    """
    for r in (r1, r2):
        if r.type_tag != "II'" and _rho_integral_periods(r.f, r.p, r.rho):
            raise ValueError("same_type_IV expects type II' reps")
    _same_shape(r1, r2)
    delta = r1 - r2
    if any(delta.omega):
        return None
    f, p = r1.f, r1.p
    X = f.target
    nX = X.count(p)
    dX = X.coboundary(p - 1)
    L = relative_cycle_basis(f, p)
    C_rows = IntMatrix([col[:nX] for col in L.columns()], L.cols, nX)
    nY, nk, nm = f.source.count(p), X.count(p + 1), L.cols
    A = vstack(f.cochain_map(p) @ dX, IntMatrix.zeros(nk, dX.cols), C_rows @ dX)
    B = vstack(
        hstack(f.cochain_map(p), IntMatrix.zeros(nY, nm)),
        hstack(X.coboundary(p), IntMatrix.zeros(nk, nm)),
        hstack(IntMatrix.zeros(nm, nX), IntMatrix.identity(nm)),
    )
    rhs = list(delta.rho) + [0] * nk + [dot(delta.T, col) for col in L.columns()]
    res = MixedSystem(A, B).solve(rhs)
    if res is None:
        return None
    s, n = res
    rt = tuple(a + b for a, b in zip(matvec(dX, s), n[:nX]))
    assert characters_equal(r1 - r2, phi_f(f, p, rt)), "type IV witness failed to verify"
    return rt


def same_type_IV(r1: RelCharacterRep, r2: RelCharacterRep) -> bool:
    return type_IV_witness(r1, r2) is not None


def chern_class_vector(r: RelCharacterRep) -> list[int]:
    """The cone cocycle (c_X, c_Y) representing the relative Chern class."""
    return r.c


__all__ = [
    "AbsoluteYCharacter", "CharacterRep", "RelCharacterRep", "TYPE_TAGS", "Trivialization",
    "act_on_II", "characters_equal", "chern_class_vector", "cone_of", "embed_I_to_II", "gauge_move",
    "in_lambda_omega", "make_character", "make_relative", "phi_f", "rel_holonomy",
    "relative_cycle_basis", "same_type_III", "same_type_IV", "trivial_character", "trivial_relative",
    "trivialization_kind", "type_III_witness", "type_IV_witness",
]
