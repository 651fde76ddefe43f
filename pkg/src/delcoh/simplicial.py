"""Finite simplicial complexes, simplicial maps and their (co)chain complexes.

Orientation convention: a simplex is the strictly increasing tuple of its
vertex labels, and all incidence signs come from that ordering.  Cochain
vectors are indexed like ``K.simplices[n]``.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Literal, Sequence

from .core_algebra import (
    FGAbelianGroup,
    IntMatrix,
    Number,
    RZModuleInvariants,
    integer_kernel,
    matvec,
    subquotient_structure,
)

Coefficients = Literal["Z", "Q", "RZ"]
Simplex = tuple


class SimplicialComplex:
    """A finite abstract simplicial complex closed under faces."""

    def __init__(self, simplices: Iterable[Iterable[Hashable]], name: str = ""):
        closed: set[tuple] = set()
        for s in simplices:
            s = tuple(sorted(set(s)))
            if not s:
                continue
            for k in range(1, len(s) + 1):
                closed.update(combinations(s, k))
        by_dim: dict[int, list[tuple]] = defaultdict(list)
        for s in closed:
            by_dim[len(s) - 1].append(s)
        self.dim = max(by_dim) if by_dim else -1
        self.simplices: tuple[tuple[tuple, ...], ...] = tuple(
            tuple(sorted(by_dim[n])) for n in range(self.dim + 1)
        )
        self.vertices = tuple(s[0] for s in self.simplices[0]) if self.dim >= 0 else ()
        self._index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        self.name = name

    @classmethod
    def from_facets(cls, facets, name: str = "") -> "SimplicialComplex":
        return cls(facets, name)

    def __repr__(self) -> str:
        counts = [len(level) for level in self.simplices]
        return f"SimplicialComplex({self.name or '?'}, f-vector={counts})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def count(self, n: int) -> int:
        return len(self.simplices[n]) if 0 <= n <= self.dim else 0

    def index(self, simplex: Sequence) -> int:
        s = tuple(simplex)
        try:
            return self._index[len(s) - 1][s]
        except (IndexError, KeyError):
            raise KeyError(f"{s} is not a simplex of {self!r}") from None

    def __contains__(self, simplex) -> bool:
        s = tuple(simplex)
        return 1 <= len(s) <= self.dim + 1 and s in self._index[len(s) - 1]

    def facets(self) -> list[tuple]:
        """Maximal simplices."""
        out = []
        for n in range(self.dim + 1):
            above = self.simplices[n + 1] if n < self.dim else ()
            for s in self.simplices[n]:
                if not any(set(s) < set(t) for t in above):
                    out.append(s)
        return out

    def subcomplex(self, simplices: Iterable[Sequence]) -> "SimplicialComplex":
        simplices = list(simplices)
        for s in simplices:
            if tuple(s) not in self:
                raise ValueError(f"{tuple(s)} is not a simplex of {self!r}")
        return SimplicialComplex(simplices)

    def basis_chain(self, simplex: Sequence, coeff: int = 1) -> "Chain":
        s = tuple(simplex)
        n = len(s) - 1
        c = [0] * self.count(n)
        c[self.index(s)] = coeff
        return Chain(self, n, tuple(c))

    def chain(self, n: int, terms: dict) -> "Chain":
        """Chain from ``{simplex: coefficient}``; unsorted simplices carry their permutation sign."""
        c = [0] * self.count(n)
        for s, k in terms.items():
            t, sign = _sort_with_sign(s)
            if len(t) != n + 1:
                raise ValueError(f"{s} is not an {n}-simplex")
            c[self.index(t)] += sign * k
        return Chain(self, n, tuple(c))

    @cached_property
    def _boundaries(self) -> dict[int, IntMatrix]:
        return {}

    def boundary(self, n: int) -> IntMatrix:
        """∂_n : C_n -> C_{n-1}, total in n (zero-size outside the range)."""
        cache = self._boundaries
        if n not in cache:
            rows, cols = self.count(n - 1), self.count(n)
            M = [[0] * cols for _ in range(rows)]
            if n >= 1:
                idx = self._index[n - 1] if n - 1 <= self.dim else {}
                for j, s in enumerate(self.simplices[n] if n <= self.dim else ()):
                    for i in range(len(s)):
                        M[idx[s[:i] + s[i + 1:]]][j] = -1 if i % 2 else 1
            cache[n] = IntMatrix(M, rows, cols)
        return cache[n]

    def coboundary(self, n: int) -> IntMatrix:
        """δ_n : C^n -> C^{n+1}, the transpose of ∂_{n+1}."""
        return self.boundary(n + 1).T


def _sort_with_sign(s: Sequence) -> tuple[tuple, int]:
    s = list(s)
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return tuple(s), sign


EMPTY = SimplicialComplex([], "empty")


def boundary_matrix(K: SimplicialComplex, n: int) -> IntMatrix:
    """∂_n of K; ``0 <= n <= dim K`` (n = 0 gives the map to the zero group)."""
    if not 0 <= n <= K.dim:
        raise ValueError(f"degree {n} out of range 0..{K.dim}")
    return K.boundary(n)


def coboundary_matrix(K: SimplicialComplex, n: int) -> IntMatrix:
    return K.coboundary(n)


class SimplicialMap:
    """Vertex map ``source -> target`` sending simplices onto simplices."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_map: dict, name: str = ""):
        missing = [v for v in source.vertices if v not in vertex_map]
        if missing:
            raise ValueError(f"vertex map undefined on {missing}")
        for n in range(source.dim + 1):
            for s in source.simplices[n]:
                img = tuple(sorted({vertex_map[v] for v in s}))
                if img not in target:
                    raise ValueError(f"image {img} of simplex {s} is not a simplex of the target")
        self.source = source
        self.target = target
        self.vertex_map = {v: vertex_map[v] for v in source.vertices}
        self.name = name
        self._chain_maps: dict[int, IntMatrix] = {}

    def __repr__(self) -> str:
        return f"SimplicialMap({self.name or '?'}: {self.source!r} -> {self.target!r})"

    @classmethod
    def identity(cls, K: SimplicialComplex) -> "SimplicialMap":
        return cls(K, K, {v: v for v in K.vertices}, "id")

    @classmethod
    def inclusion(cls, sub: SimplicialComplex, K: SimplicialComplex) -> "SimplicialMap":
        return cls(sub, K, {v: v for v in sub.vertices}, "incl")

    def named(self, name: str) -> "SimplicialMap":
        self.name = name
        return self

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """self ∘ inner."""
        if inner.target != self.source:
            raise ValueError("maps are not composable")
        return SimplicialMap(inner.source, self.target,
                             {v: self.vertex_map[w] for v, w in inner.vertex_map.items()})

    def chain_map(self, n: int) -> IntMatrix:
        """f_* : C_n(source) -> C_n(target); degenerate images go to 0."""
        if n not in self._chain_maps:
            rows, cols = self.target.count(n), self.source.count(n)
            M = [[0] * cols for _ in range(rows)]
            for j, s in enumerate(self.source.simplices[n] if 0 <= n <= self.source.dim else ()):
                img = [self.vertex_map[v] for v in s]
                if len(set(img)) < len(img):
                    continue
                t, sign = _sort_with_sign(img)
                M[self.target.index(t)][j] = sign
            self._chain_maps[n] = IntMatrix(M, rows, cols)
        return self._chain_maps[n]

    def cochain_map(self, n: int) -> IntMatrix:
        """f^# : C^n(target) -> C^n(source)."""
        return self.chain_map(n).T

    def push(self, c: "Chain") -> "Chain":
        if c.complex != self.source:
            raise ValueError("chain does not live on the source complex")
        return Chain(self.target, c.degree, tuple(matvec(self.chain_map(c.degree), c.coefficients)))


def induced_cochain_map(f: SimplicialMap, n: int) -> IntMatrix:
    """Matrix of f^# in degree n (rows: source simplices, columns: target simplices)."""
    if n < 0 or (n > f.source.dim and n > f.target.dim):
        raise ValueError(f"degree {n} is not valid for {f!r}")
    return f.cochain_map(n)


@dataclass(frozen=True)
class Chain:
    complex: SimplicialComplex = field(repr=False)
    degree: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.complex.count(self.degree):
            raise ValueError("coefficient count does not match the number of simplices")
        if not all(isinstance(c, int) for c in self.coefficients):
            raise TypeError("chain coefficients must be integers")

    def boundary(self) -> "Chain":
        if self.degree == 0:
            return Chain(self.complex, -1, ())
        return Chain(self.complex, self.degree - 1,
                     tuple(matvec(self.complex.boundary(self.degree), self.coefficients)))

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        return Chain(self.complex, self.degree, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "Chain":
        return Chain(self.complex, self.degree, tuple(-a for a in self.coefficients))

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, k: int) -> "Chain":
        return Chain(self.complex, self.degree, tuple(k * a for a in self.coefficients))

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def terms(self) -> dict:
        return {s: c for s, c in zip(self.complex.simplices[self.degree] if self.coefficients else (),
                                    self.coefficients) if c}

    def _check(self, other: "Chain") -> None:
        if self.complex != other.complex or self.degree != other.degree:
            raise ValueError("chains live in different groups")


@dataclass(frozen=True)
class Cochain:
    complex: SimplicialComplex = field(repr=False)
    degree: int
    values: tuple
    ring: Literal["Z", "Q"] = "Q"

    def __post_init__(self):
        if len(self.values) != self.complex.count(self.degree):
            raise ValueError("value count does not match the number of simplices")
        if self.ring == "Z" and not all(Fraction(v).denominator == 1 for v in self.values):
            raise ValueError("Z-cochain with non-integer values")

    def coboundary(self) -> "Cochain":
        return Cochain(self.complex, self.degree + 1,
                       tuple(matvec(self.complex.coboundary(self.degree), self.values)), self.ring)

    def __call__(self, c: Chain) -> Number:
        if c.degree != self.degree:
            raise ValueError("degree mismatch")
        return sum((a * b for a, b in zip(self.values, c.coefficients)), 0)


def cycle_basis(K: SimplicialComplex, n: int) -> IntMatrix:
    """Columns: a Z-basis of the n-cycles of K."""
    return integer_kernel(K.boundary(n))


def cochain_cohomology(d: Callable[[int], IntMatrix], n: int, coeff: Coefficients = "Z"):
    """Cohomology in degree n of a cochain complex given by ``d(k): C^k -> C^{k+1}``."""
    if coeff == "RZ":
        free = cochain_cohomology(d, n, "Z").free_rank
        return RZModuleInvariants(free, cochain_cohomology(d, n + 1, "Z").torsion)
    cocycles = integer_kernel(d(n))
    H = subquotient_structure(cocycles, d(n - 1))
    if coeff == "Q":
        return FGAbelianGroup(H.free_rank)
    if coeff != "Z":
        raise ValueError(f"unknown coefficients {coeff!r}")
    return H


def cohomology(K: SimplicialComplex, n: int, coeff: Coefficients = "Z"):
    """H^n(K; coeff); Z and Q give FGAbelianGroup, RZ gives RZModuleInvariants."""
    if n < 0:
        raise ValueError("negative degree")
    return cochain_cohomology(K.coboundary, n, coeff)


# --------------------------------------------------------------------------
# fundamental classes


def _facet_incidence(K: SimplicialComplex) -> dict[tuple, list[tuple[int, int]]]:
    """(n-1)-face -> [(top simplex index, incidence sign)]."""
    n = K.dim
    inc: dict[tuple, list[tuple[int, int]]] = defaultdict(list)
    for j, s in enumerate(K.simplices[n]):
        for i in range(len(s)):
            inc[s[:i] + s[i + 1:]].append((j, -1 if i % 2 else 1))
    return inc


def orient(K: SimplicialComplex) -> list[int]:
    """Coherent orientation signs of the top simplices (one per component).

    Raises ValueError for non-manifolds or non-orientable complexes.
    """
    if K.dim < 0:
        return []
    if K.dim == 0:
        return [1] * K.count(0)
    inc = _facet_incidence(K)
    for face, tops in inc.items():
        if len(tops) > 2:
            raise ValueError(f"non-manifold face {face}: shared by {len(tops)} top simplices")
    neighbours: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for face, tops in inc.items():
        if len(tops) == 2:
            (a, sa), (b, sb) = tops
            # coherent iff the induced signs on the shared face cancel
            neighbours[a].append((b, -sa * sb))
            neighbours[b].append((a, -sa * sb))
    signs = [0] * K.count(K.dim)
    for start in range(len(signs)):
        if signs[start]:
            continue
        signs[start] = 1
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, rel in neighbours[a]:
                want = signs[a] * rel
                if signs[b] == 0:
                    signs[b] = want
                    queue.append(b)
                elif signs[b] != want:
                    raise ValueError(f"complex is not orientable (conflict at top simplex {K.simplices[K.dim][b]})")
    return signs


def boundary_complex(K: SimplicialComplex) -> SimplicialComplex:
    """Subcomplex spanned by the (n-1)-faces lying in exactly one top simplex."""
    if K.dim <= 0:
        return EMPTY
    faces = [f for f, tops in _facet_incidence(K).items() if len(tops) == 1]
    return SimplicialComplex(faces)


def fundamental_class(K: SimplicialComplex, orientation: Sequence[int] | None = None) -> Chain:
    """[M] for a triangulated oriented manifold, possibly with boundary."""
    n = K.dim
    if orientation is None:
        orientation = orient(K)
    if len(orientation) != K.count(n) or any(s not in (1, -1) for s in orientation):
        raise ValueError("orientation needs one sign ±1 per top simplex")
    M = Chain(K, n, tuple(orientation))
    if n == 0:
        return M
    dM = matvec(K.boundary(n), M.coefficients)
    for face, tops in _facet_incidence(K).items():
        if len(tops) > 2:
            raise ValueError(f"non-manifold face {face}: shared by {len(tops)} top simplices")
        if len(tops) == 2 and dM[K.index(face)] != 0:
            raise ValueError(f"orientation is not coherent across interior face {face}")
    return M


def boundary_fundamental_class(K: SimplicialComplex, orientation: Sequence[int] | None = None) -> Chain:
    """[∂M] on :func:`boundary_complex`, with the induced orientation."""
    M = fundamental_class(K, orientation)
    dK = boundary_complex(K)
    if dK.dim < 0:
        return Chain(dK, K.dim - 1, ())
    dM = M.boundary()
    coeffs = [0] * dK.count(K.dim - 1)
    for s, c in dM.terms().items():
        coeffs[dK.index(s)] = c
    return Chain(dK, K.dim - 1, tuple(coeffs))


@dataclass(frozen=True)
class RelativeCycle:
    """(C, C') with ∂C + f_*C' = 0 and ∂C' = 0."""

    f: SimplicialMap = field(repr=False)
    C: Chain
    C_prime: Chain

    def __post_init__(self):
        p = self.C.degree
        if self.C.complex != self.f.target or self.C_prime.complex != self.f.source:
            raise ValueError("relative cycle chains must live on X = target and Y = source")
        if self.C_prime.degree != p - 1:
            raise ValueError("C' must have degree one less than C")
        problem = relative_cycle_violation(self.f, self.C.coefficients, self.C_prime.coefficients, p)
        if problem:
            raise ValueError(problem)

    @property
    def degree(self) -> int:
        return self.C.degree


def relative_cycle_violation(f: SimplicialMap, C: Sequence[int], Cp: Sequence[int], p: int) -> str | None:
    X, Y = f.target, f.source
    if p >= 1:
        lhs = matvec(X.boundary(p), C)
        push = matvec(f.chain_map(p - 1), Cp)
        bad = [i for i, (a, b) in enumerate(zip(lhs, push)) if a + b]
        if bad:
            return f"∂C + f_*C' ≠ 0 at {X.simplices[p - 1][bad[0]]}"
    if p >= 2:
        dCp = matvec(Y.boundary(p - 1), Cp)
        bad = [i for i, a in enumerate(dCp) if a]
        if bad:
            return f"∂C' ≠ 0 at {Y.simplices[p - 2][bad[0]]}"
    return None


def pushforward_fundamental(
    g: SimplicialMap,
    g_boundary: SimplicialMap,
    f: SimplicialMap,
    orientation: Sequence[int] | None = None,
) -> RelativeCycle:
    """(g_*[M], -g'_*[∂M]) for g: M -> X and g': ∂M -> Y with g|∂M = f ∘ g'.

    Any parity of dim M is accepted.
    """
    M = g.source
    if g.target != f.target or g_boundary.target != f.source:
        raise ValueError("g must land in X and g' in Y")
    dK = boundary_complex(M)
    if g_boundary.source != dK:
        raise ValueError("g' must be defined on the boundary complex of M")
    for v in dK.vertices:
        if g.vertex_map[v] != f.vertex_map[g_boundary.vertex_map[v]]:
            raise ValueError(f"g|∂M ≠ f ∘ g' at vertex {v!r}")
    C = g.push(fundamental_class(M, orientation))
    dM = boundary_fundamental_class(M, orientation)
    Cp = -g_boundary.push(dM) if dM.coefficients else Chain(f.source, M.dim - 1, (0,) * f.source.count(M.dim - 1))
    return RelativeCycle(f, C, Cp)
