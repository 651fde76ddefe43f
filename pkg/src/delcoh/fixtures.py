"""Standard desk-scale triangulations and maps used by tests, scripts and the CLI."""

from __future__ import annotations

from .simplicial import EMPTY, SimplicialComplex, SimplicialMap


def point(label=0) -> SimplicialComplex:
    return SimplicialComplex([[label]], "pt")


def circle(n: int = 3) -> SimplicialComplex:
    """n-gon triangulation of S^1 on vertices 0..n-1."""
    return SimplicialComplex([[i, (i + 1) % n] for i in range(n)], f"S1_{n}")


def interval(labels=("a", "b", "c")) -> SimplicialComplex:
    return SimplicialComplex(list(zip(labels, labels[1:])), "I")


def sphere2() -> SimplicialComplex:
    """Boundary of the 3-simplex."""
    return SimplicialComplex([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], "dD3")


def torus() -> SimplicialComplex:
    """The 7-vertex (Möbius–Császár) torus."""
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    return SimplicialComplex(facets, "T2")


def moebius() -> SimplicialComplex:
    """5-vertex Möbius band."""
    return SimplicialComplex([[i, (i + 1) % 5, (i + 2) % 5] for i in range(5)], "Moebius")


def rp2() -> SimplicialComplex:
    """6-vertex real projective plane."""
    facets = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
              (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimplicialComplex([[v - 1 for v in f] for f in facets], "RP2")


COMPLEXES = {
    "pt": point,
    "S1": circle,
    "S1_hex": lambda: circle(6),
    "interval": interval,
    "sphere": sphere2,
    "torus": torus,
    "moebius": moebius,
    "rp2": rp2,
}


def equator() -> SimplicialMap:
    """The triangle {0,1,2} included in the boundary of the 3-simplex."""
    return SimplicialMap.inclusion(circle(3), sphere2()).named("equator")


def point_in_circle() -> SimplicialMap:
    return SimplicialMap.inclusion(point(0), circle(3)).named("pt_in_S1")


def doubling() -> SimplicialMap:
    """Hexagon wrapped twice around the triangle."""
    return SimplicialMap(circle(6), circle(3), {i: i % 3 for i in range(6)}, "doubling")


def circle_in_torus() -> SimplicialMap:
    """The 7-cycle 0-1-...-6-0 inside the 7-vertex torus."""
    return SimplicialMap(circle(7), torus(), {i: i for i in range(7)}, "S1_in_T2")


def identity_sphere() -> SimplicialMap:
    return SimplicialMap.identity(sphere2()).named("identity")


def empty_into_sphere() -> SimplicialMap:
    return SimplicialMap(EMPTY, sphere2(), {}, "empty")


PAIRS = {
    "equator": equator,
    "pt_in_S1": point_in_circle,
    "doubling": doubling,
    "S1_in_T2": circle_in_torus,
    "identity": identity_sphere,
    "empty": empty_into_sphere,
}
