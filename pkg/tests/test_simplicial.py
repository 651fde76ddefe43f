import pytest
from hypothesis import given
from hypothesis import strategies as st

from delcoh import fixtures
from delcoh.core_algebra import IntMatrix, matvec
from delcoh.simplicial import (
    EMPTY, Chain, Cochain, RelativeCycle, SimplicialComplex, SimplicialMap, boundary_complex,
    boundary_fundamental_class, boundary_matrix, cohomology, cycle_basis, fundamental_class,
    induced_cochain_map, orient, pushforward_fundamental,
)


def test_closure_and_ordering():
    K = SimplicialComplex([[2, 0, 1]])
    assert K.simplices[1] == ((0, 1), (0, 2), (1, 2))
    assert K.facets() == [(0, 1, 2)]
    assert (1, 2) in K and (1, 3) not in K


def test_triangle_boundary():
    K = fixtures.circle(3)
    B = boundary_matrix(K, 1)
    assert B.shape == (3, 3)
    assert all(sum(B[i, j] for i in range(3)) == 0 for j in range(3))
    z = K.chain(1, {(0, 1): 1, (1, 2): 1, (0, 2): -1})
    assert z.boundary().is_zero()
    assert z == K.chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1})


def test_point_boundary_is_empty():
    assert boundary_matrix(fixtures.point(), 0).shape == (0, 1)


def test_boundary_out_of_range():
    with pytest.raises(ValueError, match="out of range"):
        boundary_matrix(fixtures.circle(3), 2)


@pytest.mark.parametrize("name", sorted(fixtures.COMPLEXES))
def test_boundary_squares_to_zero(name):
    K = fixtures.COMPLEXES[name]()
    for n in range(1, K.dim + 2):
        assert (K.boundary(n) @ K.boundary(n + 1)).is_zero()
        assert (K.coboundary(n) @ K.coboundary(n - 1)).is_zero()


def test_identity_cochain_map():
    K = fixtures.sphere2()
    for n in range(3):
        assert induced_cochain_map(SimplicialMap.identity(K), n) == IntMatrix.identity(K.count(n))


def test_doubling_pullback():
    f = fixtures.doubling()
    F = induced_cochain_map(f, 1)
    # every target edge pulls back to exactly two source edges
    assert all(sum(abs(F[i, j]) for i in range(6)) == 2 for j in range(3))
    z3 = f.target.chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1})
    z6 = f.source.chain(1, {(i, (i + 1) % 6): 1 for i in range(6)})
    for t in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [3, -2, 5]):
        pulled = matvec(F, t)
        assert sum(a * b for a, b in zip(pulled, z6.coefficients)) == 2 * sum(
            a * b for a, b in zip(t, z3.coefficients))


def test_constant_map_kills_positive_degrees():
    K = fixtures.sphere2()
    c = SimplicialMap(K, fixtures.point(), {v: 0 for v in K.vertices})
    for n in (1, 2):
        assert induced_cochain_map(c, n).is_zero()


def test_chain_map_commutes_with_boundary():
    for mk in fixtures.PAIRS.values():
        f = mk()
        for n in range(1, f.source.dim + 1):
            assert f.target.boundary(n) @ f.chain_map(n) == f.chain_map(n - 1) @ f.source.boundary(n)


def test_invalid_map():
    with pytest.raises(ValueError, match="not a simplex of the target"):
        SimplicialMap(fixtures.circle(3), fixtures.interval(("x", "y", "z")), {0: "x", 1: "y", 2: "z"})
    with pytest.raises(ValueError, match="undefined"):
        SimplicialMap(fixtures.circle(3), fixtures.circle(3), {0: 0})


@pytest.mark.parametrize("name, n, expected", [
    ("S1", 1, (1, ())),
    ("S1", 0, (1, ())),
    ("sphere", 2, (1, ())),
    ("sphere", 1, (0, ())),
    ("torus", 1, (2, ())),
    ("torus", 2, (1, ())),
    ("moebius", 1, (1, ())),
    ("moebius", 2, (0, ())),
    ("rp2", 1, (0, ())),
    ("rp2", 2, (0, (2,))),
    ("S1", 5, (0, ())),
])
def test_cohomology(name, n, expected):
    assert cohomology(fixtures.COMPLEXES[name](), n).invariants() == expected


def test_cohomology_other_rings():
    assert cohomology(fixtures.rp2(), 2, "Q").invariants() == (0, ())
    rz = cohomology(fixtures.rp2(), 1, "RZ")
    assert (rz.torus_rank, rz.torsion) == (0, (2,))
    assert str(cohomology(fixtures.torus(), 1, "RZ")) == "(R/Z)^2"


def test_cycle_basis_rank():
    T = fixtures.torus()
    Z1 = cycle_basis(T, 1)
    assert (T.boundary(1) @ Z1).is_zero() and Z1.cols == 21 - 6


def test_fundamental_class_circle():
    K = fixtures.circle(3)
    M = fundamental_class(K)
    assert M.boundary().is_zero()
    assert M in (K.chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1}), -K.chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1}))


def test_fundamental_class_interval():
    K = fixtures.interval()
    M = fundamental_class(K)
    assert M == K.chain(1, {("a", "b"): 1, ("b", "c"): 1})
    assert M.boundary().terms() == {("a",): -1, ("c",): 1}
    dK = boundary_complex(K)
    assert dK.vertices == ("a", "c")
    assert boundary_fundamental_class(K).coefficients == (-1, 1)


def test_fundamental_class_sphere():
    K = fixtures.sphere2()
    M = fundamental_class(K, [1, -1, 1, -1])
    assert M.boundary().is_zero()
    assert orient(K) in ([1, -1, 1, -1], [-1, 1, -1, 1])


def test_non_manifold_and_non_orientable():
    K = SimplicialComplex([[0, 1, 2], [0, 1, 3], [0, 1, 4]])
    with pytest.raises(ValueError, match=r"non-manifold face \(0, 1\)"):
        fundamental_class(K)
    with pytest.raises(ValueError, match="not orientable"):
        fundamental_class(fixtures.moebius())
    with pytest.raises(ValueError, match="not coherent"):
        fundamental_class(fixtures.sphere2(), [1, 1, 1, 1])


def test_relative_cycle_validation():
    f = fixtures.point_in_circle()
    X, Y = f.target, f.source
    C = X.chain(1, {(0, 1): 1})
    with pytest.raises(ValueError, match="∂C"):
        RelativeCycle(f, C, Chain(Y, 0, (0,)))
    # [01] + [12] - [02] is closed on its own
    z = X.chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1})
    assert RelativeCycle(f, z, Chain(Y, 0, (0,))).degree == 1


def test_pushforward_closed_doubling():
    f = SimplicialMap(EMPTY, fixtures.circle(3), {})
    g = fixtures.doubling()
    g_b = SimplicialMap(EMPTY, EMPTY, {})
    rc = pushforward_fundamental(g, g_b, f)
    z3 = fixtures.circle(3).chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1})
    assert rc.C in (2 * z3, -2 * z3)
    assert rc.C_prime.is_zero()


def test_pushforward_interval_collapsing_ends():
    # four vertices a<b<c<d wrapped once around the triangle, a and d both to vertex 0;
    # a 2-edge interval cannot do this simplicially, its two edges would share an image
    M = SimplicialComplex([["a", "b"], ["b", "c"], ["c", "d"]])
    X = fixtures.circle(3)
    f = SimplicialMap.inclusion(fixtures.point(0), X)
    g = SimplicialMap(M, X, {"a": 0, "b": 1, "c": 2, "d": 0})
    g_b = SimplicialMap(boundary_complex(M), f.source, {"a": 0, "d": 0})
    rc = pushforward_fundamental(g, g_b, f)
    assert rc.C == X.chain(1, {(0, 1): 1, (1, 2): 1, (2, 0): 1})
    assert rc.C_prime.is_zero()


def test_pushforward_factorization_failure():
    M = SimplicialComplex([["a", "b"], ["b", "c"], ["c", "d"]])
    X = fixtures.circle(3)
    f = SimplicialMap.inclusion(fixtures.point(0), X)
    g = SimplicialMap(M, X, {"a": 0, "b": 1, "c": 0, "d": 1})
    g_b = SimplicialMap(boundary_complex(M), f.source, {"a": 0, "d": 0})
    with pytest.raises(ValueError, match="vertex 'd'"):
        pushforward_fundamental(g, g_b, f)


def test_pushforward_single_vertex():
    M = fixtures.point("m")
    X = fixtures.circle(3)
    f = SimplicialMap(EMPTY, X, {})
    rc = pushforward_fundamental(SimplicialMap(M, X, {"m": 2}), SimplicialMap(EMPTY, EMPTY, {}), f)
    assert rc.degree == 0 and rc.C.coefficients == (0, 0, 1)


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_cochain_pairing_stokes(s):
    # <δs, c> = <s, ∂c> on every basis edge of the sphere
    K = fixtures.sphere2()
    cs = Cochain(K, 0, tuple(s), "Z")
    ds = cs.coboundary()
    for e in K.simplices[1]:
        c = K.basis_chain(e)
        assert ds(c) == cs(c.boundary())
