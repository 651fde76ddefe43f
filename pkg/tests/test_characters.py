from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from delcoh import fixtures
from delcoh.characters import (
    act_on_II, characters_equal, chern_class_vector, embed_I_to_II, gauge_move, in_lambda_omega,
    make_character, make_relative, phi_f, rel_holonomy, relative_cycle_basis, same_type_III,
    same_type_IV, trivial_character, trivial_relative, trivialization_kind, type_III_witness,
    type_IV_witness,
)
from delcoh.cone import CohomologyGroup, ConeComplex
from delcoh.core_algebra import frac_mod1, matvec
from delcoh.sequences import sample_character, sample_phi
from delcoh.simplicial import Chain, RelativeCycle

Z3 = (1, -1, 1)  # [01] + [12] - [02] in sorted edge order [01], [02], [12]


def sphere_face(face, value):
    K = fixtures.sphere2()
    v = [F(0)] * K.count(2)
    v[K.index(face)] = F(value)
    return v


def quarter_face():
    f = fixtures.equator()
    return make_relative(f, 2, sphere_face((0, 1, 2), F(1, 4)), claimed_type="I")


def cap_cycle(f):
    X, Y = f.target, f.source
    return RelativeCycle(f, X.basis_chain((0, 1, 2)), -Chain(Y, 1, Z3))


def rel_basis_cycles(f, p):
    L = relative_cycle_basis(f, p)
    nX = f.target.count(p)
    return [(col[:nX], col[nX:]) for col in L.columns()]


# -- absolute characters -----------------------------------------------------

def test_flat_circle_character():
    K = fixtures.circle(3)
    # (1/2, 1/3, 0) in cyclic order [01], [12], [20] is (1/2, 0, 1/3) in sorted order
    chi = make_character(K, 1, [F(1, 2), 0, F(1, 3)])
    assert chi.curvature == []
    assert frac_mod1(chi.holonomy(Z3)) == F(5, 6)


def test_trivial_character():
    K = fixtures.circle(3)
    assert characters_equal(make_character(K, 1, [0, 0, 0], []), trivial_character(K, 1))


def test_sphere_chern_generator():
    K = fixtures.sphere2()
    c = [0] * 4
    c[K.index((0, 1, 2))] = 1
    chi = make_character(K, 1, [0] * 6, c)
    assert chi.curvature == [F(x) for x in c]
    for face in K.simplices[2]:
        D = K.basis_chain(face)
        assert frac_mod1(chi.holonomy(D.boundary().coefficients)) == frac_mod1(
            sum(a * b for a, b in zip(chi.curvature, D.coefficients)))


def test_make_character_rejects_non_cocycle():
    K = fixtures.sphere2()
    with pytest.raises(ValueError, match="not a cocycle"):
        make_character(K, 0, [0] * 4, [1, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError, match="shape mismatch"):
        make_character(K, 1, [0, 0], [0] * 4)


def test_characters_equal_examples():
    K = fixtures.circle(3)
    a = make_character(K, 1, [F(1, 2), 0, F(1, 3)])
    assert characters_equal(a, make_character(K, 1, [F(3, 2), 0, F(1, 3)]))
    assert not characters_equal(a, trivial_character(K, 1))
    with pytest.raises(ValueError):
        characters_equal(a, trivial_character(K, 0))


# -- relative characters -----------------------------------------------------

def test_quarter_face_is_type_I():
    r = quarter_face()
    assert all(x == 0 for x in r.omega) and all(x == 0 for x in r.rho)
    assert trivialization_kind(r).kind == "geometric"
    assert frac_mod1(rel_holonomy(r, cap_cycle(r.f))) == F(1, 4)


def test_trivial_relative_holonomy():
    f = fixtures.equator()
    assert rel_holonomy(trivial_relative(f, 2), cap_cycle(f)) == 0


def test_holonomy_degree_mismatch():
    f = fixtures.equator()
    with pytest.raises(ValueError, match="degree mismatch"):
        rel_holonomy(trivial_relative(f, 1), cap_cycle(f))


def test_type_II_with_integral_rho():
    f = fixtures.equator()
    c_X = [0] * 4
    c_X[f.target.index((0, 1, 2))] = 1
    r = make_relative(f, 1, [0] * 6, [0] * 3, c_X, [1, 0, 0], claimed_type="II'")
    assert r.omega == [F(x) for x in c_X]
    assert r.rho == [1, 0, 0]
    t = trivialization_kind(r)
    assert t.kind == "strong-topological" and t.rho_integral


def test_non_integral_rho():
    f = fixtures.equator()
    T_X = [F(0)] * 6
    T_X[f.target.index((0, 1))] = F(1, 2)
    r = make_relative(f, 1, T_X)
    assert r.rho == [F(1, 2), 0, 0]
    t = trivialization_kind(r)
    assert t.kind == "strong-topological" and not t.rho_integral
    with pytest.raises(ValueError, match="type II' violated"):
        make_relative(f, 1, T_X, claimed_type="II'")


def test_make_relative_errors():
    g = fixtures.equator()
    # c_X = 1 on [01] is not a cocycle on the sphere
    with pytest.raises(ValueError, match="δc_X ≠ 0"):
        make_relative(g, 0, [0] * 4, None, [1, 0, 0, 0, 0, 0], [0, 0, 0])
    with pytest.raises(ValueError, match=r"f\^#c_X - δc_Y ≠ 0 on \(0, 1, 2\)"):
        make_relative(fixtures.identity_sphere(), 1, [0] * 6, [0] * 4, [1, 0, 0, 0], [0] * 6)
    with pytest.raises(ValueError, match=r"type I needs ρ = 0.*\(0, 1\)"):
        make_relative(g, 1, [F(1, 3), 0, 0, 0, 0, 0], claimed_type="I")
    f = fixtures.point_in_circle()
    with pytest.raises(ValueError, match="unknown type tag"):
        make_relative(f, 1, [0, 0, 0], claimed_type="V")


def test_gauge_move_keeps_character():
    r = quarter_face()
    f = r.f
    g = gauge_move(r, S_X=[F(1, 3)] * 6, S_Y=[F(-2, 5)] * 3, u_X=[1, 0, 0, 2], u_Y=[0, -1, 0])
    assert g.T != r.T
    assert characters_equal(r, g)
    assert rel_holonomy(g, cap_cycle(f)) - rel_holonomy(r, cap_cycle(f)) == int(
        rel_holonomy(g, cap_cycle(f)) - rel_holonomy(r, cap_cycle(f)))


def test_embed_is_identity_on_data():
    f = fixtures.equator()
    for r in (trivial_relative(f, 2, "I"), quarter_face()):
        e = embed_I_to_II(r)
        assert (e.T, e.c, e.type_tag) == (r.T, r.c, "II")
    with pytest.raises(ValueError):
        embed_I_to_II(trivial_relative(f, 2, "II"))


def test_lambda_omega():
    f = fixtures.equator()
    rho = [F(5, 6), 0, 0]
    assert in_lambda_omega([0] * 4, [0] * 3, f, degree=2)
    assert not in_lambda_omega([0] * 4, rho, f, degree=2)
    assert in_lambda_omega([0] * 4, [2, 0, 0], f, degree=2)
    with pytest.raises(ValueError, match="precondition"):
        in_lambda_omega([0] * 6, [F(1, 2), 0, 0], fixtures.equator(), degree=1)


# -- action, type III ----------------------------------------------------------

def test_action_by_trivial_and_inverse():
    r = sample_character(fixtures.equator(), 2, "II", seed=3)
    Y = r.Y
    xi = make_character(Y, 1, [F(1, 5), F(-2, 3), F(1, 2)], [])
    assert characters_equal(act_on_II(trivial_character(Y, 1), r), r)
    assert characters_equal(act_on_II(-xi, act_on_II(xi, r)), r)
    with pytest.raises(ValueError):
        act_on_II(trivial_character(Y, 0), r)


def test_type_III_same_orbit_has_witness():
    r = sample_character(fixtures.equator(), 2, "II", seed=5)
    xi = make_character(r.Y, 1, [F(1, 7), 0, F(3, 4)], [])
    r2 = act_on_II(xi, r)
    w = type_III_witness(r, r2)
    assert w is not None and characters_equal(act_on_II(w, r), r2)


def test_type_III_different_curvature():
    f = fixtures.equator()
    c_X = [0] * 4
    c_X[0] = 1
    r = make_relative(f, 1, [0] * 6, None, c_X, [0, 0, 0])
    assert not same_type_III(trivial_relative(f, 1), r)


def test_type_III_discrepancy_on_C():
    # a flat character on X with holonomy 1/3 around the circle: the
    # discrepancy is seen on (z, 0), so no character on Y can absorb it
    f = fixtures.point_in_circle()
    r = make_relative(f, 1, [F(1, 3), 0, 0])
    assert not same_type_III(trivial_relative(f, 1), r)


# -- phi_f and type IV ----------------------------------------------------------

def test_phi_zero_is_trivial():
    f = fixtures.equator()
    assert characters_equal(phi_f(f, 1, [0] * 6), trivial_relative(f, 1))


def test_phi_integral_is_trivial():
    f = fixtures.equator()
    kappa = matvec(f.target.coboundary(0), [3, -1, 0, 2])
    r = phi_f(f, 1, kappa)
    # holonomy is integral everywhere, but ρ = f^#κ is a nonzero curvature on Y,
    # so the class is nontrivial in II and trivial in IV
    assert all(frac_mod1(r.holonomy(C, Cp)) == 0 for C, Cp in rel_basis_cycles(f, 1))
    assert any(r.rho) and not characters_equal(r, trivial_relative(f, 1))
    assert same_type_IV(r, trivial_relative(f, 1, "II'"))


def test_phi_precondition():
    f = fixtures.equator()
    with pytest.raises(ValueError, match="not closed"):
        phi_f(f, 1, [F(1, 2), 0, 0, 0, 0, 0])


def test_phi_half_coboundary():
    f = fixtures.equator()
    X, Y = f.target, f.source
    rho_t = matvec(X.coboundary(0), [0, F(1, 2), 0, 0])
    r = phi_f(f, 1, rho_t)
    edge = RelativeCycle(f, X.basis_chain((0, 1)), Chain(Y, 0, (1, -1, 0)))
    assert frac_mod1(rel_holonomy(r, edge)) == F(1, 2)
    for C, Cp in rel_basis_cycles(f, 1):
        assert frac_mod1(r.holonomy(C, Cp)) == frac_mod1(sum(a * b for a, b in zip(rho_t, C)))


def test_type_IV_examples():
    f = fixtures.equator()
    r1 = sample_character(f, 1, "II'", seed=2)
    r2, rho_t = sample_phi(f, 1, seed=9)
    assert same_type_IV(r1, r1)
    assert same_type_IV(r1 + r2, r1)
    w = type_IV_witness(r2, trivial_relative(f, 1, "II'"))
    assert w is not None and characters_equal(phi_f(f, 1, w), r2)


def test_type_IV_torsion_chern_class():
    # doubling: H^2(X, Y, f; Z) = Z/2 and this rep has the odd class, with ω = 0
    f = fixtures.doubling()
    T_X = [F(0)] * 3
    T_X[0] = F(1, 2)
    c_Y = [1, 0, 0, 0, 0, 0]
    r = make_relative(f, 1, T_X, None, [], c_Y, claimed_type="II'")
    assert not any(r.omega)
    cone = ConeComplex(f)
    H = CohomologyGroup("H2", cone.differential(1), cone.differential(2))
    assert H.structure.torsion == (2,) and H.coordinates(chern_class_vector(r)) == [1]
    assert not same_type_IV(r, trivial_relative(f, 1, "II'"))


def test_type_IV_rejects_non_integral():
    f = fixtures.equator()
    T_X = [F(0)] * 6
    T_X[0] = F(1, 2)
    with pytest.raises(ValueError, match="II'"):
        same_type_IV(make_relative(f, 1, T_X), trivial_relative(f, 1))


# -- properties ---------------------------------------------------------------

PAIRS = ["equator", "pt_in_S1", "doubling", "S1_in_T2"]


@given(st.sampled_from(PAIRS), st.integers(1, 2), st.integers(0, 10 ** 6))
def test_type_III_is_an_equivalence(name, p, seed):
    f = fixtures.PAIRS[name]()
    a = sample_character(f, p, "II", seed)
    b = sample_character(f, p, "II", seed + 1)
    assert same_type_III(a, a)
    assert same_type_III(a, b) == same_type_III(b, a)
    xi = sample_character(f, p, "absolute-Y", seed + 2)
    c = act_on_II(xi, a)
    assert same_type_III(a, c) and same_type_III(c, a)


@given(st.sampled_from(PAIRS), st.integers(1, 2), st.integers(0, 10 ** 6))
def test_holonomy_is_additive(name, p, seed):
    f = fixtures.PAIRS[name]()
    a = sample_character(f, p, "II", seed)
    b = sample_character(f, p, "II", seed + 7)
    for C, Cp in rel_basis_cycles(f, p):
        assert frac_mod1((a + b).holonomy(C, Cp)) == frac_mod1(a.holonomy(C, Cp) + b.holonomy(C, Cp))
        assert frac_mod1((a - a).holonomy(C, Cp)) == 0
