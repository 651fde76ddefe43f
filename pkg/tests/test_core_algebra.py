import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from delcoh.core_algebra import (
    IntMatrix, MixedSystem, cokernel_structure, determinant, frac_mod1, integer_kernel,
    integral_on_sublattice, matvec, smith_normal_form, solve_integer, solve_mod_integers,
    subquotient_structure,
)
from delcoh.fixtures import circle

from oracles import det as oracle_det
from oracles import invariant_factors


def matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(0, max_rows).flatmap(
        lambda m: st.integers(0, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
            .map(lambda rows: IntMatrix(rows, m, n))))


def test_snf_zero_matrix():
    s = smith_normal_form(IntMatrix.zeros(2, 2))
    assert s.D.is_zero()
    assert s.U == IntMatrix.identity(2) and s.V == IntMatrix.identity(2)


def test_snf_identity():
    assert smith_normal_form(IntMatrix.identity(3)).D == IntMatrix.identity(3)


def test_snf_two_by_two():
    # d1 = gcd(2,4,6,8) = 2, d1 d2 = |det| = 8
    s = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    assert s.invariant_factors == [2, 4]


@given(matrices())
def test_snf_factorization(A):
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert s.U @ s.Uinv == IntMatrix.identity(A.rows)
    assert s.V @ s.Vinv == IntMatrix.identity(A.cols)
    for i in range(s.D.rows):
        for j in range(s.D.cols):
            if i != j:
                assert s.D[i, j] == 0
    d = s.diagonal
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[:len(nz)] == nz  # nonzero entries first
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(matrices(4, 4, -4, 4))
def test_snf_matches_minor_oracle(A):
    assert smith_normal_form(A).invariant_factors == invariant_factors(A.tolist())


@given(matrices(4, 4))
def test_determinant_matches_elimination(A):
    if A.rows != A.cols:
        return
    assert determinant(A) == oracle_det(A.tolist())


def test_cokernel_examples():
    g = cokernel_structure(IntMatrix([[2]]))
    assert g.invariants() == (0, (2,))
    assert cokernel_structure(IntMatrix.zeros(3, 2)).invariants() == (3, ())
    # boundary_1 of the triangle has rank 2, so its cokernel Z^3 / im has rank 1
    assert cokernel_structure(circle(3).boundary(1)).invariants() == (1, ())


def test_group_formatting():
    assert str(cokernel_structure(IntMatrix([[2, 0], [0, 0]]))) == "Z ⊕ Z/2"
    assert str(cokernel_structure(IntMatrix.identity(2))) == "0"


def test_solve_integer_examples():
    assert solve_integer(IntMatrix.identity(3), [4, -1, 7]).x == [4, -1, 7]
    res = solve_integer(IntMatrix([[2]]), [3])
    assert not res and "not divisible by 2" in res.certificate
    assert solve_integer(IntMatrix([[2, 4], [6, 8]]), [2, 6]).x == [1, 0]
    assert not solve_integer(IntMatrix([[1]]), [Fraction(1, 2)])


def test_solve_integer_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension mismatch"):
        solve_integer(IntMatrix.identity(2), [1, 2, 3])


@given(matrices(), st.data())
def test_solve_integer_roundtrip(A, data):
    x = data.draw(st.lists(st.integers(-5, 5), min_size=A.cols, max_size=A.cols))
    b = matvec(A, x)
    sol = solve_integer(A, b)
    assert sol and matvec(A, sol.x) == b


@given(matrices())
def test_integer_kernel(A):
    K = integer_kernel(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - smith_normal_form(A).rank


def test_integral_on_sublattice():
    z = IntMatrix.from_columns([[1, 1, -1]], 3)
    assert integral_on_sublattice([0, 0, 0], z)
    assert not integral_on_sublattice([Fraction(1, 2), Fraction(1, 3), 0], z)  # 5/6
    assert integral_on_sublattice([1, 1, 0], z)  # 2
    with pytest.raises(ValueError):
        integral_on_sublattice([0, 0], z)


def test_subquotient():
    L = IntMatrix.identity(2)
    B = IntMatrix.from_columns([[2, 0]], 2)
    assert subquotient_structure(L, B).invariants() == (1, (2,))


def test_frac_mod1():
    assert frac_mod1(Fraction(-1, 4)) == Fraction(3, 4)
    assert frac_mod1(3) == 0


@given(matrices(4, 3), matrices(4, 3), st.integers(0, 10_000))
def test_mixed_system(A, B, seed):
    if A.rows != B.rows:
        return
    rng = random.Random(seed)
    S = MixedSystem(A, B)
    r0 = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(A.cols)]
    n0 = [rng.randint(-3, 3) for _ in range(B.cols)]
    b = [x + y for x, y in zip(matvec(A, r0), matvec(B, n0))]
    sol = S.solve(b)
    assert sol is not None
    r, n = sol
    assert all(isinstance(k, int) for k in n)
    assert [x + y for x, y in zip(matvec(A, r), matvec(B, n))] == b
    r, n = S.sample(rng)
    assert all(x + y == 0 for x, y in zip(matvec(A, r), matvec(B, n)))


def test_mixed_system_infeasible():
    # 2n = 1 has no integer solution, and there is no rational part to absorb it
    assert MixedSystem(IntMatrix.zeros(1, 0), IntMatrix([[2]])).solve([1]) is None
    assert solve_mod_integers(IntMatrix([[2]]), [Fraction(1, 3)]) is not None
    assert solve_mod_integers(IntMatrix.zeros(1, 1), [Fraction(1, 3)]) is None
