"""Exact integer / rational linear algebra.

Everything here is pure and exact: Python ints and ``fractions.Fraction``.
Matrices are :class:`IntMatrix` (integer entries, explicit shape so that
0 x n and n x 0 matrices behave).  Vectors are plain lists.

The workhorse is :func:`smith_normal_form`; every group computation and
every integrality question in the package reduces to it, including the
mixed rational/integer solver :class:`MixedSystem`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Number = int | Fraction


class IntMatrix:
    """Dense integer matrix stored as a list of rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None):
        data = [list(r) for r in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entry count does not match shape {rows}x{cols}")
        for r in data:
            for v in r:
                if not isinstance(v, int):
                    raise TypeError(f"IntMatrix entries must be int, got {type(v).__name__}")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)],
                         self.cols, self.rows)

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self.data[i][j]
        return self.data[idx]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r}, rows={self.rows}, cols={self.cols})"

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-v for v in r] for r in self.data], self.rows, self.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                         self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix([[_dot(r, c) for c in ocols] for r in self.data], self.rows, other.cols)
        return matvec(self, other)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * v for v in r] for r in self.data], self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.data for v in r)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "IntMatrix":
        rows, cols = list(rows), list(cols)
        return IntMatrix([[self.data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]


def _dot(u: Sequence[Number], v: Sequence[Number]) -> Number:
    return sum((a * b for a, b in zip(u, v) if a and b), 0)


def dot(u: Sequence[Number], v: Sequence[Number]) -> Number:
    if len(u) != len(v):
        raise ValueError(f"length mismatch {len(u)} vs {len(v)}")
    return _dot(u, v)


def matvec(A: IntMatrix, v: Sequence[Number]) -> list:
    if A.cols != len(v):
        raise ValueError(f"shape mismatch {A.shape} @ vector of length {len(v)}")
    return [_dot(r, v) for r in A.data]


def hstack(*blocks: IntMatrix) -> IntMatrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("hstack: row counts differ")
    return IntMatrix([sum((b.data[i] for b in blocks), []) for i in range(rows)],
                     rows, sum(b.cols for b in blocks))


def vstack(*blocks: IntMatrix) -> IntMatrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("vstack: column counts differ")
    return IntMatrix([r for b in blocks for r in b.data], sum(b.rows for b in blocks), cols)


def block(grid: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
    return vstack(*(hstack(*row) for row in grid))


def frac_mod1(x: Number) -> Fraction:
    """Canonical representative of ``x`` in [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def is_integral(v: Iterable[Number]) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def lcm_denominator(v: Iterable[Number]) -> int:
    m = 1
    for x in v:
        d = Fraction(x).denominator
        m = m * d // gcd(m, d)
    return m


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with U, V unimodular and D in Smith form.

    ``Uinv`` and ``Vinv`` are the exact inverses; they are tracked during the
    reduction because the lattice computations need them.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix
    Vinv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D.data[i][i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot rule: smallest nonzero absolute value in the remaining block, ties
    broken by lowest row, then lowest column.  The result is deterministic.
    """
    m, n = A.rows, A.cols
    a = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    UinvT = [[int(i == j) for j in range(m)] for i in range(m)]  # rows = columns of U^-1
    VT = [[int(i == j) for j in range(n)] for i in range(n)]  # rows = columns of V
    Vinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_sub(i: int, t: int, q: int) -> None:
        # row_i -= q * row_t
        ai, at = a[i], a[t]
        for j in range(n):
            if at[j]:
                ai[j] -= q * at[j]
        ui, ut = U[i], U[t]
        for j in range(m):
            if ut[j]:
                ui[j] -= q * ut[j]
        wt, wi = UinvT[t], UinvT[i]
        for j in range(m):
            if wi[j]:
                wt[j] += q * wi[j]

    def row_swap(i: int, t: int) -> None:
        a[i], a[t] = a[t], a[i]
        U[i], U[t] = U[t], U[i]
        UinvT[i], UinvT[t] = UinvT[t], UinvT[i]

    def col_sub(j: int, t: int, q: int) -> None:
        # col_j -= q * col_t
        for r in a:
            if r[t]:
                r[j] -= q * r[t]
        vj, vt = VT[j], VT[t]
        for k in range(n):
            if vt[k]:
                vj[k] -= q * vt[k]
        wt, wj = Vinv[t], Vinv[j]
        for k in range(n):
            if wj[k]:
                wt[k] += q * wj[k]

    def col_swap(j: int, t: int) -> None:
        for r in a:
            r[j], r[t] = r[t], r[j]
        VT[j], VT[t] = VT[t], VT[j]
        Vinv[j], Vinv[t] = Vinv[t], Vinv[j]

    t = 0
    while t < min(m, n):
        while True:
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i0, j0 = best
            if i0 != t:
                row_swap(i0, t)
            if j0 != t:
                col_swap(j0, t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    row_sub(i, t, a[i][t] // p)
                    if a[i][t]:
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            # bring a non-divisible entry into the pivot row
            row_sub(t, bad, -1)
        if best is None:
            break
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            U[t] = [-v for v in U[t]]
            UinvT[t] = [-v for v in UinvT[t]]
        t += 1

    Vm = IntMatrix([list(c) for c in zip(*VT)], n, n) if n else IntMatrix.zeros(0, 0)
    Uinv = IntMatrix([list(c) for c in zip(*UinvT)], m, m) if m else IntMatrix.zeros(0, 0)
    return SmithDecomposition(IntMatrix(U, m, m), IntMatrix(a, m, n), Vm, Uinv, IntMatrix(Vinv, n, n))


def determinant(A: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = A.rows
    if n != A.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if M[i][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^free_rank + sum Z/d_i, with d_i | d_{i+1}.

    ``generator_witnesses`` lists ambient integer vectors: the torsion
    generators first (one per entry of ``torsion``), then the free ones.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    generator_witnesses: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative rank")
        for d in self.torsion:
            if d <= 1:
                raise ValueError(f"torsion coefficient {d} must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion chain broken: {a} does not divide {b}")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return self.free_rank, self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class RZModuleInvariants:
    """(R/Z)^torus_rank + sum Z/d_i; R/Z-modules are not f.g., so only invariants."""

    torus_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.torus_rank < 0:
            raise ValueError("negative torus rank")
        FGAbelianGroup(0, self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.torus_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.torus_rank == 1:
            parts.append("R/Z")
        elif self.torus_rank > 1:
            parts.append(f"(R/Z)^{self.torus_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


def cokernel_structure(A: IntMatrix) -> FGAbelianGroup:
    """Structure of Z^rows / im(A), with generator witnesses in Z^rows."""
    snf = smith_normal_form(A)
    diag = snf.diagonal
    gens_t, torsion, gens_f = [], [], []
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 1:
            continue
        w = tuple(snf.Uinv.column(i))
        if d == 0:
            gens_f.append(w)
        else:
            torsion.append(d)
            gens_t.append(w)
    return FGAbelianGroup(len(gens_f), tuple(torsion), tuple(gens_t + gens_f))


def integer_kernel(A: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x in Z^cols : A x = 0}."""
    snf = smith_normal_form(A)
    r = snf.rank
    return IntMatrix.from_columns([snf.V.column(j) for j in range(r, A.cols)], A.cols)


def left_kernel(A: IntMatrix) -> IntMatrix:
    """Rows form a Z-basis of {y : y A = 0}; they also span the rational left kernel."""
    snf = smith_normal_form(A)
    r = snf.rank
    return IntMatrix([snf.U.data[i] for i in range(r, A.rows)], A.rows - r, A.rows)


def lattice_basis(G: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the lattice spanned by the columns of G."""
    snf = smith_normal_form(G)
    cols = [[d * x for x in snf.Uinv.column(i)] for i, d in enumerate(snf.diagonal) if d]
    return IntMatrix.from_columns(cols, G.rows)


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


@dataclass(frozen=True)
class IntegerSolve:
    """Outcome of :func:`solve_integer`; truthy iff a solution exists."""

    x: list[int] | None
    certificate: str | None = None

    def __bool__(self) -> bool:
        return self.x is not None


def solve_integer(A: IntMatrix, b: Sequence[Number], snf: SmithDecomposition | None = None) -> IntegerSolve:
    """Integer solution of ``A x = b`` or a certificate that none exists."""
    if len(b) != A.rows:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has length {len(b)}")
    for i, v in enumerate(b):
        if Fraction(v).denominator != 1:
            return IntegerSolve(None, f"b[{i}] = {v} is not an integer")
    b = [int(v) for v in b]
    snf = snf or smith_normal_form(A)
    y = matvec(snf.U, b)
    diag = snf.diagonal
    z = []
    for i, yi in enumerate(y):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if yi:
                return IntegerSolve(None, f"Smith coordinate {i} is {yi} but hits a zero row")
        elif yi % d:
            return IntegerSolve(None, f"Smith coordinate {i}: {yi} not divisible by {d}")
        if i < A.cols:
            z.append(yi // d if d else 0)
    z += [0] * (A.cols - len(z))
    return IntegerSolve(matvec(snf.V, z))


def integral_on_sublattice(t: Sequence[Number], L: IntMatrix) -> bool:
    """True iff <t, v> is an integer for every column v of L."""
    if len(t) != L.rows:
        raise ValueError(f"dimension mismatch: t has length {len(t)}, L is {L.shape}")
    return all(Fraction(_dot(t, v)).denominator == 1 for v in L.columns())


def subquotient_structure(L: IntMatrix, B: IntMatrix) -> FGAbelianGroup:
    """Structure of span(L) / span(B), assuming span(B) is inside span(L).

    Witnesses are ambient vectors.
    """
    Lb = lattice_basis(L)
    if Lb.cols == 0:
        return FGAbelianGroup(0)
    snf = smith_normal_form(Lb)
    # coordinates of B in the basis Lb: Lb = Uinv D V^-1, D has full column rank
    coords = []
    for col in B.columns():
        y = matvec(snf.U, col)
        c = [y[i] // snf.diagonal[i] for i in range(Lb.cols)]
        coords.append(matvec(snf.V, c))
    C = IntMatrix.from_columns(coords, Lb.cols)
    Q = cokernel_structure(C)
    wit = tuple(tuple(matvec(Lb, w)) for w in Q.generator_witnesses)
    return FGAbelianGroup(Q.free_rank, Q.torsion, wit)


# --------------------------------------------------------------------------
# mixed rational / integer systems


class MixedSystem:
    """Solve ``A r + B n = b`` with r rational and n integer.

    A and B are integer matrices sharing a row count; b may be rational.
    Factorizes once, so repeated solves and samples are cheap.  Writing
    K for an integer basis of the left kernel of A, a rational r exists iff
    ``K (b - B n) = 0``, which is an integer system ``(K B) n = K b``.
    """

    def __init__(self, A: IntMatrix, B: IntMatrix):
        if A.rows != B.rows:
            raise ValueError(f"row mismatch {A.shape} vs {B.shape}")
        self.A, self.B = A, B
        self.snf_A = smith_normal_form(A)
        ra = self.snf_A.rank
        self.K = IntMatrix([self.snf_A.U.data[i] for i in range(ra, A.rows)], A.rows - ra, A.rows)
        self.M = self.K @ B
        self.snf_M = smith_normal_form(self.M)
        rm = self.snf_M.rank
        self.int_kernel = [self.snf_M.V.column(j) for j in range(rm, B.cols)]
        self.rat_kernel = [self.snf_A.V.column(j) for j in range(ra, A.cols)]

    @property
    def n_rational(self) -> int:
        return self.A.cols

    @property
    def n_integer(self) -> int:
        return self.B.cols

    def _rational_part(self, rhs: Sequence[Number]) -> list[Fraction] | None:
        y = matvec(self.snf_A.U, rhs)
        diag = self.snf_A.diagonal
        r = []
        for i, yi in enumerate(y):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if yi:
                    return None
            if i < self.A.cols:
                r.append(Fraction(yi, d) if d else Fraction(0))
        r += [Fraction(0)] * (self.A.cols - len(r))
        return matvec(self.snf_A.V, r)

    def solve(self, b: Sequence[Number]) -> tuple[list[Fraction], list[int]] | None:
        if len(b) != self.A.rows:
            raise ValueError(f"rhs length {len(b)} != {self.A.rows}")
        Kb = matvec(self.K, b)
        sol = solve_integer(self.M, Kb, self.snf_M)
        if not sol:
            return None
        n = sol.x
        Bn = matvec(self.B, n)
        r = self._rational_part([bi - x for bi, x in zip(b, Bn)])
        if r is None:  # pragma: no cover - excluded by the K-condition
            raise ArithmeticError("mixed solve: inconsistent rational part")
        return r, n

    def sample(self, rng: random.Random, int_range: int = 2, max_den: int = 12) -> tuple[list[Fraction], list[int]]:
        """Random solution of the homogeneous system."""
        n = [0] * self.B.cols
        for col in self.int_kernel:
            k = rng.randint(-int_range, int_range)
            if k:
                n = [a + k * c for a, c in zip(n, col)]
        r = self._rational_part([-x for x in matvec(self.B, n)])
        for col in self.rat_kernel:
            q = random_fraction(rng, max_den)
            if q:
                r = [a + q * c for a, c in zip(r, col)]
        return r, n


def random_fraction(rng: random.Random, max_den: int = 12, max_num: int = 6) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def solve_mod_integers(A: IntMatrix, b: Sequence[Number]) -> list[Fraction] | None:
    """Rational x with ``A x - b`` integral, or None."""
    res = MixedSystem(A, -IntMatrix.identity(A.rows)).solve(b)
    return None if res is None else res[0]


def rational_solve(A: IntMatrix, b: Sequence[Number]) -> list[Fraction] | None:
    """Some rational solution of ``A x = b``, or None."""
    res = MixedSystem(A, IntMatrix.zeros(A.rows, 0)).solve(b)
    return None if res is None else res[0]
