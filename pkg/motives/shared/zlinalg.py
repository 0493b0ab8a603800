"""Exact integer-matrix algebra: Smith and Hermite normal forms, lattices, presentations.

Everything is built on plain Python integers; sympy is only used by
``IntMatrix.to_sympy`` for cross-checks and determinants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from sympy import ImmutableMatrix

from motives.shared.errors import ContractViolation


IntVector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ContractViolation("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ContractViolation(
                f"entry count {len(self.entries)} does not match {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        flat: list[int] = []
        for row in rows:
            if len(row) != width:
                raise ContractViolation("ragged rows")
            flat.extend(int(value) for value in row)
        return cls(len(rows), width, tuple(flat))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        for column in columns:
            if len(column) != rows:
                raise ContractViolation("column length does not match row count")
        return cls.from_rows([[int(column[i]) for column in columns] for i in range(rows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> IntVector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> IntVector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[IntVector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(self.column(j)) for j in range(self.cols)], cols=self.rows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ContractViolation(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = [
            [sum(self[i, k] * other[k, j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, cols=other.cols)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ContractViolation("cannot add matrices of different shapes")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def apply(self, vector: Sequence[int]) -> IntVector:
        if len(vector) != self.cols:
            raise ContractViolation(f"vector of length {len(vector)} does not fit {self.rows}x{self.cols}")
        return tuple(sum(self[i, j] * int(vector[j]) for j in range(self.cols)) for i in range(self.rows))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ContractViolation("hstack needs equal row counts")
        return IntMatrix.from_rows(
            [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_sympy(self) -> ImmutableMatrix:
        return ImmutableMatrix(self.rows, self.cols, list(self.entries))


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ S @ V == A`` with unimodular ``U``, ``V``; inverses are kept for solving."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    u_inverse: IntMatrix = field(repr=False)
    v_inverse: IntMatrix = field(repr=False)

    @property
    def diagonal(self) -> IntVector:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for value in self.diagonal if value != 0)


class _Elimination:
    """Mutable working state of the Smith reduction: L @ A @ R == S."""

    def __init__(self, matrix: IntMatrix):
        self.m = matrix.rows
        self.n = matrix.cols
        self.s = matrix.to_rows()
        self.left = IntMatrix.identity(self.m).to_rows()
        self.left_inv = IntMatrix.identity(self.m).to_rows()
        self.right = IntMatrix.identity(self.n).to_rows()
        self.right_inv = IntMatrix.identity(self.n).to_rows()

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for mat in (self.s, self.left):
            mat[i], mat[j] = mat[j], mat[i]
        for row in self.left_inv:
            row[i], row[j] = row[j], row[i]

    def add_row(self, target: int, source: int, k: int) -> None:
        # row_target += k * row_source
        for mat in (self.s, self.left):
            mat[target] = [a + k * b for a, b in zip(mat[target], mat[source])]
        for row in self.left_inv:
            row[source] -= k * row[target]

    def negate_row(self, i: int) -> None:
        for mat in (self.s, self.left):
            mat[i] = [-a for a in mat[i]]
        for row in self.left_inv:
            row[i] = -row[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for mat in (self.s, self.right):
            for row in mat:
                row[i], row[j] = row[j], row[i]
        self.right_inv[i], self.right_inv[j] = self.right_inv[j], self.right_inv[i]

    def add_col(self, target: int, source: int, k: int) -> None:
        # col_target += k * col_source
        for mat in (self.s, self.right):
            for row in mat:
                row[target] += k * row[source]
        self.right_inv[source] = [a - k * b for a, b in zip(self.right_inv[source], self.right_inv[target])]

    def smallest_pivot(self, t: int) -> tuple[int, int] | None:
        best: tuple[int, int, int] | None = None
        for i in range(t, self.m):
            for j in range(t, self.n):
                value = self.s[i][j]
                if value and (best is None or abs(value) < best[0]):
                    best = (abs(value), i, j)
        return None if best is None else (best[1], best[2])

    def reduce_at(self, t: int) -> bool:
        pivot = self.smallest_pivot(t)
        if pivot is None:
            return False
        while True:
            i, j = pivot
            self.swap_rows(t, i)
            self.swap_cols(t, j)
            p = self.s[t][t]
            for i in range(t + 1, self.m):
                if self.s[i][t]:
                    self.add_row(i, t, -(self.s[i][t] // p))
            for j in range(t + 1, self.n):
                if self.s[t][j]:
                    self.add_col(j, t, -(self.s[t][j] // p))
            leftover = any(self.s[i][t] for i in range(t + 1, self.m)) or any(
                self.s[t][j] for j in range(t + 1, self.n)
            )
            if not leftover:
                offender = next(
                    (
                        i
                        for i in range(t + 1, self.m)
                        for j in range(t + 1, self.n)
                        if self.s[i][j] % p != 0
                    ),
                    None,
                )
                if offender is None:
                    break
                self.add_row(t, offender, 1)
            pivot = self.smallest_pivot(t)
        if self.s[t][t] < 0:
            self.negate_row(t)
        return True


def smith_normal_form(matrix: IntMatrix) -> SnfDecomposition:
    """Smith decomposition with deterministic pivoting (smallest |entry|, then lowest index)."""
    work = _Elimination(matrix)
    t = 0
    while t < min(work.m, work.n) and work.reduce_at(t):
        t += 1
    return SnfDecomposition(
        U=IntMatrix.from_rows(work.left_inv, cols=work.m),
        S=IntMatrix.from_rows(work.s, cols=work.n),
        V=IntMatrix.from_rows(work.right_inv, cols=work.n),
        u_inverse=IntMatrix.from_rows(work.left, cols=work.m),
        v_inverse=IntMatrix.from_rows(work.right, cols=work.n),
    )


def hermite_normal_form(matrix: IntMatrix) -> IntMatrix:
    """Row-style HNF: positive pivots moving right, entries above a pivot in [0, pivot)."""
    rows = matrix.to_rows()
    m, n = matrix.rows, matrix.cols
    pivot_row = 0
    for col in range(n):
        if pivot_row >= m:
            break
        while True:
            nonzero = [i for i in range(pivot_row, m) if rows[i][col]]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: (abs(rows[i][col]), i))
            rows[pivot_row], rows[best] = rows[best], rows[pivot_row]
            p = rows[pivot_row][col]
            cleared = True
            for i in range(pivot_row + 1, m):
                if rows[i][col]:
                    q = rows[i][col] // p
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[pivot_row])]
                    if rows[i][col]:
                        cleared = False
            if cleared:
                break
        if not rows[pivot_row][col]:
            continue
        if rows[pivot_row][col] < 0:
            rows[pivot_row] = [-a for a in rows[pivot_row]]
        p = rows[pivot_row][col]
        for i in range(pivot_row):
            q = rows[i][col] // p
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[pivot_row])]
        pivot_row += 1
    return IntMatrix.from_rows(rows, cols=n)


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """Canonical basis (as columns) of the lattice spanned by the columns of ``generators``."""
    hnf = hermite_normal_form(generators.transpose())
    kept = [list(hnf.row(i)) for i in range(hnf.rows) if any(hnf.row(i))]
    return IntMatrix.from_rows(kept, cols=generators.rows).transpose() if kept else IntMatrix.zeros(generators.rows, 0)


def same_lattice(a: IntMatrix, b: IntMatrix) -> bool:
    if a.rows != b.rows:
        raise ContractViolation("lattices live in different ambient ranks")
    return lattice_basis(a) == lattice_basis(b)


def kernel_basis(matrix: IntMatrix) -> IntMatrix:
    snf = smith_normal_form(matrix)
    free = [snf.v_inverse.column(j) for j in range(snf.rank, matrix.cols)]
    if not free:
        return IntMatrix.zeros(matrix.cols, 0)
    return lattice_basis(IntMatrix.from_columns(free, rows=matrix.cols))


def preimage_lattice(f: IntMatrix, target: IntMatrix) -> IntMatrix:
    """Basis of {x : f x lies in the column span of ``target``}."""
    if f.rows != target.rows:
        raise ContractViolation("preimage needs f and the target lattice in the same ambient space")
    kernel = kernel_basis(f.hstack(-target))
    projected = [column[: f.cols] for column in kernel.columns()]
    if not projected:
        return IntMatrix.zeros(f.cols, 0)
    return lattice_basis(IntMatrix.from_columns(projected, rows=f.cols))


def lattice_intersection(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.rows != b.rows:
        raise ContractViolation("lattices live in different ambient ranks")
    kernel = kernel_basis(a.hstack(-b))
    images = [a.apply(column[: a.cols]) for column in kernel.columns()]
    if not images:
        return IntMatrix.zeros(a.rows, 0)
    return lattice_basis(IntMatrix.from_columns(images, rows=a.rows))


def solve_integer(matrix: IntMatrix, rhs: Sequence[int]) -> IntVector | None:
    if len(rhs) != matrix.rows:
        raise ContractViolation(f"right-hand side has length {len(rhs)}, expected {matrix.rows}")
    snf = smith_normal_form(matrix)
    c = snf.u_inverse.apply(rhs)
    y = [0] * matrix.cols
    for i, value in enumerate(c):
        s = snf.S[i, i] if i < min(matrix.rows, matrix.cols) else 0
        if s == 0:
            if value != 0:
                return None
            continue
        if value % s != 0:
            return None
        y[i] = value // s
    solution = snf.v_inverse.apply(y)
    if matrix.apply(solution) != tuple(int(v) for v in rhs):
        raise ContractViolation("integer solve produced a non-solution")
    return solution


@dataclass(frozen=True)
class GroupPresentation:
    """ℤ^n_gens modulo the column span of ``relations``."""

    n_gens: int
    relations: IntMatrix
    invariant_factors: tuple[int, ...]
    free_rank: int
    labels: tuple[str, ...] = ()
    snf: SnfDecomposition | None = field(default=None, repr=False, compare=False)

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        total = 1
        for factor in self.invariant_factors:
            total *= factor
        return total

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def _decomposition(self) -> SnfDecomposition:
        return self.snf if self.snf is not None else smith_normal_form(self.relations)

    def reduce(self, vector: Sequence[int]) -> IntVector:
        """Canonical coordinates in ⊕ ℤ/sᵢ ⊕ ℤ^free_rank."""
        if len(vector) != self.n_gens:
            raise ContractViolation(f"element has {len(vector)} coordinates, group has {self.n_gens} generators")
        snf = self._decomposition()
        c = snf.u_inverse.apply(vector)
        diagonal = snf.diagonal
        torsion: list[int] = []
        free: list[int] = []
        for i, value in enumerate(c):
            s = diagonal[i] if i < len(diagonal) else 0
            if s == 0:
                free.append(value)
            elif s > 1:
                torsion.append(value % s)
        return tuple(torsion + free)

    def is_zero(self, vector: Sequence[int]) -> bool:
        return not any(self.reduce(vector))

    def describe(self) -> str:
        parts = [f"Z/{factor}" for factor in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def cokernel_presentation(matrix: IntMatrix, labels: Sequence[str] = ()) -> GroupPresentation:
    snf = smith_normal_form(matrix)
    diagonal = snf.diagonal
    return GroupPresentation(
        n_gens=matrix.rows,
        relations=matrix,
        invariant_factors=tuple(value for value in diagonal if value > 1),
        free_rank=matrix.rows - snf.rank,
        labels=tuple(labels),
        snf=snf,
    )


def unit_vector(n: int, i: int) -> IntVector:
    return tuple(1 if k == i else 0 for k in range(n))


@dataclass(frozen=True)
class PresentationMap:
    """A homomorphism of presented groups given on generators (matrix columns)."""

    source: GroupPresentation
    target: GroupPresentation
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if (self.matrix.rows, self.matrix.cols) != (self.target.n_gens, self.source.n_gens):
            raise ContractViolation(
                f"map matrix {self.matrix.rows}x{self.matrix.cols} does not fit "
                f"{self.source.n_gens} -> {self.target.n_gens} generators"
            )

    def contains_in_image(self, vector: Sequence[int]) -> bool:
        system = self.matrix.hstack(self.target.relations)
        return solve_integer(system, vector) is not None

    def relation_violations(self) -> list[IntVector]:
        """Source relations whose image is not zero in the target."""
        return [
            column
            for column in self.source.relations.columns()
            if not self.target.is_zero(self.matrix.apply(column))
        ]

    def is_well_defined(self) -> bool:
        return not self.relation_violations()

    def kernel_generators(self) -> list[IntVector]:
        return preimage_lattice(self.matrix, self.target.relations).columns()

    def injectivity_witness(self) -> IntVector | None:
        for vector in self.kernel_generators():
            if not self.source.is_zero(vector):
                return vector
        return None

    def is_injective(self) -> bool:
        return self.injectivity_witness() is None

    def surjectivity_witness(self) -> IntVector | None:
        for i in range(self.target.n_gens):
            generator = unit_vector(self.target.n_gens, i)
            if not self.contains_in_image(generator):
                return generator
        return None

    def is_surjective(self) -> bool:
        return self.surjectivity_witness() is None

    def then(self, other: PresentationMap) -> PresentationMap:
        if other.source.n_gens != self.target.n_gens:
            raise ContractViolation("maps are not composable")
        return PresentationMap(self.source, other.target, other.matrix @ self.matrix)
