"""Universal vector extensions and the de Rham realization of toric motives.

The group of the universal extension is split once and for all as
G_a^r x T, so a lift of u is a pair (V, W) with V an r x r rational
matrix (the vector part) and W the torus part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from sympy import ImmutableMatrix, Rational, eye, zeros
from sympy.matrices import MatrixBase

from motives.shared.errors import ContractViolation
from motives.shared.motive import MotiveMorphism, ToricOneMotive, cartier_dual, is_valid, lattice_part
from motives.shared.ratmult import QStarElem
from motives.shared.symforms import block_names


@dataclass(frozen=True)
class UniversalExtension:
    base: ToricOneMotive
    v: ImmutableMatrix
    w: tuple[tuple[QStarElem, ...], ...]

    @property
    def vector_rank(self) -> int:
        return self.base.r

    def lift(self, i: int) -> tuple[tuple[Rational, ...], tuple[QStarElem, ...]]:
        """Image of the generator e_i in G_a^r x T."""
        return tuple(self.v[:, i]), tuple(row[i] for row in self.w)


@dataclass(frozen=True)
class DeRhamSpace:
    dim: int
    labels: tuple[str, ...]
    weight_minus2: tuple[int, ...]

    @property
    def weight_minus2_rank(self) -> int:
        return len(self.weight_minus2)


def universal_extension(motive: ToricOneMotive) -> UniversalExtension:
    return UniversalExtension(motive, ImmutableMatrix(eye(motive.r)), motive.u)


def _as_matrix(v: Sequence[Sequence[Rational | int]] | MatrixBase, r: int) -> ImmutableMatrix:
    if isinstance(v, MatrixBase):
        matrix = ImmutableMatrix(v)
    else:
        matrix = ImmutableMatrix(len(v), len(v[0]) if len(v) else r, [Rational(x) for row in v for x in row])
    if matrix.shape != (r, r):
        raise ContractViolation(f"vector part must be {r}x{r}, got {matrix.shape[0]}x{matrix.shape[1]}")
    return matrix


def is_universal(
    motive: ToricOneMotive,
    v: Sequence[Sequence[Rational | int]] | MatrixBase,
    w: Sequence[Sequence[QStarElem]],
) -> bool:
    matrix = _as_matrix(v, motive.r)
    if len(w) != motive.d or any(len(row) != motive.r for row in w):
        raise ContractViolation(f"torus part must be {motive.d}x{motive.r}")
    if tuple(tuple(row) for row in w) != motive.u:
        return False
    return matrix.det() != 0


def lift_change(
    motive: ToricOneMotive,
    first: Sequence[Sequence[Rational | int]] | MatrixBase,
    second: Sequence[Sequence[Rational | int]] | MatrixBase,
) -> ImmutableMatrix:
    """The automorphism A of G_a^r with A·V1 = V2 relating two universal lifts."""
    v1 = _as_matrix(first, motive.r)
    v2 = _as_matrix(second, motive.r)
    for matrix in (v1, v2):
        if not is_universal(motive, matrix, motive.u):
            raise ContractViolation("lift change is only defined between universal lifts")
    return ImmutableMatrix(v2 * v1.inv()) if motive.r else ImmutableMatrix(zeros(0, 0))


def de_rham(motive: ToricOneMotive) -> DeRhamSpace:
    labels = tuple(block_names("x", motive.r)) + tuple(block_names("Lt", motive.d))
    return DeRhamSpace(
        dim=motive.r + motive.d,
        labels=labels,
        weight_minus2=tuple(range(motive.r, motive.r + motive.d)),
    )


def de_rham_map(phi: MotiveMorphism) -> ImmutableMatrix:
    if not is_valid(phi):
        raise ContractViolation("de Rham map needs a compatible morphism")
    r1, d1 = phi.source.r, phi.source.d
    r2, d2 = phi.target.r, phi.target.d
    entries = [[0] * (r1 + d1) for _ in range(r2 + d2)]
    for i in range(r2):
        for j in range(r1):
            entries[i][j] = phi.f_x[i, j]
    for k in range(d2):
        for l in range(d1):
            entries[r2 + k][r1 + l] = phi.f_t[k, l]
    return ImmutableMatrix(r2 + d2, r1 + d1, [Rational(x) for row in entries for x in row])


def lie_dimension_check(motive: ToricOneMotive) -> bool:
    """dim Lie of the dual torus of [X -> 0] against dim Hom(X, G_a)."""
    lattice = lattice_part(motive)
    return cartier_dual(lattice).d == motive.r == de_rham(lattice).dim
