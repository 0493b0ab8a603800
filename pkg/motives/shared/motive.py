from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from motives.shared.errors import ContractViolation
from motives.shared.ratmult import QStarElem, primes_of, product
from motives.shared.zlinalg import IntMatrix


TorusPoint = tuple[QStarElem, ...]


@dataclass(frozen=True)
class ToricOneMotive:
    """[u: Z^r -> G_m^d]; ``u[k][i]`` is coordinate k of u(e_i)."""

    r: int
    d: int
    u: tuple[tuple[QStarElem, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.r < 0 or self.d < 0:
            raise ContractViolation("ranks must be non-negative")
        if len(self.u) != self.d or any(len(row) != self.r for row in self.u):
            raise ContractViolation(f"u must be a {self.d}x{self.r} matrix")

    @classmethod
    def from_columns(cls, r: int, d: int, columns: Sequence[Sequence[QStarElem]], name: str = "") -> ToricOneMotive:
        if len(columns) != r:
            raise ContractViolation(f"expected {r} columns, got {len(columns)}")
        return cls(r, d, tuple(tuple(columns[i][k] for i in range(r)) for k in range(d)), name)

    def column(self, i: int) -> TorusPoint:
        return tuple(self.u[k][i] for k in range(self.d))

    @property
    def primes(self) -> tuple[int, ...]:
        return primes_of(q for row in self.u for q in row)

    def label(self) -> str:
        return self.name or f"r{self.r}d{self.d}"


@dataclass(frozen=True)
class WeightData:
    gr0_rank: int
    gr_minus1_rank: int
    gr_minus2_rank: int


def torus_map(f_t: IntMatrix, point: Sequence[QStarElem]) -> TorusPoint:
    """Monomial map of tori: coordinate k is ∏_j point_j^{f_t[k, j]}."""
    if len(point) != f_t.cols:
        raise ContractViolation("torus point does not fit the monomial map")
    return tuple(product(point[j] ** f_t[k, j] for j in range(f_t.cols)) for k in range(f_t.rows))


def apply_u(motive: ToricOneMotive, n: Sequence[int]) -> TorusPoint:
    if len(n) != motive.r:
        raise ContractViolation(f"lattice vector must have length {motive.r}")
    return tuple(product(motive.u[k][i] ** n[i] for i in range(motive.r)) for k in range(motive.d))


def pair(point: Sequence[QStarElem], character: Sequence[int]) -> QStarElem:
    """⟨t, m⟩ = ∏ t_k^{m_k}."""
    if len(point) != len(character):
        raise ContractViolation("character and torus point have different ranks")
    return product(t ** m for t, m in zip(point, character))


def cartier_dual(motive: ToricOneMotive) -> ToricOneMotive:
    dual_u = tuple(tuple(motive.u[k][i] for k in range(motive.d)) for i in range(motive.r))
    dual = ToricOneMotive(motive.d, motive.r, dual_u, f"{motive.name}'" if motive.name else "")
    for i in range(motive.r):
        n = tuple(1 if a == i else 0 for a in range(motive.r))
        for k in range(motive.d):
            m = tuple(1 if b == k else 0 for b in range(motive.d))
            if pair(apply_u(motive, n), m) != pair(apply_u(dual, m), n):
                raise ContractViolation(f"Cartier pairing identity fails at generators ({i}, {k})")
    return dual


@dataclass(frozen=True)
class MotiveMorphism:
    source: ToricOneMotive
    target: ToricOneMotive
    f_x: IntMatrix
    f_t: IntMatrix

    def __post_init__(self) -> None:
        if (self.f_x.rows, self.f_x.cols) != (self.target.r, self.source.r):
            raise ContractViolation(f"f_x must be {self.target.r}x{self.source.r}")
        if (self.f_t.rows, self.f_t.cols) != (self.target.d, self.source.d):
            raise ContractViolation(f"f_t must be {self.target.d}x{self.source.d}")


def compatibility_violations(phi: MotiveMorphism) -> list[int]:
    """Generators e_i of the source lattice where u2(f_x e_i) != f_t(u1(e_i))."""
    return [
        i
        for i in range(phi.source.r)
        if apply_u(phi.target, phi.f_x.column(i)) != torus_map(phi.f_t, phi.source.column(i))
    ]


def is_valid(phi: MotiveMorphism) -> bool:
    return not compatibility_violations(phi)


def identity_morphism(motive: ToricOneMotive) -> MotiveMorphism:
    return MotiveMorphism(motive, motive, IntMatrix.identity(motive.r), IntMatrix.identity(motive.d))


def compose(phi: MotiveMorphism, psi: MotiveMorphism) -> MotiveMorphism:
    """ψ∘φ, applying ``phi`` first."""
    if phi.target != psi.source:
        raise ContractViolation("cannot compose: target of the first map is not the source of the second")
    return MotiveMorphism(phi.source, psi.target, psi.f_x @ phi.f_x, psi.f_t @ phi.f_t)


def dual_morphism(phi: MotiveMorphism) -> MotiveMorphism:
    if not is_valid(phi):
        raise ContractViolation("cannot dualize an incompatible morphism")
    dual = MotiveMorphism(cartier_dual(phi.target), cartier_dual(phi.source), phi.f_t.transpose(), phi.f_x.transpose())
    if not is_valid(dual):
        raise ContractViolation("dual morphism fails the compatibility square")
    return dual


def weight_data(motive: ToricOneMotive) -> WeightData:
    return WeightData(gr0_rank=motive.r, gr_minus1_rank=0, gr_minus2_rank=motive.d)


def lattice_part(motive: ToricOneMotive) -> ToricOneMotive:
    """[X -> 0]."""
    return ToricOneMotive(motive.r, 0, ())


def torus_part(motive: ToricOneMotive) -> ToricOneMotive:
    """[0 -> T]."""
    return ToricOneMotive(0, motive.d, tuple(() for _ in range(motive.d)))
