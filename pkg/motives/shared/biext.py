"""Biextensions of toric motive pairs, their canonical connection, and Deligne's pairing.

A biextension of (M1, M2) by G_m is carried on the trivial torsor over
G1 x G2 and is determined by its two lattice trivializations:

    s1(n, t) = prod_k t_k ** (beta1 n)_k    for n in X1, t in T2
    s2(t, m) = prod_j t_j ** (beta2 m)_j    for t in T1, m in X2

The connection form lives on the product of the universal extension
groups with coordinates x, t (left) and y, z (right).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from sympy import ImmutableMatrix, Rational

from motives.shared.errors import ContractViolation, TheoremCheckFailure
from motives.shared.logging_utils import log_event
from motives.shared.motive import (
    MotiveMorphism,
    ToricOneMotive,
    TorusPoint,
    apply_u,
    cartier_dual,
    dual_morphism,
    identity_morphism,
    is_valid,
)
from motives.shared.ratmult import QStarElem, product
from motives.shared.symforms import (
    AffineMonomialMap,
    CoordSystem,
    Form1,
    Form2,
    FormAnsatz,
    Image,
    LaurentPoly,
    LinearFormConstraint,
    NoSolution,
    NonUnique,
    SolveResult,
    UniqueSolution,
    additive_image,
    evaluation_matrix,
    exterior_d,
    pullback,
    solve_linear_form_system,
    sum_map,
    toric_image,
)
from motives.shared.universal import de_rham, de_rham_map
from motives.shared.zlinalg import IntMatrix


@dataclass(frozen=True)
class ToricBiextension:
    m1: ToricOneMotive
    m2: ToricOneMotive
    beta1: IntMatrix
    beta2: IntMatrix

    def __post_init__(self) -> None:
        if (self.beta1.rows, self.beta1.cols) != (self.m2.d, self.m1.r):
            raise ContractViolation(f"beta1 must be {self.m2.d}x{self.m1.r}")
        if (self.beta2.rows, self.beta2.cols) != (self.m1.d, self.m2.r):
            raise ContractViolation(f"beta2 must be {self.m1.d}x{self.m2.r}")

    def s1(self, n: Sequence[int], t: Sequence[QStarElem]) -> QStarElem:
        exponents = self.beta1.apply(n)
        return product(tk ** e for tk, e in zip(t, exponents, strict=True))

    def s2(self, t: Sequence[QStarElem], m: Sequence[int]) -> QStarElem:
        exponents = self.beta2.apply(m)
        return product(tj ** e for tj, e in zip(t, exponents, strict=True))


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(n))


def poincare(motive: ToricOneMotive) -> ToricBiextension:
    return ToricBiextension(
        motive,
        cartier_dual(motive),
        IntMatrix.identity(motive.r),
        IntMatrix.identity(motive.d),
    )


def validate(biext: ToricBiextension) -> list[str]:
    violations = []
    for i in range(biext.m1.r):
        n = _unit(biext.m1.r, i)
        for l in range(biext.m2.r):
            m = _unit(biext.m2.r, l)
            left = biext.s1(n, apply_u(biext.m2, m))
            right = biext.s2(apply_u(biext.m1, n), m)
            if left != right:
                violations.append(f"s1(e{i}, u2(e{l})) = {left} but s2(u1(e{i}), e{l}) = {right}")
    return violations


def biextension_sum(first: ToricBiextension, second: ToricBiextension) -> ToricBiextension:
    if (first.m1, first.m2) != (second.m1, second.m2):
        raise ContractViolation("biextensions of different motive pairs cannot be added")
    return ToricBiextension(first.m1, first.m2, first.beta1 + second.beta1, first.beta2 + second.beta2)


def pullback_biextension(biext: ToricBiextension, phi: MotiveMorphism, psi: MotiveMorphism) -> ToricBiextension:
    """(phi x psi)^* of ``biext``; phi lands in the left motive, psi in the right one."""
    if phi.target != biext.m1 or psi.target != biext.m2:
        raise ContractViolation("morphisms must land in the biextension's motives")
    for morphism in (phi, psi):
        if not is_valid(morphism):
            raise ContractViolation("cannot pull back along an incompatible morphism")
    return ToricBiextension(
        phi.source,
        psi.source,
        psi.f_t.transpose() @ biext.beta1 @ phi.f_x,
        phi.f_t.transpose() @ biext.beta2 @ psi.f_x,
    )


def verify_biextension_adjointness(phi: MotiveMorphism) -> bool:
    """(phi x id)^* P_{M2} equals (id x phi')^* P_{M1} on (M1, M2')."""
    dual = dual_morphism(phi)
    along_phi = pullback_biextension(poincare(phi.target), phi, identity_morphism(cartier_dual(phi.target)))
    along_dual = pullback_biextension(poincare(phi.source), identity_morphism(phi.source), dual)
    return along_phi == along_dual


def left_group(motive: ToricOneMotive) -> CoordSystem:
    return CoordSystem.group(motive.r, motive.d, additive_prefix="x", toric_prefix="t", factor="left")


def right_group(motive: ToricOneMotive) -> CoordSystem:
    return CoordSystem.group(motive.r, motive.d, additive_prefix="y", toric_prefix="z", factor="right")


def product_coords(biext: ToricBiextension) -> CoordSystem:
    return CoordSystem.concat(left_group(biext.m1), right_group(biext.m2))


def _section(
    source: CoordSystem,
    target: CoordSystem,
    passthrough: Sequence[int],
    offset: int,
    constants: Sequence[Image],
    constants_first: bool,
) -> AffineMonomialMap:
    """Embed ``source`` into ``target`` with the other factor frozen at ``constants``."""
    moving: list[Image] = [
        additive_image({i: 1}) if target.vars[offset + i].kind == "additive" else toric_image({i: 1})
        for i in passthrough
    ]
    images = [*constants, *moving] if constants_first else [*moving, *constants]
    return AffineMonomialMap(source, target, tuple(images))


def _frozen_point(additive: Sequence[Rational | int], toric: Sequence[QStarElem]) -> list[Image]:
    return [additive_image(constant=a) for a in additive] + [toric_image(constant=t) for t in toric]


def left_slice(biext: ToricBiextension, a: Sequence[Rational | int], t: Sequence[QStarElem]) -> AffineMonomialMap:
    """(y, z) -> (x=a, t, y, z)."""
    target = product_coords(biext)
    source = right_group(biext.m2)
    n1 = biext.m1.r + biext.m1.d
    return _section(source, target, range(source.size), n1, _frozen_point(a, t), constants_first=True)


def right_slice(biext: ToricBiextension, b: Sequence[Rational | int], z: Sequence[QStarElem]) -> AffineMonomialMap:
    """(x, t) -> (x, t, y=b, z)."""
    target = product_coords(biext)
    source = left_group(biext.m1)
    return _section(source, target, range(source.size), 0, _frozen_point(b, z), constants_first=False)


def nat_constraints(biext: ToricBiextension) -> list[LinearFormConstraint]:
    coords = product_coords(biext)
    g1 = left_group(biext.m1)
    g2 = right_group(biext.m2)
    n1, n2 = g1.size, g2.size

    left_triple = CoordSystem.concat(g1.renamed("_1"), g1.renamed("_2"), g2)
    mu_left = sum_map(left_triple, coords, [[k, n1 + k] for k in range(n1)] + [[2 * n1 + m] for m in range(n2)])
    p13 = sum_map(left_triple, coords, [[k] for k in range(n1)] + [[2 * n1 + m] for m in range(n2)])
    p23 = sum_map(left_triple, coords, [[n1 + k] for k in range(n1)] + [[2 * n1 + m] for m in range(n2)])

    right_triple = CoordSystem.concat(g1, g2.renamed("_1"), g2.renamed("_2"))
    mu_right = sum_map(right_triple, coords, [[k] for k in range(n1)] + [[n1 + m, n1 + n2 + m] for m in range(n2)])
    p12 = sum_map(right_triple, coords, [[k] for k in range(n1)] + [[n1 + m] for m in range(n2)])
    p13r = sum_map(right_triple, coords, [[k] for k in range(n1)] + [[n1 + n2 + m] for m in range(n2)])

    constraints = [
        LinearFormConstraint(
            lambda w: pullback(mu_left, w) - pullback(p13, w) - pullback(p23, w),
            Form1.zero(left_triple),
            "left additivity",
        ),
        LinearFormConstraint(
            lambda w: pullback(mu_right, w) - pullback(p12, w) - pullback(p13r, w),
            Form1.zero(right_triple),
            "right additivity",
        ),
    ]

    z_indices = g2.indices("toric")
    for i in range(biext.m1.r):
        e = _unit(biext.m1.r, i)
        section = left_slice(biext, e, biext.m1.column(i))
        target = Form1.from_map(
            g2, {z_indices[k]: LaurentPoly.constant(n2, c) for k, c in enumerate(biext.beta1.apply(e))}
        )
        constraints.append(LinearFormConstraint(lambda w, s=section: pullback(s, w), target, f"trivialization s1 e{i}"))

    t_indices = g1.indices("toric")
    for l in range(biext.m2.r):
        e = _unit(biext.m2.r, l)
        section = right_slice(biext, e, biext.m2.column(l))
        target = Form1.from_map(
            g1, {t_indices[j]: LaurentPoly.constant(n1, c) for j, c in enumerate(biext.beta2.apply(e))}
        )
        constraints.append(LinearFormConstraint(lambda w, s=section: pullback(s, w), target, f"trivialization s2 e{l}"))
    return constraints


@lru_cache(maxsize=256)
def solve_nat_structure(biext: ToricBiextension, degree: int = 1) -> SolveResult:
    if violations := validate(biext):
        raise ContractViolation("; ".join(violations))
    return solve_linear_form_system(FormAnsatz(product_coords(biext), degree=degree), nat_constraints(biext))


def solution_dimension(result: SolveResult) -> int | None:
    """0 for a unique solution, the family dimension otherwise, None when inconsistent."""
    if isinstance(result, UniqueSolution):
        return 0
    if isinstance(result, NonUnique):
        return result.dimension
    return None


@dataclass(frozen=True)
class NatStructure:
    biextension: ToricBiextension
    connection_form: Form1

    @property
    def curvature(self) -> Form2:
        return exterior_d(self.connection_form)


def canonical_nat_structure(biext: ToricBiextension, degree: int = 1) -> NatStructure:
    result = solve_nat_structure(biext, degree)
    if isinstance(result, NoSolution):
        log_event("error", "nat_structure_missing", motive=biext.m1.label(), degree=degree)
        raise TheoremCheckFailure("no connection satisfies the biextension constraints")
    if isinstance(result, NonUnique):
        log_event("error", "nat_structure_not_unique", motive=biext.m1.label(), dimension=result.dimension)
        raise TheoremCheckFailure(
            f"connection is not unique: {result.dimension}-dimensional family",
            solution_dimension=result.dimension,
        )
    omega = result.form
    for constraint in nat_constraints(biext):
        if constraint.operator(omega) != constraint.target:
            raise TheoremCheckFailure(f"solved connection fails the {constraint.label} constraint", solution_dimension=0)
    return NatStructure(biext, omega)


def expected_connection_form(biext: ToricBiextension) -> Form1:
    """Σ_k (beta1 x)_k dlog z_k + Σ_j (beta2 y)_j dlog t_j."""
    coords = product_coords(biext)
    n = coords.size
    x = coords.indices("additive", "left")
    t = coords.indices("toric", "left")
    y = coords.indices("additive", "right")
    z = coords.indices("toric", "right")
    coeffs: dict[int, LaurentPoly] = {}
    for k, zk in enumerate(z):
        poly = LaurentPoly.zero(n)
        for i, xi in enumerate(x):
            poly = poly + LaurentPoly.variable(n, xi).scale(biext.beta1[k, i])
        coeffs[zk] = poly
    for j, tj in enumerate(t):
        poly = LaurentPoly.zero(n)
        for l, yl in enumerate(y):
            poly = poly + LaurentPoly.variable(n, yl).scale(biext.beta2[j, l])
        coeffs[tj] = poly
    return Form1.from_map(coords, coeffs)


@dataclass(frozen=True)
class PairingMatrix:
    matrix: ImmutableMatrix
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    @property
    def is_square(self) -> bool:
        return self.matrix.rows == self.matrix.cols

    @property
    def determinant(self) -> Rational | None:
        return self.matrix.det() if self.is_square else None

    @property
    def is_unimodular(self) -> bool:
        return self.is_square and abs(self.matrix.det()) == 1

    def block(self, rows: range, cols: range) -> ImmutableMatrix:
        return ImmutableMatrix(len(rows), len(cols), [self.matrix[i, j] for i in rows for j in cols])


def deligne_pairing(biext: ToricBiextension, degree: int = 1) -> PairingMatrix:
    structure = canonical_nat_structure(biext, degree)
    curvature = structure.curvature
    n1 = biext.m1.r + biext.m1.d
    n2 = biext.m2.r + biext.m2.d
    left, right = range(n1), range(n1, n1 + n2)
    for name, block in (("left", left), ("right", right)):
        values = evaluation_matrix(curvature, block, block)
        if any(v != 0 for row in values for v in row):
            raise TheoremCheckFailure(f"curvature does not vanish on the {name} factor")
    values = evaluation_matrix(curvature, left, right)
    return PairingMatrix(
        ImmutableMatrix(n1, n2, [v for row in values for v in row]),
        de_rham(biext.m1).labels,
        de_rham(biext.m2).labels,
    )


def is_perfect(pairing: PairingMatrix) -> bool:
    return pairing.is_square and pairing.matrix.det() != 0


def weight_block_check(motive: ToricOneMotive) -> bool:
    pairing = deligne_pairing(poincare(motive))
    r, d = motive.r, motive.d
    vector_rows, lie_rows = range(r), range(r, r + d)
    vector_cols, lie_cols = range(d), range(d, d + r)
    diagonal_zero = pairing.block(vector_rows, vector_cols).is_zero_matrix and pairing.block(
        lie_rows, lie_cols
    ).is_zero_matrix
    cross_unimodular = all(
        abs(block.det()) == 1
        for block in (pairing.block(vector_rows, lie_cols), pairing.block(lie_rows, vector_cols))
    )
    return bool(diagonal_zero) and cross_unimodular


def pairing_adjointness(phi: MotiveMorphism) -> bool:
    """Φ_{M2}(Dφ v, w) = Φ_{M1}(v, Dφ' w) on all basis pairs."""
    dual = dual_morphism(phi)
    phi_target = deligne_pairing(poincare(phi.target)).matrix
    phi_source = deligne_pairing(poincare(phi.source)).matrix
    return de_rham_map(phi).T * phi_target == phi_source * de_rham_map(dual)


def tautological_pairing_check(d: int) -> ImmutableMatrix:
    """Pairing of ω_T with Lie T read off dα for α = Σ x_j dlog t_j."""
    if d < 0:
        raise ContractViolation("torus rank must be non-negative")
    coords = CoordSystem.group(d, d)
    n = coords.size
    x = coords.indices("additive")
    t = coords.indices("toric")
    alpha = Form1.from_map(coords, {tj: LaurentPoly.variable(n, xj) for xj, tj in zip(x, t)})
    values = evaluation_matrix(exterior_d(alpha), x, t)
    return ImmutableMatrix(d, d, [v for row in values for v in row])


def vector_part_restriction(motive: ToricOneMotive) -> bool:
    """The canonical connection of P_M at t = 1 is the tautological form Σ x_i dlog z_i."""
    biext = poincare(motive)
    omega = canonical_nat_structure(biext).connection_form
    g2 = right_group(biext.m2)
    source = CoordSystem.concat(
        CoordSystem.group(motive.r, 0, additive_prefix="x", factor="left"), g2
    )
    images: list[Image] = [additive_image({i: 1}) for i in range(motive.r)]
    images += [toric_image() for _ in range(motive.d)]
    images += [
        additive_image({motive.r + m: 1}) if v.kind == "additive" else toric_image({motive.r + m: 1})
        for m, v in enumerate(g2.vars)
    ]
    restricted = pullback(AffineMonomialMap(source, product_coords(biext), tuple(images)), omega)
    n = source.size
    z = source.indices("toric")
    alpha = Form1.from_map(source, {zi: LaurentPoly.variable(n, i) for i, zi in enumerate(z)})
    return restricted == alpha


@dataclass(frozen=True)
class NatExtensionOnFiber:
    basepoint: TorusPoint
    lift_class: TorusPoint
    normal_differential: tuple[Rational, ...]

    def render_differential(self, names: Sequence[str]) -> str:
        pieces = [f"{a}·dlog {name}" for a, name in zip(self.normal_differential, names) if a != 0]
        return " + ".join(pieces).replace("+ -", "- ") if pieces else "0"


def psi_point(
    motive: ToricOneMotive, a: Sequence[Rational | int], t: Sequence[QStarElem]
) -> tuple[TorusPoint, NatExtensionOnFiber]:
    if len(a) != motive.r or len(t) != motive.d:
        raise ContractViolation(f"point must have {motive.r} vector and {motive.d} torus coordinates")
    biext = poincare(motive)
    omega = canonical_nat_structure(biext).connection_form
    fiber_form = pullback(left_slice(biext, a, t), omega)
    g2 = fiber_form.coords
    differential = []
    for zk in g2.indices("toric"):
        coefficient = fiber_form.coefficient(zk)
        if any(any(e) for e, _ in coefficient.terms):
            raise TheoremCheckFailure("restricted connection is not invariant on the fiber")
        differential.append(coefficient.value_at_identity(g2))
    for yl in g2.indices("additive"):
        if not fiber_form.coefficient(yl).is_zero():
            raise TheoremCheckFailure("restricted connection has a vector component")
    g = tuple(t)
    lift = tuple(biext.s2(g, _unit(biext.m2.r, l)) for l in range(biext.m2.r))
    return g, NatExtensionOnFiber(g, lift, tuple(Rational(v) for v in differential))


def psi_inverse(
    motive: ToricOneMotive, g: Sequence[QStarElem], fiber: NatExtensionOnFiber
) -> tuple[tuple[Rational, ...], TorusPoint]:
    g = tuple(g)
    if fiber.basepoint != g:
        raise ContractViolation("fiber data does not sit over the given basepoint")
    biext = poincare(motive)
    expected = tuple(biext.s2(g, _unit(biext.m2.r, l)) for l in range(biext.m2.r))
    if fiber.lift_class != expected:
        raise ContractViolation("lift class is not the trivialization at the basepoint")
    if len(fiber.normal_differential) != motive.r:
        raise ContractViolation(f"normal differential must have {motive.r} coefficients")
    return tuple(fiber.normal_differential), g
