"""Hom and Ext groups of toric motives into G_m, computed inside a finite window.

Q* and Q^d/Z^d are not finitely generated, so every group here is the
slice cut out by an ``ApproximationWindow``: S-units for a finite prime
set S and differentials with denominators dividing N. Exactness verdicts
are exhaustive on the generators of that slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

from sympy import Rational, isprime

from motives.shared.biext import psi_point
from motives.shared.errors import ContractViolation, DomainError, TheoremCheckFailure
from motives.shared.logging_utils import log_event
from motives.shared.motive import ToricOneMotive, cartier_dual, lattice_part, torus_part
from motives.shared.ratmult import (
    QStarElem,
    SUnitLattice,
    product,
    vector_membership,
    vector_quotient_presentation,
)
from motives.shared.symforms import CoordSystem, dlog_character
from motives.shared.zlinalg import (
    GroupPresentation,
    IntMatrix,
    PresentationMap,
    cokernel_presentation,
    kernel_basis,
    lattice_basis,
    lattice_intersection,
    preimage_lattice,
    same_lattice,
    solve_integer,
)


@dataclass(frozen=True)
class ApproximationWindow:
    primes: tuple[int, ...]
    denominator_bound: int = 1

    def __post_init__(self) -> None:
        if self.denominator_bound < 1:
            raise DomainError("denominator bound must be at least 1")
        if list(self.primes) != sorted(set(self.primes)):
            raise DomainError("window primes must be sorted and unique")
        for p in self.primes:
            if not isprime(p):
                raise DomainError(f"{p} is not prime")

    @property
    def lattice(self) -> SUnitLattice:
        return SUnitLattice(self.primes)

    def covers(self, motive: ToricOneMotive) -> bool:
        return set(motive.primes) <= set(self.primes)

    def require(self, motive: ToricOneMotive) -> None:
        missing = sorted(set(motive.primes) - set(self.primes))
        if missing:
            raise DomainError(f"window primes {list(self.primes)} miss {missing} occurring in u")

    def describe(self) -> dict[str, object]:
        return {"primes": list(self.primes), "denominator_bound": self.denominator_bound}


def window_for(motive: ToricOneMotive, extra_primes: Sequence[int] = (), denominator_bound: int = 1) -> ApproximationWindow:
    return ApproximationWindow(tuple(sorted(set(motive.primes) | set(extra_primes))), denominator_bound)


def dual_row(motive: ToricOneMotive, j: int) -> tuple[QStarElem, ...]:
    """u'(e_j) in (Q*)^r."""
    return tuple(motive.u[j])


def hom_to_gm(motive: ToricOneMotive) -> IntMatrix:
    """Basis of the characters m of T with ∏_j u(e_i)_j^{m_j} = 1 for every i."""
    lattice = SUnitLattice(motive.primes)
    size = motive.r * lattice.rank
    columns = [lattice.encode_vector(dual_row(motive, j)) for j in range(motive.d)]
    exponents = IntMatrix.from_columns(columns, rows=size)
    return preimage_lattice(exponents, lattice.sign_slack(motive.r))


def _dlog_matrix(characters: IntMatrix, d: int) -> IntMatrix:
    """Columns are the coefficient vectors of dlog χ_m for the given characters."""
    coords = CoordSystem.group(0, d)
    columns = []
    for m in characters.columns():
        form = dlog_character(m, coords)
        values = [form.coefficient(i).value_at_identity(coords) for i in coords.indices("toric")]
        columns.append(tuple(int(v) for v in values))
    return IntMatrix.from_columns(columns, rows=d)


def hom_nabla(motive: ToricOneMotive) -> IntMatrix:
    basis = hom_to_gm(motive)
    coefficients = kernel_basis(_dlog_matrix(basis, motive.d))
    images = [basis.apply(c) for c in coefficients.columns()]
    result = lattice_basis(IntMatrix.from_columns(images, rows=motive.d)) if images else IntMatrix.zeros(motive.d, 0)
    if result.cols:
        log_event("error", "hom_nabla_nonzero", motive=motive.label(), rank=result.cols)
        raise TheoremCheckFailure(f"dlog has a kernel of rank {result.cols} on characters")
    return result


@dataclass(frozen=True)
class ExtGroup:
    presentation: GroupPresentation
    window: ApproximationWindow
    free_outside: str

    def describe(self) -> str:
        return f"{self.presentation.describe()} (+ {self.free_outside})"


def ext_gm(motive: ToricOneMotive, window: ApproximationWindow) -> ExtGroup:
    window.require(motive)
    presentation = vector_quotient_presentation(
        motive.r, window.primes, [dual_row(motive, j) for j in range(motive.d)]
    )
    return ExtGroup(presentation, window, f"free on primes outside S, rank {motive.r} each")


def ext_class_is_trivial(motive: ToricOneMotive, e: Sequence[QStarElem]) -> tuple[int, ...] | None:
    if len(e) != motive.r:
        raise ContractViolation(f"extension class must have {motive.r} coordinates")
    return vector_membership(tuple(e), [dual_row(motive, j) for j in range(motive.d)])


@dataclass(frozen=True)
class NatExtClass:
    differential: tuple[Rational, ...]
    extension: tuple[QStarElem, ...]


def nat_ext_group(motive: ToricOneMotive, window: ApproximationWindow) -> GroupPresentation:
    """((1/N)Z^d + S-units^r) modulo the twists (m, u'(m)) and the sign slack."""
    window.require(motive)
    lattice = window.lattice
    d, n = motive.d, window.denominator_bound
    size = d + motive.r * lattice.rank
    columns = []
    for k in range(motive.r):
        columns.append(tuple(2 if i == d + k * lattice.rank else 0 for i in range(size)))
    for j in range(d):
        twist = lattice.encode_vector(dual_row(motive, j))
        columns.append(tuple(n if i == j else 0 for i in range(d)) + twist)
    labels = [f"w{j}/{n}" for j in range(d)]
    labels += [
        f"{name}[{k}]" for k in range(motive.r) for name in ("-1", *(str(p) for p in lattice.primes))
    ]
    return cokernel_presentation(IntMatrix.from_columns(columns, rows=size), labels)


def encode_nat_class(motive: ToricOneMotive, window: ApproximationWindow, cls: NatExtClass) -> tuple[int, ...]:
    if len(cls.differential) != motive.d or len(cls.extension) != motive.r:
        raise ContractViolation("class does not fit the motive")
    scaled = [Rational(w) * window.denominator_bound for w in cls.differential]
    if any(not v.is_integer for v in scaled):
        raise DomainError(f"differential denominators exceed the window bound {window.denominator_bound}")
    return tuple(int(v) for v in scaled) + window.lattice.encode_vector(cls.extension)


def nat_classes_equal(motive: ToricOneMotive, a: NatExtClass, b: NatExtClass) -> bool:
    """(ω, c) ~ (ω + m, c·u'(m)) for m in Z^d."""
    shift = [Rational(y) - Rational(x) for x, y in zip(a.differential, b.differential, strict=True)]
    if any(not s.is_integer for s in shift):
        return False
    m = [int(s) for s in shift]
    twist = tuple(
        product(dual_row(motive, j)[i] ** m[j] for j in range(motive.d)) for i in range(motive.r)
    )
    return tuple(x * t for x, t in zip(a.extension, twist, strict=True)) == tuple(b.extension)


JunctionKind = Literal["well_defined", "injective", "exact", "surjective"]


@dataclass(frozen=True)
class Junction:
    position: str
    kind: JunctionKind
    exact: bool
    witness: tuple[int, ...] | None = None
    detail: str = ""


@dataclass(frozen=True)
class ExactSequenceReport:
    name: str
    objects: tuple[tuple[str, str], ...]
    arrows: tuple[str, ...]
    junctions: tuple[Junction, ...]
    window: ApproximationWindow
    notes: tuple[str, ...] = field(default=())

    @property
    def all_exact(self) -> bool:
        return all(j.exact for j in self.junctions)


def _well_defined(label: str, f: PresentationMap) -> Junction:
    violations = f.relation_violations()
    if not violations:
        return Junction(label, "well_defined", True)
    return Junction(label, "well_defined", False, violations[0], "a relation maps to a nonzero element")


def _injective(label: str, f: PresentationMap) -> Junction:
    witness = f.injectivity_witness()
    if witness is None:
        return Junction(label, "injective", True)
    if not f.target.is_zero(f.matrix.apply(witness)) or f.source.is_zero(witness):
        raise ContractViolation(f"injectivity witness at {label} failed its re-check")
    return Junction(label, "injective", False, witness, "nonzero element in the kernel")


def _surjective(label: str, f: PresentationMap) -> Junction:
    witness = f.surjectivity_witness()
    if witness is None:
        return Junction(label, "surjective", True)
    if f.contains_in_image(witness):
        raise ContractViolation(f"surjectivity witness at {label} failed its re-check")
    return Junction(label, "surjective", False, witness, "generator outside the image")


def _exact_at(label: str, f: PresentationMap, g: PresentationMap) -> Junction:
    composite = f.then(g)
    for i in range(f.source.n_gens):
        image = composite.matrix.column(i)
        if not g.target.is_zero(image):
            return Junction(label, "exact", False, f.matrix.column(i), "image not contained in the kernel")
    for x in g.kernel_generators():
        if not f.contains_in_image(x):
            if not g.target.is_zero(g.matrix.apply(x)):
                raise ContractViolation(f"exactness witness at {label} failed its re-check")
            return Junction(label, "exact", False, x, "kernel element outside the image")
    return Junction(label, "exact", True)


def check_sequence(
    name: str,
    objects: Sequence[tuple[str, GroupPresentation]],
    arrows: Sequence[tuple[str, PresentationMap]],
    window: ApproximationWindow,
    *,
    leading_zero: bool = True,
    trailing_zero: bool = True,
    notes: Sequence[str] = (),
) -> ExactSequenceReport:
    if len(arrows) != len(objects) - 1:
        raise ContractViolation("a sequence needs one arrow between consecutive objects")
    junctions = [_well_defined(label, f) for label, f in arrows]
    if leading_zero:
        junctions.append(_injective(objects[0][0], arrows[0][1]))
    for i in range(1, len(objects) - 1):
        junctions.append(_exact_at(objects[i][0], arrows[i - 1][1], arrows[i][1]))
    if trailing_zero:
        junctions.append(_surjective(objects[-1][0], arrows[-1][1]))
    report = ExactSequenceReport(
        name=name,
        objects=tuple((label, group.describe()) for label, group in objects),
        arrows=tuple(label for label, _ in arrows),
        junctions=tuple(junctions),
        window=window,
        notes=tuple(notes),
    )
    for junction in report.junctions:
        if not junction.exact:
            log_event(
                "warning",
                "exactness_failure",
                window=window.describe(),
                sequence=name,
                position=junction.position,
                kind=junction.kind,
                witness=junction.witness,
            )
    return report


def _block_matrix(rows: int, cols: int, blocks: Sequence[tuple[int, int, IntMatrix]]) -> IntMatrix:
    entries = [[0] * cols for _ in range(rows)]
    for top, left, block in blocks:
        for i in range(block.rows):
            for j in range(block.cols):
                entries[top + i][left + j] = block[i, j]
    return IntMatrix.from_rows(entries, cols=cols)


def _free(rank: int) -> GroupPresentation:
    return cokernel_presentation(IntMatrix.zeros(rank, 0))


def verify_prop_extnatex(motive: ToricOneMotive, window: ApproximationWindow) -> ExactSequenceReport:
    """Ext♮([X->0]) -> Ext♮(M) -> Ext♮([0->T]) -> 0."""
    window.require(motive)
    lattice = lattice_part(motive)
    torus = torus_part(motive)
    source = nat_ext_group(lattice, window)
    middle = nat_ext_group(motive, window)
    target = nat_ext_group(torus, window)
    d, units = motive.d, motive.r * window.lattice.rank
    alpha = _block_matrix(d + units, units, [(d, 0, IntMatrix.identity(units))])
    beta = _block_matrix(d, d + units, [(0, 0, IntMatrix.identity(d))])
    return check_sequence(
        "ext_nat_restriction",
        [("Ext_nat(X)", source), ("Ext_nat(M)", middle), ("Ext_nat(T)", target)],
        [
            ("alpha", PresentationMap(source, middle, alpha)),
            ("beta", PresentationMap(middle, target, beta)),
        ],
        window,
        notes=("delta_bar: zero map (no abelian part)",),
    )


def verify_cor_intersection(motive: ToricOneMotive) -> bool:
    dual = cartier_dual(motive)
    dual_torus = torus_part(dual)
    intersection = lattice_intersection(hom_nabla(dual_torus), hom_to_gm(dual))
    return same_lattice(intersection, hom_nabla(dual))


def _point_generators(motive: ToricOneMotive, window: ApproximationWindow) -> list[tuple[tuple[Rational, ...], tuple[QStarElem, ...]]]:
    """Generator points of the window of G♮(Q): e_k / N in the vector part, then -1 and S per torus copy."""
    r, d = motive.r, motive.d
    one = QStarElem.one()
    units = [QStarElem(-1)] + [QStarElem(1, ((p, 1),)) for p in window.primes]
    points = []
    for k in range(r):
        a = tuple(Rational(1, window.denominator_bound) if i == k else Rational(0) for i in range(r))
        points.append((a, (one,) * d))
    for j in range(d):
        for unit in units:
            t = tuple(unit if i == j else one for i in range(d))
            points.append(((Rational(0),) * r, t))
    return points


def verify_corollary_sequence(motive: ToricOneMotive, window: ApproximationWindow) -> ExactSequenceReport:
    """0 -> X -> G♮ -> Ext♮(M', G_m) -> 0 with the second arrow built from the points functor."""
    window.require(motive)
    lattice = window.lattice
    r, d, n = motive.r, motive.d, window.denominator_bound
    size = r + d * lattice.rank
    points_group = cokernel_presentation(
        IntMatrix.from_columns(
            [tuple(2 if i == r + j * lattice.rank else 0 for i in range(size)) for j in range(d)],
            rows=size,
        )
    )
    dual = cartier_dual(motive)
    target = nat_ext_group(dual, window)

    v_columns = [
        tuple(n if i == k else 0 for i in range(r)) + lattice.encode_vector(motive.column(k)) for k in range(r)
    ]
    v = IntMatrix.from_columns(v_columns, rows=size)

    phi_columns = []
    for a, t in _point_generators(motive, window):
        _, fiber = psi_point(motive, a, t)
        cls = NatExtClass(fiber.normal_differential, fiber.lift_class)
        phi_columns.append(encode_nat_class(dual, window, cls))
    phi = IntMatrix.from_columns(phi_columns, rows=target.n_gens)

    return check_sequence(
        "points_to_dual_ext_nat",
        [("X", _free(r)), ("G_nat", points_group), ("Ext_nat(M')", target)],
        [("v", PresentationMap(_free(r), points_group, v)), ("phi", PresentationMap(points_group, target, phi))],
        window,
    )


def verify_ext_sequence(motive: ToricOneMotive, window: ApproximationWindow) -> ExactSequenceReport:
    """0 -> H^nabla -> H -> omega_G -> Ext♮(M) -> Ext(M) -> 0."""
    window.require(motive)
    d, n = motive.d, window.denominator_bound
    units = motive.r * window.lattice.rank
    h_basis = hom_to_gm(motive)
    nabla_basis = hom_nabla(motive)
    k = h_basis.cols

    nabla_group = _free(nabla_basis.cols)
    h_group = _free(k)
    omega_group = _free(d)
    nat_group = nat_ext_group(motive, window)
    ext_group = ext_gm(motive, window).presentation

    inclusion_columns = [preimage_of_basis(h_basis, column) for column in nabla_basis.columns()]
    inclusion = IntMatrix.from_columns(inclusion_columns, rows=k)
    dlog = _dlog_matrix(h_basis, d)
    to_omega = IntMatrix.from_rows([[n * dlog[i, j] for j in range(k)] for i in range(d)], cols=k)
    j_map = _block_matrix(d + units, d, [(0, 0, IntMatrix.identity(d))])
    forget = _block_matrix(units, d + units, [(0, d, IntMatrix.identity(units))])

    return check_sequence(
        "hom_ext_long_sequence",
        [
            ("H_nabla(M)", nabla_group),
            ("H(M)", h_group),
            ("omega_G", omega_group),
            ("Ext_nat(M)", nat_group),
            ("Ext(M)", ext_group),
        ],
        [
            ("inclusion", PresentationMap(nabla_group, h_group, inclusion)),
            ("dlog", PresentationMap(h_group, omega_group, to_omega)),
            ("j", PresentationMap(omega_group, nat_group, j_map)),
            ("forget", PresentationMap(nat_group, ext_group, forget)),
        ],
        window,
    )


def preimage_of_basis(basis: IntMatrix, vector: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of ``vector`` in the lattice basis ``basis``."""
    coords = solve_integer(basis, vector)
    if coords is None:
        raise ContractViolation("vector is not in the lattice")
    return coords


def ext_maps_onto(motive: ToricOneMotive, window: ApproximationWindow) -> bool:
    """Ext♮(M) -> Ext(M) is onto in the window."""
    nat_group = nat_ext_group(motive, window)
    ext_group = ext_gm(motive, window).presentation
    units = motive.r * window.lattice.rank
    forget = _block_matrix(units, motive.d + units, [(0, motive.d, IntMatrix.identity(units))])
    return PresentationMap(nat_group, ext_group, forget).is_surjective()


