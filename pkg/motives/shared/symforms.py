"""Symbolic 1- and 2-forms on products of additive and toric groups over Q.

Toric covectors are stored as ``dlog t``. Coefficients are Laurent
polynomials with exact rational coefficients; additive exponents stay
non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Literal, Mapping, Sequence, Union

from sympy import Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from motives.shared.errors import ContractViolation
from motives.shared.ratmult import QStarElem


Kind = Literal["additive", "toric"]
FactorTag = Literal["left", "right", "none"]
Exponent = tuple[int, ...]


def block_names(prefix: str, count: int) -> list[str]:
    if count == 1:
        return [prefix]
    return [f"{prefix}{i}" for i in range(1, count + 1)]


@dataclass(frozen=True)
class Variable:
    name: str
    kind: Kind
    factor: FactorTag = "none"


@dataclass(frozen=True)
class CoordSystem:
    vars: tuple[Variable, ...]

    def __post_init__(self) -> None:
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ContractViolation(f"duplicate coordinate names in {names}")

    @classmethod
    def group(
        cls,
        additive: int,
        toric: int,
        *,
        additive_prefix: str = "x",
        toric_prefix: str = "t",
        factor: FactorTag = "none",
    ) -> CoordSystem:
        return cls(
            tuple(Variable(name, "additive", factor) for name in block_names(additive_prefix, additive))
            + tuple(Variable(name, "toric", factor) for name in block_names(toric_prefix, toric))
        )

    @classmethod
    def concat(cls, *systems: CoordSystem) -> CoordSystem:
        return cls(tuple(v for system in systems for v in system.vars))

    def renamed(self, suffix: str, factor: FactorTag | None = None) -> CoordSystem:
        return CoordSystem(
            tuple(Variable(v.name + suffix, v.kind, v.factor if factor is None else factor) for v in self.vars)
        )

    @property
    def size(self) -> int:
        return len(self.vars)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError as exc:
            raise ContractViolation(f"unknown coordinate {name!r}") from exc

    def indices(self, kind: Kind, factor: FactorTag | None = None) -> tuple[int, ...]:
        return tuple(
            i for i, v in enumerate(self.vars) if v.kind == kind and (factor is None or v.factor == factor)
        )

    def covector_name(self, i: int) -> str:
        v = self.vars[i]
        return f"d{v.name}" if v.kind == "additive" else f"dlog {v.name}"


def _rational(value: Rational | int | str) -> Rational:
    return value if isinstance(value, Rational) else Rational(value)


@dataclass(frozen=True)
class LaurentPoly:
    nvars: int
    terms: tuple[tuple[Exponent, Rational], ...] = ()

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping[Exponent, Rational | int]) -> LaurentPoly:
        cleaned = []
        for exponent, coef in terms.items():
            if len(exponent) != nvars:
                raise ContractViolation("exponent length does not match variable count")
            value = _rational(coef)
            if value != 0:
                cleaned.append((tuple(exponent), value))
        return cls(nvars, tuple(sorted(cleaned)))

    @classmethod
    def constant(cls, nvars: int, value: Rational | int) -> LaurentPoly:
        return cls.from_dict(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, nvars: int, exponent: Sequence[int], coef: Rational | int = 1) -> LaurentPoly:
        return cls.from_dict(nvars, {tuple(exponent): coef})

    @classmethod
    def variable(cls, nvars: int, i: int) -> LaurentPoly:
        return cls.monomial(nvars, tuple(1 if k == i else 0 for k in range(nvars)))

    @classmethod
    def zero(cls, nvars: int) -> LaurentPoly:
        return cls(nvars, ())

    def as_dict(self) -> dict[Exponent, Rational]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: LaurentPoly) -> None:
        if self.nvars != other.nvars:
            raise ContractViolation("polynomials live in different variable counts")

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        merged = self.as_dict()
        for exponent, coef in other.terms:
            merged[exponent] = merged.get(exponent, Rational(0)) + coef
        return LaurentPoly.from_dict(self.nvars, merged)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def scale(self, value: Rational | int) -> LaurentPoly:
        value = _rational(value)
        if value == 0:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(self.nvars, tuple((e, c * value) for e, c in self.terms))

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        self._check(other)
        out: dict[Exponent, Rational] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, Rational(0)) + c1 * c2
        return LaurentPoly.from_dict(self.nvars, out)

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self.terms) != 1:
                raise ContractViolation("only monomials can be inverted")
            exponent, coef = self.terms[0]
            base = LaurentPoly.monomial(self.nvars, tuple(-a for a in exponent), 1 / coef)
            n = -n
        else:
            base = self
        out = LaurentPoly.constant(self.nvars, 1)
        for _ in range(n):
            out = out * base
        return out

    def derivative(self, i: int) -> LaurentPoly:
        """∂/∂x_i."""
        out: dict[Exponent, Rational] = {}
        for exponent, coef in self.terms:
            if exponent[i]:
                lowered = exponent[:i] + (exponent[i] - 1,) + exponent[i + 1 :]
                out[lowered] = coef * exponent[i]
        return LaurentPoly.from_dict(self.nvars, out)

    def euler(self, i: int) -> LaurentPoly:
        """t_i ∂/∂t_i."""
        return LaurentPoly.from_dict(self.nvars, {e: c * e[i] for e, c in self.terms})

    def value_at_identity(self, coords: CoordSystem) -> Rational:
        additive = coords.indices("additive")
        return sum(
            (coef for exponent, coef in self.terms if all(exponent[i] == 0 for i in additive)),
            Rational(0),
        )

    def substitute(self, images: Sequence[LaurentPoly], nvars: int) -> LaurentPoly:
        if len(images) != self.nvars:
            raise ContractViolation("substitution needs one image per variable")
        out = LaurentPoly.zero(nvars)
        powers: dict[tuple[int, int], LaurentPoly] = {}
        for exponent, coef in self.terms:
            term = LaurentPoly.constant(nvars, coef)
            for i, a in enumerate(exponent):
                if a:
                    if (i, a) not in powers:
                        powers[(i, a)] = images[i] ** a
                    term = term * powers[(i, a)]
            out = out + term
        return out

    def render(self, coords: CoordSystem) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exponent, coef in self.terms:
            factors = []
            for i, a in enumerate(exponent):
                if a == 1:
                    factors.append(coords.vars[i].name)
                elif a:
                    factors.append(f"{coords.vars[i].name}^{a}")
            if not factors:
                pieces.append(str(coef))
            elif coef == 1:
                pieces.append("·".join(factors))
            elif coef == -1:
                pieces.append("-" + "·".join(factors))
            else:
                pieces.append(f"{coef}·" + "·".join(factors))
        text = " + ".join(pieces)
        return text.replace("+ -", "- ")


def _coefficient_prefix(poly: LaurentPoly, coords: CoordSystem) -> str:
    text = poly.render(coords)
    if text == "1":
        return ""
    if text == "-1":
        return "-"
    if len(poly.terms) > 1:
        return f"({text})·"
    return f"{text}·"


@dataclass(frozen=True)
class Form1:
    coords: CoordSystem
    coeffs: tuple[tuple[int, LaurentPoly], ...] = ()

    @classmethod
    def from_map(cls, coords: CoordSystem, coeffs: Mapping[int, LaurentPoly]) -> Form1:
        for i, poly in coeffs.items():
            if not 0 <= i < coords.size or poly.nvars != coords.size:
                raise ContractViolation("form coefficient does not fit the coordinate system")
        return cls(coords, tuple(sorted((i, p) for i, p in coeffs.items() if not p.is_zero())))

    @classmethod
    def zero(cls, coords: CoordSystem) -> Form1:
        return cls(coords, ())

    @classmethod
    def basis(cls, coords: CoordSystem, name: str, coef: LaurentPoly | None = None) -> Form1:
        poly = coef if coef is not None else LaurentPoly.constant(coords.size, 1)
        return cls.from_map(coords, {coords.index(name): poly})

    def as_dict(self) -> dict[int, LaurentPoly]:
        return dict(self.coeffs)

    def coefficient(self, i: int) -> LaurentPoly:
        return self.as_dict().get(i, LaurentPoly.zero(self.coords.size))

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: Form1) -> None:
        if self.coords != other.coords:
            raise ContractViolation("forms live on different coordinate systems")

    def __add__(self, other: Form1) -> Form1:
        self._check(other)
        merged = self.as_dict()
        for i, poly in other.coeffs:
            merged[i] = merged[i] + poly if i in merged else poly
        return Form1.from_map(self.coords, merged)

    def __neg__(self) -> Form1:
        return Form1(self.coords, tuple((i, -p) for i, p in self.coeffs))

    def __sub__(self, other: Form1) -> Form1:
        return self + (-other)

    def scale(self, value: Rational | int) -> Form1:
        return Form1.from_map(self.coords, {i: p.scale(value) for i, p in self.coeffs})

    def times(self, poly: LaurentPoly) -> Form1:
        return Form1.from_map(self.coords, {i: p * poly for i, p in self.coeffs})

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = [_coefficient_prefix(p, self.coords) + self.coords.covector_name(i) for i, p in self.coeffs]
        return " + ".join(pieces).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Form2:
    coords: CoordSystem
    coeffs: tuple[tuple[tuple[int, int], LaurentPoly], ...] = ()

    @classmethod
    def from_map(cls, coords: CoordSystem, coeffs: Mapping[tuple[int, int], LaurentPoly]) -> Form2:
        normalized: dict[tuple[int, int], LaurentPoly] = {}
        for (i, j), poly in coeffs.items():
            if i == j:
                continue
            key, signed = ((i, j), poly) if i < j else ((j, i), -poly)
            normalized[key] = normalized[key] + signed if key in normalized else signed
        return cls(coords, tuple(sorted((k, p) for k, p in normalized.items() if not p.is_zero())))

    @classmethod
    def zero(cls, coords: CoordSystem) -> Form2:
        return cls(coords, ())

    def as_dict(self) -> dict[tuple[int, int], LaurentPoly]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: Form2) -> Form2:
        if self.coords != other.coords:
            raise ContractViolation("forms live on different coordinate systems")
        merged = self.as_dict()
        for key, poly in other.coeffs:
            merged[key] = merged[key] + poly if key in merged else poly
        return Form2.from_map(self.coords, merged)

    def __neg__(self) -> Form2:
        return Form2(self.coords, tuple((k, -p) for k, p in self.coeffs))

    def __sub__(self, other: Form2) -> Form2:
        return self + (-other)

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = [
            _coefficient_prefix(p, self.coords)
            + f"{self.coords.covector_name(i)}∧{self.coords.covector_name(j)}"
            for (i, j), p in self.coeffs
        ]
        return " + ".join(pieces).replace("+ -", "- ")

    def __str__(self) -> str:
        return self.render()


AnyForm = Union[Form1, Form2]


def wedge(alpha: Form1, beta: Form1) -> Form2:
    alpha._check(beta)
    out: dict[tuple[int, int], LaurentPoly] = {}
    for i, f in alpha.coeffs:
        for j, g in beta.coeffs:
            if i == j:
                continue
            key, product = ((i, j), f * g) if i < j else ((j, i), -(f * g))
            out[key] = out[key] + product if key in out else product
    return Form2.from_map(alpha.coords, out)


def differential(f: LaurentPoly, coords: CoordSystem) -> Form1:
    """df = Σ ∂f/∂x dx + Σ t∂f/∂t dlog t."""
    if f.nvars != coords.size:
        raise ContractViolation("function does not live on the coordinate system")
    return Form1.from_map(
        coords,
        {i: f.derivative(i) if v.kind == "additive" else f.euler(i) for i, v in enumerate(coords.vars)},
    )


def exterior_d(omega: Form1) -> Form2:
    coords = omega.coords
    out: dict[tuple[int, int], LaurentPoly] = {}
    for c, f in omega.coeffs:
        for v, variable in enumerate(coords.vars):
            if v == c:
                continue
            partial = f.derivative(v) if variable.kind == "additive" else f.euler(v)
            if partial.is_zero():
                continue
            # D_v f · e_v ∧ e_c
            key, signed = ((v, c), partial) if v < c else ((c, v), -partial)
            out[key] = out[key] + signed if key in out else signed
    return Form2.from_map(coords, out)


@dataclass(frozen=True)
class AdditiveImage:
    linear: tuple[tuple[int, Rational], ...] = ()
    constant: Rational = Rational(0)


@dataclass(frozen=True)
class ToricImage:
    exponents: tuple[tuple[int, int], ...] = ()
    constant: QStarElem = field(default_factory=QStarElem.one)


def additive_image(linear: Mapping[int, Rational | int] | None = None, constant: Rational | int = 0) -> AdditiveImage:
    items = tuple(sorted((i, _rational(c)) for i, c in (linear or {}).items() if _rational(c) != 0))
    return AdditiveImage(items, _rational(constant))


def toric_image(exponents: Mapping[int, int] | None = None, constant: QStarElem | None = None) -> ToricImage:
    items = tuple(sorted((i, int(e)) for i, e in (exponents or {}).items() if e))
    return ToricImage(items, constant if constant is not None else QStarElem.one())


Image = Union[AdditiveImage, ToricImage]


@dataclass(frozen=True)
class AffineMonomialMap:
    """Affine on additive targets, monomial times a constant on toric targets."""

    source: CoordSystem
    target: CoordSystem
    images: tuple[Image, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.target.size:
            raise ContractViolation("one image per target coordinate is required")
        for variable, image in zip(self.target.vars, self.images):
            if variable.kind == "additive":
                if not isinstance(image, AdditiveImage):
                    raise ContractViolation(f"additive coordinate {variable.name} needs an affine image")
                sources = [i for i, _ in image.linear]
                expected = "additive"
            else:
                if not isinstance(image, ToricImage):
                    raise ContractViolation(f"toric coordinate {variable.name} needs a monomial image")
                sources = [i for i, _ in image.exponents]
                expected = "toric"
            for i in sources:
                if not 0 <= i < self.source.size or self.source.vars[i].kind != expected:
                    raise ContractViolation(f"image of {variable.name} uses an incompatible source coordinate")

    def image_polys(self) -> list[LaurentPoly]:
        n = self.source.size
        out = []
        for image in self.images:
            if isinstance(image, AdditiveImage):
                poly = LaurentPoly.constant(n, image.constant)
                for i, c in image.linear:
                    poly = poly + LaurentPoly.variable(n, i).scale(c)
            else:
                exponent = [0] * n
                for i, e in image.exponents:
                    exponent[i] = e
                poly = LaurentPoly.monomial(n, exponent, image.constant.value)
            out.append(poly)
        return out

    def covector_images(self) -> list[Form1]:
        n = self.source.size
        out = []
        for image in self.images:
            if isinstance(image, AdditiveImage):
                out.append(Form1.from_map(self.source, {i: LaurentPoly.constant(n, c) for i, c in image.linear}))
            else:
                out.append(Form1.from_map(self.source, {i: LaurentPoly.constant(n, e) for i, e in image.exponents}))
        return out


def pullback(phi: AffineMonomialMap, omega: AnyForm) -> AnyForm:
    if omega.coords != phi.target:
        raise ContractViolation("form does not live on the map's target")
    polys = phi.image_polys()
    covectors = phi.covector_images()
    n = phi.source.size
    if isinstance(omega, Form1):
        out = Form1.zero(phi.source)
        for c, f in omega.coeffs:
            out = out + covectors[c].times(f.substitute(polys, n))
        return out
    out2 = Form2.zero(phi.source)
    for (i, j), f in omega.coeffs:
        out2 = out2 + _scale_form2(wedge(covectors[i], covectors[j]), f.substitute(polys, n))
    return out2


def _scale_form2(form: Form2, poly: LaurentPoly) -> Form2:
    return Form2.from_map(form.coords, {k: p * poly for k, p in form.coeffs})


def compose_maps(phi: AffineMonomialMap, psi: AffineMonomialMap) -> AffineMonomialMap:
    """ψ∘φ: apply ``phi`` first."""
    if phi.target != psi.source:
        raise ContractViolation("maps are not composable")
    images: list[Image] = []
    for image in psi.images:
        if isinstance(image, AdditiveImage):
            linear: dict[int, Rational] = {}
            constant = image.constant
            for j, a in image.linear:
                inner = phi.images[j]
                assert isinstance(inner, AdditiveImage)
                constant += a * inner.constant
                for i, b in inner.linear:
                    linear[i] = linear.get(i, Rational(0)) + a * b
            images.append(additive_image(linear, constant))
        else:
            exps: dict[int, int] = {}
            const = image.constant
            for j, m in image.exponents:
                inner = phi.images[j]
                assert isinstance(inner, ToricImage)
                const = const * inner.constant ** m
                for i, e in inner.exponents:
                    exps[i] = exps.get(i, 0) + m * e
            images.append(toric_image(exps, const))
    return AffineMonomialMap(phi.source, psi.target, tuple(images))


def sum_map(source: CoordSystem, target: CoordSystem, picks: Sequence[Sequence[int]]) -> AffineMonomialMap:
    """Target coordinate k is the group sum of the source coordinates in ``picks[k]``."""
    images: list[Image] = []
    for variable, pick in zip(target.vars, picks, strict=True):
        if variable.kind == "additive":
            images.append(additive_image({i: 1 for i in pick}))
        else:
            images.append(toric_image({i: 1 for i in pick}))
    return AffineMonomialMap(source, target, tuple(images))


def projection_map(source: CoordSystem, target: CoordSystem, index_map: Sequence[int]) -> AffineMonomialMap:
    return sum_map(source, target, [[i] for i in index_map])


def group_law_map(
    source: CoordSystem, target: CoordSystem, left: Sequence[int], right: Sequence[int]
) -> AffineMonomialMap:
    return sum_map(source, target, [[i, j] for i, j in zip(left, right, strict=True)])


def dlog_character(m: Sequence[int], coords: CoordSystem) -> Form1:
    toric = coords.indices("toric")
    if len(m) != len(toric):
        raise ContractViolation(f"character has {len(m)} exponents, torus has rank {len(toric)}")
    return Form1.from_map(coords, {i: LaurentPoly.constant(coords.size, e) for i, e in zip(toric, m)})


def is_invariant(omega: Form1, group: CoordSystem) -> bool:
    if omega.coords != group:
        raise ContractViolation("form does not live on the group's coordinates")
    n = group.size
    square = CoordSystem.concat(group.renamed("_1"), group.renamed("_2"))
    mu = group_law_map(square, group, range(n), range(n, 2 * n))
    p1 = projection_map(square, group, range(n))
    p2 = projection_map(square, group, range(n, 2 * n))
    return (pullback(mu, omega) - pullback(p1, omega) - pullback(p2, omega)).is_zero()


def eval_form2_at_identity(form: Form2, v: Sequence[Rational | int], w: Sequence[Rational | int]) -> Rational:
    n = form.coords.size
    if len(v) != n or len(w) != n:
        raise ContractViolation("tangent vectors must have one entry per covector")
    total = Rational(0)
    for (a, b), poly in form.coeffs:
        total += poly.value_at_identity(form.coords) * (_rational(v[a]) * _rational(w[b]) - _rational(v[b]) * _rational(w[a]))
    return total


def evaluation_matrix(form: Form2, rows: Sequence[int], cols: Sequence[int]) -> list[list[Rational]]:
    """Identity-fibre values R(∂_i, ∂_j) for the given covector indices."""
    n = form.coords.size

    def unit(k: int) -> list[int]:
        return [1 if i == k else 0 for i in range(n)]

    return [[eval_form2_at_identity(form, unit(i), unit(j)) for j in cols] for i in rows]


@dataclass(frozen=True)
class FormAnsatz:
    """Basis of monomial·covector forms with coefficients of additive degree ≤ ``degree``."""

    coords: CoordSystem
    degree: int = 2

    def monomials(self) -> list[Exponent]:
        additive = self.coords.indices("additive")
        out = []
        for total in range(self.degree + 1):
            for combo in combinations_with_replacement(additive, total):
                exponent = [0] * self.coords.size
                for i in combo:
                    exponent[i] += 1
                out.append(tuple(exponent))
        return out

    def basis(self) -> list[tuple[Exponent, int]]:
        return [(m, c) for c in range(self.coords.size) for m in self.monomials()]

    def basis_forms(self) -> list[Form1]:
        n = self.coords.size
        return [Form1.from_map(self.coords, {c: LaurentPoly.monomial(n, m)}) for m, c in self.basis()]

    def form(self, values: Sequence[Rational]) -> Form1:
        forms = self.basis_forms()
        if len(values) != len(forms):
            raise ContractViolation("one value per ansatz parameter is required")
        out = Form1.zero(self.coords)
        for value, basis_form in zip(values, forms):
            if value != 0:
                out = out + basis_form.scale(value)
        return out


@dataclass(frozen=True)
class LinearFormConstraint:
    operator: Callable[[Form1], AnyForm]
    target: AnyForm
    label: str = ""


@dataclass(frozen=True)
class UniqueSolution:
    values: tuple[Rational, ...]
    form: Form1


@dataclass(frozen=True)
class NoSolution:
    reason: str = "inconsistent constraints"


@dataclass(frozen=True)
class NonUnique:
    dimension: int


SolveResult = Union[UniqueSolution, NoSolution, NonUnique]


def _flatten(form: AnyForm) -> dict[tuple, Rational]:
    return {(key, exponent): coef for key, poly in form.coeffs for exponent, coef in poly.terms}


def solve_linear_form_system(ansatz: FormAnsatz, constraints: Iterable[LinearFormConstraint]) -> SolveResult:
    basis_forms = ansatz.basis_forms()
    n = len(basis_forms)
    rows: dict[tuple, dict[int, Rational]] = {}
    rhs: dict[tuple, Rational] = {}
    for index, constraint in enumerate(constraints):
        for k, basis_form in enumerate(basis_forms):
            for key, coef in _flatten(constraint.operator(basis_form)).items():
                rows.setdefault((index, key), {})[k] = coef
        for key, coef in _flatten(constraint.target).items():
            rows.setdefault((index, key), {})
            rhs[(index, key)] = coef

    unique_rows: dict[tuple, None] = {}
    for key, row in rows.items():
        entries = tuple(sorted((k, c) for k, c in row.items() if c != 0))
        value = rhs.get(key, Rational(0))
        if entries or value != 0:
            unique_rows[(entries, value)] = None

    if not unique_rows:
        return UniqueSolution((), Form1.zero(ansatz.coords)) if n == 0 else NonUnique(n)

    sparse: dict[int, dict[int, object]] = {}
    for r, (entries, value) in enumerate(unique_rows):
        row = {k: QQ.from_sympy(c) for k, c in entries}
        if value != 0:
            row[n] = QQ.from_sympy(value)
        if row:
            sparse[r] = row
    matrix = DomainMatrix(sparse, (len(unique_rows), n + 1), QQ)
    reduced, pivots = matrix.rref()
    if n in pivots:
        return NoSolution()
    rank = len(pivots)
    if rank < n:
        return NonUnique(n - rank)
    dense = reduced[:rank, :].to_Matrix()
    values = [Rational(0)] * n
    for row_index, column in enumerate(pivots):
        values[column] = Rational(dense[row_index, n])
    return UniqueSolution(tuple(values), ansatz.form(values))
