from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, PrivateAttr, field_validator, model_validator
from sympy import isprime

from motives import __version__
from motives.shared.errors import DomainError
from motives.shared.motive import MotiveMorphism, ToricOneMotive
from motives.shared.ratmult import FACTOR_BOUND_BITS, factorize, parse_rational
from motives.shared.zlinalg import IntMatrix


SCHEMA_VERSION = "1"


def _exact_entry(value: Any) -> str:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{value!r} is not exact; write rationals as quoted strings like \"3/5\"")
    if isinstance(value, int):
        value = str(value)
    if not isinstance(value, str):
        raise ValueError(f"{value!r} is not a rational string")
    try:
        q = parse_rational(value)
    except DomainError as exc:
        raise ValueError(str(exc)) from exc
    if q == 0:
        raise ValueError("entries of u must be nonzero")
    return str(q)


class WindowSpec(BaseModel):
    primes: list[int] = Field(default_factory=list)
    denominator_bound: int = Field(default=1, ge=1)

    @field_validator("primes")
    @classmethod
    def normalize_primes(cls, value: list[int]) -> list[int]:
        for p in value:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
        return sorted(set(value))


class MotiveSpec(BaseModel):
    r: int = Field(..., ge=0)
    d: int = Field(..., ge=0)
    u: list[list[str]] = Field(default_factory=list)

    @field_validator("u", mode="before")
    @classmethod
    def exact_entries(cls, value: Any) -> list[list[str]]:
        if value is None:
            return []
        if not isinstance(value, list) or any(not isinstance(row, list) for row in value):
            raise ValueError("u must be a list of rows")
        return [[_exact_entry(entry) for entry in row] for row in value]

    @model_validator(mode="after")
    def validate_shape(self) -> MotiveSpec:
        if len(self.u) != self.d:
            raise ValueError(f"u must have d = {self.d} rows, got {len(self.u)}")
        for k, row in enumerate(self.u):
            if len(row) != self.r:
                raise ValueError(f"row {k} of u must have r = {self.r} entries, got {len(row)}")
        return self

    def to_motive(self, name: str = "", bound_bits: int = FACTOR_BOUND_BITS) -> ToricOneMotive:
        u = tuple(tuple(factorize(q, bound_bits) for q in row) for row in self.u)
        return ToricOneMotive(self.r, self.d, u, name)

    @classmethod
    def from_motive(cls, motive: ToricOneMotive) -> MotiveSpec:
        return cls(r=motive.r, d=motive.d, u=[[str(q) for q in row] for row in motive.u])


class MorphismBlock(BaseModel):
    name: str = Field(..., min_length=1)
    target: MotiveSpec
    f_x: list[list[int]] = Field(default_factory=list)
    f_t: list[list[int]] = Field(default_factory=list)

    def to_morphism(self, source: ToricOneMotive, bound_bits: int = FACTOR_BOUND_BITS) -> MotiveMorphism:
        target = self.target.to_motive(self.name, bound_bits)
        return MotiveMorphism(
            source,
            target,
            IntMatrix.from_rows(self.f_x, cols=source.r),
            IntMatrix.from_rows(self.f_t, cols=source.d),
        )


class MotiveDocument(MotiveSpec):
    name: str = Field(..., min_length=1)
    window: WindowSpec | None = None
    morphisms: list[MorphismBlock] = Field(default_factory=list)

    _bound_bits: int = PrivateAttr(default=FACTOR_BOUND_BITS)

    @field_validator("name")
    @classmethod
    def strip_name(cls, value: str) -> str:
        candidate = value.strip()
        if not candidate:
            raise ValueError("name must not be empty")
        return candidate

    @property
    def bound_bits(self) -> int:
        return self._bound_bits

    def with_bound_bits(self, bound_bits: int) -> MotiveDocument:
        """Factoring bound applied whenever entries of this document are factored."""
        self._bound_bits = bound_bits
        return self

    def motive(self) -> ToricOneMotive:
        return self.to_motive(self.name, self._bound_bits)


class PresentationModel(BaseModel):
    generators: list[str]
    relations: list[list[int]]
    invariant_factors: list[int]
    free_rank: int
    description: str


class JunctionModel(BaseModel):
    position: str
    kind: str
    exact: bool
    witness: list[int] | None = None
    detail: str = ""


class SequenceModel(BaseModel):
    name: str
    objects: list[dict[str, str]]
    arrows: list[str]
    junctions: list[JunctionModel]
    window: WindowSpec
    notes: list[str] = Field(default_factory=list)
    all_exact: bool


class CheckResult(BaseModel):
    check: str
    passed: bool
    detail: str = ""


class ReportBase(BaseModel):
    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__
    command: str
    input_sha256: str
    name: str


class DescribeReport(ReportBase):
    motive: MotiveSpec
    dual: MotiveSpec
    universal_vector_part: list[list[str]]
    universal_torus_part: list[list[str]]
    de_rham_dim: int
    de_rham_labels: list[str]
    weight_minus2_rank: int
    weights: dict[str, int]
    lie_dimension_check: bool


class PairingReport(ReportBase):
    connection_form: str
    curvature: str
    matrix: list[list[str]]
    row_labels: list[str]
    col_labels: list[str]
    determinant: str | None
    perfect: bool
    unimodular: bool
    weight_blocks: bool
    solution_dimension: int | None


class ExtGroupsReport(ReportBase):
    window: WindowSpec
    hom_to_gm: list[list[int]]
    hom_nabla: list[list[int]]
    ext: PresentationModel
    ext_free_outside: str
    ext_nat: PresentationModel


class MotiveVerification(BaseModel):
    name: str
    input_sha256: str
    checks: list[CheckResult]
    sequences: list[SequenceModel]
    passed: bool


class VerifyReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__
    command: str = "verify"
    motives: list[MotiveVerification]
    passed: bool
