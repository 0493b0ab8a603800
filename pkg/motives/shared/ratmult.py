"""The multiplicative group of the rationals, kept in factored form."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import Rational, factorint, isprime

from motives.shared.errors import ContractViolation, DomainError
from motives.shared.zlinalg import GroupPresentation, IntMatrix, cokernel_presentation, solve_integer


FACTOR_BOUND_BITS = 64
_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Rational:
    """Parse ``"a"`` or ``"a/b"``; anything float-looking is refused."""
    cleaned = str(text).strip()
    if not _RATIONAL_RE.match(cleaned):
        raise DomainError(f"not an exact rational: {text!r}")
    if "/" in cleaned:
        numerator, denominator = cleaned.split("/", 1)
        if int(denominator) == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return Rational(int(numerator), int(denominator))
    return Rational(int(cleaned))


@dataclass(frozen=True)
class QStarElem:
    sign: int
    exps: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign}")
        primes = [p for p, _ in self.exps]
        if primes != sorted(set(primes)):
            raise DomainError("prime exponents must be sorted and unique")
        for p, e in self.exps:
            if e == 0:
                raise DomainError(f"zero exponent stored for prime {p}")
            if not isprime(p):
                raise DomainError(f"{p} is not prime")

    @classmethod
    def one(cls) -> QStarElem:
        return cls(1, ())

    @classmethod
    def from_map(cls, sign: int, exps: dict[int, int]) -> QStarElem:
        return cls(sign, tuple(sorted((p, e) for p, e in exps.items() if e != 0)))

    @property
    def exponent_map(self) -> dict[int, int]:
        return dict(self.exps)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exps)

    @property
    def value(self) -> Rational:
        out = Rational(self.sign)
        for p, e in self.exps:
            out *= Rational(p) ** e
        return out

    def is_one(self) -> bool:
        return self.sign == 1 and not self.exps

    def __mul__(self, other: QStarElem) -> QStarElem:
        merged = self.exponent_map
        for p, e in other.exps:
            merged[p] = merged.get(p, 0) + e
        return QStarElem.from_map(self.sign * other.sign, merged)

    def __pow__(self, n: int) -> QStarElem:
        n = int(n)
        return QStarElem.from_map(self.sign ** (n % 2), {p: e * n for p, e in self.exps})

    def inverse(self) -> QStarElem:
        return self ** -1

    def __str__(self) -> str:
        return str(self.value)


def factorize(q: Rational | Fraction | int | str, bound_bits: int = FACTOR_BOUND_BITS) -> QStarElem:
    if isinstance(q, float) or getattr(q, "is_Float", False):
        raise DomainError(f"floating point value refused: {q!r}")
    value = parse_rational(q) if isinstance(q, str) else Rational(q)
    if value == 0:
        raise DomainError("zero is not a unit of Q")
    limit = 1 << bound_bits
    numerator, denominator = abs(int(value.p)), int(value.q)
    if numerator >= limit or denominator >= limit:
        raise DomainError(f"{value} exceeds the {bound_bits}-bit factoring bound")
    exps: dict[int, int] = {}
    for p, e in factorint(numerator).items():
        exps[int(p)] = exps.get(int(p), 0) + int(e)
    for p, e in factorint(denominator).items():
        exps[int(p)] = exps.get(int(p), 0) - int(e)
    out = QStarElem.from_map(1 if value > 0 else -1, exps)
    if out.value != value:
        raise ContractViolation(f"factorization of {value} does not reconstruct")
    return out


def mul(a: QStarElem, b: QStarElem) -> QStarElem:
    return a * b


def power(a: QStarElem, n: int) -> QStarElem:
    return a ** n


def product(elements: Iterable[QStarElem]) -> QStarElem:
    out = QStarElem.one()
    for element in elements:
        out = out * element
    return out


def primes_of(elements: Iterable[QStarElem]) -> tuple[int, ...]:
    return tuple(sorted({p for element in elements for p in element.primes}))


@dataclass(frozen=True)
class SUnitLattice:
    """Coordinates (sign bit, exponents over S); the sign slot is read mod 2."""

    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.primes) != sorted(set(self.primes)):
            raise DomainError("window primes must be sorted and unique")
        for p in self.primes:
            if not isprime(p):
                raise DomainError(f"{p} is not prime")

    @property
    def rank(self) -> int:
        return len(self.primes) + 1

    def encode(self, x: QStarElem) -> tuple[int, ...]:
        outside = [p for p in x.primes if p not in self.primes]
        if outside:
            raise DomainError(f"{x} has primes {outside} outside the window {list(self.primes)}")
        exps = x.exponent_map
        return (0 if x.sign == 1 else 1, *(exps.get(p, 0) for p in self.primes))

    def decode(self, vector: Sequence[int]) -> QStarElem:
        if len(vector) != self.rank:
            raise ContractViolation(f"S-unit vector must have length {self.rank}")
        sign = -1 if vector[0] % 2 else 1
        return QStarElem.from_map(sign, dict(zip(self.primes, vector[1:])))

    def encode_vector(self, xs: Sequence[QStarElem]) -> tuple[int, ...]:
        return tuple(v for x in xs for v in self.encode(x))

    def sign_slack(self, copies: int) -> IntMatrix:
        """Columns 2·e_sign for each copy, killing the sign coordinate mod 2."""
        size = copies * self.rank
        return IntMatrix.from_columns(
            [tuple(2 if i == k * self.rank else 0 for i in range(size)) for k in range(copies)],
            rows=size,
        )


def vector_membership(
    x: Sequence[QStarElem], gens: Sequence[Sequence[QStarElem]]
) -> tuple[int, ...] | None:
    """Coordinates c with ∏ gensᵢ^cᵢ = x componentwise in (Q*)^n, or None."""
    n = len(x)
    for gen in gens:
        if len(gen) != n:
            raise ContractViolation("generator length does not match the element")
    lattice = SUnitLattice(primes_of([*x, *(g for gen in gens for g in gen)]))
    size = n * lattice.rank
    columns = [lattice.encode_vector(gen) for gen in gens]
    system = IntMatrix.from_columns(columns, rows=size).hstack(lattice.sign_slack(n))
    solution = solve_integer(system, lattice.encode_vector(x))
    if solution is None:
        return None
    coords = solution[: len(gens)]
    for k in range(n):
        rebuilt = product(gen[k] ** c for gen, c in zip(gens, coords))
        if rebuilt != x[k]:
            raise ContractViolation("membership coordinates failed re-multiplication")
    return coords


def subgroup_membership(x: QStarElem, gens: Sequence[QStarElem]) -> tuple[int, ...] | None:
    return vector_membership([x], [[g] for g in gens])


def vector_quotient_presentation(
    n: int, ambient_primes: Sequence[int], rel_gens: Sequence[Sequence[QStarElem]]
) -> GroupPresentation:
    """(±1 × ⟨S⟩)^n modulo the subgroup generated by ``rel_gens``."""
    lattice = SUnitLattice(tuple(sorted(set(ambient_primes))))
    size = n * lattice.rank
    columns = []
    for gen in rel_gens:
        if len(gen) != n:
            raise ContractViolation("relation length does not match the copy count")
        columns.append(lattice.encode_vector(gen))
    relations = lattice.sign_slack(n).hstack(IntMatrix.from_columns(columns, rows=size))
    labels = [
        f"{name}[{k}]" if n > 1 else name
        for k in range(n)
        for name in ("-1", *(str(p) for p in lattice.primes))
    ]
    return cokernel_presentation(relations, labels)


def quotient_presentation(ambient_primes: Sequence[int], rel_gens: Sequence[QStarElem]) -> GroupPresentation:
    return vector_quotient_presentation(1, ambient_primes, [[g] for g in rel_gens])
