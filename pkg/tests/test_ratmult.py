from itertools import combinations_with_replacement
from itertools import product as cartesian

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational

from motives.shared.errors import DomainError
from motives.shared.ratmult import (
    QStarElem,
    SUnitLattice,
    factorize,
    mul,
    parse_rational,
    power,
    quotient_presentation,
    subgroup_membership,
    vector_membership,
    vector_quotient_presentation,
)


def test_factorize_examples() -> None:
    assert factorize(1) == QStarElem(1, ())
    assert factorize("-12/5") == QStarElem(-1, ((2, 2), (3, 1), (5, -1)))
    assert factorize(7) == QStarElem(1, ((7, 1),))
    assert factorize(Rational(-1)).is_one() is False
    assert factorize("-1").value == -1


@pytest.mark.parametrize("bad", [0, "0", 0.5, "1.5", "3/0", "2e3", 2**70])
def test_factorize_rejects_non_units(bad: object) -> None:
    with pytest.raises(DomainError):
        factorize(bad)  # type: ignore[arg-type]


def test_parse_rational_normalizes() -> None:
    assert parse_rational("6/4") == Rational(3, 2)
    assert parse_rational(" -7 ") == -7


def test_group_operations() -> None:
    assert mul(factorize(2), factorize("1/2")).is_one()
    assert power(factorize(-2), 2) == factorize(4)
    assert mul(factorize("-12/5"), factorize("5/3")) == factorize(-4)
    assert factorize("-3/5").inverse() == factorize("-5/3")
    assert str(factorize("-3/5")) == "-3/5"


nonzero = st.integers(-10**6, 10**6).filter(lambda value: value != 0)
positive = st.integers(1, 10**6)


@settings(max_examples=500, deadline=None)
@given(nonzero, positive, nonzero, positive)
def test_factorize_is_multiplicative(a: int, b: int, c: int, d: int) -> None:
    x, y = Rational(a, b), Rational(c, d)
    assert factorize(x * y) == factorize(x) * factorize(y)
    assert factorize(x).value == x


def test_s_unit_lattice_round_trip_and_window() -> None:
    lattice = SUnitLattice((2, 3))
    x = factorize("-9/8")
    assert lattice.encode(x) == (1, -3, 2)
    assert lattice.decode(lattice.encode(x)) == x
    with pytest.raises(DomainError):
        lattice.encode(factorize(5))
    with pytest.raises(DomainError):
        SUnitLattice((4,))


def test_subgroup_membership_examples() -> None:
    assert subgroup_membership(factorize(8), [factorize(2)]) == (3,)
    assert subgroup_membership(factorize(3), [factorize(2)]) is None
    assert subgroup_membership(factorize(-6), [factorize(-2), factorize(3)]) == (1, 1)
    assert subgroup_membership(factorize(-1), [factorize(2)]) is None


def test_vector_membership_componentwise() -> None:
    gens = [[factorize(2), factorize(3)], [factorize(1), factorize(-1)]]
    coords = vector_membership([factorize(4), factorize(-9)], gens)
    assert coords is not None
    assert coords[0] == 2
    assert vector_membership([factorize(4), factorize(5)], gens) is None


def test_quotient_presentation_examples() -> None:
    two = quotient_presentation([2], [factorize(2)])
    assert two.invariant_factors == (2,)
    assert two.free_rank == 0

    free = quotient_presentation([2], [])
    assert free.invariant_factors == (2,)
    assert free.free_rank == 1

    mixed = quotient_presentation([2, 3], [factorize(6)])
    assert mixed.invariant_factors == (2,)
    assert mixed.free_rank == 1


def test_quotient_presentation_rejects_prime_outside_window() -> None:
    with pytest.raises(DomainError):
        quotient_presentation([2], [factorize(3)])


def test_vector_quotient_labels() -> None:
    group = vector_quotient_presentation(2, [2], [])
    assert group.labels == ("-1[0]", "2[0]", "-1[1]", "2[1]")
    assert group.free_rank == 2


def count_cosets(primes: tuple[int, ...], gens: list[QStarElem], box: int) -> int:
    reps: list[QStarElem] = []
    for sign, exps in cartesian((1, -1), cartesian(range(box), repeat=len(primes))):
        candidate = QStarElem.from_map(sign, dict(zip(primes, exps)))
        if not any(subgroup_membership(candidate * rep.inverse(), gens) is not None for rep in reps):
            reps.append(candidate)
    return len(reps)


@pytest.mark.parametrize(
    "gens",
    [["4", "9"], ["12", "18"], ["-2", "3"], ["8", "-27"], ["1/4", "6"]],
)
def test_quotient_order_matches_coset_enumeration(gens: list[str]) -> None:
    elements = [factorize(g) for g in gens]
    group = quotient_presentation([2, 3], elements)
    assert group.free_rank == 0
    assert group.order == count_cosets((2, 3), elements, box=6)


SMALL_UNITS = [
    QStarElem.from_map(sign, {2: a, 3: b}) for sign in (1, -1) for a in range(-3, 4) for b in range(-3, 4)
]


def test_quotient_order_over_all_small_generator_pairs() -> None:
    # sign slack and the two exponent columns give order 2·|det| when the quotient is finite
    for x, y in combinations_with_replacement(SMALL_UNITS, 2):
        ex, ey = dict(x.exps), dict(y.exps)
        det = ex.get(2, 0) * ey.get(3, 0) - ex.get(3, 0) * ey.get(2, 0)
        group = quotient_presentation([2, 3], [x, y])
        if det == 0:
            assert group.free_rank > 0
            continue
        assert group.free_rank == 0
        assert group.order == 2 * abs(det)


@pytest.mark.parametrize("exponents", [(2, 0, 0, 2), (1, 1, -1, 2), (3, 1, 0, 1), (2, 3, 1, 3)])
def test_small_quotients_match_coset_enumeration(exponents: tuple[int, int, int, int]) -> None:
    a, b, c, d = exponents
    elements = [QStarElem.from_map(1, {2: a, 3: b}), QStarElem.from_map(-1, {2: c, 3: d})]
    group = quotient_presentation([2, 3], elements)
    assert group.order == count_cosets((2, 3), elements, box=2 * abs(a * d - b * c))
