import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ImmutableMatrix, Rational, eye, zeros

from motives.cli.reports import load_document
from motives.shared.biext import (
    NatExtensionOnFiber,
    PairingMatrix,
    ToricBiextension,
    biextension_sum,
    canonical_nat_structure,
    deligne_pairing,
    expected_connection_form,
    is_perfect,
    pairing_adjointness,
    poincare,
    pullback_biextension,
    psi_inverse,
    psi_point,
    solution_dimension,
    solve_nat_structure,
    tautological_pairing_check,
    validate,
    vector_part_restriction,
    verify_biextension_adjointness,
    weight_block_check,
)
from motives.shared.errors import ContractViolation, TheoremCheckFailure
from motives.shared.motive import MotiveMorphism, ToricOneMotive, cartier_dual, identity_morphism
from motives.shared.ratmult import QStarElem, factorize
from motives.shared.sampling import random_morphism, random_motive, random_point
from motives.shared.symforms import Form2, LaurentPoly, NonUnique, UniqueSolution
from motives.shared.zlinalg import IntMatrix

CORPUS = sorted((Path(__file__).resolve().parents[1] / "corpus").glob("*.yaml"))
LATTICE = ToricOneMotive(1, 0, ())
TORUS = ToricOneMotive(0, 1, ((),))
seeds = st.integers(0, 10**6)


def test_poincare_shapes() -> None:
    assert poincare(LATTICE).beta1 == IntMatrix.identity(1)
    assert poincare(LATTICE).beta2 == IntMatrix.zeros(0, 0)
    assert poincare(TORUS).beta2 == IntMatrix.identity(1)
    assert poincare(TORUS).beta1 == IntMatrix.zeros(0, 0)


def test_validate_detects_perturbed_trivialization() -> None:
    m = ToricOneMotive(1, 1, ((factorize(2),),))
    assert validate(poincare(m)) == []
    broken = ToricBiextension(m, cartier_dual(m), IntMatrix.from_rows([[2]]), IntMatrix.identity(1))
    assert len(validate(broken)) == 1
    with pytest.raises(ContractViolation):
        solve_nat_structure(broken)
    assert validate(poincare(TORUS)) == []


def test_connection_form_of_lattice_motive() -> None:
    structure = canonical_nat_structure(poincare(LATTICE))
    assert structure.connection_form.render() == "x·dlog z"
    coords = structure.connection_form.coords
    assert structure.curvature == Form2.from_map(coords, {(0, 1): LaurentPoly.constant(2, 1)})
    assert structure.curvature.render() == "dx∧dlog z"


def test_connection_form_for_doubled_trivialization() -> None:
    doubled = ToricBiextension(LATTICE, TORUS, IntMatrix.from_rows([[2]]), IntMatrix.zeros(0, 0))
    assert canonical_nat_structure(doubled).connection_form.render() == "2·x·dlog z"


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_connection_form_matches_closed_form(seed: int, r: int, d: int) -> None:
    biext = poincare(random_motive(random.Random(seed), r, d))
    result = solve_nat_structure(biext)
    assert solution_dimension(result) == 0
    assert canonical_nat_structure(biext).connection_form == expected_connection_form(biext)


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(0, 2), st.integers(0, 2))
def test_quadratic_ansatz_solves_to_the_same_form(seed: int, r: int, d: int) -> None:
    biext = poincare(random_motive(random.Random(seed), r, d))
    result = solve_nat_structure(biext, 2)
    assert isinstance(result, UniqueSolution)
    assert result.form == expected_connection_form(biext)


def test_non_unique_solution_is_a_theorem_failure(monkeypatch) -> None:
    monkeypatch.setattr("motives.shared.biext.solve_nat_structure", lambda biext, degree=1: NonUnique(2))
    with pytest.raises(TheoremCheckFailure) as excinfo:
        canonical_nat_structure(poincare(LATTICE))
    assert excinfo.value.solution_dimension == 2


def test_pairing_examples() -> None:
    lattice_pairing = deligne_pairing(poincare(LATTICE))
    assert lattice_pairing.matrix == ImmutableMatrix([[1]])
    assert lattice_pairing.row_labels == ("x",)
    assert lattice_pairing.col_labels == ("Lt",)

    m = ToricOneMotive(1, 1, ((factorize(2),),))
    pairing = deligne_pairing(poincare(m))
    assert pairing.matrix == ImmutableMatrix([[0, 1], [-1, 0]])
    assert pairing.is_unimodular

    zero = ToricBiextension(m, cartier_dual(m), IntMatrix.zeros(1, 1), IntMatrix.zeros(1, 1))
    assert deligne_pairing(zero).matrix == ImmutableMatrix(zeros(2, 2))


def test_is_perfect_flags() -> None:
    assert not is_perfect(PairingMatrix(ImmutableMatrix(zeros(2, 2)), ("a", "b"), ("c", "d")))
    doubled = PairingMatrix(ImmutableMatrix([[2]]), ("a",), ("b",))
    assert is_perfect(doubled)
    assert not doubled.is_unimodular
    assert doubled.determinant == 2


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_pairing_is_perfect_and_respects_weights(seed: int, r: int, d: int) -> None:
    m = random_motive(random.Random(seed), r, d)
    pairing = deligne_pairing(poincare(m))
    assert pairing.is_square
    assert pairing.matrix.shape == (r + d, r + d)
    assert is_perfect(pairing)
    assert abs(pairing.determinant) == 1
    assert weight_block_check(m)


def test_pairing_is_additive_in_the_biextension() -> None:
    m = random_motive(random.Random(11), 2, 1)
    base = poincare(m)
    doubled = biextension_sum(base, base)
    assert validate(doubled) == []
    assert deligne_pairing(doubled).matrix == 2 * deligne_pairing(base).matrix
    assert canonical_nat_structure(doubled).connection_form == expected_connection_form(base).scale(2)
    with pytest.raises(ContractViolation):
        biextension_sum(base, poincare(LATTICE))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_pairing_adjointness_on_random_morphisms(seed: int) -> None:
    rng = random.Random(seed)
    phi = random_morphism(rng, rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
    assert verify_biextension_adjointness(phi)
    assert pairing_adjointness(phi)


def test_pairing_adjointness_on_square_map() -> None:
    two = ToricOneMotive(1, 1, ((factorize(2),),))
    four = ToricOneMotive(1, 1, ((factorize(4),),))
    assert pairing_adjointness(MotiveMorphism(two, four, IntMatrix.identity(1), IntMatrix.from_rows([[2]])))


@pytest.mark.parametrize("d", range(6))
def test_tautological_pairing_is_identity(d: int) -> None:
    assert tautological_pairing_check(d) == ImmutableMatrix(eye(d))


def test_vector_part_restriction() -> None:
    assert vector_part_restriction(random_motive(random.Random(5), 2, 2))
    assert vector_part_restriction(LATTICE)


def test_psi_point_examples() -> None:
    m = ToricOneMotive(1, 1, ((factorize(2),),))
    g, fiber = psi_point(m, (Rational(0),), (QStarElem.one(),))
    assert g == (QStarElem.one(),)
    assert fiber.lift_class == (QStarElem.one(),)
    assert fiber.normal_differential == (0,)

    g, fiber = psi_point(TORUS, (), (factorize(5),))
    assert g == (factorize(5),)
    assert fiber.lift_class == (factorize(5),)
    assert fiber.normal_differential == ()

    g, fiber = psi_point(LATTICE, (Rational(7, 3),), ())
    assert g == ()
    assert fiber.normal_differential == (Rational(7, 3),)
    assert fiber.render_differential(["z"]) == "7/3·dlog z"


def test_psi_inverse_rejects_mismatched_fibre() -> None:
    m = ToricOneMotive(1, 1, ((factorize(2),),))
    g, fiber = psi_point(m, (Rational(1),), (factorize(3),))
    with pytest.raises(ContractViolation):
        psi_inverse(m, (factorize(5),), fiber)
    forged = NatExtensionOnFiber(fiber.basepoint, (factorize(7),), fiber.normal_differential)
    with pytest.raises(ContractViolation):
        psi_inverse(m, g, forged)


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_points_functor_round_trip(seed: int, r: int, d: int) -> None:
    rng = random.Random(seed)
    m = random_motive(rng, r, d)
    a, t = random_point(rng, m)
    g, fiber = psi_point(m, a, t)
    assert psi_inverse(m, g, fiber) == (a, t)
    again = psi_point(m, *psi_inverse(m, g, fiber))
    assert again == (g, fiber)


def test_pullback_along_identities_is_trivial() -> None:
    m = random_motive(random.Random(2), 2, 1)
    base = poincare(m)
    assert pullback_biextension(base, identity_morphism(m), identity_morphism(cartier_dual(m))) == base
    with pytest.raises(ContractViolation):
        pullback_biextension(base, identity_morphism(cartier_dual(m)), identity_morphism(m))


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_connection_is_unique_at_degree_two(path: Path) -> None:
    biext = poincare(load_document(path).motive())
    result = solve_nat_structure(biext, 2)
    assert solution_dimension(result) == 0
    assert isinstance(result, UniqueSolution)
    assert result.form == expected_connection_form(biext)
