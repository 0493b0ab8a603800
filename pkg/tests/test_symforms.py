import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from motives.shared.errors import ContractViolation
from motives.shared.ratmult import factorize
from motives.shared.symforms import (
    AffineMonomialMap,
    CoordSystem,
    Form1,
    Form2,
    FormAnsatz,
    LaurentPoly,
    LinearFormConstraint,
    NonUnique,
    NoSolution,
    UniqueSolution,
    additive_image,
    compose_maps,
    differential,
    dlog_character,
    eval_form2_at_identity,
    exterior_d,
    group_law_map,
    is_invariant,
    pullback,
    solve_linear_form_system,
    toric_image,
    wedge,
)

XZ = CoordSystem.concat(
    CoordSystem.group(1, 0, factor="left"),
    CoordSystem.group(0, 1, toric_prefix="z", factor="right"),
)
XT = CoordSystem.group(1, 1)


def const(coords: CoordSystem, value: int = 1) -> LaurentPoly:
    return LaurentPoly.constant(coords.size, value)


def test_exterior_derivative_of_connection_form() -> None:
    omega = Form1.basis(XZ, "z", LaurentPoly.variable(2, 0))
    assert omega.render() == "x·dlog z"
    curvature = exterior_d(omega)
    assert curvature == Form2.from_map(XZ, {(0, 1): const(XZ)})
    assert curvature.render() == "dx∧dlog z"


def test_closed_basic_forms() -> None:
    assert exterior_d(Form1.basis(XT, "t")).is_zero()
    x_squared = LaurentPoly.monomial(2, (2, 0))
    assert exterior_d(Form1.basis(XT, "x", x_squared)).is_zero()


def test_render_scaled_form() -> None:
    omega = Form1.basis(XZ, "z", LaurentPoly.variable(2, 0)).scale(2)
    assert omega.render() == "2·x·dlog z"
    assert Form1.zero(XZ).render() == "0"


def test_wedge_is_antisymmetric() -> None:
    dx, dlog_t = Form1.basis(XT, "x"), Form1.basis(XT, "t")
    assert wedge(dx, dlog_t) == Form2.from_map(XT, {(0, 1): const(XT)})
    assert wedge(dlog_t, dx) == Form2.from_map(XT, {(0, 1): const(XT, -1)})
    assert wedge(dx, dx).is_zero()


exponents = st.tuples(st.integers(0, 3), st.integers(-3, 3))
laurent_on_xt = st.dictionaries(exponents, st.integers(-5, 5), max_size=4).map(
    lambda terms: LaurentPoly.from_dict(2, terms)
)
forms_on_xt = st.tuples(laurent_on_xt, laurent_on_xt).map(lambda pair: Form1.from_map(XT, {0: pair[0], 1: pair[1]}))


@settings(max_examples=80, deadline=None)
@given(laurent_on_xt)
def test_d_of_differential_vanishes(f: LaurentPoly) -> None:
    assert exterior_d(differential(f, XT)).is_zero()


@settings(max_examples=60, deadline=None)
@given(
    forms_on_xt,
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(-3, 3).filter(lambda k: k != 0),
    st.sampled_from(["1", "2", "-1/3"]),
)
def test_pullback_commutes_with_d(omega: Form1, p: int, q: int, k: int, c: str) -> None:
    source = CoordSystem.group(1, 1, additive_prefix="a", toric_prefix="s")
    phi = AffineMonomialMap(source, XT, (additive_image({0: p}, q), toric_image({1: k}, factorize(c))))
    assert pullback(phi, exterior_d(omega)) == exterior_d(pullback(phi, omega))


def test_pullback_of_dlog_along_power_map() -> None:
    source = CoordSystem.group(0, 1, toric_prefix="b")
    target = CoordSystem.group(0, 1, toric_prefix="z")
    phi = AffineMonomialMap(source, target, (toric_image({0: 3}),))
    assert pullback(phi, Form1.basis(target, "z")) == Form1.basis(source, "b").scale(3)


def test_pullback_along_constant_section_kills_dx() -> None:
    point = CoordSystem(())
    section = AffineMonomialMap(point, CoordSystem.group(1, 0), (additive_image(constant=3),))
    assert pullback(section, Form1.basis(CoordSystem.group(1, 0), "x")).is_zero()


def test_pullback_along_group_law() -> None:
    square = CoordSystem.concat(XT.renamed("_1"), XT.renamed("_2"))
    mu = group_law_map(square, XT, [0, 1], [2, 3])
    omega = Form1.basis(XT, "t", LaurentPoly.variable(2, 0))
    x_sum = LaurentPoly.variable(4, 0) + LaurentPoly.variable(4, 2)
    assert pullback(mu, omega) == Form1.from_map(square, {1: x_sum, 3: x_sum})


@settings(max_examples=40, deadline=None)
@given(forms_on_xt, st.integers(-2, 2), st.integers(-2, 2).filter(lambda k: k != 0))
def test_pullback_is_functorial(omega: Form1, p: int, k: int) -> None:
    middle = CoordSystem.group(1, 1, additive_prefix="a", toric_prefix="s")
    source = CoordSystem.group(1, 1, additive_prefix="b", toric_prefix="w")
    phi = AffineMonomialMap(source, middle, (additive_image({0: 2}, 1), toric_image({1: -1}, factorize(2))))
    psi = AffineMonomialMap(middle, XT, (additive_image({0: p}), toric_image({1: k})))
    assert pullback(compose_maps(phi, psi), omega) == pullback(phi, pullback(psi, omega))


def test_dlog_character() -> None:
    torus = CoordSystem.group(0, 2)
    expected = Form1.from_map(torus, {0: const(torus, 2), 1: const(torus, -1)})
    assert dlog_character((2, -1), torus) == expected
    with pytest.raises(ContractViolation):
        dlog_character((1,), torus)


def test_invariance() -> None:
    assert is_invariant(Form1.basis(XT, "x"), XT)
    assert is_invariant(Form1.basis(XT, "t").scale(5) + Form1.basis(XT, "x"), XT)
    assert not is_invariant(Form1.basis(XT, "x", LaurentPoly.variable(2, 0)), XT)
    assert not is_invariant(Form1.basis(XT, "t", LaurentPoly.variable(2, 1)), XT)


def test_identity_fibre_evaluation() -> None:
    curvature = Form2.from_map(XZ, {(0, 1): const(XZ)})
    assert eval_form2_at_identity(curvature, (1, 0), (0, 1)) == 1
    assert eval_form2_at_identity(curvature, (0, 1), (1, 0)) == -1
    vanishing = Form2.from_map(XZ, {(0, 1): LaurentPoly.variable(2, 0)})
    assert eval_form2_at_identity(vanishing, (1, 0), (0, 1)) == 0


def restriction_constraints(target_on_torus: Form1) -> list[LinearFormConstraint]:
    torus = CoordSystem.group(0, 1)
    line = CoordSystem.group(1, 0)
    along_t = AffineMonomialMap(torus, XT, (additive_image(constant=0), toric_image({0: 1})))
    along_x = AffineMonomialMap(line, XT, (additive_image({0: 1}), toric_image()))
    return [
        LinearFormConstraint(lambda f: pullback(along_t, f), target_on_torus, "torus"),
        LinearFormConstraint(lambda f: pullback(along_x, f), Form1.zero(line), "line"),
    ]


def test_solver_unique_solution() -> None:
    torus = CoordSystem.group(0, 1)
    result = solve_linear_form_system(FormAnsatz(XT, degree=0), restriction_constraints(Form1.basis(torus, "t")))
    assert isinstance(result, UniqueSolution)
    assert result.values == (0, 1)
    assert result.form == Form1.basis(XT, "t")


def test_solver_reports_inconsistency_and_freedom() -> None:
    torus = CoordSystem.group(0, 1)
    ansatz = FormAnsatz(XT, degree=0)
    first = restriction_constraints(Form1.basis(torus, "t"))
    second = restriction_constraints(Form1.zero(torus))
    assert isinstance(solve_linear_form_system(ansatz, [first[0], second[0]]), NoSolution)
    assert solve_linear_form_system(ansatz, first[:1]) == NonUnique(1)


def test_ansatz_monomials_only_involve_additive_coordinates() -> None:
    assert FormAnsatz(XT, degree=2).monomials() == [(0, 0), (1, 0), (2, 0)]
    two_lines = CoordSystem.group(2, 1)
    assert FormAnsatz(two_lines, degree=1).monomials() == [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
    assert len(FormAnsatz(two_lines, degree=1).basis()) == 9
