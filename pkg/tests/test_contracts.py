import pytest
from pydantic import ValidationError

from motives.shared.contracts import MorphismBlock, MotiveDocument, MotiveSpec, WindowSpec
from motives.shared.errors import DomainError
from motives.shared.motive import ToricOneMotive, is_valid
from motives.shared.ratmult import factorize


def test_motive_spec_normalizes_entries() -> None:
    spec = MotiveSpec.model_validate({"r": 2, "d": 1, "u": [["6/4", -3]]})
    assert spec.u == [["3/2", "-3"]]
    motive = spec.to_motive("m")
    assert motive.u == ((factorize("3/2"), factorize(-3)),)


@pytest.mark.parametrize("entry", [0.5, True, "0", "x", None])
def test_motive_spec_rejects_inexact_entries(entry) -> None:
    with pytest.raises(ValidationError):
        MotiveSpec.model_validate({"r": 1, "d": 1, "u": [[entry]]})


def test_motive_spec_checks_shape() -> None:
    with pytest.raises(ValidationError):
        MotiveSpec.model_validate({"r": 2, "d": 1, "u": [["2"]]})
    with pytest.raises(ValidationError):
        MotiveSpec.model_validate({"r": 1, "d": 2, "u": [["2"]]})
    with pytest.raises(ValidationError):
        MotiveSpec.model_validate({"r": -1, "d": 0})
    assert MotiveSpec.model_validate({"r": 0, "d": 0, "u": None}).u == []


def test_motive_spec_round_trips_a_motive() -> None:
    motive = ToricOneMotive(1, 2, ((factorize("-3/5"),), (factorize(4),)))
    assert MotiveSpec.from_motive(motive).to_motive() == motive


def test_window_spec_sorts_and_rejects_composites() -> None:
    assert WindowSpec.model_validate({"primes": [5, 2, 5]}).primes == [2, 5]
    with pytest.raises(ValidationError):
        WindowSpec.model_validate({"primes": [4]})
    with pytest.raises(ValidationError):
        WindowSpec.model_validate({"denominator_bound": 0})


def test_document_requires_name_and_builds_morphisms() -> None:
    with pytest.raises(ValidationError):
        MotiveDocument.model_validate({"name": "  ", "r": 0, "d": 0})
    document = MotiveDocument.model_validate(
        {
            "name": " square ",
            "r": 1,
            "d": 1,
            "u": [["2"]],
            "morphisms": [{"name": "sq", "target": {"r": 1, "d": 1, "u": [["4"]]}, "f_x": [[1]], "f_t": [[2]]}],
        }
    )
    assert document.name == "square"
    block = document.morphisms[0]
    assert isinstance(block, MorphismBlock)
    assert is_valid(block.to_morphism(document.motive()))


def test_factor_bound_applies_when_building_motives() -> None:
    spec = MotiveSpec.model_validate({"r": 1, "d": 1, "u": [[str(2**40 + 15)]]})
    assert spec.to_motive().r == 1
    with pytest.raises(DomainError):
        spec.to_motive(bound_bits=16)
    document = MotiveDocument.model_validate({"name": "m", **spec.model_dump()})
    with pytest.raises(DomainError):
        document.with_bound_bits(16).motive()
