import json
import random
from pathlib import Path

from motives.cli.main import main
from motives.cli.reports import load_document
from motives.shared.contracts import MotiveDocument, MotiveSpec
from motives.shared.sampling import random_motive

CORPUS = Path(__file__).resolve().parents[1] / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"


def test_pairing_of_lattice_motive(capsys) -> None:
    code = main(["pairing", "--input", str(CORPUS / "example_r1d0.yaml"), "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["connection_form"] == "x·dlog z"
    assert payload["matrix"] == [["1"]]
    assert payload["perfect"] is True
    assert payload["solution_dimension"] == 0


def test_describe_of_trivial_motive(capsys) -> None:
    assert main(["describe", "--input", str(CORPUS / "example_r0d0.yaml")]) == 0
    assert "example_r0d0" in capsys.readouterr().out


def test_extgroups_text_output(capsys) -> None:
    code = main(["extgroups", "--input", str(CORPUS / "example_r1d1_two.yaml"), "--primes", "2", "--denominator-bound", "1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "Ext_nat(M, Gm)" in out


def test_float_entry_is_a_parse_error(tmp_path: Path, capsys) -> None:
    bad = tmp_path / "bad.yaml"
    bad.write_text("name: bad\nr: 1\nd: 1\nu: [[0.5]]\n", encoding="utf-8")
    assert main(["describe", "--input", str(bad)]) == 2
    assert "bad.yaml" in capsys.readouterr().err


def test_missing_file_is_a_parse_error(tmp_path: Path) -> None:
    assert main(["pairing", "--input", str(tmp_path / "absent.yaml")]) == 2


def test_random_output_feeds_back_into_describe(tmp_path: Path) -> None:
    target = tmp_path / "random.yaml"
    assert main(["random", "--r", "2", "--d", "1", "--seed", "3", "--output", str(target)]) == 0
    assert main(["describe", "--input", str(target)]) == 0
    assert main(["verify", "--input", str(target)]) == 0


def test_verify_corpus(capsys) -> None:
    code = main(["verify", "--corpus", str(CORPUS), "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["passed"] is True
    assert len(payload["motives"]) == 12


def test_random_output_reparses_to_the_same_document(tmp_path: Path) -> None:
    target = tmp_path / "random.yaml"
    assert main(["random", "--r", "2", "--d", "2", "--seed", "9", "--output", str(target)]) == 0
    motive = random_motive(random.Random(9), 2, 2, name="random_r2d2_s9")
    spec = MotiveSpec.from_motive(motive)
    expected = MotiveDocument(name="random_r2d2_s9", r=spec.r, d=spec.d, u=spec.u)
    assert load_document(target) == expected
    assert load_document(target).motive() == motive


def test_random_output_is_deterministic(capsys) -> None:
    assert main(["random", "--r", "3", "--d", "1", "--seed", "5", "--primes", "2,7"]) == 0
    first = capsys.readouterr().out
    assert main(["random", "--r", "3", "--d", "1", "--seed", "5", "--primes", "2,7"]) == 0
    assert capsys.readouterr().out == first


def test_pairing_report_matches_golden_file(capsys) -> None:
    assert main(["pairing", "--input", str(CORPUS / "example_r1d0.yaml"), "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["pairing", "--input", str(CORPUS / "example_r1d0.yaml"), "--json"]) == 0
    assert capsys.readouterr().out == first
    golden = json.loads((GOLDEN / "pairing_example_r1d0.json").read_text(encoding="utf-8"))
    assert json.loads(first) == golden


def test_oversized_entry_is_a_parse_error_with_location(tmp_path: Path, capsys) -> None:
    big = tmp_path / "big.yaml"
    big.write_text(f'name: big\nr: 1\nd: 1\nu: [["{2**128 + 1}"]]\n', encoding="utf-8")
    assert main(["describe", "--input", str(big)]) == 2
    assert "big.yaml:u.0.0" in capsys.readouterr().err


def test_factor_bound_is_read_from_the_environment(tmp_path: Path, monkeypatch, capsys) -> None:
    document = tmp_path / "medium.yaml"
    document.write_text(f'name: medium\nr: 1\nd: 1\nu: [["{2**40 + 15}"]]\n', encoding="utf-8")
    assert main(["describe", "--input", str(document)]) == 0
    capsys.readouterr()
    monkeypatch.setenv("MOTIVES_FACTOR_BOUND_BITS", "16")
    assert main(["describe", "--input", str(document)]) == 2
    assert "medium.yaml:u.0.0" in capsys.readouterr().err


def test_composite_primes_flag_is_a_parse_error() -> None:
    assert main(["extgroups", "--input", str(CORPUS / "example_r1d1_two.yaml"), "--primes", "4"]) == 2
    assert main(["random", "--r", "1", "--d", "1", "--primes", "2,9"]) == 2
