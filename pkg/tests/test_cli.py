import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from paramodular_twist import CliConfig, build_parser, main
from errors import InvalidPrime

DATA = str(ROOT / "data" / "upsilon20_p3.txt")


def run(*argv):
    outputs = []
    code = main(list(argv), output_func=outputs.append)
    return code, outputs


def test_classify():
    assert run("classify", "--form", "81,44,6", "--p", "3") == (0, ["Case I"])
    assert run("classify", "--form", "243,9,1", "--p", "3") == (0, ["Case V"])


@pytest.mark.parametrize("p", ["4", "2", "1"])
def test_invalid_prime_exit_code(p):
    code, outputs = run("classify", "--form", "81,44,6", "--p", p)
    assert code == 2
    assert outputs == []


def test_prime_dividing_level_is_rejected():
    assert run("classify", "--form", "243,44,6", "--p", "3", "--N", "3")[0] == 2


def test_form_outside_level_is_rejected():
    assert run("classify", "--form", "27,1,1", "--p", "3")[0] == 2


def test_bad_arguments():
    assert run("classify", "--form", "1,2", "--p", "3")[0] == 2
    assert run("no-such-command")[0] == 2


def test_reduce():
    assert run("reduce", "--form", "81,78,19") == (0, ["1,0,18 det_sign=+1"])
    assert run("reduce", "--form", "2,-1,3") == (0, ["2,1,3 det_sign=-1"])


def test_twist_worked_example_text():
    code, outputs = run("twist", "--form", "81,44,6", "--p", "3", "--k", "20", "--coeffs", DATA)
    assert code == 0
    lines = outputs[0].splitlines()
    assert lines[0] == "case: Case I"
    assert lines[1] == f"value: {Fraction(-6586974535680, 1162261467)}"


def test_twist_worked_example_json():
    code, outputs = run(
        "twist", "--form", "81,44,6", "--p", "3", "--k", "20", "--coeffs", DATA, "--format", "json",
    )
    assert code == 0
    data = json.loads(outputs[0])
    assert data["case"] == "I"
    assert Fraction(data["value"]) == Fraction(-6586974535680, 1162261467)


def test_twist_missing_coefficients(capsys):
    code, outputs = run("twist", "--form", "81,9,7", "--p", "3", "--k", "20", "--coeffs", DATA)
    assert code == 3
    assert outputs == []
    err = capsys.readouterr().err
    assert "missing: 1,1,7" in err


def test_twist_assume_zero(capsys):
    code, outputs = run(
        "twist", "--form", "81,9,7", "--p", "3", "--k", "20", "--coeffs", DATA,
        "--assume-zero-outside-box",
    )
    assert code == 0
    assert "approximate:" in outputs[0]


def test_support():
    code, outputs = run("support", "--form", "81,44,6", "--p", "3", "--k", "20")
    assert (code, outputs) == (0, ["1,0,18", "2,0,9"])


def test_support_symbolic():
    code, outputs = run("support", "--form", "81,44,6", "--p", "3", "--k", "20", "--symbolic")
    assert code == 0
    assert "a(1, 0, 18)" in outputs[0]


def test_lemma_check():
    assert run("lemma-check", "--p", "3") == (
        0, ["all lemmas verified: jlemma, p22, a2, quadeq, ccond, ms, mm"],
    )


def test_lemma_check_failure_exit_code(mocker):
    mocker.patch("lemma_check.sum_mm", return_value=10 ** 6)
    code, outputs = run("lemma-check", "--p", "3")
    assert code == 4
    assert outputs[0].startswith("lemma mm failed at p=3")


def test_lemma_check_rejects_composite():
    assert run("lemma-check", "--p", "3,9")[0] == 2


def test_maass_vanish():
    code, outputs = run("maass-vanish", "--p", "3", "--k", "10")
    assert code == 0
    assert outputs[0].startswith("all branches vanish (")


def test_maass_vanish_numeric_random_sweep():
    code, outputs = run(
        "maass-vanish", "--p", "3", "--k", "20", "--sweep", "random", "--count", "5", "--numeric",
    )
    assert (code, outputs) == (0, ["all branches vanish (5 cases)"])


def test_maass_vanish_odd_weight():
    assert run("maass-vanish", "--p", "3", "--k", "11")[0] == 2


def test_maass_vanish_reports_residual(mocker):
    from coeffs import LinearForm
    import maass

    fake = maass.VanishingReport(None, 3, 10, None, LinearForm.single(-3))
    mocker.patch("paramodular_twist.verify_maass_vanishing", return_value=fake)
    code, outputs = run("maass-vanish", "--p", "3", "--k", "10")
    assert code == 4
    assert outputs[0].startswith("nonzero residual")


def test_ingest_validate(tmp_path):
    assert run("ingest-validate", DATA) == (0, ["ok: N=1 k=20 entries=2"])
    bad = tmp_path / "bad.txt"
    bad.write_text("N=1 k=20\n1,0,18 1\n1,0,18 2\n", encoding="utf-8")
    assert run("ingest-validate", str(bad))[0] == 2


def test_ingest_validate_jacobi(tmp_path):
    path = tmp_path / "jacobi.txt"
    path.write_text("k=10\n-3 1\n-4 2\n", encoding="utf-8")
    assert run("ingest-validate", str(path), "--jacobi") == (0, ["ok: k=10 entries=2"])


def test_maass_table(tmp_path):
    path = tmp_path / "jacobi.txt"
    lines = ["k=10"] + [f"{D} 1" for D in range(-12, 1) if D % 4 in (0, 1)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    code, outputs = run("maass-table", "--jacobi", str(path), "--max-alpha", "1", "--max-gamma", "3")
    assert code == 0
    assert outputs[0].splitlines() == ["N=1 k=10", "1,0,1 1", "1,0,2 1", "1,0,3 1", "1,1,1 1", "1,1,2 1", "1,1,3 1"]


def test_maass_table_missing_jacobi_values(tmp_path):
    path = tmp_path / "jacobi.txt"
    path.write_text("k=10\n-3 1\n", encoding="utf-8")
    code, _ = run("maass-table", "--jacobi", str(path), "--max-alpha", "1", "--max-gamma", "2")
    assert code == 3


def test_invariance_check():
    code, outputs = run("invariance-check", "--form", "81,44,6", "--p", "3", "--k", "20", "--shifts", "1,2")
    assert code == 0
    assert [line.split()[0] for line in outputs] == ["m=1", "m=2"]


def test_cli_config_validates_prime():
    with pytest.raises(InvalidPrime):
        CliConfig(command="classify", p=15)
    assert CliConfig(command="classify", p=5, N=2).context.twisted_level == 2 * 625


def test_classify_level_mismatch():
    assert run("classify", "--form", "81,44,6", "--p", "3", "--N", "2")[0] == 2


def test_twist_with_empty_table(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("N=1 k=20\n", encoding="utf-8")
    code, outputs = run("twist", "--form", "81,44,6", "--p", "3", "--k", "20", "--coeffs", str(empty))
    assert code == 3
    err = capsys.readouterr().err
    assert "missing: 1,0,18" in err
    assert "missing: 2,0,9" in err

    code, outputs = run(
        "twist", "--form", "81,44,6", "--p", "3", "--k", "20", "--coeffs", str(empty),
        "--assume-zero-outside-box", "--format", "json",
    )
    assert code == 0
    data = json.loads(outputs[0])
    assert data["value"] == "0"
    assert data["approximate"] is True
    assert data["assumed_zero"] == [[1, 0, 18], [2, 0, 9]]


def test_output_is_deterministic():
    argv = ("support", "--form", "81,9,7", "--p", "3", "--k", "20", "--symbolic")
    assert run(*argv) == run(*argv)


@pytest.mark.parametrize("command", ["support", "twist", "invariance-check"])
def test_zero_weight_is_rejected(command):
    code, outputs = run(command, "--form", "81,9,7", "--p", "3", "--k", "0")
    assert code == 2
    assert outputs == []


def test_twist_missing_coeffs_file(tmp_path, capsys):
    missing = str(tmp_path / "brak.txt")
    code, outputs = run("twist", "--form", "81,44,6", "--p", "3", "--k", "20", "--coeffs", missing)
    assert code == 2
    assert outputs == []
    assert "brak.txt" in capsys.readouterr().err


@pytest.mark.parametrize("extra", [[], ["--jacobi"]])
def test_ingest_validate_rejects_non_utf8(tmp_path, extra):
    path = tmp_path / "zle.txt"
    path.write_bytes(b"\xff\xfe")
    assert run("ingest-validate", str(path), *extra)[0] == 2


def test_maass_table_missing_jacobi_file(tmp_path):
    missing = str(tmp_path / "brak.txt")
    code, _ = run("maass-table", "--jacobi", missing, "--max-alpha", "2", "--max-gamma", "2")
    assert code == 2


def test_help_is_polish(capsys):
    assert "Skręcenia" in build_parser().format_help()
    assert run("twist", "--help")[0] == 0
    out = capsys.readouterr().out
    assert "plik tablicy a(S)" in out
    assert "waga k" in out
