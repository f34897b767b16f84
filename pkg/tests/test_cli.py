import json

import pytest

from birfields.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    payload = json.loads(out) if out.strip() else {}
    return code, payload, err


def test_not_integrable_verdict_exit_zero(capsys):
    code, payload, _ = run_json(capsys, "integrable", "y^2+x d/dy")
    assert code == 0
    assert payload["verdict"] == "NotIntegrable"
    assert payload["delta"] == "-x"


def test_integrable_with_check(capsys):
    code, payload, _ = run_json(capsys, "integrable", "y^2 d/dy", "--check")
    assert code == 0 and payload["verdict"] == "Integrable"
    assert payload["normal_form"]["label"] == "T"
    assert payload["check"] == "witness pullback verified"


def test_sl2_complete_g0(capsys):
    code, payload, _ = run_json(capsys, "sl2-complete", "d/dy", "y d/dy", "--check")
    assert code == 0 and payload["result"] == "Completed"
    assert payload["Z"] == "(y^2) d/dy"
    assert payload["model"] == "g0"


def test_catalog_borel_g2(capsys):
    code, payload, _ = run_json(capsys, "catalog", "BorelG2")
    assert code == 0
    assert payload["derived_dims"][:4] == [8, 6, 4, 1]


def test_input_error_exit_one(capsys):
    code, out, err = run(capsys, "integrable", "d/dz")
    assert code == 1 and "error" in err


def test_vertical_precondition_is_input_error(capsys):
    code, out, err = run(capsys, "integrable", "x d/dx")
    assert code == 1


def test_bracket(capsys):
    code, payload, _ = run_json(capsys, "bracket", "x d/dy", "y^2 d/dy")
    assert code == 0 and payload["result"] == "(2*x*y) d/dy"


def test_algebra_not_closed_is_a_verdict(capsys):
    code, payload, _ = run_json(capsys, "algebra", "structure",
                                "x d/dy", "y^2 d/dy")
    assert code == 0
    assert payload["verdict"] == "NotClosed"
    assert payload["witness"] == "(2*x*y) d/dy"


def test_flow_check(capsys):
    code, payload, _ = run_json(capsys, "flow", "y^2 d/dy", "--check")
    assert code == 0 and payload["check"] == "flow laws verified"
    assert "y" in payload["flow"]


def test_extension_flag(capsys):
    code, payload, _ = run_json(capsys, "flow", "x d/dx + sqrt(2)*y d/dy",
                                "--extension", "d=2", "--check")
    assert code == 0 and payload["check"] == "flow laws verified"


def test_classify_p2_requires_surface_flag(capsys):
    code, payload, _ = run_json(capsys, "classify", "d/dy + y d/dx",
                                "--surface", "p2", "--check")
    assert code == 0 and payload["label"] == "N"


def test_pullback_example_1(capsys):
    code, payload, _ = run_json(capsys, "pullback", "(x+1) d/dx + d/dy",
                                "(y/(x+1), y/(x-1))", "--surface", "p2",
                                "--check")
    assert code == 0
    assert payload["check"] == "round-trip verified"


def test_membership(capsys):
    code, payload, _ = run_json(capsys, "membership", "y^2 d/dy", "AutFn",
                                "--surface", "f1")
    assert code == 0 and payload["verdict"] is False
    code, payload, _ = run_json(capsys, "membership", "x d/dy", "BorelBn",
                                "--surface", "f2")
    assert payload["verdict"] is True
    assert payload["coefficients"] == ["0", "0", "0", "1", "0", "0"]


def test_normalize_and_reduce(capsys):
    code, payload, _ = run_json(capsys, "normalize", "x d/dx + (y+x) d/dy",
                                "--surface", "f1", "--check")
    assert code == 0 and payload["label"] == "Rm(1)"
    code, payload, _ = run_json(capsys, "reduce", "x d/dx + (y+x) d/dy",
                                "--surface", "f1", "--check")
    assert code == 0 and payload["label"] == "J"


def test_witness_reparse_reverifies(capsys):
    # feeding a witness map back through the parser reproduces the verdict
    from birfields.parse import parse_field, parse_map
    from birfields.fields import pullback
    from birfields.surfaces import F0
    code, payload, _ = run_json(capsys, "integrable", "x d/dy")
    assert code == 0 and payload["verdict"] == "Integrable"
    mp = parse_map(payload["conjugating_map"], F0, F0)
    X = parse_field(payload["inputs"][0], F0)
    nf = parse_field(payload["normal_form"]["field"], F0)
    assert pullback(X, mp) == nf


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["integrable", "y^2 d/dy", "--json", "--out", str(target)])
    assert code == 0
    payload = json.loads(target.read_text())
    assert payload["verdict"] == "Integrable"


def test_hgamma_cli(capsys):
    code, payload, _ = run_json(capsys, "hgamma", "2", "1", "1", "0", "1")
    assert code == 0 and payload["gamma_prime"] == "3"
    assert payload["verified"] is True


def test_adapt_cli(capsys):
    code, payload, _ = run_json(capsys, "adapt", "x^2 d/dx - (x*y-2*y^2) d/dy",
                                "x^2*y/(x-y)", "--surface", "p2")
    assert code == 0 and payload["verdict"] == "Integrable"
    assert payload["delta"] == "0"


def test_classify2_cli(capsys):
    code, payload, _ = run_json(capsys, "classify2", "d/dy", "x d/dx + 3*y d/dy",
                                "--check")
    assert code == 0 and payload["label"] == "cgamma(3)"
    assert payload["check"] == "landing verified"
