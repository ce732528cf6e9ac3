import subprocess
import sys

import pytest

from ncforms.cli import main
from ncforms.notation import ParseError
from ncforms.problem import parse_problem


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_dual_passes(capsys, problems_dir):
    code, out, _ = run(capsys, "validate", str(problems_dir / "dual_numbers.ncf"))
    assert code == 0
    assert "result: PASS" in out and "FAIL" not in out.replace("0 FAIL", "")


def test_validate_broken_names_triple(capsys, problems_dir):
    code, out, _ = run(capsys, "validate", str(problems_dir / "broken_associativity.ncf"), "--format", "machine")
    assert code == 1
    assert out.startswith("CHECK algebra.associativity FAIL")
    assert "triple=(0, 0, 1)" in out


def test_empty_file_is_parse_error(capsys, tmp_path):
    f = tmp_path / "empty.ncf"
    f.write_text("")
    code, out, err = run(capsys, "validate", str(f))
    assert code == 2 and out == ""
    assert err.startswith("error: line 1, column 1")


def test_parse_error_location():
    text = "[algebra]\nbuiltin = dual_numbers\n\n[forms]\nw = eps d(zeta)\n"
    with pytest.raises(ParseError) as err:
        parse_problem(text)
    assert err.value.line == 5
    assert err.value.column == 11


@pytest.mark.parametrize("expr, value", [
    ("d(eps)", "d(eps)"),
    ("mul(d(eps), eps)", "-1 * eps d(eps)"),
    ("j(K)(v)", "0"),
    ("lie(K)(eps)", "eps d(eps)"),
    ("w", "eps d(eps)"),
])
def test_compute_dual(capsys, problems_dir, expr, value):
    code, out, _ = run(capsys, "compute", str(problems_dir / "dual_numbers.ncf"), expr)
    assert code == 0
    assert f"value: {value}\n" in out


def test_compute_fn_bracket_qq(capsys, problems_dir):
    code, out, _ = run(capsys, "compute", str(problems_dir / "product_QQ.ncf"), "fnbracket(P,P)", "--format", "machine")
    assert code == 0
    assert out == "VALUE hom 2 d(p) -> 0\nCOORDS 0 0\n"


def test_compute_unknown_name(capsys, problems_dir):
    code, _, err = run(capsys, "compute", str(problems_dir / "dual_numbers.ncf"), "j(Q)(v)")
    assert code == 2 and err.startswith("error:")


def test_check_geometry_infeasible_is_pass(capsys, problems_dir):
    code, out, _ = run(capsys, "check", str(problems_dir / "truncated_poly3.ncf"), "geometry")
    assert code == 0
    assert "INFEASIBLE" in out and "result: PASS" in out


def test_check_workers_match_serial(capsys, problems_dir):
    f = str(problems_dir / "product_QQ.ncf")
    serial = run(capsys, "check", f, "all", "--format", "machine")
    parallel = run(capsys, "check", f, "all", "--format", "machine", "--workers", "2")
    assert serial == parallel and serial[0] == 0


def test_bad_flags(capsys, problems_dir):
    code, _, _ = run(capsys, "check", str(problems_dir / "dual_numbers.ncf"), "all", "--degree", "-1")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["check", str(problems_dir / "dual_numbers.ncf"), "nope"])
    assert exc.value.code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", str(tmp_path / "absent.ncf"))
    assert code == 2 and "cannot read" in err


def test_module_entry_point(problems_dir):
    proc = subprocess.run([sys.executable, "-m", "ncforms", "validate", str(problems_dir / "product_QQ.ncf"),
                           "--format", "machine"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert all(line.startswith("CHECK ") for line in proc.stdout.splitlines())


def test_explicit_hom_literal(problems_dir):
    from ncforms.derivations import FormHom

    prob = parse_problem((problems_dir / "product_QQ.ncf").read_text())
    P, Q = prob.homs["P"], prob.homs["Q"]
    assert Q == FormHom.identity(prob.algebra) - P
    assert prob.projections == ["P", "Q"]


def test_matrix_alias_label(problems_dir):
    from ncforms.notation import parse_form

    prob = parse_problem((problems_dir / "matrix2.ncf").read_text())
    A = prob.algebra
    # E11 = 1 - E22 after moving the unit to index 0
    assert prob.forms["w"] == parse_form(A, "d(E12) + -1 * E22 d(E12)")
