"""CLI surface: scalar specs, reports, exit codes, output modes."""

import io
import json

import pytest

from qbraid.cli import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_PASS,
    EXIT_USAGE,
    emit_matrix,
    parse_scalar_spec,
    run,
)
from qbraid.errors import ZeroQ
from qbraid.qcomb import symbolic_q
from qbraid.rep import s_matrix, sigma1_matrix
from qbraid.scalar import integer, q_symbol, set_degree_cap, zeta


def run_cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run_cli(*argv, "--json")
    reports = [json.loads(line) for line in text.strip().splitlines()]
    return code, reports


# --- scalar specs -----------------------------------------------------------------

def test_parse_scalar_spec_examples():
    assert parse_scalar_spec("q") == q_symbol()
    assert parse_scalar_spec("zeta(3)") == zeta(3)
    assert parse_scalar_spec("-1") == integer(-1)


def test_round_trip_of_emitted_scalars():
    ctx = symbolic_q()
    for n in range(5):
        for entry in sigma1_matrix(n, ctx).inverse().to_strs():
            for text in entry:
                assert str(parse_scalar_spec(text)) == text


# --- matrix emission ---------------------------------------------------------------

def test_emit_matrix_json_golden():
    ctx = symbolic_q()
    assert emit_matrix(s_matrix(2, ctx), "json") == \
        '[["0", "0", "1"], ["0", "-1", "0"], ["q^-1", "0", "0"]]'


def test_emit_matrix_pretty():
    from qbraid.linalg import ExactMatrix
    from qbraid.scalar import QQ
    eye = ExactMatrix.identity(2, QQ)
    assert emit_matrix(eye, "pretty") == "1  0\n0  1"


def test_emit_matrix_latex():
    ctx = symbolic_q()
    body = emit_matrix(sigma1_matrix(2, ctx), "latex")
    assert body.splitlines()[0] == "1 & 1+q & 1 \\\\"


# --- commands and exit codes -----------------------------------------------------------

def test_rep_verify_passes():
    code, reports = run_json("rep", "verify", "--n", "3", "--q", "q",
                             "--lambda-prime", "1,1,1,1")
    assert code == EXIT_PASS
    assert reports[0]["status"] == "pass"
    assert set(reports[0]) == {"command", "status", "payload", "timing_ms"}


def test_irr_commutant_reducible_point():
    code, reports = run_json("irr", "commutant", "--n", "2", "--q", "1",
                             "--lambda", "1,-1,1")
    assert code == EXIT_FAIL
    payload = reports[0]["payload"]
    assert payload["commutant_dim"] >= 2
    assert payload["verdict"] == "operator-reducible"


def test_identities_sweep():
    code, reports = run_json("identities", "--id", "bin1q", "--max-n", "4")
    assert code == EXIT_PASS
    assert [r["payload"]["n"] for r in reports] == [1, 2, 3, 4]
    assert all(r["payload"]["results"]["bin1q"]["passed"] for r in reports)


def test_triangle_row_output():
    code, reports = run_json("triangle", "--n", "2")
    assert code == EXIT_PASS
    assert reports[0]["payload"]["row"] == ["1", "1+q", "1"]


def test_rep_build_payload():
    code, reports = run_json("rep", "build", "--n", "1", "--q", "1",
                             "--lambda", "3,5")
    assert code == EXIT_PASS
    payload = reports[0]["payload"]
    assert payload["sigma1"] == [["3", "5"], ["0", "5"]]
    assert payload["sigma2"] == [["5", "0"], ["-3", "3"]]


def test_irr_equiv_inequivalent_exit():
    code, reports = run_json("irr", "equiv", "--n", "2", "--q", "1", "--q2", "2")
    assert code == EXIT_FAIL
    assert reports[0]["payload"]["dimension"] == 0


def test_irr_catalog():
    code, reports = run_json("irr", "catalog", "--n", "2")
    assert code == EXIT_PASS
    assert reports[0]["payload"]["entries"][0]["lambda"] == ["1", "-1", "1"]


def test_check_subcommands_pass():
    for argv in (["exp", "check", "--n", "3"],
                 ["sym", "check", "--n", "3"],
                 ["ferrand", "check", "--n", "2"],
                 ["tw", "check", "--n", "3"],
                 ["tw", "check", "--n", "5"],
                 ["sl2", "--word", "s1,s2,s1"]):
        code, _ = run_cli(*argv)
        assert code == EXIT_PASS, argv


def test_usage_errors():
    assert run(["nope"]) == EXIT_USAGE
    assert run(["rep", "verify"]) == EXIT_USAGE          # missing --n
    assert run(["rep", "verify", "--n", "1", "--q", "0"]) == EXIT_USAGE  # ZeroQ
    assert run(["rep", "verify", "--n", "1", "--q", "1",
                "--lambda", "1,1", "--lambda-prime", "1,1"]) == EXIT_USAGE
    assert run(["rep", "verify", "--n", "2", "--q", "1",
                "--lambda", "1,1"]) == EXIT_USAGE        # wrong count
    assert run(["sl2", "--word", "sigma"]) == EXIT_USAGE
    assert run(["rep", "verify", "--n", "1", "--q", "q%"]) == EXIT_USAGE


def test_cond_q_violation_is_a_failure():
    assert run(["rep", "verify", "--n", "2", "--q", "1",
                "--lambda", "1,1,2"]) == EXIT_FAIL


def test_degree_cap_exit_code():
    set_degree_cap(3)
    try:
        assert run(["triangle", "--n", "9"]) == 4
    finally:
        set_degree_cap(None)


def test_exit_codes_are_deterministic():
    first = run_cli("irr", "minors", "--n", "2", "--q", "1", "--lambda", "1,-1,1")
    second = run_cli("irr", "minors", "--n", "2", "--q", "1", "--lambda", "1,-1,1")
    assert first[0] == second[0] == EXIT_FAIL


def test_json_schema_stability():
    _, reports = run_json("irr", "minors", "--n", "2", "--q", "1",
                          "--lambda", "1,-1,1")
    payload = reports[0]["payload"]
    assert set(payload) == {"n", "q", "lambda", "per_r", "commutant_dim",
                            "burnside_dim", "verdict"}
    assert payload["per_r"][0]["exhausted"] is True
    assert payload["per_r"][1]["witness"] == [0]


def test_mixed_field_specs():
    code, reports = run_json("rep", "verify", "--n", "1", "--q", "1",
                             "--lambda", "1,zeta(6)")
    assert code == EXIT_PASS


def test_json_reports_match_golden_files():
    import pathlib
    golden_dir = pathlib.Path(__file__).parent / "golden"
    for argv, name in ((["irr", "minors", "--n", "2", "--q", "1",
                         "--lambda", "1,-1,1"], "irr_minors_suspected_n2.json"),
                       (["rep", "build", "--n", "2", "--q", "q",
                         "--lambda-prime", "1,1,1"], "rep_build_n2_symbolic.json")):
        _, reports = run_json(*argv)
        got = dict(reports[0])
        del got["timing_ms"]
        assert got == json.loads((golden_dir / name).read_text()), name


def test_irr_analysis_at_symbolic_q():
    code, reports = run_json("irr", "minors", "--n", "2", "--q", "q")
    assert code == EXIT_PASS
    payload = reports[0]["payload"]
    assert payload["per_r"][0]["minor"] == "2*q"
    assert payload["verdict"] == "operator-irreducible"
    assert payload["burnside_dim"] == 9


def test_main_reads_degree_cap_env(monkeypatch, capsys):
    from qbraid.cli import main
    monkeypatch.setenv("QBRAID_MAX_DEGREE", "3")
    monkeypatch.setattr("sys.argv", ["qbraid", "triangle", "--n", "9"])
    try:
        assert main() == 4
    finally:
        set_degree_cap(None)
    monkeypatch.setenv("QBRAID_MAX_DEGREE", "not-an-int")
    assert main() == EXIT_USAGE
