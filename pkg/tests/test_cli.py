import json

import pytest

from src import __version__, cli
from src.chartable import table_path
from src.cli import EXIT_ERROR, EXIT_MISMATCH, EXIT_OK, main
from src.errors import ConsistencyError


@pytest.fixture
def run(cache_dir, capsys):
    def _run(*argv):
        argv = list(argv)
        if argv and not argv[0].startswith("-"):
            argv += ["--workers", "1", "--cache", str(cache_dir)]
        code = main(argv)
        out, err = capsys.readouterr()
        return code, out, err

    return _run


def test_enumerate_count(run):
    code, out, _ = run("enumerate", "--k", "4", "--count-only")
    assert code == EXIT_OK
    assert out.strip() == "105"


def test_enumerate_json(run):
    code, out, _ = run("enumerate", "--k", "2", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["k"] == 2
    assert data["members"][0] == [[1, 2], [3, 4]]
    assert len(data["members"]) == 3


def test_classes_json(run):
    code, out, _ = run("classes", "--k", "4", "--json")
    assert code == EXIT_OK
    assert json.loads(out)[0] == {"class": [8], "degree": "48"}


def test_degrees_audit(run):
    code, out, _ = run("degrees", "--k", "6", "--audit")
    assert code == EXIT_OK
    assert "[2k-2,2]" in out


def test_scheme_check(run):
    code, out, _ = run("scheme-check", "--k", "3")
    assert code == EXIT_OK
    assert "commutativity" in out


@pytest.mark.parametrize("klass,subgroup", [("4,2,2", "6,2"), ("2k-4,2,2", "2k-2,2")])
def test_quotient_json(run, klass, subgroup):
    code, out, _ = run("quotient", "--k", "4", "--class", klass, "--subgroup", subgroup, "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["matrix"] == [[6, 6], [1, 11]]
    assert data["charpoly"] == "x**2 - 17*x + 60"
    assert {(tuple(e["module"]), e["value"]) for e in data["eigenvalues"]} == {((8,), "12"), ((6, 2), "5")}


def test_quotient_diagonals_reports_mismatch(run):
    code, out, _ = run("quotient", "--k", "4", "--diagonals")
    assert code == EXIT_OK
    assert "mismatch" in out


def test_quotient_needs_class_and_subgroup(run):
    code, _, err = run("quotient", "--k", "4", "--class", "4,2,2")
    assert code == EXIT_ERROR
    assert err.startswith("Invalid input")


def test_ekr_certificate(run):
    code, out, _ = run("ekr", "--t", "2", "--k", "4", "--certificate")
    assert code == EXIT_OK
    assert "tight" in out
    assert "a_[8] = 1/6" in out


def test_ekr_json(run):
    code, out, _ = run("ekr", "--t", "2", "--k", "4", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["weights"]["weights"] == {"[8]": "1/6", "[6,2]": "1/12"}


def test_ekr_audit_system(run):
    code, out, _ = run("ekr", "--t", "3", "--k", "6", "--audit-system")
    assert code == EXIT_OK
    assert "printed [2k-6,6] x [2k-2,2]: -16, grid -48" in out


def test_coclique(run):
    code, out, _ = run("coclique", "--t", "2", "--k", "4")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "alpha(N_2(8)) = 9"


@pytest.mark.parametrize("argv", [
    ("frobnicate",),
    ("enumerate",),
    ("ekr", "--t", "3", "--k", "4"),
    ("enumerate", "--k", "9"),
    ("quotient", "--k", "4", "--class", "4,4,4", "--subgroup", "6,2"),
    ("conjectures", "--which", "t3"),
])
def test_errors_exit_2(run, argv):
    code, _, _ = run(*argv)
    assert code == EXIT_ERROR


def test_resource_error_message(run):
    code, _, err = run("enumerate", "--k", "9")
    assert code == EXIT_ERROR
    assert err.startswith("Too large")


def test_unusable_cache_dir_is_an_input_error(tmp_path, capsys):
    blocker = tmp_path / "cache"
    blocker.write_text("", encoding="utf-8")
    code = main(["chartable", "--k", "3", "--workers", "1", "--cache", str(blocker)])
    assert code == EXIT_ERROR
    assert capsys.readouterr().err.startswith("Invalid input: cannot access")


def test_internal_check_failure_exits_1(run, monkeypatch):
    def broken(k, workers=1):
        raise ConsistencyError("Sym[6,2] cell 0 is not equitable at k=4")

    monkeypatch.setattr(cli, "assemble_table_from_quotients", broken)
    code, _, err = run("chartable", "--k", "4", "--source", "quotient")
    assert code == EXIT_MISMATCH
    assert err.startswith("Internal consistency check failed")


def test_conjectures_inequalities(run):
    code, out, _ = run("conjectures", "--which", "inequalities", "--k-range", "12..14")
    assert code == EXIT_OK
    assert "case-2-printed-poly" in out


def test_conjectures_module_scan_k6_reports_mismatch(run):
    code, out, _ = run("conjectures", "--which", "module-scan", "--k", "6")
    assert code == EXIT_MISMATCH
    assert "NOT below" in out


def test_conjectures_f_growth_reports_violations(run):
    code, out, _ = run("conjectures", "--which", "f-growth", "--k-range", "4..6")
    assert code == EXIT_MISMATCH
    assert "n=9" in out and "violated" in out


def test_conjectures_b_squared_json(run):
    code, out, _ = run("conjectures", "--which", "b-squared", "--k-range", "4..5", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [r["computed"] for r in data][0] == "14/9"


def test_conjectures_degree_patterns_use_the_cache(run, cache_dir):
    code, out, _ = run("conjectures", "--which", "degree-patterns", "--k-range", "3..4")
    assert code == EXIT_OK
    assert "FAIL" not in out
    assert table_path(cache_dir, 3).exists()
    assert table_path(cache_dir, 4).exists()


def test_json_output_is_deterministic(run):
    first = run("classes", "--k", "5", "--json")
    second = run("classes", "--k", "5", "--json")
    assert first == second


def test_version(run):
    code, out, _ = run("--version")
    assert code == EXIT_OK
    assert __version__ in out
