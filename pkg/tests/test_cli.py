import io
import json

import pytest

from skewlab import cli
from skewlab.services import suites
from skewlab.services.suites import CaseFailed

SMALL_CONFIG = """
[base]
family = zmod
prime = 2
exponent = 2

[layer]
var = y
precision = 2
"""


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "tower.cfg"
    path.write_text(SMALL_CONFIG)
    return str(path)


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def test_text_report(config_path):
    code, output = run(["--config", config_path, "--suite", "neumann"])
    assert code == cli.EXIT_OK
    lines = output.strip().splitlines()
    assert lines[0].startswith("neumann  geometric/N2  pass")
    assert lines[-1] == "neumann: 9 passed, 0 failed, 0 skipped"


def test_jsonl_report(config_path):
    code, output = run(["--config", config_path, "--suite", "limits", "--suite", "theta",
                        "--report", "jsonl", "--seed", "3"])
    assert code == cli.EXIT_OK
    records = [json.loads(line) for line in output.strip().splitlines()]
    assert {record["suite"] for record in records} == {"limits", "theta"}
    assert all(record["status"] == "pass" for record in records)
    assert all("witness" not in record for record in records)
    assert records[0]["case"] == "constant"


def test_eval(config_path):
    assert run(["--config", config_path, "--eval", "inv(1+y)"]) == (cli.EXIT_OK, "1 + y + O(j^2)\n")
    assert run(["--config", config_path, "--eval", "(1+y)^0"]) == (cli.EXIT_OK, "1 + O(j^2)\n")
    code, _ = run(["--config", config_path, "--eval", "inv(2)"])
    assert code == cli.EXIT_FAILURES


def test_failed_case_exit_code(config_path, monkeypatch):
    def always_fails(ctx):
        def check(ctx, rng):
            raise CaseFailed("constructed witness")
        return [("only", check)]

    monkeypatch.setitem(suites._REGISTRY, "always-fails", always_fails)
    code, output = run(["--config", config_path, "--suite", "always-fails"])
    assert code == cli.EXIT_FAILURES
    assert "witness: constructed witness" in output


def test_configuration_errors(config_path, tmp_path):
    assert run([])[0] == cli.EXIT_CONFIG
    assert run(["--config", str(tmp_path / "missing.cfg")])[0] == cli.EXIT_CONFIG
    assert run(["--config", config_path, "--suite", "no-such-suite"])[0] == cli.EXIT_CONFIG
    broken = tmp_path / "broken.cfg"
    broken.write_text("[base]\nfamily = zmod\nprime = 2\n")
    assert run(["--config", str(broken)])[0] == cli.EXIT_CONFIG
    invalid = tmp_path / "invalid.cfg"
    invalid.write_text("[base]\nfamily = truncpoly\nprime = 2\nlength = 3\n[layer]\nprecision = 2\n"
                       "delta = leibniz 1\n")
    assert run(["--config", str(invalid), "--eval", "x"])[0] == cli.EXIT_CONFIG


def test_list_suites():
    code, output = run(["--list-suites"])
    assert code == cli.EXIT_OK
    assert "lying-over" in output.splitlines()


def test_store_writes_the_ledger(config_path):
    from skewlab.database import SessionLocal
    from skewlab.services.run_store import list_runs

    code, _ = run(["--config", config_path, "--suite", "jt-lemma", "--store"])
    assert code == cli.EXIT_OK
    db = SessionLocal()
    try:
        runs = list_runs(db, suite="jt-lemma")
        assert runs
        assert runs[0].failed == 0
        assert {case.case for case in runs[0].cases} >= {"separated", "valuation"}
    finally:
        db.close()
