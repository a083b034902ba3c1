import json

import pytest

from gcdmoments import moments
from gcdmoments.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


def test_moment_example_queries(capsys):
    code, out = run(["moment", "-n", "12", "-w", "1", "--no-timestamp"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["value"] == "10/3" and payload["agree"] is True
    assert payload["results"] == {
        "brute": "10/3",
        "census": "10/3",
        "euler_product": "10/3",
        "totient": "10/3",
    }

    code, out = run(["moment", "-n", "6,4", "-w", "1", "--no-timestamp"], capsys)
    assert code == 0 and json.loads(out)["value"] == "35/6"

    code, out = run(["moment", "-n", "12", "-w", "2", "--no-timestamp"], capsys)
    assert code == 0 and json.loads(out)["value"] == "121/6"


def test_moment_json_round_trips(capsys):
    _, out = run(["moment", "-n", "6,4", "-w", "2", "--no-timestamp"], capsys)
    assert json.dumps(json.loads(out), indent=2, sort_keys=True) + "\n" == out


def test_reports_are_byte_identical_without_timestamp(capsys):
    _, first = run(["moment", "-n", "18,10", "-w", "2", "--no-timestamp"], capsys)
    _, second = run(["moment", "-n", "18,10", "-w", "2", "--no-timestamp"], capsys)
    assert first == second

    _, stamped = run(["moment", "-n", "18,10", "-w", "2"], capsys)
    assert "timestamp" in json.loads(stamped)["diagnostics"]
    assert "timestamp" not in json.loads(first)["diagnostics"]


def test_output_flag_writes_the_same_bytes(tmp_path, capsys):
    _, streamed = run(["moment", "-n", "12", "-w", "1", "--no-timestamp"], capsys)
    target = tmp_path / "report.json"
    code = main(["moment", "-n", "12", "-w", "1", "--no-timestamp", "--output", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8") == streamed


def test_moment_formats(capsys):
    _, out = run(["moment", "-n", "12", "-w", "1", "--format", "csv", "--no-timestamp"], capsys)
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert "brute,10/3" in lines and "agree,true" in lines

    _, out = run(["moment", "-n", "12", "-w", "1", "--format", "text", "--no-timestamp"], capsys)
    assert "brute: 10/3" in out.splitlines()


def test_moment_complex_exponent(capsys):
    code, out = run(["moment", "-n", "6,4", "-w", "0.5+0.25i", "--no-timestamp"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["agree"] is True
    assert set(payload["results"]) == {"brute", "euler_product"}
    assert set(payload["results"]["brute"]) == {"re", "im"}
    assert payload["diagnostics"]["max_abs_diff"] <= 1e-9


def test_mu_command(capsys):
    code, out = run(["mu", "-n", "4,2", "--no-timestamp"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["value"] == "7/2"
    assert payload["results"] == {"census": "7/2", "enumeration": "7/2"}

    code, out = run(["mu", "-n", "2,3", "-w", "2", "--no-timestamp"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["agree"] is True


def test_verify_command(capsys):
    code, out = run(
        ["verify", "--max-n", "60", "--grid", "25", "--samples", "6", "--no-timestamp"],
        capsys,
    )
    payload = json.loads(out)
    assert code == 0 and payload["agree"] is True
    assert {check["check"] for check in payload["checks"]} == {
        "totient_euler_brute",
        "gcd_totient_identity",
        "triple_agreement",
        "census_vs_enumeration",
    }
    assert all(check["failures"] == 0 for check in payload["checks"])


def test_fuzz_is_deterministic(capsys, monkeypatch):
    monkeypatch.setenv("GCDMOMENTS_WORKERS", "1")
    code, first = run(["fuzz", "--count", "8", "--seed", "7", "--no-timestamp"], capsys)
    _, second = run(["fuzz", "--count", "8", "--seed", "7", "--no-timestamp"], capsys)
    assert code == 0
    assert first == second
    payload = json.loads(first)
    assert payload["passed"] == 8 and payload["failed"] == 0
    assert payload["first_counterexample"] is None


def test_fuzz_detects_an_injected_route_bug(capsys, monkeypatch):
    original = moments.local_factor
    monkeypatch.setattr(moments, "local_factor", lambda profile, w: original(profile, w) + 1)
    monkeypatch.setenv("GCDMOMENTS_WORKERS", "1")
    code, out = run(["fuzz", "--count", "10", "--seed", "1", "--no-timestamp"], capsys)
    payload = json.loads(out)
    assert code == 2
    assert payload["failed"] > 0
    bad = payload["first_counterexample"]
    assert bad is not None and "euler_product" in bad["results"]


def test_worker_env_var_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("GCDMOMENTS_WORKERS", "zero")
    code = main(["fuzz", "--count", "2", "--seed", "0", "--no-timestamp"])
    capsys.readouterr()
    assert code == 1
    monkeypatch.setenv("GCDMOMENTS_WORKERS", "0")
    assert main(["fuzz", "--count", "2", "--seed", "0", "--no-timestamp"]) == 1
    capsys.readouterr()


def test_zeta_command(capsys):
    code, out = run(
        ["zeta", "-n", "12", "-r", "0", "-s", "3", "--terms", "100000", "--no-timestamp"],
        capsys,
    )
    payload = json.loads(out)
    assert code == 0 and payload["agree"] is True
    assert set(payload["results"]) == {"series", "euler_product", "hurwitz_sum"}
    assert payload["tail_bound"] > 0

    code, out = run(
        ["zeta", "-n", "6,4", "-r", "1", "-s", "4+0.5i", "--terms", "50000", "--no-timestamp"],
        capsys,
    )
    assert code == 0 and json.loads(out)["agree"] is True


def test_residue_command(capsys):
    code, out = run(["residue", "-n", "12", "--no-timestamp"], capsys)
    payload = json.loads(out)
    assert code == 0 and payload["agree"] is True
    assert payload["target"] == "10/3"
    assert payload["relative_error"] <= 1e-5


def test_bench_command(capsys):
    code, out = run(
        ["bench", "--sizes", "1,1000000", "--repeat", "2", "--no-timestamp"], capsys
    )
    payload = json.loads(out)
    assert code == 0
    rows = {(row["lcm"], row["route"]): row for row in payload["rows"]}
    assert set(rows) == {(n, route) for n in (1, 1000000) for route in ("brute", "euler_product", "census")}
    # the trivial group is instant on every route
    assert all(rows[(1, route)]["nanos"] < 10**6 for route in ("brute", "euler_product", "census"))
    # the closed form must beat plain enumeration at one million
    assert rows[(1000000, "euler_product")]["nanos"] < rows[(1000000, "brute")]["nanos"]
    # identical exact values across routes
    assert len({rows[(1000000, route)]["value"] for route in ("brute", "euler_product", "census")}) == 1


def test_usage_errors_exit_one(capsys):
    for argv in (
        ["moment", "-n", "0", "-w", "1"],
        ["moment", "-n", "12", "-w", "xyz"],
        ["moment", "-n", "12", "--nope"],
        ["mu", "-n", "4,2", "-w", "0"],
        ["nosuch"],
        [],
    ):
        assert main(argv) == 1, argv
        capsys.readouterr()


def test_resource_errors_exit_one(capsys):
    code = main(["moment", "-n", "9999889,9999901", "-w", "1"])
    captured = capsys.readouterr()
    assert code == 1 and captured.out == ""
