import contextlib
import io
import json

import pytest

from vassiliev.cli import main


def run_cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        status = main(list(argv))
    return status, buf.getvalue()


def test_bounds_csv():
    status, out = run_cli("bounds", "--n-max", "9")
    assert status == 0
    lines = out.splitlines()
    assert lines[0].startswith("# vassiliev")
    assert lines[1] == "n,xtilde,primitive_bound,total_bound,half_factorial,cor53_holds"
    data = [l for l in lines[2:] if not l.startswith("#")]
    bounds = [int(l.split(",")[2]) for l in data]
    assert bounds == [1, 2, 4, 14, 54, 332, 2246]
    assert any("phi(n/d)" in l for l in lines)  # multiplicity footnote


def test_bounds_json_and_determinism():
    s1, out1 = run_cli("bounds", "--n-max", "5", "--format", "json")
    s2, out2 = run_cli("bounds", "--n-max", "5", "--format", "json")
    assert s1 == s2 == 0
    assert out1 == out2  # byte-identical reruns
    rows = [json.loads(l) for l in out1.splitlines() if l.startswith("{")]
    assert rows[0]["n"] == 3 and rows[0]["primitive_bound"] == 1


def test_bounds_usage_error():
    status, _ = run_cli("bounds", "--n-max", "2")
    assert status == 2


def test_dims():
    status, out = run_cli("dims", "--n", "4")
    assert status == 0
    row = json.loads(out.splitlines()[-1])
    assert row["primitive_dim"] == 2
    assert row["dim_mod_4t"] == 6


def test_ngons_list():
    status, out = run_cli("ngons", "--n", "3", "--list")
    assert status == 0
    assert out.splitlines()[1:] == ["1,2,3", "1,3,2"]


def test_reduce_with_verification():
    status, out = run_cli("reduce", "--sigma", "3,1,2", "--verify")
    assert status == 0
    payload = [json.loads(l) for l in out.splitlines()[1:]]
    assert payload[-1] == {"verified": True}
    assert isinstance(payload[1], list)  # the rewrite trace


def test_ribbon_gen_and_verify():
    status, out = run_cli("ribbon", "gen", "--sigma", "1,2")
    assert status == 0
    code_line, scheme_line = out.splitlines()[1:3]
    assert code_line.startswith("O") or code_line.startswith("U")
    assert json.loads(scheme_line)["T"]
    status, out = run_cli("ribbon", "verify", "--sigma", "1,2")
    assert status == 0
    checks = json.loads(out.splitlines()[-1])
    assert all(checks.values())


def test_ohyama():
    status, out = run_cli("ohyama", "--sigma", "1,2")
    assert status == 0
    lines = out.splitlines()
    assert lines[1:5] == ["+1 1122", "-1 1212", "-1 1212", "+1 1122"]
    assert json.loads(lines[-1]) == {"identity_mod_4t": True}


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--bogus"])
    assert exc.value.code == 2
