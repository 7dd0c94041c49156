import io
import json

import pytest

from overpartlab import cli
from overpartlab.hyperseries import parity_overpartition_products


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


PARAMS = ["--d", "2", "--k", "2", "--a", "1", "--e", "2", "--f", "2"]


def test_verify_main_json():
    code, text = run("verify", "--check", "main", *PARAMS, "--order", "30", "--output", "json")
    assert code == 0
    reports = json.loads(text)
    assert [r["check"] for r in reports] == ["main_theorem_u", "main_theorem_ubar"]
    assert all(r["status"] == "pass" for r in reports)


def test_output_format_does_not_change_exit_code():
    args = ["verify", "--check", "oracle_vs_claimed_series", "--d", "2", "--k", "1", "--a", "0", "--e", "1", "--f", "1",
            "--order", "10"]
    assert run(*args, "--output", "json")[0] == run(*args, "--output", "human")[0] == 1


def test_invalid_parameters_exit_2(capsys):
    code, _ = run("verify", "--d", "0", "--k", "1", "--a", "0", "--e", "1", "--f", "1")
    assert code == 2
    assert "d >= 1" in capsys.readouterr().err


def test_missing_flags_exit_2():
    assert run("verify", "--d", "2")[0] == 2


def test_enumerate_weight_zero():
    code, text = run("enumerate", "--tag", "U", *PARAMS, "--weight", "0")
    assert code == 0
    assert text.splitlines() == ["()", "count 1"]


def test_enumerate_unfiltered_has_four_four_one():
    _, text = run("enumerate", "--tag", "all", "--weight", "9")
    lines = set(text.splitlines())
    assert {"4+4+1", "4~+4+1", "4+4+1~", "4~+4+1~"} <= lines


def test_enumerate_count_matches_product():
    _, text = run("enumerate", "--tag", "U", *PARAMS, "--weight", "8")
    expected = parity_overpartition_products(3, 2, 8)["even"].q_coefficients(8)[8]
    assert text.splitlines()[-1] == f"count {expected}"


def test_series_dump_rows():
    _, text = run("series", "--which", "u_product", "--d", "1", "--k", "2", "--a", "1", "--e", "1", "--f", "1",
                  "--order", "10")
    rows = text.splitlines()
    assert len(rows) == 11
    assert rows[0] == "0,0,1"


@pytest.mark.parametrize("which", cli.SERIES_CHOICES)
def test_series_order_zero(which):
    _, text = run("series", "--which", which, *PARAMS, "--order", "0")
    assert text == "0,0,1\n"


def test_two_selectors_agree_when_identity_holds():
    p = ["--d", "3", "--k", "1", "--a", "1", "--e", "3", "--f", "2", "--order", "12"]
    _, a = run("series", "--which", "u_claimed", *p)
    _, b = run("series", "--which", "gen_fun", "--tag", "U", *p)
    assert a == b
    _, c = run("series", "--which", "u_claimed", *p, "--at-x-one")
    _, d = run("series", "--which", "u_product", *p)
    assert c == d


def test_bijection_round_trip_cli():
    p = ["--d", "2", "--k", "2", "--a", "1", "--e", "2", "--f", "1"]
    code, text = run("bijection", *p, "--op", "3+1~+1+1+1")
    assert code == 0
    img, case = text.splitlines()
    code, back = run("bijection", *p, "--op", img, "--inverse", "--case", case.split()[1])
    assert back.strip() == "3+1~+1+1+1"


def test_bijection_precondition_exit_2():
    code, _ = run("bijection", *PARAMS, "--op", "5+1")
    assert code == 2


def test_grid_subcommand():
    code, text = run("grid", "--criterion", "1")
    assert code == 0
    assert len(json.loads(text)) == 5


def test_order_env_override(monkeypatch):
    monkeypatch.setenv(cli.ORDER_ENV, "3")
    _, text = run("series", "--which", "u_product", *PARAMS)
    assert max(int(r.split(",")[1]) for r in text.splitlines()) <= 3
