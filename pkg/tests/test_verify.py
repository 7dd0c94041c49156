import json

import pytest

from overpartlab import verify as vf
from overpartlab.combinatorics import ParameterSet
from overpartlab.verify import CheckSpec, Mutation, VerificationReport

P = ParameterSet(2, 2, 1, 2, 2)

SAMPLE = {
    "main_theorem_u": (ParameterSet(3, 2, 1, 3, 2), 20, 15),
    "main_theorem_ubar": (ParameterSet(3, 2, 1, 3, 2), 20, 15),
    "lemma_adjustment": (P, 10, None),
    "functional_equations": (ParameterSet(2, 2, 1, 2, 1), 12, 12),
    "initial_conditions": (P, 12, None),
    "term_identities": (P, 15, None),
    "corollary_identities": (ParameterSet(2, 2, 1, 2, 1), 15, None),
    "euler_jtp": (ParameterSet(3, 1, 0, 3, 3), 30, None),
    "regression_d1_gordon": (ParameterSet(1, 2, 1, 1, 1), 20, None),
    "regression_d2_ssy": (ParameterSet(2, 2, 1, 2, 2), 20, None),
    "bijection_roundtrip": (ParameterSet(2, 1, 1, 2, 1), 12, 12),
    "oracle_vs_claimed_series": (P, 12, None),
}


def spec_for(name, **kw):
    p, order, w = SAMPLE[name]
    return CheckSpec(name, p, order, w, **kw)


@pytest.mark.parametrize("name", vf.CHECK_NAMES)
def test_sample_checks_pass(name):
    r = vf.run_check(spec_for(name), raise_errors=True)
    assert r.status == "pass", r.human()
    assert r.first_mismatch is None and r.comparisons > 0


@pytest.mark.parametrize("name", vf.CHECK_NAMES)
@pytest.mark.parametrize("side", ["expected", "actual"])
def test_every_comparison_detects_a_mutation(name, side):
    clean = vf.run_check(spec_for(name))
    for idx in range(clean.comparisons):
        r = vf.run_check(spec_for(name, mutation=Mutation(idx, side, 0, 1, 3)))
        assert r.status == "fail"
        m = r.first_mismatch
        assert (m["x_deg"], m["q_deg"]) == (0, 1)
        assert m["expected"] - m["actual"] == (3 if side == "expected" else -3)


def test_corrupted_entry_fails_alone():
    grid = [spec_for("euler_jtp"), spec_for("lemma_adjustment", mutation=Mutation(1)), spec_for("initial_conditions")]
    reports = vf.run_all(grid)
    assert [r.status for r in reports] == ["pass", "fail", "pass"]
    assert reports[1].first_mismatch is not None
    assert vf.exit_code(reports) == vf.EXIT_FAIL


def test_empty_grid():
    assert vf.run_all([]) == []
    assert vf.exit_code([]) == vf.EXIT_OK


def test_parallel_run_keeps_order():
    grid = [spec_for(n) for n in ("euler_jtp", "lemma_adjustment", "initial_conditions", "regression_d1_gordon")]
    serial = [r.status for r in vf.run_all(grid)]
    par = vf.run_all(grid, jobs=2)
    assert [r.spec for r in par] == grid
    assert [r.status for r in par] == serial


def test_regime_violation_is_skipped():
    r = vf.run_check(CheckSpec("main_theorem_u", ParameterSet(3, 1, 0, 1, 1), 10))
    assert r.status == "skipped" and "e = d" in r.notes
    assert vf.exit_code([r]) == vf.EXIT_OK


def test_json_round_trip():
    r = vf.run_check(spec_for("lemma_adjustment", mutation=Mutation(0)))
    text = vf.reports_to_json([r])
    back = vf.reports_from_json(text)[0]
    assert back == r
    obj = json.loads(text)[0]
    for key in ("check", "params", "order", "status", "first_mismatch", "elapsed_ms", "notes"):
        assert key in obj
    assert set(obj["params"]) == set("dkaef")


def test_grid_json_round_trip(tmp_path):
    grid = vf.grid_for(1) + vf.grid_for(10)
    path = tmp_path / "grid.json"
    path.write_text(vf.grid_to_json(grid))
    assert vf.load_grid(str(path)) == grid


def test_default_grid_covers_every_check():
    names = {s.check_name for s in vf.default_grid()}
    assert names == set(vf.CHECK_NAMES) - {"main"}


def test_default_grid_has_f_not_e_for_d_two():
    assert any(s.params.d == 2 and s.params.f != s.params.e for s in vf.default_grid())


def test_pass_means_nothing_differed():
    r = vf.run_check(spec_for("regression_d2_ssy"))
    assert r.passed and r.first_mismatch is None


def test_barred_reading_is_recorded():
    r = vf.run_check(spec_for("main_theorem_ubar"))
    assert "barred" in r.notes


def test_half_modulus_failure_is_explained():
    r = vf.run_check(CheckSpec("oracle_vs_claimed_series", ParameterSet(2, 1, 0, 1, 1), 15))
    assert r.status == "fail"
    assert r.first_mismatch == {"x_deg": 3, "q_deg": 5, "expected": 1, "actual": 0,
                                "label": "U: enumeration vs claimed series"}
    assert "second index e-d=-1 is not zero" in r.notes


def test_invalid_check_name():
    with pytest.raises(ValueError):
        CheckSpec("nope", P)


def test_report_dict_has_no_mismatch_on_pass():
    r = VerificationReport(spec_for("euler_jtp"), "pass")
    assert r.to_dict()["first_mismatch"] is None
