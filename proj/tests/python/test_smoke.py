import json
import math
import os
import random
import subprocess

import jsonschema
import pytest

import pocsel

DATA = os.environ.get("POCSEL_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))
FIXTURE = os.path.join(DATA, "table1_synthetic.csv")
A = pocsel.AssumptionSet


def table_moments():
    return pocsel.ObservedMoments(p_y1_s1d1=205 / 537, p_y0_s1d0=334 / 483, p_s1_d1=537 / 888, p_s1_d0=483 / 881)


def test_bounds_match_closed_form():
    m = table_moments()
    alpha = m.p_s1_d0 / m.p_s1_d1
    p1, q0 = m.p_y1_s1d1, m.p_y0_s1d0
    b3 = pocsel.compute_bounds(m, A.A1_3)
    assert b3.lb == pytest.approx(max(((p1 - (1 - alpha)) / alpha + q0 - 1) / q0, 0), abs=1e-12)
    assert b3.ub == pytest.approx(min(p1 / (alpha * q0), 1), abs=1e-12)
    b5 = pocsel.compute_bounds(m, A.A1_5)
    assert b5.lb == pytest.approx(max((p1 + q0 - 1) / q0, 0), abs=1e-12)
    assert pocsel.trim_ratio(m) == pytest.approx(alpha)


def test_nested_sets_shrink():
    rng = random.Random(7)
    for _ in range(200):
        s1 = rng.uniform(0.2, 1)
        m = pocsel.ObservedMoments(rng.uniform(0.3, 1), rng.uniform(0.3, 1), s1, rng.uniform(0.1, s1))
        b = [pocsel.compute_bounds(m, a) for a in (A.A1_3, A.A1_4, A.A1_5)]
        assert b[1].lb >= b[0].lb - 1e-12 and b[1].ub <= b[0].ub + 1e-12
        assert b[2].lb >= b[1].lb - 1e-12 and b[2].ub <= b[1].ub + 1e-12


@pytest.mark.parametrize("a", [A.A1_3, A.A1_4, A.A1_5])
def test_oracle_agrees_with_closed_form(a):
    m = table_moments()
    lo, hi = pocsel.sharp_envelope_oracle(m, a)
    b = pocsel.compute_bounds(m, a)
    assert lo == pytest.approx(b.lb, abs=1e-9)
    assert hi == pytest.approx(b.ub, abs=1e-9)


@pytest.mark.parametrize("which", ["lower", "upper"])
def test_bound_distribution_attains_endpoint(which):
    m = table_moments()
    j = pocsel.construct_bound_distribution(m, A.A1_5, which)
    assert sum(j.pi) == pytest.approx(1.0)
    checks = pocsel.check_assumptions(j)
    assert checks["a4"] and checks["a5"]
    b = pocsel.compute_bounds(m, A.A1_5)
    assert pocsel.theta_oo(j) == pytest.approx(b.lb if which == "lower" else b.ub, abs=1e-10)
    back = pocsel.observed_from_latent(j)
    assert back.p_y1_s1d1 == pytest.approx(m.p_y1_s1d1, abs=1e-12)
    assert back.p_s1_d0 == pytest.approx(m.p_s1_d0, abs=1e-12)


def test_dataset_and_bootstrap():
    ds = pocsel.load_csv(FIXTURE, stratum="course")
    assert len(ds) == 1769
    assert ds.strata == [f"course_{i}" for i in range(1, 7)]
    m = pocsel.estimate_moments(ds)
    assert m.p_y1_s1d1 == pytest.approx(205 / 537)
    r1 = pocsel.bootstrap_bounds(ds, A.A1_5, reps=200, seed=3, threads=1)
    r4 = pocsel.bootstrap_bounds(ds, A.A1_5, reps=200, seed=3, threads=4)
    assert r1 == r4
    assert r1["ci_lb"]["lower"] <= r1["point"].lb <= r1["ci_lb"]["upper"]
    tests = pocsel.test_restrictions(ds, A.A1_5)
    assert tests["selection"]["p_value"] > 0.05 and tests["outcome"] is not None
    strat = pocsel.estimate_stratified(ds, A.A1_3)
    assert sorted(strat["per_stratum"]) == ds.strata
    assert sum(v["weight"] for v in strat["per_stratum"].values()) == pytest.approx(1.0)


def test_dataset_from_columns_rejects_bad_input():
    ds = pocsel.Dataset(d=[1, 1, 0, 0], s=[1, 0, 1, 1], y=[1, None, 0, 1])
    assert len(ds) == 4
    with pytest.raises(pocsel.PocselError):
        pocsel.Dataset(d=[1], s=[0], y=[1])
    with pytest.raises(ValueError):
        pocsel.Dataset(d=[1, 0], s=[0], y=[None])


def test_csv_errors_are_typed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("y,s,d\n1,1,2\n")
    with pytest.raises(pocsel.ParseError, match="non-binary"):
        pocsel.load_csv(str(bad))
    with pytest.raises(pocsel.ConfigError):
        pocsel.load_csv(FIXTURE, y="outcome")


def test_report_matches_schema_and_cli(tmp_path):
    svg = tmp_path / "bars.svg"
    rep = pocsel.run_analysis(FIXTURE, stratum="course", reps=100, seed=5, plot_out=str(svg))
    jsonschema.validate(rep, pocsel.report_schema())
    assert rep["provenance"]["tool_version"] == pocsel.__version__
    assert svg.exists() and (tmp_path / "bars.plot.json").exists()
    cli = os.environ.get("POCSEL_CLI_PATH")
    if cli:
        out = subprocess.run(
            [cli, "--input", FIXTURE, "--stratum-col", "course", "--reps", "100", "--seed", "5"],
            check=True, capture_output=True, text=True,
        ).stdout
        assert json.loads(out) == rep


def test_report_fields_are_finite():
    rep = pocsel.run_analysis(FIXTURE, reps=50)
    for row in rep["unconditional"]:
        for k in ("lb", "ub"):
            assert math.isfinite(row["bounds"][k])
        assert row["ci_lb"][0] <= row["ci_lb"][1]
