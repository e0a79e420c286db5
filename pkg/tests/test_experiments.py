import json
import math

import numpy as np
import pytest

from greedy_rates import experiments as ex
from greedy_rates.banach import RD, STAR
from greedy_rates.bounds import dga_constant
from greedy_rates.dictionaries import Dictionary
from greedy_rates.hilbert import run_oga, run_wga
from greedy_rates.spaces import Element


def test_ratio_examples():
    f = Element([3.0, 4.0])
    assert ex.ratio(f, f, 7.0, 0.0) == 1.0
    f = Element([1.0, 1.0, 1.0, 1.0])
    r = Element([1.0, 1.0, 0.0, 0.0])
    assert ex.ratio(f, r, 4.0, 1.0) == pytest.approx(math.sqrt(2) / 4, rel=1e-15)
    # alpha = 1 is ||f_m|| / a1
    assert ex.ratio(f, r, 4.0, 1.0) == pytest.approx(math.sqrt(2) / 4.0)
    with pytest.raises(ValueError):
        ex.ratio(Element([0.0]), Element([0.0]), 1.0, 0.5)
    with pytest.raises(ValueError):
        ex.ratio(f, r, 1.0, 0.5)


def test_ratio_point_contract():
    assert ex.RatioPoint(1, 0.5, 0.3, 0.4, 0.2).passed
    assert not ex.RatioPoint(1, 0.5, 0.5, 0.4, 0.2).passed
    assert not ex.RatioPoint(1, 0.5, 0.1, 0.4, 0.2).passed
    assert ex.RatioPoint(1, 0.5, 0.4 + 5e-10, 0.4).passed
    assert ex.RatioPoint(1, 0.5, 9.0, 0.4, asserted=False).passed


def test_construction_size():
    assert ex.construction_I_size(0.25, 4) == 3
    assert ex.construction_I_size(0.01, 10) == 1
    # 2 * 0.05 * 10 is 1 exactly, not 0.999...
    assert ex.construction_I_size(0.05, 10) == 2
    assert ex.construction_I_size(0.1, 1000) == 201


def test_construction_I_example():
    rep = ex.construction_I(0.25, 4)
    assert rep.passed
    assert rep.parameters["m_prime"] == 3
    zero = [p for p in rep.points if p.alpha == 0.0][0]
    assert zero.lower == 0.25
    assert zero.empirical == pytest.approx(math.sqrt(1.44140625) / math.sqrt(3), rel=1e-15)
    one = [p for p in rep.points if p.alpha == 1.0][0]
    assert one.empirical >= math.sqrt(3) / 4 / 3
    with pytest.raises(ValueError):
        ex.construction_I(0.3, 4)


def test_construction_I_degenerate():
    rep = ex.construction_I(0.01, 10)
    assert rep.parameters["m_prime"] == 1 and rep.passed


def test_construction_II_examples():
    rep = ex.construction_II(1.0, 2)
    assert rep.passed
    one = [p for p in rep.points if p.alpha == 1.0][0]
    assert one.empirical == pytest.approx(math.sqrt(2) / 4, rel=1e-15)
    assert one.lower == pytest.approx(0.35355, abs=1e-5)
    assert rep.checks["equality_defect"].value <= 1e-12

    tr = run_wga(Element(np.ones(6)), Dictionary.standard_basis(6), 3, 1.0, 0.5)
    assert sorted(tr.residual.coeffs) == [0.5, 0.5, 0.5, 1.0, 1.0, 1.0]
    assert np.linalg.norm(tr.residual.coeffs) == pytest.approx(math.sqrt(3.75), rel=1e-15)
    rep = ex.construction_II(0.5, 3)
    zero = [p for p in rep.points if p.alpha == 0.0][0]
    assert zero.empirical >= 2 ** -0.5 and rep.passed
    with pytest.raises(ValueError):
        ex.construction_II(0.25, 3)


def test_construction_II_bracket():
    # lower bound from the construction and upper bound from the WGA rate
    for m in (2, 8, 64):
        rep = ex.construction_II(1.0, m, alphas=(0.0, 0.1, 0.2, 1 / 3))
        for p in rep.points:
            assert p.lower is not None and p.upper is not None
            assert p.lower - 1e-9 <= p.empirical <= p.upper + 1e-9


def test_wga_upper_small():
    rep = ex.wga_upper_sweep(1.0, 1.0, (4, 8), 20, 10, seed=3)
    assert rep.passed
    assert {p.alpha for p in rep.points} >= {1 / 3}
    # the m = 0 point is ||f|| / a1 to the alpha, never above 1
    assert all(p.empirical <= 1 + 1e-12 for p in rep.points if p.m == 0)


def test_wga_upper_uniform_input():
    n = 6
    f = Element(np.ones(n) / n)
    tr = run_wga(f, Dictionary.standard_basis(n), 20)
    for m, nm in enumerate(tr.residual_norms):
        assert nm / (np.linalg.norm(f.coeffs) ** (2 / 3) * 1.0) <= (1 + m) ** (-1 / 6) + 1e-9


def test_oga_examples():
    f = Element([0.5, 0.5])
    tr = run_oga(f, Dictionary.standard_basis(2), 1)
    assert tr.residual_norms[1] == pytest.approx(0.5)
    rep = ex.oga_upper_sweep((4, 8), 8, 10, seed=1)
    assert rep.passed


def test_dga_examples():
    p = 3.0
    gamma = 1 / 1.5
    # (1 - b) (b / (2 gamma))^(1/(q-1)) with b = 1/2, q = 3/2
    c = 0.5 * (0.5 / (2 * gamma)) ** 2
    assert c == 0.0703125
    assert dga_constant(0.5, 1.5, gamma) == pytest.approx(c, rel=1e-15)
    assert 1.5 / 0.5 == p
    assert dga_constant(0.3, 2.0, 0.5) == pytest.approx(0.7 * 0.3, rel=1e-15)
    for variant in (RD, STAR):
        rep = ex.dga_upper_sweep(1.5, None, 1.0, 0.5, variant, (4, 8), 30, 5, seed=2)
        assert rep.passed
        assert all(p.empirical <= 1 + 1e-12 for p in rep.points if p.m == 0)
    rep = ex.dga_upper_sweep(2.0, 0.5, 1.0, 0.5, RD, (4,), 10, 3)
    assert "hilbert_form_defect" in rep.checks and rep.passed
    with pytest.raises(ValueError):
        ex.dga_upper_sweep(3.0, None, 1.0, 0.5, RD, (4,), 10, 3)


def test_lq_lower_examples():
    rep = ex.lq_lower_bound_experiment(2.0, [8])
    one = [p for p in rep.points if p.alpha == 1.0][0]
    assert one.empirical == pytest.approx(math.sqrt(8) / 16, rel=1e-15)
    assert one.empirical == pytest.approx(0.17678, abs=1e-5)
    assert rep.passed
    for q in (1.25, 1.5):
        rep = ex.lq_lower_bound_experiment(q, [1, 5])
        zero = [p for p in rep.points if p.alpha == 0.0]
        for p in zero:
            assert p.empirical == pytest.approx(2 ** (-1 / q), rel=1e-12)
        assert rep.passed
    with pytest.raises(ValueError):
        ex.lq_lower_bound_experiment(2.5, [1])


def test_property_suites_small():
    assert ex.hl1_property(500, seed=1).passed
    assert ex.concavity_property(500, seed=1).passed
    assert ex.monotone_upper_experiment(3.0, 20, max_dim=16).passed
    assert ex.trig_demo((2,), (3.0,)).passed


def test_report_roundtrip_and_csv():
    rep = ex.construction_II(0.5, 3)
    d = json.loads(json.dumps(rep.to_dict()))
    back = ex.ExperimentReport.from_dict(d)
    assert back.to_dict() == rep.to_dict()
    text = ex.reports_to_csv([rep])
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(ex.REPORT_COLUMNS)
    assert len(lines) == 1 + len(rep.points)
    row = lines[1].split(",")
    assert float(row[3]) == rep.points[0].empirical
    assert ex.reports_to_csv([]) == ",".join(ex.REPORT_COLUMNS) + "\n"
    assert "runtime" not in rep.to_dict() and "runtime" in rep.to_dict(timing=True)


def test_failures_listed():
    rep = ex.ExperimentReport("x", {}, [ex.RatioPoint(1, 0.0, 2.0, 1.0)],
                              {"c": ex.Check(1.0, 0.0)})
    assert not rep.passed
    assert len(rep.failures()) == 2
    assert not ex.Check(float("nan"), 1.0).passed


def test_run_all_deterministic():
    cfg = ex.SuiteConfig(seed=5, suite=("wga_upper", "dga_upper", "hl1_property"), scale=0.05)
    a = ex.run_all(cfg)
    b = ex.run_all(cfg)
    c = ex.run_all(ex.SuiteConfig(seed=5, suite=cfg.suite, threads=3, scale=0.05))
    dump = [json.dumps([r.to_dict() for r in x], sort_keys=True) for x in (a, b, c)]
    assert dump[0] == dump[1] == dump[2]
    assert all(r.passed for r in a)
    with pytest.raises(ValueError):
        ex.run_all(ex.SuiteConfig(suite=("nope",)))
