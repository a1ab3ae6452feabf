import pytest

from ecsrgame import standards as st
from ecsrgame import verifier as v
from ecsrgame.model import ModelParams

SMALL = v.Grid(alpha=(0.3, 0.5, 0.9), gamma=(0.2, 0.5, 0.95), d=(0.5, 1.0, 2.0))
CANONICAL = v.Grid(alpha=(0.5,), gamma=(0.5,), d=(1.0,))


def test_frange_and_parse():
    assert v.frange(0.1, 0.9, 0.4) == (0.1, 0.5, 0.9)
    assert v.parse_range("0.1:0.9:0.4") == (0.1, 0.5, 0.9)
    assert v.parse_range("0.3") == (0.3,)
    with pytest.raises(ValueError, match="malformed range"):
        v.parse_range("0.1:0.9")
    with pytest.raises(ValueError):
        v.parse_range("a:b:c")


def test_default_grid_shape():
    g = v.default_grid()
    assert len(g) == 9 * 19 * 30 == len(g.points())
    pts = g.points()
    keys = [(p.alpha, p.gamma, p.d) for p in pts]
    assert keys == sorted(keys)


def test_empty_grid():
    with pytest.raises(ValueError, match="empty grid"):
        v.full_report([])


def test_unknown_claim():
    with pytest.raises(ValueError, match="unknown claim"):
        v.verify_claim("prop99", CANONICAL)


def test_quantity_dominance_claim_holds():
    r = v.verify_claim("lemma2", SMALL)
    assert r.status == v.HOLDS_EVERYWHERE
    assert r.pass_fraction == 1.0


def test_optimal_ranking_claim_at_canonical_point():
    r = v.verify_claim("prop3", CANONICAL)
    assert r.status == v.HOLDS_EVERYWHERE and r.pass_count == 1


def test_pq_quantity_order_holds():
    assert v.verify_claim("pq_quantity_order", SMALL).status == v.HOLDS_EVERYWHERE


def test_anti_coordination_counterexamples_recheck():
    r = v.verify_claim("prop5b", SMALL)
    assert r.status == v.FAILS_EVERYWHERE
    assert r.counterexamples
    assert r.failure_box is not None
    for ex in r.counterexamples:
        assert v.recheck_counterexample(r, ex)


def test_threshold_audit_modes():
    pp_qq = v.verify_claim("threshold_audit_pp_qq", SMALL)
    pq = v.verify_claim("threshold_audit_pq", SMALL)
    assert pp_qq.status == v.HOLDS_EVERYWHERE
    assert pq.status == v.FAILS_EVERYWHERE


def test_derived_mode_reports_disagreement():
    r = v.verify_claim("prop4", CANONICAL, st.DERIVED)
    assert r.status == v.FAILS_EVERYWHERE


def test_conditioned_claim_outside_counts():
    g = v.Grid(alpha=(0.5,), gamma=(0.5,), d=(0.01, 1.0))
    r = v.verify_claim("ncs_gain", g)
    assert r.grid_points_tested == 1
    assert r.outside_condition == {"tested": 1, "pass_count": 0}


def test_vacuous_when_condition_never_met():
    g = v.Grid(alpha=(0.5,), gamma=(0.5,), d=(0.01,))
    assert v.verify_claim("prop1", g).status == v.VACUOUS


def test_report_order_and_determinism():
    a = [r.as_dict() for r in v.full_report(SMALL)]
    b = [r.as_dict() for r in v.full_report(SMALL)]
    assert a == b
    ids = [r["claim_id"] for r in a]
    assert ids == sorted(ids, key=v.CLAIM_IDS.index)
    assert len({r["claim_id"] for r in a}) >= 12


def test_workers_do_not_change_results():
    serial = [r.as_dict() for r in v.full_report(SMALL, claims=["prop5a", "lemma1"], workers=1)]
    parallel = [r.as_dict() for r in v.full_report(SMALL, claims=["prop5a", "lemma1"], workers=2)]
    assert serial == parallel


def test_single_point_matches_canonical_values():
    reports = {(r.claim_id, r.mode, r.participation): r for r in v.full_report(CANONICAL)}
    assert reports[("prop3", st.PAPER_LITERAL, "literal")].status == v.HOLDS_EVERYWHERE
    assert reports[("prop4", st.PAPER_LITERAL, "literal")].status == v.HOLDS_EVERYWHERE
    audit = reports[("threshold_audit_pq", st.PAPER_LITERAL, "literal")]
    values = audit.counterexamples[0]["values"]
    assert any(abs(x - 0.476190) < 1e-6 for x in values.values() if isinstance(x, float))
    assert any(abs(x - 0.1536098) < 1e-6 for x in values.values() if isinstance(x, float))


def test_ncs_derivative_at_optimum(canonical):
    s = st.optimal_standard("QQ", canonical)
    assert abs(v.ncs_derivative("QQ", s, canonical)) < 1e-9
    assert v.ncs_derivative("QQ", 0.1, canonical) > 0


def test_ncs_derivative_exact_path_near_pole():
    base = ModelParams(alpha=0.9, gamma=0.95, d=1.0)
    p = base.replace(d=st.d_positivity_threshold("PQ", base) * 1.0001)
    s = st.optimal_standard("PQ", p)
    assert s > 1e3
    assert abs(v.ncs_derivative("PQ", s, p)) < v.FOC_TOLERANCE
