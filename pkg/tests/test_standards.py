import pytest

from ecsrgame import oracle
from ecsrgame import standards as st
from ecsrgame.closed_form import solve
from ecsrgame.model import CertProfile, ModelParams, Regime

LIT, DER = st.PAPER_LITERAL, st.DERIVED


def test_feasibility_examples(canonical):
    assert st.feasibility_bound(Regime.QQ, 1, canonical) == pytest.approx(0.5, abs=1e-12)
    assert st.feasibility_bound(Regime.PQ, 1, canonical) == pytest.approx(1.25 / 2.625, abs=1e-12)


@pytest.mark.parametrize("regime, firm", [(Regime.PP, 1), (Regime.QQ, 1), (Regime.PQ, 1), (Regime.PQ, 2), (Regime.QP, 1)])
def test_feasibility_is_output_equals_spending(regime, firm, canonical):
    s = st.feasibility_bound(regime, firm, canonical)
    eq = solve(regime, CertProfile.both(s), canonical)
    assert (eq.q1 if firm == 1 else eq.q2) == pytest.approx(s, abs=1e-12)


def test_feasibility_limit_without_demand_effect():
    p = ModelParams(alpha=1e-12, gamma=0.5)
    assert st.feasibility_bound(Regime.PP, 1, p) == pytest.approx(1 / (2 + 0.5 - 0.25), abs=1e-9)


@pytest.mark.parametrize("mode", [LIT, DER])
def test_symmetric_thresholds_both_modes(mode, canonical):
    assert st.adoption_threshold(Regime.PP, 1, canonical, mode) == pytest.approx(0.5 / 3.25, abs=1e-12)
    assert st.adoption_threshold(Regime.QQ, 1, canonical, mode) == pytest.approx(1 / 6, abs=1e-12)


def test_pq_literal_thresholds(canonical):
    assert st.adoption_threshold(Regime.PQ, 1, canonical, LIT) == pytest.approx(0.476190, abs=1e-6)
    assert st.adoption_threshold(Regime.PQ, 2, canonical, LIT) == pytest.approx(0.78125 / 10.171875, abs=1e-12)


def test_pq_derived_thresholds_differ_from_literal(canonical):
    s1 = st.adoption_threshold(Regime.PQ, 1, canonical, DER)
    s2 = st.adoption_threshold(Regime.PQ, 2, canonical, DER)
    assert s1 == pytest.approx(0.1536098, abs=1e-7)
    assert s2 == pytest.approx(0.1664099, abs=1e-7)
    # The literal quantity-setter value is half of the price setter's derived-form root.
    g, a = 0.5, 0.5
    c, D = 2 - g - g * g, 4 - 3 * g * g
    assert st.literal_threshold(Regime.PQ, 2, canonical) * 2 == pytest.approx(2 * a * c * c / (D * D - a * a * c * c))


def test_qp_thresholds_mirror_pq(canonical):
    assert st.adoption_threshold(Regime.QP, 2, canonical) == st.adoption_threshold(Regime.PQ, 1, canonical)


def test_threshold_argument_checks(canonical):
    with pytest.raises(ValueError):
        st.adoption_threshold(Regime.PP, 3, canonical)
    with pytest.raises(ValueError):
        st.adoption_threshold(Regime.PP, 1, canonical, "exact")


def test_optimal_examples(canonical):
    assert st.optimal_standard(Regime.QQ, canonical) == pytest.approx(4.75 / 7.625, abs=1e-12)
    assert st.optimal_standard(Regime.PP, canonical) == pytest.approx(4.25 / 5.75, abs=1e-12)
    assert st.optimal_standard(Regime.PQ, canonical) == pytest.approx(16.9375 / 24.84375, abs=1e-12)


@pytest.mark.parametrize("regime", [Regime.PP, Regime.QQ, Regime.PQ])
@pytest.mark.parametrize("alpha, gamma, d", [(0.5, 0.5, 1.0), (0.2, 0.8, 0.4), (0.8, 0.3, 2.5)])
def test_optimal_matches_numeric_maximizer(regime, alpha, gamma, d):
    p = ModelParams(alpha=alpha, gamma=gamma, d=d)
    s_num, _ = oracle.maximize_ncs_over_s(regime, p)
    assert st.optimal_standard(regime, p) == pytest.approx(s_num, abs=1e-8)


def test_d_min_examples(canonical):
    assert st.d_positivity_threshold(Regime.PP, canonical) == pytest.approx(0.375 / (2 * 3.0625), abs=1e-12)
    assert st.d_positivity_threshold(Regime.QQ, canonical) == pytest.approx(0.046875, abs=1e-12)
    assert st.d_positivity_threshold(Regime.PQ, canonical) == pytest.approx(0.25 * 5.6875 / 5.125**2, abs=1e-12)


@pytest.mark.parametrize("regime", [Regime.PP, Regime.QQ, Regime.PQ])
def test_optimum_sign_flips_at_d_min(regime, canonical):
    d0 = st.d_positivity_threshold(regime, canonical)
    assert st.optimal_standard(regime, canonical.replace(d=d0 * 1.01)) > 0
    assert st.optimal_standard(regime, canonical.replace(d=d0 * 0.99)) < 0


def test_equilibrium_standard_examples(canonical):
    assert st.equilibrium_standard(Regime.QQ, canonical) == pytest.approx((1 / 6,))
    assert st.equilibrium_standard(Regime.PP, canonical) == pytest.approx((0.153846,), abs=1e-6)
    assert st.equilibrium_standard(Regime.PQ, canonical) == pytest.approx((0.476190, 0.076805), abs=1e-6)


def test_equilibrium_standard_is_min_rule(canonical):
    low_d = canonical.replace(d=0.07)
    opt = st.optimal_standard(Regime.QQ, low_d)
    u = st.adoption_threshold(Regime.QQ, 1, low_d)
    assert st.equilibrium_standard(Regime.QQ, low_d) == (min(opt, u),)


def test_rankings(canonical):
    r = st.rank_optimal_standards(canonical)
    assert r.order == ("PP", "PQ", "QQ") and r.matches and not r.ties
    lit = st.rank_equilibrium_standards(canonical, LIT)
    assert lit.matches and lit.order == st.EQUILIBRIUM_CHAIN
    der = st.rank_equilibrium_standards(canonical, DER)
    assert not der.matches
    assert der.order[0] == "QQ"


def test_rank_ties_when_interaction_vanishes():
    r = st.rank_optimal_standards(ModelParams(gamma=1e-9))
    assert r.ties and not r.matches


def test_rank_ties_when_certification_worthless():
    r = st.rank_equilibrium_standards(ModelParams(alpha=1e-9))
    assert ("QQ", "PP") in r.ties and ("PP", "PQ2") in r.ties


def test_rank_helper():
    r = st.rank({"x": 1.0, "y": 2.0, "z": 2.0}, ("y", "x"))
    assert r.order == ("y", "z", "x")
    assert r.ties == [("y", "z")]
    assert r.matches


def test_bundle_canonical(canonical):
    b = st.standards_bundle(canonical)
    assert b.thresholds["qq"][LIT] == pytest.approx(1 / 6)
    assert b.optimal["pp"] == pytest.approx(0.739130, abs=1e-6)
    assert all(b.optimal_valid.values())
    assert b.rankings["optimal"]["matches"]
    assert b.rankings["equilibrium_paper_literal"]["matches"]
    assert not b.rankings["equilibrium_derived"]["matches"]
    assert b.warnings == []


def test_bundle_low_damage_flags_invalid():
    b = st.standards_bundle(ModelParams(d=0.01))
    assert not any(b.optimal_valid.values())
    assert any("invalid" in w for w in b.warnings)


def test_bundle_reports_poles():
    pole = st.standards_bundle(ModelParams(alpha=0.5, gamma=0.5, d=0.375 / (2 * 3.0625)))
    assert any("s_PP*" in w for w in pole.warnings)


def test_literal_pole_raises():
    # 4 - a^2 + a^2 g - 3 g^2 + g^3 never vanishes inside the unit box; poke the helper.
    with pytest.raises(st.FormulaPoleError):
        st._divide(1.0, 0.0, "probe")
