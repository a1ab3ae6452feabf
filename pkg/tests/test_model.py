from fractions import Fraction

import pytest

from ecsrgame.model import (
    CertProfile,
    Equilibrium,
    ModelParams,
    ParameterError,
    Regime,
    consumer_surplus,
    demand_from_prices,
    evaluate_outcome,
    inverse_demand,
    net_emissions,
    utility,
)

NO_CERT = CertProfile.none()


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"gamma": 1.5}, "gamma out of (0,1)"),
        ({"gamma": 0.0}, "gamma out of (0,1)"),
        ({"alpha": 1.0}, "alpha out of (0,1)"),
        ({"A": -1.0}, "A must be positive"),
        ({"d": 0.0}, "d must be positive"),
        ({"d": float("nan")}, "finite"),
    ],
)
def test_params_validation(kwargs, message):
    with pytest.raises(ParameterError, match=message.replace("(", r"\(").replace(")", r"\)")):
        ModelParams(**kwargs)


def test_params_accept_fractions():
    p = ModelParams(A=Fraction(1), alpha=Fraction(1, 2), gamma=Fraction(1, 2), d=Fraction(1))
    assert p.replace(d=2).d == 2


def test_cert_profile_validation():
    with pytest.raises(ParameterError):
        CertProfile(2, 0, 0.1)
    with pytest.raises(ParameterError):
        CertProfile(1, 1, -0.1)
    assert CertProfile(1, 0, 0.2).swapped() == CertProfile(0, 1, 0.2)
    assert CertProfile.both(0.3).symmetric
    assert not CertProfile(1, 0, 0.3).symmetric


def test_regime_variables():
    assert Regime.PQ.variables == ("P", "Q")
    assert Regime.from_choices("Q", "P") is Regime.QP


def test_utility_examples(canonical):
    assert utility(0, 0, CertProfile.both(0.3), canonical) == 0
    assert utility(0.4, 0.4, NO_CERT, canonical) == pytest.approx(0.56, abs=1e-12)
    assert utility(0.42, 0.42, CertProfile.both(0.1), canonical) == pytest.approx(0.6174, abs=1e-12)


def test_utility_matches_exact_polynomial(canonical):
    # Independent evaluation in rational arithmetic.
    a = Fraction(1) + Fraction(1, 2) * Fraction(1, 10)
    q = Fraction(21, 50)
    exact = 2 * a * q - (q * q + 2 * Fraction(1, 2) * q * q + q * q) / 2
    assert utility(0.42, 0.42, CertProfile.both(0.1), canonical) == pytest.approx(float(exact), abs=1e-15)


def test_utility_rejects_negative_quantities(canonical):
    with pytest.raises(ParameterError):
        utility(-0.1, 0.2, NO_CERT, canonical)


def test_demand_examples(canonical):
    assert demand_from_prices(1.0, 1.0, NO_CERT, canonical) == pytest.approx((0.0, 0.0), abs=1e-15)
    q = demand_from_prices(1 / 3, 1 / 3, NO_CERT, canonical)
    assert q == pytest.approx((4 / 9, 4 / 9), abs=1e-12)


def test_inverse_demand_examples(canonical):
    assert inverse_demand(0, 0, NO_CERT, canonical) == (1.0, 1.0)
    assert inverse_demand(0.4, 0.4, NO_CERT, canonical) == pytest.approx((0.4, 0.4), abs=1e-12)
    p = inverse_demand(0.4, 0.4, CertProfile(1, 0, 0.1), canonical)
    assert p == pytest.approx((0.45, 0.4), abs=1e-12)


def test_demand_round_trip(canonical):
    cert = CertProfile(1, 0, 0.2)
    q1, q2 = 0.31, 0.27
    p1, p2 = inverse_demand(q1, q2, cert, canonical)
    assert demand_from_prices(p1, p2, cert, canonical) == pytest.approx((q1, q2), abs=1e-12)


def test_inverse_demand_is_utility_gradient(canonical):
    cert = CertProfile(1, 1, 0.15)
    q1, q2, h = 0.3, 0.35, 1e-6
    g1 = (utility(q1 + h, q2, cert, canonical) - utility(q1 - h, q2, cert, canonical)) / (2 * h)
    g2 = (utility(q1, q2 + h, cert, canonical) - utility(q1, q2 - h, cert, canonical)) / (2 * h)
    assert inverse_demand(q1, q2, cert, canonical) == pytest.approx((g1, g2), abs=1e-8)


def test_evaluate_outcome_examples(canonical):
    zero = evaluate_outcome(0, 0, 0, 0, NO_CERT, canonical)
    assert all(v == 0 for k, v in zero.as_dict().items() if k != "admissible")
    assert not zero.admissible

    eq = evaluate_outcome(0.4, 0.4, 0.4, 0.4, NO_CERT, canonical)
    assert (eq.cs, eq.emissions, eq.ncs) == pytest.approx((0.24, 0.8, -0.08), abs=1e-12)
    assert eq.pi1 == pytest.approx(0.16)
    assert net_emissions(0.42, 0.42, CertProfile.both(0.1)) == pytest.approx(0.64)


def test_evaluate_outcome_guard(canonical):
    with pytest.raises(ParameterError):
        evaluate_outcome(0.1, 0.1, -0.1, 0.1, NO_CERT, canonical)
    flagged = evaluate_outcome(0.1, 0.1, -0.1, 0.1, NO_CERT, canonical, check=False)
    assert not flagged.admissible


def test_ncs_decomposition(canonical):
    cert = CertProfile(1, 1, 0.2)
    eq = evaluate_outcome(0.3, 0.4, 0.5, 0.45, cert, canonical)
    assert eq.cs == pytest.approx(consumer_surplus(0.3, 0.4, canonical))
    assert eq.ncs == pytest.approx(eq.cs - canonical.d * eq.emissions**2 / 2)
    assert eq.pi1 == pytest.approx(0.5 * 0.3 - 0.04)


def test_equilibrium_swap_and_profit():
    eq = Equilibrium(1, 2, 3, 4, 5, 6, 7, 8, 9)
    sw = eq.swapped()
    assert (sw.q1, sw.p1, sw.pi1) == (2, 4, 6)
    assert sw.swapped() == eq
    assert eq.profit(2) == 6
