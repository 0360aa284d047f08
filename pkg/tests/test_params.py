import math
import time
from fractions import Fraction

import mpmath
import pytest

from inducedsub.pipeline import DESK, PAPER, corollary_parameters, mader_parameters, resolve_profile


def float_mu(s, eta, D, ell):
    """Independent evaluation in ordinary floats via logarithms."""
    alpha = (s - 2) / 2 + eta / 4
    gamma = alpha - 1
    C = (4 * ell + 2) * (D + 1)
    return math.log(gamma) + (ell - 3) * math.log(alpha) - 1 - math.log(C + 1)


@pytest.mark.parametrize("d,ell,m,girth", [(4, 205, 4814, 7_906_230), (5, 136, 3423, 3_732_160), (6, 113, 5000, 4_530_906)])
def test_corollary_tuples_feasible(d, ell, m, girth):
    t0 = time.perf_counter()
    P = mader_parameters(d + 1, Fraction(1, 20), d**43, ell, m)
    assert time.perf_counter() - t0 < 1
    assert P.feasible, P.failed_conditions
    assert P.girth_threshold == girth == (4 * ell + 1) * (2 * m + 2)
    assert P.girth_threshold < 8 * 10**6
    assert corollary_parameters(d).girth_threshold == girth


@pytest.mark.parametrize("d,ell,m", [(4, 205, 4814), (5, 136, 3423), (6, 113, 5000)])
def test_feasibility_margins_agree_with_float_oracle(d, ell, m):
    s, eta, D = d + 1, 1 / 20, d**43
    P = mader_parameters(s, Fraction(1, 20), D, ell, m)
    log_mu = float_mu(s, eta, D, ell)
    mu = math.exp(log_mu)
    with mpmath.workdps(30):
        assert mpmath.mpf(P.mu.a.a) <= mu * (1 + 1e-9) and mu * (1 - 1e-9) <= mpmath.mpf(P.mu.b.b)
    q = 10 * d * d + d + 1
    assert log_mu >= math.log(18 * 9 * q * q)
    assert mu / 8 >= 1 + math.log(4) + (12 * ell + 5) * math.log(D)
    C = (4 * ell + 2) * (D + 1)
    log_pc0 = -math.log(C + 1) + math.log(eta / 4) - math.log(D - s + 2) - 2 * ell * math.log(D)
    assert mu / 8 > math.log(16 * math.e * D) - log_pc0


def test_q_and_Q_for_s4():
    P = mader_parameters(4, Fraction(1, 20), 10, 5, 5)
    assert P.a == 3 and P.q == 94 and P.Q == 79_524


def test_derived_constants_exact():
    P = mader_parameters(5, Fraction(1, 20), 4**43, 205, 4814)
    assert P.alpha == Fraction(3, 2) + Fraction(1, 80)
    assert P.gamma == P.alpha - 1
    assert P.L == 821 and P.C == 822 * (4**43 + 1)
    assert P.p == Fraction(1, P.C + 1)
    assert P.c0 == Fraction(1, 20) / (4 * (4**43 - 3) * 4 ** (43 * 410))
    assert P.D0 >= max(2 / (P.p * P.c0), 2 * P.D ** (2 * P.ell + 1), P.Q, P.D)


def test_infeasible_reports_conditions():
    P = mader_parameters(5, Fraction(1, 20), 4**43, 10, 10)
    assert not P.feasible
    assert "mu >= 18Q" in P.failed_conditions
    assert "2(q^2-1)^m >= 11q^2D0^2" in P.failed_conditions
    P = mader_parameters(5, Fraction(1, 20), 4**43, 205, 100)
    assert P.failed_conditions == ("2(q^2-1)^m >= 11q^2D0^2",)


def test_preconditions():
    with pytest.raises(ValueError):
        mader_parameters(3, Fraction(1, 20), 10, 5, 5)
    with pytest.raises(ValueError):
        mader_parameters(5, 0, 10, 5, 5)
    with pytest.raises(ValueError):
        mader_parameters(5, Fraction(1, 20), 3, 5, 5)
    with pytest.raises(ValueError):
        mader_parameters(5, Fraction(1, 20), 10, 5, 5, {"bogus": 1})


def test_overrides_recorded():
    P = mader_parameters(3, Fraction(1, 4), 6, 1, 1, {"q": 1, "Q": 2, "p": 1, "D0": 1, "girth_threshold": 5})
    assert P.overridden == ("D0", "Q", "girth_threshold", "p", "q")
    assert P.q == 1 and P.Q == 2 and P.p == 1 and P.girth_threshold == 5


def test_parameters_json_summarises_big_values():
    obj = corollary_parameters(4).to_json_obj()
    assert obj["feasible"] is True and obj["D"] == 4**43
    assert isinstance(obj["D0"], dict) and obj["D0"]["bits"] > 256


def test_profiles():
    assert PAPER.g0 == 8 * 10**6 and PAPER.b_exponent == 43 and PAPER.unbalanced_factor == 60
    assert PAPER.case1_fraction == Fraction(81, 100)
    assert resolve_profile("desk") is DESK
    custom = resolve_profile({"base": "paper", "g0": 7, "beta": "1/7"})
    assert custom.name == "custom" and custom.g0 == 7 and custom.beta == Fraction(1, 7)
    assert custom.b_exponent == 43
    with pytest.raises(ValueError):
        resolve_profile({"nonsense": 1})
    with pytest.raises(ValueError):
        resolve_profile("fast")


def test_profile_mader_for_uses_corollary_tuple():
    P = PAPER.mader_for(4, D=4**43)
    assert (P.ell, P.m) == (205, 4814) and P.feasible
