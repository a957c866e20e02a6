from fractions import Fraction
from math import comb, factorial

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dequetsip.analysis import conjectures, constants, da, pade, ratio
from dequetsip.analysis.floatseq import FloatSeq, to_mpf
from dequetsip.analysis.validation import check_degrees, check_series


def binomial_series(sigma: Fraction, theta: Fraction, n: int) -> list[Fraction]:
    """Coefficients of (1 - z/sigma)^theta."""
    out, c = [], Fraction(1)
    for k in range(n):
        out.append(c)
        c = c * (k - theta) / (k + 1) / sigma
    return out


def test_floatseq_rounding():
    s = FloatSeq.from_exact([Fraction(1, 3), 2], "x", precision=30)
    with mpmath.workdps(30):
        assert s[0] == mpmath.mpf(1) / 3
    assert tuple(s.indices) == (0, 1) and s.last() == 2
    assert to_mpf(Fraction(-7, 2)) == -3.5


def test_ratios_of_powers_of_two():
    r = ratio.ratios(FloatSeq.from_exact([2 ** n for n in range(20)], "f"))
    assert all(v == 2 for _, v in r.items())


def test_zero_denominators_are_flagged():
    f = FloatSeq.from_exact([1, 0, 3, 4, 5, 0, 7, 8, 9, 10, 11], "f")
    r = ratio.ratios(f)
    assert r[2] is None and r[6] is None and set(r.flagged) >= {2, 6}
    with mpmath.workdps(50):
        assert r[3] == mpmath.mpf(4) / 3


def test_ratio_estimators_need_terms_and_zc():
    with pytest.raises(ValueError):
        ratio.ratio_estimators([1] * 5, "ratios")
    with pytest.raises(ValueError):
        ratio.ratio_estimators([1] * 20, "biased_exponent")


@pytest.mark.parametrize("mu,g", [(3, -1.5), (Fraction(11, 2), Fraction(3, 10)), (16, -3)])
def test_ratio_calibration(mu, g):
    with mpmath.workdps(50):
        g_mp = mpmath.mpf(Fraction(g).numerator) / Fraction(g).denominator
        mu_mp = mpmath.mpf(Fraction(mu).numerator) / Fraction(mu).denominator
        f = FloatSeq(tuple(mu_mp ** n * mpmath.mpf(n) ** g_mp for n in range(1, 201)), "syn", start=1)
        r = ratio.polynomial_extrapolate(ratio.ratios(f), 40, 3)
        assert abs(r - mu_mp) < 1e-6
        theta = ratio.linear_extrapolate(ratio.unbiased_exponent(f), 40)
        assert abs(theta - (-1 - g_mp)) < 1e-2
        biased = ratio.linear_extrapolate(ratio.biased_exponent(f, 1 / mu_mp), 40)
        assert abs(biased - (-1 - g_mp)) < 1e-2


def test_hadamard_of_two_powers():
    with mpmath.workdps(40):
        f = FloatSeq(tuple(mpmath.mpf(5) ** n * mpmath.mpf(n) ** -1.5 for n in range(1, 301)), "f", start=1)
        g = FloatSeq(tuple(mpmath.mpf(5) ** n * mpmath.mpf(n) ** -2.5 for n in range(1, 301)), "g", start=1)
        q = ratio.hadamard_quotient(g, f)
        assert abs(q[100] - mpmath.mpf(100) ** -1) < 1e-30
        theta = ratio.linear_extrapolate(ratio.hadamard_exponent(g, f), 40)
        assert abs(theta - (-1)) < 1e-3


def test_refined_intercept_removes_first_correction():
    with mpmath.workdps(40):
        g = FloatSeq(tuple(2 + mpmath.mpf(3) / n + mpmath.mpf(5) / n ** 2 for n in range(1, 60)), "g", start=1)
        refined = ratio.refined_intercept(g)
        assert abs(refined.last() - 2) < abs(g.last() - 2) / 5


def test_linear_extrapolate_exact_on_lines():
    with mpmath.workdps(40):
        s = FloatSeq(tuple(mpmath.mpf(7) - mpmath.mpf(2) / n for n in range(1, 50)), "s", start=1)
        est = ratio.linear_extrapolate(s, 20)
        assert abs(est - 7) < 1e-30
        quad = FloatSeq(tuple(7 - mpmath.mpf(2) / n + mpmath.mpf(9) / n ** 2 for n in range(1, 50)), "q", start=1)
        assert abs(ratio.polynomial_extrapolate(quad, 20, 2) - 7) < 1e-30
        with pytest.raises(ValueError):
            ratio.polynomial_extrapolate(quad, 2, 2)


@pytest.mark.parametrize("sigma", [Fraction(1, 2), Fraction(1, 3)])
@pytest.mark.parametrize("theta", [Fraction(-3, 2), Fraction(1, 2), Fraction(2)])
@pytest.mark.parametrize("M,degrees", [(1, (1, 1)), (2, (0, 1, 1))])
def test_da_calibration(sigma, theta, M, degrees):
    res = da.fit_da(binomial_series(sigma, theta, 60), M, degrees, precision=50)
    s = min((s for s in res.singularities if abs(s.location.imag) < 1e-20), key=lambda s: abs(s.location))
    assert abs(s.location - sigma) < 1e-10
    assert abs(s.exponent - theta) < 1e-8
    assert res.residual_rank_info["extra_matched"] > 40


def test_da_calibration_sign_convention():
    res = da.fit_da(binomial_series(Fraction(1, 2), Fraction(-3, 2), 60), 1, (1, 1))
    # the indicial expression 1 - M + Q_{M-1}/(z Q_M') is the negated exponent
    s = res.singularities[0]
    raw = -s.exponent if da.INDICIAL_SIGN == -1 else s.exponent
    assert abs(raw - Fraction(3, 2)) < 1e-8


def test_da_defective_and_bad_degrees():
    with pytest.raises(da.DefectiveApproximant, match="defective approximant"):
        da.fit_da(binomial_series(Fraction(1, 2), Fraction(-3, 2), 60), 1, (8, 8, 4))
    with pytest.raises(ValueError):
        da.fit_da([1] * 10, 2, (1, 1))
    with pytest.raises(ValueError):
        da.fit_da([1] * 5, 1, (3, 3))


def test_da_survey_on_synthetic_product():
    # (1 - 3z)^(-1/2) (1 - z)^(-3): dominant singularity 1/3, exponent -1/2
    a = binomial_series(Fraction(1, 3), Fraction(-1, 2), 80)
    b = binomial_series(Fraction(1), Fraction(-3), 80)
    f = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(80)]
    # an exact product like this one is holonomic: large approximants are
    # rank deficient, so the grid stays small
    choices = [(d0, d1, d2, dp) for d0 in (1, 2) for d1 in (2, 3) for d2 in (2, 3, 4) for dp in (-1, 0, 1)]
    s = da.da_survey(f[:40], 2, choices)
    assert len(s.fits) >= 10
    assert abs(s.location - mpmath.mpf(1) / 3) < 1e-10
    assert abs(s.exponent - (-0.5)) < 1e-6


def test_degree_choices_fit_the_terms():
    for M in (1, 2, 3):
        for d in da.degree_choices(100, M):
            assert da.unknown_count(d) <= 100 and len(d) == M + 2


def test_confluent_pair_gets_both_exponents():
    # (1 - 2z)^(1/2) + (1 - 2z)^(3/2) ... a sum of two powers at one point
    f = [x + 3 * y for x, y in zip(binomial_series(Fraction(1, 2), Fraction(1, 3), 80),
                                   binomial_series(Fraction(1, 2), Fraction(5, 4), 80))]
    res = da.fit_da(f, 2, (2, 2, 2))
    near = [s for s in res.singularities if abs(s.location - 0.5) < 1e-6]
    assert sum(s.multiplicity for s in near) >= 1
    vals = da.confluent_exponents(res, mpmath.mpf(1) / 2, 2)
    got = sorted(float(mpmath.re(v)) for v in vals)
    assert got == pytest.approx([1 / 3, 5 / 4], abs=1e-6)


def test_pade_estimate_of_a_rational_function():
    # 1/(1 - z/2), evaluated at z = 1
    # a rational function has a singular Toeplitz system for oversized blocks
    c = [Fraction(1, 2 ** n) for n in range(40)]
    with pytest.raises(ArithmeticError):
        pade.pade_estimate(c, 1, precision=40, degrade=0)
    vals = pade.pade_values(c, 1, [(0, 1), (1, 1)], 40)
    assert [b for b, _ in vals] == [(0, 1), (1, 1)] and all(abs(v - 2) < 1e-35 for _, v in vals)


def test_pade_estimate_of_exp():
    c = [Fraction(1, factorial(n)) for n in range(40)]
    est = pade.pade_estimate(c, 1, precision=40)
    with mpmath.workdps(40):
        assert abs(est.value - mpmath.e) < 1e-30


def test_pade_estimate_at_a_branch_point():
    # sqrt(1 - z) at z = 1 is 0, approached with a visible spread
    c = binomial_series(Fraction(1), Fraction(1, 2), 120)
    est = pade.pade_estimate(c, 1, precision=40)
    assert abs(est.value) < 1e-2 and est.spread > 0


def test_closed_forms_and_consteqn():
    with mpmath.workdps(40):
        t = mpmath.mpf("0.1207524975763")
        assert abs(constants.closed_form_P(t) - mpmath.mpf("1.174361446")) < 1e-9
        Pc = constants.closed_form_P(t)
        assert abs(constants.consteqn_residual(Pc, t)) < 1e-30


def test_d1_formula_variants_agree_through_the_radicand():
    with mpmath.workdps(40):
        t = mpmath.mpf("0.1207524975763")
        Pc = constants.closed_form_P(t)
        Pp = mpmath.mpf("2.7768")
        c0, c1 = Pc, -t * Pp
        assert abs(constants.d1_from_pprime(Pc, Pp, t) - constants.d1_from_radicand(c0, c1, t)) < 1e-25
        assert constants.d1_from_pprime(Pc, Pp, t, "as-printed") != constants.d1_from_pprime(Pc, Pp, t)
        with pytest.raises(ValueError):
            constants.d1_from_pprime(Pc, Pp, t, "other")


def test_kappa_synthetic():
    with mpmath.workdps(50):
        c = [0] + [3 * mpmath.mpf(2) ** n * mpmath.mpf(n) ** -1.5 * (1 + mpmath.mpf(1) / n) for n in range(1, 260)]
        est = constants.kappa_extrapolate(c, mpmath.mpf(1) / 2, -1.5)
        assert abs(est.value - 3) < 0.01


def test_singular_remainder_synthetic():
    # A + B sqrt(1 - t) + C (1 - t)^0.97 in the rescaled variable
    n = 300
    with mpmath.workdps(50):
        sq = binomial_series(Fraction(1), Fraction(1, 2), n + 1)
        pw = [mpmath.binomial(mpmath.mpf("0.97"), k) * (-1) ** k for k in range(n + 1)]
        D = [2 * (k == 0) + mpmath.mpf("-0.05") * sq[k] + mpmath.mpf("0.3") * pw[k] for k in range(n + 1)]
        D = [constants.mpf_to_fraction(x) for x in D]
        res = constants.subtract_singular_and_reestimate(D, t_c=1, D_c=2, D1=mpmath.mpf("-0.05"), da_order=None)
        assert abs(res.theta_ratio - 0.97) < 0.01
        zero = constants.subtract_singular_and_reestimate(
            [constants.mpf_to_fraction(x) for x in (mpmath.mpf("-0.05") * c for c in sq)],
            t_c=1, D_c=0, D1=0, da_order=None)
        assert abs(zero.theta_ratio - 0.5) < 0.01


def test_rho_and_raschel():
    with mpmath.workdps(50):
        assert conjectures.rho_Q(1) == mpmath.mpf(1) / 16
        lo, hi = conjectures.rho_Q_branches(Fraction(-1, 2))
        assert abs(lo - hi) < 1e-40 and abs(lo - mpmath.mpf(1) / 9) < 1e-40
        for v in conjectures.RASCHEL_VARIANTS:
            assert abs(conjectures.raschel_g(1, v) - 2) < 1e-40
    with pytest.raises(conjectures.DomainError):
        conjectures.rho_Q(-2)
    with pytest.raises(conjectures.DomainError):
        conjectures.raschel_g(Fraction(-3, 4))
    with pytest.raises(ValueError):
        conjectures.raschel_g(0, "nope")


def test_arccos_branches_are_supplementary():
    b = conjectures.arccos_branches()
    x, y = b["pi/arccos(sqrt2-1)"], b["pi/arccos(1-sqrt2)"]
    assert abs(mpmath.pi / x + mpmath.pi / y - mpmath.pi) < 1e-40


def test_speculation_constant_is_stable():
    v50 = conjectures.speculation_constant(50)
    v100 = conjectures.speculation_constant(100)
    with mpmath.workdps(60):
        assert abs(v50 - v100) < mpmath.mpf(10) ** -48
    assert mpmath.nstr(v50, 13) == "1.472799717437"
    assert abs(mpmath.mpf("1.47309") - v50 - 2.9e-4) < 1e-5


@settings(max_examples=30)
@given(st.fractions(min_value=-1, max_value=5, max_denominator=20))
def test_rho_q_positive_and_decreasing_in_a(a):
    r = conjectures.rho_Q(a)
    assert 0 <= r <= mpmath.mpf(1) / 8
    if a < 5:
        assert conjectures.rho_Q(a + Fraction(1, 10)) <= r


def test_validation_helpers():
    assert check_series(["1", Fraction(1, 2), 3]) == [1, Fraction(1, 2), 3]
    with pytest.raises(TypeError):
        check_series([1.5, 2])
    with pytest.raises(ValueError):
        check_series([1], min_terms=3)
    assert check_degrees([1, 2, 3], 2) == (1, 2, 3)
    with pytest.raises(ValueError):
        check_degrees([1, 2], 2)


def test_catalan_product_is_holonomic():
    # C_n C_{n+1}: holonomic, so a large enough order-2 fit is exact
    f = [Fraction(comb(2 * n, n) * comb(2 * n + 2, n + 1), (n + 1) * (n + 2)) for n in range(40)]
    res = da.fit_da(f, 2, (1, 3, 3, 3))
    near = [s for s in res.singularities if abs(s.location - mpmath.mpf(1) / 16) < 1e-20]
    assert len(near) == 1 and abs(near[0].exponent - 2) < 1e-20
    loose = da.fit_da(f, 2, (2, 2, 2))
    assert 1e-6 < abs(loose.singularities[0].location - mpmath.mpf(1) / 16) < 1e-4
