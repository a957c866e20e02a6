from fractions import Fraction

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dequetsip.analysis import AmplitudeEstimator, DifferentialApproximant, RatioAnalysis


def powers(mu, g, n):
    """mu^k (k+1)^g as exact rationals; g must be an integer."""
    return [Fraction(mu) ** k * Fraction(k + 1) ** g for k in range(n)]


def binomial_series(sigma, theta, n):
    out, c = [], Fraction(1)
    for k in range(n):
        out.append(c)
        c = c * (k - theta) / (k + 1) / sigma
    return out


def test_params_roundtrip():
    est = RatioAnalysis(mode="ratios", tail=30, degree=2)
    assert est.get_params()["tail"] == 30 and est.get_params()["degree"] == 2
    est.set_params(tail=25)
    assert est.tail == 25
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


@pytest.mark.parametrize("est", [RatioAnalysis(), DifferentialApproximant(), AmplitudeEstimator(t_c=0.5)])
def test_not_fitted(est):
    with pytest.raises(NotFittedError):
        est.transform() if hasattr(est, "transform") else est.predict()


def test_ratio_fit_transform():
    est = RatioAnalysis(mode="ratios", tail=40, degree=3).fit(powers(3, -2, 200))
    arr = est.transform()
    assert arr.shape == (199, 2) and arr[0, 0] == 1
    assert abs(est.limit_ - 3) < 1e-6


def test_ratio_rejects_floats_and_short_input():
    with pytest.raises(TypeError):
        RatioAnalysis().fit([1.0] * 20)
    with pytest.raises(ValueError):
        RatioAnalysis(mode="ratios").fit([1] * 5)
    with pytest.raises(ValueError):
        RatioAnalysis(mode="nope").fit([1] * 20)
    with pytest.raises(ValueError):
        RatioAnalysis(mode="ratios", degree=0).fit([1] * 20)


def test_hadamard_mode_takes_y():
    f = powers(2, -3, 120)
    g = powers(2, -1, 120)
    est = RatioAnalysis(mode="hadamard", tail=40, degree=2).fit(f, g)
    assert abs(est.limit_ - (-2)) < 1e-3


def test_single_approximant_and_survey():
    f = binomial_series(Fraction(1, 2), Fraction(-3, 2), 60)
    one = DifferentialApproximant(order=1, degrees=(1, 1)).fit(f)
    assert one.survey_ is None and len(one.fits_) == 1
    assert abs(one.singularities_[0].location - 0.5) < 1e-10
    choices = [(1, 1), (2, 2), (1, 2), (2, 1), (3, 3)]
    many = DifferentialApproximant(order=1, degrees=choices).fit(f)
    loc, theta = many.predict()
    assert abs(loc - 0.5) < 1e-10 and abs(theta - Fraction(-3, 2)) < 1e-8


def test_da_validates_degrees_and_share():
    with pytest.raises(ValueError):
        DifferentialApproximant(order=2, degrees=(1, 1)).fit([1] * 30)
    with pytest.raises(ValueError):
        DifferentialApproximant(min_share=1.5).fit([1] * 30)


def test_amplitude():
    # 3 4^n n^-1 (1 + 2/n)
    c = [Fraction(0)] + [Fraction(3 * 4 ** n * (n + 2), n ** 2) for n in range(1, 240)]
    est = AmplitudeEstimator(t_c=Fraction(1, 4), g=-1).fit(c)
    assert abs(est.kappa_ - 3) < 1e-6 and est.error_ >= 0
    with pytest.raises(ValueError):
        AmplitudeEstimator().fit(c)


def test_window_restricts_candidates():
    f = [x + y for x, y in zip(binomial_series(Fraction(1, 2), Fraction(-3, 2), 60),
                               binomial_series(Fraction(1, 3), Fraction(1, 2), 60))]
    # every choice is exact here; each also has an apparent singularity at 3/8 with exponent 2
    choices = [(3, 3, 3), (3, 3, 3, 0), (3, 3, 3, 1), (3, 3, 3, 2)]
    near = DifferentialApproximant(order=2, degrees=choices).fit(f)
    far = DifferentialApproximant(order=2, degrees=choices, window=(0.4, 0.6)).fit(f)
    assert abs(near.location_ - Fraction(1, 3)) < 1e-8
    assert abs(far.location_ - Fraction(1, 2)) < 1e-8
