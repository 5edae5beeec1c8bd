import numpy as np
import pytest

from kemforecast import (
    InvalidInputError,
    NearSingularSystemError,
    fit_linear_ar,
    predict_linear,
)

from oracles import ar_series, ar_series_noisy, coeffs_from_roots, impulse_response


def biased_moments(x, p, center):
    x = np.asarray(x, dtype=float)
    if center:
        x = x - x.mean()
    n = x.size
    return [float(x[: n - h] @ x[h:]) / n for h in range(p + 1)]


class TestFit:
    def test_scalar_case_is_moment_ratio(self):
        # p=1 Yule-Walker reduces to lambda = c(1)/c(0)
        rng = np.random.default_rng(5)
        x = rng.normal(size=40)
        for center in (False, True):
            c = biased_moments(x, 1, center)
            m = fit_linear_ar(x, 1, center=center)
            assert m.coefficients[0] == pytest.approx(c[1] / c[0], rel=1e-12)

    def test_matches_direct_solve(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=60)
        for p in (2, 3, 4):
            c = biased_moments(x, p, False)
            gamma = np.array([[c[abs(j - k)] for j in range(p)] for k in range(p)])
            lam = np.linalg.solve(gamma, c[1:])
            m = fit_linear_ar(x, p)
            assert m.coefficients == pytest.approx(lam, rel=1e-9)

    def test_constant_series_centered_rejected(self):
        with pytest.raises(NearSingularSystemError):
            fit_linear_ar([5.0] * 20, 1, center=True)

    def test_zero_series_rejected(self):
        with pytest.raises(NearSingularSystemError):
            fit_linear_ar([0.0] * 20, 2)

    def test_recovers_seeded_ar2(self):
        lam = np.array([0.5, -0.3])
        x = ar_series_noisy(lam, 10_000, 0.1, np.random.default_rng(42))
        for center in (False, True):
            m = fit_linear_ar(x, 2, center=center)
            assert np.abs(m.coefficients - lam).max() < 0.05

    def test_noiseless_ar1_recovery(self):
        x = ar_series([0.9], [1.0], 100)
        m = fit_linear_ar(x, 1)
        assert m.coefficients[0] == pytest.approx(0.9, abs=1e-8)
        assert m.condition_warning is None

    def test_noiseless_ar3_recovery(self):
        # an impulse response has true zeros beyond its left edge, so the
        # raw-moment system is satisfied by the generating coefficients
        # exactly up to end-of-window decay
        lam = coeffs_from_roots([0.6, 0.55 * np.exp(1j * np.pi / 3), 0.55 * np.exp(-1j * np.pi / 3)])
        x = impulse_response(lam, 120)
        m = fit_linear_ar(x, 3)
        assert m.coefficients == pytest.approx(lam, abs=1e-10)

    def test_overparameterized_fit_still_predicts(self):
        # AR(1) data fit with p=2: the raw-moment system stays solvable and
        # the one-step forecast stays essentially exact
        x = 0.9 ** np.arange(150)
        m = fit_linear_ar(x, 2)
        pred = predict_linear(m, x[-1:-3:-1], 0.0)
        assert pred == pytest.approx(0.9**150, rel=1e-6)

    def test_shift_invariance_when_centered(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=80)
        base = fit_linear_ar(x, 3, center=True).coefficients
        for shift in (1.0, -17.5, 1e4):
            moved = fit_linear_ar(x + shift, 3, center=True).coefficients
            assert moved == pytest.approx(base, abs=1e-8)

    def test_rejects_short_windows(self):
        with pytest.raises(InvalidInputError):
            fit_linear_ar([1.0, 2.0, 3.0, 4.0], 2)  # needs 2p+1 = 5

    def test_rejects_bad_order(self):
        with pytest.raises(InvalidInputError):
            fit_linear_ar([1.0, 2.0, 3.0], 0)

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            fit_linear_ar([1.0, float("nan"), 3.0], 1)


class TestPredict:
    def test_scalar(self):
        m = fit_linear_ar(ar_series([0.9], [1.0], 30), 1)
        m = m.__class__(order=1, coefficients=[0.5])
        assert predict_linear(m, [4.0], 0.0) == 2.0

    def test_all_zero_coefficients_predict_mean(self):
        from kemforecast import LinearArModel

        m = LinearArModel(order=3, coefficients=[0.0, 0.0, 0.0])
        assert predict_linear(m, [9.0, -4.0, 100.0], 7.0) == 7.0

    def test_two_term_analytic(self):
        from kemforecast import LinearArModel

        m = LinearArModel(order=2, coefficients=[0.5, -0.3])
        assert predict_linear(m, [1.0, 2.0], 0.0) == pytest.approx(-0.1, abs=1e-12)

    def test_affine_in_centered_history(self):
        from kemforecast import LinearArModel

        rng = np.random.default_rng(12)
        lam = rng.normal(size=4)
        m = LinearArModel(order=4, coefficients=lam)
        h = rng.normal(size=4)
        mean = 3.25
        got = predict_linear(m, h, mean)
        assert got == pytest.approx(mean + float(lam @ (h - mean)), rel=1e-12)
        # doubling the centered history doubles the centered prediction
        doubled = predict_linear(m, mean + 2.0 * (h - mean), mean)
        assert doubled - mean == pytest.approx(2.0 * (got - mean), rel=1e-9)

    def test_rejects_wrong_history_length(self):
        from kemforecast import LinearArModel

        m = LinearArModel(order=2, coefficients=[0.5, 0.1])
        with pytest.raises(InvalidInputError):
            predict_linear(m, [1.0], 0.0)


class TestModelInvariants:
    def test_rejects_wrong_coefficient_count(self):
        from kemforecast import LinearArModel

        with pytest.raises(InvalidInputError):
            LinearArModel(order=2, coefficients=[1.0])

    def test_rejects_non_finite_coefficients(self):
        from kemforecast import LinearArModel

        with pytest.raises(InvalidInputError):
            LinearArModel(order=1, coefficients=[float("inf")])
