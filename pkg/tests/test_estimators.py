import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from aesthetic_curves.estimators import LacRegressor


def test_fit_predict_power_law():
    s = np.linspace(0, 2, 64)
    rho = np.sqrt(2 * s + 3)
    est = LacRegressor().fit(s[:, None], rho)
    assert est.kind_ == "lac" and est.alpha_ == pytest.approx(2.0, abs=1e-6)
    assert np.allclose(est.predict(s[:, None]), rho, rtol=1e-8)
    assert est.score(s[:, None], rho) == pytest.approx(1.0)


def test_unsorted_input_and_clone():
    rng = np.random.default_rng(0)
    s = rng.permutation(np.linspace(0, 1, 30))
    est = clone(LacRegressor(tol=1e-8)).fit(s[:, None], np.full(30, 4.0))
    assert est.get_params() == {"tol": 1e-8}
    assert est.kind_ == "circle" and np.all(est.predict([[0.5]]) == 4.0)


def test_not_fitted_and_bad_shape():
    with pytest.raises(NotFittedError):
        LacRegressor().predict([[0.0]])
    with pytest.raises(ValueError):
        LacRegressor().fit(np.ones((10, 2)), np.ones(10))


def test_no_branch_cannot_predict():
    s = np.linspace(0, 1, 30)
    est = LacRegressor().fit(s[:, None], 1 + np.sin(8 * s) ** 2)
    assert est.kind_ is None
    with pytest.raises(ValueError):
        est.predict(s[:, None])
