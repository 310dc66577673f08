import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import ConvergenceWarning, NotFittedError

from subsep import make
from subsep.estimator import IntervalBranchAndBound


def test_params_round_trip():
    est = IntervalBranchAndBound(min_width=1e-3, separation=False)
    params = est.get_params()
    assert params["min_width"] == 1e-3 and params["separation"] is False
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(max_nodes=50)
    assert est.max_nodes == 50


def test_fit_exponential():
    est = IntervalBranchAndBound(min_width=1e-6).fit(make("exponential", 3))
    assert est.fun_ == -1.0
    np.testing.assert_allclose(est.x_, 0.0, atol=1e-12)
    assert -1.0 in est.best_value_
    assert est.n_nodes_ == est.report_.total_nodes


def test_fit_with_domain():
    est = IntervalBranchAndBound(min_width=1e-6).fit(make("exponential", 2), [(0.5, 1.0), (-1.0, 1.0)])
    assert est.x_[0] == pytest.approx(0.5)


def test_budget_warning():
    est = IntervalBranchAndBound(max_nodes=10)
    with pytest.warns(ConvergenceWarning):
        est.fit(make("shubert", 2))
    assert est.report_.termination == "budget_exhausted"


def test_predict():
    est = IntervalBranchAndBound(min_width=1e-3)
    with pytest.raises(NotFittedError):
        est.predict([[0.0, 0.0]])
    est.fit(make("styblinski_tang", 2))
    out = est.predict([[0.0, 0.0], [1.0, 1.0]])
    np.testing.assert_allclose(out, [0.0, 0.5 * 2 * (1 - 16 + 5)])
    with pytest.raises(ValueError):
        est.predict([[0.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        est.predict([[np.nan, 0.0]])


def test_invalid_params_fail_at_fit():
    with pytest.raises(ValueError):
        IntervalBranchAndBound(f_tolerance=0.0).fit(make("exponential", 2))
