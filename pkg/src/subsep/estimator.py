"""scikit-learn style wrapper around :func:`subsep.solver.solve`."""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_box
from .exceptions import BudgetExhausted
from .solver import SolverConfig, solve

__all__ = ["IntervalBranchAndBound"]


class IntervalBranchAndBound(BaseEstimator):
    """Global minimiser of an :class:`~subsep.functions.ObjectiveProgram`.

    Parameters mirror :class:`~subsep.solver.SolverConfig`; ``separators``
    is ``"all"`` (every declared separator), ``None`` or a list of labels.

    Attributes
    ----------
    report_ : SolveReport
    x_ : ndarray of shape (n,)
        Incumbent point.
    fun_ : float
        Objective value at ``x_``.
    best_value_ : Interval
        Enclosure of the global minimum.
    n_nodes_ : int
        Generated boxes including those of nested separator solves.

    Examples
    --------
    >>> from subsep import make
    >>> est = IntervalBranchAndBound(min_width=1e-6).fit(make("exponential", 2))
    >>> float(est.fun_)
    -1.0
    """

    def __init__(
        self,
        separation=True,
        separators="all",
        min_width=None,
        f_tolerance=1e-6,
        max_nodes=10**7,
        exploration="best_first",
        rounding=True,
        workers=1,
        record_trace=False,
    ):
        self.separation = separation
        self.separators = separators
        self.min_width = min_width
        self.f_tolerance = f_tolerance
        self.max_nodes = max_nodes
        self.exploration = exploration
        self.rounding = rounding
        self.workers = workers
        self.record_trace = record_trace

    def _config(self) -> SolverConfig:
        return SolverConfig(
            min_width=self.min_width,
            f_tolerance=self.f_tolerance,
            max_nodes=self.max_nodes,
            separation=self.separation,
            exploration=self.exploration,
            rounding=self.rounding,
            workers=self.workers,
            record_trace=self.record_trace,
        )

    def fit(self, program, domain=None):
        """Run the solver; a spent budget gives a ConvergenceWarning."""
        config = self._config()
        box = check_box(program.default_box if domain is None else domain, program.dim)
        try:
            report = solve(program, box, self.separators, config)
        except BudgetExhausted as exc:
            warnings.warn(str(exc), ConvergenceWarning, stacklevel=2)
            report = exc.report
        self.program_ = program
        self.report_ = report
        self.x_ = None if report.incumbent is None else np.asarray(report.incumbent, dtype=float)
        self.fun_ = report.incumbent_value
        self.best_value_ = report.best_value
        self.n_nodes_ = report.total_nodes
        return self

    def predict(self, X):
        """Objective values at the rows of ``X``."""
        check_is_fitted(self, "report_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.program_.dim:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.program_.dim}")
        return np.array([self.program_(row) for row in X])
