import math

import numpy as np
import pytest

from oracles import shubert_2d_minimizers, styblinski_tang_1d_min
from subsep import make
from subsep.exceptions import BudgetExhausted, NothingToSplit
from subsep.functions import ObjectiveProgram
from subsep.interval import Interval
from subsep.solver import (
    BoxTask,
    Check,
    Exploration,
    FixBoundary,
    Incumbent,
    Origin,
    SolveReport,
    SolverConfig,
    Status,
    bisect,
    improve_bound,
    optimality_check,
    solve,
    value_check,
)
from subsep.tape import record, reverse_sweep

FINAL = {
    "active_at_exit", "value_eliminated", "optimality_eliminated",
    "boundary_fixed", "separated", "bisected",
}


def linear(n=1, box=(0.0, 1.0)):
    return ObjectiveProgram.from_function("lin", n, lambda rec, x: x[0] + 0.0, box)


class TestBisect:
    def test_all_dims(self):
        kids = bisect(BoxTask.root([Interval(0, 1), Interval(0, 1)]), 0.1)
        assert [k.box for k in kids] == [
            (Interval(0, 0.5), Interval(0, 0.5)),
            (Interval(0, 0.5), Interval(0.5, 1)),
            (Interval(0.5, 1), Interval(0, 0.5)),
            (Interval(0.5, 1), Interval(0.5, 1)),
        ]
        assert all(k.origin is Origin.BISECTION and k.depth == 1 for k in kids)

    def test_fixed_dim_untouched(self):
        task = BoxTask.root([Interval(0, 1), Interval(0.3, 0.3)], [None, 0.3])
        kids = bisect(task, 0.1)
        assert len(kids) == 2
        assert all(k.box[1] == Interval(0.3, 0.3) and k.fixed[1] == 0.3 for k in kids)

    def test_nothing_to_split(self):
        with pytest.raises(NothingToSplit):
            bisect(BoxTask.root([Interval(0, 0.05)] * 2), 0.1)

    def test_only_wide_dims(self):
        kids = bisect(BoxTask.root([Interval(0, 1), Interval(0, 0.05)]), 0.1)
        assert len(kids) == 2


class TestValueCheck:
    def test_examples(self):
        assert value_check(Interval(3, 5), 2.0) is Check.DISCARD
        assert value_check(Interval(1, 5), 2.0) is Check.KEEP
        assert value_check(Interval(2, 5), 2.0) is Check.KEEP


class TestOptimalityCheck:
    def _run(self, program, box, original):
        task = BoxTask.root(box)
        r = reverse_sweep(record(program, box))
        return optimality_check(r, task, original)

    def test_fix_lower_boundary(self):
        p = linear()
        out = self._run(p, [Interval(0, 0.5)], [Interval(0, 1)])
        assert out == FixBoundary(((0, "lower"),))

    def test_interior_discard(self):
        p = linear()
        assert self._run(p, [Interval(0.25, 0.5)], [Interval(0, 1)]) is Check.DISCARD

    def test_indefinite_keep(self):
        p = ObjectiveProgram.from_function("sq", 1, lambda rec, x: x[0].sqr(), (-1.0, 1.0))
        assert self._run(p, [Interval(-1, 1)], [Interval(-1, 1)]) is Check.KEEP

    def test_upper_boundary(self):
        p = ObjectiveProgram.from_function("neg", 1, lambda rec, x: -x[0], (0.0, 1.0))
        out = self._run(p, [Interval(0.5, 1)], [Interval(0, 1)])
        assert out == FixBoundary(((0, "upper"),))


class TestImproveBound:
    def test_exponential_midpoint(self):
        p = make("exponential", 2)
        inc = improve_bound(p, BoxTask.root(p.default_box), Incumbent(None))
        assert inc.point == (0.0, 0.0) and inc.value == -1.0

    def test_styblinski_tang(self):
        p = make("styblinski_tang", 1)
        inc = improve_bound(p, BoxTask.root([Interval(-5, 0)]), Incumbent(None))
        assert inc.point == (-2.5,)
        assert inc.value == pytest.approx(0.5 * ((-2.5) ** 4 - 16 * 6.25 - 12.5))
        assert inc.value == pytest.approx(-36.72, abs=5e-3)

    def test_not_better_unchanged(self):
        p = make("styblinski_tang", 1)
        cur = Incumbent((1.0,), -100.0)
        assert improve_bound(p, BoxTask.root([Interval(-5, 0)]), cur) is cur

    def test_domain_error_unchanged(self):
        p = ObjectiveProgram.from_function("r", 1, lambda rec, x: x[0].sqrt(), (-2.0, 0.0))
        cur = Incumbent(None)
        assert improve_bound(p, BoxTask.root([Interval(-2, 0)]), cur) is cur


def trace_of(report, status=None):
    return [r for r in report.trace if status is None or r.status is status]


class TestSeparatorStep:
    def test_exponential_single_separator(self):
        p = make("exponential", 2)
        rep = solve(p, separators=["s0"], config=SolverConfig(min_width=1e-6, record_trace=True))
        root = rep.trace[0]
        assert root.status is Status.SEPARATED
        child = next(r for r in rep.trace if r.parent == root.id)
        assert child.origin is Origin.SEPARATION
        assert child.box == (Interval(0, 0), Interval(-1, 1))

    def test_recursive_exponential_fixes_x0(self):
        p = make("recursive_exponential", 2)
        rep = solve(p, p.presets["example"], ["y1"],
                    SolverConfig(min_width=1e-9, record_trace=True))
        sep = [r for r in rep.trace if r.origin is Origin.SEPARATION]
        assert sep
        assert all(abs(r.box[0].lo) < 1e-2 and r.box[0].lo == r.box[0].hi for r in sep)
        assert rep.incumbent_value == pytest.approx(1.0, abs=1e-6)

    def test_salomon_no_decomposition(self):
        rep = solve(make("salomon", 4), config=SolverConfig(record_trace=True))
        assert rep.counts["separated"] == 0
        assert rep.counts["inner_generated"] == 0
        assert all(s.verified for s in rep.separators)

    def test_nested_separators(self):
        p = make("recursive_exponential", 3)
        on = solve(p, config=SolverConfig(min_width=1e-9))
        off = solve(p, config=SolverConfig(min_width=1e-9, separation=False))
        assert on.counts["separated"] > 0
        assert abs(on.best_value.lo - off.best_value.lo) <= 1e-6
        assert on.best_value.lo <= 1.0 <= on.incumbent_value

    def test_degenerate_monotonicity(self):
        def build(rec, x):
            return 0.0 * rec.mark("s", x[0].sqr()) + x[1].sqr()

        p = ObjectiveProgram.from_function("flat", 2, build, (-1.0, 1.0), ["s"])
        rep = solve(p, config=SolverConfig(min_width=1e-3))
        assert rep.degenerate
        assert rep.best_value.lo <= 0.0 <= rep.best_value.hi

    def test_rejected_separator_reported(self):
        def build(rec, x):
            return rec.mark("m", x[0] * x[1]) + x[0]

        p = ObjectiveProgram.from_function("planted", 2, build, (1.0, 2.0), ["m"])
        rep = solve(p, config=SolverConfig(min_width=1e-3))
        (info,) = rep.separators
        assert not info.verified and info.witness == 0
        assert rep.counts["separated"] == 0


class TestSolve:
    def test_exponential_no_separation(self):
        rep = solve(make("exponential", 4), config=SolverConfig(separation=False))
        assert -1.0 in rep.best_value
        assert np.allclose(rep.incumbent, 0.0, atol=1e-6)

    def test_styblinski_tang_2(self):
        _, fmin = styblinski_tang_1d_min()
        rep = solve(make("styblinski_tang", 2), config=SolverConfig(min_width=1e-10))
        assert abs(rep.incumbent_value - 2 * fmin) <= 1e-6
        assert rep.best_value.lo <= 2 * fmin <= rep.best_value.hi

    def test_separation_reduces_styblinski_tang_4(self):
        cfg = dict(min_width=1e-3, f_tolerance=1e-3)
        on = solve(make("styblinski_tang", 4), config=SolverConfig(**cfg))
        off = solve(make("styblinski_tang", 4), config=SolverConfig(separation=False, **cfg))
        assert on.total_nodes < off.total_nodes

    def test_budget_exhausted(self):
        with pytest.raises(BudgetExhausted) as info:
            solve(make("shubert", 2), config=SolverConfig(max_nodes=20))
        rep = info.value.report
        assert rep.termination == "budget_exhausted"
        assert rep.best_value.lo <= shubert_2d_minimizers()[0] <= rep.best_value.hi

    def test_boundary_fixing(self):
        p = ObjectiveProgram.from_function(
            "edge", 2, lambda rec, x: x[0] + x[1].sqr(), [(0.0, 1.0), (-1.0, 1.0)]
        )
        rep = solve(p, config=SolverConfig(min_width=1e-6, separation=False, record_trace=True))
        assert rep.counts["boundary_fixed"] > 0
        assert rep.best_value.lo <= 0.0 <= rep.best_value.hi
        fixed = [r for r in rep.trace if r.origin is Origin.BOUNDARY_FIX]
        assert all(r.box[0] == Interval(0, 0) for r in fixed)

    def test_evaluation_errors_keep_boxes(self):
        p = ObjectiveProgram.from_function("root", 1, lambda rec, x: x[0].sqrt(), (-1.0, 1.0))
        rep = solve(p, config=SolverConfig(min_width=0.25, separation=False))
        assert rep.termination != "budget_exhausted"
        assert rep.best_value.lo == -math.inf
        assert rep.incumbent_value == 0.0

    def test_domain_checked(self):
        with pytest.raises(ValueError):
            solve(make("exponential", 2), [(0.0, 1.0)])

    @pytest.mark.parametrize("bad", [dict(min_width=0.0), dict(f_tolerance=-1.0), dict(max_nodes=0), dict(workers=0)])
    def test_config_invariants(self, bad):
        with pytest.raises(ValueError):
            SolverConfig(**bad)

    def test_default_min_width(self):
        cfg = SolverConfig()
        assert cfg.resolved_min_width([Interval(-5, 5)] * 2) == pytest.approx(1e-3)

    def test_depth_first(self):
        rep = solve(make("styblinski_tang", 2),
                    config=SolverConfig(exploration=Exploration.DEPTH_FIRST, separation=False, min_width=1e-4))
        fstar = 2 * styblinski_tang_1d_min()[1]
        assert rep.best_value.lo <= fstar <= rep.incumbent_value

    def test_workers(self):
        p = make("shubert", 2)
        one = solve(p, config=SolverConfig(min_width=1e-3))
        four = solve(p, config=SolverConfig(min_width=1e-3, workers=4))
        fstar = shubert_2d_minimizers()[0]
        assert four.best_value.lo <= fstar <= four.incumbent_value
        assert abs(four.incumbent_value - one.incumbent_value) <= 1e-5
        again = solve(p, config=SolverConfig(min_width=1e-3, workers=4))
        assert again.to_json() == four.to_json()


ORACLES = {
    "styblinski_tang": None,
    "exponential": (-1.0, [(0.0, 0.0)]),
    "recursive_exponential": (1.0, [(0.0, 0.0)]),
    "salomon": (0.0, [(0.0, 0.0)]),
    "shubert": None,
}


def oracle(name):
    if name == "styblinski_tang":
        x, f = styblinski_tang_1d_min()
        return 2 * f, [(x, x)]
    if name == "shubert":
        return shubert_2d_minimizers()
    return ORACLES[name]


def inside(box, point, tol=0.0):
    return all(b.lo - tol <= v <= b.hi + tol for b, v in zip(box, point))


@pytest.mark.parametrize("name", sorted(ORACLES))
@pytest.mark.parametrize("separation", [False, True])
def test_trace_replay_invariants(name, separation):
    fstar, minimizers = oracle(name)
    p = make(name, 2)
    rep = solve(p, config=SolverConfig(min_width=1e-3, separation=separation, record_trace=True))
    counts = rep.counts
    # node accounting
    assert counts["generated"] == sum(counts[k] for k in FINAL)
    assert len(rep.trace) == counts["generated"]
    assert len({r.id for r in rep.trace}) == len(rep.trace)
    # incumbent never increases and never undercuts the true minimum
    incs = [r.incumbent for r in rep.trace]
    assert all(a >= b for a, b in zip(incs, incs[1:]))
    assert all(v >= fstar - 1e-9 for v in incs)
    assert rep.best_value.lo <= fstar + 1e-9
    assert rep.incumbent_value >= rep.best_value.lo
    # boxes containing a minimiser are never eliminated
    for r in rep.trace:
        if any(b.lo == b.hi for b in r.box):
            continue
        if any(inside(r.box, m) for m in minimizers):
            assert r.status not in (Status.VALUE_ELIMINATED, Status.OPTIMALITY_ELIMINATED), r


@pytest.mark.parametrize("name", sorted(ORACLES))
def test_separation_is_conservative(name):
    p = make(name, 2)
    cfg = dict(min_width=1e-9, f_tolerance=1e-6)
    on = solve(p, config=SolverConfig(**cfg))
    off = solve(p, config=SolverConfig(separation=False, **cfg))
    assert abs(on.best_value.lo - off.best_value.lo) <= 1e-6 + 1e-9
    assert abs(on.incumbent_value - off.incumbent_value) <= 1e-6 + 1e-9


def test_determinism():
    p = make("shubert", 2)
    cfg = SolverConfig(min_width=1e-2, record_trace=True)
    assert solve(p, config=cfg).to_json() == solve(p, config=cfg).to_json()


def test_report_round_trip():
    rep = solve(make("recursive_exponential", 2), config=SolverConfig(record_trace=True))
    back = SolveReport.from_json(rep.to_json())
    assert back == rep
    assert back.to_json() == rep.to_json()
