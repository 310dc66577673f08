import numpy as np
import pytest

from oracles import shubert_factor, shubert_factor_enclosure
from subsep import BENCHMARKS, make
from subsep.functions import ObjectiveProgram
from subsep.interval import Interval
from subsep.separability import (
    MonotonicityTag,
    VerdictTag,
    check_monotonicity,
    classify,
    verify_separator,
)
from subsep.tape import record, reverse_sweep


def sweep(p, box=None):
    t = record(p, p.default_box if box is None else box)
    return t, reverse_sweep(t)


@pytest.mark.parametrize(
    "adj,tag",
    [
        (Interval(0.5, 0.5), MonotonicityTag.INCREASING),
        (Interval(0.0, 3.0), MonotonicityTag.INCREASING),
        (Interval(-2.0, 0.0), MonotonicityTag.DECREASING),
        (Interval(0.0, 0.0), MonotonicityTag.DEGENERATE),
        (Interval(-1.0, 1.0), MonotonicityTag.UNKNOWN),
    ],
)
def test_classify(adj, tag):
    m = classify(adj)
    assert m.tag is tag
    assert m.adjoint == adj
    assert m.is_monotone == (tag is not MonotonicityTag.UNKNOWN)


class TestMonotonicity:
    def test_styblinski_tang_any_box(self):
        p = make("styblinski_tang", 3)
        rng = np.random.default_rng(0)
        for _ in range(20):
            box = [Interval(*sorted(rng.uniform(-5, 5, 2))) for _ in range(3)]
            t, r = sweep(p, box)
            for label in p.separator_labels:
                m = check_monotonicity(t, r, label)
                assert m.tag is MonotonicityTag.INCREASING
                assert m.adjoint == Interval(0.5, 0.5)

    def test_no_sweep_performed(self):
        p = make("styblinski_tang", 2)
        t, r = sweep(p)
        before = t.sweeps
        check_monotonicity(t, r, "s0")
        assert t.sweeps == before

    def test_recursive_exponential_lower_bound(self):
        p = make("recursive_exponential", 2)
        t, r = sweep(p, p.presets["example"])
        m = check_monotonicity(t, r, "y1")
        assert m.tag is MonotonicityTag.INCREASING
        assert m.adjoint.lo >= 1.0

    def test_shubert_decreasing(self):
        p = make("shubert", 2)
        box = [Interval(-0.05, 0.05)] * 2
        t, r = sweep(p, box)
        m = check_monotonicity(t, r, "s0")
        assert m.tag is MonotonicityTag.DECREASING
        # the adjoint is the enclosure of the other factor
        lo, hi = shubert_factor_enclosure(-0.05, 0.05)
        assert m.adjoint.lo <= lo + 1e-12 and m.adjoint.hi >= hi - 1e-12
        assert float(shubert_factor(0.0)) in m.adjoint
        assert float(shubert_factor(0.0)) == pytest.approx(-1.2357, abs=2e-4)

    def test_salomon_unknown_on_root(self):
        p = make("salomon", 4)
        t, r = sweep(p)
        assert check_monotonicity(t, r, "S").tag is MonotonicityTag.UNKNOWN


class TestVerify:
    def test_one_sweep(self):
        p = make("exponential", 2)
        t, r = sweep(p)
        before = t.sweeps
        verify_separator(t, r, "s0")
        assert t.sweeps == before + 1

    def test_recursive_exponential(self):
        p = make("recursive_exponential", 2)
        v = verify_separator(*sweep(p), "y1")
        assert v.tag is VerdictTag.VERIFIED
        assert v.X1 == {0} and v.X2 == {1}

    def test_exponential(self):
        p = make("exponential", 2)
        v = verify_separator(*sweep(p), "s0")
        assert v.verified and v.X1 == {0} and v.X2 == {1}

    def test_planted_non_separator(self):
        def build(rec, x):
            return rec.mark("m", x[0] * x[1]) + x[0]

        p = ObjectiveProgram.from_function("planted", 2, build, (1.0, 2.0), ["m"])
        t, r = sweep(p)
        assert r.input_adjoints[0] == Interval(2, 3)
        v = verify_separator(t, r, "m")
        assert v.tag is VerdictTag.REJECTED
        assert v.witness == 0

    def test_empty_x2_rejected(self):
        p = make("salomon", 2)
        v = verify_separator(*sweep(p), "S")
        assert not v.verified
        assert v.X1 == {0, 1} and v.X2 == frozenset()
        assert v.witness is None

    def test_unused_input_goes_to_x2(self):
        def build(rec, x):
            return rec.mark("s", x[0].sqr()).exp() + 0.0 * x[1]

        p = ObjectiveProgram.from_function("unused", 3, build, (-1.0, 1.0), ["s"])
        v = verify_separator(*sweep(p), "s")
        assert v.verified
        assert v.X1 == {0} and v.X2 == {1, 2}

    def test_degenerate_seed_flagged(self):
        def build(rec, x):
            return 0.0 * rec.mark("s", x[0].sqr()) + x[1]

        p = ObjectiveProgram.from_function("flat", 2, build, (-1.0, 1.0), ["s"])
        v = verify_separator(*sweep(p), "s")
        assert v.degenerate
        assert v.verified and v.X1 == {0}

    def test_tolerance(self):
        p = make("exponential", 2)
        t, r = sweep(p)
        with pytest.raises(ValueError):
            verify_separator(t, r, "s0", tolerance=-1.0)
        assert verify_separator(t, r, "s0", tolerance=1e-12).verified

    @pytest.mark.parametrize("name", sorted(BENCHMARKS))
    def test_all_marked_separators_on_random_sub_boxes(self, name):
        p = make(name, 3)
        rng = np.random.default_rng(5)
        boxes = [p.default_box]
        for _ in range(50):
            boxes.append([
                Interval(*sorted(rng.uniform(b.lo, b.hi, 2))) for b in p.default_box
            ])
        for box in boxes:
            t, r = sweep(p, box)
            for sep in p.separators:
                v = verify_separator(t, r, sep.label, 0.0)
                assert v.verified, (name, sep.label, box)
                assert v.X1 == sep.x1_hint
                assert v.X1 | v.X2 == set(range(3)) and not v.X1 & v.X2

    def test_nested_boxes(self):
        p = make("recursive_exponential", 3)
        box = list(p.default_box)
        for _ in range(20):
            box = [Interval(b.lo + 0.1 * (b.hi - b.lo), b.hi - 0.05 * (b.hi - b.lo)) for b in box]
            t, r = sweep(p, box)
            assert verify_separator(t, r, "y1").verified
            assert verify_separator(t, r, "y2").X1 == {0, 1}
