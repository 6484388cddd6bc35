import pytest
from hypothesis import given, strategies as st

from gainhmm import (
    Annotation,
    aggregate,
    base_accuracy,
    boundary_metrics,
    boundary_report,
    match_boundaries,
)

colorings = st.lists(st.integers(min_value=0, max_value=2), min_size=2, max_size=30)


class TestMatching:
    def test_single_match_within_tolerance(self):
        rep = boundary_report([(50, 0, 1)], [(48, 0, 1)], tolerance=10)
        assert rep.sensitivity == 1.0
        assert rep.precision == 1.0
        assert rep.f1 == 1.0
        assert rep.matched == ((50, 48, 2),)

    def test_extra_prediction_halves_precision(self):
        rep = boundary_report([(50, 0, 1), (120, 0, 1)], [(48, 0, 1)], tolerance=10)
        assert rep.sensitivity == 1.0
        assert rep.precision == 0.5

    def test_pair_mismatch_never_matches(self):
        rep = boundary_report([(50, 0, 1)], [(50, 1, 0)], tolerance=10)
        assert rep.sensitivity == 0.0
        assert rep.precision == 0.0
        assert rep.f1 == 0.0

    def test_closest_candidate_wins(self):
        matched = match_boundaries(
            [(10, 0, 1), (14, 0, 1)], [(13, 0, 1)], tolerance=5)
        assert matched == [(14, 13, 1)]

    def test_tie_prefers_smaller_pred_gap(self):
        matched = match_boundaries(
            [(10, 0, 1), (16, 0, 1)], [(13, 0, 1)], tolerance=5)
        assert matched == [(10, 13, 3)]

    def test_outside_tolerance(self):
        assert match_boundaries([(50, 0, 1)], [(61, 0, 1)], tolerance=10) == []

    def test_negative_tolerance(self):
        with pytest.raises(ValueError):
            match_boundaries([], [], -1)


class TestBoundaryMetrics:
    def test_no_boundaries_anywhere(self):
        a = Annotation([0, 0, 0])
        rep = boundary_metrics(a, a, 5)
        assert (rep.sensitivity, rep.precision, rep.f1) == (1.0, 1.0, 1.0)

    def test_pred_has_none(self):
        rep = boundary_metrics(Annotation([0, 0]), Annotation([0, 1]), 5)
        assert rep.precision == 1.0
        assert rep.sensitivity == 0.0
        assert rep.f1 == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            boundary_metrics(Annotation([0, 1]), Annotation([0, 1, 0]), 1)

    @given(colorings, st.integers(min_value=0, max_value=8))
    def test_self_match_is_perfect(self, colors, tol):
        ann = Annotation(colors)
        rep = boundary_metrics(ann, ann, tol)
        assert (rep.sensitivity, rep.precision, rep.f1) == (1.0, 1.0, 1.0)

    @given(colorings, colorings, st.integers(min_value=0, max_value=6))
    def test_monotone_in_tolerance(self, a, b, tol):
        n = min(len(a), len(b))
        pred, truth = Annotation(a[:n]), Annotation(b[:n])
        lo = boundary_metrics(pred, truth, tol)
        hi = boundary_metrics(pred, truth, tol + 3)
        assert hi.sensitivity >= lo.sensitivity
        assert hi.precision >= lo.precision

    @given(colorings, colorings)
    def test_matching_is_one_to_one(self, a, b):
        n = min(len(a), len(b))
        pred, truth = Annotation(a[:n]), Annotation(b[:n])
        rep = boundary_metrics(pred, truth, 4)
        assert len(rep.matched) <= min(rep.n_pred, rep.n_truth)
        pred_gaps = [m[0] for m in rep.matched]
        truth_gaps = [m[1] for m in rep.matched]
        assert len(set(pred_gaps)) == len(pred_gaps)
        assert len(set(truth_gaps)) == len(truth_gaps)


class TestBaseAccuracy:
    def test_identical(self):
        a = Annotation([0, 1, 1, 0])
        assert base_accuracy(a, a) == 1.0

    def test_complementary(self):
        assert base_accuracy(Annotation([0, 1]), Annotation([1, 0])) == 0.0

    def test_three_quarters(self):
        got = base_accuracy(Annotation([0, 0, 0, 1]), Annotation([0, 0, 1, 1]))
        assert got == 0.75

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            base_accuracy(Annotation([0]), Annotation([0, 1]))


class TestAggregate:
    def test_singleton_identity(self):
        summary = aggregate([{"sensitivity": 0.7, "f1": 0.4}])
        assert summary["count"] == 1
        assert summary["mean"] == {"sensitivity": 0.7, "f1": 0.4}
        assert summary["median"] == {"sensitivity": 0.7, "f1": 0.4}

    def test_mean_of_two(self):
        summary = aggregate([{"sensitivity": 0.0}, {"sensitivity": 1.0}])
        assert summary["mean"]["sensitivity"] == 0.5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_group_by_decoder(self):
        rows = [
            {"decoder": "viterbi", "f1": 0.2},
            {"decoder": "herd", "f1": 0.8},
            {"decoder": "herd", "f1": 0.6},
        ]
        summary = aggregate(rows, by="decoder")
        assert summary["groups"]["herd"]["mean"]["f1"] == pytest.approx(0.7)
        assert summary["groups"]["viterbi"]["count"] == 1
