import numpy as np
import pytest

from frlsc.classifier import (
    ConfusionMatrix,
    LabelScheme,
    classify,
    evaluate,
    make_label,
    score_matrix,
    train_multiclass,
    training_diagnostics,
)
from frlsc.data import Dataset, synth_lag_dataset
from frlsc.errors import StructuralError
from frlsc.function_space import FunctionalObservation, Grid
from frlsc.scalar_kernel import ScalarKernelParams
from frlsc.solver import RegularizationConfig


def cluster_dataset(seed=0, n_per_class=8, n_classes=3, p=2, m=33):
    """Well-separated clusters: class c curves live near the constant c."""
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    obs, labels = [], []
    for c in range(n_classes):
        for _ in range(n_per_class):
            arr = 3.0 * c + 0.05 * rng.standard_normal((p, m))
            obs.append(FunctionalObservation.from_array(grid, arr))
            labels.append(c)
    return Dataset(grid, obs, np.array(labels))


def fit(data, lam=1e-3, k=6, sigma=1.0, scheme=None, **kw):
    scheme = scheme or LabelScheme()
    return train_multiclass(
        data, RegularizationConfig(lam, k), ScalarKernelParams("gaussian", sigma),
        scheme, **kw
    )


class TestLabelScheme:
    def test_defaults(self):
        s = LabelScheme()
        assert s.kind == "heaviside" and s.scale == 1.0 and s.step_at == 0.5

    def test_validation(self):
        with pytest.raises(ValueError):
            LabelScheme("ramp")
        with pytest.raises(ValueError):
            LabelScheme("heaviside", scale=0.0)
        with pytest.raises(ValueError):
            LabelScheme("heaviside", step_at=1.0)


class TestMakeLabel:
    def test_constant(self):
        grid = Grid.uniform(9)
        lab = make_label(True, LabelScheme("constant", 2.5), grid)
        np.testing.assert_array_equal(lab.values, np.full(9, 2.5))

    def test_heaviside_step(self):
        grid = Grid.uniform(5)  # points 0, .25, .5, .75, 1
        lab = make_label(True, LabelScheme("heaviside", 1.0, 0.5), grid)
        np.testing.assert_array_equal(lab.values, [0, 0, 1, 1, 1])

    def test_negative_is_mirror(self):
        grid = Grid.uniform(11)
        scheme = LabelScheme("heaviside", 1.5, 0.3)
        pos = make_label(True, scheme, grid)
        neg = make_label(False, scheme, grid)
        np.testing.assert_array_equal(pos.values, -neg.values)


class TestConfusionMatrix:
    def make(self):
        return ConfusionMatrix(np.array([[5, 1], [0, 4]]), ["a", "b"])

    def test_accuracy(self):
        assert self.make().accuracy == pytest.approx(0.9)

    def test_column_totals(self):
        np.testing.assert_array_equal(self.make().column_totals(), [5, 5])

    def test_text_table(self):
        text = self.make().to_text()
        assert "Total Recognition Rate = 90.00%" in text
        assert "100.0" in text  # per-column percentage for class a

    def test_csv(self):
        lines = self.make().to_csv().strip().splitlines()
        assert lines[0] == "predicted\\true,a,b"
        assert lines[1] == "a,5,1"


class TestTrainMulticlass:
    def test_requires_two_classes(self):
        data = cluster_dataset(n_classes=1)
        with pytest.raises(ValueError):
            fit(data)

    def test_separable_clusters_train_accuracy(self):
        data = cluster_dataset(seed=1)
        model = fit(data, lam=1e-4)
        assert evaluate(model, data).accuracy == 1.0

    def test_class_swap_swaps_models(self):
        data = cluster_dataset(seed=2, n_classes=2)
        swapped = Dataset(
            data.grid, data.observations, 1 - data.labels, list(data.class_names)
        )
        m1 = fit(data)
        m2 = fit(swapped)
        for b1, b2 in zip(m1.per_class[0].beta, m2.per_class[1].beta):
            np.testing.assert_array_equal(b1.values, b2.values)

    def test_shared_eigen_matches_independent_training(self):
        from frlsc.integral_operator import operator_eigensystem
        from frlsc.scalar_kernel import gram_matrix
        from frlsc.solver import build_kronecker_eigen

        data = cluster_dataset(seed=3)
        params = ScalarKernelParams("gaussian", 1.0)
        shared = train_multiclass(
            data, RegularizationConfig(1e-3, 6), params, LabelScheme()
        )
        ke = build_kronecker_eigen(
            gram_matrix(data.observations, params),
            operator_eigensystem(6, data.grid),
        )
        explicit = train_multiclass(
            data, RegularizationConfig(1e-3, 6), params, LabelScheme(), ke=ke
        )
        for a, b in zip(shared.per_class, explicit.per_class):
            for ba, bb in zip(a.beta, b.beta):
                np.testing.assert_array_equal(ba.values, bb.values)

    def test_worker_count_does_not_change_results(self):
        data = cluster_dataset(seed=4)
        serial = fit(data)
        threaded = fit(data, workers=4)
        np.testing.assert_array_equal(
            score_matrix(serial, data.observations),
            score_matrix(threaded, data.observations),
        )


class TestClassify:
    def test_tie_breaks_to_lowest_index(self):
        # identical training observations in both classes: scores exactly tie
        grid = Grid.uniform(21)
        obs = FunctionalObservation.from_array(grid, np.ones((1, 21)))
        data = Dataset(grid, [obs, obs], np.array([0, 1]))
        model = fit(data, lam=0.5, k=4)
        cls, scores = classify(model, obs)
        assert cls == 0
        assert scores[0] == pytest.approx(scores[1], abs=1e-12)

    def test_argmax_invariant_under_label_rescaling(self):
        data = cluster_dataset(seed=5)
        gamma = 3.7
        m1 = fit(data, scheme=LabelScheme("heaviside", 1.0))
        m2 = fit(data, scheme=LabelScheme("heaviside", gamma))
        s1 = score_matrix(m1, data.observations)
        s2 = score_matrix(m2, data.observations)
        # the projection score divides by ||y+||^2, so the gamma factors cancel
        # and the scores (not just their order) are unchanged
        np.testing.assert_allclose(s2, s1, rtol=1e-9)
        np.testing.assert_array_equal(np.argmax(s1, axis=1), np.argmax(s2, axis=1))
        assert gamma > 0  # invariance is only claimed for positive rescaling

    def test_two_class_sign_rule(self):
        # with N=2 the one-vs-all labels are mirrored, so s1 = -s0 and the
        # decision agrees with the sign of the single binary score
        data = cluster_dataset(seed=6, n_classes=2)
        model = fit(data)
        scores = score_matrix(model, data.observations)
        np.testing.assert_allclose(scores[:, 1], -scores[:, 0], atol=1e-12)
        predicted = np.argmax(scores, axis=1)
        np.testing.assert_array_equal(predicted, (scores[:, 0] < 0).astype(int))

    def test_unknown_rule_rejected(self):
        data = cluster_dataset(seed=7)
        model = fit(data)
        with pytest.raises(ValueError):
            classify(model, data.observations[0], rule="nearest")

    def test_distance_rule_on_separable_data(self):
        data = cluster_dataset(seed=8)
        model = fit(data, lam=1e-4)
        assert evaluate(model, data, rule="distance").accuracy == 1.0


class TestEvaluate:
    def test_perfect_classifier_is_diagonal(self):
        data = cluster_dataset(seed=9)
        model = fit(data, lam=1e-4)
        cm = evaluate(model, data)
        assert np.all(cm.counts == np.diag(np.diag(cm.counts)))
        assert cm.accuracy == 1.0

    def test_column_sums_match_class_counts(self):
        data = cluster_dataset(seed=10)
        model = fit(data)
        cm = evaluate(model, data)
        np.testing.assert_array_equal(cm.column_totals(), data.class_counts())

    def test_empty_test_set(self):
        data = cluster_dataset(seed=11)
        model = fit(data)
        empty = Dataset(data.grid, [], np.array([], dtype=int), list(data.class_names))
        with pytest.raises(ValueError):
            evaluate(model, empty)

    def test_class_mismatch(self):
        data = cluster_dataset(seed=12)
        model = fit(data)
        renamed = Dataset(data.grid, data.observations, data.labels, ["x", "y", "z"])
        with pytest.raises(StructuralError):
            evaluate(model, renamed)

    def test_determinism(self):
        data = synth_lag_dataset(6, 3, 2, 33, 1.0, seed=13)
        cm1 = evaluate(fit(data), data)
        cm2 = evaluate(fit(data), data)
        np.testing.assert_array_equal(cm1.counts, cm2.counts)


class TestDiagnostics:
    def test_report_fields(self):
        data = cluster_dataset(seed=14)
        model = fit(data, k=6)
        diag = training_diagnostics(data, model)
        assert diag["k"] == 6 and diag["n"] == data.n
        assert len(diag["delta"]) == 6
        assert 0.0 <= diag["discarded_energy_ratio"] <= 1.0

    def test_discarded_energy_decreases_with_k(self):
        data = cluster_dataset(seed=15)
        r1 = training_diagnostics(data, fit(data, k=1))["discarded_energy_ratio"]
        r8 = training_diagnostics(data, fit(data, k=8))["discarded_energy_ratio"]
        assert r8 < r1
