import numpy as np
import pytest

from frlsc import baseline as bl
from frlsc.classifier import LabelScheme, score_matrix, train_multiclass
from frlsc.data import Dataset
from frlsc.errors import StructuralError
from frlsc.function_space import FunctionalObservation, Grid
from frlsc.scalar_kernel import ScalarKernelParams
from frlsc.solver import RegularizationConfig


def vector_dataset(seed=0, n_per_class=6, n_classes=2, p=2, m=17, spread=3.0):
    rng = np.random.default_rng(seed)
    grid = Grid.uniform(m)
    obs, labels = [], []
    for c in range(n_classes):
        for _ in range(n_per_class):
            arr = spread * c + 0.05 * rng.standard_normal((p, m))
            obs.append(FunctionalObservation.from_array(grid, arr))
            labels.append(c)
    return Dataset(grid, obs, np.array(labels))


class TestVectorize:
    def test_single_channel_is_verbatim(self):
        data = vector_dataset(p=1)
        vd = bl.vectorize(data)
        np.testing.assert_array_equal(
            vd.rows[0], data.observations[0].channels[0].values
        )

    def test_channel_major_order(self):
        grid = Grid.uniform(3)
        arr = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        obs = FunctionalObservation.from_array(grid, arr)
        vd = bl.vectorize(Dataset(grid, [obs, obs], np.array([0, 1])))
        np.testing.assert_array_equal(vd.rows[0], [1, 2, 3, 4, 5, 6])

    def test_round_trip(self):
        data = vector_dataset(seed=1, p=3)
        vd = bl.vectorize(data)
        back = bl.devectorize_rows(vd)
        for i, obs in enumerate(data.observations):
            np.testing.assert_array_equal(back[i], obs.as_array())


class TestTrainRlsc:
    def test_single_point_closed_form(self):
        # K = [[1]], y = +1  =>  c = 1/(1+lambda)
        grid = Grid.uniform(5)
        obs = FunctionalObservation.from_array(grid, np.zeros((1, 5)))
        vd = bl.vectorize(Dataset(grid, [obs], np.array([0]), ["a"]))
        lam = 0.7
        model = bl.train_rlsc(vd, sigma=1.0, lam=lam)
        assert model.coef[0, 0] == pytest.approx(1.0 / (1.0 + lam), rel=1e-12)

    def test_duplicated_points_opposite_labels(self):
        # identical inputs in both classes: symmetry forces zero scores there
        grid = Grid.uniform(9)
        obs = FunctionalObservation.from_array(grid, np.ones((1, 9)))
        vd = bl.vectorize(Dataset(grid, [obs, obs], np.array([0, 1])))
        model = bl.train_rlsc(vd, sigma=1.0, lam=0.5)
        scores = bl.score_matrix_rlsc(model, vd.rows)
        np.testing.assert_allclose(scores, np.zeros((2, 2)), atol=1e-12)

    def test_validation(self):
        vd = bl.vectorize(vector_dataset())
        with pytest.raises(ValueError):
            bl.train_rlsc(vd, sigma=1.0, lam=0.0)
        with pytest.raises(ValueError):
            bl.train_rlsc(vd, sigma=0.0, lam=0.5)

    def test_solve_residual(self):
        data = vector_dataset(seed=2, n_per_class=10)
        vd = bl.vectorize(data)
        model = bl.train_rlsc(vd, sigma=2.0, lam=0.3)
        w = np.ones(vd.rows.shape[1])
        from frlsc import _backend

        K = np.exp(-_backend.pairwise_sqdist(vd.rows[:, None, :], w) / (2 * 4.0))
        np.fill_diagonal(K, 1.0)
        Y = np.where(vd.labels[:, None] == np.arange(2)[None, :], 1.0, -1.0)
        resid = np.linalg.norm((K + 0.3 * np.eye(vd.n)) @ model.coef - Y)
        assert resid <= 1e-8 * np.linalg.norm(Y)

    def test_determinism(self):
        vd = bl.vectorize(vector_dataset(seed=3))
        m1 = bl.train_rlsc(vd, sigma=1.5, lam=0.2)
        m2 = bl.train_rlsc(vd, sigma=1.5, lam=0.2)
        np.testing.assert_array_equal(m1.coef, m2.coef)


class TestClassifyRlsc:
    def test_separable_clusters(self):
        data = vector_dataset(seed=4, n_classes=3)
        vd = bl.vectorize(data)
        model = bl.train_rlsc(vd, sigma=bl.median_sigma_euclidean(vd.rows), lam=1e-4)
        assert bl.evaluate_rlsc(model, data).accuracy == 1.0

    def test_tie_breaks_to_lowest_index(self):
        grid = Grid.uniform(9)
        obs = FunctionalObservation.from_array(grid, np.ones((1, 9)))
        vd = bl.vectorize(Dataset(grid, [obs, obs], np.array([0, 1])))
        model = bl.train_rlsc(vd, sigma=1.0, lam=0.5)
        cls, scores = bl.classify_rlsc(model, vd.rows[0])
        assert cls == 0 and scores[0] == pytest.approx(scores[1], abs=1e-12)

    def test_two_class_sign_rule(self):
        data = vector_dataset(seed=5)
        vd = bl.vectorize(data)
        model = bl.train_rlsc(vd, sigma=2.0, lam=0.1)
        scores = bl.score_matrix_rlsc(model, vd.rows)
        np.testing.assert_allclose(scores[:, 1], -scores[:, 0], atol=1e-12)

    def test_feature_dimension_checked(self):
        vd = bl.vectorize(vector_dataset(seed=6))
        model = bl.train_rlsc(vd, sigma=1.0, lam=0.5)
        with pytest.raises(StructuralError):
            bl.score_matrix_rlsc(model, np.zeros((1, 5)))


class TestMedianSigma:
    def test_positive(self):
        vd = bl.vectorize(vector_dataset(seed=7))
        assert bl.median_sigma_euclidean(vd.rows) > 0

    def test_fallback(self):
        assert bl.median_sigma_euclidean(np.zeros((1, 4))) == 1.0
        assert bl.median_sigma_euclidean(np.ones((3, 4))) == 1.0


class TestParityWithFunctional:
    def test_identity_operator_parity(self):
        """With T = identity, p = 1, constant labels, and matched bandwidths,
        the functional classifier's scores equal the scalar baseline's.

        Curves vanish at the endpoints so the trapezoid-weighted L2 distance
        is exactly h times the Euclidean distance of the sampled vectors;
        sigma_baseline = sigma_functional / sqrt(h) then makes the two Gram
        matrices identical.
        """
        m = 33
        grid = Grid.uniform(m)
        rng = np.random.default_rng(8)
        t = grid.points
        obs, labels = [], []
        for c in range(2):
            for _ in range(6):
                amps = (2.0 * c + rng.standard_normal(3)) / np.arange(1, 4)
                vals = np.sin(np.pi * np.outer(np.arange(1, 4), t))
                obs.append(
                    FunctionalObservation.from_array(grid, (amps @ vals)[None, :])
                )
                labels.append(c)
        data = Dataset(grid, obs, np.array(labels))
        lam = 0.3
        sigma_f = 0.5
        fmodel = train_multiclass(
            data,
            RegularizationConfig(lam, 1),
            ScalarKernelParams("gaussian", sigma_f),
            LabelScheme("constant", 1.0),
            operator="identity",
        )
        f_scores = score_matrix(fmodel, data.observations)

        vd = bl.vectorize(data)
        bmodel = bl.train_rlsc(vd, sigma=sigma_f / np.sqrt(grid.h), lam=lam)
        b_scores = bl.score_matrix_rlsc(bmodel, vd.rows)
        np.testing.assert_allclose(f_scores, b_scores, atol=1e-6)
