import time

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.classifier.classifier import (
    ClassifierModel,
    accuracy,
    class_residuals,
    classify,
    fit_model,
)
from src.classifier.coders import code_crc, code_nrc, code_nscr, code_scr, code_src
from src.classifier.models import CoderKind, CoderName, coder_from_name
from src.data.models import SampleMatrix
from src.data.preprocessing import normalize_columns, normalize_query
from src.data.splits import subsample_per_class
from src.data.synthetic import make_gaussian_atoms
from src.errors import ConfigError, DataError
from src.oracle.reference import OracleConfig, reference_nscr
from src.solver.gram import GramCache, precompute
from src.solver.models import SolverConfig
from tests.helpers import labeled, random_instance, unit_columns

PRECISE = SolverConfig(alpha=0.01, beta=0.01, tol=1e-10, max_iter=5000)


# ---------------- Coders ---------------- #
class TestCoderKind:
    def test_factories(self):
        config = SolverConfig(alpha=0.05, beta=0.02)
        assert CoderKind.nscr(config).config == config
        nrc = CoderKind.nrc(config)
        assert (nrc.config.alpha, nrc.config.beta) == (0.0, 0.0)
        src = CoderKind.src(0.4, config)
        assert (src.config.alpha, src.config.beta, src.lam) == (0.0, 0.4, 0.4)
        assert CoderKind.crc().lam == 1e-3

    def test_positive_lambda(self):
        with pytest.raises(ConfigError):
            CoderKind.crc(0.0)
        with pytest.raises(ConfigError):
            CoderKind.src(-1.0)

    def test_from_name(self):
        config = SolverConfig()
        assert coder_from_name(" SRC ", config).name is CoderName.src
        assert coder_from_name("crc", config, lam=0.5).lam == 0.5
        assert coder_from_name("scr", config).config == config
        with pytest.raises(ConfigError, match="nscr, crc, nrc, src, scr"):
            coder_from_name("svm", config)


class TestCrc:
    def test_identity(self):
        assert_allclose(code_crc(np.eye(2), np.array([1.0, 0.0]), 1.0), [0.5, 0.0])

    def test_shrinkage_bound(self, rng):
        x, y = random_instance(rng, 6, 10)
        c = code_crc(x, y, 1e6)
        assert np.linalg.norm(c) <= np.linalg.norm(x.T @ y) / 1e6

    def test_normal_equations(self, rng):
        x, y = random_instance(rng, 6, 10)
        lam = 1e-3
        c = code_crc(x, y, lam)
        residual = (x.T @ x + lam * np.eye(10)) @ c - x.T @ y
        assert np.max(np.abs(residual)) <= 1e-10

    def test_least_squares_limit(self, rng):
        x, y = random_instance(rng, 10, 5)
        c = code_crc(x, y, 1e-10)
        least_squares = np.linalg.lstsq(x, y, rcond=None)[0]
        assert_allclose(c, least_squares, atol=1e-6)


class TestNrc:
    def test_orthonormal_atoms(self, tight):
        assert_allclose(code_nrc(np.eye(2), np.array([1.0, 0.0]), tight), [1.0, 0.0], atol=1e-6)

    def test_negative_direction_is_forbidden(self, tight):
        x = np.array([[0.6], [0.8]])
        assert_allclose(code_nrc(x, -x[:, 0], tight), [0.0], atol=1e-12)

    def test_equals_nscr_with_zero_weights(self, rng):
        x, y = random_instance(rng, 8, 12)
        config = SolverConfig(alpha=0.0, beta=0.0, tol=1e-6, max_iter=200)
        nrc = code_nrc(x, y, SolverConfig(alpha=0.3, beta=0.3, tol=1e-6, max_iter=200))
        nscr = code_nscr(x, y, config)
        assert np.max(np.abs(nrc - nscr)) <= 1e-8


class TestSrc:
    def test_soft_threshold_on_orthonormal_atoms(self):
        config = SolverConfig(rho=10.0, tol=1e-10, max_iter=2000)
        c = code_src(np.eye(2), np.array([1.0, 0.0]), 0.4, config)
        assert_allclose(c, [0.8, 0.0], atol=1e-6)

    def test_zero_when_lambda_dominates(self, rng):
        x, y = random_instance(rng, 6, 8)
        lam = 3.0 * np.max(np.abs(x.T @ y))
        config = SolverConfig(tol=1e-10, max_iter=2000)
        assert_allclose(code_src(x, y, lam, config), 0.0, atol=1e-8)

    def test_lasso_kkt(self, rng):
        x, y = random_instance(rng, 10, 15)
        lam = 0.1
        config = SolverConfig(rho=1.0, tol=1e-10, max_iter=20000)
        c = code_src(x, y, lam, config)
        g = 2.0 * x.T @ (x @ c - y)
        assert np.max(np.abs(g)) <= lam + 1e-4
        support = np.abs(c) > 1e-6
        assert_allclose(g[support], -lam * np.sign(c[support]), atol=1e-4)


class TestScr:
    def test_elastic_net_keeps_signs(self):
        y = np.array([0.6, -0.8])
        config = SolverConfig(alpha=0.1, beta=0.2, tol=1e-10, max_iter=2000)
        c = code_scr(np.eye(2), y, config)
        assert_allclose(c, [0.5 / 1.1, -0.7 / 1.1], atol=1e-6)
        # тот же запрос в NSCR: отрицательная часть обнуляется
        assert code_nscr(np.eye(2), y, config)[1] == 0.0


# ---------------- Residuals ---------------- #
class TestClassResiduals:
    def test_zero_coding(self, rng):
        matrix = labeled(unit_columns(rng.standard_normal((5, 6))), list("aabbcc"))
        y = np.array([0.0, 0.6, 0.0, 0.8, 0.0])
        assert_allclose(class_residuals(matrix, y, np.zeros(6)), np.ones(3))

    def test_exact_atom(self):
        matrix = labeled(np.eye(3), ["a", "a", "b"])
        residuals = class_residuals(matrix, np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]))
        assert_allclose(residuals, [0.0, 1.0])

    def test_direct_recomputation(self, rng):
        matrix = labeled(rng.standard_normal((7, 9)), list("aaabbbccc"))
        y = rng.standard_normal(7)
        coding = rng.standard_normal(9)
        residuals = class_residuals(matrix, y, coding)
        for k in range(3):
            block = matrix.partition.block(k)
            explicit = y - matrix.values[:, block] @ coding[block]
            assert residuals[k] ** 2 == pytest.approx(np.sum(explicit**2), abs=1e-12)

    def test_length_mismatch(self):
        matrix = labeled(np.eye(3), ["a", "a", "b"])
        with pytest.raises(DataError):
            class_residuals(matrix, np.ones(3), np.ones(2))


# ---------------- classify ---------------- #
class TestClassify:
    def test_two_orthogonal_classes(self):
        matrix = labeled(np.eye(2), ["first", "second"])
        result = classify(matrix, np.array([0.0, 2.0]), CoderKind.nscr(PRECISE))
        assert result.label == "second"
        assert result.label_index == 1
        assert_allclose(result.residuals, [1.0, 0.0], atol=0.02)

    def test_tie_goes_to_first_class(self):
        matrix = labeled(np.eye(2), ["a", "b"])
        for coder in (CoderKind.nscr(PRECISE), CoderKind.crc(), CoderKind.nrc(PRECISE)):
            result = classify(matrix, np.array([1.0, 1.0]), coder)
            assert result.residuals[0] == result.residuals[1]
            assert result.label == "a"

    def test_zero_query(self):
        matrix = labeled(np.eye(2), ["a", "b"])
        with pytest.raises(DataError, match="zero query"):
            classify(matrix, np.zeros(2), CoderKind.crc())

    def test_argmin_and_bounds(self, rng):
        matrix = normalize_columns(labeled(rng.standard_normal((12, 20)), list("abcd" * 5)))
        for coder_name in ("nscr", "crc", "nrc", "src", "scr"):
            coder = coder_from_name(coder_name, SolverConfig())
            for _ in range(5):
                y = rng.standard_normal(12)
                result = classify(matrix, y, coder)
                assert result.label_index == int(np.argmin(result.residuals))
                assert result.residuals.min() >= 0.0
                for k in range(matrix.n_classes):
                    block = matrix.partition.block(k)
                    bound = 1.0 + np.linalg.norm(matrix.values[:, block]) * np.linalg.norm(
                        result.coding[block]
                    )
                    assert result.residuals[k] <= bound + 1e-12

    def test_permutation_equivariance(self, rng):
        values = unit_columns(rng.standard_normal((10, 9)))
        labels = ["0"] * 3 + ["1"] * 3 + ["2"] * 3
        original = labeled(values, labels)
        # блоки переставлены: класс 0 -> "2", 1 -> "0", 2 -> "1"
        rename = {"0": "2", "1": "0", "2": "1"}
        permuted = labeled(values, [rename[label] for label in labels])

        coder = CoderKind.nscr(PRECISE)
        y = rng.standard_normal(10)
        before = classify(original, y, coder)
        after = classify(permuted, y, coder)
        assert_allclose(after.residuals, before.residuals[[1, 2, 0]], atol=1e-6)
        assert after.label == rename[before.label]

    def test_synthetic_subspaces(self, subspace_data):
        train, holdout = subsample_per_class(subspace_data, 20, seed=0)
        model = fit_model(train, CoderKind.nscr(SolverConfig(alpha=0.01, beta=0.01)))
        results = model.classify_many(holdout.values)
        assert len(results) == 200
        assert accuracy([r.label for r in results], holdout.labels()) >= 0.99

    def test_synthetic_subspaces_agree_with_oracle(self, subspace_data):
        train, holdout = subsample_per_class(subspace_data, 20, seed=0)
        model = fit_model(train, CoderKind.nscr(SolverConfig(alpha=0.01, beta=0.01)))
        precise = OracleConfig(step_tol=1e-8)

        agree = 0
        for j in range(holdout.n_samples):
            y = normalize_query(holdout.values[:, j])
            coding = reference_nscr(model.x, y, 0.01, 0.01, precise)
            label = model.x.partition.class_ids[
                int(np.argmin(class_residuals(model.x, y, coding)))
            ]
            agree += label == model.classify(holdout.values[:, j]).label
        assert holdout.n_samples == 200
        assert agree / holdout.n_samples >= 0.99


# ---------------- Model ---------------- #
class TestClassifierModel:
    def test_training_atom_is_recovered(self):
        atoms = make_gaussian_atoms(3, 20, 4, seed=2)
        config = SolverConfig(alpha=1e-8, beta=1e-8, rho=1.0, tol=1e-12, max_iter=20000)
        model = fit_model(atoms, CoderKind.nscr(config))
        for j in (0, 5, 11):
            result = model.classify(atoms.values[:, j])
            assert result.label == atoms.labels()[j]
            assert result.residuals[result.label_index] < 1e-6

    def test_deterministic_factors(self, subspace_data):
        coder = CoderKind.nscr(SolverConfig())
        first = fit_model(subspace_data, coder)
        second = fit_model(subspace_data, coder)
        assert_array_equal(first.gram.factor, second.gram.factor)

    def test_reuse_matches_fresh_precompute(self, subspace_data):
        train, holdout = subsample_per_class(subspace_data, 20, seed=1)
        coder = CoderKind.nscr(SolverConfig())
        model = fit_model(train, coder)

        queries = holdout.values[:, :100]
        reused = [r.label for r in model.classify_many(queries)]
        fresh = [classify(model.x, q, coder, GramCache()).label for q in queries.T]
        assert reused == fresh
        assert model.cache.misses == 1

    def test_parallel_order_preserved(self, subspace_data, threads):
        threads("4")
        train, holdout = subsample_per_class(subspace_data, 20, seed=2)
        model = fit_model(train, CoderKind.nscr(SolverConfig()))
        parallel = model.classify_many(holdout.values)
        sequential = [model.classify(q) for q in holdout.values.T]
        assert [r.label for r in parallel] == [r.label for r in sequential]
        for a, b in zip(parallel, sequential):
            assert_array_equal(a.residuals, b.residuals)

    def test_with_coder_shares_factorization(self, subspace_data):
        model = fit_model(subspace_data, CoderKind.nscr(SolverConfig(alpha=0.01, beta=0.01)))
        other = model.with_coder(CoderKind.nscr(SolverConfig(alpha=0.01, beta=0.5)))
        assert other.gram is model.gram
        assert model.cache.misses == 1

    def test_queries_shape(self, subspace_data):
        model = fit_model(subspace_data, CoderKind.crc())
        assert model.classify_many([]) == []
        with pytest.raises(DataError):
            model.classify_many(np.ones(50))

    def test_fit_normalizes(self, rng):
        matrix = labeled(3.0 * rng.standard_normal((5, 4)), list("aabb"))
        model = fit_model(matrix, CoderKind.crc())
        assert isinstance(model, ClassifierModel)
        assert isinstance(model.x, SampleMatrix)
        assert_allclose(np.linalg.norm(model.x.values, axis=0), 1.0)
        assert model.gram.shift == 1e-3
        assert precompute(model.x, 0.0, 1.0).n_atoms == 4


class TestAccuracy:
    def test_fraction(self):
        assert accuracy(["a", "b", "b", "a"], ["a", "b", "a", "a"]) == 0.75

    def test_errors(self):
        with pytest.raises(DataError):
            accuracy(["a"], ["a", "b"])
        with pytest.raises(DataError):
            accuracy([], [])


@pytest.mark.slow
def test_model_reuse_is_faster_than_fresh_precompute(threads):
    threads("1")
    atoms = normalize_columns(make_gaussian_atoms(10, 128, 100, seed=3))
    rng = np.random.default_rng(0)
    queries = [rng.standard_normal(128) for _ in range(100)]
    coder = CoderKind.nscr(SolverConfig())

    started = time.perf_counter()
    model = fit_model(atoms, coder)
    reused = [model.classify(q).label for q in queries]
    reuse_seconds = time.perf_counter() - started

    started = time.perf_counter()
    fresh = [classify(atoms, q, coder, GramCache()).label for q in queries]
    fresh_seconds = time.perf_counter() - started

    assert reused == fresh
    assert reuse_seconds < fresh_seconds
