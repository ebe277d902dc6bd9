import numpy as np
import pytest

from wydskew.errors import DomainError, ValidationError
from wydskew.generators import builtin_bridge, builtin_exotic, builtin_power, construct_f, sharp
from wydskew.loewner import (
    CERTIFIED_CONVEX,
    CERTIFIED_DECREASING,
    CERTIFIED_MONOTONE,
    REJECTED,
    certify_operator_convex,
    certify_operator_monotone,
    loewner_matrix,
    midpoint_gap,
    recheck_witness,
    sample_points,
)


def square(t):
    return np.asarray(t) ** 2


def divided_differences(f, x):
    """Entrywise reference built from scalar evaluations."""
    n = len(x)
    L = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            L[i, j] = np.nan if i == j else (f(x[i]) - f(x[j])) / (x[i] - x[j])
    return L


class TestLoewnerMatrix:
    def test_identity_is_all_ones(self):
        L = loewner_matrix(lambda t: t, [1, 2, 5]).entries
        np.testing.assert_allclose(L, np.ones((3, 3)), atol=1e-10)

    def test_sqrt(self):
        L = loewner_matrix(np.sqrt, [1, 4]).entries
        np.testing.assert_allclose(L, [[0.5, 1 / 3], [1 / 3, 0.25]], atol=1e-10)
        assert np.linalg.det(L) == pytest.approx(1 / 72, abs=1e-9)
        assert np.linalg.det(L) == pytest.approx(0.01389, abs=1e-5)

    def test_square(self):
        L = loewner_matrix(square, [1, 2]).entries
        np.testing.assert_allclose(L, [[2, 3], [3, 4]], atol=1e-9)
        assert np.linalg.det(L) == pytest.approx(-1.0, abs=1e-8)

    def test_offdiagonal_reproducible(self):
        x = np.array([0.01, 0.3, 2.0, 17.0, 400.0])
        L = loewner_matrix(np.log, x).entries
        ref = divided_differences(np.log, x)
        off = ~np.eye(5, dtype=bool)
        np.testing.assert_allclose(L[off], ref[off], rtol=1e-12)
        np.testing.assert_allclose(np.diag(L), 1 / x, rtol=1e-10)
        assert np.array_equal(L, L.T)

    def test_close_points_use_midpoint_derivative(self):
        x = np.array([1.0, 1.0 + 5e-8])
        L = loewner_matrix(np.sqrt, x).entries
        assert L[0, 1] == pytest.approx(0.5, rel=1e-6)

    @pytest.mark.parametrize("pts", [[1.0, 1.0], [1.0, 1.0 + 1e-9], [0.0, 1.0], [-1.0, 2.0]])
    def test_invalid_points(self, pts):
        with pytest.raises(ValidationError):
            loewner_matrix(np.sqrt, pts)

    def test_non_finite(self):
        with pytest.raises(DomainError):
            loewner_matrix(lambda t: 1 / (np.asarray(t) - 2), [1.0, 2.0])


class TestMonotone:
    def test_sqrt_certified(self):
        rep = certify_operator_monotone(np.sqrt, max_order=6, trials=200, seed=0)
        assert rep.verdict == CERTIFIED_MONOTONE
        assert rep.order == 6 and rep.trials == 200 and rep.seed == 0
        assert rep.witness is None
        assert rep.worst_eigenvalue >= -1e-8

    @pytest.mark.parametrize("f", [square, lambda t: np.asarray(t) ** 3, np.exp])
    def test_known_rejections(self, f):
        rep = certify_operator_monotone(f, max_order=2, trials=200, seed=0)
        assert rep.verdict == REJECTED
        assert len(rep.witness["points"]) == 2
        assert recheck_witness(f, rep)

    def test_square_rejected_immediately(self):
        rep = certify_operator_monotone(square, max_order=2, trials=1, seed=0)
        assert rep.verdict == REJECTED and rep.witness["trial"] == 0

    def test_constructed_power(self):
        rep = certify_operator_monotone(construct_f(builtin_power(0.3)), max_order=6, trials=200, seed=1)
        assert rep.verdict == CERTIFIED_MONOTONE

    @pytest.mark.parametrize("h", [builtin_power(p) for p in (0.1, 0.25, 0.5, 0.75, 0.9)]
                             + [builtin_bridge(a) for a in (0.0, 0.25, 0.5, 0.75, 1.0)] + [builtin_exotic()])
    def test_constructed_family(self, h):
        rep = certify_operator_monotone(construct_f(h), max_order=6, trials=200, seed=0)
        assert rep.verdict == CERTIFIED_MONOTONE, rep.witness

    @pytest.mark.parametrize("p", [-0.5, 1.5])
    def test_convex_generators(self, p):
        h = builtin_power(p)
        raw = construct_f(h, normalize=False)
        assert certify_operator_monotone(raw, 6, 200, 0, decreasing=True).verdict == CERTIFIED_DECREASING
        norm = construct_f(h)
        assert certify_operator_monotone(norm, 6, 200, 0).verdict == CERTIFIED_MONOTONE
        assert norm.metric_constant <= 1e-7

    def test_decreasing_rejects_increasing(self):
        rep = certify_operator_monotone(np.sqrt, 3, 20, 0, decreasing=True)
        assert rep.verdict == REJECTED and rep.kind == "decreasing"
        assert recheck_witness(np.sqrt, rep)

    def test_inverse_is_decreasing(self):
        rep = certify_operator_monotone(lambda t: 1 / np.asarray(t), 6, 50, 3, decreasing=True)
        assert rep.verdict == CERTIFIED_DECREASING

    @pytest.mark.parametrize("c", [0.1, 10.0])
    def test_scale_robust(self, c):
        # Loewner matrices of t -> f(ct)/f(c) at x equal c/f(c) times those of f at c*x.
        f = np.sqrt
        g = lambda t: f(c * np.asarray(t)) / f(c)
        for seed in range(20):
            pts = sample_points(np.random.default_rng(seed), 5)
            Lg = loewner_matrix(g, pts).entries
            Lf = loewner_matrix(f, c * pts).entries
            np.testing.assert_allclose(Lg, c / f(c) * Lf, rtol=1e-8)
        assert certify_operator_monotone(g, 6, 100, 0).verdict == certify_operator_monotone(f, 6, 100, 0).verdict

    def test_seed_substreams_deterministic(self):
        a = certify_operator_monotone(np.log, 5, 30, 7)
        b = certify_operator_monotone(np.log, 5, 30, 7)
        assert a.to_dict() == b.to_dict()

    def test_witness_points_match_seed(self):
        rep = certify_operator_monotone(np.exp, 4, 50, 11)
        w = rep.witness
        rng = np.random.default_rng(11 + w["trial"])
        for n in range(2, w["order"] + 1):
            pts = sample_points(rng, n)
        np.testing.assert_array_equal(pts, w["points"])

    @pytest.mark.parametrize("kwargs", [{"max_order": 1}, {"max_order": 9}, {"trials": 0}])
    def test_invalid_arguments(self, kwargs):
        args = {"max_order": 4, "trials": 5, **kwargs}
        with pytest.raises(ValidationError):
            certify_operator_monotone(np.sqrt, **args)

    def test_domain_error_propagates(self):
        with pytest.raises(DomainError):
            certify_operator_monotone(lambda t: np.log(np.asarray(t) - 1), 3, 5, 0)

    def test_report_dict(self):
        d = certify_operator_monotone(np.sqrt, 3, 5, 2).to_dict()
        assert d["property"] == "monotone" and d["verdict"] == CERTIFIED_MONOTONE
        assert set(d) >= {"order", "trials", "seed", "worst_eigenvalue", "witness", "tolerance"}


class TestConvex:
    def test_square_convex(self):
        assert certify_operator_convex(square, dim=4, trials=200, seed=0).verdict == CERTIFIED_CONVEX

    def test_square_midpoint_gap_identity(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((3, 3)); X = X + X.T
        Y = rng.standard_normal((3, 3)); Y = Y + Y.T
        gap, _ = midpoint_gap(square, X, Y)
        D = (X - Y) / 2
        np.testing.assert_allclose(gap, D @ D, atol=1e-10)

    def test_convex_power_and_sharp(self):
        h = builtin_power(1.5)
        assert certify_operator_convex(h, 4, 200, 0).verdict == CERTIFIED_CONVEX
        hs = sharp(h)
        np.testing.assert_allclose(hs(np.array([4.0])), [0.5])
        assert certify_operator_convex(hs, 4, 200, 0).verdict == CERTIFIED_CONVEX

    def test_sqrt_rejected(self):
        rep = certify_operator_convex(np.sqrt, 4, 200, 0)
        assert rep.verdict == REJECTED
        assert set(rep.witness) >= {"X", "Y", "trial"}
        assert recheck_witness(np.sqrt, rep)

    def test_cube_rejected(self):
        # t^3 is not operator convex on (0, inf) in dimension >= 2
        rep = certify_operator_convex(lambda t: np.asarray(t) ** 3, 2, 200, 0)
        assert rep.verdict == REJECTED
        assert recheck_witness(lambda t: np.asarray(t) ** 3, rep)

    def test_domain_error_names_trial(self):
        with pytest.raises(DomainError, match="trial 0"):
            certify_operator_convex(lambda t: np.log(np.asarray(t) - 1), 2, 3, 0)

    def test_invalid_dim(self):
        with pytest.raises(ValidationError):
            certify_operator_convex(square, dim=9)

    def test_recheck_on_certified_is_false(self):
        rep = certify_operator_convex(square, 2, 3, 0)
        assert not recheck_witness(square, rep)
