import math

import numpy as np
import pytest

from moralstat.errors import NumericError
from moralstat.numcore import (chi2_quantile, covariance, data_ellipse,
                               loess, mahalanobis_sq, outside_ellipse,
                               rank_transform, sign_test_probability)

SEED = 1830


# covariance -----------------------------------------------------------------

def test_covariance_identical_rows_zero():
    data = np.array([[3.0, 7.0], [3.0, 7.0]])
    assert np.array_equal(covariance(data), np.zeros((2, 2)))


def test_covariance_hand_example():
    data = np.array([[0.0, 0.0], [2.0, 2.0]])
    assert np.allclose(covariance(data), [[2.0, 2.0], [2.0, 2.0]])


def test_covariance_needs_two_rows():
    with pytest.raises(NumericError):
        covariance(np.array([[1.0, 2.0]]))


def test_covariance_literacy_property_crime_sign(ordered):
    # on the population-per-crime scale, more literate departements have
    # lower values (more property crime), so the covariance is negative
    lit = ordered.column("Literacy")
    prop = ordered.column("Crime_prop")
    s = covariance(np.column_stack([lit, prop]))
    assert s[0, 1] < 0


# chi2_quantile ----------------------------------------------------------------

def test_chi2_quantile_68():
    assert abs(chi2_quantile(0.68, 2) - 2.2789) < 1e-3


def test_chi2_quantile_half():
    assert abs(chi2_quantile(0.5, 2) - 2.0 * math.log(2.0)) < 1e-12


def test_chi2_quantile_90():
    assert abs(chi2_quantile(0.90, 2) - 4.6052) < 1e-4


def test_chi2_quantile_domain():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(NumericError):
            chi2_quantile(bad, 2)


def test_chi2_quantile_strictly_increasing():
    probs = np.linspace(0.01, 0.99, 50)
    vals = [chi2_quantile(p, 2) for p in probs]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# mahalanobis_sq ---------------------------------------------------------------

def test_mahalanobis_zero_at_center():
    s = np.array([[2.0, 0.3], [0.3, 1.0]])
    c = np.array([1.0, -1.0])
    assert mahalanobis_sq(c, c, s) == 0.0


def test_mahalanobis_identity_is_euclidean():
    d = mahalanobis_sq(np.array([3.0, 4.0]), np.zeros(2), np.eye(2))
    assert abs(d - 25.0) < 1e-12


def test_mahalanobis_diagonal_hand_inverse():
    s = np.diag([2.0, 0.5])
    d = mahalanobis_sq(np.array([1.0, 1.0]), np.zeros(2), s)
    assert abs(d - 2.5) < 1e-12


def test_mahalanobis_singular_reports_condition():
    s = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(NumericError, match="cond"):
        mahalanobis_sq(np.array([1.0, 0.0]), np.zeros(2), s)


def test_mahalanobis_affine_invariance():
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        s = rng.normal(size=(2, 2))
        s = s @ s.T + 0.5 * np.eye(2)
        y = rng.normal(size=2)
        c = rng.normal(size=2)
        a = rng.normal(size=(2, 2)) + 2.0 * np.eye(2)
        base = mahalanobis_sq(y, c, s)
        moved = mahalanobis_sq(a @ y, a @ c, a @ s @ a.T)
        assert abs(base - moved) < 1e-8 * max(1.0, abs(base))


# data_ellipse -----------------------------------------------------------------

def test_data_ellipse_monte_carlo_coverage():
    rng = np.random.default_rng(SEED)
    pts = rng.standard_normal((10000, 2))
    ell = data_ellipse(pts, 0.68)
    c2 = chi2_quantile(0.68, 2)
    inside = sum(mahalanobis_sq(p, ell.center, ell.shape) <= c2
                 for p in pts)
    assert 0.66 <= inside / 10000 <= 0.70


def test_data_ellipse_circle_isotropy():
    theta = np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False)
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    ell = data_ellipse(pts, 0.68)
    b = ell.boundary()
    radii = np.hypot(b[:, 0], b[:, 1])
    expected = math.sqrt(chi2_quantile(0.68, 2) * ell.shape[0, 0])
    assert np.allclose(radii, expected, atol=1e-8)


def test_data_ellipse_boundary_satisfies_quadratic():
    rng = np.random.default_rng(SEED)
    pts = rng.normal(size=(40, 2)) @ np.array([[2.0, 0.7], [0.0, 0.4]])
    ell = data_ellipse(pts, 0.68)
    c2 = chi2_quantile(0.68, 2)
    for p in ell.boundary():
        assert abs(mahalanobis_sq(p, ell.center, ell.shape) - c2) < 1e-8


def test_data_ellipse_affine_equivariance():
    # the two boundaries trace the same curve (the parameterizations may
    # start at different angles), so check the mapped base boundary
    # satisfies the transformed ellipse's defining quadratic
    rng = np.random.default_rng(SEED)
    pts = rng.normal(size=(60, 2))
    a = np.array([[1.5, 0.6], [-0.2, 0.9]])
    shift = np.array([3.0, -4.0])
    base = data_ellipse(pts, 0.68)
    moved = data_ellipse(pts @ a.T + shift, 0.68)
    assert np.allclose(base.center @ a.T + shift, moved.center, atol=1e-8)
    c2 = chi2_quantile(0.68, 2)
    for p in base.boundary() @ a.T + shift:
        assert abs(mahalanobis_sq(p, moved.center, moved.shape) - c2) < 1e-8


def test_data_ellipse_boundary_has_360_points():
    rng = np.random.default_rng(SEED)
    ell = data_ellipse(rng.normal(size=(10, 2)), 0.68)
    assert ell.boundary().shape == (360, 2)


def test_data_ellipse_degenerate_flagged():
    t = np.linspace(0.0, 1.0, 8)
    pts = np.column_stack([t, 2.0 * t])  # exactly collinear
    ell = data_ellipse(pts, 0.68)
    assert ell.degenerate


# outside_ellipse ----------------------------------------------------------------

def test_outside_ellipse_far_outlier_only():
    # tight symmetric cluster (a small circle keeps S nonsingular and all
    # cluster points at the same depth) plus one far point: only the far
    # point is flagged
    theta = np.linspace(0.0, 2.0 * np.pi, 30, endpoint=False)
    cluster = 0.01 * np.column_stack([np.cos(theta), np.sin(theta)])
    pts = np.vstack([cluster, [[40.0, 40.0]]])
    out = outside_ellipse(pts, 0.90)
    assert list(out) == [30]


def test_outside_ellipse_limit_empty():
    rng = np.random.default_rng(SEED)
    pts = rng.normal(size=(50, 2))
    assert len(outside_ellipse(pts, 0.999999)) == 0


def test_outside_ellipse_fig12_names(ordered):
    pts = np.column_stack([ordered.column("Literacy"),
                           ordered.column("Crime_pers")])
    out = outside_ellipse(pts, 0.90)
    flagged = {int(ordered.codes()[i]) for i in out}
    # Creuse (23) and Ariege (9) are among the labeled departements
    assert {23, 9} <= flagged


# loess --------------------------------------------------------------------------

def test_loess_constant():
    x = np.arange(10.0)
    y = np.full(10, 5.5)
    fit = loess(x, y, span=0.5)
    assert np.allclose(fit.fitted, 5.5, atol=1e-12)


def test_loess_linear_exact():
    rng = np.random.default_rng(SEED)
    x = np.sort(rng.uniform(0.0, 10.0, 25))
    y = 2.0 * x - 3.0
    for span in (0.3, 2.0 / 3.0, 1.0):
        fit = loess(x, y, span=span)
        assert np.allclose(fit.fitted, y, atol=1e-10)


def test_loess_single_point_wls_oracle():
    rng = np.random.default_rng(SEED)
    x = np.arange(8.0)
    y = rng.normal(size=8)
    span = 0.5
    fit = loess(x, y, span=span)
    i = 4
    r = math.ceil(span * len(x))
    d = np.abs(x - x[i])
    order = np.argsort(d, kind="stable")
    window = order[:r]
    dmax = d[order[r]] if r < len(x) else math.inf
    if math.isinf(dmax):
        w = np.ones(len(window))
    else:
        w = (1.0 - (d[window] / dmax) ** 3) ** 3
    X = np.column_stack([np.ones(len(window)), x[window] - x[i]])
    beta = np.linalg.lstsq(X * np.sqrt(w)[:, None],
                           y[window] * np.sqrt(w), rcond=None)[0]
    assert abs(fit.fitted[i] - beta[0]) < 1e-8


def test_loess_span_one_is_global_regression():
    rng = np.random.default_rng(SEED)
    x = rng.uniform(0.0, 5.0, 30)
    y = 1.2 * x + rng.normal(size=30)
    fit = loess(x, y, span=1.0)
    slope, intercept = np.polyfit(x, y, 1)
    assert np.allclose(fit.fitted, intercept + slope * x, atol=1e-10)


def test_loess_unsorted_input_reported_in_input_order():
    rng = np.random.default_rng(SEED)
    x = rng.permutation(np.arange(12.0))
    y = 3.0 * x + 1.0
    fit = loess(x, y, span=0.5)
    assert np.allclose(fit.fitted, y, atol=1e-10)


def test_loess_window_too_small():
    x = np.arange(10.0)
    y = x.copy()
    with pytest.raises(NumericError):
        loess(x, y, span=0.05)  # window of 1 point cannot fit degree 1


# rank_transform -----------------------------------------------------------------

def test_rank_transform_highest():
    assert rank_transform(np.array([10.0, 30.0, 20.0]),
                          "highest").tolist() == [3.0, 1.0, 2.0]


def test_rank_transform_ties_average():
    r = rank_transform(np.full(4, 7.0), "highest")
    assert r.tolist() == [2.5, 2.5, 2.5, 2.5]


def test_rank_transform_complementarity():
    rng = np.random.default_rng(SEED)
    v = rng.permutation(np.arange(50.0))
    hi = rank_transform(v, "highest")
    lo = rank_transform(v, "lowest")
    assert np.array_equal(hi + lo, np.full(50, 51.0))


def test_rank_transform_monotone_invariance():
    rng = np.random.default_rng(SEED)
    v = rng.normal(size=40)
    base = rank_transform(v, "highest")
    assert np.array_equal(base, rank_transform(np.exp(v), "highest"))
    assert np.array_equal(base, rank_transform(3.0 * v + 11.0, "highest"))


# sign_test_probability -------------------------------------------------------------

def test_sign_test_82():
    p = sign_test_probability(82)
    assert p == 0.5 ** 82
    assert abs(p - 2.0679e-25) < 1e-29


def test_sign_test_one():
    assert sign_test_probability(1) == 0.5


def test_sign_test_ten():
    assert sign_test_probability(10) == 0.0009765625
