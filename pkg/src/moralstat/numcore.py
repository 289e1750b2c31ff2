"""Deterministic numeric primitives.

Covariance, bivariate chi-square quantiles, Mahalanobis distances, data
ellipses, loess smoothing, rank transforms, and the consecutive-successes
sign test. Everything here is a pure function; ellipse boundaries are
discretized at a fixed 360 points so downstream SVG output is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import NumericError

BOUNDARY_POINTS = 360

# relative eigenvalue threshold below which a 2x2 shape is treated as rank 1
_DEGENERATE_RTOL = 1e-10


def covariance(data: np.ndarray) -> np.ndarray:
    """Unbiased sample covariance (divisor n-1) of an n x p matrix."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    n = arr.shape[0]
    if n < 2:
        raise NumericError(f"covariance needs n >= 2, got n = {n}")
    centered = arr - arr.mean(axis=0)
    s = centered.T @ centered / (n - 1)
    return (s + s.T) / 2.0


def chi2_quantile(prob: float, df: int = 2) -> float:
    """Chi-square quantile, bivariate closed form -2 ln(1 - prob)."""
    if df != 2:
        raise NumericError(f"chi2_quantile supports df = 2 only, got {df}")
    if not 0.0 < prob < 1.0:
        raise NumericError(f"probability must lie in (0, 1), got {prob}")
    return -2.0 * math.log1p(-prob)


def mahalanobis_sq(y: np.ndarray, center: np.ndarray,
                   S: np.ndarray) -> float:
    """Squared Mahalanobis distance (y - center)' S^-1 (y - center)."""
    y = np.asarray(y, dtype=float)
    center = np.asarray(center, dtype=float)
    S = np.asarray(S, dtype=float)
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericError(
            f"singular covariance in mahalanobis_sq (cond ~ {cond:.3e})")
    diff = y - center
    return float(diff @ np.linalg.solve(S, diff))


@dataclass(frozen=True)
class EllipseGeom:
    """Constant Mahalanobis-distance region: center, 2x2 shape, radius.

    Boundary points p satisfy (p - center)' shape^-1 (p - center) = radius^2
    when the shape is nonsingular. A rank-1 shape is flagged degenerate and
    its boundary collapses to a segment.
    """

    center: np.ndarray
    shape: np.ndarray
    radius: float
    coverage: float | None = None
    degenerate: bool = False

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float).reshape(2)
        shape = np.asarray(self.shape, dtype=float).reshape(2, 2)
        if np.max(np.abs(shape - shape.T)) > 1e-10 * max(
                1.0, float(np.max(np.abs(shape)))):
            raise NumericError("ellipse shape matrix is not symmetric")
        shape = (shape + shape.T) / 2.0
        vals = np.linalg.eigvalsh(shape)
        if vals[0] < -1e-10 * max(1.0, vals[-1]):
            raise NumericError("ellipse shape matrix must be PSD")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "radius", float(self.radius))

    def _eig(self) -> tuple[np.ndarray, np.ndarray]:
        vals, vecs = np.linalg.eigh(self.shape)
        return np.clip(vals, 0.0, None), vecs

    def boundary(self, n: int = BOUNDARY_POINTS) -> np.ndarray:
        """Boundary polyline, (n, 2). Degenerate shapes give 2 endpoints."""
        vals, vecs = self._eig()
        if self.degenerate:
            axis = vecs[:, -1] * math.sqrt(vals[-1]) * self.radius
            return np.vstack([self.center - axis, self.center + axis])
        # symmetric square root: unique for PSD, immune to eigenvector sign
        root = vecs @ np.diag(np.sqrt(vals)) @ vecs.T
        theta = 2.0 * np.pi * np.arange(n) / n
        circle = np.column_stack([np.cos(theta), np.sin(theta)])
        return self.center + self.radius * circle @ root.T


def data_ellipse(points: np.ndarray, coverage: float) -> EllipseGeom:
    """Coverage ellipse of a bivariate sample.

    Center at the column means, shape the sample covariance, radius
    sqrt(chi2_quantile(coverage, 2)). A singular covariance yields a
    degenerate segment geometry rather than an error.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise NumericError("data_ellipse expects an n x 2 array")
    if pts.shape[0] < 3:
        raise NumericError(
            f"data_ellipse needs n >= 3 points, got {pts.shape[0]}")
    center = pts.mean(axis=0)
    shape = covariance(pts)
    radius = math.sqrt(chi2_quantile(coverage, 2))
    vals = np.linalg.eigvalsh(shape)
    degenerate = vals[0] <= _DEGENERATE_RTOL * max(vals[-1], 1e-300)
    return EllipseGeom(center=center, shape=shape, radius=radius,
                       coverage=coverage, degenerate=degenerate)


def outside_ellipse(points: np.ndarray, coverage: float) -> np.ndarray:
    """Indices of points outside the sample's coverage ellipse."""
    pts = np.asarray(points, dtype=float)
    ellipse = data_ellipse(pts, coverage)
    if ellipse.degenerate:
        raise NumericError("outside_ellipse needs a nonsingular covariance")
    c2 = chi2_quantile(coverage, 2)
    inv = np.linalg.inv(ellipse.shape)
    diff = pts - ellipse.center
    dsq = np.einsum("ij,jk,ik->i", diff, inv, diff)
    return np.nonzero(dsq > c2)[0]


@dataclass(frozen=True)
class LoessFit:
    """Loess smoother output aligned to the input abscissae."""

    span: float
    degree: int
    fitted: np.ndarray


def loess(x: np.ndarray, y: np.ndarray, span: float = 2.0 / 3.0,
          degree: int = 1) -> LoessFit:
    """Local weighted regression with tricube weights, no robustness.

    Each point is fit from its ceil(span*n) nearest neighbors weighted by
    w = (1 - (d/dmax)^3)^3 where dmax is the distance just beyond the
    window (the nearest excluded point). When the window is the whole
    sample the weights are uniform, so span = 1 with degree 1 reproduces
    the global least-squares line.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    if n < 4:
        raise NumericError(f"loess needs n >= 4 points, got {n}")
    if y.shape[0] != n:
        raise NumericError("loess: x and y lengths differ")
    if not 0.0 < span <= 1.0:
        raise NumericError(f"span must lie in (0, 1], got {span}")
    if degree not in (0, 1):
        raise NumericError(f"degree must be 0 or 1, got {degree}")
    r = math.ceil(span * n)
    if r < degree + 1:
        raise NumericError(
            f"span {span} gives window of {r} points, "
            f"need at least {degree + 1} for degree {degree}")

    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    fitted_sorted = np.empty(n)
    for i in range(n):
        d = np.abs(xs - xs[i])
        nearest = np.argsort(d, kind="stable")
        idx = nearest[:r]
        dmax = d[nearest[r]] if r < n else math.inf
        if not math.isfinite(dmax) or dmax == 0.0:
            w = np.ones(r)
        else:
            w = (1.0 - (d[idx] / dmax) ** 3) ** 3
        if degree == 0:
            fitted_sorted[i] = float(np.sum(w * ys[idx]) / np.sum(w))
        else:
            z = xs[idx] - xs[i]
            design = np.column_stack([np.ones(r), z])
            sw = np.sqrt(w)
            beta, *_ = np.linalg.lstsq(design * sw[:, None],
                                       ys[idx] * sw, rcond=None)
            fitted_sorted[i] = float(beta[0])
    fitted = np.empty(n)
    fitted[order] = fitted_sorted
    return LoessFit(span=span, degree=degree, fitted=fitted)


def rank_transform(values: np.ndarray, rank_one_is: str = "highest"
                   ) -> np.ndarray:
    """Ranks 1..n with ties averaged; rank 1 goes to the highest or lowest
    value as requested."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise NumericError("rank_transform needs at least one value")
    if rank_one_is == "highest":
        return stats.rankdata(-v, method="average")
    if rank_one_is == "lowest":
        return stats.rankdata(v, method="average")
    raise NumericError(f"rank_one_is must be highest or lowest, "
                       f"got {rank_one_is!r}")


def sign_test_probability(n: int) -> float:
    """Exact probability (1/2)^n of n consecutive same-sign outcomes."""
    if n < 0:
        raise NumericError(f"count must be nonnegative, got {n}")
    return 0.5 ** n
