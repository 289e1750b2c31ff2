"""Multivariate statistics.

Correlation/covariance PCA with symmetric biplot scaling, varimax rotation
with Kaiser row normalization, regression-method factor scores, canonical
discriminant analysis, multivariate linear models with Type II Roy tests,
hypothesis-error ellipse geometry, and the small univariate regressions used
by the fitted/residual maps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, stats

from .errors import NumericError
from .numcore import EllipseGeom, chi2_quantile

_MAX_SWEEPS = 1000
_VARIMAX_TOL = 1e-8


def _standardize(data: np.ndarray, scale: bool) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    centered = arr - arr.mean(axis=0)
    if not scale:
        return centered
    sd = arr.std(axis=0, ddof=1)
    if np.any(sd == 0):
        bad = np.nonzero(sd == 0)[0]
        raise NumericError(
            f"constant column(s) under standardization: {bad.tolist()}")
    return centered / sd


@dataclass(frozen=True)
class PcaResult:
    """Principal components of a data matrix.

    loadings holds unit-norm eigenvectors of the analyzed correlation or
    covariance matrix, one column per component, signed so the largest
    magnitude entry of each column is positive. scores = analyzed @ loadings.
    """

    eigenvalues: np.ndarray
    pct_variance: np.ndarray
    scores: np.ndarray
    loadings: np.ndarray
    standardized: bool
    analyzed: np.ndarray
    variable_names: tuple[str, ...]


def pca(data: np.ndarray, standardize: bool = True,
        variable_names: tuple[str, ...] | None = None) -> PcaResult:
    """Eigendecomposition of the correlation (standardize) or covariance
    matrix, all components retained."""
    arr = np.asarray(data, dtype=float)
    n, p = arr.shape
    if n <= p:
        raise NumericError(f"pca needs n > p, got n = {n}, p = {p}")
    z = _standardize(arr, scale=standardize)
    target = z.T @ z / (n - 1)
    vals, vecs = np.linalg.eigh((target + target.T) / 2.0)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    for j in range(p):
        if vecs[np.argmax(np.abs(vecs[:, j])), j] < 0:
            vecs[:, j] = -vecs[:, j]
    names = tuple(variable_names) if variable_names is not None else \
        tuple(f"v{i + 1}" for i in range(p))
    return PcaResult(
        eigenvalues=vals,
        pct_variance=100.0 * vals / vals.sum(),
        scores=z @ vecs,
        loadings=vecs,
        standardized=standardize,
        analyzed=z,
        variable_names=names,
    )


@dataclass(frozen=True)
class BiplotGeometry:
    """Symmetric-scaling biplot coordinates.

    point_coords = U sqrt(D), vector_coords = V sqrt(D) from the SVD of the
    analyzed matrix; their product reproduces its best rank-2 approximation.
    """

    point_coords: np.ndarray
    vector_coords: np.ndarray
    axes_equated: bool
    variable_names: tuple[str, ...]
    singular_values: np.ndarray
    pct_variance: np.ndarray


def biplot_layout(pca_result: PcaResult, k: int = 2) -> BiplotGeometry:
    """Split the SVD of the analyzed matrix evenly between observation
    points and variable vectors."""
    z = pca_result.analyzed
    if min(z.shape) < k or k < 2:
        raise NumericError(f"biplot needs at least {k} components")
    u, s, vt = np.linalg.svd(z, full_matrices=False)
    v = vt.T
    for j in range(k):
        if v[np.argmax(np.abs(v[:, j])), j] < 0:
            v[:, j] = -v[:, j]
            u[:, j] = -u[:, j]
    root = np.sqrt(s[:k])
    return BiplotGeometry(
        point_coords=u[:, :k] * root,
        vector_coords=v[:, :k] * root,
        axes_equated=True,
        variable_names=pca_result.variable_names,
        singular_values=s[:k],
        pct_variance=pca_result.pct_variance[:k],
    )


def varimax_criterion(loadings: np.ndarray) -> float:
    """Raw varimax criterion: summed column variances of squared loadings."""
    b2 = np.asarray(loadings, dtype=float) ** 2
    p = b2.shape[0]
    return float(np.sum(b2 ** 2) / p - np.sum((b2.sum(axis=0) / p) ** 2))


def varimax(loadings: np.ndarray, normalize: bool = True) -> np.ndarray:
    """Orthogonal rotation maximizing the varimax criterion.

    Kaiser row normalization (rows scaled to unit communality during the
    sweeps) when normalize is true. Pairwise plane rotations sweep all
    column pairs until the criterion gain drops below 1e-8. The output is
    aligned to the input: columns permuted by maximal absolute congruence,
    each column signed so its largest magnitude loading is positive.
    """
    a = np.array(loadings, dtype=float)
    if a.ndim != 2 or a.shape[1] < 2:
        raise NumericError("varimax needs a p x k matrix with k >= 2")
    p, k = a.shape
    h = np.sqrt((a ** 2).sum(axis=1))
    scale = np.where(h > 0, h, 1.0)
    b = a / scale[:, None] if normalize else a.copy()

    crit = varimax_criterion(b)
    for _ in range(_MAX_SWEEPS):
        for j, m in itertools.combinations(range(k), 2):
            x, y = b[:, j], b[:, m]
            u = x ** 2 - y ** 2
            v = 2.0 * x * y
            su, sv = u.sum(), v.sum()
            num = 2.0 * (u @ v) - 2.0 * su * sv / p
            den = (u @ u - v @ v) - (su ** 2 - sv ** 2) / p
            phi = 0.25 * math.atan2(num, den)
            if phi == 0.0:
                continue
            c, s = math.cos(phi), math.sin(phi)
            b[:, j], b[:, m] = c * x + s * y, -s * x + c * y
        new_crit = varimax_criterion(b)
        if new_crit - crit < _VARIMAX_TOL:
            crit = new_crit
            break
        crit = new_crit
    else:
        raise NumericError(
            f"varimax did not converge in {_MAX_SWEEPS} sweeps")
    if normalize:
        b = b * scale[:, None]

    # align to input: permute columns by maximal absolute congruence
    norm_a = np.linalg.norm(a, axis=0)
    norm_b = np.linalg.norm(b, axis=0)
    congruence = np.abs(a.T @ b) / np.outer(
        np.where(norm_a > 0, norm_a, 1.0), np.where(norm_b > 0, norm_b, 1.0))
    best_perm = max(itertools.permutations(range(k)),
                    key=lambda perm: sum(congruence[i, perm[i]]
                                         for i in range(k)))
    b = b[:, list(best_perm)]
    for j in range(k):
        if b[np.argmax(np.abs(b[:, j])), j] < 0:
            b[:, j] = -b[:, j]
    return b


def factor_scores(data: np.ndarray, rotated: np.ndarray) -> np.ndarray:
    """Regression-method factor scores from standardized data.

    F = Z R^-1 L where Z is the standardized data, R its correlation
    matrix, and L the rotated loadings for the same variables.
    """
    arr = np.asarray(data, dtype=float)
    rot = np.asarray(rotated, dtype=float)
    if arr.shape[1] != rot.shape[0]:
        raise NumericError(
            f"dimension mismatch: data has {arr.shape[1]} variables, "
            f"loadings have {rot.shape[0]} rows")
    z = _standardize(arr, scale=True)
    corr = z.T @ z / (arr.shape[0] - 1)
    return z @ np.linalg.solve(corr, rot)


@dataclass(frozen=True)
class CdaResult:
    """Canonical discriminant analysis output.

    scores are scaled so the pooled within-group covariance is the
    identity; structure holds total-sample correlations between the
    original variables and the canonical scores.
    """

    eigenvalues: np.ndarray
    scores: np.ndarray
    structure: np.ndarray
    group_means: np.ndarray
    group_n: np.ndarray
    group_labels: tuple[str, ...]
    groups: tuple[str, ...]
    variable_names: tuple[str, ...]


def canonical_discriminant(data: np.ndarray, groups,
                           variable_names: tuple[str, ...] | None = None,
                           orient_positive: str | None = None) -> CdaResult:
    """Solve the between/within eigenproblem W^-1 B.

    Groups with a single member contribute only their mean (to B); the
    pooled within SSCP W collects deviations within groups of size >= 2.
    """
    arr = np.asarray(data, dtype=float)
    n, p = arr.shape
    labels = [str(g) for g in groups]
    if len(labels) != n:
        raise NumericError("groups length must match data rows")
    uniq = sorted(set(labels))
    if len(uniq) < 2:
        raise NumericError("canonical_discriminant needs >= 2 groups")
    grand = arr.mean(axis=0)
    w = np.zeros((p, p))
    b = np.zeros((p, p))
    counts = []
    means = []
    for g in uniq:
        rows = arr[[i for i, lab in enumerate(labels) if lab == g]]
        mu = rows.mean(axis=0)
        counts.append(len(rows))
        means.append(mu)
        dev_b = mu - grand
        b += len(rows) * np.outer(dev_b, dev_b)
        centered = rows - mu
        w += centered.T @ centered
    df_w = n - len(uniq)
    if df_w < p:
        raise NumericError("too few observations for within-group SSCP")
    cond = np.linalg.cond(w)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericError(f"singular within SSCP (cond ~ {cond:.3e})")

    vals, vecs = linalg.eigh((b + b.T) / 2.0, (w + w.T) / 2.0)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    s = min(len(uniq) - 1, p)
    vals = vals[:s]
    # eigh returns W-orthonormal vectors; rescale so the pooled
    # within-covariance of the scores is exactly the identity
    coef = vecs[:, :s] * math.sqrt(df_w)
    scores = (arr - grand) @ coef

    names = tuple(variable_names) if variable_names is not None else \
        tuple(f"v{i + 1}" for i in range(p))
    structure = np.empty((p, s))
    for i in range(p):
        for j in range(s):
            structure[i, j] = np.corrcoef(arr[:, i], scores[:, j])[0, 1]
    for j in range(s):
        pin = None
        if orient_positive is not None and orient_positive in names and j == 0:
            pin = names.index(orient_positive)
        anchor = pin if pin is not None else int(np.argmax(np.abs(
            structure[:, j])))
        if structure[anchor, j] < 0:
            structure[:, j] = -structure[:, j]
            scores[:, j] = -scores[:, j]
            coef[:, j] = -coef[:, j]

    group_means = np.array(
        [[scores[[i for i, lab in enumerate(labels) if lab == g],
                 j].mean() for j in range(s)] for g in uniq])
    return CdaResult(
        eigenvalues=vals,
        scores=scores,
        structure=structure,
        group_means=group_means,
        group_n=np.array(counts),
        group_labels=tuple(uniq),
        groups=tuple(labels),
        variable_names=names,
    )


def confidence_circle(cda: CdaResult, group: str,
                      level: float) -> EllipseGeom:
    """Confidence circle for a group mean in the first two canonical
    dimensions: radius sqrt(chi2(level, 2) / n_g), identity shape."""
    if group not in cda.group_labels:
        raise NumericError(f"unknown group {group!r}")
    g = cda.group_labels.index(group)
    n_g = int(cda.group_n[g])
    radius = math.sqrt(chi2_quantile(level, 2) / n_g)
    return EllipseGeom(center=cda.group_means[g, :2], shape=np.eye(2),
                       radius=radius, coverage=level)


@dataclass(frozen=True)
class MlmFit:
    """Least-squares multivariate linear model Y = XB + E."""

    coefficients: np.ndarray
    residual_sscp: np.ndarray
    df_error: int
    term_map: dict[str, tuple[int, ...]]
    grand_means: np.ndarray
    response_names: tuple[str, ...]
    design: np.ndarray
    responses: np.ndarray
    column_names: tuple[str, ...]

    @property
    def p_y(self) -> int:
        return self.responses.shape[1]

    @property
    def term_order(self) -> tuple[str, ...]:
        return tuple(self.term_map.keys())

    def fitted(self) -> np.ndarray:
        return self.design @ self.coefficients

    def residuals(self) -> np.ndarray:
        return self.responses - self.fitted()

    def r_squared(self) -> dict[str, float]:
        resid = self.residuals()
        centered = self.responses - self.responses.mean(axis=0)
        out = {}
        for j, name in enumerate(self.response_names):
            sse = float(resid[:, j] @ resid[:, j])
            sst = float(centered[:, j] @ centered[:, j])
            out[name] = 1.0 - sse / sst
        return out


def dummy_code(labels, reference: str) -> tuple[np.ndarray, tuple[str, ...]]:
    """Reference-level dummy coding; columns for all levels but the
    reference, in sorted level order."""
    labs = [str(x) for x in labels]
    levels = sorted(set(labs))
    if reference not in levels:
        raise NumericError(f"reference level {reference!r} not present")
    keep = [lv for lv in levels if lv != reference]
    block = np.column_stack([[1.0 if lab == lv else 0.0 for lab in labs]
                             for lv in keep])
    return block, tuple(keep)


def _full_rank_check(x: np.ndarray, names: list[str]) -> None:
    rank = np.linalg.matrix_rank(x)
    if rank == x.shape[1]:
        return
    kept: list[int] = []
    offending = []
    for j in range(x.shape[1]):
        trial = x[:, kept + [j]]
        if np.linalg.matrix_rank(trial) > len(kept):
            kept.append(j)
        else:
            offending.append(names[j])
    raise NumericError(
        f"rank-deficient design (rank {rank} of {x.shape[1]}); "
        f"dependent columns: {', '.join(offending)}")


def mlm_fit(Y: np.ndarray, terms,
            response_names: tuple[str, ...] | None = None) -> MlmFit:
    """Fit Y = XB + E with an intercept plus the given named term blocks.

    terms is an ordered sequence of (name, block) pairs where each block is
    an (n,) vector or (n, k) matrix; factor terms are passed pre-coded (see
    dummy_code). The design must be full rank.
    """
    y = np.asarray(Y, dtype=float)
    if y.ndim == 1:
        y = y[:, None]
    n = y.shape[0]
    blocks = [np.ones((n, 1))]
    col_names = ["(Intercept)"]
    term_map: dict[str, tuple[int, ...]] = {}
    col = 1
    for name, block in terms:
        arr = np.asarray(block, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.shape[0] != n:
            raise NumericError(f"term {name!r} has {arr.shape[0]} rows, "
                               f"expected {n}")
        blocks.append(arr)
        width = arr.shape[1]
        term_map[name] = tuple(range(col, col + width))
        col_names.extend(name if width == 1 else f"{name}[{i}]"
                         for i in range(width))
        col += width
    x = np.hstack(blocks)
    _full_rank_check(x, col_names)
    beta, *_ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ beta
    e = resid.T @ resid
    names = tuple(response_names) if response_names is not None else \
        tuple(f"y{i + 1}" for i in range(y.shape[1]))
    return MlmFit(
        coefficients=beta,
        residual_sscp=(e + e.T) / 2.0,
        df_error=n - x.shape[1],
        term_map=term_map,
        grand_means=y.mean(axis=0),
        response_names=names,
        design=x,
        responses=y,
        column_names=tuple(col_names),
    )


@dataclass(frozen=True)
class ManovaRow:
    """One term of a Type II MANOVA table under Roy's largest root."""

    term: str
    df: int
    roy_stat: float
    approx_f: float
    df_num: int
    df_den: int
    p_value: float
    ssp_h: np.ndarray


def _check_pd(e: np.ndarray) -> None:
    try:
        np.linalg.cholesky(e)
    except np.linalg.LinAlgError:
        raise NumericError("singular residual SSCP (E)")


def manova_type2(fit: MlmFit) -> list[ManovaRow]:
    """Type II Roy tests: each term's hypothesis SSCP is the growth of E
    when that term alone is dropped from the full model."""
    e = fit.residual_sscp
    _check_pd(e)
    p_y = fit.p_y
    df_e = fit.df_error
    rows = []
    for term in fit.term_order:
        cols = set(fit.term_map[term])
        keep = [j for j in range(fit.design.shape[1]) if j not in cols]
        x_red = fit.design[:, keep]
        beta, *_ = np.linalg.lstsq(x_red, fit.responses, rcond=None)
        resid = fit.responses - x_red @ beta
        e_red = resid.T @ resid
        h = e_red - e
        h = (h + h.T) / 2.0
        lam = float(np.clip(linalg.eigh(h, e, eigvals_only=True)[-1],
                            0.0, None))
        q = len(cols)
        d = max(p_y, q)
        df_den = df_e - d + q
        if df_den <= 0:
            raise NumericError(f"term {term!r}: nonpositive denominator df")
        approx_f = lam * df_den / d
        rows.append(ManovaRow(
            term=term,
            df=q,
            roy_stat=lam,
            approx_f=approx_f,
            df_num=d,
            df_den=df_den,
            p_value=float(stats.f.sf(approx_f, d, df_den)),
            ssp_h=h,
        ))
    return rows


def roy_critical(alpha: float, q: int, p_y: int, df_e: int) -> float:
    """Critical value of Roy's statistic via the inverted approximate-F
    relation: lambda_alpha = F_crit(alpha; d, df_e - d + q) * d / (df_e - d + q)."""
    if not 0.0 < alpha < 1.0:
        raise NumericError(f"alpha must lie in (0, 1), got {alpha}")
    d = max(p_y, q)
    df_den = df_e - d + q
    if df_den <= 0:
        raise NumericError("invalid degrees of freedom: df_e - d + q <= 0")
    return float(stats.f.isf(alpha, d, df_den)) * d / df_den


@dataclass(frozen=True)
class HeGeometry:
    """Hypothesis and error ellipses on the scale of the data.

    The E ellipse is the 0.68 ellipse of E / df_error centered at the grand
    means; each H ellipse divides its SSP_H by lambda_alpha * df_error so it
    protrudes beyond E exactly when the Roy test rejects at alpha.
    """

    e_ellipse: EllipseGeom
    h_ellipses: dict[str, EllipseGeom]
    alpha: float
    response_pair: tuple[str, str]


def he_geometry(fit: MlmFit, rows: list[ManovaRow],
                response_pair: tuple[str, str] | None = None,
                alpha: float = 0.05) -> HeGeometry:
    """Build the hypothesis-error ellipse overlay for two responses."""
    names = fit.response_names
    if response_pair is None:
        response_pair = (names[0], names[1])
    try:
        sub = [names.index(r) for r in response_pair]
    except ValueError as exc:
        raise NumericError(f"unknown response in pair: {exc}")
    idx = np.ix_(sub, sub)
    radius = math.sqrt(chi2_quantile(0.68, 2))
    center = fit.grand_means[sub]
    e_ellipse = EllipseGeom(center=center,
                            shape=fit.residual_sscp[idx] / fit.df_error,
                            radius=radius, coverage=0.68)
    h_ellipses: dict[str, EllipseGeom] = {}
    for row in rows:
        lam_alpha = roy_critical(alpha, row.df, fit.p_y, fit.df_error)
        shape = row.ssp_h[idx] / (lam_alpha * fit.df_error)
        shape = (shape + shape.T) / 2.0
        vals = np.linalg.eigvalsh(shape)
        degenerate = (min(row.df, fit.p_y) == 1
                      or vals[0] <= 1e-10 * max(vals[-1], 1e-300))
        h_ellipses[row.term] = EllipseGeom(
            center=center, shape=shape, radius=radius,
            degenerate=degenerate)
    return HeGeometry(e_ellipse=e_ellipse, h_ellipses=h_ellipses,
                      alpha=alpha, response_pair=tuple(response_pair))


def protrusion_ratio(he: HeGeometry, term: str) -> float:
    """Largest ratio of H-ellipse to E-ellipse extent over all directions.

    Greater than 1 exactly when the term's Roy test rejects at he.alpha.
    """
    h = he.h_ellipses[term].shape
    e = he.e_ellipse.shape
    lam = float(linalg.eigh(h, e, eigvals_only=True)[-1])
    return math.sqrt(max(lam, 0.0))


@dataclass(frozen=True)
class RegressionFit:
    """Ordinary least squares fit."""

    coefficients: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray
    r_squared: float
    column_names: tuple[str, ...]


def _ols(y: np.ndarray, x: np.ndarray, names: list[str]) -> RegressionFit:
    _full_rank_check(x, names)
    beta, *_ = np.linalg.lstsq(x, y, rcond=None)
    fitted = x @ beta
    resid = y - fitted
    centered = y - y.mean()
    sst = float(centered @ centered)
    r2 = 1.0 - float(resid @ resid) / sst if sst > 0 else 1.0
    return RegressionFit(coefficients=beta, fitted=fitted, residuals=resid,
                         r_squared=r2, column_names=tuple(names))


def simple_regression(y: np.ndarray, predictors,
                      names: tuple[str, ...] | None = None) -> RegressionFit:
    """OLS of y on an intercept plus the given predictor vectors."""
    yv = np.asarray(y, dtype=float)
    cols = [np.ones(yv.shape[0])] + [np.asarray(p, dtype=float)
                                     for p in predictors]
    labels = ["(Intercept)"] + (
        list(names) if names is not None
        else [f"x{i + 1}" for i in range(len(cols) - 1)])
    return _ols(yv, np.column_stack(cols), labels)


@dataclass(frozen=True)
class SurfaceFit:
    """Full quadratic response surface with boxplot residual flags."""

    coefficients: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray
    r_squared: float
    column_names: tuple[str, ...]
    outside: tuple[int, ...]
    fences: tuple[float, float]


def boxplot_outside(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Indices outside the 1.5 IQR boxplot fences, plus the fences."""
    v = np.asarray(values, dtype=float)
    q1, q3 = np.percentile(v, [25.0, 75.0])
    iqr = q3 - q1
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    return np.nonzero((v < lo) | (v > hi))[0], float(lo), float(hi)


def response_surface(y: np.ndarray, x1: np.ndarray,
                     x2: np.ndarray) -> SurfaceFit:
    """OLS on the full quadratic surface in two predictors.

    Residuals are classified by the 1.5 IQR boxplot rule; indices outside
    the fences are reported for labeling.
    """
    yv = np.asarray(y, dtype=float)
    a = np.asarray(x1, dtype=float)
    b = np.asarray(x2, dtype=float)
    x = np.column_stack([np.ones(yv.shape[0]), a, b, a * a, b * b, a * b])
    labels = ["(Intercept)", "x1", "x2", "x1^2", "x2^2", "x1*x2"]
    fit = _ols(yv, x, labels)
    outside, lo, hi = boxplot_outside(fit.residuals)
    return SurfaceFit(coefficients=fit.coefficients, fitted=fit.fitted,
                      residuals=fit.residuals, r_squared=fit.r_squared,
                      column_names=fit.column_names,
                      outside=tuple(int(i) for i in outside),
                      fences=(lo, hi))
