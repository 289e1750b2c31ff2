"""Figure registry.

Each entry builds one display from the canonical inputs and returns the
scene together with a report of the statistics behind it. Builders take
(dataset, basemap, params) where params may override span, alpha,
coverage, or overlap; they are pure, so identical inputs give identical
scenes and reports.
"""

from __future__ import annotations

import csv

import numpy as np

from . import geoviz as gv
from . import mvstats as mv
from .dataset import CORE_VARIABLES, REGION_NAMES, BaseMap, MoralDataset, \
    fixture_path
from .errors import DataError
from .labels import place_labels
from .numcore import (chi2_quantile, data_ellipse, mahalanobis_sq,
                      outside_ellipse, rank_transform,
                      sign_test_probability)
from .scene import (MarkerPrim, PolylinePrim, Scene, Style, TextPrim,
                    compose_grid, compose_row)

RATIO_SERIES = "arbuthnot.csv"

DEFAULTS = {"span": 2.0 / 3.0, "alpha": 0.05, "coverage": 0.68,
            "overlap": 0.10, "palette": None}


class FigureSkip(Exception):
    """Raised when a figure's optional data is absent; callers report the
    message and treat the run as a no-op rather than a failure."""


def _parse_palette(value) -> tuple[str, str]:
    if isinstance(value, str):
        value = tuple(part.strip() for part in value.split(","))
    pair = tuple(value)
    if len(pair) != 2:
        raise DataError("palette must name two colors, light then dark")
    return pair


def _params(params: dict | None) -> dict:
    merged = dict(DEFAULTS)
    if params:
        for key, value in params.items():
            if key not in DEFAULTS:
                raise DataError(f"unknown figure parameter {key!r}")
            if value is None:
                continue
            if key == "palette":
                merged[key] = _parse_palette(value)
            else:
                merged[key] = float(value)
    return merged


def _core_matrix(ds: MoralDataset) -> tuple[MoralDataset, np.ndarray]:
    od = ds.ordered()
    return od, od.matrix(CORE_VARIABLES)


def _canonical_mlm(od: MoralDataset) -> tuple[mv.MlmFit, list[mv.ManovaRow]]:
    Y = od.matrix(["Crime_pers", "Crime_prop"])
    block, _ = mv.dummy_code(od.regions(), reference="C")
    terms = [("Region", block)]
    for c in ("Suicides", "Literacy", "Donations", "Infants", "Wealth"):
        terms.append((c, od.column(c)))
    fit = mv.mlm_fit(Y, terms, response_names=("Crime_pers", "Crime_prop"))
    return fit, mv.manova_type2(fit)


def _region_palette() -> dict[str, str]:
    return gv._group_colors(sorted(REGION_NAMES))


# ---------------------------------------------------------------------------

def fig1(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Annual male/female ratio series with loess smooth, mean line, and
    the consecutive-successes sign test."""
    p = _params(params)
    path = fixture_path(RATIO_SERIES)
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
    except FileNotFoundError:
        raise FigureSkip(
            f"optional ratio series fixture not present ({path.name}); "
            "figure skipped")
    years = np.array([float(r["Year"]) for r in rows])
    ratio = np.array([float(r["Males"]) / float(r["Females"])
                      for r in rows])
    n = len(years)
    mean_ratio = float(ratio.mean())
    scene = gv.scatter_overlay(
        years, ratio, pooled_levels=(), loess_span=p["span"],
        hlines=(mean_ratio,), width=620.0, height=420.0,
        x_label="year", y_label="male/female birth ratio",
        title="Christenings ratio")
    report = {
        "n": n,
        "mean_ratio": mean_ratio,
        "all_above_one": bool(np.all(ratio > 1.0)),
        "run_probability": sign_test_probability(n),
        "span": p["span"],
    }
    return scene, report


def fig4(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Six rank choropleths of the core variables, darker = worse."""
    p = _params(params)
    od = ds.ordered()
    panels = []
    ranks_report: dict[str, dict[str, float]] = {}
    for name in CORE_VARIABLES:
        meta = od.meta(name)
        rank_one = "highest" if meta.more_is_better else "lowest"
        vals = {int(c): float(v)
                for c, v in zip(od.codes(), od.column(name))}
        panels.append(gv.rank_choropleth(
            bm, vals, rank_one_is=rank_one, darker_is="worse",
            title=name, width=360.0, height=400.0,
            palette=p["palette"]))
        ranks = rank_transform(od.column(name), rank_one)
        ranks_report[name] = {str(int(c)): float(r)
                              for c, r in zip(od.codes(), ranks)}
    scene = compose_grid([panels[:3], panels[3:]])
    report = {"variables": list(CORE_VARIABLES), "ranks": ranks_report}
    return scene, report


def fig8(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Rank map, parallel-rank panel, rank map triptych for personal
    crime and literacy."""
    p = _params(params)
    od = ds.ordered()
    pair = ("Crime_pers", "Literacy")
    maps = []
    ranks = []
    for name in pair:
        meta = od.meta(name)
        rank_one = "highest" if meta.more_is_better else "lowest"
        vals = {int(c): float(v)
                for c, v in zip(od.codes(), od.column(name))}
        maps.append(gv.rank_choropleth(
            bm, vals, rank_one_is=rank_one, darker_is="worse",
            title=name, width=380.0, height=560.0,
            palette=p["palette"]))
        ranks.append(rank_transform(od.column(name), rank_one))
    middle = gv.parallel_ranks(ranks[0], ranks[1], names=pair,
                               width=260.0, height=560.0)
    scene = compose_row([maps[0], middle, maps[1]])
    crossings = gv.discordant_pairs(ranks[0], ranks[1])
    rho = float(np.corrcoef(ranks[0], ranks[1])[0, 1])
    report = {"variables": list(pair), "n": od.n,
              "crossings": crossings, "rank_correlation": rho}
    return scene, report


def fig12(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Literacy against personal crime: pooled 68% ellipse with loess on
    the left, per-region ellipses and standard-error crosses on the
    right; points outside the 90% pooled ellipse are labeled in both."""
    p = _params(params)
    od = ds.ordered()
    x = od.column("Literacy")
    y = od.column("Crime_pers")
    names = od.names()
    codes = [str(c) for c in od.codes()]
    left = gv.scatter_overlay(
        x, y, point_texts=names, fallback_texts=codes,
        pooled_levels=(p["coverage"],), loess_span=p["span"],
        label_outside=0.90, width=470.0, height=470.0,
        x_label="Literacy", y_label="Crime_pers", title="Pooled")
    right = gv.scatter_overlay(
        x, y, groups=od.regions(), point_texts=names,
        fallback_texts=codes, pooled_levels=(),
        group_level=p["coverage"], crosses=True, label_outside=0.90,
        width=470.0, height=470.0, x_label="Literacy",
        y_label="Crime_pers", title="By region")
    scene = compose_row([left, right])
    pts = np.column_stack([x, y])
    out_idx = outside_ellipse(pts, 0.90)
    report = {
        "x": "Literacy", "y": "Crime_pers",
        "mean": [float(x.mean()), float(y.mean())],
        "covariance": np.cov(pts.T, ddof=1),
        "coverage": p["coverage"],
        "span": p["span"],
        "outside_090": [int(od.codes()[i]) for i in out_idx],
    }
    return scene, report


def fig13(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Scatterplot matrix of the six core variables with 68% ellipses
    and loess curves."""
    p = _params(params)
    od, X = _core_matrix(ds)
    scene = gv.scatterplot_matrix(X, CORE_VARIABLES, span=p["span"])
    corr = np.corrcoef(X.T)
    report = {"variables": list(CORE_VARIABLES), "correlation": corr,
              "span": p["span"]}
    return scene, report


def fig14(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Symmetric biplot of the core variables with per-region 68%
    ellipses; observations inside their region ellipse are labeled by
    code number, outside by name."""
    p = _params(params)
    od, X = _core_matrix(ds)
    res = mv.pca(X, standardize=True, variable_names=CORE_VARIABLES)
    bi = mv.biplot_layout(res, k=2)
    g = bi.point_coords
    h = bi.vector_coords
    width = height = 640.0
    both = np.vstack([g, h, np.zeros((1, 2))])
    tf, prims = gv.plot_frame(
        both[:, 0], both[:, 1], width, height,
        f"Dimension 1 ({bi.pct_variance[0]:.1f}%)",
        f"Dimension 2 ({bi.pct_variance[1]:.1f}%)", title="Biplot")
    notes: list[str] = []

    regions = od.regions()
    palette = _region_palette()
    inside = np.zeros(od.n, dtype=bool)
    for reg in sorted(set(regions)):
        idx = [i for i, r in enumerate(regions) if r == reg]
        gp = g[idx]
        col = palette[reg]
        if len(idx) >= 3:
            ell = data_ellipse(gp, p["coverage"])
            if not ell.degenerate:
                prims.append(PolylinePrim(
                    points=tf(np.vstack([ell.boundary(),
                                         ell.boundary()[:1]])),
                    style=Style(stroke=col, stroke_width=1.2)))
                c2 = chi2_quantile(p["coverage"], 2)
                for i in idx:
                    if mahalanobis_sq(g[i], ell.center,
                                      ell.shape) <= c2:
                        inside[i] = True
        else:
            notes.append(f"region {reg}: {len(idx)} member(s), "
                         "ellipse skipped")

    dev_g = tf(g)
    for i in range(od.n):
        prims.append(MarkerPrim(
            xy=(float(dev_g[i, 0]), float(dev_g[i, 1])), kind="circle",
            size=2.2, style=Style(fill=palette[regions[i]])))
    origin = tf(np.zeros((1, 2)))[0]
    dev_h = tf(h)
    for j, name in enumerate(bi.variable_names):
        prims.append(PolylinePrim(
            points=np.vstack([origin, dev_h[j]]),
            style=Style(stroke="#111111", stroke_width=1.4)))
        prims.append(TextPrim(
            xy=(float(dev_h[j, 0]), float(dev_h[j, 1]) - 4.0),
            text=name, font_size=10.0, anchor="middle"))

    center = g.mean(axis=0)
    cov = np.cov(g.T, ddof=1)
    pri = np.array([mahalanobis_sq(g[i], center, cov)
                    for i in range(od.n)])
    texts = [str(od.codes()[i]) if inside[i] else od.names()[i]
             for i in range(od.n)]
    placed = place_labels(dev_g, texts, priorities=pri,
                          fallback_texts=[str(c) for c in od.codes()],
                          font_size=8.0, marker_radius=3.0)
    for pl in placed.placed:
        prims.append(TextPrim(xy=(pl.box[0], pl.box[3] - 2.0),
                              text=pl.text, font_size=8.0, anchor="start",
                              style=Style(fill="#444444")))
    notes.append(f"labels dropped: {len(placed.dropped)}")

    scene = Scene(width=width, height=height, layers=tuple(prims),
                  notes=tuple(notes))
    report = {
        "pct_variance": res.pct_variance,
        "eigenvalues": res.eigenvalues,
        "loadings": {name: res.loadings[i, :2]
                     for i, name in enumerate(CORE_VARIABLES)},
        "coverage": p["coverage"],
    }
    return scene, report


def fig15(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Canonical discriminant plot of the five multi-member regions with
    99% confidence circles for the region means and variable structure
    vectors; dimension 1 oriented so literacy points positive."""
    _params(params)
    od, X = _core_matrix(ds)
    keep = [i for i, r in enumerate(od.regions()) if r != "X"]
    labels = [od.regions()[i] for i in keep]
    cda = mv.canonical_discriminant(
        X[keep], labels, variable_names=CORE_VARIABLES,
        orient_positive="Literacy")
    s = cda.scores[:, :2]
    pct = 100.0 * cda.eigenvalues / cda.eigenvalues.sum()
    width = height = 620.0

    circles = {glab: mv.confidence_circle(cda, glab, 0.99)
               for glab in cda.group_labels}
    boundary_pts = [c.boundary() for c in circles.values()]
    ext = np.vstack([s] + boundary_pts)
    tf, prims = gv.plot_frame(
        ext[:, 0], ext[:, 1], width, height,
        f"Canonical dimension 1 ({pct[0]:.1f}%)",
        f"Canonical dimension 2 ({pct[1]:.1f}%)",
        title="Canonical discriminant plot")
    palette = _region_palette()

    dev = tf(s)
    for i in range(len(keep)):
        prims.append(MarkerPrim(
            xy=(float(dev[i, 0]), float(dev[i, 1])), kind="circle",
            size=2.2, style=Style(fill=palette[labels[i]])))
    for glab in cda.group_labels:
        circ = circles[glab]
        prims.append(PolylinePrim(
            points=tf(np.vstack([circ.boundary(), circ.boundary()[:1]])),
            style=Style(stroke=palette[glab], stroke_width=1.4)))
        cdev = tf(circ.center.reshape(1, 2))[0]
        prims.append(TextPrim(xy=(float(cdev[0]), float(cdev[1]) + 4.0),
                              text=glab, font_size=13.0, anchor="middle"))

    span_x = min(abs(tf.x1), abs(tf.x0))
    span_y = min(abs(tf.y1), abs(tf.y0))
    vec_scale = 0.9 * min(span_x, span_y) / float(
        np.max(np.abs(cda.structure[:, :2])))
    origin = tf(np.zeros((1, 2)))[0]
    for i, name in enumerate(CORE_VARIABLES):
        tip = cda.structure[i, :2] * vec_scale
        dev_tip = tf(tip.reshape(1, 2))[0]
        prims.append(PolylinePrim(
            points=np.vstack([origin, dev_tip]),
            style=Style(stroke="#111111", stroke_width=1.2)))
        prims.append(TextPrim(
            xy=(float(dev_tip[0]), float(dev_tip[1]) - 4.0), text=name,
            font_size=10.0, anchor="middle"))

    scene = Scene(width=width, height=height, layers=tuple(prims))
    report = {
        "eigenvalues": cda.eigenvalues,
        "pct_of_sum": pct,
        "first_two_share": float(
            cda.eigenvalues[:2].sum() / cda.eigenvalues.sum()),
        "structure": {name: cda.structure[i]
                      for i, name in enumerate(CORE_VARIABLES)},
        "group_means": {glab: cda.group_means[k]
                        for k, glab in enumerate(cda.group_labels)},
        "group_n": {glab: int(cda.group_n[k])
                    for k, glab in enumerate(cda.group_labels)},
    }
    return scene, report


def fig16(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Hypothesis-error overlay for the two crime responses: dashed E
    ellipse, one H ellipse or segment per model term, protruding exactly
    when the Roy test rejects."""
    p = _params(params)
    od = ds.ordered()
    fit, rows = _canonical_mlm(od)
    alpha = p["alpha"]
    he = mv.he_geometry(fit, rows,
                        response_pair=("Crime_prop", "Crime_pers"),
                        alpha=alpha)
    x = od.column("Crime_prop")
    y = od.column("Crime_pers")
    boundaries = [he.e_ellipse.boundary()]
    for ell in he.h_ellipses.values():
        boundaries.append(ell.boundary())
    ext = np.vstack([np.column_stack([x, y])] + boundaries)
    width = height = 640.0
    tf, prims = gv.plot_frame(ext[:, 0], ext[:, 1], width, height,
                              "Crime_prop", "Crime_pers",
                              title=f"H and E ellipses (alpha={alpha:g})")
    pts = np.column_stack([x, y])
    dev = tf(pts)
    for i in range(od.n):
        prims.append(MarkerPrim(
            xy=(float(dev[i, 0]), float(dev[i, 1])), kind="circle",
            size=2.0, style=Style(fill="#AAAAAA")))
    out_idx = outside_ellipse(pts, 0.95)
    if len(out_idx):
        placed = place_labels(
            dev[out_idx], [od.names()[i] for i in out_idx],
            fallback_texts=[str(od.codes()[i]) for i in out_idx],
            font_size=9.0, marker_radius=2.0)
        for pl in placed.placed:
            prims.append(TextPrim(
                xy=(pl.box[0], pl.box[3] - 2.0), text=pl.text,
                font_size=9.0, anchor="start",
                style=Style(fill="#555555")))
    eb = he.e_ellipse.boundary()
    prims.append(PolylinePrim(points=tf(np.vstack([eb, eb[:1]])),
                              style=Style(stroke="#B2182B",
                                          stroke_width=1.6,
                                          dash=(6.0, 4.0))))
    e_top = eb[int(np.argmax(eb[:, 1]))]
    e_dev = tf(e_top.reshape(1, 2))[0]
    prims.append(TextPrim(xy=(float(e_dev[0]), float(e_dev[1]) - 4.0),
                          text="Error", font_size=10.0, anchor="middle",
                          style=Style(fill="#B2182B")))
    for term, ell in he.h_ellipses.items():
        hb = ell.boundary()
        pts = tf(np.vstack([hb, hb[:1]]) if not ell.degenerate else hb)
        prims.append(PolylinePrim(points=pts, style=Style(
            stroke="#2166AC", stroke_width=1.4)))
        top = hb[int(np.argmax(hb[:, 1]))]
        tdev = tf(top.reshape(1, 2))[0]
        prims.append(TextPrim(xy=(float(tdev[0]), float(tdev[1]) - 4.0),
                              text=term, font_size=10.0, anchor="middle",
                              style=Style(fill="#2166AC")))
    gdev = tf(fit.grand_means[[1, 0]].reshape(1, 2))[0]
    prims.append(MarkerPrim(xy=(float(gdev[0]), float(gdev[1])),
                            kind="cross", size=5.0,
                            style=Style(stroke="#111111",
                                        stroke_width=1.4)))
    scene = Scene(width=width, height=height, layers=tuple(prims))
    report = {
        "alpha": alpha,
        "df_error": fit.df_error,
        "manova": [
            {"term": r.term, "df": r.df, "roy_stat": r.roy_stat,
             "approx_f": r.approx_f, "df_num": r.df_num,
             "df_den": r.df_den, "p_value": r.p_value}
            for r in rows],
        "r_squared": fit.r_squared(),
        "protrusion": {r.term: mv.protrusion_ratio(he, r.term)
                       for r in rows},
        "outside_095": [int(od.codes()[i]) for i in out_idx],
    }
    return scene, report


def _effect_ordered_variables(od: MoralDataset, X: np.ndarray):
    res = mv.pca(X, standardize=True, variable_names=CORE_VARIABLES)
    return gv.effect_order(mv.biplot_layout(res, k=2))


def fig17(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Star glyph maps: individual glyphs per departement on the left,
    region quartile glyph overlays on the right."""
    _params(params)
    od, X = _core_matrix(ds)
    order = _effect_ordered_variables(od, X)
    left = gv.star_map(bm, od, order, encoding="individual",
                       title="Individual glyphs")
    right = gv.star_map(bm, od, order, encoding="region_quartiles",
                        title="Region quartile glyphs")
    scene = compose_row([left, right])
    region_counts = {}
    for reg in sorted(set(od.regions())):
        region_counts[reg] = sum(1 for r in od.regions() if r == reg)
    report = {"angular_order": list(order), "n": od.n,
              "region_counts": region_counts}
    return scene, report


def fig18(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Star maps colored by the mean (left) and standard deviation
    (right) of each departement's variable ranks; features outside the
    1.5 IQR fences of the encoded statistic are annotated."""
    _params(params)
    od, X = _core_matrix(ds)
    order = _effect_ordered_variables(od, X)
    left = gv.star_map(bm, od, order, encoding="individual",
                       color_encode="mean_rank", annotate_unusual=True,
                       title="Mean rank")
    right = gv.star_map(bm, od, order, encoding="individual",
                        color_encode="sd_rank", annotate_unusual=True,
                        title="SD of ranks")
    scene = compose_row([left, right])
    ranks = np.column_stack([
        rank_transform(od.column(v),
                       "highest" if od.meta(v).more_is_better
                       else "lowest") for v in order])
    means = ranks.mean(axis=1)
    sds = ranks.std(axis=1, ddof=1)
    out_mean, mean_lo, mean_hi = mv.boxplot_outside(means)
    out_sd, sd_lo, sd_hi = mv.boxplot_outside(sds)
    codes = list(od.codes())
    report = {
        "angular_order": list(order),
        "mean_rank": {str(c): float(v) for c, v in zip(codes, means)},
        "sd_rank": {str(c): float(v) for c, v in zip(codes, sds)},
        "unusual_mean": sorted(int(codes[i]) for i in out_mean),
        "unusual_sd": sorted(int(codes[i]) for i in out_sd),
        "mean_fences": [mean_lo, mean_hi],
        "sd_fences": [sd_lo, sd_hi],
    }
    return scene, report


def fig19(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """RGB-blended choropleth: personal crime on red, property crime on
    green, literacy on blue, with the trilinear legend."""
    _params(params)
    od = ds.ordered()
    channels = ("Crime_pers", "Crime_prop", "Literacy")
    cols = [gv.normalize_minmax(od.column(v)) for v in channels]
    triples = np.column_stack(cols)
    map_scene = gv.factor_rgb_map(bm, od.codes(), triples,
                                  title="RGB blend")
    legend = gv.trilinear_legend(channels)
    scene = compose_row([map_scene, legend])
    report = {
        "channels": {"r": channels[0], "g": channels[1],
                     "b": channels[2]},
        "ranges": {v: [float(od.column(v).min()),
                       float(od.column(v).max())] for v in channels},
    }
    return scene, report


def fig20(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Choropleth of the three varimax factor scores blended into RGB;
    departements outside the per-factor 1.5 IQR fences are flagged."""
    _params(params)
    od, X = _core_matrix(ds)
    res = mv.pca(X, standardize=True, variable_names=CORE_VARIABLES)
    loadings = res.loadings[:, :3] * np.sqrt(res.eigenvalues[:3])
    rot = mv.varimax(loadings, normalize=True)
    F = mv.factor_scores(X, rot)
    triples = np.column_stack([gv.normalize_minmax(F[:, j])
                               for j in range(3)])
    codes = list(od.codes())
    flagged: set[int] = set()
    for j in range(3):
        out, _, _ = mv.boxplot_outside(F[:, j])
        flagged |= {int(codes[i]) for i in out}
    outliers = sorted(flagged)
    scene = gv.factor_rgb_map(bm, codes, triples, outlier_codes=outliers,
                              title="Factor score blend")
    report = {
        "channels": {"r": "factor1", "g": "factor2", "b": "factor3"},
        "rotated_loadings": {name: rot[i]
                             for i, name in enumerate(CORE_VARIABLES)},
        "outliers": outliers,
    }
    return scene, report


def fig21(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Conditioned choropleth of property crime given literacy and
    wealth: 2x2 shingle grid, global diverging classes, panel medians
    and counts, marginal percent bars."""
    p = _params(params)
    od = ds.ordered()
    result = gv.ccmap(
        bm, od.codes(), od.column("Crime_prop"), od.column("Literacy"),
        od.column("Wealth"), k_x=2, k_y=2, overlap=p["overlap"],
        response_reciprocal=True,
        names=("Crime_prop", "Literacy", "Wealth"),
        y_low_first_on_top=True)
    codes = list(result.codes)

    def shingle_doc(sh):
        return {"lower": sh.lower, "upper": sh.upper,
                "codes": [int(codes[i]) for i in sh.member_indices]}

    panels = sorted(result.panels, key=lambda q: (q.x_index, q.y_index))
    report = {
        "schema": "moralstat/1",
        "response": "Crime_prop",
        "given_x": "Literacy",
        "given_y": "Wealth",
        "k_x": 2, "k_y": 2,
        "overlap": p["overlap"],
        "reciprocal": True,
        "cuts": result.scale.cuts,
        "classes": {str(c): int(result.scale.classes[i])
                    for i, c in enumerate(codes)},
        "shingles_x": [shingle_doc(sh) for sh in result.shingles_x],
        "shingles_y": [shingle_doc(sh) for sh in result.shingles_y],
        "panels": [
            {"x_index": q.x_index, "y_index": q.y_index,
             "codes": list(q.member_codes), "count": q.count,
             "median_response": q.median_response}
            for q in panels],
    }
    return result.scene, report


def fig22(ds: MoralDataset, bm: BaseMap, params: dict | None = None):
    """Quadratic response surface of personal crime on literacy and
    wealth: fitted-value map and residual map with boxplot-outside
    departements labeled."""
    _params(params)
    od = ds.ordered()
    y = od.column("Crime_pers")
    fit = mv.response_surface(y, od.column("Literacy"),
                              od.column("Wealth"))
    codes = list(od.codes())
    outside_codes = [int(codes[i]) for i in fit.outside]
    names_by_code = {int(c): od.names()[i]
                     for i, c in enumerate(codes)}
    fitted_scene, resid_scene = gv.fitted_residual_maps(
        bm, codes, fit.fitted, fit.residuals,
        outside_codes=outside_codes, names_by_code=names_by_code,
        titles=("Fitted Crime_pers", "Residuals"))
    scene = compose_row([fitted_scene, resid_scene])
    report = {
        "response": "Crime_pers",
        "predictors": ["Literacy", "Wealth"],
        "terms": list(fit.column_names),
        "coefficients": fit.coefficients,
        "r_squared": fit.r_squared,
        "outside": outside_codes,
        "fences": list(fit.fences),
    }
    return scene, report


REGISTRY = {
    "fig1": fig1,
    "fig4": fig4,
    "fig8": fig8,
    "fig12": fig12,
    "fig13": fig13,
    "fig14": fig14,
    "fig15": fig15,
    "fig16": fig16,
    "fig17": fig17,
    "fig18": fig18,
    "fig19": fig19,
    "fig20": fig20,
    "fig21": fig21,
    "fig22": fig22,
}


def build_figure(figure_id: str, ds: MoralDataset, bm: BaseMap,
                 params: dict | None = None):
    """Run one registry entry; returns (scene, report)."""
    if figure_id not in REGISTRY:
        raise DataError(f"unknown figure id {figure_id!r}")
    return REGISTRY[figure_id](ds, bm, params)
