import math

import numpy as np
import pytest
from scipy import stats

from moralstat.color import (DIVERGING8, NEUTRAL, from_hex, rgb_blend,
                             sequential_ramp)
from moralstat.dataset import (CORE_VARIABLES, BaseMap, DepartementRecord,
                               MapFeature, MoralDataset, VariableMeta)
from moralstat.errors import DataError, NumericError
from moralstat.geoviz import (ccmap, diverging_percentile_scale,
                              discordant_pairs, effect_order,
                              equal_count_shingles, factor_rgb_map,
                              fitted_residual_maps, glyph_polygon,
                              normalize_minmax, parallel_ranks, plot_frame,
                              rank_choropleth, ray_fractions, relative_blend,
                              ring_area, scatter_overlay, scatterplot_matrix,
                              star_glyph, star_map, trilinear_legend)
from moralstat.mvstats import BiplotGeometry
from moralstat.scene import PolygonPrim, PolylinePrim, TextPrim, render_svg

SEED = 1830


def _square(code, name, ox, oy, side=1.0):
    ring = np.array([[ox, oy], [ox + side, oy], [ox + side, oy + side],
                     [ox, oy + side], [ox, oy]])
    return MapFeature(code=code, name=name, rings=(ring,))


def _grid_map(n):
    return BaseMap(tuple(_square(i + 1, f"F{i + 1}", float(i % 5) * 2.0,
                                 float(i // 5) * 2.0) for i in range(n)))


def _fills_by_feature(scene):
    out = {}
    for p in scene.layers:
        if isinstance(p, PolygonPrim) and p.feature_id is not None:
            out.setdefault(p.feature_id, []).append(p.style.fill)
    return out


# rank choropleth ----------------------------------------------------------------

def test_rank_endpoints_two_features():
    bm = _grid_map(2)
    scene = rank_choropleth(bm, {1: 10.0, 2: 20.0}, rank_one_is="highest",
                            darker_is="worse", annotate=False)
    fills = _fills_by_feature(scene)
    assert fills[2] == ["#F0F0F0"]  # rank 1, light end
    assert fills[1] == ["#22304A"]  # rank 2, dark end


def test_rank_luminance_monotone():
    bm = _grid_map(5)
    vals = {c: float(c * 10) for c in range(1, 6)}
    scene = rank_choropleth(bm, vals, rank_one_is="highest",
                            darker_is="worse", annotate=False)
    fills = _fills_by_feature(scene)
    # higher value = better rank = lighter; luminance rises with code
    lums = [from_hex(fills[c][0]).luminance() for c in range(1, 6)]
    assert all(a < b for a, b in zip(lums, lums[1:]))


def test_rank_darker_is_rank1():
    bm = _grid_map(3)
    scene = rank_choropleth(bm, {1: 5.0, 2: 6.0, 3: 7.0},
                            rank_one_is="highest", darker_is="rank1",
                            annotate=False)
    fills = _fills_by_feature(scene)
    assert fills[3] == ["#22304A"]
    assert fills[1] == ["#F0F0F0"]


def test_rank_choropleth_permutation_invariant():
    feats = tuple(_square(c, f"F{c}", float(c), 0.0) for c in (3, 1, 2))
    vals = {1: 4.0, 2: 9.0, 3: 1.0}
    a = rank_choropleth(BaseMap(feats), vals)
    b = rank_choropleth(BaseMap(tuple(reversed(feats))),
                        dict(reversed(list(vals.items()))))
    assert render_svg(a) == render_svg(b)


def test_rank_choropleth_missing_value_hollow():
    bm = _grid_map(3)
    scene = rank_choropleth(bm, {1: 1.0, 2: 2.0}, annotate=False)
    fills = _fills_by_feature(scene)
    assert fills[3] == ["none"]
    assert any("code 3 has no value" in n for n in scene.notes)
    svg = render_svg(scene).decode()
    assert 'fill="none"' in svg


def test_rank_choropleth_palette_override():
    bm = _grid_map(2)
    scene = rank_choropleth(bm, {1: 1.0, 2: 2.0}, rank_one_is="highest",
                            palette=("#FFFFFF", "#FF0000"), annotate=False)
    fills = _fills_by_feature(scene)
    assert fills[2] == ["#FFFFFF"] and fills[1] == ["#FF0000"]
    with pytest.raises(DataError, match="palette"):
        rank_choropleth(bm, {1: 1.0}, palette=("#FFFFFF",))


def test_rank_choropleth_bad_direction():
    with pytest.raises(DataError, match="darker_is"):
        rank_choropleth(_grid_map(1), {1: 1.0}, darker_is="sideways")


# scatter overlay ----------------------------------------------------------------

def test_scatter_single_group_cross_oracle():
    rng = np.random.default_rng(SEED)
    x = rng.normal(size=20)
    y = rng.normal(size=20)
    scene = scatter_overlay(x, y, groups=["g"] * 20, pooled_levels=(),
                            crosses=True)
    crosses = [p for p in scene.layers
               if isinstance(p, PolylinePrim)
               and p.style.stroke == "#1B9E77"
               and p.style.stroke_width == 2.0]
    assert len(crosses) == 2
    tf, _ = plot_frame(x, y, 480.0, 480.0, "x", "y", None)
    se = np.array([x.std(ddof=1), y.std(ddof=1)]) / math.sqrt(20)
    cx, cy = x.mean(), y.mean()
    ex = tf(np.array([[cx - se[0], cy], [cx + se[0], cy]]))
    assert np.allclose(crosses[0].points, ex, atol=1e-9)


def test_scatter_small_group_skips_ellipse():
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    y = np.array([0.0, 1.0, 0.5, 2.0, 1.5])
    scene = scatter_overlay(x, y, groups=["a", "a", "a", "b", "b"],
                            pooled_levels=(), group_level=0.68)
    assert any("group b: 2 member(s)" in n for n in scene.notes)
    # group a still gets its ellipse: exactly one group-colored curve
    curves = [p for p in scene.layers if isinstance(p, PolylinePrim)
              and p.style.stroke == "#1B9E77"
              and p.style.stroke_width == 1.2]
    assert len(curves) == 1


def test_scatter_mismatched_lengths():
    with pytest.raises(NumericError):
        scatter_overlay(np.zeros(3), np.zeros(4))


# scatterplot matrix -------------------------------------------------------------

def test_matrix_panel_counts(ordered):
    scene = scatterplot_matrix(ordered.matrix(CORE_VARIABLES),
                               CORE_VARIABLES)
    borders = [p for p in scene.layers if isinstance(p, PolylinePrim)
               and p.style.stroke == "#555555" and len(p.points) == 5]
    assert len(borders) == 36
    diag = [p for p in scene.layers if isinstance(p, TextPrim)
            and p.text in CORE_VARIABLES]
    assert len(diag) == 6
    loess_curves = [p for p in scene.layers if isinstance(p, PolylinePrim)
                    and p.style.stroke == "#B2182B"]
    assert len(loess_curves) == 30
    ellipses = [p for p in scene.layers if isinstance(p, PolylinePrim)
                and p.style.stroke == "#2166AC"]
    assert len(ellipses) == 30


def test_matrix_collinear_twins_degenerate():
    rng = np.random.default_rng(SEED)
    x = rng.normal(size=30)
    scene = scatterplot_matrix(np.column_stack([x, 2.0 * x - 1.0]),
                               ("a", "b"))
    assert any("(0,1) ellipse degenerate" in n for n in scene.notes)
    assert any("(1,0) ellipse degenerate" in n for n in scene.notes)


# parallel ranks -----------------------------------------------------------------

def test_discordant_pairs_extremes():
    r = np.arange(1.0, 11.0)
    assert discordant_pairs(r, r) == 0
    assert discordant_pairs(r, r[::-1]) == 45


def test_discordant_pairs_matches_kendall():
    rng = np.random.default_rng(SEED)
    for _ in range(5):
        a = rng.permutation(12).astype(float)
        b = rng.permutation(12).astype(float)
        d = discordant_pairs(a, b)
        tau = stats.kendalltau(a, b).statistic
        assert abs(tau - (1.0 - 4.0 * d / (12 * 11))) < 1e-12


def test_parallel_ranks_segment_count():
    a = np.arange(1.0, 9.0)
    scene = parallel_ranks(a, a[::-1])
    segs = [p for p in scene.layers if isinstance(p, PolylinePrim)
            and p.style.stroke == "#555555"]
    assert len(segs) == 8
    with pytest.raises(DataError):
        parallel_ranks(a, a[:5])


# effect order -------------------------------------------------------------------

def _biplot_with_vectors(vectors, names):
    arr = np.asarray(vectors, dtype=float)
    return BiplotGeometry(point_coords=np.zeros((3, 2)),
                          vector_coords=arr, axes_equated=True,
                          variable_names=tuple(names),
                          singular_values=np.ones(2),
                          pct_variance=np.array([60.0, 40.0]))


def _unit(deg):
    rad = math.radians(deg)
    return [math.cos(rad), math.sin(rad)]


def test_effect_order_by_angle():
    bp = _biplot_with_vectors(
        [_unit(250.0), _unit(10.0), _unit(100.0)], ("far", "near", "mid"))
    assert effect_order(bp) == ("near", "mid", "far")


def test_effect_order_rotation_preserves_cycle():
    names = ("p", "q", "r", "s")
    base = [10.0, 80.0, 170.0, 300.0]
    before = effect_order(_biplot_with_vectors(
        [_unit(a) for a in base], names))
    after = effect_order(_biplot_with_vectors(
        [_unit(a + 95.0) for a in base], names))
    doubled = after + after
    k = doubled.index(before[0])
    assert doubled[k:k + 4] == before


def test_effect_order_ties_adjacent_alphabetical():
    bp = _biplot_with_vectors(
        [_unit(45.0), _unit(45.0), _unit(200.0)], ("zeta", "alpha", "last"))
    assert effect_order(bp) == ("alpha", "zeta", "last")


# star glyphs --------------------------------------------------------------------

def test_star_glyph_regular_polygon():
    spec = star_glyph([1.0] * 7, [f"v{i}" for i in range(7)])
    ring = glyph_polygon(spec, (10.0, 20.0), 5.0)
    assert len(ring) == 8
    dists = np.hypot(ring[:-1, 0] - 10.0, ring[:-1, 1] - 20.0)
    assert np.allclose(dists, 5.0, atol=1e-12)
    # regular heptagon area
    expect = 0.5 * 7 * 25.0 * math.sin(2.0 * math.pi / 7)
    assert abs(abs(ring_area(ring)) - expect) < 1e-9


def test_star_glyph_scaling():
    spec = star_glyph([0.5] * 4, list("abcd"))
    ring = glyph_polygon(spec, (0.0, 0.0), 8.0)
    assert np.allclose(np.hypot(ring[:-1, 0], ring[:-1, 1]), 4.0)


def test_star_glyph_spike_area():
    fracs = [1.0, 0.05, 0.05, 0.05]
    spec = star_glyph([1.0, 0.0, 0.0, 0.0], list("wxyz"))
    assert spec.ray_fractions == tuple(max(f, 0.05) for f in fracs)
    ring = glyph_polygon(spec, (0.0, 0.0), 10.0)
    # area of a fan of 4 triangles with perpendicular adjacent rays
    expect = sum(0.5 * 100.0 * fracs[i] * fracs[(i + 1) % 4]
                 for i in range(4))
    assert abs(abs(ring_area(ring)) - expect) < 1e-9


def test_star_glyph_rejects_bad_values():
    with pytest.raises(DataError):
        star_glyph([1.2], ["a"])
    with pytest.raises(DataError):
        star_glyph([], [])


def test_ray_fractions_endpoints():
    fr = ray_fractions(np.array([1.0, 43.5, 86.0]), 86)
    assert fr[0] == 1.0
    assert abs(fr[2] - 1.0 / 86.0) < 1e-15


# star maps ----------------------------------------------------------------------

def _toy_dataset(rows, variables=("A", "B")):
    metas = tuple(VariableMeta(name=v, kind="rank_index",
                               more_is_better=False) for v in variables)
    records = tuple(DepartementRecord(
        code=c, name=f"D{c}", region=reg,
        values={v: float(val) for v, val in zip(variables, vals)})
        for c, reg, vals in rows)
    return MoralDataset(records, metas)


def test_star_map_identical_profiles_coincident():
    ds = _toy_dataset([(c, "E", [3.0, 7.0]) for c in (1, 2, 3, 4)])
    scene = star_map(_grid_map(4), ds, ("A", "B"),
                     encoding="region_quartiles")
    stars = [p for p in scene.layers if isinstance(p, PolygonPrim)
             and p.feature_id is None]
    assert len(stars) == 3
    for s in stars[1:]:
        assert np.allclose(s.rings[0], stars[0].rings[0], atol=1e-12)


def test_star_map_quartile_orderings():
    rows = [(c, "E", [float(c), float(10 - c)]) for c in (1, 2, 3, 4, 5)]
    ds = _toy_dataset(rows)
    scene = star_map(_grid_map(5), ds, ("A", "B"),
                     encoding="region_quartiles", width=520.0,
                     height=560.0)
    stars = [p for p in scene.layers if isinstance(p, PolygonPrim)
             and p.feature_id is None]
    assert [s.style.fill for s in stars] == ["#BBBBBB", "#4477AA",
                                             "#FFFFFF"]
    label = next(p for p in scene.layers if isinstance(p, TextPrim)
                 and p.text == "E")
    radius = 0.055 * 520.0
    center = np.array([label.xy[0], label.xy[1] - radius - 12.0])
    rs = [np.hypot(s.rings[0][:-1, 0] - center[0],
                   s.rings[0][:-1, 1] - center[1]) for s in stars]
    assert np.all(rs[0] >= rs[1] - 1e-9)  # upper quartile outside median
    assert np.all(rs[1] >= rs[2] - 1e-9)  # median outside lower quartile


def test_star_map_small_region_median_only():
    ds = _toy_dataset([(1, "E", [1.0, 2.0]), (2, "E", [2.0, 1.0]),
                       (3, "N", [3.0, 3.0])])
    scene = star_map(_grid_map(3), ds, ("A", "B"),
                     encoding="region_quartiles")
    assert any("region E: 2 member(s)" in n for n in scene.notes)
    assert any("region N: 1 member(s)" in n for n in scene.notes)


def test_star_map_individual_glyph_per_feature():
    ds = _toy_dataset([(c, "E", [float(c), float(c % 3)])
                       for c in (1, 2, 3, 4)])
    scene = star_map(_grid_map(4), ds, ("A", "B"), encoding="individual")
    glyphs = [p for p in scene.layers if isinstance(p, PolygonPrim)
              and p.feature_id is not None and p.style.fill is not None
              and p.style.fill != "#FFFFFF"]
    assert len(glyphs) == 4


def test_star_map_rejects_unknown_modes():
    ds = _toy_dataset([(1, "E", [1.0, 2.0])])
    with pytest.raises(DataError):
        star_map(_grid_map(1), ds, ("A", "B"), encoding="spiral")
    with pytest.raises(DataError):
        star_map(_grid_map(1), ds, ("A", "B"), color_encode="hue")


# color blending -----------------------------------------------------------------

def test_rgb_blend_extremes():
    assert rgb_blend(0.0, 0.0, 0.0).hex == "#000000"
    assert rgb_blend(1.0, 1.0, 1.0).hex == "#FFFFFF"


def test_rgb_blend_same_hue_different_lightness():
    lo = rgb_blend(0.25, 0.25, 0.0)
    hi = rgb_blend(0.75, 0.75, 0.0)
    assert lo.r == lo.g and lo.b == 0.0
    assert hi.r == hi.g and hi.b == 0.0
    assert hi.luminance() > lo.luminance()


def test_rgb_blend_permutation():
    col = rgb_blend(1.0, 0.0, 0.5, permutation=(2, 0, 1))
    assert (col.r, col.g, col.b) == (0.5, 1.0, 0.0)
    with pytest.raises(NumericError):
        rgb_blend(0.0, 0.0, 0.0, permutation=(0, 0, 1))


def test_relative_blend_scale_invariant():
    a = relative_blend(0.2, 0.3, 0.5)
    b = relative_blend(2.0, 3.0, 5.0)
    assert (a.r, a.g, a.b) == (b.r, b.g, b.b)
    grey = relative_blend(0.0, 0.0, 0.0)
    assert grey.hex == "#555555"


def test_trilinear_legend_cells_and_vertices():
    steps = 8
    scene = trilinear_legend(("R", "G", "B"), steps=steps)
    cells = [p for p in scene.layers if isinstance(p, PolygonPrim)]
    assert len(cells) == steps * steps
    colors = [from_hex(c.style.fill) for c in cells]
    assert any(c.r > 0.9 and c.g < 0.05 and c.b < 0.05 for c in colors)
    assert any(c.g > 0.9 and c.r < 0.05 and c.b < 0.05 for c in colors)
    assert any(c.b > 0.9 and c.r < 0.05 and c.g < 0.05 for c in colors)
    texts = [p.text for p in scene.layers if isinstance(p, TextPrim)]
    assert texts == ["R", "G", "B"]
    with pytest.raises(DataError):
        trilinear_legend(("R", "G"))


def test_factor_rgb_map_extreme_triples():
    bm = _grid_map(3)
    triples = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0],
                        [0.5, 0.5, 0.5]])
    scene = factor_rgb_map(bm, [1, 2, 3], triples)
    fills = _fills_by_feature(scene)
    assert fills[1] == ["#000000"]
    assert fills[2] == ["#FFFFFF"]
    assert fills[3] == ["#808080"]


def test_factor_rgb_map_outlier_annotation():
    bm = _grid_map(3)
    triples = np.array([[0.1, 0.2, 0.3], [0.9, 0.8, 0.7],
                        [0.5, 0.5, 0.5]])
    scene = factor_rgb_map(bm, [1, 2, 3], triples, outlier_codes=[2])
    texts = [p.text for p in scene.layers if isinstance(p, TextPrim)]
    assert "2" in texts


def test_factor_rgb_map_validation():
    bm = _grid_map(2)
    with pytest.raises(DataError):
        factor_rgb_map(bm, [1, 2], np.array([[0.0, 0.0, 0.0]]))
    with pytest.raises(DataError):
        factor_rgb_map(bm, [1], np.array([[1.5, 0.0, 0.0]]))


def test_normalize_minmax_bounds():
    v = normalize_minmax(np.array([3.0, 7.0, 5.0]))
    assert v.min() == 0.0 and v.max() == 1.0
    assert np.all(normalize_minmax(np.full(4, 2.0)) == 0.0)


# shingles -----------------------------------------------------------------------

def test_shingles_k1_single_interval():
    v = np.array([5.0, 1.0, 3.0, 9.0])
    sh = equal_count_shingles(v, 1, 0.0)
    assert len(sh) == 1
    assert sh[0].member_indices == (0, 1, 2, 3)
    assert (sh[0].lower, sh[0].upper) == (1.0, 9.0)


def test_shingles_no_overlap_halves():
    v = np.arange(10.0)
    lo, hi = equal_count_shingles(v, 2, 0.0)
    assert lo.member_indices == (0, 1, 2, 3, 4)
    assert hi.member_indices == (5, 6, 7, 8, 9)


def test_shingles_guerry_sizes():
    rng = np.random.default_rng(SEED)
    v = rng.normal(size=86)
    lo, hi = equal_count_shingles(v, 2, 0.10)
    shared = set(lo.member_indices) & set(hi.member_indices)
    assert len(lo.member_indices) == 45
    assert len(hi.member_indices) == 45
    assert len(shared) == 4


def test_shingles_cover_everything():
    rng = np.random.default_rng(SEED)
    for n, k, overlap in ((20, 2, 0.0), (30, 3, 0.1), (86, 4, 0.25),
                          (17, 2, 0.5)):
        v = rng.normal(size=n)
        sh = equal_count_shingles(v, k, overlap)
        union = set()
        for s in sh:
            union.update(s.member_indices)
            assert s.lower == min(v[list(s.member_indices)])
            assert s.upper == max(v[list(s.member_indices)])
        assert union == set(range(n))


def test_shingles_validation():
    v = np.arange(5.0)
    with pytest.raises(DataError):
        equal_count_shingles(v, 0, 0.0)
    with pytest.raises(DataError):
        equal_count_shingles(v, 2, 1.0)
    with pytest.raises(DataError):
        equal_count_shingles(v, 6, 0.0)


# diverging percentile scale -----------------------------------------------------

def test_diverging_scale_extreme_classes():
    v = np.arange(1.0, 101.0)
    scale = diverging_percentile_scale(v)
    assert scale.classes[0] == 1 and scale.classes[-1] == 8
    sizes = [int(np.sum(scale.classes == c)) for c in range(1, 9)]
    assert sizes == [20, 10, 10, 10, 10, 10, 10, 20]
    assert scale.color(0) == DIVERGING8[0]
    assert scale.color(99) == DIVERGING8[7]


def test_diverging_scale_ties_sit_lower():
    scale = diverging_percentile_scale(np.array([0.0, 1.0, 1.0, 1.0, 2.0]))
    assert scale.classes.tolist() == [1, 2, 2, 2, 8]


def test_diverging_scale_reciprocal():
    v = np.array([100.0, 50.0, 20.0, 10.0, 5.0, 4.0, 2.0, 1.0])
    scale = diverging_percentile_scale(v, reciprocal=True)
    assert np.allclose(scale.rates, 1.0 / v)
    # smallest population-per-event = highest rate = reddest class
    assert scale.classes[-1] == 8 and scale.classes[0] == 1
    with pytest.raises(DataError):
        diverging_percentile_scale(np.array([1.0, 0.0]), reciprocal=True)


def test_diverging_scale_needs_spread():
    with pytest.raises(DataError):
        diverging_percentile_scale(np.full(9, 3.3))


# conditioned choropleth ---------------------------------------------------------

def test_ccmap_single_panel_is_plain_classing():
    n = 20
    rng = np.random.default_rng(SEED)
    resp = rng.uniform(1.0, 9.0, n)
    res = ccmap(_grid_map(n), list(range(1, n + 1)), resp,
                rng.normal(size=n), rng.normal(size=n), k_x=1, k_y=1,
                overlap=0.0)
    assert len(res.panels) == 1
    assert res.panels[0].count == n
    fills = _fills_by_feature(res.scene)
    for i in range(n):
        assert fills[i + 1] == [res.scale.color(i)]
    assert res.panels[0].median_response == float(np.median(resp))


def test_ccmap_count_excess_equals_overlap_memberships():
    n = 30
    rng = np.random.default_rng(SEED)
    resp = rng.uniform(1.0, 9.0, n)
    gx = rng.normal(size=n)
    gy = rng.normal(size=n)
    res = ccmap(_grid_map(n), list(range(1, n + 1)), resp, gx, gy,
                k_x=2, k_y=2, overlap=0.2)
    total = sum(p.count for p in res.panels)
    cx = np.zeros(n, dtype=int)
    for s in res.shingles_x:
        for i in s.member_indices:
            cx[i] += 1
    cy = np.zeros(n, dtype=int)
    for s in res.shingles_y:
        for i in s.member_indices:
            cy[i] += 1
    assert total == int(np.sum(cx * cy))
    assert total >= n


def test_ccmap_global_classes_slider_invariant():
    n = 24
    rng = np.random.default_rng(SEED)
    resp = rng.uniform(1.0, 9.0, n)
    gx = rng.normal(size=n)
    gy = rng.normal(size=n)
    baseline = None
    for k_x, k_y, overlap in ((1, 1, 0.0), (2, 2, 0.1), (3, 2, 0.3)):
        res = ccmap(_grid_map(n), list(range(1, n + 1)), resp, gx, gy,
                    k_x=k_x, k_y=k_y, overlap=overlap)
        if baseline is None:
            baseline = res.scale.classes
        assert np.array_equal(res.scale.classes, baseline)
        for p in res.panels:
            members = [res.codes.index(c) for c in p.member_codes]
            if members:
                assert p.median_response == float(
                    np.median(resp[members]))
            else:
                assert p.median_response is None


def test_ccmap_empty_panel_rendered():
    n = 10
    gx = np.arange(float(n))
    gy = -np.arange(float(n))
    resp = np.arange(1.0, n + 1.0)
    res = ccmap(_grid_map(n), list(range(1, n + 1)), resp, gx, gy,
                k_x=2, k_y=2, overlap=0.0)
    counts = {(p.x_index, p.y_index): p.count for p in res.panels}
    assert counts[(0, 1)] == 5 and counts[(1, 0)] == 5
    assert counts[(0, 0)] == 0 and counts[(1, 1)] == 0
    empty = next(p for p in res.panels if p.count == 0)
    assert empty.median_response is None
    assert render_svg(res.scene)


def test_ccmap_unknown_code_rejected():
    with pytest.raises(DataError, match="no map feature"):
        ccmap(_grid_map(2), [1, 9], np.array([1.0, 2.0]),
              np.array([0.0, 1.0]), np.array([0.0, 1.0]))


# fitted / residual maps ---------------------------------------------------------

def test_fitted_residual_zero_residuals_neutral():
    n = 6
    fitted = np.linspace(2.0, 5.0, n)
    fit_scene, res_scene = fitted_residual_maps(
        _grid_map(n), list(range(1, n + 1)), fitted, np.zeros(n))
    res_fills = _fills_by_feature(res_scene)
    assert all(v == [NEUTRAL] for v in res_fills.values())
    fit_fills = _fills_by_feature(fit_scene)
    assert fit_fills[1] == [sequential_ramp(0.0).hex]
    assert fit_fills[n] == [sequential_ramp(1.0).hex]


def test_fitted_residual_outside_labels():
    n = 5
    res = np.array([0.1, -0.2, 3.0, 0.0, -0.1])
    _, res_scene = fitted_residual_maps(
        _grid_map(n), list(range(1, n + 1)), np.ones(n), res,
        outside_codes=[3], names_by_code={3: "Creuse"})
    texts = [p.text for p in res_scene.layers if isinstance(p, TextPrim)]
    assert "Creuse" in texts


def test_fitted_residual_alignment_checked():
    with pytest.raises(DataError):
        fitted_residual_maps(_grid_map(2), [1, 2], np.ones(2),
                             np.zeros(3))
