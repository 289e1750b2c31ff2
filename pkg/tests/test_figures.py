import numpy as np
import pytest

import moralstat.figures as figures
from moralstat.errors import DataError
from moralstat.figures import REGISTRY, FigureSkip, build_figure
from moralstat.scene import render_svg

ALL_IDS = [f"fig{k}" for k in (1, 4, 8, 12, 13, 14, 15, 16, 17, 18, 19,
                               20, 21, 22)]


def test_registry_complete():
    assert sorted(REGISTRY) == sorted(ALL_IDS)


@pytest.mark.parametrize("figure_id", ALL_IDS)
def test_every_figure_builds_and_renders(dataset, basemap, figure_id):
    scene, report = build_figure(figure_id, dataset, basemap, None)
    svg = render_svg(scene)
    assert svg.startswith(b"<?xml") and len(svg) > 500
    assert isinstance(report, dict) and report


@pytest.mark.parametrize("figure_id", ALL_IDS)
def test_figures_deterministic(dataset, basemap, figure_id):
    s1, r1 = build_figure(figure_id, dataset, basemap, None)
    s2, r2 = build_figure(figure_id, dataset, basemap, None)
    assert render_svg(s1) == render_svg(s2)
    assert repr(r1) == repr(r2)


def test_unknown_figure_rejected(dataset, basemap):
    with pytest.raises(DataError, match="unknown figure"):
        build_figure("fig99", dataset, basemap, None)


def test_unknown_param_rejected(dataset, basemap):
    with pytest.raises(DataError, match="unknown figure parameter"):
        build_figure("fig4", dataset, basemap, {"smoothing": 0.5})


def test_ratio_series_report(dataset, basemap):
    _, report = build_figure("fig1", dataset, basemap, None)
    assert report["n"] == 82
    assert report["all_above_one"] is True
    assert abs(report["mean_ratio"] - 1.07) < 0.005
    assert abs(report["run_probability"] - 0.5 ** 82) < 1e-29


def test_ratio_series_skips_without_fixture(dataset, basemap, monkeypatch):
    monkeypatch.setattr(figures, "RATIO_SERIES", "absent-file.csv")
    with pytest.raises(FigureSkip):
        build_figure("fig1", dataset, basemap, None)


def test_rank_map_grid_report(dataset, basemap):
    _, report = build_figure("fig4", dataset, basemap, None)
    assert len(report["variables"]) == 6
    ranks = report["ranks"]["Crime_pers"]
    vals = {int(k): v for k, v in ranks.items()}
    assert sorted(vals) == sorted(int(c) for c in dataset.codes())
    assert min(vals.values()) == 1.0 and max(vals.values()) <= 86.0


def test_rank_map_palette_param(dataset, basemap):
    scene, _ = build_figure("fig4", dataset, basemap,
                            {"palette": "#FFFFFF,#004400"})
    svg = render_svg(scene).decode()
    assert "#004400" in svg


def test_triptych_report(dataset, basemap):
    _, report = build_figure("fig8", dataset, basemap, None)
    assert report["crossings"] == 1899
    assert abs(report["rank_correlation"] - (-0.0694)) < 5e-4


def test_pooled_group_scatter_report(dataset, basemap):
    _, report = build_figure("fig12", dataset, basemap, None)
    assert report["outside_090"] == [8, 9, 23, 25, 39, 68, 200]


def test_matrix_correlations(dataset, basemap):
    _, report = build_figure("fig13", dataset, basemap, None)
    names = list(report["variables"])
    corr = np.asarray(report["correlation"])
    # raw population-per-crime columns relate negatively to literacy
    i, j = names.index("Literacy"), names.index("Crime_prop")
    assert abs(corr[i, j] - (-0.3673)) < 5e-4
    assert np.allclose(np.diag(corr), 1.0)
    assert np.allclose(corr, corr.T)


def test_biplot_figure_report(dataset, basemap):
    _, report = build_figure("fig14", dataset, basemap, None)
    pct = report["pct_variance"]
    assert abs(pct[0] - 35.4) < 0.05
    assert abs(pct[1] - 20.8) < 0.05


def test_cda_figure_report(dataset, basemap):
    _, report = build_figure("fig15", dataset, basemap, None)
    assert report["first_two_share"] > 0.90
    assert set(report["group_n"]) == {"C", "E", "N", "S", "W"}
    assert sum(report["group_n"].values()) == 85


def test_he_figure_report(dataset, basemap):
    _, report = build_figure("fig16", dataset, basemap, None)
    region = next(r for r in report["manova"] if r["term"] == "Region")
    assert abs(region["roy_stat"] - 0.6859) < 1e-3
    assert abs(region["approx_f"] - 10.2878) < 1e-2
    assert (region["df_num"], region["df_den"]) == (5, 75)
    assert abs(report["r_squared"]["Crime_prop"] - 0.4374) < 5e-4
    protr = report["protrusion"]
    assert {t for t, v in protr.items() if v > 1.0} == \
        {"Region", "Suicides", "Wealth"}
    assert report["outside_095"] == [1, 23, 43]


def test_star_figure_order(dataset, basemap):
    _, report = build_figure("fig17", dataset, basemap, None)
    assert report["angular_order"] == ["Infants", "Donations", "Literacy",
                                       "Crime_pers", "Crime_prop",
                                       "Suicides"]


def test_star_encoding_unusual(dataset, basemap):
    _, report = build_figure("fig18", dataset, basemap, None)
    assert report["unusual_mean"] == [13]
    assert report["unusual_sd"] == [61]


def test_rgb_map_report(dataset, basemap):
    _, report = build_figure("fig19", dataset, basemap, None)
    assert report["channels"] == {"r": "Crime_pers", "g": "Crime_prop",
                                  "b": "Literacy"}
    assert report["ranges"]["Literacy"] == [12.0, 74.0]


def test_factor_map_outliers(dataset, basemap):
    _, report = build_figure("fig20", dataset, basemap, None)
    assert report["outliers"] == [14, 23, 29, 43, 56, 85, 200]
    assert {14, 200, 23, 43, 85} <= set(report["outliers"])


def test_ccmap_figure_sidecar(dataset, basemap):
    _, report = build_figure("fig21", dataset, basemap, None)
    assert report["schema"] == "moralstat/1"
    assert report["response"] == "Crime_prop"
    assert report["reciprocal"] is True
    panels = {(p["x_index"], p["y_index"]): p for p in report["panels"]}
    assert panels[(0, 0)]["count"] == 17
    assert panels[(0, 1)]["count"] == 31
    assert panels[(1, 0)]["count"] == 31
    assert panels[(1, 1)]["count"] == 15
    assert abs(panels[(0, 0)]["median_response"] - 8520.0) < 1.0
    assert abs(panels[(1, 1)]["median_response"] - 7759.0) < 1.0
    for sh in report["shingles_x"] + report["shingles_y"]:
        assert len(sh["codes"]) == 45
    assert len(report["cuts"]) == 7


def test_surface_figure_report(dataset, basemap):
    _, report = build_figure("fig22", dataset, basemap, None)
    assert abs(report["r_squared"] - 0.0584) < 5e-4
    assert report["outside"] == [23]
    assert report["response"] == "Crime_pers"
    assert len(report["coefficients"]) == 6


def test_span_param_changes_loess(dataset, basemap):
    s1, _ = build_figure("fig12", dataset, basemap, {"span": 0.4})
    s2, _ = build_figure("fig12", dataset, basemap, {"span": 0.9})
    assert render_svg(s1) != render_svg(s2)


def test_overlap_param_changes_ccmap(dataset, basemap):
    _, r1 = build_figure("fig21", dataset, basemap, {"overlap": 0.0})
    counts = sorted(p["count"] for p in r1["panels"])
    assert sum(counts) == 86  # no overlap: panels partition the map
