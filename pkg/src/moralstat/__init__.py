"""Moral statistics toolkit.

Statistical graphics and multivariate analysis for the 1830s French
departement data: data ellipses, biplots, canonical discriminant plots,
Type II Roy MANOVA with hypothesis-error overlays, varimax factors,
star-glyph maps, RGB-blended and conditioned choropleths, all rendered
to deterministic SVG scenes with JSON reports.
"""

from .color import (ColorRGB, DIVERGING8, NEUTRAL, rgb_blend,
                    sequential_ramp)
from .dataset import (BaseMap, CORE_VARIABLES, MapFeature, MoralDataset,
                      REGION_NAMES, direction_transform, load_basemap,
                      load_canonical, load_dataset, region_table,
                      serialize_dataset)
from .errors import DataError, MoralstatError, NumericError
from .explorer import build_bundle, bundle_bytes, douglas_peucker
from .figures import REGISTRY, FigureSkip, build_figure
from .geoviz import (ccmap, diverging_percentile_scale,
                     equal_count_shingles, factor_rgb_map,
                     fitted_residual_maps, parallel_ranks,
                     rank_choropleth, relative_blend, scatter_overlay,
                     scatterplot_matrix, star_map, trilinear_legend)
from .labels import place_labels
from .mvstats import (biplot_layout, canonical_discriminant,
                      confidence_circle, factor_scores, he_geometry,
                      manova_type2, mlm_fit, pca, protrusion_ratio,
                      response_surface, roy_critical, simple_regression,
                      varimax)
from .numcore import (chi2_quantile, data_ellipse, loess,
                      mahalanobis_sq, outside_ellipse, rank_transform,
                      sign_test_probability)
from .scene import (Scene, dumps_exact, dumps_fixed, dumps_report,
                    render_svg, scene_to_json)

__version__ = "0.1.0"

__all__ = [
    "BaseMap", "CORE_VARIABLES", "ColorRGB", "DIVERGING8", "DataError",
    "FigureSkip", "MapFeature", "MoralDataset", "MoralstatError",
    "NEUTRAL", "NumericError", "REGION_NAMES", "REGISTRY", "Scene",
    "biplot_layout", "build_bundle", "build_figure", "bundle_bytes",
    "canonical_discriminant", "ccmap", "chi2_quantile",
    "confidence_circle", "data_ellipse", "direction_transform",
    "diverging_percentile_scale", "douglas_peucker", "dumps_exact",
    "dumps_fixed", "dumps_report", "equal_count_shingles",
    "factor_rgb_map", "factor_scores", "fitted_residual_maps",
    "he_geometry", "load_basemap", "load_canonical", "load_dataset",
    "loess", "mahalanobis_sq", "manova_type2", "mlm_fit",
    "outside_ellipse", "parallel_ranks", "pca", "place_labels",
    "protrusion_ratio", "rank_choropleth", "rank_transform",
    "region_table", "relative_blend", "render_svg", "response_surface",
    "rgb_blend", "roy_critical", "scatter_overlay", "scatterplot_matrix",
    "scene_to_json", "sequential_ramp", "serialize_dataset",
    "sign_test_probability", "simple_regression", "star_map",
    "trilinear_legend", "varimax",
]
