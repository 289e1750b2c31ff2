import json

import numpy as np

from moralstat.color import DIVERGING8
from moralstat.explorer import (SCHEMA, build_bundle, bundle_bytes,
                                douglas_peucker, simplify_ring,
                                simplify_tolerance)


def test_collinear_points_collapse():
    pts = np.column_stack([np.linspace(0.0, 10.0, 9),
                           np.linspace(0.0, 5.0, 9)])
    out = douglas_peucker(pts, 0.01)
    assert out.shape == (2, 2)
    assert np.array_equal(out[0], pts[0])
    assert np.array_equal(out[-1], pts[-1])


def test_zero_tolerance_keeps_all():
    rng = np.random.default_rng(1830)
    pts = rng.uniform(size=(30, 2))
    assert douglas_peucker(pts, 0.0).shape == pts.shape


def test_spike_survives():
    pts = np.array([[0.0, 0.0], [4.0, 0.0], [5.0, 8.0], [6.0, 0.0],
                    [10.0, 0.0]])
    out = douglas_peucker(pts, 1.0)
    assert [5.0, 8.0] in out.tolist()


def test_closed_ring_zero_chord_fallback():
    # first == last: the chord is a point, the farthest vertex anchors
    # the split instead of everything collapsing
    ring = np.array([[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0],
                     [0.0, 0.0]])
    out = douglas_peucker(ring, 0.5)
    assert len(out) == 5
    assert np.array_equal(out, ring)


def test_simplify_ring_keeps_closure():
    theta = np.linspace(0.0, 2.0 * np.pi, 101)
    ring = np.column_stack([np.cos(theta), np.sin(theta)])
    ring[-1] = ring[0]
    out = simplify_ring(ring, 0.05)
    assert len(out) >= 4
    assert np.array_equal(out[0], out[-1])
    assert len(out) < len(ring)


def test_simplify_ring_tiny_ring_untouched():
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.0, 0.0]])
    assert np.array_equal(simplify_ring(tri, 10.0), tri)


def test_simplify_tolerance_fraction_of_extent(basemap):
    x0, y0, x1, y1 = basemap.bounds()
    assert simplify_tolerance(basemap) == 0.001 * max(x1 - x0, y1 - y0)


def test_bundle_shape(dataset, basemap):
    bundle = build_bundle(dataset, basemap)
    assert bundle["schema"] == SCHEMA
    assert len(bundle["features"]) == 86
    assert bundle["codes"] == sorted(int(c) for c in dataset.codes())
    assert list(bundle["palette"]) == list(DIVERGING8)
    assert bundle["defaults"] == {"response": "Crime_prop",
                                  "given_x": "Literacy",
                                  "given_y": "Wealth", "k_x": 2,
                                  "k_y": 2, "overlap": 0.10}
    assert set(bundle["variables"]) == set(
        v.name for v in dataset.variables)


def test_bundle_features_sorted_closed(dataset, basemap):
    bundle = build_bundle(dataset, basemap)
    codes = [f["code"] for f in bundle["features"]]
    assert codes == sorted(codes)
    seine = next(f for f in bundle["features"] if f["code"] == 75)
    assert seine["region"] == "N"
    corse = next(f for f in bundle["features"] if f["code"] == 200)
    assert corse["region"] == "X"
    for f in bundle["features"]:
        for ring in f["rings"]:
            assert len(ring) >= 4
            assert ring[0] == ring[-1]


def test_bundle_values_exact(dataset, basemap):
    doc = json.loads(bundle_bytes(dataset, basemap))
    od = dataset.ordered()
    for name in ("Crime_prop", "Literacy", "Wealth"):
        col = od.column(name)
        assert doc["variables"][name]["values"] == col.tolist()
    lit = doc["variables"]["Literacy"]
    assert lit["kind"] == "percent" and lit["more_is_better"] is True
    crime = doc["variables"]["Crime_pers"]
    assert crime["kind"] == "pop_per_event"
    assert crime["more_is_better"] is True


def test_bundle_bytes_deterministic(dataset, basemap):
    a = bundle_bytes(dataset, basemap)
    b = bundle_bytes(dataset, basemap)
    assert a == b
    assert a.endswith(b"\n")
    assert len(a) < 2_000_000


def test_bundle_extent_matches_basemap(dataset, basemap):
    bundle = build_bundle(dataset, basemap)
    x0, y0, x1, y1 = basemap.bounds()
    assert bundle["extent"] == [x0, y0, x1, y1]
    assert bundle["simplify_tolerance"] == simplify_tolerance(basemap)
