"""Command-line front door.

Subcommands: figure (render one registry figure to SVG plus a JSON
report of the statistics behind it), stats (statistical reports on
standard output), export-explorer (JSON data bundle for the browser
explorer), serve (static file server for the explorer assets and
bundle). Exit codes: 0 success, 1 usage error, 2 data validation
failure, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import http.server
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import mvstats as mv
from .dataset import (CORE_VARIABLES, fixture_path, load_basemap,
                      load_dataset)
from .errors import DataError, NumericError
from .explorer import bundle_bytes
from .figures import REGISTRY, FigureSkip, build_figure
from .scene import dumps_report, dumps_fixed, render_svg, scene_to_json

DEFAULT_SEED = 1830

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="moralstat",
                     description="Moral statistics toolkit: figures, "
                                 "statistics reports, explorer bundle.")
    parser.add_argument("--version", action="version",
                        version=f"moralstat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def common(p, out=True):
        p.add_argument("--dataset", type=Path, default=None,
                       help="CSV dataset path (default: vendored fixture)")
        p.add_argument("--basemap", type=Path, default=None,
                       help="GeoJSON basemap path (default: vendored "
                            "fixture)")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help=f"seed for stochastic checks (default "
                            f"{DEFAULT_SEED})")
        if out:
            p.add_argument("--out", type=Path, default=Path("out"),
                           help="output directory (default ./out)")

    p_fig = sub.add_parser("figure", help="render one figure",
                           description="Render a registry figure to "
                                       "<out>/<id>.svg with a JSON "
                                       "sidecar report and scene.")
    common(p_fig)
    p_fig.add_argument("--figure", required=True, choices=sorted(REGISTRY),
                       help="figure id")
    p_fig.add_argument("--span", type=float, default=None,
                       help="loess span override")
    p_fig.add_argument("--alpha", type=float, default=None,
                       help="test size override")
    p_fig.add_argument("--coverage", type=float, default=None,
                       help="ellipse coverage override")
    p_fig.add_argument("--overlap", type=float, default=None,
                       help="shingle overlap override")
    p_fig.add_argument("--palette", type=str, default=None,
                       help="light,dark hex pair for rank choropleths")

    p_stats = sub.add_parser("stats", help="print a statistics report",
                             description="Write one JSON statistics "
                                         "report to standard output.")
    p_stats.add_argument("kind", choices=("manova", "pca", "cda",
                                          "varimax", "regression"))
    common(p_stats, out=False)

    p_exp = sub.add_parser("export-explorer",
                           help="write the explorer JSON bundle",
                           description="Write <out>/bundle.json for the "
                                       "browser explorer.")
    common(p_exp)

    p_srv = sub.add_parser("serve",
                           help="serve explorer assets over HTTP GET",
                           description="Static file server rooted at the "
                                       "output directory; exports the "
                                       "bundle first if absent.")
    common(p_srv)
    p_srv.add_argument("--port", type=int, default=8000,
                       help="TCP port (default 8000)")
    return parser


def _load_inputs(args):
    ds_path = args.dataset if args.dataset else fixture_path("guerry.csv")
    bm_path = (args.basemap if args.basemap
               else fixture_path("france1830.geojson"))
    for path in (ds_path, bm_path):
        if not Path(path).is_file():
            raise DataError(f"input file not found: {path}")
    return load_dataset(ds_path), load_basemap(bm_path)


def cmd_figure(args) -> int:
    ds, bm = _load_inputs(args)
    params = {"span": args.span, "alpha": args.alpha,
              "coverage": args.coverage, "overlap": args.overlap,
              "palette": args.palette}
    try:
        scene, report = build_figure(args.figure, ds, bm, params)
    except FigureSkip as skip:
        print(f"{args.figure}: {skip}")
        return EXIT_OK
    args.out.mkdir(parents=True, exist_ok=True)
    svg_path = args.out / f"{args.figure}.svg"
    report_path = args.out / f"{args.figure}.json"
    scene_path = args.out / f"{args.figure}.scene.json"
    svg_path.write_bytes(render_svg(scene))
    doc = {"schema": "moralstat/1", "figure": args.figure}
    doc.update(report)
    report_path.write_text(dumps_report(doc) + "\n", encoding="utf-8")
    scene_path.write_text(dumps_fixed(scene_to_json(scene)) + "\n",
                          encoding="utf-8")
    print(f"wrote {svg_path} {report_path} {scene_path}")
    return EXIT_OK


def _stats_manova(od) -> dict:
    Y = od.matrix(["Crime_pers", "Crime_prop"])
    block, _ = mv.dummy_code(od.regions(), reference="C")
    terms = [("Region", block)]
    for c in ("Suicides", "Literacy", "Donations", "Infants", "Wealth"):
        terms.append((c, od.column(c)))
    fit = mv.mlm_fit(Y, terms, response_names=("Crime_pers", "Crime_prop"))
    rows = mv.manova_type2(fit)
    return {
        "df_error": fit.df_error,
        "rows": [{"term": r.term, "df": r.df, "roy_stat": r.roy_stat,
                  "approx_f": r.approx_f, "df_num": r.df_num,
                  "df_den": r.df_den, "p_value": r.p_value}
                 for r in rows],
        "r_squared": fit.r_squared(),
    }


def _stats_pca(od) -> dict:
    X = od.matrix(CORE_VARIABLES)
    res = mv.pca(X, standardize=True, variable_names=CORE_VARIABLES)
    return {
        "variables": list(CORE_VARIABLES),
        "eigenvalues": res.eigenvalues,
        "pct_variance": res.pct_variance,
        "loadings": {name: res.loadings[i]
                     for i, name in enumerate(CORE_VARIABLES)},
    }


def _stats_cda(od) -> dict:
    X = od.matrix(CORE_VARIABLES)
    keep = [i for i, r in enumerate(od.regions()) if r != "X"]
    cda = mv.canonical_discriminant(
        X[keep], [od.regions()[i] for i in keep],
        variable_names=CORE_VARIABLES, orient_positive="Literacy")
    total = float(cda.eigenvalues.sum())
    return {
        "groups": list(cda.group_labels),
        "eigenvalues": cda.eigenvalues,
        "pct_of_sum": 100.0 * cda.eigenvalues / total,
        "first_two_share": float(cda.eigenvalues[:2].sum() / total),
        "structure": {name: cda.structure[i]
                      for i, name in enumerate(CORE_VARIABLES)},
        "group_means": {lab: cda.group_means[k]
                        for k, lab in enumerate(cda.group_labels)},
    }


def _stats_varimax(od) -> dict:
    X = od.matrix(CORE_VARIABLES)
    res = mv.pca(X, standardize=True, variable_names=CORE_VARIABLES)
    loadings = res.loadings[:, :3] * np.sqrt(res.eigenvalues[:3])
    rot = mv.varimax(loadings, normalize=True)
    return {
        "variables": list(CORE_VARIABLES),
        "unrotated": {name: loadings[i]
                      for i, name in enumerate(CORE_VARIABLES)},
        "rotated": {name: rot[i]
                    for i, name in enumerate(CORE_VARIABLES)},
    }


def _stats_regression(od) -> dict:
    fit = mv.simple_regression(
        od.column("Crime_prop"),
        [od.column("Literacy"), od.column("Wealth")],
        names=("Literacy", "Wealth"))
    surface = mv.response_surface(od.column("Crime_pers"),
                                  od.column("Literacy"),
                                  od.column("Wealth"))
    codes = list(od.codes())
    return {
        "linear": {
            "response": "Crime_prop",
            "predictors": ["Literacy", "Wealth"],
            "coefficients": {name: float(c) for name, c in
                             zip(fit.column_names, fit.coefficients)},
            "r_squared": fit.r_squared,
        },
        "surface": {
            "response": "Crime_pers",
            "predictors": ["Literacy", "Wealth"],
            "terms": list(surface.column_names),
            "coefficients": surface.coefficients,
            "r_squared": surface.r_squared,
            "outside": [int(codes[i]) for i in surface.outside],
        },
    }


def cmd_stats(args) -> int:
    ds, _ = _load_inputs(args)
    od = ds.ordered()
    builders = {"manova": _stats_manova, "pca": _stats_pca,
                "cda": _stats_cda, "varimax": _stats_varimax,
                "regression": _stats_regression}
    doc = {"schema": "moralstat/1", "kind": args.kind}
    doc.update(builders[args.kind](od))
    sys.stdout.write(dumps_report(doc) + "\n")
    return EXIT_OK


def cmd_export_explorer(args) -> int:
    ds, bm = _load_inputs(args)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "bundle.json"
    path.write_bytes(bundle_bytes(ds, bm))
    print(f"wrote {path}")
    return EXIT_OK


class _GetOnlyHandler(http.server.SimpleHTTPRequestHandler):
    """GET/HEAD-only static handler; everything else is 405."""

    def do_POST(self):
        self.send_error(405)

    do_PUT = do_DELETE = do_PATCH = do_POST

    def log_message(self, fmt, *args):
        sys.stderr.write("%s - %s\n" % (self.address_string(),
                                        fmt % args))


def cmd_serve(args) -> int:
    ds, bm = _load_inputs(args)
    args.out.mkdir(parents=True, exist_ok=True)
    bundle = args.out / "bundle.json"
    if not bundle.is_file():
        bundle.write_bytes(bundle_bytes(ds, bm))
        print(f"wrote {bundle}")
    root = str(args.out.resolve())

    def handler(*h_args, **h_kwargs):
        return _GetOnlyHandler(*h_args, directory=root, **h_kwargs)

    with http.server.ThreadingHTTPServer(("127.0.0.1", args.port),
                                         handler) as srv:
        host, port = srv.server_address[:2]
        print(f"serving {root} at http://{host}:{port}/ (GET only)")
        try:
            srv.serve_forever()
        except KeyboardInterrupt:
            pass
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    commands = {"figure": cmd_figure, "stats": cmd_stats,
                "export-explorer": cmd_export_explorer,
                "serve": cmd_serve}
    try:
        return commands[args.command](args)
    except DataError as exc:
        print(f"moralstat: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"moralstat: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
