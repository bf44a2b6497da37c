"""The ``qgs`` command line tool.

Subcommands:

* ``qgs sweep``        engine sweep of a graph file over a wavenumber grid
* ``qgs average``      period-averaged entropies on a parameter grid
* ``qgs closed-form``  evaluate one formula family on a grid
* ``qgs validate``     compare formulas against the engine, exit 1 on drift
* ``qgs figures``      write the bundled CSV datasets (and PNG renderings)

Exit codes: 0 success, 1 a computation or validation failed, 2 the
command line or a configuration file was malformed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import closed_forms as cf
from .engine import EngineError, probabilities_from_amplitudes
from .entropy import EntropyError
from .graphs import GraphError, GraphFormatError, load_graph
from .sweeps import (
    DEFAULT_SPAN,
    FAMILY_NAMES,
    FIGURES,
    ConfigError,
    AverageConfig,
    SweepConfig,
    Table,
    engine_column,
    double_edge_case,
    default_kgrid,
    family_case,
    run_average,
    run_figures,
    run_sweep,
    validate_families,
)


def _load_json(path: str | Path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None


def _maybe_plot(table: Table, out: Path, plot: bool, title: str) -> None:
    if plot:
        from .plotting import render_table
        render_table(table, out.with_suffix(".png"), title=title)


def cmd_sweep(args: argparse.Namespace) -> int:
    og = load_graph(args.graph)
    cfg = SweepConfig.from_dict(_load_json(args.config))
    table = run_sweep(og, cfg, workers=args.workers)
    out = Path(args.out)
    table.write(out)
    _maybe_plot(table, out, args.plot, out.stem)
    print(f"wrote {out} ({len(table.rows)} rows)")
    return 0


def cmd_average(args: argparse.Namespace) -> int:
    config_path = Path(args.config)
    cfg = AverageConfig.from_dict(_load_json(config_path),
                                  base_dir=config_path.parent)
    if args.tol is not None:
        cfg = AverageConfig(cfg.measure_kind, cfg.parameter_grid, cfg.period,
                            cfg.jobs, args.tol)
    table = run_average(cfg)
    out = Path(args.out)
    table.write(out)
    _maybe_plot(table, out, args.plot, out.stem)
    print(f"wrote {out} ({len(table.rows)} rows)")
    return 0


def _closed_form_table(args: argparse.Namespace) -> Table:
    if args.family == "pvv":
        case = double_edge_case(*args.lengths)
    else:
        if args.n is None:
            raise ConfigError(f"--n is required for family {args.family!r}")
        case = family_case(args.family, args.n)
    ks = default_kgrid(args.z_samples, args.span)
    firsts = [case.expand.index(j) for j in range(len(case.channels))]
    header = ["k"]
    for name in case.channels:
        header += [f"{name}_re", f"{name}_im", f"{name}_prob"]
    rows = []
    for k in ks:
        try:
            distinct = case.column(np.array([k]))[0]
            full = distinct[list(case.expand)]
        except (cf.DegenerateBranch, cf.DenominatorVanishes):
            full = engine_column(case, k)[1]
            distinct = full[firsts]
        probs = probabilities_from_amplitudes(full)[firsts]
        cells: list[float] = [float(k)]
        for amp, p in zip(distinct, probs):
            cells += [float(amp.real), float(amp.imag), float(p)]
        rows.append(tuple(cells))
    return Table(tuple(header), tuple(rows))


def cmd_closed_form(args: argparse.Namespace) -> int:
    table = _closed_form_table(args)
    out = Path(args.out)
    table.write(out)
    _maybe_plot(table, out, args.plot, out.stem)
    print(f"wrote {out} ({len(table.rows)} rows)")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    rows = validate_families(args.family, tol=args.tol, samples=args.samples)
    failed = 0
    for row in rows:
        verdict = "PASS" if row.passed else "FAIL"
        skipped = f", {row.skipped} skipped" if row.skipped else ""
        print(f"{verdict} {row.family} {row.label}: "
              f"max deviation {row.max_deviation:.3e}{skipped}")
        failed += not row.passed
    total = len(rows)
    print(f"{total - failed}/{total} cases within {args.tol:g}")
    return 1 if failed else 0


def cmd_figures(args: argparse.Namespace) -> int:
    names = args.only if args.only else None
    written = run_figures(args.out_dir, names=names, workers=args.workers,
                          plot=not args.no_plot)
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgs",
        description="Scattering coefficients and entropies of open "
                    "metric graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="engine sweep of a graph file")
    sweep.add_argument("--graph", required=True, help="graph JSON file")
    sweep.add_argument("--config", required=True, help="sweep JSON config")
    sweep.add_argument("--out", required=True, help="output CSV path")
    sweep.add_argument("--workers", type=int, default=1,
                       help="parallel row evaluation (default 1)")
    sweep.add_argument("--plot", action="store_true",
                       help="also render the table as PNG")
    sweep.set_defaults(func=cmd_sweep)

    average = sub.add_parser("average", help="period-averaged entropies")
    average.add_argument("--config", required=True, help="average JSON config")
    average.add_argument("--out", required=True, help="output CSV path")
    average.add_argument("--tol", type=float, default=None,
                         help="override quadrature tolerance")
    average.add_argument("--plot", action="store_true",
                         help="also render the table as PNG")
    average.set_defaults(func=cmd_average)

    closed = sub.add_parser("closed-form",
                            help="evaluate one formula family on a grid")
    closed.add_argument("--family", required=True, choices=FAMILY_NAMES)
    closed.add_argument("--n", type=int, default=None,
                        help="family size (ignored for pvv)")
    closed.add_argument("--lengths", type=float, nargs=2, default=(1.0, 1.0),
                        metavar=("LA", "LB"),
                        help="pvv edge lengths (default 1 1)")
    closed.add_argument("--z-samples", type=int, default=512,
                        help="grid points (default 512)")
    closed.add_argument("--span", type=float, default=DEFAULT_SPAN,
                        help="top of the wavenumber grid (default 4*pi)")
    closed.add_argument("--out", required=True, help="output CSV path")
    closed.add_argument("--plot", action="store_true",
                        help="also render the table as PNG")
    closed.set_defaults(func=cmd_closed_form)

    validate = sub.add_parser(
        "validate", help="check formulas against the engine")
    validate.add_argument("--family", default="all",
                          choices=FAMILY_NAMES + ("all",))
    validate.add_argument("--tol", type=float, default=1e-8,
                          help="maximum allowed deviation (default 1e-8)")
    validate.add_argument("--samples", type=int, default=512,
                          help="grid points per case (default 512)")
    validate.set_defaults(func=cmd_validate)

    figures = sub.add_parser("figures", help="write the bundled datasets")
    figures.add_argument("--out-dir", required=True)
    figures.add_argument("--only", nargs="*", choices=tuple(FIGURES),
                         help="subset of datasets to build")
    figures.add_argument("--workers", type=int, default=1)
    figures.add_argument("--no-plot", action="store_true",
                         help="skip the PNG renderings")
    figures.set_defaults(func=cmd_figures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GraphError, GraphFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, EntropyError, cf.ClosedFormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
