"""Command-line driver: ``sawbox enumerate | ingest | analyze | extend | verify``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import approximants as ap
from . import io, oracle, pipelines, transfer, verify
from .fits import DEFAULT_LAMBDA
from .lattice import Box, SpanVariant, WalkClass
from .series import DEFAULT_DPS, Series, Term

log = logging.getLogger("sawbox")

ORACLE_MAX_SIDE = 5
CLASSES = {
    "anywhere": WalkClass.ANYWHERE,
    "exact-bbox": WalkClass.EXACT_BBOX,
    "corners": WalkClass.OPPOSITE_CORNERS,
    "sides": WalkClass.OPPOSITE_SIDES,
    "span": WalkClass.SPAN_SQUARE,
    "span-hat": WalkClass.SPAN_UP_TO,
    "cycles": WalkClass.CYCLE,
    "rect": None,
}
TM_CLASSES = ("anywhere", "exact-bbox", "cycles", "rect")
SERIES_NAMES = {
    "anywhere": "A_L",
    "exact-bbox": "Ahat_LL",
    "corners": "R_L",
    "sides": "S_L",
    "span": "M_L",
    "span-hat": "Mhat_L",
    "cycles": "P_L",
}
# small-L values every ingested series of these classes must reproduce
VALIDATION_SIDE = 3


class CliError(Exception):
    pass


# --- cache --------------------------------------------------------------------


def cache_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get("SAWBOX_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "sawbox"


def _cache_file(directory: Path, polygons: bool) -> Path:
    return directory / ("rect_cycles.json" if polygons else "rect_walks.json")


def load_rect_table(directory: Path, polygons: bool) -> transfer.RectTable | None:
    path = _cache_file(directory, polygons)
    if not path.exists():
        return None
    raw = json.loads(path.read_text())
    key = lambda s: tuple(int(x) for x in s.split(","))  # noqa: E731
    return transfer.RectTable(
        n={key(k): int(v) for k, v in raw["n"].items()},
        a_exact={key(k): int(v) for k, v in raw["a_exact"].items()},
        polygons=bool(raw["polygons"]),
    )


def save_rect_table(directory: Path, table: transfer.RectTable):
    raw = {
        "polygons": table.polygons,
        "n": {f"{h},{l}": str(v) for (h, l), v in sorted(table.n.items())},
        "a_exact": {f"{h},{l}": str(v) for (h, l), v in sorted(table.a_exact.items())},
    }
    io.atomic_write(_cache_file(directory, table.polygons), json.dumps(raw, indent=1) + "\n")


# --- enumerate ------------------------------------------------------------------


def enumerate_oracle(cls: str, max_L: int, span: SpanVariant) -> list[int] | dict:
    if max_L > ORACLE_MAX_SIDE:
        raise oracle.ResourceLimitError(f"the oracle engine is capped at side {ORACLE_MAX_SIDE} (asked for {max_L})")
    if cls == "rect":
        N, A = oracle.oracle_rect_counts(max_L)
        return {(h, l): (N[(h, l)], A[(h, l)]) for l in range(max_L + 1) for h in range(l + 1)}
    if cls == "span-hat":
        return [oracle.oracle_spanning_counts(L, span)[1] for L in range(1, max_L + 1)]
    return [oracle.oracle_count(CLASSES[cls], Box.square(L), span) for L in range(1, max_L + 1)]


def enumerate_tm(cls: str, max_L: int, cache: Path | None) -> list[int] | dict:
    if cls not in TM_CLASSES:
        raise CliError(f"the transfer-matrix engine handles {', '.join(TM_CLASSES)}; use --engine oracle for {cls}")
    polygons = cls == "cycles"
    table = load_rect_table(cache, polygons) if cache else None
    a, diag, table = transfer.series_A(max_L, polygons=polygons, table=table)
    if cache:
        save_rect_table(cache, table)
    if cls == "rect":
        return {(h, l): (table.inbox(h, l), table.exact(h, l)) for l in range(max_L + 1) for h in range(l + 1)}
    return diag if cls == "exact-bbox" else a


def cmd_enumerate(args) -> int:
    span = SpanVariant(args.span)
    cache = None if args.no_cache else cache_dir(args.cache_dir)
    if args.engine == "oracle":
        values = enumerate_oracle(args.cls, args.max_L, span)
    else:
        values = enumerate_tm(args.cls, args.max_L, cache)
    if args.cls == "rect":
        text = "# name: rect\n# columns: h l N Ahat\n" + "".join(
            f"{h}\t{l}\t{n}\t{a}\n" for (h, l), (n, a) in sorted(values.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        )
    else:
        meta = {"class": args.cls, "engine": args.engine, "provenance": "exact"}
        if args.cls in ("span", "span-hat"):
            meta["span"] = span.value
        text = io.format_series(Series.from_ints(SERIES_NAMES[args.cls], values, **meta))
    _emit(text, args.output)
    return 0


def _emit(text: str, output: str | None):
    if output:
        io.atomic_write(output, text)
    else:
        sys.stdout.write(text)


# --- ingest -----------------------------------------------------------------------


def _small_values(cls: str) -> dict[int, int]:
    if cls == "cycles":
        return {L: oracle.oracle_count_polygons(Box.square(L)) for L in range(1, VALIDATION_SIDE + 1)}
    return {L: oracle.oracle_count(CLASSES[cls], Box.square(L)) for L in range(1, VALIDATION_SIDE + 1)}


def validate_small_terms(s: Series, cls: str) -> list[int]:
    """Check the overlap with oracle counts; returns the indices checked."""
    expected = _small_values(cls)
    checked = []
    for L, v in expected.items():
        if L in s.indices:
            got = s[L]
            if got != v:
                raise CliError(f"{s.name}: term {L} is {got}, the oracle gives {v}; wrong class or index offset?")
            checked.append(L)
    if not checked:
        raise CliError(f"{s.name}: no terms overlap L = 1..{VALIDATION_SIDE}, cannot validate")
    return checked


def cmd_ingest(args) -> int:
    s = io.ingest(args.path, args.format, args.name)
    if args.index_shift:
        s = Series(s.name, [Term(t.index + args.index_shift, t.value, t.provenance) for t in s.terms], s.meta)
    if args.cls:
        s.meta["class"] = args.cls
        if args.cls in CLASSES and args.cls != "rect":
            checked = validate_small_terms(s, args.cls)
            s.meta["validated"] = ",".join(map(str, checked))
    s.meta["source"] = Path(args.path).name
    s.meta["sha256"] = io.sha256_file(args.path)
    _emit(io.format_series(s), args.output)
    return 0


# --- analyze / extend -------------------------------------------------------------------


def load_input(spec: str) -> Series:
    """A path, or ``bundled:table1`` / ``bundled:table2``."""
    if spec.startswith("bundled:"):
        return io.load_bundled(spec.split(":", 1)[1])
    return io.ingest(spec)


def _digest(spec: str) -> str:
    if spec.startswith("bundled:"):
        return io.sha256_file(io.data_path(spec.split(":", 1)[1] + ".txt"))
    return io.sha256_file(spec)


def _int_list(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def _options(args) -> pipelines.AnalysisOptions:
    cfg = ap.EnsembleConfig(dps=args.precision)
    if args.ensemble_orders:
        cfg.orders = _int_list(args.ensemble_orders)
    if args.ensemble_degrees:
        cfg.inhom_degrees = _int_list(args.ensemble_degrees)
    return pipelines.AnalysisOptions(
        dps=args.precision,
        lam=args.lam,
        b=args.b,
        g=args.g,
        fit_degrees=_int_list(args.fit_degree) if args.fit_degree else (2, 3),
        abscissa_power=args.abscissa_power,
        extend_terms=getattr(args, "terms", 0) or 0,
        ensemble=cfg,
    )


def _jobspec(args) -> dict:
    skip = {"func", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write_outputs(args, results: dict, tables: dict):
    report = {
        "job": _jobspec(args),
        "precision_digits": args.precision,
        "inputs": {spec: _digest(spec) for spec in args.inputs},
        "results": results,
    }
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        io.atomic_write(out / "report.json", text)
        for name, (header, rows) in tables.items():
            io.write_csv(out / f"{name}.csv", header, rows)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    opt = _options(args)
    series = [load_input(p) for p in args.inputs]
    p = args.pipeline
    if p == "hadamard":
        if len(series) != 2:
            raise CliError("hadamard needs two inputs: numerator then denominator")
        results, tables, _ = pipelines.hadamard(series[0], series[1], opt)
    else:
        if len(series) != 1:
            raise CliError(f"{p} takes exactly one input")
        s = series[0]
        if p == "extend":
            results, tables, _, _ = pipelines.extend(s, opt)
        else:
            fn = {
                "lambda-fits": pipelines.lambda_fits,
                "ratio-of-ratios": pipelines.ratio_of_ratios,
                "d-pipeline": pipelines.d_pipeline,
                "da": pipelines.da,
            }[p]
            results, tables = fn(s, opt)
    _write_outputs(args, {"pipeline": p, **results}, tables)
    return 0


def cmd_extend(args) -> int:
    opt = _options(args)
    s = load_input(args.inputs[0])
    ext, errors = ap.series_extend(s.exact_part(), args.terms, opt.ensemble)
    _emit(io.format_series(ext, errors), args.output)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_suite(args.level, corrupt=args.corrupt)
    for r in results:
        print(r.line())
    failed = sum(not r.ok for r in results)
    print("note: inequality chains start at L=2; at L=1 the M_0 = 1 convention gives Mhat_1 = 13 > A_1 = 12")
    print(f"{len(results) - failed}/{len(results)} claims passed")
    return 1 if failed else 0


# --- parser -------------------------------------------------------------------------------


def _analysis_flags(p: argparse.ArgumentParser):
    p.add_argument("--precision", type=int, default=DEFAULT_DPS, help="working precision in decimal digits")
    p.add_argument("--lambda", dest="lam", default=DEFAULT_LAMBDA, help="growth constant used for normalisation")
    p.add_argument("--b", default=None, help="fix b in the amplitude fit")
    p.add_argument("--g", default=None, help="fix g in the amplitude fit")
    p.add_argument("--fit-degree", default=None, help="window-fit degrees, e.g. 2,3")
    p.add_argument("--abscissa-power", type=int, default=None, help="extrapolate against 1/L**p")
    p.add_argument("--ensemble-orders", default=None, help="approximant orders, e.g. 2,3")
    p.add_argument("--ensemble-degrees", default=None, help="inhomogeneous degrees, e.g. 0-4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sawbox", description="Self-avoiding walks in a square: counts and series analysis.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count walks or cycles in small boxes")
    p.add_argument("--class", dest="cls", choices=sorted(CLASSES), default="anywhere")
    p.add_argument("--engine", choices=("oracle", "tm"), default="tm")
    p.add_argument("--max-L", dest="max_L", type=int, required=True)
    p.add_argument("--span", choices=[v.value for v in SpanVariant], default=SpanVariant.MAX_SIDE.value)
    p.add_argument("--output", default=None)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("ingest", help="normalise a b-file, table or series file")
    p.add_argument("path")
    p.add_argument("--format", choices=("auto", "bfile", "table", "seriesfile"), default="auto")
    p.add_argument("--class", dest="cls", choices=sorted(set(CLASSES) - {"rect"}), default=None,
                   help="validate the small-L terms against the oracle")
    p.add_argument("--name", default=None)
    p.add_argument("--index-shift", type=int, default=0, help="add this to every index (b-files count grid points)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="run a series-analysis pipeline")
    p.add_argument("inputs", nargs="+", help="series files or bundled:table1 / bundled:table2")
    p.add_argument("--pipeline", choices=pipelines.PIPELINES, required=True)
    p.add_argument("--terms", type=int, default=0, help="terms to add (extend pipeline)")
    p.add_argument("--output", default=None, help="directory for report.json and CSV tables")
    _analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("extend", help="append predicted terms to a series")
    p.add_argument("inputs", nargs=1)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--output", default=None)
    _analysis_flags(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--level", choices=tuple(verify.LEVELS), default="quick")
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, io.FormatError, oracle.ResourceLimitError, MemoryError, ValueError) as exc:
        print(f"sawbox: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
