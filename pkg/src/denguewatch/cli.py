"""Command-line front end.

Exit codes: 0 success, 1 pipeline/data error, 2 usage error (including
missing input files). Errors print a single machine-parsable line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import pipeline
from .config import dump_defaults, load_config
from .errors import ConfigError, DengueWatchError
from .evaluation import OutbreakCalendar, load_calendar, score, write_calendar
from .panel import MonthIndex, Variable, write_mobility, write_series
from .risk import Lags
from .synth import SynthConfig, generate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="denguewatch",
        description="Dengue outbreak month detection via two-objective Pareto closeness",
    )
    parser.add_argument("--config", help="YAML config file (merged over defaults)")
    parser.add_argument(
        "--print-defaults",
        action="store_true",
        help="print the default configuration and exit",
    )
    sub = parser.add_subparsers(dest="command")

    for name, help_text in [
        ("synth", "write a synthetic panel plus ground-truth outbreak calendar"),
        ("calibrate", "emit the calibration report (lags, cutoffs, exponents)"),
        ("detect", "emit per-month risk values and flagged outbreak months"),
        ("baseline", "emit fitted linear-regression values and predicted months"),
        ("evaluate", "score a predictions CSV against an actual-outbreaks CSV"),
        ("report", "run the full pipeline and write every artifact"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", default="out", help="output directory")
        if name == "evaluate":
            p.add_argument("--predictions", required=True, help="CSV with a date column")
            p.add_argument("--actual", required=True, help="CSV with a date column")
    return parser


def _cmd_synth(cfg: dict, out: Path) -> None:
    scfg = cfg["synth"]
    lags = Lags(**{k: int(v) for k, v in scfg["lags"].items()})
    outbreaks = ()
    if scfg["outbreak_months"]:
        outbreaks = tuple(MonthIndex.parse(t) for t in scfg["outbreak_months"])
    config = SynthConfig(
        months=int(scfg["months"]),
        seed=int(scfg["seed"]),
        start=MonthIndex.parse(scfg["start"]),
        planted_lags=lags,
        rain_band=tuple(float(v) for v in scfg["rain_band"]),
        outbreak_months=outbreaks,
        noise_scale=float(scfg["noise_scale"]),
    )
    panel, calendar = generate(config)
    out.mkdir(parents=True, exist_ok=True)
    by_variable = {}
    for (region, variable), s in panel.series.items():
        by_variable.setdefault(variable, []).append(s)
    names = {
        Variable.RAINFALL: "rainfall.csv",
        Variable.TEMPERATURE: "temperature.csv",
        Variable.HUMIDITY: "humidity.csv",
        Variable.INCIDENCE: "incidence.csv",
        Variable.SUSCEPTIBLE: "susceptible.csv",
        Variable.POPULATION: "population.csv",
    }
    for variable, series_list in by_variable.items():
        write_series(series_list, out / names[variable])
    write_mobility(panel.mobility, out / "mobility.csv")
    write_calendar(calendar, out / "outbreaks.csv")
    print(f"wrote synthetic panel ({config.months} months) to {out}")


def _cmd_calibrate(cfg: dict, out: Path) -> None:
    panel = pipeline.load_panel(cfg)
    calibration = pipeline.calibrate_panel(panel, cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "calibration.json"
    pipeline._write_json(calibration.to_dict(), path)
    print(f"wrote {path}")


def _cmd_detect(cfg: dict, out: Path) -> None:
    from .svgplot import objective_scatter_svg

    panel = pipeline.load_panel(cfg)
    calibration = pipeline.calibrate_panel(panel, cfg)
    series, flagged = pipeline.detect(panel, cfg, calibration)
    out.mkdir(parents=True, exist_ok=True)
    pipeline.write_risk_csv(series, out / "risk.csv")
    pipeline.write_flagged_csv(flagged, out / "flagged.csv")
    (out / "objective_space.svg").write_text(
        objective_scatter_svg(series.months, flagged), encoding="utf-8"
    )
    print(f"flagged {len(flagged)} month(s); artifacts in {out}")


def _cmd_baseline(cfg: dict, out: Path) -> None:
    panel = pipeline.load_panel(cfg)
    calibration = pipeline.calibrate_panel(panel, cfg)
    _, months, fitted, predicted = pipeline.run_baseline(panel, cfg, calibration)
    out.mkdir(parents=True, exist_ok=True)
    pipeline.write_baseline_csv(months, fitted, predicted, out / "baseline.csv")
    print(f"predicted {len(predicted)} month(s); artifacts in {out}")


def _cmd_evaluate(cfg: dict, out: Path, predictions: str, actual: str) -> None:
    predicted = load_calendar(predictions).months
    actual_cal = load_calendar(actual)
    span = pipeline.evaluation_span(cfg, predicted, actual_cal.months)
    result = score(predicted, actual_cal, span, cfg["evaluation"]["match_window"])
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "span": {"start": str(span[0]), "end": str(span[1])},
        "match_window": cfg["evaluation"]["match_window"],
        "result": result.to_dict(),
    }
    pipeline._write_json(payload, out / "evaluation.json")
    print(json.dumps(payload["result"], sort_keys=True))


def _cmd_report(cfg: dict, out: Path) -> None:
    summary = pipeline.report(cfg, out)
    print(f"flagged months: {', '.join(summary['flagged']) or '(none)'}")
    print(f"artifacts in {out}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_defaults:
        sys.stdout.write(dump_defaults())
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = load_config(args.config)
        out = Path(args.out)
        if args.command == "synth":
            _cmd_synth(cfg, out)
        elif args.command == "calibrate":
            _cmd_calibrate(cfg, out)
        elif args.command == "detect":
            _cmd_detect(cfg, out)
        elif args.command == "baseline":
            _cmd_baseline(cfg, out)
        elif args.command == "evaluate":
            _cmd_evaluate(cfg, out, args.predictions, args.actual)
        else:
            _cmd_report(cfg, out)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2
    except DengueWatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
