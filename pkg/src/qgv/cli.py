"""Command-line driver.

Examples:

    verify --example umbilic --alpha 0.7853981633974483 --n 3 --suites angles,palmer
    verify --example product --alpha 1.0471975511965976 --k 1 --n 2 --suites curvature
    verify --config run.json --report out.csv --format csv
    verify --list-checks --suites palmer

Exit codes: 0 when every check passes, 1 when any fails, 2 on configuration
or usage errors (in which case no report file is written). Set QGV_LOG to
debug/info/warning to control verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from .checks import RunConfig, SUITES, list_checks, run, dump_fields
from .errors import ConfigError, QgvError

log = logging.getLogger("qgv")


def _parse_tol(items: List[str]) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--tol expects suite=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            out[key.strip()] = float(raw)
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value in {item!r}") from exc
    return out


def _parse_box(items: List[str]) -> Optional[list]:
    if not items:
        return None
    box = []
    for item in items:
        parts = item.split(",")
        if len(parts) != 2:
            raise ConfigError(f"--box expects lo,hi per axis, got {item!r}")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ConfigError(f"bad box bounds in {item!r}") from exc
        if hi <= lo:
            raise ConfigError(f"empty box interval {item!r}")
        box.append([lo, hi])
    return box


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="verify",
        description="Verify the Gauss-map identities of a spacelike hypersurface "
                    "of anti-de Sitter space over a parameter grid.",
    )
    parser.add_argument("--example",
                        help="catalog family id (umbilic, product, rotation_sig_plus_minus, "
                             "rotation_sig_minus_minus, rotation_sig_minus_null)")
    parser.add_argument("--alpha", type=float, help="family angle parameter")
    parser.add_argument("--k", type=int, help="product-family split index")
    parser.add_argument("--n", type=int, help="hypersurface dimension")
    parser.add_argument("--grid", type=int, help="grid points per axis (default 5)")
    parser.add_argument("--box", action="append", default=[], metavar="LO,HI",
                        help="grid box for one axis; repeat per axis")
    parser.add_argument("--suites", help="comma-separated subset of: " + ", ".join(SUITES))
    parser.add_argument("--tol", action="append", default=[], metavar="SUITE=VAL",
                        help="tolerance override for a suite or a check id")
    parser.add_argument("--seed", type=int, help="seed for the property checks (default 0)")
    parser.add_argument("--jobs", type=int, help="parallel workers over grid points (default 1)")
    parser.add_argument("--report", help="report path (default report.json)")
    parser.add_argument("--format", choices=("json", "csv"),
                        help="report format (default json)")
    parser.add_argument("--config", help="JSON file with the run configuration")
    parser.add_argument("--list-checks", action="store_true",
                        help="print the check registry (with --suites to filter) and exit")
    parser.add_argument("--dump-fields", metavar="PATH",
                        help="write per-point curvature/angle fields as CSV for external plotting")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    file_cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(file_cfg) - set(vars(RunConfig()))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    cfg = RunConfig(**file_cfg)
    for name in ("example", "alpha", "k", "n", "grid", "seed", "jobs", "report", "format"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    box = _parse_box(args.box)
    if box is not None:
        cfg.box = box
    if args.suites:
        cfg.suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    cfg.tolerances = {**cfg.tolerances, **_parse_tol(args.tol)}
    if cfg.report is None:
        cfg.report = "report.json"
    if args.dump_fields:
        cfg.dump_fields = args.dump_fields
    return cfg


def _print_summary(report) -> None:
    by_check: dict = {}
    for rec in report.checks:
        entry = by_check.setdefault(rec.check, {"worst": -1.0, "tol": rec.tolerance,
                                                "ok": True, "count": 0})
        entry["count"] += 1
        entry["ok"] &= rec.passed
        if rec.residual is not None and rec.residual > entry["worst"]:
            entry["worst"] = rec.residual
    for cid, entry in by_check.items():
        status = "PASS" if entry["ok"] else "FAIL"
        worst = f"{entry['worst']:.3e}" if entry["worst"] >= 0 else "error"
        print(f"{status}  {cid:26s} max residual {worst}  (tol {entry['tol']:.1e}, "
              f"{entry['count']} records)")
    s = report.summary
    print(f"{s['passed']} passed, {s['failed']} failed in {s['wall_time_s']:.2f}s")


def main(argv: Optional[List[str]] = None) -> int:
    level = os.environ.get("QGV_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.list_checks:
            suites = None
            if args.suites:
                suites = [s.strip() for s in args.suites.split(",") if s.strip()]
            for check in list_checks(suites):
                print(f"{check.id} [{check.suite}]: {check.identity}")
            return 0
        cfg = config_from_args(args)
        cfg.validate()
        report = run(cfg)
        report.write(cfg.report, cfg.format)
        if cfg.dump_fields:
            dump_fields(cfg, cfg.dump_fields)
        _print_summary(report)
        log.info("report written to %s", cfg.report)
        return 0 if report.all_passed else 1
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except QgvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
