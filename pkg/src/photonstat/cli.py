"""Command-line front end: single-state reports, parameter sweeps, self-check.

Exit codes: 0 ok, 1 usage error, 2 undefined state, 3 accuracy failure,
4 self-check failure.  Output documents are deterministic: identical
invocations produce byte-identical bytes.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .criteria import DegenerateA3, evaluate_all
from .exceptions import AccuracyError, UndefinedStateError
from .moments import ModKind, StateModification
from .oracle import DEFAULT_SUITE_STATES, equivalence_suite
from .states import FAMILIES, CutoffPolicy, build_state, choose_cutoff

CRITERIA_TOKENS = ("Q", "Q_ell_normal", "Q_ell_central", "d_h", "A3")

UNDEF = "UNDEF"
DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class SweepSpec:
    """One parameter sweep: a family, a grid, a modification, a selection."""

    family: str
    param_grid: tuple
    modification: StateModification
    ell_max: int
    criteria_selection: tuple
    output_format: str
    policy: CutoffPolicy


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _criteria_columns(selection, ell_max):
    cols = []
    if "Q" in selection:
        cols.append("Q")
    if "Q_ell_normal" in selection:
        cols.extend(f"Q{ell}_normal" for ell in range(1, ell_max + 1))
    if "Q_ell_central" in selection:
        cols.extend(f"Q{ell}_central" for ell in range(1, ell_max + 1))
    if "d_h" in selection:
        cols.extend(f"dh{h}" for h in range(1, ell_max + 1))
    if "A3" in selection:
        cols.append("A3")
    return cols


def _report_cells(report, selection, ell_max):
    cells = {}
    if "Q" in selection:
        cells["Q"] = report.mandel_q
    if "Q_ell_normal" in selection:
        for ell in range(1, ell_max + 1):
            cells[f"Q{ell}_normal"] = report.q_ell_normal.get(ell, math.nan)
    if "Q_ell_central" in selection:
        for ell in range(1, ell_max + 1):
            cells[f"Q{ell}_central"] = report.q_ell_central.get(ell, math.nan)
    if "d_h" in selection:
        for h in range(1, ell_max + 1):
            cells[f"dh{h}"] = report.lee_dh.get(h, math.nan)
    if "A3" in selection:
        cells["A3"] = report.a3
    return cells


def _render(value):
    """Full round-trip decimal rendering; tokens for undefined/degenerate."""
    if isinstance(value, DegenerateA3):
        return DEGENERATE
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return repr(value)
    value = float(value)
    if math.isnan(value):
        return UNDEF
    return repr(value)


def _json_cell(value):
    if isinstance(value, DegenerateA3):
        return DEGENERATE
    if isinstance(value, int):
        return value
    value = float(value)
    if math.isnan(value):
        return UNDEF
    return value


def _policy_dict(policy):
    return {"eps_tail": policy.eps_tail, "rel_tol": policy.rel_tol,
            "max_cutoff": policy.max_cutoff,
            "max_moment_order": policy.max_moment_order}


def _mod_dict(mod):
    return {"kind": mod.kind.value, "count": mod.count}


def _csv_table(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_render(row[c]) for c in columns])
    return buf.getvalue()


def _emit(document, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(document)
    else:
        sys.stdout.write(document)


# ---------------------------------------------------------------- criteria

def cmd_criteria(family, param, mod, ell_max, selection, fmt, policy,
                 out_path=None):
    dist = build_state(family, param, policy)
    report = evaluate_all(dist, mod, ell_max)
    if report.undefined:
        raise UndefinedStateError(
            f"state annihilated: {family}({param!r}) does not survive "
            f"{mod.kind.value} {mod.count}")
    cells = _report_cells(report, selection, ell_max)
    if fmt == "csv":
        columns = ["param", "mean"] + _criteria_columns(selection, ell_max) \
            + ["flags"]
        row = {"param": param, "mean": report.mean, **cells,
               "flags": ";".join(report.flags)}
        _emit(_csv_table(columns, [row]), out_path)
        return 0
    doc = {
        "tool": "photonstat",
        "version": __version__,
        "command": "criteria",
        "family": family,
        "param": param,
        "modification": _mod_dict(mod),
        "ell_max": ell_max,
        "policy": _policy_dict(policy),
        "cutoff": dist.cutoff,
        "tail_bound": dist.tail_bound,
        "mean": _json_cell(report.mean),
    }
    for key, value in cells.items():
        doc[key] = _json_cell(value)
    if isinstance(report.a3, DegenerateA3):
        doc["A3_detail"] = {"det_m": report.a3.det_m,
                            "det_mu": report.a3.det_mu}
    doc["flags"] = list(report.flags)
    _emit(json.dumps(doc, indent=2) + "\n", out_path)
    return 0


# ------------------------------------------------------------------- sweep

def _sweep_rows(spec):
    columns = ["param", "mean"] \
        + _criteria_columns(spec.criteria_selection, spec.ell_max) + ["flags"]
    rows = []
    failed = []
    for param in spec.param_grid:
        try:
            dist = build_state(spec.family, param, spec.policy)
        except AccuracyError:
            row = {c: math.nan for c in columns}
            row.update(param=param, flags="accuracy_failure")
            rows.append(row)
            failed.append("accuracy")
            continue
        report = evaluate_all(dist, spec.modification, spec.ell_max)
        row = {"param": param, "mean": report.mean,
               **_report_cells(report, spec.criteria_selection, spec.ell_max),
               "flags": ";".join(report.flags)}
        rows.append(row)
        failed.append("undefined" if report.undefined else None)
    return columns, rows, failed


def cmd_sweep(spec, out_path=None):
    columns, rows, failed = _sweep_rows(spec)
    if spec.output_format == "json":
        doc = {
            "tool": "photonstat",
            "version": __version__,
            "command": "sweep",
            "sweep": {
                "family": spec.family,
                "params": list(spec.param_grid),
                "modification": _mod_dict(spec.modification),
                "ell_max": spec.ell_max,
                "criteria": list(spec.criteria_selection),
                "format": spec.output_format,
                "policy": _policy_dict(spec.policy),
            },
            "rows": [{c: _json_cell(r[c]) if c != "flags" else r[c]
                      for c in columns} for r in rows],
        }
        _emit(json.dumps(doc, indent=2) + "\n", out_path)
    else:
        _emit(_csv_table(columns, rows), out_path)
    if rows and all(failed):
        return 3 if "accuracy" in failed else 2
    return 0


# --------------------------------------------------------------- selfcheck

def cmd_selfcheck(states, tol_subtract, tol_add, out_path=None):
    report = equivalence_suite(states=states, tol_subtract=tol_subtract,
                               tol_add=tol_add)
    by_combo = {}
    for cell in report.cells:
        key = (cell.family, cell.param, cell.mod)
        group = by_combo.setdefault(key, [])
        group.append(cell)
    for (family, param, mod), group in by_combo.items():
        worst = max(c.rel_dev for c in group)
        status = "ok" if all(c.passed for c in group) else "FAIL"
        print(f"{family}({param!r}) {mod}: cells={len(group)} "
              f"max_rel_dev={worst:.3e} {status}")
    worst = report.worst
    print(f"selfcheck: {len(report.cells)} cells, worst rel dev "
          f"{worst.rel_dev:.3e} at {worst.family}({worst.param!r}) "
          f"{worst.mod} {worst.quantity}")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(report.to_text())
    if report.passed:
        print("selfcheck PASS")
        return 0
    for cell in report.failures():
        print(f"FAIL {cell.line()}")
    print("selfcheck FAIL")
    return 4


# ----------------------------------------------------------------- parsing

def _parse_param_range(text, parser):
    parts = text.split(":")
    if len(parts) != 3:
        parser.error("--param-range must look like start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        parser.error("--param-range values must be numeric")
    if step <= 0 or stop < start:
        parser.error("--param-range needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-6)) + 1
    return tuple(start + i * step for i in range(count))


def _parse_criteria(text, parser):
    tokens = tuple(tok.strip() for tok in text.split(",") if tok.strip())
    for tok in tokens:
        if tok not in CRITERIA_TOKENS:
            parser.error(f"unknown criterion {tok!r}; choose from "
                         + ", ".join(CRITERIA_TOKENS))
    if not tokens:
        parser.error("--criteria must select at least one criterion")
    return tokens


def _load_config(path, parser):
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            config = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file {path}: {exc}")
    if not isinstance(config, dict):
        parser.error(f"config file {path} must hold a JSON object")
    return config


def _resolved(args, config, key, fallback):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return fallback


def _policy_from(args, config):
    try:
        return CutoffPolicy(
            eps_tail=float(_resolved(args, config, "eps_tail", 1e-12)),
            rel_tol=float(_resolved(args, config, "rel_tol", 1e-10)),
            max_cutoff=int(_resolved(args, config, "max_cutoff", 4096)),
            max_moment_order=int(
                _resolved(args, config, "max_moment_order", 12)),
        )
    except ValueError as exc:
        raise SystemExit(1) from exc


def _modification_from(args, parser):
    if args.subtract is not None and args.add is not None:
        parser.error("--subtract and --add are mutually exclusive")
    if args.add is not None:
        return StateModification.add(args.add)
    if args.subtract is not None:
        return StateModification.subtract(args.subtract)
    return StateModification.identity()


def _check_params(family, params, parser):
    for param in params:
        if param < 0:
            parser.error(f"{family} parameter must be nonnegative")
        if family == "fock" and int(param) != param:
            parser.error("fock parameters must be nonnegative integers")
    return tuple(int(p) if family == "fock" else p for p in params)


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser():
    parser = _Parser(prog="photonstat",
                     description="Nonclassicality criteria for "
                                 "photon-subtracted and photon-added states")
    parser.add_argument("--version", action="version",
                        version=f"photonstat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_mod=True):
        if with_mod:
            p.add_argument("--subtract", type=_nonneg_int, metavar="N",
                           help="number of photons to subtract")
            p.add_argument("--add", type=_nonneg_int, metavar="M",
                           help="number of photons to add")
            p.add_argument("--ell-max", type=int, dest="ell_max",
                           help="highest generalized-Mandel order (default 3)")
            p.add_argument("--criteria", help="comma list from: "
                           + ",".join(CRITERIA_TOKENS))
            p.add_argument("--format", choices=("csv", "json"))
            p.add_argument("--eps-tail", type=float, dest="eps_tail",
                           help="tail-mass bound for the cutoff (default 1e-12)")
            p.add_argument("--max-cutoff", type=int, dest="max_cutoff",
                           help="hard cutoff cap (default 4096)")
        p.add_argument("--out", metavar="FILE",
                       help="write the document to FILE instead of stdout")
        p.add_argument("--config", metavar="FILE",
                       help="JSON config file with flag defaults")

    crit = sub.add_parser("criteria",
                          help="criteria report for a single state")
    crit.add_argument("--family", required=True, choices=FAMILIES)
    crit.add_argument("--param", required=True, type=float,
                      help="family parameter (|alpha|^2, nbar, N, or r)")
    add_common(crit)

    sweep = sub.add_parser("sweep", help="criteria table over a parameter grid")
    sweep.add_argument("--family", required=True, choices=FAMILIES)
    sweep.add_argument("--param", type=float, action="append",
                       help="grid point; repeat for several")
    sweep.add_argument("--param-range", dest="param_range",
                       metavar="START:STOP:STEP",
                       help="inclusive arithmetic grid")
    add_common(sweep)

    check = sub.add_parser("selfcheck",
                           help="shortcut-vs-oracle equivalence suite")
    check.add_argument("--tol", type=float,
                       help="override both path tolerances")
    check.add_argument("--families",
                       help="comma list of families to check "
                            "(default: all suite states)")
    add_common(check, with_mod=False)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = _load_config(getattr(args, "config", None), parser)
        if args.command == "criteria":
            policy = _policy_from(args, config)
            mod = _modification_from(args, parser)
            params = _check_params(args.family, (args.param,), parser)
            ell_max = int(_resolved(args, config, "ell_max", 3))
            selection = _parse_criteria(
                _resolved(args, config, "criteria", ",".join(CRITERIA_TOKENS)),
                parser)
            fmt = _resolved(args, config, "format", "json")
            return cmd_criteria(args.family, params[0], mod, ell_max,
                                selection, fmt, policy, args.out)
        if args.command == "sweep":
            policy = _policy_from(args, config)
            mod = _modification_from(args, parser)
            grid = tuple(args.param or ())
            if args.param_range:
                grid += _parse_param_range(args.param_range, parser)
            if not grid:
                parser.error("sweep needs --param or --param-range")
            grid = _check_params(args.family, grid, parser)
            ell_max = int(_resolved(args, config, "ell_max", 3))
            selection = _parse_criteria(
                _resolved(args, config, "criteria", ",".join(CRITERIA_TOKENS)),
                parser)
            fmt = _resolved(args, config, "format", "csv")
            spec = SweepSpec(family=args.family, param_grid=grid,
                             modification=mod, ell_max=ell_max,
                             criteria_selection=selection,
                             output_format=fmt, policy=policy)
            return cmd_sweep(spec, args.out)
        # selfcheck
        tol = _resolved(args, config, "tol", None)
        tol_subtract = tol if tol is not None else 1e-9
        tol_add = tol if tol is not None else 1e-8
        states = DEFAULT_SUITE_STATES
        if args.families:
            wanted = {tok.strip() for tok in args.families.split(",")}
            unknown = wanted - set(FAMILIES)
            if unknown:
                parser.error(f"unknown families: {', '.join(sorted(unknown))}")
            states = tuple(s for s in DEFAULT_SUITE_STATES if s[0] in wanted)
            if not states:
                parser.error("no suite states match --families")
        return cmd_selfcheck(states, tol_subtract, tol_add, args.out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UndefinedStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"error: accuracy failure: {exc}", file=sys.stderr)
        return 3


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
