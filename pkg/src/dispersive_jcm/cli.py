"""Command-line interface: deterministic CSV output and the acceptance gate.

Four modes, all in the omega = 1 convention (times are reported as
omega*t/pi and parameters as the ratios kappa/omega and |drive|/kappa):

- ``trace``: one CSV of every closed-form observable on a uniform grid,
  with integrated oracle columns appended when ``--oracle`` is on.
- ``figures``: the five standard parameter sets as five CSVs (the three
  damping ratios at fixed drive, then the two drive strengths at weak
  damping).  The correlation/concurrence panels read from the same
  files, so no separate CSVs are emitted for them.
- ``critical``: one CSV of every critical instant (disentanglement
  roots and entropy extremum candidates) up to the requested horizon.
- ``verify``: run the acceptance suite and print one PASS/FAIL/SKIP
  line per check; exits nonzero when any executed check fails.

Every CSV is written with LF line endings and 17-significant-digit
scientific notation through a temp file renamed into place, so repeated
runs with the same arguments are byte-identical and interrupted runs
leave no partial files behind.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import acceptance, analytic
from .model import ModelParams, validate
from .oracle import IntegratorConfig, OracleError

__all__ = ["main", "get_args", "TRACE_COLUMNS", "ORACLE_COLUMNS", "FIGURE_SETS"]

TRACE_COLUMNS = (
    "omega_t_over_pi",
    "zeta_global",
    "zeta_atom",
    "zeta_field",
    "corr_c",
    "concurrence",
    "re_phi",
    "dist_sq",
    "lambda_plus",
    "lambda_minus",
    "Lambda_plus",
    "Lambda_minus",
    "nbar_analytic",
)

ORACLE_COLUMNS = (
    "oracle_zeta_global",
    "oracle_zeta_atom",
    "oracle_zeta_field",
    "oracle_corr_c",
    "oracle_concurrence",
    "oracle_re_phi",
)

CRITICAL_COLUMNS = (
    "t_c",
    "omega_tc_over_pi",
    "kind",
    "classification",
    "n_index",
    "zeta_field_at_tc",
    "concurrence_at_tc",
    "t_trans",
)

#: (file name, kappa/omega, |drive|/kappa) for the figures mode.
FIGURE_SETS = (
    ("fig1_k0.2.csv", 0.2, 1.0),
    ("fig1_k1.csv", 1.0, 1.0),
    ("fig1_k5.csv", 5.0, 1.0),
    ("fig2_f0.5.csv", 0.2, 0.5),
    ("fig2_f2.csv", 0.2, 2.0),
)

_CONFIG_KEYS = {
    "mode": str,
    "k_over_omega": float,
    "f_over_k": float,
    "t_max_pi": float,
    "points": int,
    "oracle": None,  # parsed by _parse_bool
    "out": str,
    "rel_tol": float,
    "abs_tol": float,
}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _read_config(path: str) -> dict:
    """Flat key=value file; '#' starts a comment, dashes equal underscores."""
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        caster = _CONFIG_KEYS[key] or _parse_bool
        overrides[key] = caster(value.strip())
    return overrides


def get_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="dispersive-jcm",
        description="Closed-form decoherence dynamics of a dispersively "
        "coupled atom in a driven, damped cavity.",
    )
    parser.add_argument(
        "--mode",
        choices=("trace", "figures", "critical", "verify"),
        default="trace",
        help="what to compute (default: trace)",
    )
    parser.add_argument(
        "--k-over-omega", type=float, default=1.0,
        help="damping rate over dispersive coupling (default: 1)",
    )
    parser.add_argument(
        "--f-over-k", type=float, default=1.0,
        help="drive magnitude over damping rate (default: 1)",
    )
    parser.add_argument(
        "--t-max-pi", type=float, default=4.0,
        help="time horizon as omega*t/pi (default: 4)",
    )
    parser.add_argument(
        "--points", type=int, default=2001,
        help="grid points for trace/figures (default: 2001)",
    )
    parser.add_argument(
        "--oracle",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="integrate the master equation alongside the closed form "
        "(default: on for verify, off otherwise)",
    )
    parser.add_argument(
        "--out", default=None,
        help="output file (trace/critical/verify report) or directory "
        "(figures); defaults: trace.csv, critical.csv, '.', stdout only",
    )
    parser.add_argument(
        "--config", default=None,
        help="flat key=value file supplying defaults; explicit flags win",
    )
    parser.add_argument(
        "--rel-tol", type=float, default=1e-9,
        help="oracle integrator relative tolerance (default: 1e-9)",
    )
    parser.add_argument(
        "--abs-tol", type=float, default=1e-11,
        help="oracle integrator absolute tolerance (default: 1e-11)",
    )

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config is not None:
        try:
            parser.set_defaults(**_read_config(known.config))
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    args = parser.parse_args(argv)
    if args.oracle is None:
        args.oracle = args.mode == "verify"
    if args.out is None:
        args.out = {"trace": "trace.csv", "critical": "critical.csv", "figures": "."}.get(
            args.mode
        )
    if args.points < 2:
        parser.error("--points must be at least 2")
    if args.t_max_pi <= 0:
        parser.error("--t-max-pi must be positive")
    return args


# ---------------------------------------------------------------- CSV plumbing

def _atomic_write(path: Path, lines: list[str]) -> None:
    """Write lines with LF endings via a temp file renamed into place."""
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if tmp.exists():
            tmp.unlink()
        raise


def _fmt(value: float) -> str:
    return "%.16e" % (value + 0.0)  # + 0.0 folds -0.0 into 0.0


def _trace_lines(
    params: ModelParams, times: np.ndarray, with_oracle: bool, config: IntegratorConfig
) -> list[str]:
    columns = acceptance.analytic_series(params, times)
    header = list(TRACE_COLUMNS)
    data = [times / math.pi] + [columns[name] for name in TRACE_COLUMNS[1:]]
    if with_oracle:
        oracle_columns = acceptance.oracle_series(params, times, config)
        header += list(ORACLE_COLUMNS)
        data += [oracle_columns[name[len("oracle_"):]] for name in ORACLE_COLUMNS]
    table = np.column_stack(data)
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in table]
    return lines


def _run_trace(args, params: ModelParams, config: IntegratorConfig) -> int:
    times = np.linspace(0.0, args.t_max_pi * math.pi, args.points)
    lines = _trace_lines(params, times, args.oracle, config)
    _atomic_write(Path(args.out), lines)
    return 0


def _run_figures(args, config: IntegratorConfig) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    times = np.linspace(0.0, args.t_max_pi * math.pi, args.points)

    def build(entry):
        name, k_ow, f_ok = entry
        params = acceptance.make_params(k_ow, f_ok)
        _atomic_write(out_dir / name, _trace_lines(params, times, args.oracle, config))

    with ThreadPoolExecutor(max_workers=len(FIGURE_SETS)) as pool:
        for _ in pool.map(build, FIGURE_SETS):
            pass
    return 0


def _run_critical(args, params: ModelParams) -> int:
    t_max = args.t_max_pi * math.pi
    instants = analytic.critical_instants(params, t_max)
    w, k = params.omega, params.kappa
    t_trans = math.log(w / k) / k if k < w else math.nan
    lines = [",".join(CRITICAL_COLUMNS)]
    for c in instants:
        lines.append(
            ",".join(
                (
                    _fmt(c.t_c),
                    _fmt(c.t_c * w / math.pi),
                    c.kind,
                    c.classification,
                    str(c.n_index),
                    _fmt(float(analytic.zeta_field(params, c.t_c))),
                    _fmt(float(analytic.concurrence(params, c.t_c))),
                    _fmt(t_trans),
                )
            )
        )
    _atomic_write(Path(args.out), lines)
    return 0


def _run_verify(args, config: IntegratorConfig) -> int:
    results = acceptance.run_all(oracle_enabled=args.oracle, config=config)
    report = acceptance.format_report(results)
    print(report)
    if args.out:
        _atomic_write(Path(args.out), report.splitlines())
    return 0 if all(r.passed for r in results) else 1


def main(argv=None) -> int:
    args = get_args(argv)
    try:
        params = validate(acceptance.make_params(args.k_over_omega, args.f_over_k))
        config = IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)
        if args.mode == "trace":
            return _run_trace(args, params, config)
        if args.mode == "figures":
            return _run_figures(args, config)
        if args.mode == "critical":
            return _run_critical(args, params)
        return _run_verify(args, config)
    except (OracleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
