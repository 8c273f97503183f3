"""Command-line front end: sweeps, verification runs, figure-ready files.

Subcommands
    exchange   phase-sensitivity sweep over total photon number
    loss       collection-probability sweep (or a population trace)
    parity     parity fringe with its curvature-vs-QFI consistency check
    report     consolidated error budget for a platform parameter set
    verify     recurrence-vs-oracle equivalence run

Values resolve with the precedence flags > config file > defaults.  CSV
output is comma-separated with a header row, LF endings and full double
precision; a leading timestamp comment line is suppressed by
--no-header so that output bytes are reproducible.  Exit codes: 0 on
success, 2 on validation errors, 1 on numeric failure.
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .budget import PlatformParams, full_budget
from .dickesim import (
    LossModel,
    collection_probability_product,
    dicke_collection_probability,
    dicke_populations,
)
from .exchange import (
    SWEEP_COLUMNS,
    LadderFamily,
    exchange_integral,
    qfi_vs_n_sweep,
)
from .ladder import TwinConfiguration, build_dicke
from .metrology import parity_curve, qfi_twin
from .oracle import DEFAULT_MAX_TOTAL_PHOTONS, OracleTooLargeError, oracle_integral

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2

_ENV_JOBS = "DICKEQFI_JOBS"


class UsageError(ValueError):
    """Validation failure attributable to a named option."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: subcommand plus its option mapping."""

    subcommand: str
    options: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"subcommand": self.subcommand, "options": self.options},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        return cls(subcommand=data["subcommand"], options=dict(data["options"]))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_rows(rows, columns, cfg: RunConfig, stream):
    if cfg.options["format"] == "json":
        payload = {"subcommand": cfg.subcommand, "rows": rows}
        if not cfg.options["no_header"]:
            payload["generated"] = datetime.datetime.now(
                datetime.timezone.utc
            ).isoformat()
        stream.write(json.dumps(payload, indent=2) + "\n")
        return
    if not cfg.options["no_header"]:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        stream.write(f"# generated={stamp}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_fmt(row.get(c, "")) for c in columns) + "\n")


def _emit(rows, columns, cfg: RunConfig):
    out = cfg.options.get("out")
    if out:
        with open(out, "w", newline="") as handle:
            _write_rows(rows, columns, cfg, handle)
    else:
        _write_rows(rows, columns, cfg, sys.stdout)


def _parse_int_range(spec: str, step: int, key: str) -> list[int]:
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            lo, hi = int(float(lo)), int(float(hi))
            return list(range(lo, hi + 1, step))
        return [int(float(tok)) for tok in spec.split(",") if tok]
    except ValueError as exc:
        raise UsageError(key, f"could not parse integer list {spec!r}") from exc


def _parse_float_list(spec: str, points: int, key: str) -> list[float]:
    try:
        if ".." in spec:
            lo, hi = (float(tok) for tok in spec.split(".."))
            if lo <= 0 or hi <= lo:
                raise ValueError("need 0 < low < high for a geometric range")
            return list(np.geomspace(lo, hi, points))
        return [float(tok) for tok in spec.split(",") if tok]
    except ValueError as exc:
        raise UsageError(key, f"could not parse value list {spec!r}") from exc


def _resolve(args: argparse.Namespace, defaults: dict) -> RunConfig:
    """Merge flag values over config-file values over defaults."""
    file_values = {}
    if args.config:
        with open(args.config) as handle:
            loaded = json.load(handle)
        if "options" in loaded:  # accept a dumped RunConfig verbatim
            file_values = dict(loaded["options"])
        else:
            file_values = dict(loaded)
    options = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        if flag is not None:
            options[key] = flag
        elif key in file_values:
            options[key] = file_values[key]
        else:
            options[key] = default
    if options.get("jobs") is None:
        env = os.environ.get(_ENV_JOBS)
        options["jobs"] = int(env) if env else (os.cpu_count() or 1)
    options["jobs"] = int(options["jobs"])
    if options["format"] not in ("csv", "json"):
        raise UsageError("format", f"unsupported output format {options['format']!r}")
    cfg = RunConfig(subcommand=args.subcommand, options=options)
    if args.dump_config:
        with open(args.dump_config, "w") as handle:
            handle.write(cfg.to_json() + "\n")
    return cfg


_COMMON_DEFAULTS = {
    "out": None,
    "format": "csv",
    "jobs": None,
    "no_header": False,
    "oracle_max": DEFAULT_MAX_TOTAL_PHOTONS,
}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default=None)
    parser.add_argument("--jobs", type=int, default=None,
                        help=f"worker processes (default: ${_ENV_JOBS} or logical cores)")
    parser.add_argument("--no-header", dest="no_header", action="store_true",
                        default=None, help="suppress the timestamp header line")
    parser.add_argument("--oracle-max", dest="oracle_max", type=int, default=None,
                        help="total-photon guard for oracle evaluations")
    parser.add_argument("--config", help="JSON file with option defaults")
    parser.add_argument("--dump-config", dest="dump_config",
                        help="write the resolved configuration as JSON")


def _family(options) -> LadderFamily:
    kind = options["family"]
    if kind is None:
        raise UsageError("family", "a ladder family is required")
    if kind not in ("dicke", "harmonic", "anharmonic"):
        raise UsageError("family", f"unknown family {kind!r}")
    return LadderFamily(kind=kind, gamma=float(options["gamma"]),
                        u=float(options["u_over_gamma"]) * float(options["gamma"]))


def cmd_exchange(cfg: RunConfig) -> int:
    opts = cfg.options
    if opts["n"] is None:
        raise UsageError("n", "a photon-number list or range is required")
    family = _family(opts)
    n_values = _parse_int_range(str(opts["n"]), int(opts["step"]), "n")
    for n in n_values:
        if n < 2 or n % 2:
            raise UsageError("n", f"total photon numbers must be even >= 2, got {n}")

    if opts["verify_oracle"]:
        tol = float(opts["tol"])
        worst = 0.0
        for n in n_values:
            if n > int(opts["oracle_max"]):
                print(f"N={n}: skipped (above oracle guard {opts['oracle_max']})")
                continue
            arm = family.build_arm(n)
            rec = exchange_integral(TwinConfiguration(arm, arm)).value
            ora = oracle_integral(arm, arm, l=1,
                                  max_total_photons=int(opts["oracle_max"])).value
            diff = abs(rec - ora)
            worst = max(worst, diff)
            print(f"N={n}: recurrence={rec:.12e} oracle={ora:.12e} |diff|={diff:.3e}")
        if worst > tol:
            print(f"verification FAILED: max |diff| {worst:.3e} > {tol:g}",
                  file=sys.stderr)
            return EXIT_NUMERIC
        return EXIT_OK

    rows = qfi_vs_n_sweep(family, n_values, jobs=opts["jobs"])
    failed = [r for r in rows if "error" in r]
    _emit(rows, SWEEP_COLUMNS + ("error",) if failed else SWEEP_COLUMNS, cfg)
    if failed:
        print(f"{len(failed)} sweep points failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


_LOSS_COLUMNS = ("N", "purcell", "one_minus_p_exact", "one_minus_p_product",
                 "log_estimate")


def cmd_loss(cfg: RunConfig) -> int:
    opts = cfg.options
    if opts["n"] is None:
        raise UsageError("n", "an emitter-number list is required")
    n_values = _parse_int_range(str(opts["n"]), 1, "n")
    for n in n_values:
        if n < 1:
            raise UsageError("n", f"emitter numbers must be positive, got {n}")
    purcells = []
    for tok in str(opts["purcell"]).split(","):
        tok = tok.strip()
        if tok in ("inf", "Inf", "INF"):
            purcells.append(math.inf)
        else:
            purcells.extend(_parse_float_list(tok, int(opts["points"]), "purcell"))

    if opts["trace"]:
        if len(n_values) != 1 or len(purcells) != 1:
            raise UsageError("trace", "a trace needs exactly one N and one purcell")
        n = n_values[0]
        p1d = purcells[0]
        loss = LossModel(1.0, 0.0 if math.isinf(p1d) else 1.0 / p1d)
        trace = dicke_populations(n, loss)
        columns = ("t",) + tuple(f"P_{m}" for m in range(n + 1)) + ("sum",)
        rows = []
        for k, t in enumerate(trace.times):
            row = {"t": float(t), "sum": float(1.0 - trace.sum_deficit[k])}
            for m in range(n + 1):
                row[f"P_{m}"] = float(trace.populations[m, k])
            rows.append(row)
        _emit(rows, columns, cfg)
        return EXIT_OK

    rows = []
    for n in n_values:
        for p1d in purcells:
            loss = LossModel(1.0, 0.0 if math.isinf(p1d) else 1.0 / p1d)
            est = dicke_collection_probability(n, loss)
            rows.append({
                "N": n,
                "purcell": p1d,
                "one_minus_p_exact": 1.0 - est.exact,
                "one_minus_p_product": 1.0 - est.product_estimate,
                "log_estimate": 0.0 if math.isinf(p1d) else math.log(n) / p1d,
            })
    _emit(rows, _LOSS_COLUMNS, cfg)
    return EXIT_OK


def cmd_parity(cfg: RunConfig) -> int:
    opts = cfg.options
    m = opts["m"]
    if m is None:
        raise UsageError("m", "the photons-per-arm count is required")
    m = int(m)
    if m < 1:
        raise UsageError("m", f"need at least one photon per arm, got {m}")
    single = bool(opts["single_mode"])
    if not single and opts["family"] is None:
        raise UsageError("family", "choose --single-mode or a ladder family")

    if single:
        integrals = [1.0] * (m + 1)
    else:
        family = _family(opts)
        arm = family.build_arm(2 * m)
        guard = int(opts["oracle_max"])
        if 2 * m > guard:
            print(
                f"error: m: {m} photons per arm exceeds the oracle guard "
                f"({guard} total); rerun with --single-mode or raise --oracle-max",
                file=sys.stderr,
            )
            return EXIT_USAGE
        integrals = [
            oracle_integral(arm, arm, l=l, max_total_photons=guard).value
            for l in range(m + 1)
        ]

    phis = np.linspace(-float(opts["phi_max"]), float(opts["phi_max"]),
                       int(opts["points"]))
    curve = parity_curve(m, integrals, phis)
    qfi = qfi_twin(2 * m, _as_integral(integrals[1], 2 * m)).qfi
    rows = curve.to_rows()
    _emit(rows, ("phi", "expectation"), cfg)
    print(f"# curvature={-curve.curvature:.12g} qfi={qfi:.12g} "
          f"saturation={-curve.curvature / qfi:.12g}", file=sys.stderr)
    if opts["check_derivative"]:
        endpoint_derivative = -curve.curvature / 4.0
        print(f"# legendre_endpoint_derivative={endpoint_derivative:.12g} "
              f"expected={m * (m + 1) / 2:.12g}", file=sys.stderr)
        if abs(endpoint_derivative - m * (m + 1) / 2.0) > 1e-9:
            return EXIT_NUMERIC
    return EXIT_OK


def _as_integral(value: float, n_total: int):
    from .oracle import ExchangeIntegral

    return ExchangeIntegral(value=value, total_photons=n_total,
                            method="oracle", exchanged_count=1)


_REPORT_REQUIRED = ("q", "n_g", "lambda_a", "gamma_1d", "gamma_star", "n")


def cmd_report(cfg: RunConfig) -> int:
    opts = cfg.options
    for key in _REPORT_REQUIRED:
        if opts[key] is None:
            raise UsageError(key, "required physical parameter is missing")
    params = PlatformParams(
        quality_factor=float(opts["q"]),
        group_index=float(opts["n_g"]),
        wavelength=float(opts["lambda_a"]),
        gamma_1d=float(opts["gamma_1d"]),
        gamma_star=float(opts["gamma_star"]),
        n_photons=int(opts["n"]),
        pulse_error=float(opts["pulse_error"]),
        delta_gamma=float(opts["delta_gamma"]),
        delay=float(opts["delay"]),
        interferometer_loss=float(opts["eta"]),
    )
    n = params.n_photons
    arm = build_dicke(n // 2, 1.0)
    integral = exchange_integral(TwinConfiguration(arm, arm))
    purcell = params.gamma_1d / params.gamma_star if params.gamma_star else math.inf
    loss = LossModel(1.0, 0.0 if math.isinf(purcell) else 1.0 / purcell)
    p = dicke_collection_probability(n // 2, loss).exact
    budget = full_budget(params, integral, p,
                         margin_factor=float(opts["margin_factor"]))

    if opts["json"]:
        payload = budget.to_dict()
        payload["platform"] = params.to_dict()
        text = json.dumps(payload, indent=2) + "\n"
        if opts["out"]:
            with open(opts["out"], "w") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    lines = [
        f"error budget for N = {n} photons "
        f"(exchange integral {integral.value:.6f})",
        f"  ideal QFI                 {budget.ideal_qfi:.6g}",
        f"  combined QFI lower bound  {budget.combined_qfi_lower_bound:.6g}",
        f"  effective overlap         {budget.effective_exchange_integral:.6f}",
        f"  collection probability    {budget.collection_probability:.6f}",
        "  channel                value        ok  note",
    ]
    for entry in budget.entries:
        lines.append(
            f"  {entry.channel:<21} {entry.value:<12.6g} "
            f"{'y' if entry.feasible else 'n'}   {entry.note}"
        )
    if opts["fidelity_table"]:
        lines.append("  fidelity vs photon number (per-arm cascade):")
        lines.append("    N      p")
        n_probe = 2
        while n_probe <= 2048:
            p_probe = collection_probability_product(n_probe // 2, loss)
            lines.append(f"    {n_probe:<6d} {p_probe:.6f}")
            n_probe *= 2
    text = "\n".join(lines) + "\n"
    if opts["out"]:
        with open(opts["out"], "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    opts = cfg.options
    tol = float(opts["tol"])
    families = []
    for tok in str(opts["families"]).split(","):
        tok = tok.strip()
        if ":" in tok:
            kind, u = tok.split(":")
            families.append(LadderFamily(kind=kind, gamma=1.0, u=float(u)))
        else:
            families.append(LadderFamily(kind=tok, gamma=1.0))
    worst = 0.0
    for family in families:
        for m in range(1, int(opts["m_max"]) + 1):
            arm = family.build_arm(2 * m)
            rec = exchange_integral(TwinConfiguration(arm, arm)).value
            ora = oracle_integral(arm, arm, l=1,
                                  max_total_photons=int(opts["oracle_max"])).value
            diff = abs(rec - ora)
            worst = max(worst, diff)
            label = family.kind if family.u == 0 else f"{family.kind}(u={family.u:g})"
            print(f"{label:<22} m={m}: recurrence={rec:.12e} "
                  f"oracle={ora:.12e} |diff|={diff:.3e}")
    if worst > tol:
        print(f"verification FAILED: max |diff| {worst:.3e} > {tol:g}",
              file=sys.stderr)
        return EXIT_NUMERIC
    print(f"verification passed: max |diff| {worst:.3e} <= {tol:g}")
    return EXIT_OK


_SUBCOMMAND_DEFAULTS = {
    "exchange": {
        **_COMMON_DEFAULTS,
        "family": None, "gamma": 1.0, "u_over_gamma": 0.0,
        "n": None, "step": 2, "verify_oracle": False, "tol": 1e-9,
    },
    "loss": {
        **_COMMON_DEFAULTS,
        "n": None, "purcell": "inf", "points": 17, "trace": False,
    },
    "parity": {
        **_COMMON_DEFAULTS,
        "m": None, "single_mode": False, "family": None, "gamma": 1.0,
        "u_over_gamma": 0.0, "phi_max": math.pi / 2, "points": 181,
        "check_derivative": False,
    },
    "report": {
        **_COMMON_DEFAULTS,
        "q": None, "n_g": None, "lambda_a": None, "gamma_1d": None,
        "gamma_star": None, "n": None, "pulse_error": 0.0, "delta_gamma": 0.0,
        "delay": 0.0, "eta": 0.0, "margin_factor": 10.0, "json": False,
        "fidelity_table": False,
    },
    "verify": {
        **_COMMON_DEFAULTS,
        "families": "dicke,harmonic,anharmonic:1,anharmonic:10,anharmonic:1000",
        "m_max": 4, "tol": 1e-9,
    },
}

_HANDLERS = {
    "exchange": cmd_exchange,
    "loss": cmd_loss,
    "parity": cmd_parity,
    "report": cmd_report,
    "verify": cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dickeqfi",
        description="phase-sensitivity calculator for collectively emitted "
                    "multimode photon states",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("exchange", help="exchange-integral / QFI sweep")
    p.add_argument("--family", choices=["dicke", "harmonic", "anharmonic"])
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--u-over-gamma", dest="u_over_gamma", type=float, default=None)
    p.add_argument("--n", help="total photon numbers: '4..500' or '4,8,16'")
    p.add_argument("--step", type=int, default=None)
    p.add_argument("--verify-oracle", dest="verify_oracle", action="store_true",
                   default=None)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("loss", help="collection-probability sweep or trace")
    p.add_argument("--n", help="emitter numbers: '10,100,1000'")
    p.add_argument("--purcell", help="'10..1e5', comma list, or 'inf'")
    p.add_argument("--points", type=int, default=None,
                   help="points of a geometric purcell range")
    p.add_argument("--trace", action="store_true", default=None,
                   help="emit the population trace instead of the sweep")
    _add_common(p)

    p = sub.add_parser("parity", help="parity fringe and curvature check")
    p.add_argument("--m", type=int, help="photons per arm")
    p.add_argument("--single-mode", dest="single_mode", action="store_true",
                   default=None)
    p.add_argument("--family", choices=["dicke", "harmonic", "anharmonic"])
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--u-over-gamma", dest="u_over_gamma", type=float, default=None)
    p.add_argument("--phi-max", dest="phi_max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--check-derivative", dest="check_derivative",
                   action="store_true", default=None)
    _add_common(p)

    p = sub.add_parser("report", help="consolidated platform error budget")
    p.add_argument("--q", type=float, help="waveguide quality factor")
    p.add_argument("--n-g", dest="n_g", type=float, help="group index")
    p.add_argument("--lambda-a", dest="lambda_a", type=float,
                   help="emitter wavelength [m]")
    p.add_argument("--gamma-1d", dest="gamma_1d", type=float,
                   help="guided decay rate [rad/s]")
    p.add_argument("--gamma-star", dest="gamma_star", type=float,
                   help="residual decay rate [rad/s]")
    p.add_argument("--n", type=int, help="total photon number (even)")
    p.add_argument("--pulse-error", dest="pulse_error", type=float, default=None)
    p.add_argument("--delta-gamma", dest="delta_gamma", type=float, default=None,
                   help="relative coupling mismatch of the two ensembles")
    p.add_argument("--delay", type=float, default=None,
                   help="wavepacket arrival delay [s]")
    p.add_argument("--eta", type=float, default=None,
                   help="interferometer photon-loss probability")
    p.add_argument("--margin-factor", dest="margin_factor", type=float,
                   default=None)
    p.add_argument("--json", action="store_true", default=None)
    p.add_argument("--fidelity-table", dest="fidelity_table", action="store_true",
                   default=None)
    _add_common(p)

    p = sub.add_parser("verify", help="recurrence-vs-oracle equivalence run")
    p.add_argument("--families", help="comma list, 'anharmonic:<u>' for shifts")
    p.add_argument("--m-max", dest="m_max", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args, _SUBCOMMAND_DEFAULTS[args.subcommand])
        return _HANDLERS[args.subcommand](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OracleTooLargeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
