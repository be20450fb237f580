"""Command line entry point.

Subcommands: validate, wave, sweep, simulate, verify, rates. Exit codes are
0 on success, 1 on a mathematical failure (hypotheses, tolerances,
subcritical speed, nonconvergence) and 2 on a usage error.
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from asgiref.sync import async_to_sync

from .asymptotics import compare_rates
from .config import CONVERTERS, INIT_KINDS, RunConfig, load_config_file, parse_range, parse_speeds
from .construction import choose_l
from .exceptions import BelowMinimalSpeed, ConfigError, LVWaveError, ValidationError
from .kpp import KppSpec, kpp_predicted_rates
from .pipeline import (
    SWEEP_FIELDS,
    run_simulation,
    run_wave,
    simulation_summary,
    sweep,
    verify_bundle,
    write_simulation_artifacts,
    write_wave_artifacts,
)
from .params import classify_speed, predicted_exponents, validate_hypotheses
from .reports import RunManifest, read_profile, read_report, to_builtin, write_report, write_rows
from .serializers import registry
from .simulation import SimConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


def print_report(report: Any) -> None:
    sys.stdout.write(registry.get_serializer("json").serialize(to_builtin(report)).decode("utf-8"))


def common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--a1", type=float)
    parser.add_argument("--a2", type=float)
    parser.add_argument("--r", type=float)
    parser.add_argument("--c", type=float, help="wave speed")
    parser.add_argument("--L", type=float, help="half-width of the wave domain")
    parser.add_argument("--h", type=float, help="grid spacing")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--tol", type=float, help="relative tolerance of rate comparisons")
    parser.add_argument("--residual-tol", dest="residual_tol", type=float)
    parser.add_argument("--jobs", type=int, help="concurrent sweep entries")
    parser.add_argument("--format", dest="report_format", help="report format (json, msgpack)")
    parser.add_argument(
        "--log-level",
        dest="log_level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = common_parser()
    parser = argparse.ArgumentParser(
        prog="lv-waves",
        description="Traveling waves of the Lotka-Volterra competition system.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("validate", parents=[common], help="check hypotheses H1-H3")
    commands.add_parser("wave", parents=[common], help="construct a wave and fit its tails")

    sweep_parser = commands.add_parser("sweep", parents=[common], help="run wave over many speeds")
    sweep_parser.add_argument("--speeds", type=parse_speeds, help="comma-separated speeds")
    sweep_parser.add_argument(
        "--c-range", dest="c_range", type=parse_range, help="start:stop:step"
    )

    sim = commands.add_parser("simulate", parents=[common], help="integrate the parabolic system")
    sim.add_argument("--X", type=float, help="domain length")
    sim.add_argument("--dx", type=float)
    sim.add_argument("--dt", type=float)
    sim.add_argument("--T", type=float, help="final time")
    sim.add_argument("--level", type=float, help="front tracking level")
    sim.add_argument("--init", choices=INIT_KINDS)
    sim.add_argument("--scheme", choices=["imex", "explicit"], default="imex")
    sim.add_argument("--burn-in", dest="burn_in", type=float)
    sim.add_argument("--snapshot-every", dest="snapshot_every", type=int)
    sim.add_argument("--snapshot-capacity", dest="snapshot_capacity", type=int)

    verify = commands.add_parser("verify", parents=[common], help="certify a stored wave")
    verify.add_argument("--run", required=True, help="directory written by the wave command")

    rates = commands.add_parser("rates", parents=[common], help="predicted tail exponents")
    rates.add_argument("--profile", help="xi,u,v profile CSV to compare against")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(Path(args.config)) if args.config else {}
    flags = {name: getattr(args, name, None) for name in CONVERTERS}
    if flags.get("speeds") is None and getattr(args, "c_range", None) is not None:
        flags["speeds"] = args.c_range
    return RunConfig.from_sources(file_values, flags)


def cmd_validate(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.params()
    report = validate_hypotheses(p)
    print_report({"params": p.as_dict(), **report.as_dict()})
    return EXIT_OK if report.all_pass else EXIT_FAILURE


def cmd_wave(cfg: RunConfig, args: argparse.Namespace) -> int:
    p, c, out = cfg.params(), cfg.require_speed(), cfg.out_dir
    manifest = RunManifest("wave", p.as_dict(), out, speed=c, grid={"L": cfg.L, "h": cfg.h})
    try:
        run = run_wave(p, c, cfg.L, cfg.h, cfg.tol, cfg.residual_tol)
    except BelowMinimalSpeed as exc:
        payload = {"error": str(exc), "diagnostic": None}
        if exc.diagnostic is not None:
            payload["diagnostic"] = exc.diagnostic.as_dict()
        path = write_report(out / "diagnostic", payload, cfg.report_format)
        manifest.add_stage("construct", "failed", [path])
        manifest.write(cfg.report_format)
        print_report(payload)
        return EXIT_FAILURE
    except LVWaveError:
        manifest.add_stage("construct", "failed")
        manifest.write(cfg.report_format)
        raise
    artifacts = write_wave_artifacts(run, out, cfg.report_format)
    manifest.add_stage("construct", "ok", artifacts[1:3])
    manifest.add_stage("iterate", "ok" if run.residual_ok else "failed", artifacts[:1] + artifacts[3:4])
    manifest.add_stage(
        "fit", "ok" if all(item.passed for item in run.comparisons) else "failed", artifacts[4:]
    )
    manifest.write(cfg.report_format)
    print_report(run.report())
    return EXIT_OK if run.passed else EXIT_FAILURE


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    p, out = cfg.params(), cfg.out_dir
    if not cfg.speeds:
        raise ConfigError("sweep needs a nonempty --speeds list or --c-range")
    rows = async_to_sync(sweep)(
        p,
        list(cfg.speeds),
        cfg.jobs,
        L=cfg.L,
        h=cfg.h,
        tol=cfg.tol,
        residual_tol=cfg.residual_tol,
    )
    path = write_rows(out / "summary.csv", rows, SWEEP_FIELDS)
    passed = all(row["status"] == "pass" for row in rows)
    manifest = RunManifest("sweep", p.as_dict(), out, grid={"L": cfg.L, "h": cfg.h})
    manifest.add_stage("sweep", "ok" if passed else "failed", [path])
    manifest.write(cfg.report_format)
    print_report(rows)
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_simulate(cfg: RunConfig, args: argparse.Namespace) -> int:
    p, out = cfg.params(), cfg.out_dir
    manifest = RunManifest(
        "simulate", p.as_dict(), out, speed=cfg.c, grid={"X": cfg.X, "dx": cfg.dx, "dt": cfg.dt}
    )
    wave = None
    if cfg.init == "wave":
        run = run_wave(p, cfg.require_speed(), cfg.L, cfg.h, with_rates=False)
        wave = run.profile
    try:
        sim_cfg = SimConfig(
            X=cfg.X,
            dx=cfg.dx,
            dt=cfg.dt,
            T=cfg.T,
            level=cfg.level,
            init=cfg.init,  # type: ignore[arg-type]
            scheme=args.scheme,
            wave=wave,
            snapshot_every=cfg.snapshot_every,
        )
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None
    snapshots = out / "snapshots.csv" if cfg.snapshot_every else None
    trace = async_to_sync(run_simulation)(p, sim_cfg, snapshots, cfg.snapshot_capacity)
    summary = simulation_summary(p, sim_cfg, trace, cfg.burn_in)
    artifacts = write_simulation_artifacts(trace, summary, out, cfg.report_format)
    if snapshots is not None:
        artifacts.append(snapshots)
    manifest.add_stage("simulate", "ok", artifacts)
    manifest.write(cfg.report_format)
    print_report(summary)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    run_dir, out = Path(args.run), cfg.out_dir
    reports = [path for path in (run_dir / "report.json", run_dir / "report.msgpack") if path.exists()]
    try:
        profile = read_profile(run_dir / "profile.csv")
        stored = read_report(reports[0] if reports else run_dir / "report.json")
    except OSError as exc:
        raise ConfigError(f"cannot load wave run from {run_dir}: {exc}") from None
    p = RunConfig(**stored["params"]).params()
    c = float(stored["c"])
    bundle = verify_bundle(p, c, profile, float(stored["l"]))
    path = write_report(out / "verification", bundle, cfg.report_format)
    manifest = RunManifest("verify", p.as_dict(), out, speed=c, grid={"L": profile.grid.L, "h": profile.grid.h})
    manifest.add_stage("verify", "ok" if bundle["passed"] else "failed", [path])
    manifest.write(cfg.report_format)
    print_report(bundle)
    return EXIT_OK if bundle["passed"] else EXIT_FAILURE


def cmd_rates(cfg: RunConfig, args: argparse.Namespace) -> int:
    p, c, out = cfg.params(), cfg.require_speed(), cfg.out_dir
    exponents = predicted_exponents(p, classify_speed(p, c))
    l = choose_l(p)  # noqa: E741
    payload: dict[str, Any] = {"params": p.as_dict(), "c": c, "exponents": exponents.as_dict()}
    for name, spec in (("kpp_lower", KppSpec.lower(p)), ("kpp_upper", KppSpec.upper(p, l))):
        minus, polynomial, plus = kpp_predicted_rates(spec, c)
        payload[name] = {"b": spec.b, "minus_inf": minus, "plus_inf": plus, "polynomial": polynomial}
    passed = True
    if args.profile:
        try:
            profile = read_profile(Path(args.profile))
        except OSError as exc:
            raise ConfigError(f"cannot read profile {args.profile}: {exc}") from None
        comparisons = [item.as_dict() for item in compare_rates(profile, p, c, cfg.tol)]
        payload["comparisons"] = comparisons
        passed = all(item["passed"] for item in comparisons)
    path = write_report(out / "rates", payload, cfg.report_format)
    manifest = RunManifest("rates", p.as_dict(), out, speed=c)
    manifest.add_stage("rates", "ok" if passed else "failed", [path])
    manifest.write(cfg.report_format)
    print_report(payload)
    return EXIT_OK if passed else EXIT_FAILURE


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "validate": cmd_validate,
    "wave": cmd_wave,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "rates": cmd_rates,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if not isinstance(exc.code, str) else EXIT_USAGE
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        cfg = make_config(args)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"lv-waves: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LVWaveError as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"lv-waves: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def run() -> None:
    sys.exit(main())
