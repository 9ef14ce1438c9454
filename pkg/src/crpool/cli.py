"""Command-line front end.

Every subcommand writes one delimited table to --out (stdout by default)
behind a '#'-prefixed audit header, so a result file always records the
command, the resolved parameters, and the seed that produced it.  The
report subcommand runs the full set into a directory and renders a figure
next to each table.

Settings resolve in three layers: built-in defaults, then --config file
keys, then explicit flags.  Exit codes: 0 success, 2 bad configuration
or arguments, 3 numerical solver failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path
from typing import IO, Callable

from . import __version__
from .config import _NOISE_KEYS, KNOWN_KEYS, parse_config_text
from .errors import ConfigError, ParameterError, SolverError
from .experiments import (
    CONVERGENCE_N_GRID,
    GAINS_EBN0_GRID,
    GAMMA0_N0_GRID,
    MAXUSERS_EBN0_GRID,
    MAXUSERS_N_GRID,
    NCR_SNR_GRID,
    SENSING_M_GRID,
    SENSING_SNR_GRID,
    SUMSE_SNR_GRID,
    Table,
    convergence_table,
    gains_table,
    gamma0_table,
    maxusers_table,
    ncr_table,
    sensing_table,
    sumse_table,
)

_SCHEMA = 1


def _merge_settings(args: argparse.Namespace) -> dict[str, str]:
    """Layer config-file keys and flags over nothing, newest wins.

    A noise key appearing in a layer evicts noise keys from the layers
    below, so a --snr-db flag cleanly overrides an n0 from the file.
    """
    merged: dict[str, str] = {}
    layers: list[dict[str, str]] = []
    if getattr(args, "config", None) is not None:
        path = Path(args.config)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        file_layer = parse_config_text(text)
        unknown = sorted(set(file_layer) - KNOWN_KEYS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        layers.append(file_layer)
    flag_layer: dict[str, str] = {}
    for flag, key in (
        ("seed", "seed"),
        ("trials", "trials"),
        ("n", "n"),
        ("users", "users"),
        ("n0", "n0"),
        ("snr_db", "snr_db"),
        ("ebn0_db", "ebn0_db"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            flag_layer[key] = str(value)
    layers.append(flag_layer)
    for layer in layers:
        if any(k in layer for k in _NOISE_KEYS):
            for k in _NOISE_KEYS:
                merged.pop(k, None)
        merged.update(layer)
    given = [k for k in _NOISE_KEYS if k in merged]
    if len(given) > 1:
        raise ConfigError(
            f"at most one of {', '.join(_NOISE_KEYS)} may be set, got {', '.join(given)}"
        )
    return merged


def _get_int(settings: dict[str, str], key: str, default: int) -> int:
    if key not in settings:
        return default
    try:
        return int(settings[key])
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {settings[key]!r}") from exc


def _get_float(settings: dict[str, str], key: str, default: float) -> float:
    if key not in settings:
        return default
    try:
        return float(settings[key])
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {settings[key]!r}") from exc


def _get_users(settings: dict[str, str], default: int) -> int:
    """A fixed user count; sweeps with per-user columns cannot take auto."""
    raw = settings.get("users")
    if raw is None:
        return default
    if raw == "auto":
        raise ConfigError("this command needs a fixed user count, not 'auto'")
    try:
        count = int(raw)
    except ValueError as exc:
        raise ConfigError(f"users must be an integer or 'auto', got {raw!r}") from exc
    if count < 1:
        raise ConfigError(f"users must be >= 1, got {count}")
    return count


def _single_db(settings: dict[str, str]) -> float | None:
    """dB operating point implied by whichever noise key is present."""
    p_avg = _get_float(settings, "p_avg", 1.0)
    if "ebn0_db" in settings:
        return _get_float(settings, "ebn0_db", 0.0)
    if "snr_db" in settings:
        return _get_float(settings, "snr_db", 0.0)
    if "n0" in settings:
        n0 = _get_float(settings, "n0", 1.0)
        if n0 <= 0:
            raise ConfigError(f"n0 must be positive, got {n0}")
        return 10.0 * math.log10(p_avg / n0)
    return None


def _db_axis(
    settings: dict[str, str], default_grid: tuple[float, ...]
) -> tuple[float, ...]:
    point = _single_db(settings)
    return default_grid if point is None else (point,)


def _n0_axis(
    settings: dict[str, str], default_grid: tuple[float, ...]
) -> tuple[float, ...]:
    if "n0" in settings:
        return (_get_float(settings, "n0", 1.0),)
    point = _single_db(settings)
    if point is None:
        return default_grid
    p_avg = _get_float(settings, "p_avg", 1.0)
    return (p_avg / 10.0 ** (point / 10.0),)


def write_table(table: Table, stream: IO[str]) -> None:
    """Emit the audit header and rows; bytes depend only on the table."""
    stream.write(f"# crpool {__version__} schema {_SCHEMA} table {table.name}\n")
    stream.write(
        "# " + " ".join(f"{key}={value}" for key, value in table.params) + "\n"
    )
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow("%.10g" % value for value in row)


def _emit(table: Table, out: str | None) -> None:
    if out is None:
        write_table(table, sys.stdout)
        return
    path = Path(out)
    with path.open("w", encoding="utf-8", newline="") as stream:
        write_table(table, stream)


def _build_gamma0(settings: dict[str, str]) -> Table:
    return gamma0_table(_n0_axis(settings, GAMMA0_N0_GRID))


def _build_sumse(settings: dict[str, str]) -> Table:
    return sumse_table(
        n_subbands=_get_int(settings, "n", 16),
        n_users=_get_users(settings, 5),
        trials=_get_int(settings, "trials", 2000),
        seed=_get_int(settings, "seed", 42),
        p_avg=_get_float(settings, "p_avg", 1.0),
        snr_grid=_db_axis(settings, SUMSE_SNR_GRID),
    )


def _build_maxusers(settings: dict[str, str]) -> Table:
    n_grid = (_get_int(settings, "n", 0),) if "n" in settings else MAXUSERS_N_GRID
    return maxusers_table(
        trials=_get_int(settings, "trials", 200),
        seed=_get_int(settings, "seed", 42),
        p_avg=_get_float(settings, "p_avg", 1.0),
        ebn0_grid=_db_axis(settings, MAXUSERS_EBN0_GRID),
        n_grid=n_grid,
    )


def _build_gains(settings: dict[str, str]) -> Table:
    return gains_table(
        n_users=_get_users(settings, 5),
        p_avg=_get_float(settings, "p_avg", 1.0),
        ebn0_grid=_db_axis(settings, GAINS_EBN0_GRID),
    )


def _build_ncr(settings: dict[str, str]) -> Table:
    return ncr_table(
        n_subbands=_get_int(settings, "n", 512),
        trials=_get_int(settings, "trials", 500),
        seed=_get_int(settings, "seed", 42),
        p_avg=_get_float(settings, "p_avg", 1.0),
        snr_grid=_db_axis(settings, NCR_SNR_GRID),
    )


def _build_convergence(settings: dict[str, str]) -> Table:
    n_grid = (_get_int(settings, "n", 0),) if "n" in settings else CONVERGENCE_N_GRID
    return convergence_table(
        n0=_n0_axis(settings, (1.0,))[0],
        n_users=_get_users(settings, 5),
        trials=_get_int(settings, "trials", 4000),
        seed=_get_int(settings, "seed", 42),
        p_avg=_get_float(settings, "p_avg", 1.0),
        n_grid=n_grid,
    )


def _build_sensing(settings: dict[str, str]) -> Table:
    snr_grid = (
        (_get_float(settings, "snr_db", 0.0),)
        if "snr_db" in settings
        else SENSING_SNR_GRID
    )
    m_grid = (
        (_get_int(settings, "sensing_m", 1),)
        if "sensing_m" in settings
        else SENSING_M_GRID
    )
    threshold = (
        _get_float(settings, "sensing_threshold", 0.0)
        if "sensing_threshold" in settings
        else None
    )
    return sensing_table(
        trials=_get_int(settings, "trials", 20000),
        seed=_get_int(settings, "seed", 42),
        n0=_get_float(settings, "n0", 1.0),
        threshold=threshold,
        snr_grid=snr_grid,
        m_grid=m_grid,
    )


_BUILDERS = (
    _build_gamma0,
    _build_sumse,
    _build_maxusers,
    _build_gains,
    _build_ncr,
    _build_convergence,
    _build_sensing,
)


def _make_handler(
    build: Callable[[dict[str, str]], Table]
) -> Callable[[argparse.Namespace], int]:
    def handler(args: argparse.Namespace) -> int:
        _emit(build(_merge_settings(args)), args.out)
        return 0

    return handler


def _cmd_report(args: argparse.Namespace) -> int:
    from .figures import render_table

    settings = _merge_settings(args)
    out_dir = Path(args.out if args.out is not None else "report")
    out_dir.mkdir(parents=True, exist_ok=True)
    for build in _BUILDERS:
        table = build(settings)
        csv_path = out_dir / f"{table.name}.csv"
        with csv_path.open("w", encoding="utf-8", newline="") as stream:
            write_table(table, stream)
        png_path = out_dir / f"{table.name}.png"
        render_table(table, png_path)
        print(f"wrote {csv_path}")
        print(f"wrote {png_path}")
    return 0


def _add_common(sub: argparse.ArgumentParser, *, out_help: str) -> None:
    sub.add_argument("--config", metavar="PATH", help="flat key = value settings file")
    sub.add_argument("--out", metavar="PATH", help=out_help)


def _add_noise(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n0", type=float, metavar="F", help="noise power per sub-band")
    sub.add_argument("--snr-db", type=float, metavar="F", help="SNR in dB")
    sub.add_argument("--ebn0-db", type=float, metavar="F", help="per-bit SNR in dB")


def _add_sim(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, metavar="U64", help="base RNG seed")
    sub.add_argument("--trials", type=int, metavar="INT", help="Monte Carlo trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crpool",
        description="Spectrum pooling: simulation sweeps and closed-form limits.",
    )
    parser.add_argument("--version", action="version", version=f"crpool {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("gamma0", help="water-level cutoff per noise power")
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_noise(sub)
    sub.set_defaults(handler=_make_handler(_build_gamma0))

    sub = subs.add_parser("fig-sumse", help="summed efficiency, simulation vs limit")
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_noise(sub)
    _add_sim(sub)
    sub.add_argument("--n", type=int, metavar="INT", help="number of sub-bands")
    sub.add_argument("--users", metavar="INT", help="user count (fixed)")
    sub.set_defaults(handler=_make_handler(_build_sumse))

    sub = subs.add_parser("fig-maxusers", help="achieved user count per band count")
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_noise(sub)
    _add_sim(sub)
    sub.add_argument("--n", type=int, metavar="INT", help="single band count")
    sub.set_defaults(handler=_make_handler(_build_maxusers))

    sub = subs.add_parser("fig-gains", help="pooling gain over a single user")
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_noise(sub)
    sub.add_argument("--users", metavar="INT", help="user count (fixed)")
    sub.set_defaults(handler=_make_handler(_build_gains))

    sub = subs.add_parser("fig-ncr", help="pooled users vs one full-budget user")
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_noise(sub)
    _add_sim(sub)
    sub.add_argument("--n", type=int, metavar="INT", help="number of sub-bands")
    sub.set_defaults(handler=_make_handler(_build_ncr))

    sub = subs.add_parser(
        "fig-convergence", help="idle-fraction convergence to the geometric limit"
    )
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_noise(sub)
    _add_sim(sub)
    sub.add_argument("--n", type=int, metavar="INT", help="single band count")
    sub.add_argument("--users", metavar="INT", help="user count (fixed)")
    sub.set_defaults(handler=_make_handler(_build_convergence))

    sub = subs.add_parser("fig-sensing", help="energy-detector error rates")
    _add_common(sub, out_help="CSV path (default stdout)")
    _add_sim(sub)
    sub.add_argument("--n0", type=float, metavar="F", help="detector noise power")
    sub.add_argument("--snr-db", type=float, metavar="F", help="single sensing SNR")
    sub.set_defaults(handler=_make_handler(_build_sensing))

    sub = subs.add_parser("report", help="run every sweep; write CSVs and figures")
    _add_common(sub, out_help="output directory (default ./report)")
    _add_noise(sub)
    _add_sim(sub)
    sub.add_argument("--n", type=int, metavar="INT", help="band count override")
    sub.add_argument("--users", metavar="INT", help="user count (fixed)")
    sub.set_defaults(handler=_cmd_report)

    return parser


def entrypoint(argv: list[str] | None = None) -> int:
    """Parse, dispatch, and map failures to stable exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse handles --help (0) and usage errors (2) itself.
        return 0 if exc.code in (0, None) else 2
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(entrypoint())


if __name__ == "__main__":
    main()
