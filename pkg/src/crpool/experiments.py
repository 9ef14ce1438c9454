"""Named sweeps behind the command line.

Each builder resolves its defaults, runs the underlying model, and hands
back a Table: column names, float rows, and the resolved parameters that
the serializer echoes into the audit header.  Keeping the sweep logic
here leaves the CLI as pure argument plumbing and lets tests drive the
exact same code paths the user sees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytics import (
    asymptotic_report,
    band_gain_convergence,
    solve_ebn0,
)
from .channel import RngSpec
from .config import SystemParams
from .pooling import compare_ncr, max_users, run_seeded_trial
from .sensing import error_rate_sweep
from .waterfill import solve_gamma0

GAMMA0_N0_GRID = (10.0, 1.0, 0.1, 0.01)
SUMSE_SNR_GRID = tuple(float(x) for x in range(-2, 21, 2))
MAXUSERS_EBN0_GRID = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
MAXUSERS_N_GRID = (64, 512, 2048)
GAINS_EBN0_GRID = tuple(float(x) for x in range(-2, 21))
NCR_SNR_GRID = (0.0, 4.0, 8.0, 12.0, 16.0, 20.0)
CONVERGENCE_N_GRID = (16, 128, 1024)
SENSING_SNR_GRID = (-5.0, 0.0, 5.0, 10.0)
SENSING_M_GRID = (1, 2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class Table:
    """A finished sweep: rows of floats plus enough context to audit them."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    params: tuple[tuple[str, str], ...]


def _fmt(value: float) -> str:
    return "%.10g" % value


def gamma0_table(n0_grid: tuple[float, ...] = GAMMA0_N0_GRID) -> Table:
    """Water-level cutoff and the asymptotics it pins, per noise power."""
    rows = []
    for n0 in n0_grid:
        sol = solve_gamma0(n0)
        rep = asymptotic_report(n0, 1)
        rows.append((n0, sol.gamma0, sol.residual, rep.delta_inf, rep.c1_inf))
    return Table(
        name="gamma0",
        columns=("n0", "gamma0", "residual", "delta_inf", "c1_inf"),
        rows=tuple(rows),
        params=(("n0_grid", ",".join(_fmt(v) for v in n0_grid)),),
    )


def sumse_table(
    n_subbands: int = 16,
    n_users: int = 5,
    trials: int = 2000,
    seed: int = 42,
    p_avg: float = 1.0,
    snr_grid: tuple[float, ...] = SUMSE_SNR_GRID,
) -> Table:
    """Simulated per-user and summed efficiencies against the limits."""
    columns = ["snr_db", "n0"]
    columns += [f"phi_sim_{l}" for l in range(1, n_users + 1)]
    columns += [f"phi_inf_{l}" for l in range(1, n_users + 1)]
    columns += ["phi_sum_sim", "phi_sum_se", "phi_sum_inf", "rel_gap"]
    rows = []
    for snr_db in snr_grid:
        params = SystemParams(
            n_subbands=n_subbands,
            max_users=n_users,
            snr_db=snr_db,
            p_avg=p_avg,
            trials=trials,
            seed=seed,
        )
        per_user = np.zeros((trials, n_users))
        for t in range(trials):
            report = run_seeded_trial(params, t)
            for user in report.users:
                per_user[t, user.user_index - 1] = user.spectral_eff_weighted
        sums = per_user.sum(axis=1)
        rep = asymptotic_report(params.noise_power, n_users)
        row = [snr_db, params.noise_power]
        row += list(per_user.mean(axis=0))
        row += list(rep.phi_per_user)
        sum_mean = float(sums.mean())
        row += [
            sum_mean,
            float(sums.std(ddof=1) / math.sqrt(trials)),
            rep.phi_sum_inf,
            (rep.phi_sum_inf - sum_mean) / rep.phi_sum_inf,
        ]
        rows.append(tuple(row))
    return Table(
        name="fig-sumse",
        columns=tuple(columns),
        rows=tuple(rows),
        params=(
            ("n", str(n_subbands)),
            ("users", str(n_users)),
            ("trials", str(trials)),
            ("seed", str(seed)),
            ("p_avg", _fmt(p_avg)),
            ("snr_grid", ",".join(_fmt(v) for v in snr_grid)),
        ),
    )


def maxusers_table(
    trials: int = 200,
    seed: int = 42,
    p_avg: float = 1.0,
    ebn0_grid: tuple[float, ...] = MAXUSERS_EBN0_GRID,
    n_grid: tuple[int, ...] = MAXUSERS_N_GRID,
) -> Table:
    """How many users the pool admits before the spectrum fills."""
    rows = []
    for ebn0_db in ebn0_grid:
        for n in n_grid:
            params = SystemParams(
                n_subbands=n,
                ebn0_db=ebn0_db,
                p_avg=p_avg,
                trials=trials,
                seed=seed,
            )
            stats = max_users(params, trials)
            rows.append(
                (ebn0_db, float(n), stats.mean, float(stats.min), float(stats.max))
            )
    return Table(
        name="fig-maxusers",
        columns=("ebn0_db", "n", "mean_users", "min_users", "max_users"),
        rows=tuple(rows),
        params=(
            ("trials", str(trials)),
            ("seed", str(seed)),
            ("p_avg", _fmt(p_avg)),
            ("ebn0_grid", ",".join(_fmt(v) for v in ebn0_grid)),
            ("n_grid", ",".join(str(v) for v in n_grid)),
        ),
    )


def gains_table(
    n_users: int = 5,
    p_avg: float = 1.0,
    ebn0_grid: tuple[float, ...] = GAINS_EBN0_GRID,
) -> Table:
    """Pooling gain over a single user across the per-bit-SNR axis.

    The gain column reads the axis directly as noise power, matching how
    the sweep commands resolve a dB operating point.  The c1_implicit
    column carries the self-consistent single-user efficiency at the
    same per-bit SNR, where the noise power is solved jointly with the
    rate instead of fixed up front.
    """
    rows = []
    for ebn0_db in ebn0_grid:
        n0 = p_avg / 10.0 ** (ebn0_db / 10.0)
        rep = asymptotic_report(n0, n_users)
        implicit = solve_ebn0(10.0 ** (ebn0_db / 10.0))
        rows.append(
            (
                ebn0_db,
                n0,
                rep.gamma0,
                rep.delta_inf,
                rep.c1_inf,
                rep.phi_sum_inf,
                rep.phi_sum_inf / rep.c1_inf - 1.0,
                implicit.c1_inf,
            )
        )
    return Table(
        name="fig-gains",
        columns=(
            "ebn0_db",
            "n0",
            "gamma0",
            "delta_inf",
            "c1_inf",
            "phi_sum_inf",
            "gain",
            "c1_implicit",
        ),
        rows=tuple(rows),
        params=(
            ("users", str(n_users)),
            ("p_avg", _fmt(p_avg)),
            ("ebn0_grid", ",".join(_fmt(v) for v in ebn0_grid)),
        ),
    )


def ncr_table(
    n_subbands: int = 512,
    trials: int = 500,
    seed: int = 42,
    p_avg: float = 1.0,
    snr_grid: tuple[float, ...] = NCR_SNR_GRID,
) -> Table:
    """Pooled users against one user spending the whole pooled budget."""
    rows = []
    for snr_db in snr_grid:
        params = SystemParams(
            n_subbands=n_subbands,
            snr_db=snr_db,
            p_avg=p_avg,
            trials=trials,
            seed=seed,
        )
        cmp = compare_ncr(params, trials)
        rows.append(
            (
                snr_db,
                params.noise_power,
                cmp.cognitive_mean,
                cmp.cognitive_se,
                cmp.ncr_mean,
                cmp.ncr_se,
                cmp.cognitive_mean - cmp.ncr_mean,
                cmp.mean_achieved_users,
            )
        )
    return Table(
        name="fig-ncr",
        columns=(
            "snr_db",
            "n0",
            "cognitive_mean",
            "cognitive_se",
            "ncr_mean",
            "ncr_se",
            "gap",
            "mean_achieved_users",
        ),
        rows=tuple(rows),
        params=(
            ("n", str(n_subbands)),
            ("trials", str(trials)),
            ("seed", str(seed)),
            ("p_avg", _fmt(p_avg)),
            ("snr_grid", ",".join(_fmt(v) for v in snr_grid)),
        ),
    )


def convergence_table(
    n0: float = 1.0,
    n_users: int = 5,
    trials: int = 4000,
    seed: int = 42,
    p_avg: float = 1.0,
    n_grid: tuple[int, ...] = CONVERGENCE_N_GRID,
) -> Table:
    """Mean idle-band fraction per user against its geometric limit."""
    rows = []
    for row in band_gain_convergence(n0, n_users, n_grid, trials, seed, p_avg):
        rows.append(
            (
                float(row.user_index),
                float(row.n_subbands),
                row.mean_alpha,
                row.alpha_inf,
                abs(row.mean_alpha - row.alpha_inf),
            )
        )
    return Table(
        name="fig-convergence",
        columns=("user_index", "n", "mean_alpha", "alpha_inf", "abs_error"),
        rows=tuple(rows),
        params=(
            ("n0", _fmt(n0)),
            ("users", str(n_users)),
            ("trials", str(trials)),
            ("seed", str(seed)),
            ("p_avg", _fmt(p_avg)),
            ("n_grid", ",".join(str(v) for v in n_grid)),
        ),
    )


def sensing_table(
    trials: int = 20000,
    seed: int = 42,
    n0: float = 1.0,
    threshold: float | None = None,
    snr_grid: tuple[float, ...] = SENSING_SNR_GRID,
    m_grid: tuple[int, ...] = SENSING_M_GRID,
) -> Table:
    """Miss and false-alarm rates of the energy detector per (SNR, M)."""
    cells = error_rate_sweep(
        list(snr_grid),
        list(m_grid),
        trials,
        RngSpec(seed, 0),
        threshold=threshold,
        n0=n0,
    )
    rows = tuple(
        (c.snr_db, float(c.m_samples), c.miss_rate, c.false_alarm_rate)
        for c in cells
    )
    resolved_thr = 2.0 * n0 if threshold is None else threshold
    return Table(
        name="fig-sensing",
        columns=("snr_db", "m_samples", "miss_rate", "false_alarm_rate"),
        rows=rows,
        params=(
            ("trials", str(trials)),
            ("seed", str(seed)),
            ("n0", _fmt(n0)),
            ("threshold", _fmt(resolved_thr)),
            ("snr_grid", ",".join(_fmt(v) for v in snr_grid)),
            ("m_grid", ",".join(str(v) for v in m_grid)),
        ),
    )
