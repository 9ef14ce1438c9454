"""Figure rendering for the report path.

Only this module touches matplotlib, and only through the Agg backend,
so the rest of the package stays importable on headless boxes without a
display. Each renderer draws straight from a Table produced by the
experiments module; nothing is recomputed here.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import Table  # noqa: E402


def _data(table: Table) -> tuple[dict[str, int], np.ndarray]:
    cols = {name: i for i, name in enumerate(table.columns)}
    return cols, np.asarray(table.rows, dtype=float)


def _new_axes() -> tuple[plt.Figure, plt.Axes]:
    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=150)
    ax.grid(alpha=0.3)
    return fig, ax


def _render_gamma0(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    order = np.argsort(data[:, cols["n0"]])
    ax.semilogx(data[order, cols["n0"]], data[order, cols["gamma0"]], "o-")
    ax.set_xlabel("noise power per sub-band")
    ax.set_ylabel("water-level cutoff gamma0")
    ax.set_title("Allocation cutoff versus noise power")


def _render_sumse(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    x = data[:, cols["snr_db"]]
    users = sorted(
        int(name.split("_")[-1]) for name in cols if name.startswith("phi_sim_")
    )
    for idx, l in enumerate(users):
        color = f"C{idx % 10}"
        ax.plot(x, data[:, cols[f"phi_inf_{l}"]], "-", color=color, label=f"user {l}")
        ax.plot(x, data[:, cols[f"phi_sim_{l}"]], "o", color=color, ms=4)
    ax.plot(x, data[:, cols["phi_sum_inf"]], "-", color="black", lw=2, label="sum")
    ax.plot(x, data[:, cols["phi_sum_sim"]], "o", color="black", ms=4)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("weighted spectral efficiency (bit/s/Hz)")
    ax.set_title("Per-user efficiency: simulation (dots) vs limit (lines)")
    ax.legend(fontsize=8)


def _render_maxusers(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    for idx, n in enumerate(sorted(set(data[:, cols["n"]]))):
        rows = data[data[:, cols["n"]] == n]
        order = np.argsort(rows[:, cols["ebn0_db"]])
        rows = rows[order]
        color = f"C{idx % 10}"
        x = rows[:, cols["ebn0_db"]]
        ax.plot(x, rows[:, cols["mean_users"]], "o-", color=color, label=f"N = {int(n)}")
        ax.fill_between(
            x,
            rows[:, cols["min_users"]],
            rows[:, cols["max_users"]],
            color=color,
            alpha=0.15,
            lw=0,
        )
    ax.set_xlabel("per-bit SNR (dB)")
    ax.set_ylabel("users served")
    ax.set_title("Users served before the spectrum fills (mean, min-max band)")
    ax.legend()


def _render_gains(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    order = np.argsort(data[:, cols["ebn0_db"]])
    ax.plot(data[order, cols["ebn0_db"]], data[order, cols["gain"]], "o-")
    ax.set_xlabel("per-bit SNR (dB)")
    ax.set_ylabel("relative sum-efficiency gain")
    ax.set_title("Pooling gain over a single user")


def _render_ncr(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    order = np.argsort(data[:, cols["snr_db"]])
    data = data[order]
    x = data[:, cols["snr_db"]]
    ax.errorbar(
        x,
        data[:, cols["cognitive_mean"]],
        yerr=data[:, cols["cognitive_se"]],
        fmt="o-",
        capsize=3,
        label="pooled users",
    )
    ax.errorbar(
        x,
        data[:, cols["ncr_mean"]],
        yerr=data[:, cols["ncr_se"]],
        fmt="s--",
        capsize=3,
        label="one user, pooled budget",
    )
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("sum spectral efficiency (bit/s/Hz)")
    ax.set_title("Spectrum pooling vs a single full-budget user")
    ax.legend()


def _render_convergence(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    for idx, l in enumerate(sorted(set(data[:, cols["user_index"]].astype(int)))):
        rows = data[data[:, cols["user_index"]] == l]
        keep = rows[:, cols["abs_error"]] > 0
        if not keep.any():
            continue
        rows = rows[keep]
        order = np.argsort(rows[:, cols["n"]])
        ax.plot(
            rows[order, cols["n"]],
            rows[order, cols["abs_error"]],
            "o-",
            color=f"C{idx % 10}",
            label=f"user {l}",
        )
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("number of sub-bands")
    ax.set_ylabel("|mean idle fraction - limit|")
    ax.set_title("Idle-fraction convergence to the geometric limit")
    ax.legend()


def _render_sensing(table: Table, ax: plt.Axes) -> None:
    cols, data = _data(table)
    snrs = sorted(set(data[:, cols["snr_db"]]))
    for idx, snr in enumerate(snrs):
        rows = data[data[:, cols["snr_db"]] == snr]
        order = np.argsort(rows[:, cols["m_samples"]])
        rows = rows[order]
        ax.plot(
            rows[:, cols["m_samples"]],
            rows[:, cols["miss_rate"]],
            "o-",
            color=f"C{idx % 10}",
            label=f"miss, {snr:g} dB",
        )
        if idx == 0:
            ax.plot(
                rows[:, cols["m_samples"]],
                rows[:, cols["false_alarm_rate"]],
                "k--",
                label="false alarm",
            )
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("samples per decision M")
    ax.set_ylabel("error rate")
    ax.set_title("Energy-detector error rates")
    ax.legend(fontsize=8)


_RENDERERS = {
    "gamma0": _render_gamma0,
    "fig-sumse": _render_sumse,
    "fig-maxusers": _render_maxusers,
    "fig-gains": _render_gains,
    "fig-ncr": _render_ncr,
    "fig-convergence": _render_convergence,
    "fig-sensing": _render_sensing,
}


def render_table(table: Table, path: Path | str) -> None:
    """Render the figure matching the table name to a PNG file."""
    try:
        renderer = _RENDERERS[table.name]
    except KeyError:
        raise ValueError(f"no renderer for table {table.name!r}") from None
    fig, ax = _new_axes()
    renderer(table, ax)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
