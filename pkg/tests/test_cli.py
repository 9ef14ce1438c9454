"""Command-line behavior: exit codes, audit headers, byte determinism."""

import csv
import io

import pytest

from crpool import asymptotic_report, relative_gain
from crpool.cli import entrypoint, write_table
from crpool.experiments import gains_table, gamma0_table, sumse_table

# Small, fast settings per command; determinism must hold at any size.
FAST_ARGS = {
    "gamma0": [],
    "fig-sumse": ["--trials", "15", "--n", "8", "--snr-db", "8"],
    "fig-maxusers": ["--trials", "15", "--n", "16", "--ebn0-db", "8"],
    "fig-gains": ["--ebn0-db", "3"],
    "fig-ncr": ["--trials", "15", "--n", "32", "--snr-db", "8"],
    "fig-convergence": ["--trials", "40", "--n", "16"],
    "fig-sensing": ["--trials", "400", "--snr-db", "5"],
}


def _read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    return comments, rows[0], rows[1:]


@pytest.mark.parametrize("command", sorted(FAST_ARGS))
def test_two_runs_are_byte_identical(command, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        code = entrypoint([command, *FAST_ARGS[command], "--out", str(path)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_report_runs_are_byte_identical(tmp_path):
    dirs = [tmp_path / "r1", tmp_path / "r2"]
    args = ["--trials", "10", "--n", "16", "--seed", "3"]
    for d in dirs:
        assert entrypoint(["report", *args, "--out", str(d)]) == 0
    names = sorted(p.name for p in dirs[0].iterdir())
    assert len([n for n in names if n.endswith(".csv")]) == 7
    assert len([n for n in names if n.endswith(".png")]) == 7
    for name in names:
        if name.endswith(".csv"):
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()
        else:
            assert (dirs[1] / name).stat().st_size > 0


def test_audit_header_records_command_and_seed(tmp_path):
    out = tmp_path / "x.csv"
    assert entrypoint(["fig-ncr", *FAST_ARGS["fig-ncr"], "--seed", "9", "--out", str(out)]) == 0
    comments, header, rows = _read_csv(out)
    assert comments[0].startswith("# crpool ")
    assert "table fig-ncr" in comments[0]
    assert "seed=9" in comments[1]
    assert header[0] == "snr_db"
    assert len(rows) == 1
    # Every body field renders as a finite number.
    for field in rows[0]:
        float(field)


def test_stdout_is_the_default_sink(capsys, tmp_path):
    assert entrypoint(["gamma0"]) == 0
    printed = capsys.readouterr().out
    out = tmp_path / "g.csv"
    assert entrypoint(["gamma0", "--out", str(out)]) == 0
    assert printed == out.read_text(encoding="utf-8")


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text("n = 8\nseed = 7\nsnr_db = 0\ntrials = 15\n", encoding="utf-8")
    out = tmp_path / "o.csv"
    code = entrypoint(
        ["fig-sumse", "--config", str(cfg), "--seed", "9", "--snr-db", "4", "--out", str(out)]
    )
    assert code == 0
    comments, _, rows = _read_csv(out)
    assert "seed=9" in comments[1]
    assert "snr_grid=4" in comments[1]
    assert rows[0][0] == "4"


def test_config_errors_exit_2(tmp_path):
    assert entrypoint(["fig-sumse", "--config", str(tmp_path / "missing.cfg")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("n = 8\nbogus = 1\n", encoding="utf-8")
    assert entrypoint(["fig-sumse", "--config", str(bad)]) == 2
    dup = tmp_path / "dup.cfg"
    dup.write_text("n = 8\nn = 9\n", encoding="utf-8")
    assert entrypoint(["fig-sumse", "--config", str(dup)]) == 2


def test_bad_arguments_exit_2(tmp_path):
    assert entrypoint([]) == 2
    assert entrypoint(["no-such-command"]) == 2
    assert entrypoint(["fig-sumse", "--n0", "1", "--snr-db", "0"]) == 2
    assert entrypoint(["fig-sumse", "--users", "auto", "--trials", "5"]) == 2
    assert entrypoint(["fig-sumse", "--trials", "0"]) == 2
    assert entrypoint(["fig-sumse", "--trials", "ten"]) == 2
    assert entrypoint(["gamma0", "--n0", "-2"]) == 2
    assert entrypoint(["gamma0", "--out", str(tmp_path / "no" / "dir" / "x.csv")]) == 2


def test_help_exits_0(capsys):
    assert entrypoint(["--help"]) == 0
    assert "report" in capsys.readouterr().out


def test_solver_failure_exits_3(capsys):
    # A per-bit SNR this low has no self-consistent operating point.
    assert entrypoint(["fig-gains", "--ebn0-db", "-85"]) == 3
    assert "solver" in capsys.readouterr().err


def test_gains_table_columns_are_consistent():
    table = gains_table(n_users=5, ebn0_grid=(0.0, 10.0))
    cols = dict(zip(table.columns, zip(*table.rows)))
    for i, ebn0_db in enumerate((0.0, 10.0)):
        n0 = 10.0 ** (-ebn0_db / 10.0)
        assert cols["n0"][i] == pytest.approx(n0, rel=1e-12)
        assert cols["gain"][i] == pytest.approx(relative_gain(n0, 5), rel=1e-12)
        rep = asymptotic_report(n0, 5)
        assert cols["phi_sum_inf"][i] == pytest.approx(rep.phi_sum_inf, rel=1e-12)


def test_sumse_table_gap_column_is_internally_consistent():
    table = sumse_table(n_subbands=8, n_users=3, trials=25, snr_grid=(8.0,))
    row = dict(zip(table.columns, table.rows[0]))
    assert row["rel_gap"] == pytest.approx(
        (row["phi_sum_inf"] - row["phi_sum_sim"]) / row["phi_sum_inf"], rel=1e-12
    )
    sim_sum = sum(row[f"phi_sim_{l}"] for l in (1, 2, 3))
    assert row["phi_sum_sim"] == pytest.approx(sim_sum, rel=1e-9)


def test_gamma0_values_are_strictly_ordered():
    table = gamma0_table()
    gammas = [row[1] for row in table.rows]
    # Default grid runs from strong to weak noise.
    assert gammas == sorted(gammas)
    assert all(0.0 < g <= 1.0 for g in gammas)


def test_write_table_uses_compact_floats():
    table = gamma0_table((1.0,))
    sink = io.StringIO()
    write_table(table, sink)
    body = [ln for ln in sink.getvalue().splitlines() if not ln.startswith("#")]
    assert body[1].split(",")[0] == "1"
    assert body[1].split(",")[1] == "0.393773845"


@pytest.mark.xfail(
    reason="measured: at 0 dB and below, 16 sub-bands sit 5-7% under the "
    "large-system limit because later users water-fill over too few idle "
    "bands to realize the asymptotic diversity",
    strict=True,
)
def test_default_sumse_sweep_tracks_limit_within_five_percent():
    table = sumse_table(trials=400, snr_grid=(-2.0, 0.0))
    gap_col = table.columns.index("rel_gap")
    assert all(abs(row[gap_col]) < 0.05 for row in table.rows)
