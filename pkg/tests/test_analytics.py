"""Asymptotic composition, the per-bit-SNR fixed point, and convergence.

Frozen reference values were computed before these functions existed, by
composing scipy's exp1 with the independently bracketed cutoff root:

    gamma0(1)      = 0.393773845045118
    delta_inf(1)   = 0.325493418002
    c1_inf(1)      = 1.028538925359
    phi_sum_inf    = 1.519304879948   (5 users at n0 = 1)
    c1 fixed point = 1.0645247596 / 2.8747140000 / 4.9453879552
                     at 0 / 5 / 10 dB per-bit SNR
"""

import math

import numpy as np
import pytest

from crpool import (
    ParameterError,
    RngSpec,
    SolverError,
    asymptotic_report,
    band_gain_convergence,
    delta_inf,
    draw_gains,
    frequency_map,
    geometric_sum,
    relative_gain,
    solve_ebn0,
    solve_gamma0,
)


def test_asymptotics_at_unit_noise_match_frozen_values():
    rep = asymptotic_report(1.0, 5)
    assert rep.gamma0 == pytest.approx(0.393773845045118, abs=1e-12)
    assert rep.delta_inf == pytest.approx(0.325493418002, abs=1e-10)
    assert rep.c1_inf == pytest.approx(1.028538925359, abs=1e-10)
    assert rep.phi_sum_inf == pytest.approx(1.519304879948, abs=1e-10)


def test_report_has_geometric_structure():
    rep = asymptotic_report(0.5, 4)
    for l, phi in enumerate(rep.phi_per_user, start=1):
        assert phi == pytest.approx(rep.delta_inf ** (l - 1) * rep.c1_inf, rel=1e-12)
    assert rep.phi_sum_inf == pytest.approx(sum(rep.phi_per_user), rel=1e-12)
    assert rep.phi_sum_inf == pytest.approx(
        geometric_sum(rep.delta_inf, 4) * rep.c1_inf, rel=1e-12
    )


def test_geometric_sum_agrees_with_direct_sum():
    for delta in (0.0, 0.1, 0.9):
        for n_users in (1, 2, 7):
            direct = sum(delta**k for k in range(n_users))
            assert geometric_sum(delta, n_users) == pytest.approx(direct, rel=1e-12)


def test_idle_fraction_matches_empirical_gain_distribution():
    # delta_inf is the chance a unit-exponential gain falls below the
    # cutoff; check it against 1e5 draws at three standard errors.
    sol = solve_gamma0(1.0)
    d = delta_inf(sol.gamma0, 1.0)
    gains = draw_gains(10**5, RngSpec(424242, 0)).gains
    empirical = float(np.mean(gains < sol.gamma0))
    se = math.sqrt(d * (1.0 - d) / 10**5)
    assert abs(empirical - d) < 3.0 * se


def test_delta_inf_validates_domain():
    with pytest.raises(ParameterError):
        delta_inf(0.0, 1.0)
    with pytest.raises(ParameterError):
        delta_inf(1.5, 1.0)
    with pytest.raises(ParameterError):
        delta_inf(0.5, -1.0)


def test_ebn0_fixed_point_matches_frozen_values():
    assert solve_ebn0(10.0**0.0).c1_inf == pytest.approx(1.0645247596, abs=1e-6)
    assert solve_ebn0(10.0**0.5).c1_inf == pytest.approx(2.8747140000, abs=1e-6)
    assert solve_ebn0(10.0**1.0).c1_inf == pytest.approx(4.9453879552, abs=1e-6)


def test_ebn0_fixed_point_grows_with_budget():
    c0 = solve_ebn0(10.0**0.0).c1_inf
    c5 = solve_ebn0(10.0**0.5).c1_inf
    c10 = solve_ebn0(10.0**1.0).c1_inf
    assert c10 > c5 > c0


def test_ebn0_solution_is_self_consistent():
    for eb_n0 in (1.5, 4.0, 10.0):
        sol = solve_ebn0(eb_n0)
        # Plug the solved rate back into the noise-power relation.
        n0 = 1.0 / (eb_n0 * sol.c1_inf)
        rep = asymptotic_report(n0, 1)
        assert abs(rep.c1_inf - sol.c1_inf) < 1e-8


def test_ebn0_result_does_not_depend_on_bracket():
    reference = solve_ebn0(4.0).c1_inf
    for lo, hi in ((1e-6, 2.0), (0.9, 1.1), (1e-9, 64.0)):
        assert abs(solve_ebn0(4.0, c1_lo=lo, c1_hi=hi).c1_inf - reference) < 1e-8


def test_ebn0_solver_failure_is_reported():
    with pytest.raises(SolverError):
        solve_ebn0(1e-8)
    with pytest.raises(ParameterError):
        solve_ebn0(0.0)
    with pytest.raises(ParameterError):
        solve_ebn0(1.0, c1_lo=2.0, c1_hi=1.0)


def test_relative_gain_composition():
    for n0 in (0.1, 1.0, 10.0):
        rep = asymptotic_report(n0, 5)
        assert relative_gain(n0, 5) == pytest.approx(
            rep.phi_sum_inf / rep.c1_inf - 1.0, rel=1e-12
        )
    assert relative_gain(1.0, 1) == 0.0


def test_relative_gain_stays_below_sixty_percent_at_practical_snr():
    # Five pooled users never add 60% over one user on the 0..20 dB axis.
    gains = [relative_gain(10.0 ** (-db / 10.0), 5) for db in np.arange(0.0, 20.5, 0.5)]
    assert max(gains) < 0.60
    assert all(a > b for a, b in zip(gains, gains[1:]))


def test_frequency_map_endpoints_and_monotonicity():
    w = 8.0
    assert frequency_map(0.0, w) == pytest.approx(-w / 2.0)
    assert frequency_map(50.0, w) == pytest.approx(w / 2.0)
    ts = np.linspace(0.0, 5.0, 40)
    fs = [frequency_map(float(t), w) for t in ts]
    assert all(a < b for a, b in zip(fs, fs[1:]))
    with pytest.raises(ParameterError):
        frequency_map(-0.1, w)
    with pytest.raises(ParameterError):
        frequency_map(1.0, 0.0)


def test_frequency_map_span_up_to_cutoff_is_idle_fraction():
    # The image of [0, gamma0*n0] occupies exactly delta_inf of the band.
    for n0 in (0.25, 1.0, 4.0):
        sol = solve_gamma0(n0)
        w = 3.0
        span = frequency_map(sol.gamma0 * n0, w) - frequency_map(0.0, w)
        assert span / w == pytest.approx(delta_inf(sol.gamma0, n0), rel=1e-12)


def test_band_gain_convergence_rows():
    rows = band_gain_convergence(1.0, 3, (8, 32), trials=400, seed=11)
    assert len(rows) == 6
    by_key = {(r.user_index, r.n_subbands): r for r in rows}
    # The first user always sees the whole band.
    assert by_key[(1, 8)].mean_alpha == 1.0
    assert by_key[(1, 32)].mean_alpha == 1.0
    rep = asymptotic_report(1.0, 3)
    for (l, n), row in by_key.items():
        assert row.alpha_inf == pytest.approx(rep.delta_inf ** (l - 1), rel=1e-12)
        assert 0.0 <= row.mean_alpha <= 1.0


def test_band_gain_convergence_is_deterministic():
    a = band_gain_convergence(1.0, 2, (16,), trials=50, seed=3)
    b = band_gain_convergence(1.0, 2, (16,), trials=50, seed=3)
    assert a == b
