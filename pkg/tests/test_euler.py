import numpy as np
import pytest

from critdamp import (
    DampingLaw,
    GasModel,
    Global,
    InitialProfile,
    NumericalBreakdown,
    RadialGrid,
    init_state,
    run,
    step,
)
from critdamp.euler import max_velocity_gradient, stable_dt, validate_horizon
from critdamp.profiles import mollifier, radial_bump, radial_outgoing_shell
from helpers import composite_simpson

GAS = GasModel(gamma=2.0, rho_bar=1.0)
LAW = DampingLaw(mu=1.0, lam=0.5)


def bump_profile(epsilon):
    rho0, u0 = radial_bump(1.0)
    return InitialProfile(rho0, u0, epsilon=epsilon, M=1.0)


def shell_profile(epsilon):
    rho0, u0 = radial_outgoing_shell(0.3, 1.0)
    return InitialProfile(rho0, u0, epsilon=epsilon, M=1.0, M0=0.3)


# ---------------------------------------------------------------- init

def test_init_zero_perturbation_is_constant():
    grid = RadialGrid(10.0, 64)
    s = init_state(GAS, bump_profile(0.0), grid)
    assert np.all(s.rho == GAS.rho_bar)
    assert np.all(s.mom == 0.0)


def test_init_mass_matches_quadrature():
    # discrete mass of the initialized state vs exact integral 4 pi eps int r^2 rho0
    rho0, _ = radial_bump(1.0)
    grid = RadialGrid(8.0, 512)
    s = init_state(GAS, bump_profile(0.1), grid)
    disc = 4 * np.pi * float(np.sum(grid.centers**2 * s.rho_pert) * grid.dr)
    exact = 4 * np.pi * 0.1 * composite_simpson(lambda r: r**2 * rho0(r), 0.0, 1.0, 400_000)
    assert disc == pytest.approx(exact, abs=1e-8)


def test_init_rejects_vacuum_data():
    rho0, u0 = radial_bump(1.0)
    deep = InitialProfile(lambda r: -10.0 * np.asarray(rho0(r)), u0, epsilon=1.0, M=1.0)
    with pytest.raises(ValueError):
        init_state(GAS, deep, RadialGrid(8.0, 128))


# ---------------------------------------------------------------- stepping

def test_constant_state_is_exact_fixed_point():
    grid = RadialGrid(10.0, 64)
    s = init_state(GAS, bump_profile(0.0), grid)
    for law in (LAW, DampingLaw(0.0, 0.0), DampingLaw(3.0, 2.0)):
        s2 = step(GAS, law, s, 0.4)
        assert np.all(s2.rho_pert == 0.0)
        assert np.all(s2.mom == 0.0)


def test_step_second_order_self_consistency():
    # one dt step vs two dt/2 steps differ at O(dt^2): halving dt quarters the gap
    grid = RadialGrid(12.0, 256)
    s = init_state(GAS, shell_profile(0.1), grid)

    def gap(dt):
        a = step(GAS, LAW, s, 0.4, dt=dt)
        b = step(GAS, LAW, step(GAS, LAW, s, 0.4, dt=dt / 2), 0.4, dt=dt / 2)
        return np.max(np.abs(a.rho_pert - b.rho_pert)) + np.max(np.abs(a.mom - b.mom))

    ratio = gap(0.01) / gap(0.005)
    assert 3.3 <= ratio <= 4.7


def test_momentum_zero_beyond_support():
    grid = RadialGrid(20.0, 256)
    s = init_state(GAS, shell_profile(0.1), grid)
    for _ in range(30):
        s = step(GAS, LAW, s, 0.4)
    outside = grid.centers > s.support_radius
    assert outside.any()
    assert np.all(s.mom[outside] == 0.0)
    assert np.all(s.rho_pert[outside] == 0.0)


def test_mass_conserved_along_run():
    grid = RadialGrid(30.0, 512)
    res = run(GAS, LAW, bump_profile(0.1), grid, t_end=20.0, cfl=0.4, monitor_cadence=2.0)
    L = res.columns["L"]
    assert isinstance(res.verdict, Global)
    assert np.max(np.abs(L - L[0])) <= 1e-10 * abs(L[0])


def test_run_zero_perturbation_constant_series():
    grid = RadialGrid(16.0, 64)
    res = run(GAS, LAW, bump_profile(0.0), grid, t_end=10.0, cfl=0.4, monitor_cadence=2.0)
    assert isinstance(res.verdict, Global)
    for name in ("L", "H", "E0", "max_u", "max_du_dr"):
        assert np.all(res.columns[name] == 0.0)
    assert np.all(res.columns["min_rho"] == GAS.rho_bar)


def test_small_data_velocity_decays():
    grid = RadialGrid(70.0, 512)
    res = run(GAS, LAW, bump_profile(0.01), grid, t_end=50.0, cfl=0.4, monitor_cadence=1.0)
    assert isinstance(res.verdict, Global)
    mu = res.columns["max_u"]
    i5 = np.searchsorted(res.times, 5.0)
    assert mu[-1] < mu[i5]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_cfl_safety_random_smooth_data(seed):
    # randomized smooth positive data at cfl 0.5: finite values up to any verdict
    rng = np.random.default_rng(seed)
    coef = rng.uniform(-1.0, 1.0, size=4)
    amp = rng.uniform(0.05, 0.3)

    def rho0(r):
        r = np.asarray(r, dtype=float)
        base = mollifier(r / 1.0)
        wig = sum(c * np.cos((k + 1) * np.pi * r) for k, c in enumerate(coef))
        return base * (1.0 + 0.5 * wig)

    def u0(r):
        return amp * mollifier(np.asarray(r, dtype=float) / 1.0)

    prof = InitialProfile(rho0, u0, epsilon=amp, M=1.0)
    grid = RadialGrid(12.0, 128)
    res = run(GAS, LAW, prof, grid, t_end=6.0, cfl=0.5, monitor_cadence=1.0)
    for s in res.snapshots:
        assert np.all(np.isfinite(s.rho)) and np.all(np.isfinite(s.mom))
        assert np.all(s.rho > 0)


def test_violent_data_reports_breakdown_cause():
    # strong inward/outward shear at second order loses positivity: the verdict
    # carries the cause instead of propagating garbage
    rho0, u0 = radial_outgoing_shell(0.2, 1.0)
    prof = InitialProfile(rho0, lambda r: 50.0 * np.asarray(u0(r)), epsilon=1.0, M=1.0, M0=0.2)
    grid = RadialGrid(15.0, 512)
    res = run(GAS, DampingLaw(1.0, 1.0), prof, grid, t_end=0.2, cfl=0.85,
              monitor_cadence=0.05, muscl=True, check_horizon=False)
    assert isinstance(res.verdict, NumericalBreakdown)
    assert res.verdict.time < 0.2
    for s in res.snapshots:
        assert np.all(np.isfinite(s.rho))


def test_discrete_momentum_ode_residual_shrinks():
    # residual of H' + mu (1+t)^-lam H = int (rho u^2 + 3 (p - p_bar)) halves
    # when (dr, dt) halve together at fixed cfl
    def h_rhs(s, g, d):
        r = s.grid.centers
        rho = s.rho
        u = s.mom / rho
        pe = g.pressure(rho) - g.pressure(g.rho_bar)
        return 4 * np.pi * float(np.sum(r**2 * (rho * u * u + 3.0 * pe)) * s.grid.dr)

    def residual(n):
        grid = RadialGrid(12.0, n)
        res = run(GAS, LAW, shell_profile(0.05), grid, t_end=4.0, cfl=0.4,
                  monitor_cadence=0.2, monitors={"H_rhs": h_rhs})
        t = res.times
        H = res.columns["H"]
        rhs = res.columns["H_rhs"]
        damp = LAW.mu * (1.0 + t) ** (-LAW.lam) * H
        total = 0.0
        for k in range(len(t) - 1):
            dtk = t[k + 1] - t[k]
            total += abs(H[k + 1] - H[k] + 0.5 * dtk * (damp[k] + damp[k + 1])
                         - 0.5 * dtk * (rhs[k] + rhs[k + 1]))
        return total

    assert residual(192) / residual(384) >= 1.8


def test_horizon_validation():
    grid = RadialGrid(5.0, 64)
    with pytest.raises(ValueError):
        validate_horizon(GAS, bump_profile(0.1), grid, t_end=10.0)
    with pytest.raises(ValueError):
        run(GAS, LAW, bump_profile(0.1), grid, t_end=10.0, cfl=0.4)


def test_grid_and_profile_validation():
    with pytest.raises(ValueError):
        RadialGrid(0.0, 64)
    with pytest.raises(ValueError):
        RadialGrid(10.0, 16)
    rho0, u0 = radial_bump(1.0)
    with pytest.raises(ValueError):
        InitialProfile(rho0, u0, epsilon=-0.1, M=1.0)
    with pytest.raises(ValueError):
        InitialProfile(rho0, u0, epsilon=0.1, M=1.0, M0=1.5)


def test_stable_dt_positive_and_sane():
    grid = RadialGrid(10.0, 64)
    s = init_state(GAS, bump_profile(0.1), grid)
    dt = stable_dt(GAS, s, 0.4)
    assert 0 < dt < grid.dr  # wave speed exceeds c(rho_bar) = 1
    assert max_velocity_gradient(s) >= 0.0
