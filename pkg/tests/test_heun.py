import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import closed_mp, closed_pp
from heunrabi.heun import (
    MU_MP,
    MU_PP,
    DimensionalParams,
    MuPair,
    PhysicalParams,
    SeriesControl,
    che_params,
    eta0,
    eta_at_half,
    recurrence_step,
)


@pytest.mark.parametrize(
    "f, nu, expected",
    [
        (0.5, 1.0, (1j, -3 / 8 - 0.25j, 0.5j)),
        (0.0, 0.0, (0j, -1 / 8, 0j)),
        (1.0, 2.0, (2j, -(9 + 4j) / 8, 1j)),
    ],
)
def test_che_params(f, nu, expected):
    hp = che_params(PhysicalParams(f, nu))
    assert (hp.mu0, hp.mu1) == (0.5, 0.5)
    assert (hp.a, hp.b0, hp.b1) == pytest.approx(expected, abs=1e-15)


def test_mu_pair_only_two_values():
    MuPair(0.5, 0.5)
    MuPair(-0.5, 0.5)
    with pytest.raises(ValueError):
        MuPair(0.5, -0.5)


def test_params_validation():
    with pytest.raises(ValueError):
        PhysicalParams(math.nan, 1.0)
    with pytest.raises(ValueError):
        DimensionalParams(1.0, 0.0, 1.0)
    d = DimensionalParams(1.0, 0.5, 0.25)
    assert (d.f, d.nu, d.period) == pytest.approx((0.5, 2.0, 4 * math.pi))


def test_first_coefficients():
    p = PhysicalParams(0.5, 1.0)
    assert recurrence_step(MU_PP, 0, 1.0, 0.0, p) == pytest.approx(-0.5 - 1j, abs=1e-15)
    assert recurrence_step(MU_MP, 0, 1.0, 0.0, p) == pytest.approx((1 - 1 - 4j) / 6, abs=1e-15)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_tau1_closed_form(f, nu):
    p = PhysicalParams(f, nu)
    assert recurrence_step(MU_PP, 0, 1.0, 0.0, p) == -(nu**2) / 2 - 2j * f
    t1 = recurrence_step(MU_MP, 0, 1.0, 0.0, p)
    assert t1 == pytest.approx((1 - nu**2 - 8j * f) / 6, rel=1e-14, abs=1e-14)


def test_zero_field_coefficients_vanish():
    p = PhysicalParams(0.0, 0.0)
    t_prev, t = 0.0, 1.0
    for k in range(10):
        t_prev, t = t, recurrence_step(MU_PP, k, t, t_prev, p)
        assert t == 0
    ev = eta0(0.3, MU_PP, p)
    assert ev.value == 1 and ev.converged


@given(st.floats(0, 40), st.floats(0, 40))
def test_eta0_at_origin_is_one(f, nu):
    for mu in (MU_PP, MU_MP):
        ev = eta0(0.0, mu, PhysicalParams(f, nu))
        assert ev.value == 1 and ev.terms_used == 1 and ev.converged


def test_eta0_rejects_outside_disc():
    with pytest.raises(ValueError):
        eta0(1.0, MU_PP, PhysicalParams(0, 1))
    with pytest.raises(ValueError):
        eta0(-0.1, MU_PP, PhysicalParams(0, 1))


def test_eta0_half_examples():
    p = PhysicalParams(0.0, 1.0)
    assert eta0(0.5, MU_PP, p).value == pytest.approx(math.cos(math.pi / 4), abs=1e-14)
    assert eta0(0.5, MU_MP, p).value == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0])
def test_zero_drive_matches_closed_forms(nu):
    p = PhysicalParams(0.0, nu)
    for z in np.linspace(0.0, 0.5, 26):
        assert abs(eta0(z, MU_PP, p).value - closed_pp(z, nu)) < 1e-12
        assert abs(eta0(z, MU_MP, p).value - closed_mp(z, nu)) < 1e-12


def test_eta_at_half_small_nu_limit():
    # sqrt(2) sin(nu pi/4)/nu -> pi sqrt(2)/4
    e_pp, e_mp = eta_at_half(PhysicalParams(0.0, 1e-6))
    assert e_pp.value == pytest.approx(1.0, abs=1e-12)
    assert e_mp.value == pytest.approx(math.pi * math.sqrt(2) / 4, abs=1e-10)
    assert math.pi * math.sqrt(2) / 4 == pytest.approx(1.1107207345, abs=1e-10)


def _residual(f, nu, mu, z, h=1e-4, terms=200):
    ctrl = SeriesControl(max_terms=terms, precision="double")
    p = PhysicalParams(f, nu)
    y = {k: eta0(z + k * h, mu, p, ctrl).value for k in (-2, -1, 0, 1, 2)}
    d1 = (y[-2] - 8 * y[-1] + 8 * y[1] - y[2]) / (12 * h)
    d2 = (-y[-2] + 16 * y[-1] - 30 * y[0] + 16 * y[1] - y[2]) / (12 * h * h)
    if mu.mu0 > 0:
        # the equation for y itself
        return d2 + (1 / (2 * z) + 1 / (2 * (z - 1)) + 2j * f) * d1 + (1j * f * (2 * z - 1) - nu**2 / 4) * y[0] / (z * (z - 1))
    # sqrt(z) * eta solves the same equation; expand the product rule
    s = math.sqrt(z)
    Y = s * y[0]
    dY = s * d1 + y[0] / (2 * s)
    d2Y = s * d2 + d1 / s - y[0] / (4 * s**3)
    return d2Y + (1 / (2 * z) + 1 / (2 * (z - 1)) + 2j * f) * dY + (1j * f * (2 * z - 1) - nu**2 / 4) * Y / (z * (z - 1))


@pytest.mark.parametrize("f, nu", [(0.0, 1.0), (0.5, 1.0), (2.0, 3.0), (4.0, 4.0), (4.0, 0.5), (1.0, 0.0)])
@pytest.mark.parametrize("mu", [MU_PP, MU_MP], ids=["pp", "mp"])
def test_series_solves_the_equation(f, nu, mu):
    for z in np.linspace(0.05, 0.45, 9):
        assert abs(_residual(f, nu, mu, z)) < 1e-6


def test_stopping_rule_and_flags():
    p = PhysicalParams(0.5, 1.0)
    ev = eta0(0.5, MU_PP, p, SeriesControl(max_terms=1000))
    assert ev.converged and ev.terms_used < 100
    assert ev.last_term_magnitude <= 1e-14 * abs(ev.value)
    short = eta0(0.5, MU_PP, p, SeriesControl(max_terms=10))
    assert not short.converged and short.terms_used == 10
    assert abs(short.value - ev.value) > 1e-6


def test_tail_decreases_before_stop():
    # the last few terms before the stop must all be tiny, not a single lucky zero crossing
    p = PhysicalParams(3.0, 2.0)
    ctrl = SeriesControl(max_terms=1000, consecutive=5)
    ev = eta0(0.5, MU_MP, p, ctrl)
    t_prev, t = 0.0, 1.0
    mags = []
    for k in range(ev.terms_used - 1):
        t_prev, t = t, recurrence_step(MU_MP, k, t, t_prev, p)
        mags.append(abs(t) * 0.5 ** (k + 1))
    assert all(m <= 1e-14 * abs(ev.value) for m in mags[-5:])
    assert mags[-6] > mags[-1]


def test_precision_modes_agree_for_moderate_drive():
    p = PhysicalParams(3.0, 2.0)
    a = eta0(0.5, MU_PP, p, SeriesControl(precision="double")).value
    b = eta0(0.5, MU_PP, p, SeriesControl(precision=40)).value
    assert abs(a - b) < 1e-13


def test_auto_precision_removes_cancellation():
    # nu = 0: eta_pp(1/2) = exp(-i f) exactly
    p = PhysicalParams(30.0, 0.0)
    ctrl = SeriesControl(max_terms=1000)
    double = eta0(0.5, MU_PP, p, SeriesControl(max_terms=1000, precision="double"))
    auto = eta0(0.5, MU_PP, p, ctrl)
    exact = complex(math.cos(30.0), -math.sin(30.0))
    assert double.peak_term > 1e10
    assert abs(double.value - exact) > 1e-8
    assert abs(auto.value - exact) < 1e-13


def test_control_validation():
    with pytest.raises(ValueError):
        SeriesControl(max_terms=0)
    with pytest.raises(ValueError):
        SeriesControl(precision="quad")


@settings(deadline=None, max_examples=25)
@given(st.floats(0, 5), st.floats(0, 5))
def test_pure_function(f, nu):
    p = PhysicalParams(f, nu)
    assert eta_at_half(p) == eta_at_half(p)
