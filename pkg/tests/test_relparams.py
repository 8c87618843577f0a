import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from unruh_channel.channels import choi, is_cptp, sgad_channel
from unruh_channel.relparams import (
    QndBathParams,
    SgadBathParams,
    UnruhParams,
    accel_temp_map,
    qnd_damping,
    qnd_gamma,
    sgad_coeffs,
    thermal_occupation,
    unruh_r,
)


def test_unruh_r_examples():
    r = unruh_r(1.0, 2 * math.pi)
    assert math.sin(r) ** 2 == pytest.approx(1 / (1 + math.e), abs=1e-12)
    assert r == pytest.approx(0.545208, abs=1e-6)
    assert unruh_r(1.0, 1e-3) < 1e-100
    assert unruh_r(1.0, 1e9) == pytest.approx(math.pi / 4, abs=1e-8)


def test_unruh_r_bad_input():
    for args in ((0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)):
        with pytest.raises(ValueError):
            unruh_r(*args)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_unruh_r_increases_with_acceleration(a1, a2):
    lo, hi = sorted((a1, a2))
    if hi > lo * (1 + 1e-9):
        assert unruh_r(1.0, lo) <= unruh_r(1.0, hi)
        assert accel_temp_map(1.0, lo) < accel_temp_map(1.0, hi)
    assert math.sin(unruh_r(1.0, hi)) ** 2 <= 0.5


def test_accel_temp_map_examples():
    assert accel_temp_map(1.0, 1e12) == pytest.approx(1 / math.log(2), rel=1e-9)
    assert accel_temp_map(1.0, 0.01) == pytest.approx(0.01 / (2 * math.pi), rel=0.01)
    assert accel_temp_map(1.0, 2 * math.pi) == pytest.approx(0.761463, abs=1e-6)


def test_unruh_params_validation():
    assert UnruhParams.from_acceleration(1.0, 2 * math.pi).r == pytest.approx(0.545208, abs=1e-6)
    with pytest.raises(ValueError):
        UnruhParams(1.0)


def test_thermal_occupation():
    assert thermal_occupation(0.1, 0.0) == 0.0
    assert thermal_occupation(1.0, 1.0) == pytest.approx(1 / (math.e - 1))


def test_qnd_gamma_examples():
    bath = QndBathParams(T=1.0, squeeze_s=0.0, gamma0=0.1, omega_c=1.0)
    assert qnd_gamma(bath, 0.0) == 0.0
    want = 0.1 / math.pi * (2 * math.atan(1) + math.log(0.5))
    assert want == pytest.approx(0.027937, abs=1e-6)
    assert qnd_gamma(bath, 1.0) == pytest.approx(want, abs=1e-15)


def test_qnd_gamma_squeezed_hand_value():
    # at a=0 the sinh(2s) line does not vanish: 4 atan 2 - pi + ln(4/5)
    bath = QndBathParams(T=1.0, squeeze_s=0.5, gamma0=0.1, omega_c=1.0)
    first = 0.1 / math.pi * math.cosh(1.0) * (math.pi / 2 + math.log(0.5))
    second = 0.1 / (2 * math.pi) * math.sinh(1.0) * (4 * math.atan(2.0) - math.pi + math.log(0.8))
    assert qnd_gamma(bath, 1.0) == pytest.approx(first - second, abs=1e-15)
    assert qnd_gamma(bath, 1.0) == pytest.approx(0.023210, abs=1e-6)


@given(st.floats(0, 3), st.floats(-2, 2), st.floats(0, 2), st.floats(0.1, 5))
def test_qnd_gamma_vanishes_at_zero_time(T, s, a, wc):
    bath = QndBathParams(T=T, squeeze_s=s, squeeze_a=a, omega_c=wc)
    assert qnd_gamma(bath, 0.0) == 0.0
    assert qnd_damping(bath, 0.0) == 1.0


def test_qnd_damping_uses_squared_gamma():
    bath = QndBathParams(T=1.0, omega0=1.0)
    g = qnd_gamma(bath, 1.0)
    assert qnd_damping(bath, 1.0) == pytest.approx(math.exp(-(g ** 2)))


def test_bath_validation():
    with pytest.raises(ValueError):
        QndBathParams(T=-1.0)
    with pytest.raises(ValueError):
        QndBathParams(T=1.0, omega_c=0.0)
    with pytest.raises(ValueError):
        SgadBathParams(T=-0.1)


def test_sgad_zero_temperature_limit():
    c = sgad_coeffs(SgadBathParams(T=0.0, squeeze_s=0.0, gamma0=0.1), 1.0)
    assert c.p1 == 1.0 and c.p2 == 0.0
    assert c.alpha == pytest.approx(1 - math.exp(-0.1), abs=1e-15)
    assert c.alpha == pytest.approx(0.095163, abs=1e-6)
    assert c.mu == 0.0


def test_sgad_degenerate_time():
    with pytest.raises(ValueError, match="degenerate time"):
        sgad_coeffs(SgadBathParams(T=0.5, squeeze_s=0.5), 0.0)


def test_sgad_caption_point():
    bath = SgadBathParams(T=0.5, squeeze_s=0.5, gamma0=0.1, omega0=0.1)
    c = sgad_coeffs(bath, 1.0)
    assert c.p1 + c.p2 == pytest.approx(1.0, abs=1e-12)
    for v in (c.p1, c.p2, c.alpha, c.mu, c.nu):
        assert 0.0 <= v <= 1.0
    assert is_cptp(sgad_channel(bath, 1.0), tol=1e-10)


def test_sgad_grid_is_cptp_and_in_range():
    for T in np.linspace(0.0, 3.0, 13):
        for s in np.linspace(-2.0, 2.0, 17):
            for t in np.linspace(0.05, 3.0, 8):
                bath = SgadBathParams(T=float(T), squeeze_s=float(s))
                c = sgad_coeffs(bath, float(t))
                assert abs(c.p1 + c.p2 - 1) < 1e-12
                assert all(-1e-9 <= v <= 1 + 1e-9 for v in (c.alpha, c.mu, c.nu))
                assert is_cptp(sgad_channel(bath, float(t)), tol=1e-10)


# Independent oracle: integrate the squeezed thermal bath master equation.

_SM = np.array([[0, 0], [1, 0]], dtype=complex)  # |0> decays into |1>
_SP = _SM.conj().T


def _sup(a, b):
    # vec(a rho b) with column stacking
    return np.kron(b.T, a)


def lindblad_choi(bath: SgadBathParams, t: float) -> np.ndarray:
    nth = thermal_occupation(bath.omega0, bath.T)
    s = bath.squeeze_s
    n = nth * (math.cosh(s) ** 2 + math.sinh(s) ** 2) + math.sinh(s) ** 2
    m = -0.5 * math.sinh(2 * abs(s)) * (2 * nth + 1) * np.exp(1j * bath.squeeze_phi)
    g, i2 = bath.gamma0, np.eye(2)
    gen = (
        g * (n + 1) * (_sup(_SM, _SP) - 0.5 * _sup(_SP @ _SM, i2) - 0.5 * _sup(i2, _SP @ _SM))
        + g * n * (_sup(_SP, _SM) - 0.5 * _sup(_SM @ _SP, i2) - 0.5 * _sup(i2, _SM @ _SP))
        - g * m * _sup(_SP, _SP)
        - g * np.conj(m) * _sup(_SM, _SM)
    )
    prop = expm(gen * t)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2))
            e[i, j] = 1
            out += np.kron(e, (prop @ e.reshape(4, order="F")).reshape(2, 2, order="F"))
    return out


@settings(max_examples=150, deadline=None)
@given(
    st.floats(0.05, 3), st.floats(-2, 2), st.floats(0, 2 * math.pi), st.sampled_from([0.1, 0.5]),
    st.sampled_from([0.1, 1.0]), st.floats(0.01, 5),
)
def test_sgad_matches_master_equation(T, s, phi, g0, w0, t):
    bath = SgadBathParams(T=T, squeeze_s=s, squeeze_phi=phi, gamma0=g0, omega0=w0)
    assert np.linalg.norm(choi(sgad_channel(bath, t)) - lindblad_choi(bath, t)) < 1e-7


def test_sgad_small_squeezing_near_vacuum_is_reported():
    # N ~ 1e-12: the closed form cancels catastrophically and must not return garbage
    bath = SgadBathParams(T=1e-3, squeeze_s=1e-6, omega0=0.1)
    try:
        c = sgad_coeffs(bath, 1.0)
    except ValueError as exc:
        assert "ill-conditioned" in str(exc) or "no physical" in str(exc)
    else:
        assert np.linalg.norm(choi(sgad_channel(bath, 1.0)) - lindblad_choi(bath, 1.0)) < 1e-6
        assert 0 <= c.p2 <= 1
