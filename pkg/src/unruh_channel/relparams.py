"""Scalar physics: Unruh angle, acceleration/temperature map and bath functions.

Natural units (hbar = k_B = c = 1) throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


# accepted mismatch between the selected root and the coherence factor sqrt(D)
COHERENCE_TOL = 1e-6
VACUUM_N = 1e-300


@dataclass(frozen=True)
class UnruhParams:
    """Unruh mixing angle ``r`` in radians, ``0 <= r <= pi/4``."""

    r: float

    def __post_init__(self):
        if not (0.0 <= self.r <= math.pi / 4 + 1e-15):
            raise ValueError(f"Unruh parameter r={self.r} outside [0, pi/4]")

    @classmethod
    def from_acceleration(cls, omega: float, accel: float) -> "UnruhParams":
        return cls(unruh_r(omega, accel))


@dataclass(frozen=True)
class QndBathParams:
    """Squeezed thermal bath with Ohmic spectral density, for the dephasing channel.

    ``squeeze_a`` is the squeezing time offset that enters the decoherence
    function; it has nothing to do with the Unruh acceleration.
    """

    T: float
    squeeze_s: float = 0.0
    squeeze_a: float = 0.0
    gamma0: float = 0.1
    omega_c: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        if self.T < 0:
            raise ValueError("temperature must be non-negative")
        if self.omega_c <= 0:
            raise ValueError("cutoff frequency must be positive")
        if self.gamma0 < 0:
            raise ValueError("coupling must be non-negative")


@dataclass(frozen=True)
class SgadBathParams:
    T: float
    squeeze_s: float = 0.0
    squeeze_phi: float = 0.0
    gamma0: float = 0.1
    omega0: float = 0.1

    def __post_init__(self):
        if self.T < 0:
            raise ValueError("temperature must be non-negative")
        if self.gamma0 < 0:
            raise ValueError("coupling must be non-negative")


@dataclass(frozen=True)
class SgadCoefficients:
    p1: float
    p2: float
    alpha: float
    mu: float
    nu: float
    N: float
    a_bath: float


def unruh_r(omega: float, accel: float) -> float:
    """Unruh angle from mode frequency and proper acceleration.

    Uses ``sin(r)**2 = 1 / (1 + exp(2 pi omega / a))``.
    """
    if omega <= 0 or accel <= 0:
        raise ValueError("omega and accel must be positive")
    x = 2.0 * math.pi * omega / accel
    # 1/(1+e^x) without overflow for tiny accelerations
    sin2 = math.exp(-x) / (1.0 + math.exp(-x)) if x > 0 else 1.0 / (1.0 + math.exp(x))
    return math.asin(math.sqrt(sin2))


def accel_temp_map(omega: float, accel: float) -> float:
    """Temperature simulated by acceleration ``accel`` for a mode of frequency ``omega``."""
    if omega <= 0 or accel <= 0:
        raise ValueError("omega and accel must be positive")
    x = 2.0 * math.pi * omega / accel
    # log(1 + e^x) = x + log1p(e^-x)
    return omega / (x + math.log1p(math.exp(-x)))


def thermal_occupation(omega0: float, T: float) -> float:
    if T == 0:
        return 0.0
    x = omega0 / T
    # e^{-x} / (1 - e^{-x}) does not overflow for tiny T
    return math.exp(-x) / -math.expm1(-x)


def qnd_gamma(bath: QndBathParams, t: float) -> float:
    """Decoherence function of the QND channel for an Ohmic squeezed thermal bath."""
    if t < 0:
        raise ValueError("time must be non-negative")
    if t == 0:
        # both lines cancel analytically; avoid returning rounding residue
        return 0.0
    g0, T, s, a, wc = bath.gamma0, bath.T, bath.squeeze_s, bath.squeeze_a, bath.omega_c
    x = wc * t
    first = (g0 * T / (math.pi * wc)) * math.cosh(2 * s) * (
        2 * x * math.atan(x) + math.log(1.0 / (1.0 + x * x))
    )
    u = wc * (t - a)
    v = wc * (t - 2 * a)
    w = a * wc
    second = (g0 * T / (2 * math.pi * wc)) * math.sinh(2 * s) * (
        4 * u * math.atan(2 * u)
        - 4 * v * math.atan(v)
        + 4 * w * math.atan(2 * w)
        + math.log((1 + v * v) ** 2 / (1 + 4 * u * u))
        + math.log(1.0 / (1 + 4 * w * w))
    )
    return first - second


def qnd_damping(bath: QndBathParams, t: float) -> float:
    """Off-diagonal damping factor ``exp(-omega0 * gamma(t)**2)``."""
    g = qnd_gamma(bath, t)
    return math.exp(-bath.omega0 * g * g)


def _sinh2_over_sinh(x: float, y: float) -> float:
    """``sinh(x)**2 / sinh(y) * exp(-y)`` for ``0 <= x < y``, overflow free."""
    if x == 0:
        return 0.0
    return math.expm1(-2 * x) ** 2 * math.exp(2 * x - 2 * y) / (-2 * math.expm1(-2 * y))


def _cosh2_exp(x: float, y: float) -> float:
    """``cosh(x)**2 * exp(-2 y)``."""
    return (1 + math.exp(-2 * x)) ** 2 / 4 * math.exp(2 * x - 2 * y)


def _unit(v: float, tol: float) -> float | None:
    if -tol <= v <= 1 + tol:
        return min(max(v, 0.0), 1.0)
    return None


def sgad_coeffs(bath: SgadBathParams, t: float, tol: float = 1e-9) -> SgadCoefficients:
    """Probabilities and damping fractions of the squeezed generalized
    amplitude damping channel after interaction time ``t``.

    Both roots of the quadratic for ``p2`` are tried. Roots giving ``p2`` or a
    damping fraction outside [0, 1] are discarded; of the rest, the one whose
    diagonal Kraus pair reproduces the coherence factor ``sqrt(D)`` is kept.

    Raises
    ------
    ValueError
        ``t <= 0`` (the quadratic degenerates), no root is physical, or the
        selected root misses the coherence factor by more than ``COHERENCE_TOL``.
    """
    if t <= 0:
        raise ValueError("degenerate time: the SGAD coefficients are undefined at t <= 0")
    g0, s = bath.gamma0, bath.squeeze_s
    nth = thermal_occupation(bath.omega0, bath.T)
    N = nth * (math.cosh(s) ** 2 + math.sinh(s) ** 2) + math.sinh(s) ** 2
    a = math.sinh(2 * s) * (2 * nth + 1)
    if s == 0.0 or N < VACUUM_N:
        # Unsqueezed bath: the quadratic collapses to p2 = N/(2N+1), mu = 0,
        # alpha = nu = 1 - e^{-g0(2N+1)t}. Taken in closed form because the general
        # expression is 0/0 at N = 0. Below VACUUM_N the squeezing (|a| ~ 2 sqrt N)
        # is far under double precision and the bath is treated as unsqueezed.
        lost = -math.expm1(-g0 * (2 * N + 1) * t)
        p2 = N / (2 * N + 1)
        return SgadCoefficients(p1=1.0 - p2, p2=p2, alpha=lost, mu=0.0, nu=lost, N=N, a_bath=a)

    decay = math.exp(-g0 * (2 * N + 1) * t)
    x = abs(g0 * a * t / 2)
    y = g0 * (2 * N + 1) * t / 2
    A = (2 * N + 1) / (2 * N) * _sinh2_over_sinh(x, y)
    B = N / (2 * N + 1) * (-math.expm1(-g0 * (2 * N + 1) * t))
    C = A + B + decay
    D = _cosh2_exp(x, y)

    denom = (A + B - C - 1) ** 2 - 4 * D
    base = (
        A * A * B
        + C * C
        + A * (B * B - C - B * (1 + C) - D)
        - (1 + B) * D
        - C * (B + D - 1)
    )
    disc = D * (B - A * B + (A - 1) * C + D) * (A - A * B + (B - 1) * C + D)
    if disc < 0:
        if disc < -1e-14:
            raise ValueError(f"negative discriminant {disc:.3e} in SGAD coefficients")
        disc = 0.0
    root = 2 * math.sqrt(disc)

    candidates = []
    for sign in (+1, -1):
        p2 = (base + sign * root) / denom
        p2u = _unit(p2, tol)
        if p2u is None or p2u == 0.0:
            continue
        p1 = 1.0 - p2u
        nu = _unit(B / p2u, tol)
        mu = _unit(A / p2u, tol)
        alpha = _unit((1 - A - B - decay) / p1, tol) if p1 > 0 else 0.0
        candidates.append((p2u, p1, alpha, mu, nu))
    physical = [c for c in candidates if None not in c]
    if not physical:
        raise ValueError(f"no physical SGAD root for {bath} at t={t}")
    # Both roots usually pass the range test; only one reproduces the coherence
    # decay cosh(x) e^{-y} = sqrt(D) of the |0><1| element.
    target = math.sqrt(D)

    def coherence_error(c):
        p2, p1, alpha, mu, nu = c
        return abs(p1 * math.sqrt(1 - alpha) + p2 * math.sqrt((1 - mu) * (1 - nu)) - target)

    best = min(physical, key=coherence_error)
    if coherence_error(best) > COHERENCE_TOL:
        raise ValueError(f"SGAD closed form is ill-conditioned for {bath} at t={t}")
    p2, p1, alpha, mu, nu = best
    return SgadCoefficients(p1=p1, p2=p2, alpha=alpha, mu=mu, nu=nu, N=N, a_bath=a)
