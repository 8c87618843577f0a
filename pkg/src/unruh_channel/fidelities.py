"""Channel performance figures: average gate fidelity and channel fidelity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .channels import KrausChannel, apply, choi, kraus_from_choi
from .numkit import I2, PAULIS, entropy_of_spectrum, herm_eigvals


@dataclass(frozen=True)
class BasisParam:
    """Orthonormal qubit basis ``{|psi>, |psi_perp>}`` on the Bloch sphere."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError("theta must lie in [0, pi]")

    def states(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        e = np.exp(1j * self.phi)
        psi = np.array([c, e * s])
        perp = np.array([-np.conj(e) * s, c])
        return np.outer(psi, psi.conj()), np.outer(perp, perp.conj())


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    n: int


@dataclass(frozen=True)
class ChannelFidelity:
    chi: float
    basis: BasisParam


def trace_sum(ch: KrausChannel) -> float:
    """``sum_i |Tr E_i|^2`` over the canonical Kraus set of ``ch``."""
    canon = kraus_from_choi(choi(ch))
    return float(sum(abs(np.trace(k)) ** 2 for k in canon.ops))


def avg_gate_fidelity(ch: KrausChannel) -> float:
    d = 2
    return (d + trace_sum(ch)) / (d * (d + 1))


def haar_states(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random qubit kets as rows of an ``(n, 2)`` array."""
    z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def avg_gate_fidelity_mc(ch: KrausChannel, n: int = 100_000, seed: int = 0) -> MonteCarloEstimate:
    """Sample mean of ``<psi|E(|psi><psi|)|psi>`` over Haar-random inputs."""
    if n < 1:
        raise ValueError("need at least one sample")
    psi = haar_states(n, np.random.default_rng(seed))
    # <psi|E(psi)|psi> = sum_k |<psi|K_k|psi>|^2
    f = np.zeros(n)
    for k in ch.ops:
        f += np.abs(np.einsum("ni,ij,nj->n", psi.conj(), k, psi)) ** 2
    stderr = float(f.std(ddof=1) / math.sqrt(n)) if n > 1 else float("inf")
    return MonteCarloEstimate(mean=float(f.mean()), stderr=stderr, n=n)


def holevo_kappa(ch: KrausChannel, basis: BasisParam) -> float:
    """Holevo quantity of the equiprobable ensemble ``basis`` sent through ``ch``."""
    a, b = (apply(ch, s) for s in basis.states())
    mean = 0.5 * (a + b)
    return entropy_of_spectrum(herm_eigvals(mean)) - 0.5 * (
        entropy_of_spectrum(herm_eigvals(a)) + entropy_of_spectrum(herm_eigvals(b))
    )


def bloch_affine(ch: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    """Real ``(M, c)`` with Bloch vector ``n -> M n + c`` under ``ch``."""
    c = _bloch(apply(ch, 0.5 * I2))
    m = np.column_stack([_bloch(apply(ch, 0.5 * p)) for p in PAULIS])
    return m, c


def _bloch(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(rho @ p).real for p in PAULIS])


def _entropy_of_length(length: np.ndarray) -> np.ndarray:
    # entropy in bits of a qubit whose Bloch vector has the given length
    lam = np.clip(np.stack([(1 + length) / 2, (1 - length) / 2], axis=-1), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, -lam * np.log2(lam), 0.0)
    return terms.sum(axis=-1)


def _kappa_affine(m: np.ndarray, c: np.ndarray, theta, phi) -> np.ndarray:
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    # Bloch vector of cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    mn = n @ m.T
    plus = np.linalg.norm(c + mn, axis=-1)
    minus = np.linalg.norm(c - mn, axis=-1)
    mean = _entropy_of_length(np.linalg.norm(c))
    return mean - 0.5 * (_entropy_of_length(plus) + _entropy_of_length(minus))


def _h_len(length: float) -> float:
    out = 0.0
    for x in ((1 + length) / 2, (1 - length) / 2):
        if x > 0:
            out -= x * math.log2(x)
    return out


def _kappa_point(m, c, mean_entropy: float, theta: float, phi: float) -> float:
    # scalar twin of _kappa_affine for the line searches
    st = math.sin(theta)
    n = (st * math.cos(phi), st * math.sin(phi), math.cos(theta))
    mn = [m[i][0] * n[0] + m[i][1] * n[1] + m[i][2] * n[2] for i in range(3)]
    plus = math.sqrt(sum((c[i] + mn[i]) ** 2 for i in range(3)))
    minus = math.sqrt(sum((c[i] - mn[i]) ** 2 for i in range(3)))
    return mean_entropy - 0.5 * (_h_len(min(plus, 1.0)) + _h_len(min(minus, 1.0)))


def kappa_grid(ch: KrausChannel, theta, phi) -> np.ndarray:
    """Vectorized :func:`holevo_kappa` over broadcast arrays of angles."""
    m, c = bloch_affine(ch)
    return _kappa_affine(m, c, theta, phi)


def channel_fidelity(ch: KrausChannel, grid_n: int = 32) -> ChannelFidelity:
    """Maximum Holevo quantity over orthonormal input bases.

    A ``grid_n x grid_n`` scan of (theta, phi) is followed by one bounded
    line search in each coordinate around the best grid point.
    """
    if grid_n < 8:
        raise ValueError("grid_n must be at least 8")
    m, c = bloch_affine(ch)
    thetas = np.linspace(0.0, math.pi, grid_n)
    phis = np.linspace(0.0, 2 * math.pi, grid_n, endpoint=False)
    k = _kappa_affine(m, c, thetas[:, None], phis[None, :])
    i, j = np.unravel_index(np.argmax(k), k.shape)
    th, ph, best = float(thetas[i]), float(phis[j]), float(k[i, j])
    dth, dph = thetas[1] - thetas[0], phis[1] - phis[0]

    ml, cl = m.tolist(), c.tolist()
    mean_entropy = float(_entropy_of_length(np.linalg.norm(c)))

    def neg(x, y):
        return -_kappa_point(ml, cl, mean_entropy, x, y)

    res = minimize_scalar(lambda x: neg(x, ph), bounds=(max(0.0, th - dth), min(math.pi, th + dth)),
                          method="bounded", options={"xatol": 1e-9})
    if -res.fun > best:
        th, best = float(res.x), float(-res.fun)
    res = minimize_scalar(lambda y: neg(th, y), bounds=(ph - dph, ph + dph),
                          method="bounded", options={"xatol": 1e-9})
    if -res.fun > best:
        ph, best = float(res.x) % (2 * math.pi), float(-res.fun)
    return ChannelFidelity(chi=best, basis=BasisParam(th, ph))
