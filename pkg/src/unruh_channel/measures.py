"""Correlation, entanglement and coherence quantifiers for the shared pair.

Entropic quantities are in bits. Two-qubit states are ordered
``|Alice, Rob>``; the noisy channels always act on the second factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, apply_second, unruh_channel
from .numkit import (
    I2,
    PAULIS,
    SY,
    as_matrix,
    eigvals_general,
    entropy_of_spectrum,
    herm_eig,
    herm_eigvals,
    kron,
    partial_trace,
)

DEGENERACY_TOL = 1e-10
MCMS_TOL = 1e-9
# density-matrix eigenvalues below this are rounding noise
RANK_FLOOR = 1e-14

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
PHI_PLUS_DM = np.outer(PHI_PLUS, PHI_PLUS.conj())


@dataclass(frozen=True)
class MeasureReport:
    B: float
    C: float
    F_max: float
    M: float


def bell_pair_through(ch: KrausChannel) -> np.ndarray:
    """State of the pair after ``ch`` acts on Rob's half of ``|Phi+>``."""
    return apply_second(ch, PHI_PLUS_DM)


def rho_u(r: float) -> np.ndarray:
    """Maximally entangled pair with the second mode Unruh accelerated."""
    if not 0.0 <= r <= math.pi / 4 + 1e-15:
        raise ValueError(f"r={r} outside [0, pi/4]")
    c, s = math.cos(r), math.sin(r)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = c * c
    m[1, 1] = s * s
    m[3, 3] = 1.0
    m[0, 3] = m[3, 0] = c
    return 0.5 * m


def pure_qubit(theta: float, phi: float) -> np.ndarray:
    """``|psi><psi|`` for ``|psi> = cos(theta/2)|0> + e^{-i phi} sin(theta/2)|1>``."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    off = np.exp(1j * phi) * c * s
    return np.array([[c * c, off], [np.conj(off), s * s]], dtype=complex)


def correlation_matrix(rho) -> np.ndarray:
    """Real 3x3 matrix ``T_ij = Tr[rho (sigma_i (x) sigma_j)]``."""
    rho = as_matrix(rho, dims=(4,))
    return np.array([[np.trace(rho @ kron(a, b)).real for b in PAULIS] for a in PAULIS])


def _tt_spectrum(rho) -> np.ndarray:
    t = correlation_matrix(rho)
    # symmetric real 3x3: LAPACK is fine here, nothing downstream is rank-sensitive
    return np.sort(np.linalg.eigvalsh(t.T @ t))[::-1]


def bell_B(rho) -> float:
    """Horodecki quantity: sum of the two largest eigenvalues of ``T^T T``.

    CHSH is violated iff the value exceeds 1; ``|Phi+>`` gives 2.
    """
    u = _tt_spectrum(rho)
    return float(u[0] + u[1])


def f_max(rho) -> float:
    """Optimal teleportation fidelity ``(1 + ||T||_tr / 3) / 2``."""
    sv = np.linalg.svd(correlation_matrix(rho), compute_uv=False)
    return float(0.5 * (1 + np.sum(sv) / 3))


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of ``rho rho~``.
    They are computed as singular values of ``A^T (Y (x) Y) A`` with
    ``rho = A A^H``, which avoids taking square roots of eigenvalues that are
    zero up to rounding (an error of 1e-16 there would become 1e-8).
    """
    rho = as_matrix(rho, dims=(4,))
    res = herm_eig(rho)
    keep = res.eigenvalues > RANK_FLOOR
    a = res.eigenvectors[:, keep] * np.sqrt(res.eigenvalues[keep])
    lam = np.zeros(4)
    if a.shape[1]:
        sv = np.linalg.svd(a.T @ kron(SY, SY) @ a, compute_uv=False)
        lam[: sv.size] = np.sort(sv)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_spectral(rho) -> float:
    """Concurrence from the general eigenvalues of ``rho rho~`` (reference path)."""
    rho = as_matrix(rho, dims=(4,))
    yy = kron(SY, SY)
    w = eigvals_general(rho @ yy @ rho.conj() @ yy)
    lam = np.sort(np.sqrt(np.clip(w.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def _entropy(m) -> float:
    return entropy_of_spectrum(herm_eigvals(m))


def mutual_information(rho) -> float:
    return (
        _entropy(partial_trace(rho, "second"))
        + _entropy(partial_trace(rho, "first"))
        - _entropy(rho)
    )


def _bloch_parts(rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors of both qubits and the correlation matrix."""
    a = np.array([np.trace(rho @ kron(p, I2)).real for p in PAULIS])
    b = np.array([np.trace(rho @ kron(I2, p)).real for p in PAULIS])
    return a, b, correlation_matrix(rho)


def _unit_or_none(v: np.ndarray) -> np.ndarray | None:
    n = np.linalg.norm(v)
    return v / n if n > DEGENERACY_TOL else None


def measurement_axes(rho) -> tuple[np.ndarray, np.ndarray]:
    """Bloch axes of the local projective measurements used by :func:`mid`.

    A qubit with a non-degenerate marginal is measured along its own Bloch
    vector, i.e. in the eigenbasis of its reduced state. For a degenerate
    marginal every basis is an eigenbasis; the one that disturbs the state
    least is taken, which is the axis most correlated with the partner's
    axis (or the leading singular pair of ``T`` when both are degenerate).
    The computational basis is the fallback when no axis is preferred.
    """
    a, b, t = _bloch_parts(as_matrix(rho, dims=(4,)))
    z = np.array([0.0, 0.0, 1.0])
    ua, ub = _unit_or_none(a), _unit_or_none(b)
    if ua is None and ub is None:
        u, sv, vt = np.linalg.svd(t)
        if sv[0] <= DEGENERACY_TOL:
            return z, z
        tz = t @ z
        if np.linalg.norm(tz) >= sv[0] - DEGENERACY_TOL:
            # measuring Rob along z is already optimal; keep the computational basis
            return tz / np.linalg.norm(tz), z
        return u[:, 0], vt[0]
    if ua is None:
        w = _unit_or_none(t @ ub)
        return (z if w is None else w), ub
    if ub is None:
        w = _unit_or_none(t.T @ ua)
        return ua, (z if w is None else w)
    return ua, ub


def _shannon(p: np.ndarray) -> float:
    return entropy_of_spectrum(p.ravel())


def mid(rho) -> float:
    """Measurement-induced disturbance.

    Mutual information minus the classical mutual information left after
    both qubits are measured in eigenbases of their reduced states; see
    :func:`measurement_axes` for degenerate marginals.
    """
    rho = as_matrix(rho, dims=(4,))
    a, b, t = _bloch_parts(rho)
    ua, ub = measurement_axes(rho)
    signs = np.array([1.0, -1.0])
    # p(i, j) = Tr[rho P_i (x) Q_j] with P_+- = (I +- ua.sigma)/2
    p = 0.25 * (
        1
        + signs[:, None] * (ua @ a)
        + signs[None, :] * (ub @ b)
        + np.outer(signs, signs) * (ua @ t @ ub)
    )
    p = np.clip(p, 0.0, None)
    classical = _shannon(p.sum(axis=1)) + _shannon(p.sum(axis=0)) - _shannon(p)
    return float(mutual_information(rho) - classical)


def measure_report(rho) -> MeasureReport:
    return MeasureReport(B=bell_B(rho), C=concurrence(rho), F_max=f_max(rho), M=mid(rho))


def coherence_l1(rho) -> float:
    rho = as_matrix(rho, dims=(2,))
    return float(2 * abs(rho[0, 1]))


def mixedness(rho) -> float:
    """Normalized linear entropy ``2 (1 - Tr rho^2)`` of a qubit."""
    rho = as_matrix(rho, dims=(2,))
    return float(2 * (1 - np.trace(rho @ rho).real))


def cm_slack(rho) -> float:
    """``1 - C^2 - M``; zero for maximally coherent mixed states."""
    return 1.0 - coherence_l1(rho) ** 2 - mixedness(rho)


def is_mcms(rho, tol: float = MCMS_TOL) -> bool:
    return cm_slack(rho) < tol


# Closed forms for the pure Unruh pair, used as cross-checks of the generic routines.

def unruh_bell_closed(r: float) -> float:
    return 2 * math.cos(r) ** 2


def unruh_fmax_closed(r: float) -> float:
    c = math.cos(r)
    return 0.5 * (1 + c / 3 * (2 + c))


def qnd_fmax_closed(r: float, damping: float) -> float:
    """Teleportation fidelity of the Unruh pair after QND dephasing with
    off-diagonal damping factor ``damping`` on Rob's side."""
    c = math.cos(r)
    return 0.5 * (1 + c / 3 * (2 * damping + c))


def qnd_bell_closed(r: float, damping_sq: float) -> float:
    """``2 D cos^2 r`` with ``D`` the squared off-diagonal damping factor."""
    return 2 * damping_sq * math.cos(r) ** 2


def _xlog2x(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


def qnd_mid_closed(r: float, damping_sq: float, eighth: bool = False) -> float:
    """MID of the Unruh pair after QND noise in closed form.

    ``damping_sq`` is the squared off-diagonal damping factor. With
    ``eighth=True`` the two ``x log x`` terms carry an extra factor 1/8, which is
    the literal printed expression; it only agrees with the direct evaluation
    at ``r = 0``.
    """
    c2 = math.cos(r) ** 2
    root = math.sqrt(4 * damping_sq * c2 + math.sin(r) ** 4)
    lo = (3 + math.cos(2 * r) - 2 * root) / 8
    hi = (3 + math.cos(2 * r) + 2 * root) / 8
    w = 1 / 8 if eighth else 1.0
    return 0.5 + w * (_xlog2x(lo) + _xlog2x(hi)) - 0.5 * c2 * math.log2(c2 / 2)


def pure_unruh_report(r: float) -> MeasureReport:
    return measure_report(bell_pair_through(unruh_channel(r)))
