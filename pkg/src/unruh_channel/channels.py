"""Qubit channels in Kraus form: construction, composition and Choi conversion.

The Choi matrix is kept unnormalized, ``J = sum_ij |i><j| (x) E(|i><j|)``,
so it has trace 2 for a trace-preserving qubit map. With this ordering a
Kraus operator ``K`` corresponds to the vector ``v[2 i + a] = K[a, i]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numkit import I2, SZ, as_matrix, dag, herm_eig, kron
from .relparams import QndBathParams, SgadBathParams, qnd_damping, sgad_coeffs

RANK_TOL = 1e-10
CP_TOL = 1e-8
COMPOSE_TOL = 1e-15


class NotCompletelyPositiveError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    """A qubit map ``rho -> sum_k K_k rho K_k^H``.

    Construction only checks shapes. Completeness is guaranteed by the
    constructors in this module and tested with :func:`is_cptp`, so a
    deliberately broken operator set can still be represented.
    """

    ops: tuple

    def __init__(self, ops: Sequence):
        mats = tuple(as_matrix(k, dims=(2,)) for k in ops)
        if not 1 <= len(mats) <= 4:
            raise ValueError(f"a qubit channel needs 1 to 4 Kraus operators, got {len(mats)}")
        object.__setattr__(self, "ops", mats)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def completeness_residual(self) -> float:
        s = sum(dag(k) @ k for k in self.ops)
        return float(np.linalg.norm(s - I2))


IDENTITY = KrausChannel([I2])


def unruh_channel(r: float) -> KrausChannel:
    """Unruh channel with mixing angle ``r`` in [0, pi/4]."""
    if not 0.0 <= r <= math.pi / 4 + 1e-15:
        raise ValueError(f"r={r} outside [0, pi/4]")
    k1 = np.diag([math.cos(r), 1.0]).astype(complex)
    k2 = np.array([[0, 0], [math.sin(r), 0]], dtype=complex)
    return KrausChannel([k1, k2])


def amplitude_damping(lam: float) -> KrausChannel:
    """Amplitude damping that drains ``|0>`` into ``|1>`` with probability ``lam``.

    Same operator layout as the Unruh channel, so
    ``amplitude_damping(sin(r)**2)`` and ``unruh_channel(r)`` coincide.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"damping {lam} outside [0, 1]")
    k1 = np.diag([math.sqrt(1 - lam), 1.0]).astype(complex)
    k2 = np.array([[0, 0], [math.sqrt(lam), 0]], dtype=complex)
    return KrausChannel([k1, k2])


def dephasing(p: float) -> KrausChannel:
    """``sqrt(p) I`` and ``sqrt(1-p) Z``; ``p = 1`` is the identity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return KrausChannel([math.sqrt(p) * I2, math.sqrt(1 - p) * SZ])


def qnd_channel(bath: QndBathParams, t: float) -> KrausChannel:
    q = qnd_damping(bath, t)
    ph = np.exp(1j * bath.omega0 * t)
    k1 = math.sqrt((1 - q) / 2) * np.diag([ph, -1.0])
    k2 = math.sqrt((1 + q) / 2) * np.diag([ph, 1.0])
    return KrausChannel([k1, k2])


def sgad_channel(bath: SgadBathParams, t: float) -> KrausChannel:
    c = sgad_coeffs(bath, t)
    sp1, sp2 = math.sqrt(c.p1), math.sqrt(c.p2)
    k1 = sp1 * np.diag([math.sqrt(1 - c.alpha), 1.0])
    k2 = sp1 * np.array([[0, 0], [math.sqrt(c.alpha), 0]])
    k3 = sp2 * np.diag([math.sqrt(1 - c.mu), math.sqrt(1 - c.nu)])
    k4 = sp2 * np.array([[0, math.sqrt(c.nu)], [math.sqrt(c.mu) * np.exp(-1j * bath.squeeze_phi), 0]])
    return KrausChannel([k1, k2, k3, k4])


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = as_matrix(rho, dims=(2,))
    return sum(k @ rho @ dag(k) for k in ch.ops)


def extend_second(ch: KrausChannel) -> list[np.ndarray]:
    """Kraus set ``{I (x) K}`` acting on the second qubit of a pair."""
    return [kron(I2, k) for k in ch.ops]


def apply_second(ch: KrausChannel, rho) -> np.ndarray:
    rho = as_matrix(rho, dims=(4,))
    return sum(k @ rho @ dag(k) for k in extend_second(ch))


def _choi_of(ops) -> np.ndarray:
    c = np.zeros((4, 4), dtype=complex)
    for k in ops:
        v = k.T.reshape(4)
        c += np.outer(v, v.conj())
    return c


def choi(ch: KrausChannel) -> np.ndarray:
    return _choi_of(ch.ops)


def kraus_from_choi(c, tol: float = RANK_TOL) -> KrausChannel:
    """Canonical Kraus set: one operator per Choi eigenvalue above ``tol``.

    Raises NotCompletelyPositiveError for eigenvalues below ``-1e-8``.
    """
    res = herm_eig(as_matrix(c, dims=(4,)))
    if res.eigenvalues[-1] < -CP_TOL:
        raise NotCompletelyPositiveError(
            f"not completely positive: Choi eigenvalue {res.eigenvalues[-1]:.3e}"
        )
    ops = [
        math.sqrt(lam) * res.eigenvectors[:, i].reshape(2, 2).T
        for i, lam in enumerate(res.eigenvalues)
        if lam > tol
    ]
    if not ops:
        raise NotCompletelyPositiveError("Choi matrix has no eigenvalue above tolerance")
    return KrausChannel(ops)


def choi_rank(ch: KrausChannel, tol: float = RANK_TOL) -> int:
    return int(np.sum(herm_eig(choi(ch)).eigenvalues > tol))


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """``second`` after ``first``, re-expressed in the Choi eigenbasis.

    Only numerically zero weights are dropped, so completeness is kept to
    machine precision; use :func:`choi_rank` for the Kraus rank.
    """
    return kraus_from_choi(_choi_of([b @ a for b in second.ops for a in first.ops]), tol=COMPOSE_TOL)


def is_cptp(ch: KrausChannel, tol: float = 1e-10) -> bool:
    if ch.completeness_residual() >= tol:
        return False
    return bool(herm_eig(choi(ch)).eigenvalues[-1] >= -tol)
