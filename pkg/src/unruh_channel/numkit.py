"""Small dense complex linear algebra for one- and two-qubit matrices.

Everything here works on numpy arrays of shape (2, 2) or (4, 4). The
Hermitian eigensolver is written out by hand (closed form for 2x2, cyclic
Jacobi for 4x4) so that rank decisions on Choi matrices do not depend on
which LAPACK build is installed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 60

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)


class DimensionError(ValueError):
    """Raised when a matrix does not have the shape an operation needs."""


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class HermEigResult:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m, dims=(2, 4)) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise DimensionError(f"expected a square matrix of size {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices, ``out[2i+k, 2j+l] = a[i,j] b[k,l]``."""
    a = as_matrix(a, dims=(2,))
    b = as_matrix(b, dims=(2,))
    return np.kron(a, b)


def partial_trace(m, subsystem: Literal["first", "second"]) -> np.ndarray:
    """Trace out one factor of a two-qubit operator.

    ``subsystem`` names the factor that is removed, so
    ``partial_trace(kron(rho, sigma), "second") == rho * trace(sigma)``.
    """
    m = as_matrix(m, dims=(4,))
    t = m.reshape(2, 2, 2, 2)
    if subsystem == "first":
        return np.einsum("ijik->jk", t)
    if subsystem == "second":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.linalg.norm(m - dag(m)) < tol)


def _eig2(m: np.ndarray) -> HermEigResult:
    peak = float(np.max(np.abs(m)))
    if peak == 0.0:
        return HermEigResult(np.zeros(2), np.eye(2, dtype=complex))
    # work at unit scale (an exact power of two) so tiny entries cannot underflow
    e = math.frexp(peak)[1]
    m = np.ldexp(m.real, -e) + 1j * np.ldexp(m.imag, -e)
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    half = 0.5 * (a - d)
    rad = np.hypot(half, abs(b))
    lam = np.array([mean + rad, mean - rad])
    if abs(b) <= 1e-300:
        vecs = np.eye(2, dtype=complex) if a >= d else np.array([[0, 1], [1, 0]], dtype=complex)
        return HermEigResult(np.ldexp(lam, e), vecs)
    cols = []
    for l in lam:
        # two algebraically equivalent null vectors of (m - l I); keep the better conditioned one
        u = np.array([b, l - a], dtype=complex)
        w = np.array([l - d, np.conj(b)], dtype=complex)
        v = u if np.linalg.norm(u) >= np.linalg.norm(w) else w
        cols.append(v / np.linalg.norm(v))
    return HermEigResult(np.ldexp(lam, e), np.column_stack(cols))


def _jacobi(m: np.ndarray) -> HermEigResult:
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, np.linalg.norm(a))
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < JACOBI_TOL * scale:
            break
        for p, q in pairs:
            apq = a[p, q]
            mag = abs(apq)
            if mag < 1e-300:
                continue
            # G = diag(1, e^{-i arg}) . R reduces the (p, q) block to the real symmetric case
            phase = apq / mag
            theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
            if abs(theta) > 1e150:
                t = 0.5 / theta
            else:
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
            idx = [p, q]
            a[:, idx] = a[:, idx] @ g
            a[idx, :] = dag(g) @ a[idx, :]
            v[:, idx] = v[:, idx] @ g
            a[p, q] = a[q, p] = 0.0
    lam = np.real(np.diag(a))
    order = np.argsort(-lam, kind="stable")
    return HermEigResult(lam[order], v[:, order])


def herm_eig(m) -> HermEigResult:
    """Eigendecomposition of a Hermitian 2x2 or 4x4 matrix.

    Raises NotHermitianError when ``||m - m^H||_F >= 1e-10``.
    """
    m = as_matrix(m)
    if not is_hermitian(m):
        raise NotHermitianError("matrix is not Hermitian within 1e-10")
    m = 0.5 * (m + dag(m))
    if m.shape[0] == 2:
        return _eig2(m)
    return _jacobi(m)


def herm_eigvals(m) -> np.ndarray:
    return herm_eig(m).eigenvalues


def eigvals_general(m) -> np.ndarray:
    """All four eigenvalues of a general 4x4 matrix, sorted by descending real part."""
    m = as_matrix(m, dims=(4,))
    w = np.linalg.eigvals(m)
    return w[np.argsort(-w.real, kind="stable")]


def check_density(rho, tol: float = PSD_TOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = as_matrix(rho)
    if not is_hermitian(rho, tol):
        raise NotHermitianError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lam = herm_eigvals(rho)
    if lam[-1] < -tol:
        raise ValueError(f"density matrix has eigenvalue {lam[-1]:.3e} < -{tol}")
    return rho


def entropy_of_spectrum(lam) -> float:
    p = np.clip(np.asarray(lam, dtype=float), 0.0, 1.0)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def vn_entropy(rho) -> float:
    """Von Neumann entropy in bits."""
    return entropy_of_spectrum(herm_eigvals(check_density(rho)))
