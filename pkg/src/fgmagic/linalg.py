"""Dense kernels: log-domain determinants, Pfaffians, Haar sampling, skew spectra.

Determinants and Pfaffians are always returned as ``(sign, log_abs)`` pairs.
Probabilities elsewhere in the package are ratios of such quantities and are
never formed from raw determinants, which overflow for a few hundred modes.
"""

from typing import NamedTuple

import numpy as np

from .errors import InputError

SKEW_TOL = 1e-10


class SignedLogDet(NamedTuple):
    """``value == sign * exp(log_abs)``; ``sign == 0`` marks an exact zero.

    For complex input ``sign`` is a unit-modulus phase.
    """

    sign: complex | float
    log_abs: float

    @property
    def value(self):
        if self.sign == 0:
            return 0.0 * self.sign
        return self.sign * np.exp(self.log_abs)


def _as_square(M):
    M = np.asarray(M)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return M


def check_skew(A, tol=SKEW_TOL):
    """Raise :class:`InputError` unless ``max|A + A^T| <= tol``."""
    A = _as_square(A)
    if A.size and np.max(np.abs(A + np.swapaxes(A, -1, -2))) > tol:
        raise InputError("matrix is not skew-symmetric within tolerance")
    return A


def log_det(M):
    """Sign and log-modulus of ``det(M)`` from a partially pivoted LU.

    Accepts a single matrix or a stack ``(..., n, n)``; for a stack the two
    fields are arrays.  An exactly vanishing pivot gives ``sign == 0`` and
    ``log_abs == -inf``.
    """
    M = _as_square(M)
    if M.shape[-1] == 0:
        shape = M.shape[:-2]
        if shape:
            return SignedLogDet(np.ones(shape, dtype=M.dtype), np.zeros(shape))
        return SignedLogDet(1.0, 0.0)
    sign, logabs = np.linalg.slogdet(M)
    if M.ndim == 2:
        return SignedLogDet(sign.item(), float(logabs))
    return SignedLogDet(sign, logabs)


def pfaffian(A, check=True):
    """Pfaffian of a skew-symmetric matrix in ``(sign, log_abs)`` form.

    Parlett-Reid reduction to tridiagonal form with partial pivoting, O(n^3).
    Odd dimension returns an exact zero; the empty matrix has Pfaffian 1.
    """
    A = np.asarray(A)
    if check:
        check_skew(A)
    n = A.shape[0]
    if n == 0:
        return SignedLogDet(1.0, 0.0)
    if n % 2:
        return SignedLogDet(0.0, -np.inf)

    A = A.astype(np.result_type(A.dtype, np.float64), copy=True)
    sign = 1.0
    log_abs = 0.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            sign = -sign
        pivot = A[k, k + 1]
        if pivot == 0:
            return SignedLogDet(0.0, -np.inf)
        log_abs += np.log(np.abs(pivot))
        sign = sign * pivot / np.abs(pivot)
        if k + 2 < n:
            tau = A[k, k + 2:] / pivot
            col = A[k + 2:, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    if np.isrealobj(A):
        sign = float(np.real(sign))
    return SignedLogDet(sign, float(log_abs))


def haar_orthogonal(n, rng, special=False, size=None):
    """Haar-distributed ``n x n`` orthogonal matrix (QR with sign fix).

    Samples the full group O(n).  ``special=True`` flips the first column
    when needed so that ``det == +1``.  ``size`` draws a stack.
    """
    if n < 1:
        raise InputError("n must be >= 1")
    shape = (n, n) if size is None else (size, n, n)
    Z = rng.standard_normal(shape)
    Q, R = np.linalg.qr(Z)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    Q = Q * d[..., None, :]
    if special:
        flip = np.linalg.det(Q) < 0
        Q[..., :, 0] = np.where(flip[..., None], -Q[..., :, 0], Q[..., :, 0])
    return Q


def haar_unitary(n, rng, size=None):
    """Haar-distributed ``n x n`` unitary matrix (complex Ginibre + QR)."""
    if n < 1:
        raise InputError("n must be >= 1")
    shape = (n, n) if size is None else (size, n, n)
    Z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    mag = np.abs(d)
    phase = np.where(mag > 0, d / np.where(mag > 0, mag, 1.0), 1.0)
    return Q * phase[..., None, :]


def skew_spectrum(A):
    """Nonnegative ``nu_j`` with ``eig(A) = {+-i nu_j}``, largest first.

    ``iA`` is Hermitian, so its real spectrum comes from a Hermitian
    tridiagonal eigensolver; the upper half of it is the list of ``nu_j``.
    """
    A = check_skew(A)
    if np.iscomplexobj(A):
        raise InputError("skew_spectrum expects a real matrix")
    n = A.shape[0]
    if n % 2:
        raise InputError("skew_spectrum expects an even dimension")
    w = np.linalg.eigvalsh(1j * A)
    nu = w[::-1][: n // 2]
    return np.clip(nu, 0.0, None)
