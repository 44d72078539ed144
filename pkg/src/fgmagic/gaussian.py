"""Fermionic Gaussian states in the covariance-matrix representation.

Majorana convention (modes ``i = 1..L``, Jordan-Wigner strings implied)::

    gamma_{2i-1} = c_i + c_i^dag        <->  Z...Z X_i
    gamma_{2i}   = i (c_i^dag - c_i)    <->  Z...Z Y_i

and ``Gamma_{mu nu} = -(i/2) <[gamma_mu, gamma_nu]>``.  With it the vacuum
``|0...0>`` has ``Gamma_0 = (+) [[0, 1], [-1, 0]]`` and a filled mode flips
the sign of its block.  Arrays are 0-based, so ``gamma[2*i]`` and
``gamma[2*i + 1]`` belong to mode ``i``.
"""

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import entr

from . import linalg
from .errors import InputError

PURE_TOL = 1e-8
SPECTRAL_TOL = 1e-8
ISOMETRY_TOL = 1e-10
ORTHOGONAL_TOL = 1e-10

_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])
# Per-mode map from (c_i, c_i^dag) to (gamma_{2i-1}, gamma_{2i}).
_OMEGA_BLOCK = np.array([[1.0, 1.0], [-1j, 1j]])
_OMEGA_BLOCK_INV = 0.5 * np.array([[1.0, 1j], [1.0, -1j]])


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Real skew-symmetric ``2L x 2L`` covariance matrix of a Gaussian state.

    The array is copied and made read-only.  ``validate=False`` skips the
    skew-symmetry and spectral checks for trusted internal callers.
    """

    gamma: np.ndarray
    validate: bool = field(default=True, repr=False)
    is_pure: bool = field(init=False)

    def __post_init__(self):
        g = np.array(self.gamma, dtype=float, copy=True)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] % 2 or g.shape[0] == 0:
            raise InputError(f"covariance matrix must be 2L x 2L, got {g.shape}")
        if self.validate:
            linalg.check_skew(g)
            nu = linalg.skew_spectrum(g)
            if nu.max() > 1 + SPECTRAL_TOL:
                raise InputError(f"spectral bound violated: max nu = {nu.max():.3g}")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)
        resid = np.max(np.abs(g @ g + np.eye(g.shape[0])))
        object.__setattr__(self, "is_pure", bool(resid < PURE_TOL))

    @property
    def L(self):
        return self.gamma.shape[0] // 2

    def to_json(self):
        return json.dumps({"L": self.L, "gamma": self.gamma.ravel().tolist()})

    @classmethod
    def from_json(cls, text):
        """Inverse of :meth:`to_json`; refuses invalid matrices."""
        data = json.loads(text)
        L = int(data["L"])
        flat = np.asarray(data["gamma"], dtype=float)
        if L < 1 or flat.size != 4 * L * L:
            raise InputError("gamma must hold 2L*2L entries")
        return cls(flat.reshape(2 * L, 2 * L))


@dataclass(frozen=True, eq=False)
class OrbitalMatrix:
    """``L x N`` isometry whose columns are the occupied orbitals."""

    V: np.ndarray

    def __post_init__(self):
        V = np.array(self.V, dtype=complex, copy=True)
        if V.ndim != 2 or V.shape[1] > V.shape[0]:
            raise InputError(f"orbital matrix must be L x N with N <= L, got {V.shape}")
        if V.shape[1] and np.max(np.abs(V.conj().T @ V - np.eye(V.shape[1]))) > ISOMETRY_TOL:
            raise InputError("orbital matrix is not an isometry")
        V.setflags(write=False)
        object.__setattr__(self, "V", V)

    @property
    def L(self):
        return self.V.shape[0]

    @property
    def N(self):
        return self.V.shape[1]


class WickValue(NamedTuple):
    """``Tr(rho gamma^x) = i**phase * sign * exp(log_abs)``."""

    sign: float
    log_abs: float
    phase: int

    @property
    def value(self):
        if self.sign == 0:
            return 0j
        return (1j**self.phase) * self.sign * np.exp(self.log_abs)

    @property
    def squared(self):
        """``|Tr(rho gamma^x)|^2``, always real."""
        return 0.0 if self.sign == 0 else float(np.exp(2 * self.log_abs))


def as_covariance(cov):
    return cov if isinstance(cov, CovarianceMatrix) else CovarianceMatrix(cov)


def majorana_string(x, L):
    """Validate ``x`` as a 0/1 vector of length ``2L`` and return it as uint8."""
    x = np.asarray(x)
    if x.shape != (2 * L,) or np.any((x != 0) & (x != 1)):
        raise InputError(f"Majorana string must be a 0/1 vector of length {2 * L}")
    return x.astype(np.uint8)


def vacuum_covariance(L):
    if L < 1:
        raise InputError("L must be >= 1")
    return CovarianceMatrix(np.kron(np.eye(L), _BLOCK), validate=False)


def rotate(cov, O):
    """Covariance matrix ``O Gamma O^T`` after a Gaussian unitary."""
    cov = as_covariance(cov)
    O = np.asarray(O, dtype=float)
    n = 2 * cov.L
    if O.shape != (n, n):
        raise InputError(f"rotation must be {n} x {n}, got {O.shape}")
    if np.max(np.abs(O @ O.T - np.eye(n))) > ORTHOGONAL_TOL:
        raise InputError("rotation is not orthogonal")
    g = O @ cov.gamma @ O.T
    return CovarianceMatrix(0.5 * (g - g.T), validate=False)


def _omega(L):
    return np.kron(np.eye(L), _OMEGA_BLOCK)


def covariance_from_correlations(C, F=None):
    """Covariance matrix from ``C_ij = <c_i^dag c_j>`` and ``F_ij = <c_i c_j>``.

    The interleaved Nambu matrix ``K_ab = <cc_a cc_b>`` over
    ``cc = (c_1, c_1^dag, c_2, ...)`` gives ``<gamma gamma^T> = Omega K Omega^T``
    and ``Gamma = -i(<gamma gamma^T> - 1)``.
    """
    C = np.asarray(C, dtype=complex)
    L = C.shape[0]
    F = np.zeros_like(C) if F is None else np.asarray(F, dtype=complex)
    K = np.empty((2 * L, 2 * L), dtype=complex)
    K[0::2, 0::2] = F
    K[0::2, 1::2] = np.eye(L) - C.T
    K[1::2, 0::2] = C
    K[1::2, 1::2] = F.T.conj()
    Om = _omega(L)
    G = -1j * (Om @ K @ Om.T - np.eye(2 * L))
    if np.max(np.abs(G.imag), initial=0.0) > 1e-10:
        raise InputError("correlations do not describe a physical state")
    g = G.real
    return CovarianceMatrix(0.5 * (g - g.T))


def correlations_from_covariance(cov):
    """Inverse of :func:`covariance_from_correlations`: returns ``(C, F)``."""
    cov = as_covariance(cov)
    L = cov.L
    Oi = np.kron(np.eye(L), _OMEGA_BLOCK_INV)
    K = Oi @ (np.eye(2 * L) + 1j * cov.gamma) @ Oi.T
    return K[1::2, 0::2], K[0::2, 0::2]


def from_orbitals(V):
    """Covariance matrix of the Slater state built from the columns of ``V``."""
    if not isinstance(V, OrbitalMatrix):
        V = OrbitalMatrix(V)
    # <c_i^dag c_j> = sum_k conj(V_ik) V_jk
    C = V.V.conj() @ V.V.T
    return covariance_from_correlations(C)


def wick_expectation(cov, x):
    """``Tr(rho gamma^x)`` via the Pfaffian of the restriction ``Gamma|_x``."""
    cov = as_covariance(cov)
    x = majorana_string(x, cov.L)
    idx = np.flatnonzero(x)
    w = idx.size
    if w % 2:
        return WickValue(0.0, -np.inf, 0)
    pf = linalg.pfaffian(cov.gamma[np.ix_(idx, idx)], check=False)
    return WickValue(pf.sign, pf.log_abs, (w // 2) % 4)


def log_purity(cov):
    """``log(det(1 + Gamma) / 2^L)``; zero for pure states."""
    cov = as_covariance(cov)
    ld = linalg.log_det(np.eye(2 * cov.L) + cov.gamma)
    return ld.log_abs - cov.L * np.log(2.0)


def purity(cov):
    """``Tr(rho^2) = det(1 + Gamma) / 2^L``."""
    return float(np.exp(log_purity(cov)))


def entanglement_entropy(cov, l):
    """Von Neumann entropy (natural log) of the first ``l`` modes."""
    cov = as_covariance(cov)
    if not 1 <= l <= cov.L:
        raise InputError(f"region size must lie in [1, {cov.L}]")
    nu = np.clip(linalg.skew_spectrum(cov.gamma[: 2 * l, : 2 * l]), 0.0, 1.0)
    p = 0.5 * (1.0 + nu)
    return float(np.sum(entr(p) + entr(1.0 - p)))


def parity_expectation(cov):
    """``<Z_1 ... Z_L> = (-i)^L Tr(rho gamma_1 ... gamma_2L) = Pf(Gamma)``."""
    cov = as_covariance(cov)
    w = wick_expectation(cov, np.ones(2 * cov.L, dtype=np.uint8))
    return float(((-1j) ** cov.L * w.value).real)


def particle_number(cov):
    """``sum_i <c_i^dag c_i>``."""
    C, _ = correlations_from_covariance(cov)
    return float(np.trace(C).real)
