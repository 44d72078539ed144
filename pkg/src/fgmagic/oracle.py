"""Brute-force reference on the full ``2^L`` statevector.

Nothing here touches Pfaffians or covariance matrices: Majorana operators are
applied to amplitude vectors through their Jordan-Wigner strings::

    gamma_{2i-1} = Z_1 ... Z_{i-1} X_i
    gamma_{2i}   = Z_1 ... Z_{i-1} Y_i

Qubit 1 is the most significant bit of a basis index, so ``|z_1 ... z_L>``
sits at ``sum_i z_i 2^(L-i)``; ``|1>`` is an occupied mode.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import hadamard
from scipy.special import logsumexp, xlogy

from .errors import InputError, NumericalFailure

MAX_ROTATION_MODES = 12
MAX_ORBITAL_MODES = 20
MAX_PAULI_MODES = 7
NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DenseState:
    L: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex, copy=True)
        if a.shape != (2**self.L,):
            raise InputError(f"need {2**self.L} amplitudes, got {a.shape}")
        if abs(np.linalg.norm(a) - 1.0) > NORM_TOL:
            raise InputError("state is not normalised")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)


def vacuum_state(L):
    psi = np.zeros(2**L, dtype=complex)
    psi[0] = 1.0
    return DenseState(L, psi)


def _mode_bit(i, L):
    return 1 << (L - 1 - i)


def _parity(v):
    """``(-1)^popcount(v)`` elementwise for nonnegative integer arrays."""
    v = v.copy()
    p = np.zeros(v.shape, dtype=np.int64)
    while np.any(v):
        p ^= v & 1
        v >>= 1
    return 1 - 2 * p


def apply_majorana(psi, mu, L):
    """``gamma_{mu+1} psi`` for a 0-based Majorana index ``mu``."""
    i = mu // 2
    b = np.arange(2**L)
    bit = _mode_bit(i, L)
    lower = sum(_mode_bit(j, L) for j in range(i))  # modes before i
    factor = _parity(b & lower).astype(complex)
    if mu % 2:
        # Y|0> = i|1>, Y|1> = -i|0>
        factor *= np.where(b & bit, -1j, 1j)
    out = np.empty_like(psi)
    out[b ^ bit] = factor * psi
    return out


def _apply_pair_rotation(psi, p, q, theta, L):
    """``exp(theta/2 gamma_p gamma_q) psi``; ``(gamma_p gamma_q)^2 = -1``."""
    gg = apply_majorana(apply_majorana(psi, q, L), p, L)
    return math.cos(theta / 2) * psi + math.sin(theta / 2) * gg


def givens_angles(O):
    """Reduce ``O`` in SO(n) to the identity with Givens rotations.

    Returns ``[(p, q, theta), ...]`` in application order: rotating rows
    ``p, q`` by ``[[c, s], [-s, c]]`` with ``(c, s) = (cos theta, sin theta)``
    zeroes entry ``(q, p)``.  Together ``G_K ... G_1 O = 1``.
    """
    A = np.array(O, dtype=float, copy=True)
    n = A.shape[0]
    steps = []
    for j in range(n - 1):
        for q in range(j + 1, n):
            a, b = A[j, j], A[q, j]
            if b == 0.0 and a >= 0.0:
                continue
            theta = math.atan2(b, a)
            c, s = math.cos(theta), math.sin(theta)
            rj, rq = A[j].copy(), A[q].copy()
            A[j] = c * rj + s * rq
            A[q] = -s * rj + c * rq
            steps.append((j, q, theta))
    return steps


def statevector_from_rotation(O, L):
    """``U|0...0>`` for the Gaussian unitary with ``U^dag gamma U = O gamma``.

    ``exp(theta/2 gamma_p gamma_q)`` implements the plane rotation with
    ``O_pp = cos theta`` and ``O_pq = sin theta``.  Writing
    ``O = G_1^T ... G_K^T`` from :func:`givens_angles`, the state is
    ``W(G_1^T) ... W(G_K^T)|0>``.
    """
    O = np.asarray(O, dtype=float)
    if L > MAX_ROTATION_MODES:
        raise InputError(f"dense rotation limited to L <= {MAX_ROTATION_MODES}")
    if O.shape != (2 * L, 2 * L):
        raise InputError(f"rotation must be {2 * L} x {2 * L}")
    if np.max(np.abs(O @ O.T - np.eye(2 * L))) > 1e-10:
        raise InputError("rotation is not orthogonal")
    if np.linalg.det(O) < 0:
        raise InputError("rotation has det -1; only SO(2L) acts on the even sector")
    psi = vacuum_state(L).amplitudes.copy()
    for p, q, theta in reversed(givens_angles(O)):
        psi = _apply_pair_rotation(psi, p, q, -theta, L)
    return DenseState(L, psi)


def statevector_from_orbitals(V):
    """Slater state ``prod_k (sum_i V_ik c_i^dag)|0>`` with amplitudes ``det V|_z``."""
    V = np.asarray(V, dtype=complex)
    L, N = V.shape
    if L > MAX_ORBITAL_MODES:
        raise InputError(f"dense Slater state limited to L <= {MAX_ORBITAL_MODES}")
    if N and np.max(np.abs(V.conj().T @ V - np.eye(N))) > 1e-10:
        raise InputError("orbital matrix is not an isometry")
    psi = np.zeros(2**L, dtype=complex)
    for rows in combinations(range(L), N):
        idx = sum(_mode_bit(i, L) for i in rows)
        psi[idx] = np.linalg.det(V[list(rows)]) if N else 1.0
    return DenseState(L, psi)


def dense_covariance(state):
    """``Gamma_{mu nu} = -i <gamma_mu gamma_nu>`` (``mu != nu``) by direct expectation."""
    L, psi = state.L, state.amplitudes
    n = 2 * L
    g_psi = [apply_majorana(psi, mu, L) for mu in range(n)]
    G = np.zeros((n, n))
    for mu in range(n):
        for nu in range(n):
            if mu != nu:
                # <psi|g_mu g_nu|psi> = (g_mu psi)^dag (g_nu psi)
                G[mu, nu] = (-1j * np.vdot(g_psi[mu], g_psi[nu])).real
    return G


def dense_correlations(state):
    """``C_ij = <c_i^dag c_j>`` and ``F_ij = <c_i c_j>`` from the amplitudes."""
    L, psi = state.L, state.amplitudes
    # c_i = (gamma_{2i-1} + i gamma_{2i}) / 2
    c_psi = [0.5 * (apply_majorana(psi, 2 * i, L) + 1j * apply_majorana(psi, 2 * i + 1, L)) for i in range(L)]
    C = np.array([[np.vdot(c_psi[i], c_psi[j]) for j in range(L)] for i in range(L)])
    cc_psi = [[0.5 * (apply_majorana(c_psi[j], 2 * i, L) + 1j * apply_majorana(c_psi[j], 2 * i + 1, L))
               for j in range(L)] for i in range(L)]
    F = np.array([[np.vdot(psi, cc_psi[i][j]) for j in range(L)] for i in range(L)])
    return C, F


def pauli_of_majorana(x, L):
    """Index ``xmask * 2^L + zmask`` of the Pauli string proportional to ``gamma^x``."""
    xm = zm = 0
    for mu in np.flatnonzero(np.asarray(x)):
        i = mu // 2
        lower = sum(_mode_bit(j, L) for j in range(i))
        zm ^= lower
        xm ^= _mode_bit(i, L)
        if mu % 2:
            zm ^= _mode_bit(i, L)
    return (xm << L) | zm


def pauli_expectations(state):
    """``<psi|X^x Z^z|psi>`` for all masks, shape ``(2^L, 2^L)`` indexed ``[x, z]``.

    Hermitian Pauli strings differ from ``X^x Z^z`` by a phase ``i^(#Y)``,
    which drops out of squared magnitudes.
    """
    L, psi = state.L, state.amplitudes
    D = 2**L
    b = np.arange(D)
    H = hadamard(D)  # H[z, b] = (-1)^popcount(z & b)
    out = np.empty((D, D), dtype=complex)
    for xm in range(D):
        out[xm] = H @ (psi[b ^ xm].conj() * psi)
    return out


def exact_characteristic_distribution(state):
    """``|<P>|^2 / D`` over all ``4^L`` Pauli strings, indexed as in :func:`pauli_of_majorana`."""
    if state.L > MAX_PAULI_MODES:
        raise InputError(f"Pauli enumeration limited to L <= {MAX_PAULI_MODES}")
    pi = (np.abs(pauli_expectations(state)) ** 2).ravel() / 2**state.L
    total = math.fsum(pi)
    if abs(total - 1.0) > 1e-8:
        raise NumericalFailure(f"Pauli distribution sums to {total!r}", module="oracle")
    return pi


def oracle_sre(state, alpha):
    """``(M_alpha, Mt_alpha)`` from the enumerated Pauli distribution."""
    L = state.L
    pi = exact_characteristic_distribution(state)
    log_D = L * math.log(2.0)

    def entropy(p):
        if alpha == 1:
            return float(-np.sum(xlogy(p, p)))
        return float(logsumexp(alpha * np.log(p[p > 0])) / (1.0 - alpha))

    m_full = entropy(pi) - log_D
    if L < 2:
        return m_full, float("nan")
    pt = pi.copy()
    pt[[0, 2**L - 1]] = 0.0  # identity and Z...Z
    pt /= math.fsum(pt)
    return m_full, entropy(pt) - math.log(2.0**L - 2.0)
