"""Stabilizer Renyi entropies and participation entropies.

Sample-based estimators work from Majorana samples and their recorded
log-probabilities; exact counterparts enumerate all ``4^L`` strings (or all
Fock configurations of a particle-number sector) and serve as references at
small sizes.  Everything is natural-log based.

For a pure state the identity and parity strings (all zeros and all ones)
always carry probability ``1/D``; the filtered entropy drops them::

    Mt_alpha = log(sum_x pt(x) pi(x)^(alpha-1)) / (1 - alpha) - log D

with ``pt = pi * D / (D - 2)`` away from the two trivial strings.
"""

import json
import math
from dataclasses import asdict, dataclass
from itertools import combinations

import numpy as np
from scipy.special import logsumexp, xlogy

from . import linalg
from .errors import InputError, InsufficientSamples, NumericalFailure
from .gaussian import OrbitalMatrix, as_covariance, log_purity, wick_expectation
from .sampler import samples_to_arrays

MAX_EXACT_MODES = 10
MAX_SECTOR = 2_000_000


@dataclass(frozen=True)
class SreEstimate:
    alpha: float
    m_alpha: float
    m_alpha_filtered: float
    stderr: float
    n_used: int
    n_total: int
    L: int
    seed: int | None = None
    parity_filtered: bool = True

    def to_dict(self):
        d = asdict(self)
        del d["parity_filtered"]
        return d

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ParticipationResult:
    alpha: float
    s_alpha: float
    ipr: float


def _shifted_mean(a):
    # exact for constant input
    top = np.max(a)
    return top + np.mean(a - top)


def log_mean_exp(a):
    """``log(mean(exp(a)))`` with the max-shift trick; exact for constant ``a``."""
    a = np.asarray(a, dtype=float)
    top = np.max(a)
    return top + np.log(np.mean(np.exp(a - top)))


def _trivial_mask(x):
    w = x.sum(axis=1)
    return (w == 0) | (w == x.shape[1])


def sre_estimate(samples, alpha, L, pure=True, log_purity=0.0, seed=None, error="delta"):
    """Estimate ``M_alpha`` and the filtered ``Mt_alpha`` from Majorana samples.

    ``samples`` is a list of :class:`~fgmagic.sampler.MajoranaSample` or an
    ``(x, log_prob)`` pair of arrays.  Occurrences of the identity (and, for
    pure states, of the parity string) are discarded first.  For mixed states
    pass ``pure=False`` and the state's ``log_purity``; only the identity is
    then removed.

    ``stderr`` refers to the filtered estimate.  ``error="delta"`` uses the
    first-order delta method, ``error="jackknife"`` leave-one-out resampling.
    """
    if alpha <= 0:
        raise InputError("alpha must be > 0")
    x, lp = samples_to_arrays(samples)
    n_total = lp.size
    if pure:
        keep = ~_trivial_mask(x)
        log_pi0 = -L * np.log(2.0)
        n_trivial = 2
    else:
        keep = x.sum(axis=1) != 0
        log_pi0 = -L * np.log(2.0) - log_purity
        n_trivial = 1
    lp = lp[keep]
    n_used = lp.size
    if n_used == 0:
        raise InsufficientSamples("no samples left after filtering the trivial strings")

    log_D = L * np.log(2.0)
    # log of the probability mass outside the trivial strings
    log_rest = np.log1p(-n_trivial * np.exp(log_pi0))

    if alpha == 1:
        h = _shifted_mean(-lp)
        m_filtered = h - log_D
        # mix the trivial strings back in, relative to log D so zeros stay exact
        m_full = np.exp(log_rest) * m_filtered + n_trivial * np.exp(log_pi0) * (-log_pi0 - log_D)
        if error == "jackknife":
            stderr = _jackknife(-lp, lambda v: _shifted_mean(v))
        else:
            v = -lp - np.max(-lp)
            stderr = float(np.std(v, ddof=1) / np.sqrt(n_used)) if n_used > 1 else 0.0
    else:
        a = (alpha - 1.0) * lp
        log_qt = log_mean_exp(a)
        m_filtered = log_qt / (1.0 - alpha) - log_D
        log_q = np.logaddexp(np.log(n_trivial) + alpha * log_pi0, log_rest + log_qt)
        m_full = log_q / (1.0 - alpha) - log_D
        if error == "jackknife":
            stderr = _jackknife(a, lambda v: log_mean_exp(v) / (1.0 - alpha))
        elif n_used > 1:
            w = np.exp(a - np.max(a))
            stderr = float(np.std(w, ddof=1) / np.mean(w) / np.sqrt(n_used) / abs(1.0 - alpha))
        else:
            stderr = 0.0
    return SreEstimate(
        alpha=float(alpha),
        m_alpha=float(m_full),
        m_alpha_filtered=float(m_filtered),
        stderr=float(stderr),
        n_used=int(n_used),
        n_total=int(n_total),
        L=int(L),
        seed=seed,
        parity_filtered=pure,
    )


def _jackknife(v, stat):
    n = v.size
    if n < 2:
        return 0.0
    loo = np.array([stat(np.delete(v, i)) for i in range(n)])
    return float(np.sqrt((n - 1) * np.mean((loo - loo.mean()) ** 2)))


def string_from_index(b, L):
    """Majorana string with ``x_1`` as the most significant bit of ``b``."""
    n = 2 * L
    return np.array([(b >> (n - 1 - mu)) & 1 for mu in range(n)], dtype=np.uint8)


def characteristic_distribution(cov):
    """``pi(x)`` for every ``x`` in ``{0,1}^{2L}``, indexed as in :func:`string_from_index`.

    Each entry is ``|Tr(rho gamma^x)|^2 / (2^L Tr rho^2)`` with the trace from
    the Pfaffian formula.  Raises :class:`NumericalFailure` if the entries
    do not sum to one within 1e-8.
    """
    cov = as_covariance(cov)
    L = cov.L
    if L > MAX_EXACT_MODES:
        raise InputError(f"exact enumeration limited to L <= {MAX_EXACT_MODES}")
    norm = L * np.log(2.0) + log_purity(cov)
    pi = np.empty(4**L)
    for b in range(4**L):
        w = wick_expectation(cov, string_from_index(b, L))
        pi[b] = 0.0 if w.sign == 0 else math.exp(2 * w.log_abs - norm)
    total = math.fsum(pi)
    if abs(total - 1.0) > 1e-8:
        raise NumericalFailure(f"characteristic distribution sums to {total!r}", module="magic")
    return pi


def renyi_sre(pi, alpha, L):
    """``M_alpha`` of a full characteristic distribution."""
    log_D = L * np.log(2.0)
    if alpha == 1:
        return float(-np.sum(xlogy(pi, pi)) - log_D)
    p = pi[pi > 0]
    return float(logsumexp(alpha * np.log(p)) / (1.0 - alpha) - log_D)


def filtered_sre(pi, alpha, L):
    """``Mt_alpha``: drop the all-zeros and all-ones strings and renormalise."""
    if L < 2:
        return float("nan")
    pt = pi.copy()
    pt[0] = pt[-1] = 0.0
    pt /= math.fsum(pt)
    log_Dm2 = np.log(2.0**L - 2.0)
    if alpha == 1:
        return float(-np.sum(xlogy(pt, pt)) - log_Dm2)
    p = pt[pt > 0]
    return float(logsumexp(alpha * np.log(p)) / (1.0 - alpha) - log_Dm2)


def sre_exact(cov, alpha):
    """``(M_alpha, Mt_alpha)`` by enumeration of all ``4^L`` strings."""
    if alpha <= 0:
        raise InputError("alpha must be > 0")
    cov = as_covariance(cov)
    pi = characteristic_distribution(cov)
    return renyi_sre(pi, alpha, cov.L), filtered_sre(pi, alpha, cov.L)


def participation_probability(V, z):
    """``|<z|psi>|^2 = |det V|_z|^2`` for the Slater state of ``V``."""
    if not isinstance(V, OrbitalMatrix):
        V = OrbitalMatrix(V)
    z = np.asarray(z).astype(bool)
    if z.shape != (V.L,):
        raise InputError(f"occupation vector must have length {V.L}")
    if z.sum() != V.N:
        return 0.0
    ld = linalg.log_det(V.V[z, :])
    return 0.0 if ld.sign == 0 else float(np.exp(2 * ld.log_abs))


def sector_log_probabilities(V):
    """``log p(z)`` over every configuration with ``N`` particles."""
    if not isinstance(V, OrbitalMatrix):
        V = OrbitalMatrix(V)
    L, N = V.L, V.N
    if math.comb(L, N) > MAX_SECTOR:
        raise InputError(f"sector of size C({L},{N}) too large to enumerate")
    if N == 0:
        return np.zeros(1)
    rows = np.array(list(combinations(range(L), N)))
    sign, logabs = linalg.log_det(V.V[rows])
    return np.where(sign == 0, -np.inf, 2 * logabs)


def pre_exact(V, alpha):
    """Exact IPR ``I_alpha`` and participation entropy ``S_alpha``."""
    if alpha <= 0:
        raise InputError("alpha must be > 0")
    logp = sector_log_probabilities(V)
    if alpha == 1:
        p = np.exp(logp)
        return ParticipationResult(1.0, float(-np.sum(xlogy(p, p))), 1.0)
    log_ipr = logsumexp(alpha * logp[np.isfinite(logp)])
    return ParticipationResult(float(alpha), float(log_ipr / (1.0 - alpha)), float(np.exp(log_ipr)))
