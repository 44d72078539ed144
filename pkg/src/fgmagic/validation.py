"""Self-checks run by ``fgmagic validate``.

Each check compares two independent computations on a few random states
and reports the largest discrepancy against its tolerance.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg, oracle
from .gaussian import from_orbitals, rotate, vacuum_covariance
from .magic import characteristic_distribution, sre_estimate, sre_exact, string_from_index
from .sampler import draw, log_prob_exact, marginal_probability


@dataclass(frozen=True)
class CheckResult:
    name: str
    L: int
    error: float
    tol: float

    @property
    def passed(self):
        return bool(self.error <= self.tol)


def _random_rotation_state(L, rng):
    O = linalg.haar_orthogonal(2 * L, rng, special=True)
    return rotate(vacuum_covariance(L), O), oracle.statevector_from_rotation(O, L)


def check_oracle_distribution(L, rng, states):
    perm = np.array([oracle.pauli_of_majorana(string_from_index(b, L), L) for b in range(4**L)])
    err = 0.0
    for _ in range(states):
        cov, psi = _random_rotation_state(L, rng)
        pi = characteristic_distribution(cov)
        err = max(err, np.max(np.abs(pi - oracle.exact_characteristic_distribution(psi)[perm])))
    return CheckResult("oracle_distribution", L, float(err), 1e-10)


def check_oracle_sre(L, rng, states):
    err = 0.0
    for _ in range(states):
        cov, psi = _random_rotation_state(L, rng)
        for a in (1, 2, 3):
            got = np.array(sre_exact(cov, a))
            ref = np.array(oracle.oracle_sre(psi, a))
            ok = np.isfinite(ref)
            err = max(err, np.max(np.abs(got[ok] - ref[ok])))
    return CheckResult("oracle_sre", L, float(err), 1e-10)


def check_slater(L, rng, states):
    err = 0.0
    for _ in range(states):
        N = int(rng.integers(0, L + 1))
        V = linalg.haar_unitary(L, rng)[:, :N]
        dense = oracle.dense_covariance(oracle.statevector_from_orbitals(V))
        err = max(err, np.max(np.abs(dense - from_orbitals(V).gamma)))
    return CheckResult("slater_covariance", L, float(err), 1e-10)


def check_sampler(L, rng, states, seed, samples=200):
    """Recorded log-probabilities against the Pfaffian formula, and marginal additivity."""
    err = 0.0
    for s in range(states):
        cov, _ = _random_rotation_state(L, rng)
        x, lp = draw(cov, samples, seed + s)
        for xi, li in zip(x[:20], lp[:20]):
            err = max(err, abs(li - log_prob_exact(cov, xi)))
            for m in range(2 * L):
                parent = marginal_probability(cov, xi[:m])
                pair = marginal_probability(cov, np.r_[xi[:m], 0]) + marginal_probability(cov, np.r_[xi[:m], 1])
                err = max(err, abs(pair - parent))
    return CheckResult("sampler_consistency", L, float(err), 1e-8)


def check_filtered_relation(L, rng, states):
    """Filtered and unfiltered exact SREs are tied by the two removed strings."""
    D = 2.0**L
    err = 0.0
    for _ in range(states):
        cov, _ = _random_rotation_state(L, rng)
        for a in (2, 3):
            m, mt = sre_exact(cov, a)
            lhs = np.exp((1 - a) * (mt + np.log(D))) * (D - 2) / D + 2 / D**a
            err = max(err, abs(lhs - np.exp((1 - a) * (m + np.log(D)))))
    return CheckResult("filtered_relation", L, float(err), 1e-10)


def check_stabilizer_zero(L, seed):
    err = 0.0
    for sign in (1, -1):
        cov = vacuum_covariance(L)
        if sign < 0:
            cov = type(cov)(-cov.gamma)
        batch = draw(cov, 100, seed)
        for a in (1, 2, 3):
            err = max(err, abs(sre_estimate(batch, a, L).m_alpha_filtered))
    return CheckResult("stabilizer_zero", L, float(err), 0.0)


def run_checks(max_modes, seed, states=3):
    """All checks for ``L = 2 .. max_modes`` (Pauli enumeration capped at 7 modes)."""
    rng = np.random.default_rng(seed)
    results = []
    for L in range(2, min(max_modes, oracle.MAX_PAULI_MODES) + 1):
        results.append(check_oracle_distribution(L, rng, states))
        results.append(check_oracle_sre(L, rng, states))
        results.append(check_slater(L, rng, states))
        results.append(check_sampler(L, rng, states, seed))
        results.append(check_filtered_relation(L, rng, states))
        results.append(check_stabilizer_zero(L, seed))
    return results
