import math

import numpy as np
import pytest

from fgmagic import magic, oracle
from fgmagic.errors import InputError, InsufficientSamples
from fgmagic.gaussian import CovarianceMatrix, OrbitalMatrix, vacuum_covariance
from fgmagic.linalg import haar_unitary
from fgmagic.sampler import draw
from conftest import random_pure


@pytest.mark.parametrize("alpha", [1, 2, 3, 0.5])
def test_stabilizer_states_have_zero_magic(alpha):
    for G in (vacuum_covariance(3).gamma, -vacuum_covariance(3).gamma):
        cov = CovarianceMatrix(G)
        est = magic.sre_estimate(draw(cov, 300, seed=1), alpha, 3)
        assert est.m_alpha_filtered == 0.0
        assert est.m_alpha == 0.0
        assert est.stderr == 0.0
        m, mt = magic.sre_exact(cov, alpha)
        assert m == pytest.approx(0.0, abs=1e-12) and mt == pytest.approx(0.0, abs=1e-12)


def test_estimate_agrees_with_exact(rng):
    cov, _ = random_pure(4, rng)
    batch = draw(cov, 20000, seed=3)
    for alpha in (1, 2, 3):
        est = magic.sre_estimate(batch, alpha, 4)
        m, mt = magic.sre_exact(cov, alpha)
        assert abs(est.m_alpha_filtered - mt) < 4 * est.stderr
        assert abs(est.m_alpha - m) < 4 * est.stderr


def test_jackknife_close_to_delta(rng):
    cov, _ = random_pure(3, rng)
    batch = draw(cov, 400, seed=9)
    for alpha in (1, 2):
        d = magic.sre_estimate(batch, alpha, 3).stderr
        j = magic.sre_estimate(batch, alpha, 3, error="jackknife").stderr
        assert j == pytest.approx(d, rel=0.2)


def test_filtering_counts(rng):
    x = np.array([[0, 0, 0, 0], [1, 1, 1, 1], [1, 1, 0, 0]], dtype=np.uint8)
    lp = np.log([0.25, 0.25, 0.2])
    est = magic.sre_estimate((x, lp), 2, 2)
    assert (est.n_used, est.n_total) == (1, 3)
    with pytest.raises(InsufficientSamples):
        magic.sre_estimate((x[:2], lp[:2]), 2, 2)
    mixed = magic.sre_estimate((x, lp), 2, 2, pure=False, log_purity=0.0)
    assert mixed.n_used == 2 and not mixed.parity_filtered


def test_estimate_json_fields():
    x = np.array([[1, 1, 0, 0]], dtype=np.uint8)
    est = magic.sre_estimate((x, np.array([-1.0])), 2, 2, seed=7)
    import json

    assert set(json.loads(est.to_json())) == {
        "alpha", "m_alpha", "m_alpha_filtered", "stderr", "n_used", "n_total", "L", "seed"
    }


def test_filtered_relation(rng):
    cov, _ = random_pure(4, rng)
    D = 16.0
    for a in (2, 3, 0.5):
        m, mt = magic.sre_exact(cov, a)
        lhs = math.exp((1 - a) * (mt + math.log(D))) * (D - 2) / D + 2 / D**a
        assert lhs == pytest.approx(math.exp((1 - a) * (m + math.log(D))), abs=1e-10)


def test_sre_ordering_in_alpha(rng):
    cov, _ = random_pure(4, rng)
    vals = [magic.sre_exact(cov, a)[0] for a in (0.5, 1, 2, 3)]
    # Renyi entropies decrease with alpha, and so do the SREs
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 0


def test_characteristic_distribution_is_normalised(rng):
    cov, _ = random_pure(3, rng)
    pi = magic.characteristic_distribution(cov)
    assert math.fsum(pi) == pytest.approx(1.0, abs=1e-12)
    assert pi[0] == pytest.approx(1 / 8) and pi[-1] == pytest.approx(1 / 8)


def test_exact_enumeration_limits():
    with pytest.raises(InputError):
        magic.characteristic_distribution(vacuum_covariance(11))
    with pytest.raises(InputError):
        magic.sre_exact(vacuum_covariance(2), 0)


def test_participation_matches_dense_amplitudes(rng):
    V = haar_unitary(4, rng)[:, :2]
    psi = oracle.statevector_from_orbitals(V).amplitudes
    for b in range(16):
        z = [(b >> (3 - i)) & 1 for i in range(4)]
        assert magic.participation_probability(V, z) == pytest.approx(abs(psi[b]) ** 2, abs=1e-12)


def test_pre_exact_limits(rng):
    V = OrbitalMatrix(np.eye(4)[:, :2])
    res = magic.pre_exact(V, 2)
    assert res.ipr == pytest.approx(1.0) and res.s_alpha == pytest.approx(0.0, abs=1e-12)
    V = haar_unitary(6, rng)[:, :3]
    s1, s2 = magic.pre_exact(V, 1).s_alpha, magic.pre_exact(V, 2).s_alpha
    assert 0 < s2 <= s1 <= math.log(math.comb(6, 3)) + 1e-12


def test_log_mean_exp_is_exact_for_constants():
    assert magic.log_mean_exp(np.full(7, -3.25)) == -3.25
