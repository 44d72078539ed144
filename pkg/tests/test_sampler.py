import io
import math

import numpy as np
import pytest

from fgmagic import sampler
from fgmagic.errors import InputError
from fgmagic.gaussian import CovarianceMatrix, vacuum_covariance
from fgmagic.magic import characteristic_distribution, string_from_index
from conftest import random_pure


def test_vacuum_samples_are_z_strings_with_exact_probability():
    L = 4
    x, lp = sampler.draw(vacuum_covariance(L), 200, seed=3)
    # gamma_{2i-1} gamma_{2i} ~ Z_i: bits come in equal pairs
    assert np.array_equal(x[:, 0::2], x[:, 1::2])
    assert np.all(lp == -L * math.log(2.0))


def test_odd_weight_strings_never_sampled(rng):
    cov, _ = random_pure(4, rng)
    x, _ = sampler.draw(cov, 500, seed=1)
    assert np.all(x.sum(axis=1) % 2 == 0)


def test_log_prob_matches_pfaffian_route(rng):
    cov, _ = random_pure(5, rng, special=False)
    x, lp = sampler.draw(cov, 100, seed=11)
    exact = np.array([sampler.log_prob_exact(cov, xi) for xi in x])
    assert np.max(np.abs(lp - exact)) < 1e-10


def test_mixed_state_log_prob(rng):
    cov, _ = random_pure(3, rng)
    mixed = CovarianceMatrix(0.7 * cov.gamma)
    x, lp = sampler.draw(mixed, 200, seed=2)
    exact = np.array([sampler.log_prob_exact(mixed, xi) for xi in x])
    assert np.max(np.abs(lp - exact)) < 1e-10


def test_marginals_add_up(rng):
    cov, _ = random_pure(3, rng)
    for b in range(0, 64, 5):
        x = string_from_index(b, 3)
        for m in range(6):
            parent = sampler.marginal_probability(cov, x[:m])
            kids = sum(sampler.marginal_probability(cov, np.r_[x[:m], v]) for v in (0, 1))
            assert kids == pytest.approx(parent, abs=1e-12)


def test_full_prefix_marginal_is_pi(rng):
    cov, _ = random_pure(3, rng)
    pi = characteristic_distribution(cov)
    for b in range(64):
        assert sampler.marginal_probability(cov, string_from_index(b, 3)) == pytest.approx(pi[b], abs=1e-12)


def test_marginal_rejects_bad_prefix():
    with pytest.raises(InputError):
        sampler.marginal_probability(vacuum_covariance(1), [0, 1, 0])
    with pytest.raises(InputError):
        sampler.marginal_probability(vacuum_covariance(1), [2])


def test_determinism_across_workers_and_chunks(rng, monkeypatch):
    cov, _ = random_pure(4, rng)
    x1, lp1 = sampler.draw(cov, 300, seed=5, workers=1)
    monkeypatch.setattr(sampler, "CHUNK", 7)
    x2, lp2 = sampler.draw(cov, 300, seed=5, workers=3)
    assert np.array_equal(x1, x2)
    assert np.array_equal(lp1, lp2)


def test_prefix_of_batch_is_stable(rng):
    cov, _ = random_pure(3, rng)
    x_small, _ = sampler.draw(cov, 10, seed=8)
    x_big, _ = sampler.draw(cov, 50, seed=8)
    assert np.array_equal(x_small, x_big[:10])


def test_sample_one_uses_its_stream(rng):
    cov, _ = random_pure(3, rng)
    batch = sampler.sample_batch(cov, sampler.SamplerConfig(seed=4, num_samples=5))
    one = sampler.sample_one(cov, sampler.sample_stream(4, 3))
    assert np.array_equal(one.x, batch[3].x)
    assert one.log_prob == batch[3].log_prob


def test_config_validation():
    with pytest.raises(InputError):
        sampler.SamplerConfig(seed=1, num_samples=0)
    with pytest.raises(InputError):
        sampler.SamplerConfig(seed=-1, num_samples=1)


def test_csv_and_json_roundtrip(rng):
    cov, _ = random_pure(2, rng)
    batch = sampler.sample_batch(cov, sampler.SamplerConfig(seed=1, num_samples=6))
    buf = io.StringIO()
    sampler.write_samples_csv(batch, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "sample_index,x,log_prob"
    back = sampler.read_samples_csv(io.StringIO(text))
    assert [s.bits for s in back] == [s.bits for s in batch]
    assert [s.log_prob for s in back] == [s.log_prob for s in batch]
    back = sampler.samples_from_json(sampler.samples_to_json(batch))
    assert [s.log_prob for s in back] == [s.log_prob for s in batch]


def test_large_system_stays_finite(rng):
    cov, _ = random_pure(40, rng)
    x, lp = sampler.draw(cov, 20, seed=1)
    assert np.all(np.isfinite(lp))
    assert np.all(lp < 0)


def test_workers_env(monkeypatch):
    monkeypatch.setenv("FGMAGIC_WORKERS", "3")
    assert sampler.default_workers() == 3
