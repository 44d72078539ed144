import numpy as np
import pytest

from fgmagic import models
from fgmagic.errors import InputError
from fgmagic.gaussian import covariance_from_correlations, correlations_from_covariance, particle_number, vacuum_covariance
from fgmagic.magic import sre_estimate, sre_exact
from fgmagic.models import Kitaev2DParams
from fgmagic.sampler import draw


def bdg_oracle(p):
    """Ground state and energy from the real-space BdG matrix, no FFTs involved."""
    ell, L = p.ell, p.L
    _, _, eps, dk, _ = models.kitaev2d_bands(p)
    x, y = np.divmod(np.arange(L), ell)
    k = 2 * np.pi * np.arange(ell) / ell
    kx, ky = np.meshgrid(k, k, indexing="ij")
    phase = np.exp(1j * (np.outer(x, kx.ravel()) + np.outer(y, ky.ravel())))
    h = (phase * eps.ravel()) @ phase.conj().T / L
    D = (phase * dk.ravel()) @ phase.conj().T / L
    H = np.block([[h, D], [D.conj().T, -h.T]])
    w, v = np.linalg.eigh(H)
    P = v[:, w > 0] @ v[:, w > 0].conj().T  # <Phi Phi^dag> over Phi = (c, c^dag)
    C = np.eye(L) - P[:L, :L].T
    F = P[:L, L:]
    energy = -0.5 * w[w > 0].sum() + 0.5 * np.trace(h).real
    return covariance_from_correlations(C, F), energy


def test_params_validation():
    with pytest.raises(InputError):
        Kitaev2DParams(1)
    with pytest.raises(InputError):
        Kitaev2DParams(4, t=0.0)


def test_dispersion_invariants():
    p = Kitaev2DParams(4, 1.0, 2.5, 0.3)
    pts = {pt.k: pt for pt in models.dispersion(p)}
    assert len(pts) == 16
    for (kx, ky), pt in pts.items():
        assert pt.E >= 0
        minus = pts[(float((-kx) % (2 * np.pi)) if kx else 0.0, float((-ky) % (2 * np.pi)) if ky else 0.0)]
        assert minus.delta_k == pytest.approx(-pt.delta_k, abs=1e-12)


@pytest.mark.parametrize("ell,mu", [(3, 1.3), (4, 2.7), (4, 5.5), (3, -1.0), (2, 2.0)])
def test_ground_state_matches_real_space_bdg(ell, mu):
    p = Kitaev2DParams(ell, 1.0, mu, 0.1)
    cov = models.kitaev2d_ground_state(p)
    ref, energy = bdg_oracle(p)
    assert np.max(np.abs(cov.gamma - ref.gamma)) < 1e-10
    assert cov.is_pure
    _, _, eps, _, E = models.kitaev2d_bands(p)
    assert energy == pytest.approx(-0.5 * E.sum() + 0.5 * eps.sum(), abs=1e-10)
    assert models.kitaev2d_energy(p, cov) == pytest.approx(energy, abs=1e-10)


def test_pairing_present_on_odd_lattice():
    _, F = correlations_from_covariance(models.kitaev2d_ground_state(Kitaev2DParams(3, 1.0, 2.0, 0.3)))
    assert np.max(np.abs(F)) > 1e-3


def test_no_pairing_at_ell_two():
    # every k on the 2x2 grid is its own partner, so Delta_k = 0 there
    _, F = correlations_from_covariance(models.kitaev2d_ground_state(Kitaev2DParams(2, 1.0, 2.0, 0.4)))
    assert np.max(np.abs(F)) < 1e-14


def test_stabilizer_points_are_exact():
    for ell in (2, 4, 8):
        G0 = vacuum_covariance(ell * ell).gamma
        assert np.array_equal(models.kitaev2d_ground_state(Kitaev2DParams(ell, 1.0, -1.0, 0.0)).gamma, G0)
        assert np.array_equal(models.kitaev2d_ground_state(Kitaev2DParams(ell, 1.0, 9.0, 0.0)).gamma, -G0)


def test_gapless_modes_left_empty():
    # ell = 2, Delta = 0, mu = 4t: eps = 0 at k = (0, pi) and (pi, 0)
    cov = models.kitaev2d_ground_state(Kitaev2DParams(2, 1.0, 4.0, 0.0))
    assert particle_number(cov) == pytest.approx(1.0)
    assert cov.is_pure


def test_particle_hole_symmetry_exact_ell2():
    for mu in (1.0, 2.5):
        a = models.kitaev2d_ground_state(Kitaev2DParams(2, 1.0, mu, 0.0))
        b = models.kitaev2d_ground_state(Kitaev2DParams(2, 1.0, 8.0 - mu, 0.0))
        for alpha in (1, 2):
            assert sre_exact(a, alpha)[1] == pytest.approx(sre_exact(b, alpha)[1], abs=1e-10)


def test_random_gaussian_is_pure(rng):
    cov = models.random_gaussian(5, rng)
    assert cov.is_pure


def test_random_gaussian_mean_entry_vanishes():
    rng = np.random.default_rng(1)
    vals = np.array([models.random_gaussian(4, rng).gamma[0, 1] for _ in range(4000)])
    assert abs(vals.mean()) < 3 * vals.std() / np.sqrt(vals.size)


def test_fixed_n_conserves_particles(rng):
    for N in range(6):
        assert particle_number(models.random_gaussian_fixed_n(5, N, rng)) == pytest.approx(N, abs=1e-8)
    assert np.allclose(models.random_gaussian_fixed_n(3, 0, rng).gamma, vacuum_covariance(3).gamma)
    assert np.allclose(models.random_gaussian_fixed_n(3, 3, rng).gamma, -vacuum_covariance(3).gamma)
    with pytest.raises(InputError):
        models.random_gaussian_fixed_n(3, 4, rng)


def test_sweep_single_realization_reduces_to_estimate():
    (rec,) = models.sweep_random([4], [2], 1, 500, seed=9)
    cov = models.random_gaussian(4, np.random.default_rng([9, 0, 4, 0]))
    est = sre_estimate(draw(cov, 500, models.derive_seed(9, 1, 4, 0)), 2, 4)
    assert rec.m_filtered_mean == est.m_alpha_filtered
    assert rec.m_filtered_stderr == est.stderr


def test_sweep_is_reproducible_and_worker_independent():
    a = models.sweep_random([3, 4], [1, 2], 3, 300, seed=5, workers=1)
    b = models.sweep_random([3, 4], [1, 2], 3, 300, seed=5, workers=2)
    assert a == b
    assert [(r.L_or_ell, r.alpha) for r in a] == [(3, 1.0), (3, 2.0), (4, 1.0), (4, 2.0)]


def test_sweep_count_validation():
    with pytest.raises(InputError):
        models.sweep_random([3], [1], 0, 10, seed=1)


def test_kitaev_sweep_zero_density_at_vacuum():
    (rec,) = models.sweep_kitaev([Kitaev2DParams(4, 1.0, -1.0, 0.0)], [1], 200, seed=1)
    assert rec.m_filtered_mean == 0.0 and rec.m_filtered_stderr == 0.0


def test_kitaev_ell2_density_matches_enumeration():
    grid = [Kitaev2DParams(2, 1.0, mu, 0.0) for mu in (1.0, 3.0, 5.0)]
    recs = models.sweep_kitaev(grid, [1, 2], 4000, seed=3)
    for rec in recs:
        exact = sre_exact(models.kitaev2d_ground_state(Kitaev2DParams(2, 1.0, rec.mu, 0.0)), rec.alpha)[1] / 4
        assert abs(rec.m_filtered_mean - exact) <= 3 * rec.m_filtered_stderr + 1e-12


def test_fixed_n_sweep_rounds_fillings():
    recs = models.sweep_fixed_n([8], [0.5, 4], [2], 2, 100, seed=1)
    assert [r.N_or_blank for r in recs] == [4]


def test_records_csv_header():
    import io

    buf = io.StringIO()
    models.write_records_csv(models.sweep_random([3], [2], 1, 50, seed=1), buf)
    assert buf.getvalue().splitlines()[0] == (
        "model,L_or_ell,N_or_blank,t,mu,delta,alpha,m_filtered_mean,m_filtered_stderr,realizations,samples,seed"
    )
