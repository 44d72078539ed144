"""State factories and parameter sweeps.

Random ensembles:

* ``random_gaussian`` rotates the vacuum by a Haar-random element of O(2L);
* ``random_gaussian_fixed_n`` fills the first ``N`` columns of a Haar-random
  ``L x L`` unitary (a Slater state with ``N`` particles).

The 2D model is a spinless p+ip superconductor on an ``ell x ell`` periodic
square lattice, in momentum space::

    H = 1/2 sum_k Psi_k^dag [[eps_k, Delta_k], [Delta_k^*, -eps_k]] Psi_k
    Psi_k = (c_k, c_{-k}^dag)
    eps_k   = -(mu - 4t) - 2t (cos kx + cos ky)
    Delta_k = 2i Delta (sin kx + i sin ky)

Sites are ordered ``r = x * ell + y`` and ``c_r = (1/ell) sum_k e^{ik.r} c_k``.
"""

import csv
import json
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import linalg
from .errors import InputError, NumericalFailure
from .gaussian import (
    correlations_from_covariance,
    covariance_from_correlations,
    from_orbitals,
    rotate,
    vacuum_covariance,
)
from .magic import sre_estimate
from .sampler import draw

GAP_TOL = 1e-12


@dataclass(frozen=True)
class Kitaev2DParams:
    ell: int
    t: float = 1.0
    mu: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.ell < 2:
            raise InputError("ell must be >= 2")
        if self.t <= 0:
            raise InputError("t must be > 0")

    @property
    def L(self):
        return self.ell * self.ell


@dataclass(frozen=True)
class DispersionPoint:
    k: tuple
    eps: float
    delta_k: complex
    E: float


@dataclass(frozen=True)
class SweepRecord:
    """One row of a sweep.

    For ``model == "kitaev2d"`` the two ``m_filtered_*`` fields hold the
    density ``Mt_alpha / ell^2``; otherwise they hold ``Mt_alpha`` itself.
    Empty strings mark fields that do not apply to the model.
    """

    model: str
    L_or_ell: int
    N_or_blank: object
    t: object
    mu: object
    delta: object
    alpha: float
    m_filtered_mean: float
    m_filtered_stderr: float
    realizations: int
    samples: int
    seed: int


SWEEP_COLUMNS = [f.name for f in fields(SweepRecord)]


def derive_seed(seed, *keys):
    """Nonnegative 63-bit integer seed for the work item ``keys``."""
    state = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


def random_gaussian(L, rng):
    """Pure Gaussian state ``O Gamma_0 O^T`` with Haar-random ``O``."""
    return rotate(vacuum_covariance(L), linalg.haar_orthogonal(2 * L, rng))


def random_gaussian_fixed_n(L, N, rng):
    """Slater state of ``N`` Haar-random orbitals in ``L`` modes."""
    if not 0 <= N <= L:
        raise InputError("need 0 <= N <= L")
    U = linalg.haar_unitary(L, rng)
    return from_orbitals(U[:, :N])


def kitaev2d_bands(p):
    """Momentum grids and band data, each an ``ell x ell`` array indexed by ``(mx, my)``."""
    k = 2 * np.pi * np.arange(p.ell) / p.ell
    kx, ky = np.meshgrid(k, k, indexing="ij")
    eps = -(p.mu - 4 * p.t) - 2 * p.t * (np.cos(kx) + np.cos(ky))
    dk = 2j * p.delta * (np.sin(kx) + 1j * np.sin(ky))
    E = np.sqrt(eps**2 + np.abs(dk) ** 2)
    return kx, ky, eps, dk, E


def dispersion(p):
    kx, ky, eps, dk, E = kitaev2d_bands(p)
    return [
        DispersionPoint((float(a), float(b)), float(e), complex(d), float(en))
        for a, b, e, d, en in zip(kx.ravel(), ky.ravel(), eps.ravel(), dk.ravel(), E.ravel())
    ]


def kitaev2d_correlations(p):
    """Ground-state ``C_rr' = <c_r^dag c_r'>`` and ``F_rr' = <c_r c_r'>``.

    Each pair ``(k, -k)`` takes the negative-energy branch of its 2x2 block:
    ``<c_k^dag c_k> = (1 - eps_k/E_k)/2`` and ``<c_k c_-k> = Delta_k/(2 E_k)``.
    Modes with ``E_k`` below ``GAP_TOL * t`` are left empty.
    """
    _, _, eps, dk, E = kitaev2d_bands(p)
    gapped = E > GAP_TOL * p.t
    safe_E = np.where(gapped, E, 1.0)
    occ = np.where(gapped, 0.5 * (1.0 - eps / safe_E), 0.0)
    pair = np.where(gapped, dk / (2 * safe_E), 0.0)

    c_of_d = np.fft.ifft2(occ)  # (1/ell^2) sum_k e^{ik.d} n_k
    f_of_d = np.fft.ifft2(pair)
    ell = p.ell
    x, y = np.divmod(np.arange(ell * ell), ell)
    dx = (x[None, :] - x[:, None]) % ell
    dy = (y[None, :] - y[:, None]) % ell
    C = c_of_d[dx, dy]
    F = f_of_d[(-dx) % ell, (-dy) % ell]
    return C, F


def kitaev2d_ground_state(p):
    """Covariance matrix of the BdG ground state on ``ell^2`` modes."""
    C, F = kitaev2d_correlations(p)
    return covariance_from_correlations(C, F)


def kitaev2d_energy(p, cov):
    """``<H>`` of the normal-ordered Hamiltonian in the state ``cov``.

    ``H = sum_k eps_k c_k^dag c_k + 1/2 sum_k (Delta_k c_k^dag c_-k^dag + h.c.)``.
    """
    _, _, eps, dk, _ = kitaev2d_bands(p)
    C, F = correlations_from_covariance(cov)
    ell = p.ell
    x, y = np.divmod(np.arange(ell * ell), ell)
    dx = (x[:, None] - x[None, :]) % ell
    dy = (y[:, None] - y[None, :]) % ell
    h = np.fft.ifft2(eps)[dx, dy]  # h_rr' = (1/ell^2) sum_k eps_k e^{ik(r-r')}
    D = np.fft.ifft2(dk)[dx, dy]
    return float(np.real(np.sum(h * C) + np.sum(D * F.T.conj())))


def _draw(cov, num_samples, seed, workers):
    try:
        return draw(cov, num_samples, seed, workers)
    except NumericalFailure as e:
        e.seed = seed
        raise


def _aggregate(values, single_stderr):
    values = np.asarray(values)
    if values.size == 1:
        return float(values[0]), float(single_stderr)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def sweep_random(L_list, alphas, realizations, samples_per_state, seed, workers=1, progress=None):
    """Average filtered SREs of Haar-random Gaussian states, one record per ``(L, alpha)``.

    Realization ``r`` at size ``L`` draws its state from the stream
    ``(seed, 0, L, r)`` and its samples with :func:`derive_seed` ``(seed, 1, L, r)``.
    ``progress``, when given, is called with ``(L, r)`` after each state.
    """
    _check_counts(realizations, samples_per_state)
    records = []
    for L in L_list:
        per_alpha = {a: [] for a in alphas}
        last = {}
        for r in range(realizations):
            cov = random_gaussian(L, np.random.default_rng([int(seed), 0, L, r]))
            batch = _draw(cov, samples_per_state, derive_seed(seed, 1, L, r), workers)
            for a in alphas:
                est = sre_estimate(batch, a, L)
                per_alpha[a].append(est.m_alpha_filtered)
                last[a] = est.stderr
            if progress:
                progress(L, r)
        for a in alphas:
            mean, err = _aggregate(per_alpha[a], last[a])
            records.append(
                SweepRecord("random", L, "", "", "", "", float(a), mean, err, realizations, samples_per_state, seed)
            )
    return records


def sweep_fixed_n(L_list, particle_numbers, alphas, realizations, samples_per_state, seed, workers=1):
    """As :func:`sweep_random` for Slater states; one record per ``(L, N, alpha)``.

    ``particle_numbers`` holds integers, or fillings in (0, 1) rounded to the
    nearest integer for each ``L``.
    """
    _check_counts(realizations, samples_per_state)
    records = []
    for L in L_list:
        Ns = sorted({int(round(n * L)) if 0 < n < 1 else int(n) for n in particle_numbers})
        for N in Ns:
            per_alpha = {a: [] for a in alphas}
            last = {}
            for r in range(realizations):
                cov = random_gaussian_fixed_n(L, N, np.random.default_rng([int(seed), 2, L, N, r]))
                batch = _draw(cov, samples_per_state, derive_seed(seed, 3, L, N, r), workers)
                for a in alphas:
                    est = sre_estimate(batch, a, L)
                    per_alpha[a].append(est.m_alpha_filtered)
                    last[a] = est.stderr
            for a in alphas:
                mean, err = _aggregate(per_alpha[a], last[a])
                records.append(
                    SweepRecord(
                        "random_fixed_n", L, N, "", "", "", float(a), mean, err, realizations, samples_per_state, seed
                    )
                )
    return records


def sweep_kitaev(p_grid, alphas, samples_per_state, seed, workers=1):
    """Filtered SRE density ``Mt_alpha / ell^2`` of the ground state at every grid point."""
    _check_counts(1, samples_per_state)
    records = []
    for i, p in enumerate(p_grid):
        cov = kitaev2d_ground_state(p)
        batch = _draw(cov, samples_per_state, derive_seed(seed, 4, i), workers)
        for a in alphas:
            est = sre_estimate(batch, a, p.L)
            records.append(
                SweepRecord(
                    "kitaev2d",
                    p.ell,
                    "",
                    p.t,
                    p.mu,
                    p.delta,
                    float(a),
                    est.m_alpha_filtered / p.L,
                    est.stderr / p.L,
                    1,
                    samples_per_state,
                    seed,
                )
            )
    return records


def _check_counts(realizations, samples):
    if realizations < 1 or samples < 1:
        raise InputError("realizations and samples must be >= 1")


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def write_records_csv(records, fh, extra_columns=()):
    """CSV with the sweep columns; dict rows may carry ``extra_columns`` too."""
    cols = SWEEP_COLUMNS + list(extra_columns)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        d = r if isinstance(r, dict) else asdict(r)
        w.writerow([_fmt(d.get(c, "")) for c in cols])


def records_to_json(records):
    return json.dumps([r if isinstance(r, dict) else asdict(r) for r in records])


def is_stabilizer_vacuum(cov):
    """True when ``cov`` equals the vacuum or the fully occupied state exactly."""
    g0 = vacuum_covariance(cov.L).gamma
    return bool(np.array_equal(cov.gamma, g0) or np.array_equal(cov.gamma, -g0))


__all__ = [
    "DispersionPoint",
    "Kitaev2DParams",
    "SweepRecord",
    "derive_seed",
    "dispersion",
    "kitaev2d_ground_state",
    "random_gaussian",
    "random_gaussian_fixed_n",
    "sweep_fixed_n",
    "sweep_kitaev",
    "sweep_random",
]
