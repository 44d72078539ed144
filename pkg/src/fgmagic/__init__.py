"""Stabilizer Renyi entropies of fermionic Gaussian states by perfect Majorana sampling."""

from .analytics import EnsembleSpec, annealed_pre, avg_ipr_exact, avg_pre_asymptotic, pre_constant
from .errors import InputError, InsufficientSamples, NumericalFailure
from .gaussian import (
    CovarianceMatrix,
    OrbitalMatrix,
    covariance_from_correlations,
    entanglement_entropy,
    from_orbitals,
    purity,
    rotate,
    vacuum_covariance,
    wick_expectation,
)
from .linalg import haar_orthogonal, haar_unitary, log_det, pfaffian
from .magic import SreEstimate, pre_exact, sre_estimate, sre_exact
from .models import (
    Kitaev2DParams,
    SweepRecord,
    kitaev2d_ground_state,
    random_gaussian,
    random_gaussian_fixed_n,
    sweep_fixed_n,
    sweep_kitaev,
    sweep_random,
)
from .sampler import MajoranaSample, SamplerConfig, draw, sample_batch, sample_one

__version__ = "0.1.0"
