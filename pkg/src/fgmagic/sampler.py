"""Perfect sampling of Majorana strings from the characteristic distribution.

For a Gaussian state the characteristic distribution is determinantal::

    pi(x) = det(Gamma|_x) / det(1 + Gamma)

and the marginal of a prefix ``x_1..x_m`` keeps the rows/columns
``{i <= m : x_i = 1} U {m+1..2L}`` of ``1_{>m} + Gamma``.  A sample is drawn
bit by bit from the chain rule of conditionals, each conditional being a
ratio of two such determinants.  Both candidate determinants are recomputed
from scratch at every step with pivoted LU (no state is carried between
steps), so one sample costs O(L^4).

The tail block ``{m+1..2L}`` is common to every sample at step ``m`` and is
eliminated once per step; the remaining per-sample determinants of all
samples with the same number of ones share a shape and go through one
stacked LAPACK call.
"""

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InputError, NumericalFailure
from .gaussian import as_covariance, log_purity, majorana_string, wick_expectation

NEGATIVE_TOL = 1e-8
PAIR_SUM_TOL = 1e-6
CHUNK = 1024


@dataclass(frozen=True, eq=False)
class MajoranaSample:
    """A sampled string and the natural log of its probability."""

    x: np.ndarray
    log_prob: float

    @property
    def bits(self):
        return "".join("1" if b else "0" for b in self.x)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    num_samples: int
    workers: int = 1

    def __post_init__(self):
        if self.num_samples < 1:
            raise InputError("num_samples must be >= 1")
        if self.workers < 1:
            raise InputError("workers must be >= 1")
        if self.seed < 0:
            raise InputError("seed must be a nonnegative integer")


def default_workers():
    """Worker count from ``FGMAGIC_WORKERS``, else the CPU count."""
    env = os.environ.get("FGMAGIC_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sample_stream(seed, index):
    """Random stream owned by sample ``index`` of a batch seeded with ``seed``."""
    return np.random.default_rng([int(seed), int(index)])


def marginal_probability(cov, prefix):
    """Probability that a string starts with ``prefix`` (any length up to 2L)."""
    cov = as_covariance(cov)
    n = 2 * cov.L
    prefix = np.asarray(prefix, dtype=np.int64).ravel()
    m = prefix.size
    if m > n:
        raise InputError(f"prefix longer than {n}")
    if np.any((prefix != 0) & (prefix != 1)):
        raise InputError("prefix must be a 0/1 vector")
    if m == 0:
        return 1.0
    keep = np.concatenate([np.flatnonzero(prefix), np.arange(m, n)])
    B = cov.gamma + np.diag((np.arange(n) >= m).astype(float))
    num = linalg.log_det(B[np.ix_(keep, keep)])
    den = linalg.log_det(np.eye(n) + cov.gamma)
    if num.sign == 0:
        return 0.0
    p = float(np.real(num.sign)) * math.exp(num.log_abs - den.log_abs)
    if p < -NEGATIVE_TOL:
        raise NumericalFailure(f"negative marginal probability {p:.3g}", step=m - 1, module="sampler")
    return min(max(p, 0.0), 1.0)


def _gather(B, idx):
    return B[idx[:, :, None], idx[:, None, :]]


def _step_complement(gamma, m):
    """Shared factor of all marginal determinants at step ``m``.

    With ``R = {m+1..2L}`` every candidate matrix has the block form
    ``[[Gamma_PP, Gamma_PR], [Gamma_RP, 1 + Gamma_RR]]``, so its determinant is
    ``det(1 + Gamma_RR) * det(S|_P)`` with the Schur complement
    ``S = Gamma - Gamma_.R (1 + Gamma_RR)^-1 Gamma_R.``.  The singular values
    of ``1 + Gamma_RR`` are all >= 1, so this factorisation is well conditioned.
    """
    n = gamma.shape[0]
    R = np.arange(m + 1, n)
    if R.size == 0:
        return 0.0, gamma
    A = np.eye(R.size) + gamma[np.ix_(R, R)]
    ld = linalg.log_det(A)
    if ld.sign <= 0:
        raise NumericalFailure(f"det(1 + Gamma_RR) <= 0 at step {m}", step=m, module="sampler")
    S = gamma - gamma[:, R] @ np.linalg.solve(A, gamma[R, :])
    return ld.log_abs, S


def _draw_chunk(gamma, uniforms, first_index=0):
    """Run the sequential sampler on a block of uniforms.

    ``uniforms`` has shape ``(n_samples, 2L)``; bit ``mu`` of sample ``s`` is
    set when ``uniforms[s, mu]`` falls below its conditional probability.
    Returns the strings and the per-step log conditionals.
    """
    ns, n = uniforms.shape
    x = np.zeros((ns, n), dtype=np.uint8)
    log_cond = np.zeros((ns, n))
    lp_prev = np.full(ns, linalg.log_det(np.eye(n) + gamma).log_abs)
    ones = np.zeros(ns, dtype=np.int64)

    for m in range(n):
        ld_rest, S = _step_complement(gamma, m)
        s1 = np.empty(ns)
        l1 = np.empty(ns)
        s0 = np.empty(ns)
        l0 = np.empty(ns)
        for k in np.unique(ones):
            rows = np.flatnonzero(ones == k)
            g = rows.size
            kept = np.nonzero(x[rows, :m])[1].reshape(g, k)
            with_m = np.concatenate([kept, np.full((g, 1), m)], axis=1)
            s1[rows], l1[rows] = linalg.log_det(_gather(S, with_m))
            s0[rows], l0[rows] = linalg.log_det(_gather(S, kept))
        l1 = l1 + ld_rest
        l0 = l0 + ld_rest

        # consistency of the pair against the parent marginal
        p1 = s1 * np.exp(l1 - lp_prev)
        p0 = s0 * np.exp(l0 - lp_prev)
        bad = (p0 < -NEGATIVE_TOL) | (p1 < -NEGATIVE_TOL) | (np.abs(p0 + p1 - 1.0) > PAIR_SUM_TOL)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise NumericalFailure(
                f"conditional pair ({p0[i]:.6g}, {p1[i]:.6g}) at step {m} of sample "
                f"{first_index + i} is not a probability distribution",
                step=m,
                index=first_index + i,
                module="sampler",
            )

        # renormalise the pair from the ratio of the two determinants
        l0 = np.where(s0 <= 0, -np.inf, l0)
        l1 = np.where(s1 <= 0, -np.inf, l1)
        log_r = np.minimum(l0, l1) - np.maximum(l0, l1)
        log_norm = np.log1p(np.exp(log_r))
        log_q1 = np.where(l1 >= l0, -log_norm, log_r - log_norm)
        log_q0 = np.where(l1 >= l0, log_r - log_norm, -log_norm)

        bit = uniforms[:, m] < np.exp(log_q1)
        x[:, m] = bit
        ones += bit
        log_cond[:, m] = np.where(bit, log_q1, log_q0)
        lp_prev = np.where(bit, l1, l0)
    return x, log_cond


def _sum_logs(log_cond):
    return np.array([math.fsum(row) for row in log_cond])


def draw(cov, num_samples, seed, workers=1):
    """Array form of :func:`sample_batch`: returns ``(x, log_prob)``.

    ``x`` has shape ``(num_samples, 2L)``.  Sample ``i`` consumes ``2L``
    uniforms from :func:`sample_stream` ``(seed, i)``, so the output is a
    function of ``(cov, seed)`` alone.
    """
    cov = as_covariance(cov)
    cfg = SamplerConfig(seed=seed, num_samples=num_samples, workers=workers)
    n = 2 * cov.L
    uniforms = np.empty((cfg.num_samples, n))
    for i in range(cfg.num_samples):
        uniforms[i] = sample_stream(cfg.seed, i).random(n)

    starts = list(range(0, cfg.num_samples, CHUNK))

    def job(s):
        return _draw_chunk(cov.gamma, uniforms[s : s + CHUNK], first_index=s)

    if cfg.workers == 1 or len(starts) == 1:
        parts = [job(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(job, starts))
    x = np.concatenate([p[0] for p in parts])
    log_prob = _sum_logs(np.concatenate([p[1] for p in parts]))
    return x, log_prob


def sample_one(cov, rng):
    """One string drawn from the characteristic distribution of ``cov``."""
    cov = as_covariance(cov)
    u = rng.random(2 * cov.L)
    x, log_cond = _draw_chunk(cov.gamma, u[None, :])
    return MajoranaSample(x[0], float(_sum_logs(log_cond)[0]))


def sample_batch(cov, cfg):
    """``cfg.num_samples`` independent samples, ordered by sample index."""
    x, log_prob = draw(cov, cfg.num_samples, cfg.seed, cfg.workers)
    return [MajoranaSample(xi, float(lp)) for xi, lp in zip(x, log_prob)]


def samples_to_arrays(samples):
    """``(x, log_prob)`` arrays from a list of :class:`MajoranaSample`."""
    if isinstance(samples, tuple):
        x, lp = samples
        return np.asarray(x, dtype=np.uint8), np.asarray(lp, dtype=float)
    x = np.array([s.x for s in samples], dtype=np.uint8)
    lp = np.array([s.log_prob for s in samples], dtype=float)
    return x, lp


def write_samples_csv(samples, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["sample_index", "x", "log_prob"])
    for i, s in enumerate(samples):
        w.writerow([i, s.bits, repr(float(s.log_prob))])


def read_samples_csv(fh):
    out = []
    for row in csv.DictReader(fh):
        x = np.array([int(c) for c in row["x"]], dtype=np.uint8)
        out.append(MajoranaSample(x, float(row["log_prob"])))
    return out


def samples_to_json(samples):
    return json.dumps(
        [{"sample_index": i, "x": s.bits, "log_prob": float(s.log_prob)} for i, s in enumerate(samples)]
    )


def samples_from_json(text):
    return [
        MajoranaSample(np.array([int(c) for c in r["x"]], dtype=np.uint8), float(r["log_prob"]))
        for r in json.loads(text)
    ]


def log_prob_exact(cov, x):
    """``log pi(x)`` from the Pfaffian of ``Gamma|_x`` (independent of the sampler)."""
    cov = as_covariance(cov)
    x = majorana_string(x, cov.L)
    w = wick_expectation(cov, x)
    if w.sign == 0:
        return -np.inf
    return 2 * w.log_abs - cov.L * np.log(2.0) - log_purity(cov)
