"""Closed-form ensemble averages for random number-conserving Gaussian states.

The average inverse participation ratio over Slater states of ``N``
particles in ``L`` modes with Haar-random orbitals is::

    E[I_alpha] = C(L, N) * prod_{j=0}^{alpha-1} (j+N)! (j+L-N)! / (j! (j+L)!)

Its annealed entropy ``log(E[I_alpha]) / (1 - alpha)`` grows as
``L h(n) - (1+alpha)/2 log L + c(n; alpha)`` at fixed filling ``n = N/L``,
with ``h`` the binary entropy.  Expanding every factorial with Stirling's
formula gives the constant::

    c(n; alpha) = -log(2 pi)/2 - (1+alpha)/2 log(n(1-n)) + log G(alpha+1)/(alpha-1)

where ``G`` is the Barnes G-function, ``G(a+1) = prod_{k<a} k!``.
"""

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from .errors import InputError


@dataclass(frozen=True)
class EnsembleSpec:
    L: int
    N: int
    alpha: int = 2

    def __post_init__(self):
        if not 0 <= self.N <= self.L:
            raise InputError("need 0 <= N <= L")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise InputError("alpha must be a positive integer")

    @property
    def n(self):
        return self.N / self.L


def _spec(spec_or_L, N=None, alpha=None):
    if isinstance(spec_or_L, EnsembleSpec):
        return spec_or_L
    return EnsembleSpec(int(spec_or_L), int(N), int(alpha))


def _ipr_ratio(spec):
    """``E[I_alpha]`` as an exact fraction of factorial products."""
    L, N, a = spec.L, spec.N, int(spec.alpha)
    num = math.comb(L, N)
    den = 1
    for j in range(a):
        num *= math.factorial(j + N) * math.factorial(j + L - N)
        den *= math.factorial(j) * math.factorial(j + L)
    return Fraction(num, den)


def log_avg_ipr_exact(spec_or_L, N=None, alpha=None):
    spec = _spec(spec_or_L, N, alpha)
    if spec.alpha == 1 or spec.N in (0, spec.L):
        return 0.0
    q = _ipr_ratio(spec)
    v = float(q)
    if v > 1e-300:
        return math.log(v)
    return math.log(q.numerator) - math.log(q.denominator)


def avg_ipr_exact(spec_or_L, N=None, alpha=None):
    """Exact ensemble average of ``I_alpha``; accepts a spec or ``(L, N, alpha)``."""
    spec = _spec(spec_or_L, N, alpha)
    if spec.alpha == 1 or spec.N in (0, spec.L):
        return 1.0
    return float(_ipr_ratio(spec))


def annealed_pre(spec_or_L, N=None, alpha=None):
    """Annealed participation entropy ``log(E[I_alpha]) / (1 - alpha)``."""
    spec = _spec(spec_or_L, N, alpha)
    if spec.alpha == 1:
        raise InputError("annealed PRE needs alpha >= 2")
    return log_avg_ipr_exact(spec) / (1.0 - spec.alpha)


def log_barnes_g(k):
    """``log G(k)`` for integer ``k >= 1`` via ``G(k+1) = G(k) * (k-1)!``."""
    if int(k) != k or k < 1:
        raise InputError("Barnes G is only evaluated at positive integers")
    return float(sum(math.lgamma(m + 1) for m in range(int(k) - 1)))


def binary_entropy(n):
    if n in (0, 1):
        return 0.0
    return float(-n * np.log(n) - (1 - n) * np.log(1 - n))


def pre_constant(n, alpha):
    """Size-independent term ``c(n; alpha)`` of the annealed PRE expansion."""
    if not 0 < n < 1:
        raise InputError("filling must lie strictly between 0 and 1")
    if int(alpha) != alpha or alpha < 2:
        raise InputError("alpha must be an integer >= 2")
    return float(
        -0.5 * np.log(2 * np.pi)
        - 0.5 * (1 + alpha) * np.log(n * (1 - n))
        + log_barnes_g(alpha + 1) / (alpha - 1)
    )


def avg_pre_asymptotic(spec_or_L, N=None, alpha=None, n=None):
    """Large-``L`` expansion of the annealed PRE at filling ``N/L`` (or ``n``)."""
    spec = _spec(spec_or_L, N, alpha)
    n = spec.n if n is None else n
    L, a = spec.L, int(spec.alpha)
    return float(L * binary_entropy(n) - 0.5 * (1 + a) * np.log(L) + pre_constant(n, a))


def haar_leading_reference(L):
    """Extensive term ``L log 2`` shared by Haar-random states."""
    if L < 1:
        raise InputError("L must be >= 1")
    return float(L * np.log(2.0))


IPR_COLUMNS = ["L", "N", "alpha", "ipr_exact", "pre_annealed", "pre_asymptotic"]


def ipr_table(Ls, Ns, alphas):
    """Rows of exact IPR, annealed PRE and its expansion for every combination.

    ``Ns`` may contain fractions in (0, 1), read as fillings and rounded to
    the nearest particle number; duplicates collapse and ``N > L`` is skipped.
    Undefined entries are left empty.
    """
    rows = []
    for L in Ls:
        for N in sorted({int(round(v * L)) if 0 < v < 1 else int(v) for v in Ns}):
            if N > L:
                continue
            for a in alphas:
                spec = EnsembleSpec(L, N, a)
                row = {"L": L, "N": N, "alpha": a, "ipr_exact": avg_ipr_exact(spec)}
                row["pre_annealed"] = annealed_pre(spec) if a >= 2 else ""
                row["pre_asymptotic"] = avg_pre_asymptotic(spec) if a >= 2 and 0 < N < L else ""
                rows.append(row)
    return rows


def write_ipr_csv(rows, fh):
    w = csv.DictWriter(fh, fieldnames=IPR_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
