"""Participation entropies of random Slater states.

The average IPR over Haar-random orbitals has a closed form.  We check it
against direct enumeration of the Fock amplitudes, compare the annealed
entropy with its large-L expansion, and put the sampled SRE density next to
the PRE density at a few fillings.
"""

import numpy as np

from fgmagic import analytics
from fgmagic.linalg import haar_unitary
from fgmagic.magic import pre_exact
from fgmagic.models import sweep_fixed_n

rng = np.random.default_rng(3)
L, N = 8, 4
draws = [pre_exact(haar_unitary(L, rng)[:, :N], 2).ipr for _ in range(2000)]
print(f"E[I_2] at L={L}, N={N}: closed form {analytics.avg_ipr_exact(L, N, 2):.6f}, "
      f"Monte Carlo {np.mean(draws):.6f} +- {np.std(draws) / np.sqrt(len(draws)):.6f}")

print("\nannealed S_2 at half filling against its expansion")
for L in (50, 100, 200, 400):
    exact = analytics.annealed_pre(L, L // 2, 2)
    print(f"  L={L:>3}: {exact:.4f}  expansion {analytics.avg_pre_asymptotic(L, L // 2, 2):.4f}")

L = 12
Ns = [2, 4, 6, 8, 10]
records = sweep_fixed_n([L], Ns, [2], realizations=5, samples_per_state=1000, seed=11)
print(f"\nL={L}:   n    M2/L    S2/L    h(n)")
for r in records:
    n = r.N_or_blank / L
    s2 = analytics.annealed_pre(L, r.N_or_blank, 2) / L
    print(f"      {n:.3f}  {r.m_filtered_mean / L:.3f}   {s2:.3f}   {analytics.binary_entropy(n):.3f}")
