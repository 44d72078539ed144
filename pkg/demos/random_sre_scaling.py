"""How far random Gaussian states sit below the Haar value L log 2.

For every size we draw a few Haar-random Gaussian states, sample 2000
Majorana strings from each and average the filtered SRE.  The deficit
L log 2 - Mt grows only logarithmically; its slope against log L is the
coefficient a_alpha.  With this small run the slopes are rough, the
acceptance suite repeats it with 100 states per size.
"""

import math

import numpy as np

from fgmagic.models import sweep_random

Ls = [8, 12, 16, 24]
alphas = [1, 2]
records = sweep_random(Ls, alphas, realizations=10, samples_per_state=2000, seed=7)

print(f"{'L':>3} {'alpha':>5} {'Mt':>9} {'stderr':>8} {'L log2 - Mt':>12}")
for r in records:
    print(f"{r.L_or_ell:>3} {r.alpha:>5g} {r.m_filtered_mean:>9.4f} {r.m_filtered_stderr:>8.4f} "
          f"{r.L_or_ell * math.log(2) - r.m_filtered_mean:>12.4f}")

for a in alphas:
    m = np.array([r.m_filtered_mean for r in records if r.alpha == a])
    deficit = np.array(Ls) * math.log(2) - m
    slope, _ = np.polyfit(np.log(Ls), deficit, 1)
    print(f"alpha={a}: fitted a = {slope:.2f}")
