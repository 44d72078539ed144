"""Two independent routes to the same Pauli spectrum.

A random Gaussian state on three modes is built twice: as a 6x6 covariance
matrix, and as an 8-component statevector obtained by applying the Givens
factors of the same rotation to |000>.  The Pfaffian formula and a brute-force
Pauli enumeration should then give the same characteristic distribution.
"""

import numpy as np

from fgmagic import linalg, oracle
from fgmagic.gaussian import rotate, vacuum_covariance
from fgmagic.magic import characteristic_distribution, sre_exact, string_from_index

L = 3
rng = np.random.default_rng(1)
O = linalg.haar_orthogonal(2 * L, rng, special=True)

cov = rotate(vacuum_covariance(L), O)
psi = oracle.statevector_from_rotation(O, L)
print("largest |Gamma - Gamma_dense|:", np.abs(cov.gamma - oracle.dense_covariance(psi)).max())

# Majorana string x and the Pauli string it maps to under Jordan-Wigner
perm = [oracle.pauli_of_majorana(string_from_index(b, L), L) for b in range(4**L)]
pi = characteristic_distribution(cov)
pi_dense = oracle.exact_characteristic_distribution(psi)[perm]
print("largest |pi - pi_dense|:", np.abs(pi - pi_dense).max())

# The identity and the parity string both carry exactly 1/D for a pure state.
print("pi(identity), pi(parity):", pi[0], pi[-1], "  1/D =", 1 / 2**L)

for alpha in (1, 2, 3):
    m, mt = sre_exact(cov, alpha)
    m_o, mt_o = oracle.oracle_sre(psi, alpha)
    print(f"alpha={alpha}: M={m:.12f} (dense {m_o:.12f})   filtered={mt:.12f} (dense {mt_o:.12f})")
