"""
Ideal bases from null directions
================================

A steering vector of a uniform linear array is a geometric sequence in the
unit-circle root of its direction.  Weight vectors whose polynomial vanishes at
the conjugated roots place exact nulls there, and all of them are spanned by
the columns of one Toeplitz matrix.
"""

# %%
import numpy as np

from idealsdp import ArrayGeometry, ideal_basis, variety_from_directions
from idealsdp.polyideal import elementary_symmetric, generator_poly, Variety

# Viete coefficients of (x - 1)(x - 2)(x - 3)
print("e_k:", [elementary_symmetric([1, 2, 3], k) for k in range(4)])
print("generator:", generator_poly(Variety([1, 2, 3])).coeffs.real)

# %%
# Two nulls on an 8-element half-wavelength array.
geom = ArrayGeometry(8)
V = variety_from_directions(geom, [-30.0, 45.0])
basis = ideal_basis(V, geom.N)
print("Q shape:", basis.Q.shape)
print("Toeplitz:", np.allclose(basis.Q[1:, 1:], basis.Q[:-1, :-1]))

# %%
# Every combination of the columns is blind in the null directions.
from idealsdp import steering_matrix

A = steering_matrix(geom, [-30.0, 45.0, 10.0])
w = basis.Q @ (np.arange(1, basis.K + 1) * (1 - 0.5j))
print("|a^H w| at -30, 45, 10 deg:", np.abs(A.conj().T @ w))
