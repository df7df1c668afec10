"""
Blocking matrices for a sidelobe canceller
==========================================

The rows of a blocking matrix must annihilate the look-direction steering
vectors, so they are exactly the transposed ideal basis.
"""

# %%
import numpy as np

from idealsdp import ArrayGeometry
from idealsdp.gsc import blocking_matrix, verify_blocking

geom = ArrayGeometry(10)
B = blocking_matrix(geom.N, [0.0, 20.0], geom)
print("W_B shape:", B.W_B.shape)

# %%
rep = verify_blocking(B, [0.0, 20.0, -35.0, 60.0], geom)
for a, r in zip(rep.directions, rep.residuals):
    print(f"{a:6.1f} deg  |W_B a| = {r:.2e}")

# %%
# An orthonormalized variant keeps the same row space.
Bo = blocking_matrix(geom.N, [0.0, 20.0], geom, orthonormalize=True)
print("orthonormal rows:", np.allclose(Bo.W_B @ Bo.W_B.conj().T, np.eye(Bo.W_B.shape[0])))
