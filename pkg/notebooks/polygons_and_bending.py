"""
Framed polygons and bending
===========================

A 2 x n complex matrix whose rows are orthonormal up to scale gives a
closed polygon in R^3 through the Hopf map. Rotating the chain on one side
of a diagonal about that diagonal keeps it closed.
"""

import numpy as np

from toric import configs
from toric.polygon import (
    bend,
    diagonal_length,
    edges_of,
    ky_canonicalize,
    project_to_zero_level,
    random_rotation,
    sample_linkage,
    stratum_signature,
)
from toric.tree import fan_triangulation

rng = np.random.default_rng(0)

# %%
# Project a random matrix to the zero level and read off its edges.
A = project_to_zero_level(rng.standard_normal((2, 7)) + 1j * rng.standard_normal((2, 7)))
P = edges_of(A)
print("side lengths:", P.side_lengths.round(4))
print("closure residual: %.1e" % P.closure_residual)

# %%
# Prescribed side lengths. Lengths outside D_n raise InfeasibleError.
Q = sample_linkage([1.0, 1.0, 1.0, 1.0, 1.5], seed=3)
print("\nsampled sides:", Q.side_lengths.round(12))

# bending along (1, 3) leaves its length fixed and moves (2, 4)
for theta in np.linspace(0, np.pi, 5):
    B = bend(Q, (1, 3), theta)
    print(f"theta={theta:.2f}  |d13|={diagonal_length(B, 1, 3):.6f}  |d24|={diagonal_length(B, 2, 4):.6f}")

# %%
# A bowtie is a hexagon whose middle diagonal (1, 4) has length zero.
# The two triangles can spin independently, and canonicalization forgets this.
t6 = fan_triangulation(6)
bows = [configs.random_bowtie(rng) for _ in range(5)]
print("\nzero diagonals:", sorted(stratum_signature(bows[0], t6).S))
reps = [ky_canonicalize(b, t6) for b in bows]
print("spread before: %.3f" % max(np.abs(b.edges - bows[0].edges).max() for b in bows))
print("spread after:  %.1e" % max(np.abs(r.edges - reps[0].edges).max() for r in reps))

# a global rotation is also absorbed
R = random_rotation(rng)
print("rotated copy:  %.1e" % np.abs(ky_canonicalize(bows[0].rotated(R), t6).edges - reps[0].edges).max())
