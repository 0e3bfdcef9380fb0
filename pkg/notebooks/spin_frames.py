"""
Spin frames on a decomposed tree
================================

Cutting the dual tree at every internal edge leaves one tripod per
triangle. A closed polygon with a unit quaternion on each edge extends to
frames on all tripod slots, and bending lifts to a phase on one glued pair.
"""

import numpy as np

from toric.frames import (
    act,
    bend_lift,
    extend_framing,
    frames_of_polygon,
    hamiltonian_ledger,
    normalize,
    polygon_of,
    qrandom,
    random_phases,
    restrict_to_leaves,
)
from toric.polygon import bend, ky_canonicalize, random_polygon
from toric.tree import decompose, dual_tree, random_triangulation

rng = np.random.default_rng(1)
t = random_triangulation(7, rng)
forest = decompose(dual_tree(t))
print("diagonals:", sorted(t.diagonals))
print("tripods:", [forest.tree.triangle_of_vertex[v] for v in forest.order])

P = random_polygon(7, rng)
E = frames_of_polygon(P, random_phases(7, rng))
T = extend_framing(E, forest)
print("normalized:", T.is_normalized(), " leaves unchanged:", restrict_to_leaves(T) == E)

# %%
# lambda on a glued slot is twice the diagonal length
for row in hamiltonian_ledger(T)["rows"]:
    if row["kind"] == "diagonal":
        print(f"slot {row['slot']}  side {row['side']}  lambda={row['lambda']:.6f}  2*len={2 * row['length']:.6f}")

# %%
# Rotating each tripod independently breaks the gluing; normalize repairs it.
moved = act(T, [qrandom(rng) for _ in range(forest.num_tripods)])
N, witness = normalize(moved)
print("\nafter random rotations:", moved.is_normalized(), " after normalize:", N.is_normalized())

# %%
# The phase t = exp(i theta / 2) on an internal edge bends by theta.
edge = next(iter(forest.glued))
side = forest.tree.sides[edge]
theta = 0.9
lifted = ky_canonicalize(polygon_of(bend_lift(T, edge, np.exp(0.5j * theta)).leaves()), t)
direct = ky_canonicalize(bend(P, side, theta), t)
print(f"\nbend along {side}: lift vs direct differ by {np.abs(lifted.edges - direct.edges).max():.1e}")
flipped = ky_canonicalize(polygon_of(bend_lift(T, edge, -np.exp(0.5j * theta)).leaves()), t)
print(f"t and -t differ by {np.abs(flipped.edges - lifted.edges).max():.1e}")
