"""
Kempe graphs and the tree weighting
===================================

A triangulation of the n-gon has a trivalent dual tree. Path lengths in
that tree weight the Pluecker coordinates, and straightening a product of
two Kempe graphs always has a single heaviest term.
"""

import itertools

import numpy as np

from toric.kempe import KempeGraph, induced_weighting, star_product, weighting_to_kempe
from toric.pluecker import initial_ideal, phi, straighten
from toric.tree import Triangulation, decompose, dual_tree, fan_triangulation, path_weight, symmetric_hexagon

# the two hexagon trees: three diagonals meeting in a central triangle, and a zigzag
sym = dual_tree(symmetric_hexagon())
zig = dual_tree(Triangulation(6, frozenset({(1, 3), (3, 6), (4, 6)})))
for name, tree in (("symmetric", sym), ("zigzag", zig)):
    W = np.zeros((6, 6), dtype=int)
    for i, j in itertools.combinations(range(1, 7), 2):
        W[i - 1, j - 1] = W[j - 1, i - 1] = path_weight(tree, i, j)
    print(f"{name} tree, leaf-to-leaf path lengths:\n{W}\n")

# %%
# Straightening. Z13 Z24 crosses, so it expands into the two noncrossing
# pairings. Under the fan(4) tree they weigh 4 and 6.
fan4 = dual_tree(fan_triangulation(4))
a, b = KempeGraph(4, [(1, 3)]), KempeGraph(4, [(2, 4)])
for g, c in straighten(a, b).sorted_terms():
    print(f"{c:+d} * {list(g.chords())}  weight {g.weight(fan4)}")
print("star product:", list(star_product(a, b, fan4).chords()))

# %%
# Kempe graphs and admissible edge weightings carry the same information.
g = KempeGraph(6, [(1, 4), (1, 4), (2, 3), (5, 6)])
w = induced_weighting(g, sym)
print("\nedge weights:", w.w)
print("back to chords:", list(weighting_to_kempe(w).chords()))

# %%
# Every Pluecker quadric has a binomial initial form.
for q, form in initial_ideal(fan4):
    print("\nquadric", q, "->", {tuple(m.chords()): c for m, c in form.items()})

# %%
# On the symmetric tree, Z14 factors through three of the four triangles.
x = phi(1, 4, decompose(sym))
print("\ntripod exponents of Z14:", x.x)
