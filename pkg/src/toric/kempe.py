"""Kempe graphs, tree weightings and the semigroup product ``*_T``.

A Kempe graph is a multiset of chords on the cyclically ordered vertices
``1..n`` with no two chords crossing. Each graph induces a weighting of the
edges of a trivalent tree (how many chord paths run through each edge); the
admissible weightings are exactly the images, and the map is a bijection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import AdmissibilityError, DegenerateInputError, InvalidPairError, SizeMismatchError, StructureError
from .tree import TrivalentTree, path_weight

Chord = Tuple[int, int]


def crossing(c1: Chord, c2: Chord) -> bool:
    """True iff the chords interleave on the circle."""
    (i, j), (k, l) = sorted((tuple(sorted(c1)), tuple(sorted(c2))))
    return i < k < j < l


def _normalize(n: int, chords) -> Tuple[Tuple[Chord, int], ...]:
    counts: Dict[Chord, int] = {}
    if isinstance(chords, Mapping):
        items = chords.items()
    else:
        # bare chords (i, j) or canonical ((i, j), mult) pairs
        items = [(c[0], c[1]) if isinstance(c[0], (tuple, list)) else (c, 1) for c in chords]
    for c, m in items:
        i, j = sorted(map(int, c))
        if i == j:
            raise InvalidPairError(f"loop {c} is not a chord")
        if not (1 <= i and j <= n):
            raise InvalidPairError(f"chord {c} out of range for n={n}")
        if m < 0:
            raise StructureError(f"negative multiplicity for chord {c}")
        if m:
            counts[(i, j)] = counts.get((i, j), 0) + int(m)
    return tuple(sorted(counts.items()))


@dataclass(frozen=True)
class ChordMultiset:
    """A multiset of chords, stored as a sorted ``((i, j), multiplicity)`` tuple.

    Accepts either a mapping ``{(i, j): mult}`` or an iterable of chords with
    repeats.
    """

    n: int
    edges: Tuple[Tuple[Chord, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", _normalize(self.n, self.edges))

    @classmethod
    def from_chords(cls, n: int, chords: Iterable[Chord]):
        return cls(n, tuple(chords))

    @property
    def counts(self) -> Dict[Chord, int]:
        return dict(self.edges)

    def chords(self) -> Iterator[Chord]:
        """Chords with repetition, in sorted order."""
        for c, m in self.edges:
            for _ in range(m):
                yield c

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.edges)

    @property
    def multidegree(self) -> Tuple[int, ...]:
        v = [0] * self.n
        for (i, j), m in self.edges:
            v[i - 1] += m
            v[j - 1] += m
        return tuple(v)

    def crossing_pairs(self) -> Iterator[Tuple[Chord, Chord]]:
        support = [c for c, _ in self.edges]
        for c1, c2 in itertools.combinations(support, 2):
            if crossing(c1, c2):
                yield c1, c2

    def is_noncrossing(self) -> bool:
        return next(self.crossing_pairs(), None) is None

    def weight(self, tree: TrivalentTree) -> int:
        return graph_weight(self, tree)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[i, j, m] for (i, j), m in self.edges]}


@dataclass(frozen=True)
class KempeGraph(ChordMultiset):
    """A noncrossing chord multiset; raises ``StructureError`` on a crossing."""

    def __post_init__(self):
        super().__post_init__()
        bad = next(self.crossing_pairs(), None)
        if bad is not None:
            raise StructureError(f"chords {bad[0]} and {bad[1]} cross")

    def __mul__(self, other: "KempeGraph") -> ChordMultiset:
        """Concatenation of edge multisets (the monomial product, unstraightened)."""
        if self.n != other.n:
            raise SizeMismatchError(f"n={self.n} vs n={other.n}")
        c = self.counts
        for e, m in other.edges:
            c[e] = c.get(e, 0) + m
        return ChordMultiset(self.n, c)


GraphLike = Union[ChordMultiset, KempeGraph]


def _check_size(g: ChordMultiset, tree: TrivalentTree):
    if g.n != tree.n:
        raise SizeMismatchError(f"graph has n={g.n} but tree has n={tree.n}")


def graph_weight(g: ChordMultiset, tree: TrivalentTree) -> int:
    """Sum of leaf-path lengths over the chords, with multiplicity."""
    _check_size(g, tree)
    return sum(m * path_weight(tree, i, j) for (i, j), m in g.edges)


@dataclass(frozen=True)
class EdgeWeighting:
    """Nonnegative integer weights on the edges of a tree, indexed by edge id."""

    tree: TrivalentTree
    w: Tuple[int, ...]

    def __post_init__(self):
        w = self.w
        if isinstance(w, Mapping):
            vals = [0] * len(self.tree.edges)
            for k, v in w.items():
                vals[int(k)] = int(v)
            w = vals
        w = tuple(int(x) for x in w)
        if len(w) != len(self.tree.edges):
            raise SizeMismatchError(f"need {len(self.tree.edges)} weights, got {len(w)}")
        if any(x < 0 for x in w):
            raise AdmissibilityError("weights must be nonnegative")
        object.__setattr__(self, "w", w)

    def __add__(self, other: "EdgeWeighting") -> "EdgeWeighting":
        if other.tree != self.tree:
            raise SizeMismatchError("weightings live on different trees")
        return EdgeWeighting(self.tree, tuple(a + b for a, b in zip(self.w, other.w)))

    def __getitem__(self, edge_id: int) -> int:
        return self.w[edge_id]

    @property
    def degree(self):
        """Half the total weight on leaf edges."""
        total = sum(self.w[e] for e in self.tree.leaf_edges)
        return total // 2 if total % 2 == 0 else total / 2

    @property
    def leaf_weights(self) -> Tuple[int, ...]:
        return tuple(self.w[e] for e in self.tree.leaf_edges)

    def to_json(self) -> dict:
        return {"tree": self.tree.to_json(), "w": {str(k): v for k, v in enumerate(self.w)}}


def induced_weighting(g: ChordMultiset, tree: TrivalentTree) -> EdgeWeighting:
    """Count, for each tree edge, the chord paths running through it."""
    _check_size(g, tree)
    w = [0] * len(tree.edges)
    for (i, j), m in g.edges:
        for e in tree.leaf_path(i, j):
            w[e] += m
    return EdgeWeighting(tree, tuple(w))


def first_violation(w: EdgeWeighting) -> Optional[int]:
    """The first internal vertex where parity or a triangle inequality fails."""
    tree = w.tree
    for v in tree.internal_vertices:
        a, b, c = (w.w[e] for e in tree.incident_edges(v))
        if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
            return v
    return None


def is_admissible(w: EdgeWeighting) -> bool:
    return first_violation(w) is None


def _local_arcs(w: EdgeWeighting, v: int) -> Dict[int, int]:
    """Arc counts at the triangle of ``v``, keyed by the shared triangle vertex."""
    tree = w.tree
    a, b, c = tree.triangle_of_vertex[v]
    wab = w.w[tree.edge_of_side[(a, b)]]
    wbc = w.w[tree.edge_of_side[(b, c)]]
    wac = w.w[tree.edge_of_side[(a, c)]]
    return {a: (wab + wac - wbc) // 2, b: (wab + wbc - wac) // 2, c: (wbc + wac - wab) // 2}


def weighting_to_kempe(w: EdgeWeighting) -> KempeGraph:
    """The unique Kempe graph inducing an admissible weighting.

    Strands are laid along each dual polygon side in order from its smaller
    vertex; inside each triangle, arcs between two sides hug the vertex they
    share. Tracing every strand from leaf to leaf yields a noncrossing
    diagram.
    """
    bad = first_violation(w)
    if bad is not None:
        raise AdmissibilityError(f"weighting is not admissible at internal vertex {bad}", vertex=bad)
    tree = w.tree
    n = tree.n
    arcs = {v: _local_arcs(w, v) for v in tree.internal_vertices}
    owners: Dict[Tuple[int, int], list] = {}
    for v, tri in tree.triangle_of_vertex.items():
        a, b, c = tri
        for s in ((a, b), (b, c), (a, c)):
            owners.setdefault(s, []).append(v)
    width = {s: w.w[k] for k, s in enumerate(tree.sides)}

    def step(v: int, side, pos: int):
        a, b, c = tree.triangle_of_vertex[v]
        x = arcs[v]
        if side == (a, b):
            if pos < x[a]:
                return (a, c), pos
            k = width[(a, b)] - 1 - pos
            return (b, c), k
        if side == (b, c):
            if pos < x[b]:
                return (a, b), width[(a, b)] - 1 - pos
            k = width[(b, c)] - 1 - pos
            return (a, c), width[(a, c)] - 1 - k
        # side == (a, c)
        if pos < x[a]:
            return (a, b), pos
        k = width[(a, c)] - 1 - pos
        return (b, c), width[(b, c)] - 1 - k

    leaf_of_side = {tree.sides[tree.leaf_edges[i - 1]]: i for i in range(1, n + 1)}
    counts: Dict[Chord, int] = {}
    for leaf in range(1, n + 1):
        side0 = tree.sides[tree.leaf_edges[leaf - 1]]
        for pos0 in range(width[side0]):
            side, pos = side0, pos0
            (v,) = owners[side]
            while True:
                side, pos = step(v, side, pos)
                if side in leaf_of_side:
                    other = leaf_of_side[side]
                    break
                u, u2 = owners[side]
                v = u2 if u == v else u
            if other > leaf:
                counts[(leaf, other)] = counts.get((leaf, other), 0) + 1
    return KempeGraph(n, counts)


def star_product(g1: KempeGraph, g2: KempeGraph, tree: TrivalentTree) -> KempeGraph:
    """``g1 *_T g2``: the Kempe graph whose weighting is the sum of the two."""
    if g1.n != g2.n:
        raise SizeMismatchError(f"n={g1.n} vs n={g2.n}")
    return weighting_to_kempe(induced_weighting(g1, tree) + induced_weighting(g2, tree))


def r_membership(g: ChordMultiset, r: Sequence[int]) -> Optional[int]:
    """Return ``N`` if ``multidegree(g) == N * r``, else ``None``."""
    r = tuple(int(x) for x in r)
    if len(r) != g.n:
        raise SizeMismatchError(f"r has length {len(r)} but n={g.n}")
    if any(x < 0 for x in r):
        raise DegenerateInputError("r must be nonnegative")
    v = g.multidegree
    if not any(r):
        return 0 if not any(v) else None
    k = next(i for i, x in enumerate(r) if x)
    if v[k] % r[k]:
        return None
    N = v[k] // r[k]
    return N if all(vi == N * ri for vi, ri in zip(v, r)) else None


def kempe_graphs(n: int, max_degree: int) -> Iterator[KempeGraph]:
    """All Kempe graphs on ``n`` vertices with degree at most ``max_degree``."""
    chords = list(itertools.combinations(range(1, n + 1), 2))

    def rec(start: int, chosen: list, remaining: int):
        yield list(chosen)
        if remaining == 0:
            return
        for idx in range(start, len(chords)):
            c = chords[idx]
            if any(crossing(c, d) for d in chosen):
                continue
            chosen.append(c)
            yield from rec(idx, chosen, remaining - 1)
            chosen.pop()

    for combo in rec(0, [], max_degree):
        yield KempeGraph.from_chords(n, combo)


def admissible_weightings(tree: TrivalentTree, max_degree: int) -> Iterator[EdgeWeighting]:
    """All admissible weightings of ``tree`` with degree at most ``max_degree``.

    Independent of the Kempe-graph side: leaf weights are enumerated directly
    and internal weights are filled in tripod by tripod from the outside in,
    keeping only values allowed by parity and the triangle inequalities.
    """
    from .tree import decompose

    forest = decompose(tree)
    n = tree.n
    order = range(forest.num_tripods - 1, 0, -1)

    def leaf_vectors(k: int, budget: int):
        if k == n:
            yield ()
            return
        for x in range(budget + 1):
            for rest in leaf_vectors(k + 1, budget - x):
                yield (x,) + rest

    def fill(w: list, todo: list):
        if not todo:
            a, b, c = (w[e] for e in forest.slot_edges[0])
            if (a + b + c) % 2 == 0 and a <= b + c and b <= a + c and c <= a + b:
                yield EdgeWeighting(tree, tuple(w))
            return
        i = todo[0]
        top, e1, e2 = forest.slot_edges[i]
        a, b = w[e1], w[e2]
        for x in range(abs(a - b), a + b + 1, 2):
            w[top] = x
            yield from fill(w, todo[1:])
        w[top] = 0

    for leaves in leaf_vectors(0, 2 * max_degree):
        if sum(leaves) % 2:
            continue
        w = [0] * len(tree.edges)
        for leaf, x in enumerate(leaves, start=1):
            w[tree.leaf_edges[leaf - 1]] = x
        yield from fill(w, list(order))
