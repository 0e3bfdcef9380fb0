"""Triangulations of the model n-gon, their dual trivalent trees and tripod forests.

Conventions used throughout the package:

* vertices of the model polygon are ``1..n``; polygon edge ``i`` joins vertex
  ``i`` to vertex ``i+1`` (vertex ``n+1`` is vertex ``1``);
* a *side* is a sorted vertex pair, so edge ``i < n`` is ``(i, i+1)`` and edge
  ``n`` is ``(1, n)``;
* leaf ``i`` of the dual tree sits on polygon edge ``i``;
* internal tree vertices are labelled ``n+1..2n-2``;
* tree edge ids are stable: leaf edge of leaf ``i`` is id ``i-1`` and the
  internal edges follow in the sorted order of their diagonals.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidPairError, InvalidSizeError, InvalidTriangulationError

Side = Tuple[int, int]
Slot = Tuple[int, int]


def polygon_side(n: int, i: int) -> Side:
    """Sorted vertex pair of polygon edge ``i``."""
    return (i, i + 1) if i < n else (1, n)


def crosses(d1: Side, d2: Side) -> bool:
    (a, b), (c, d) = sorted((tuple(sorted(d1)), tuple(sorted(d2))))
    return a < c < b < d


@dataclass(frozen=True)
class Triangulation:
    n: int
    diagonals: FrozenSet[Side]

    def __post_init__(self):
        if self.n < 3:
            raise InvalidSizeError(f"a polygon needs at least 3 vertices, got n={self.n}")
        diags = frozenset(tuple(sorted(map(int, d))) for d in self.diagonals)
        object.__setattr__(self, "diagonals", diags)
        n = self.n
        for a, b in diags:
            if not (1 <= a < b <= n):
                raise InvalidTriangulationError(f"diagonal {(a, b)} out of range for n={n}")
            if b - a < 2 or (a, b) == (1, n):
                raise InvalidTriangulationError(f"{(a, b)} joins adjacent vertices")
        if len(diags) != n - 3:
            raise InvalidTriangulationError(
                f"need exactly {n - 3} diagonals, got {len(diags)}"
            )
        for d1, d2 in itertools.combinations(sorted(diags), 2):
            if crosses(d1, d2):
                raise InvalidTriangulationError(f"diagonals {d1} and {d2} cross")

    @cached_property
    def sides(self) -> FrozenSet[Side]:
        return frozenset(polygon_side(self.n, i) for i in range(1, self.n + 1)) | self.diagonals

    @cached_property
    def triangles(self) -> Tuple[Tuple[int, int, int], ...]:
        """Triangles as sorted vertex triples, in lexicographic order."""
        sides = self.sides
        adj: Dict[int, set] = {}
        for a, b in sides:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        tris = []
        for a, b in sorted(sides):
            for c in adj[b]:
                if c > b and (a, c) in sides:
                    tris.append((a, b, c))
        tris.sort()
        if len(tris) != self.n - 2:
            raise InvalidTriangulationError("diagonal set does not triangulate the polygon")
        return tuple(tris)

    def to_json(self) -> dict:
        return {"n": self.n, "diagonals": [list(d) for d in sorted(self.diagonals)]}


def fan_triangulation(n: int) -> Triangulation:
    """All diagonals from the first vertex: ``{(1, k) : 3 <= k <= n-1}``."""
    if n < 3:
        raise InvalidSizeError(f"a polygon needs at least 3 vertices, got n={n}")
    return Triangulation(n, frozenset((1, k) for k in range(3, n)))


def all_triangulations(n: int) -> Iterator[Triangulation]:
    """Every triangulation of the convex n-gon (Catalan(n-2) of them)."""

    def rec(verts: Tuple[int, ...]) -> Iterator[FrozenSet[Side]]:
        if len(verts) < 3:
            yield frozenset()
            return
        a, b = verts[0], verts[-1]
        # the triangle on side (a, b) has apex verts[k]
        for k in range(1, len(verts) - 1):
            left, right = verts[: k + 1], verts[k:]
            for dl in rec(left):
                for dr in rec(right):
                    extra = set()
                    if k > 1:
                        extra.add((a, verts[k]))
                    if k < len(verts) - 2:
                        extra.add((verts[k], b))
                    yield dl | dr | frozenset(extra)

    for diags in rec(tuple(range(1, n + 1))):
        yield Triangulation(n, diags)


def random_triangulation(n: int, rng=None) -> Triangulation:
    """A random triangulation built by recursively picking an apex for side (1, n)."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    diags = set()
    stack = [tuple(range(1, n + 1))]
    while stack:
        verts = stack.pop()
        if len(verts) < 3:
            continue
        k = int(rng.integers(1, len(verts) - 1))
        if k > 1:
            diags.add((verts[0], verts[k]))
        if k < len(verts) - 2:
            diags.add((verts[k], verts[-1]))
        stack.append(verts[: k + 1])
        stack.append(verts[k:])
    return Triangulation(n, frozenset(diags))


@dataclass(frozen=True)
class TrivalentTree:
    """A trivalent tree with leaves ``1..n`` in cyclic order.

    ``edges[k]`` is the edge with id ``k``; ``leaf_edges[i-1]`` is the id of
    leaf ``i``'s edge. The tree must be dual to a triangulation of the model
    polygon: every internal edge must split the leaves into two cyclic
    intervals.
    """

    n: int
    edges: Tuple[Tuple[int, int], ...]
    leaf_edges: Tuple[int, ...]

    def __post_init__(self):
        n = self.n
        if n < 3:
            raise InvalidSizeError(f"a trivalent tree needs at least 3 leaves, got n={n}")
        edges = tuple(tuple(sorted(map(int, e))) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "leaf_edges", tuple(int(e) for e in self.leaf_edges))
        if len(edges) != 2 * n - 3:
            raise InvalidTriangulationError(f"expected {2 * n - 3} edges, got {len(edges)}")
        if len(self.leaf_edges) != n:
            raise InvalidTriangulationError("need one leaf edge per leaf")
        deg: Dict[int, int] = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        for leaf in range(1, n + 1):
            if deg.get(leaf) != 1:
                raise InvalidTriangulationError(f"leaf {leaf} must have degree 1")
            if leaf not in edges[self.leaf_edges[leaf - 1]]:
                raise InvalidTriangulationError(f"leaf_edges[{leaf - 1}] is not incident to leaf {leaf}")
        internal = [v for v in deg if not 1 <= v <= n]
        if len(internal) != n - 2 or any(deg[v] != 3 for v in internal):
            raise InvalidTriangulationError("need n-2 internal vertices of degree 3")
        # connectivity (with the edge count this gives acyclicity)
        seen = {1}
        queue = deque([1])
        while queue:
            u = queue.popleft()
            for v, _ in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        if len(seen) != len(deg):
            raise InvalidTriangulationError("tree is not connected")
        self.sides  # validates duality to a triangulation

    @cached_property
    def adjacency(self) -> Dict[int, Tuple[Tuple[int, int], ...]]:
        adj: Dict[int, list] = {}
        for k, (u, v) in enumerate(self.edges):
            adj.setdefault(u, []).append((v, k))
            adj.setdefault(v, []).append((u, k))
        return {u: tuple(sorted(nb, key=lambda t: t[1])) for u, nb in adj.items()}

    @property
    def leaves(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def internal_vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(v for v in self.adjacency if not 1 <= v <= self.n))

    @cached_property
    def internal_edges(self) -> Tuple[int, ...]:
        leaf = set(self.leaf_edges)
        return tuple(k for k in range(len(self.edges)) if k not in leaf)

    def is_leaf_edge(self, edge_id: int) -> bool:
        return edge_id in set(self.leaf_edges)

    def leaf_of_edge(self, edge_id: int) -> Optional[int]:
        u, v = self.edges[edge_id]
        return u if 1 <= u <= self.n else (v if 1 <= v <= self.n else None)

    def incident_edges(self, vertex: int) -> Tuple[int, ...]:
        return tuple(k for _, k in self.adjacency[vertex])

    def leaves_beyond(self, edge_id: int, from_vertex: int) -> FrozenSet[int]:
        """Leaves reachable across ``edge_id`` when standing at ``from_vertex``."""
        u, v = self.edges[edge_id]
        start = v if u == from_vertex else u
        out = set()
        seen = {from_vertex, start}
        stack = [start]
        while stack:
            x = stack.pop()
            if 1 <= x <= self.n:
                out.add(x)
            for y, _ in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return frozenset(out)

    @cached_property
    def sides(self) -> Tuple[Side, ...]:
        """Model-polygon side dual to each tree edge (indexed by edge id)."""
        n = self.n
        out: List[Side] = [None] * len(self.edges)  # type: ignore[list-item]
        for leaf in range(1, n + 1):
            out[self.leaf_edges[leaf - 1]] = polygon_side(n, leaf)
        for k in self.internal_edges:
            u, v = self.edges[k]
            part = self.leaves_beyond(k, u)
            if 1 in part:
                part = frozenset(range(1, n + 1)) - part
            lo, hi = min(part), max(part)
            if len(part) != hi - lo + 1 or len(part) < 2 or len(part) > n - 2:
                raise InvalidTriangulationError(
                    f"edge {k} does not split the leaves into cyclic intervals"
                )
            # polygon edges lo..hi run from vertex lo to vertex hi+1 (n+1 == 1)
            out[k] = tuple(sorted((lo, hi + 1 if hi < n else 1)))
        return tuple(out)

    @cached_property
    def triangulation(self) -> Triangulation:
        return Triangulation(self.n, frozenset(self.sides[k] for k in self.internal_edges))

    @cached_property
    def edge_of_side(self) -> Dict[Side, int]:
        return {s: k for k, s in enumerate(self.sides)}

    @cached_property
    def triangle_of_vertex(self) -> Dict[int, Tuple[int, int, int]]:
        out = {}
        for v in self.internal_vertices:
            verts = set()
            for k in self.incident_edges(v):
                verts.update(self.sides[k])
            if len(verts) != 3:
                raise InvalidTriangulationError(f"vertex {v} is not dual to a triangle")
            out[v] = tuple(sorted(verts))
        return out

    @cached_property
    def _leaf_paths(self) -> Dict[Tuple[int, int], Tuple[int, ...]]:
        paths = {}
        for i in self.leaves:
            parent: Dict[int, Tuple[int, int]] = {i: (0, -1)}
            queue = deque([i])
            while queue:
                x = queue.popleft()
                for y, k in self.adjacency[x]:
                    if y not in parent:
                        parent[y] = (x, k)
                        queue.append(y)
            for j in self.leaves:
                if j == i:
                    continue
                path = []
                x = j
                while x != i:
                    x, k = parent[x]
                    path.append(k)
                paths[(i, j)] = tuple(reversed(path))
        return paths

    def leaf_path(self, i: int, j: int) -> Tuple[int, ...]:
        """Edge ids on the unique path from leaf ``i`` to leaf ``j``."""
        if i == j:
            raise InvalidPairError(f"path needs two distinct leaves, got {i} twice")
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise InvalidPairError(f"{(i, j)} are not both leaves of a tree with n={self.n}")
        return self._leaf_paths[(i, j)]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges], "leaf_edges": list(self.leaf_edges)}


def dual_tree(t: Triangulation) -> TrivalentTree:
    """The trivalent tree dual to a triangulation, with the package's stable ids."""
    n = t.n
    tris = t.triangles
    vertex_of = {tri: n + 1 + k for k, tri in enumerate(tris)}
    owners: Dict[Side, List[int]] = {}
    for tri in tris:
        a, b, c = tri
        for s in ((a, b), (b, c), (a, c)):
            owners.setdefault(s, []).append(vertex_of[tri])
    edges = []
    for leaf in range(1, n + 1):
        (v,) = owners[polygon_side(n, leaf)]
        edges.append((leaf, v))
    for d in sorted(t.diagonals):
        u, v = owners[d]
        edges.append((u, v))
    return TrivalentTree(n, tuple(edges), tuple(range(n)))


def path_weight(tree: TrivalentTree, i: int, j: int) -> int:
    """Number of tree edges between leaves ``i`` and ``j``."""
    return len(tree.leaf_path(i, j))


def trivalent_order(tree: TrivalentTree) -> Tuple[int, ...]:
    """Order the internal vertices as tripods ``tau_1, ..., tau_{n-2}``.

    Tripods are peeled off the residual tree one at a time, last index first:
    an eligible tripod carries two leaves of the residual tree, and among the
    eligible ones we take the one holding the smallest leaf label (a cut-off
    branch is labelled by the smallest original leaf it contains). The tripod
    on leaf 1 is kept until last, so it becomes ``tau_1`` and every later
    tripod attaches to its predecessors along a single internal edge.
    """
    n = tree.n
    alive = set(tree.internal_vertices)
    if len(alive) == 1:
        return tuple(alive)
    anchor = next(v for v, _ in tree.adjacency[1])
    label: Dict[int, int] = {leaf: leaf for leaf in tree.leaves}
    removed: List[int] = []
    while len(alive) > 1:
        best = None
        for v in alive:
            if v == anchor:
                continue
            ends = [label[u] for u, _ in tree.adjacency[v] if u not in alive]
            if len(ends) >= 2:
                key = min(ends)
                if best is None or key < best[0]:
                    best = (key, v)
        key, v = best
        label[v] = key
        alive.remove(v)
        removed.append(v)
    removed.append(alive.pop())
    return tuple(reversed(removed))


@dataclass(frozen=True)
class DecomposedForest:
    """The tripod forest obtained by cutting every internal edge of a tree.

    ``order[i]`` is the tree vertex of tripod ``tau_{i+1}`` (0-based index
    ``i``). ``slot_edges[i]`` lists the tree edge under slots 0, 1, 2 of that
    tripod; slots run counter-clockwise round the dual triangle, starting at
    the attaching side for ``i > 0`` and at polygon edge 1 for ``i == 0``.
    ``distinguished[leaf-1]`` is the slot carrying that leaf, and
    ``glued[edge_id] = (plus, minus)`` pairs the two copies of an internal
    edge, ``plus`` lying in the earlier tripod.
    """

    tree: TrivalentTree
    order: Tuple[int, ...]
    slot_edges: Tuple[Tuple[int, int, int], ...]
    distinguished: Tuple[Slot, ...]
    glued: Dict[int, Tuple[Slot, Slot]] = field(hash=False, compare=False)

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def num_tripods(self) -> int:
        return len(self.order)

    @cached_property
    def slots(self) -> Tuple[Slot, ...]:
        return tuple((i, k) for i in range(self.num_tripods) for k in range(3))

    @cached_property
    def slot_of(self) -> Dict[Tuple[int, int], Slot]:
        """``(tripod index, tree edge id) -> slot``."""
        return {(i, e): (i, k) for i, es in enumerate(self.slot_edges) for k, e in enumerate(es)}

    def edge_of_slot(self, slot: Slot) -> int:
        i, k = slot
        return self.slot_edges[i][k]

    @cached_property
    def partner(self) -> Dict[Slot, Slot]:
        out = {}
        for plus, minus in self.glued.values():
            out[plus] = minus
            out[minus] = plus
        return out

    @cached_property
    def plus_slots(self) -> FrozenSet[Slot]:
        return frozenset(p for p, _ in self.glued.values())

    @cached_property
    def minus_slots(self) -> FrozenSet[Slot]:
        return frozenset(m for _, m in self.glued.values())

    def parent(self, i: int) -> Optional[int]:
        """Index of the earlier tripod that tripod ``i`` attaches to."""
        if i == 0:
            return None
        plus = self.partner[(i, 0)]
        return plus[0]

    def subtree(self, i: int) -> FrozenSet[int]:
        """Tripod ``i`` together with every later tripod hanging off it."""
        out = {i}
        for j in range(i + 1, self.num_tripods):
            if self.parent(j) in out:
                out.add(j)
        return frozenset(out)

    def quotient_edges(self) -> FrozenSet[FrozenSet[int]]:
        """Edges of the tree obtained by re-gluing the forest.

        Built only from ``order``, ``distinguished`` and ``glued``, so comparing
        with the original tree's edges is a genuine round-trip check.
        """
        edges = set()
        leaf_at = {slot: leaf for leaf, slot in enumerate(self.distinguished, start=1)}
        for i, v in enumerate(self.order):
            for k in range(3):
                slot = (i, k)
                if slot in leaf_at:
                    edges.add(frozenset((leaf_at[slot], v)))
                else:
                    j, _ = self.partner[slot]
                    edges.add(frozenset((v, self.order[j])))
        return frozenset(edges)


def _ccw_sides(tri: Tuple[int, int, int]) -> Tuple[Side, Side, Side]:
    a, b, c = tri
    return ((a, b), (b, c), (a, c))


def decompose(tree: TrivalentTree) -> DecomposedForest:
    order = trivalent_order(tree)
    position = {v: i for i, v in enumerate(order)}
    slot_edges = []
    for i, v in enumerate(order):
        sides = _ccw_sides(tree.triangle_of_vertex[v])
        if i == 0:
            start_side = polygon_side(tree.n, 1)
        else:
            earlier = [
                k for u, k in tree.adjacency[v] if u in position and position[u] < i
            ]
            if len(earlier) != 1:
                raise InvalidTriangulationError(f"tripod {i} attaches along {len(earlier)} edges")
            start_side = tree.sides[earlier[0]]
        s = sides.index(start_side)
        rotated = sides[s:] + sides[:s]
        slot_edges.append(tuple(tree.edge_of_side[x] for x in rotated))
    slot_of = {(i, e): (i, k) for i, es in enumerate(slot_edges) for k, e in enumerate(es)}
    distinguished = []
    for leaf in tree.leaves:
        e = tree.leaf_edges[leaf - 1]
        (v,) = [u for u in tree.edges[e] if u != leaf]
        distinguished.append(slot_of[(position[v], e)])
    glued = {}
    for e in tree.internal_edges:
        u, v = tree.edges[e]
        a, b = sorted((slot_of[(position[u], e)], slot_of[(position[v], e)]))
        glued[e] = (a, b)
    return DecomposedForest(tree, order, tuple(slot_edges), tuple(distinguished), glued)


def symmetric_hexagon() -> Triangulation:
    """The hexagon triangulation with a central triangle on vertices 1, 3, 5."""
    return Triangulation(6, frozenset({(1, 3), (3, 5), (1, 5)}))


def parse_diagonals(tokens: Sequence[str]) -> List[Side]:
    out = []
    for tok in tokens:
        a, b = tok.split(",")
        out.append((int(a), int(b)))
    return out
