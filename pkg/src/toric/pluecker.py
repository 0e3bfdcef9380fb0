"""Plücker brackets for Gr(2, n): straightening, tree-weight initial forms,
and the tripod exponent semigroup with the ring map ``Phi``.

Bracket ``Z_ij`` evaluates to the 2x2 minor on columns ``i, j`` of a 2 x n
matrix. A monomial is a chord multiset; a Kempe graph is a standard monomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import AdmissibilityError, GluingError, InvalidPairError, SizeMismatchError, StructureError
from .kempe import ChordMultiset, EdgeWeighting, KempeGraph, first_violation, graph_weight
from .tree import DecomposedForest, TrivalentTree, decompose


class PlueckerMonomial(ChordMultiset):
    """A product of brackets, possibly with crossing chords."""

    def weight(self, tree: TrivalentTree) -> int:
        return graph_weight(self, tree)


def _kempe_or_monomial(n: int, counts: Mapping) -> ChordMultiset:
    m = ChordMultiset(n, counts)
    return KempeGraph(n, m.edges) if m.is_noncrossing() else PlueckerMonomial(n, m.edges)


class BracketCombination(dict):
    """Integer combination of monomials, ``{monomial: coefficient}``.

    Zero coefficients are dropped on construction and on addition.
    """

    def __init__(self, terms=()):
        super().__init__()
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            self.add(m, c)

    def add(self, monomial: ChordMultiset, coef: int):
        c = self.get(monomial, 0) + coef
        if c:
            self[monomial] = c
        else:
            self.pop(monomial, None)

    def weights(self, tree: TrivalentTree) -> Dict[ChordMultiset, int]:
        return {m: graph_weight(m, tree) for m in self}

    def is_kempe(self) -> bool:
        return all(isinstance(m, KempeGraph) for m in self)

    def evaluate(self, A: np.ndarray) -> complex:
        return sum(c * evaluate(m, A) for m, c in self.items())

    def sorted_terms(self) -> List[Tuple[ChordMultiset, int]]:
        return sorted(self.items(), key=lambda mc: mc[0].edges)

    def to_json(self, tree: Optional[TrivalentTree] = None) -> dict:
        terms = []
        for m, c in self.sorted_terms():
            t = {"graph": m.to_json(), "coef": c}
            if tree is not None:
                t["weight"] = graph_weight(m, tree)
            terms.append(t)
        return {"terms": terms}


def evaluate(m: ChordMultiset, A: np.ndarray) -> complex:
    """Value of a monomial on a 2 x n matrix (brackets are 2x2 minors)."""
    A = np.asarray(A)
    if A.shape != (2, m.n):
        raise SizeMismatchError(f"matrix shape {A.shape} does not fit n={m.n}")
    out = 1.0 + 0j
    for (i, j), k in m.edges:
        out *= (A[0, i - 1] * A[1, j - 1] - A[0, j - 1] * A[1, i - 1]) ** k
    return out


def _first_crossing(edges: Tuple[Tuple[Tuple[int, int], int], ...]):
    """Lexicographically smallest ``(i1, j1, i2, j2)`` with ``i1 < i2 < j1 < j2``."""
    best = None
    support = [c for c, _ in edges]
    for (i1, j1), (i2, j2) in itertools.permutations(support, 2):
        if i1 < i2 < j1 < j2:
            key = (i1, j1, i2, j2)
            if best is None or key < best:
                best = key
    return best


@lru_cache(maxsize=None)
def _expand(n: int, edges: Tuple[Tuple[Tuple[int, int], int], ...]) -> Tuple[Tuple[Tuple, int], ...]:
    hit = _first_crossing(edges)
    if hit is None:
        return ((edges, 1),)
    i1, j1, i2, j2 = hit
    base = dict(edges)
    for c in ((i1, j1), (i2, j2)):
        base[c] -= 1
        if not base[c]:
            del base[c]
    out: Dict[Tuple, int] = {}
    for a, b in (((i1, i2), (j1, j2)), ((i1, j2), (i2, j1))):
        nxt = dict(base)
        nxt[a] = nxt.get(a, 0) + 1
        nxt[b] = nxt.get(b, 0) + 1
        for key, c in _expand(n, tuple(sorted(nxt.items()))):
            out[key] = out.get(key, 0) + c
    return tuple(out.items())


def straighten_monomial(m: ChordMultiset) -> BracketCombination:
    """Expand any bracket monomial in the Kempe basis.

    Repeatedly rewrites the smallest crossing pair with
    ``Z_{i1 j1} Z_{i2 j2} = Z_{i1 i2} Z_{j1 j2} + Z_{i1 j2} Z_{i2 j1}``.
    """
    return BracketCombination((KempeGraph(m.n, e), c) for e, c in _expand(m.n, m.edges))


def straighten(g1: ChordMultiset, g2: ChordMultiset) -> BracketCombination:
    if g1.n != g2.n:
        raise SizeMismatchError(f"n={g1.n} vs n={g2.n}")
    counts = g1.counts
    for c, k in g2.edges:
        counts[c] = counts.get(c, 0) + k
    return straighten_monomial(ChordMultiset(g1.n, counts))


def leading_term(g1: ChordMultiset, g2: ChordMultiset, tree: TrivalentTree) -> Tuple[KempeGraph, int]:
    """The unique heaviest Kempe term of ``g1 * g2`` and its tree weight.

    Raises ``StructureError`` if the maximum is tied or its coefficient is
    not 1.
    """
    expansion = straighten(g1, g2)
    weights = expansion.weights(tree)
    top = max(weights.values())
    heavy = [m for m, w in weights.items() if w == top]
    if len(heavy) != 1:
        raise StructureError(f"{len(heavy)} terms share the maximal weight {top}")
    (g,) = heavy
    if expansion[g] != 1:
        raise StructureError(f"leading coefficient is {expansion[g]}, expected 1")
    return g, top


def quadric(i: int, j: int, k: int, l: int, n: int) -> BracketCombination:
    """``Z_ij Z_kl - Z_ik Z_jl + Z_il Z_jk`` for ``i < j < k < l``."""
    if not (1 <= i < j < k < l <= n):
        raise InvalidPairError(f"quadric indices must satisfy 1 <= i < j < k < l <= {n}, got {(i, j, k, l)}")
    return BracketCombination(
        [
            (_kempe_or_monomial(n, {(i, j): 1, (k, l): 1}), 1),
            (_kempe_or_monomial(n, {(i, k): 1, (j, l): 1}), -1),
            (_kempe_or_monomial(n, {(i, l): 1, (j, k): 1}), 1),
        ]
    )


def initial_form(q: Sequence[int], tree: TrivalentTree) -> BracketCombination:
    """Max-weight part of the Plücker quadric on ``q = (i, j, k, l)``."""
    rel = quadric(*q, n=tree.n)
    weights = rel.weights(tree)
    top = max(weights.values())
    form = BracketCombination((m, c) for m, c in rel.items() if weights[m] == top)
    if len(form) != 2:
        raise StructureError(f"initial form of quadric {tuple(q)} has {len(form)} terms")
    return form


def weight_deficit(q: Sequence[int], tree: TrivalentTree) -> int:
    """How far the dropped term of a quadric sits below its initial form."""
    weights = quadric(*q, n=tree.n).weights(tree).values()
    return max(weights) - min(weights)


def initial_ideal(tree: TrivalentTree) -> List[Tuple[Tuple[int, int, int, int], BracketCombination]]:
    """Initial forms of all quadrics, in lexicographic order."""
    return [(q, initial_form(q, tree)) for q in itertools.combinations(range(1, tree.n + 1), 4)]


_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class TripodExponents:
    """Exponents ``x[i] = (x01, x02, x12)`` of the slot-pair brackets of tripod ``i``.

    Slots are 0-based, so ``x01`` is the bracket between slots 1 and 2 in
    1-based labels. Construction checks nonnegativity and the gluing
    equations.
    """

    forest: DecomposedForest
    x: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        x = tuple(tuple(int(v) for v in row) for row in self.x)
        if len(x) != self.forest.num_tripods or any(len(r) != 3 for r in x):
            raise SizeMismatchError("need three exponents per tripod")
        if any(v < 0 for r in x for v in r):
            raise GluingError("exponents must be nonnegative")
        object.__setattr__(self, "x", x)
        for e, (p, m) in self.forest.glued.items():
            if self.slot_weight(*p) != self.slot_weight(*m):
                raise GluingError(f"slot weights differ across glued edge {e}: {p} vs {m}")

    @classmethod
    def zero(cls, forest: DecomposedForest) -> "TripodExponents":
        return cls(forest, ((0, 0, 0),) * forest.num_tripods)

    def slot_weight(self, i: int, k: int) -> int:
        return sum(v for v, pair in zip(self.x[i], _PAIRS) if k in pair)

    @property
    def degree(self):
        total = sum(self.slot_weight(i, k) for i, k in self.forest.distinguished)
        return total // 2 if total % 2 == 0 else total / 2

    def __add__(self, other: "TripodExponents") -> "TripodExponents":
        if other.forest is not self.forest and other.forest != self.forest:
            raise SizeMismatchError("exponents live on different forests")
        return TripodExponents(
            self.forest, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.x, other.x))
        )

    def to_json(self) -> dict:
        return {"x": [list(r) for r in self.x]}


def phi(i: int, j: int, forest: DecomposedForest) -> TripodExponents:
    """Image of ``Z_ij``: one bracket per tripod on the leaf path, on the two slots it uses."""
    path = set(forest.tree.leaf_path(i, j))
    x = []
    for es in forest.slot_edges:
        hit = tuple(k for k, e in enumerate(es) if e in path)
        row = [0, 0, 0]
        if hit:
            row[_PAIRS.index(hit)] = 1
        x.append(tuple(row))
    return TripodExponents(forest, tuple(x))


def phi_monomial(m: ChordMultiset, forest: DecomposedForest) -> TripodExponents:
    out = TripodExponents.zero(forest)
    for c, k in m.edges:
        p = phi(*c, forest)
        for _ in range(k):
            out = out + p
    return out


def exponents_from_weighting(w: EdgeWeighting, forest: Optional[DecomposedForest] = None) -> TripodExponents:
    bad = first_violation(w)
    if bad is not None:
        raise AdmissibilityError(f"weighting is not admissible at internal vertex {bad}", vertex=bad)
    forest = forest if forest is not None else decompose(w.tree)
    x = []
    for es in forest.slot_edges:
        n0, n1, n2 = (w.w[e] for e in es)
        x.append(((n0 + n1 - n2) // 2, (n0 + n2 - n1) // 2, (n1 + n2 - n0) // 2))
    return TripodExponents(forest, tuple(x))


def weighting_from_exponents(x: TripodExponents) -> EdgeWeighting:
    f = x.forest
    w = [0] * len(f.tree.edges)
    for i, es in enumerate(f.slot_edges):
        for k, e in enumerate(es):
            w[e] = x.slot_weight(i, k)
    return EdgeWeighting(f.tree, tuple(w))


def random_minors_check(expansion: BracketCombination, lhs: ChordMultiset, rng, trials: int = 100) -> float:
    """Worst relative gap between ``lhs`` and its expansion on random complex matrices."""
    worst = 0.0
    for _ in range(trials):
        A = rng.standard_normal((2, lhs.n)) + 1j * rng.standard_normal((2, lhs.n))
        a = evaluate(lhs, A)
        terms = [c * evaluate(m, A) for m, c in expansion.items()]
        scale = max(abs(a), sum(abs(t) for t in terms), 1e-300)
        worst = max(worst, abs(a - sum(terms)) / scale)
    return worst


def quadric_terms(n: int) -> Iterator[Tuple[int, int, int, int]]:
    return itertools.combinations(range(1, n + 1), 4)
