"""Spatial polygons, the Hopf map, bending flows and Kamiyama-Yoshida congruence.

A framed polygon is a 2 x n complex matrix whose columns ``C_i = (z_i, w_i)``
map to polygon edges under the Hopf map. Vertices follow the model polygon
convention: ``p_1 = 0`` and edge ``i`` runs from ``p_i`` to ``p_{i+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DegenerateInputError,
    InfeasibleError,
    InvalidPairError,
    NotClosedError,
    SizeMismatchError,
    UndefinedBendError,
)
from .tree import Triangulation, dual_tree

ZERO_TOL = 1e-8


def hopf(z, w) -> np.ndarray:
    """``F(z, w) = (|z|^2 - |w|^2, 2 Re(w conj z), 2 Im(w conj z)) / 4``.

    Vectorizes over arrays of ``z, w``; the output has a trailing axis of 3.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    p = w * np.conj(z)
    return np.stack([np.abs(z) ** 2 - np.abs(w) ** 2, 2 * p.real, 2 * p.imag], axis=-1) / 4


def hopf_lift(e) -> Tuple[complex, complex]:
    """A preimage of ``e`` under the Hopf map with ``z`` real and nonnegative.

    Falls back to ``w`` real and positive when ``z`` must vanish.
    """
    x1, x2, x3 = (float(v) for v in e)
    L = float(np.sqrt(x1 * x1 + x2 * x2 + x3 * x3))
    if L == 0.0:
        return 0j, 0j
    # L + x1 without cancellation when x1 is close to -L
    s = L + x1 if x1 >= 0 else (x2 * x2 + x3 * x3) / (L - x1)
    if s <= 0.0:
        return 0j, complex(np.sqrt(4 * L))
    z = np.sqrt(2 * s)
    return complex(z), complex(2 * (x2 + 1j * x3) / z)


@dataclass(frozen=True, eq=False)
class Polygon:
    """``n`` edge vectors in R^3; closure is checked by callers, not enforced."""

    edges: np.ndarray

    def __post_init__(self):
        e = np.array(self.edges, dtype=float)
        if e.ndim != 2 or e.shape[1] != 3:
            raise SizeMismatchError(f"edges must have shape (n, 3), got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> np.ndarray:
        """``p_1 .. p_n`` with ``p_1 = 0``."""
        return np.vstack([np.zeros(3), np.cumsum(self.edges, axis=0)[:-1]])

    @property
    def side_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.edges, axis=1)

    @property
    def perimeter(self) -> float:
        return float(self.side_lengths.sum())

    @property
    def closure_residual(self) -> float:
        return float(np.linalg.norm(self.edges.sum(axis=0)))

    def is_closed(self, tol: float = 1e-9) -> bool:
        return self.closure_residual <= tol * max(self.perimeter, 1.0)

    def rotated(self, R: np.ndarray) -> "Polygon":
        return Polygon(self.edges @ np.asarray(R).T)

    def allclose(self, other: "Polygon", atol: float = 1e-9) -> bool:
        return self.n == other.n and bool(np.allclose(self.edges, other.edges, rtol=0, atol=atol))

    def to_json(self) -> dict:
        return {"edges": [[float(v) for v in row] for row in self.edges]}


class FramedPolygon:
    """A 2 x n complex matrix read column-wise as framed edges."""

    def __init__(self, A):
        A = np.array(A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != 2:
            raise SizeMismatchError(f"framed polygon must be a 2 x n matrix, got shape {A.shape}")
        A.setflags(write=False)
        self.A = A

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def Z(self) -> np.ndarray:
        return self.A[0]

    @property
    def W(self) -> np.ndarray:
        return self.A[1]

    @property
    def momentum_residual(self) -> float:
        return float(np.linalg.norm(mu_su2(self)))

    @property
    def closure_residual(self) -> float:
        return float(np.linalg.norm(hopf(self.Z, self.W).sum(axis=0)))

    def to_json(self) -> dict:
        return {"cols": [[[float(c.real), float(c.imag)] for c in col] for col in self.A.T]}


FramedLike = Union[FramedPolygon, np.ndarray]


def _matrix(A: FramedLike) -> np.ndarray:
    return A.A if isinstance(A, FramedPolygon) else np.asarray(A, dtype=complex)


def mu_su2(A: FramedLike) -> np.ndarray:
    """Traceless part of ``A A^*`` halved: the SU(2) momentum map."""
    M = _matrix(A)
    G = M @ M.conj().T
    return (G - np.trace(G) / 2 * np.eye(2)) / 2


def project_to_zero_level(A: FramedLike) -> FramedPolygon:
    """Orthonormalize the rows of ``A`` within their span, keeping ``||A||_F``.

    Uses ``A' = c G^{-1/2} A`` with ``G = A A^*``; the row space, and hence
    every 2x2 minor up to a common factor, is preserved.
    """
    M = _matrix(A)
    G = M @ M.conj().T
    vals, vecs = np.linalg.eigh(G)
    if vals[0] <= 1e-14 * max(vals[1], 1e-300):
        raise DegenerateInputError("matrix has rank < 2")
    inv_sqrt = vecs @ np.diag(vals ** -0.5) @ vecs.conj().T
    scale = np.linalg.norm(M) / np.sqrt(2)
    return FramedPolygon(scale * inv_sqrt @ M)


def edges_of(A: FramedLike, tol: float = 1e-9) -> Polygon:
    """The polygon ``(F(C_1), ..., F(C_n))`` of a zero-level matrix."""
    M = _matrix(A)
    res = float(np.linalg.norm(mu_su2(M)))
    if res > tol * max(float(np.linalg.norm(M)) ** 2, 1.0):
        raise NotClosedError(f"momentum residual {res:.3e} is above tolerance", residual=res)
    return Polygon(hopf(M[0], M[1]))


def framed_of(P: Polygon) -> FramedPolygon:
    """Column-wise Hopf lift of a polygon; zero level exactly when ``P`` closes."""
    cols = [hopf_lift(e) for e in P.edges]
    return FramedPolygon(np.array(cols, dtype=complex).T.reshape(2, P.n))


def mu_torus(A: FramedLike) -> np.ndarray:
    M = _matrix(A)
    return (np.abs(M) ** 2).sum(axis=0) / 2


def minors(A: FramedLike) -> np.ndarray:
    """All 2x2 minors ``Z_ij`` as an antisymmetric n x n matrix."""
    M = _matrix(A)
    return np.outer(M[0], M[1]) - np.outer(M[1], M[0])


def in_cone_Dn(r: Sequence[float], slack: float = 0.0) -> bool:
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DegenerateInputError("side lengths must be nonnegative")
    return bool(np.all(2 * r <= r.sum() + slack))


def _check_pair(n: int, a: int, b: int):
    if a == b:
        raise InvalidPairError(f"diagonal needs two distinct vertices, got {a} twice")
    if not (1 <= a <= n and 1 <= b <= n):
        raise InvalidPairError(f"vertices {(a, b)} out of range for n={n}")
    lo, hi = sorted((a, b))
    if n >= 4 and (hi - lo == 1 or (lo, hi) == (1, n)):
        raise InvalidPairError(f"vertices {(a, b)} are adjacent")


def diagonal(P: Polygon, a: int, b: int) -> np.ndarray:
    """``p_b - p_a``."""
    _check_pair(P.n, a, b)
    V = P.vertices
    return V[b - 1] - V[a - 1]


def diagonal_length(P: Polygon, a: int, b: int) -> float:
    return float(np.linalg.norm(diagonal(P, a, b)))


def rotation(axis, theta: float) -> np.ndarray:
    """Right-handed rotation by ``theta`` about ``axis`` (Rodrigues)."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(theta) * K + (1 - np.cos(theta)) * K @ K


def bend(P: Polygon, d: Tuple[int, int], theta: float, tol: float = ZERO_TOL) -> Polygon:
    """Rotate edges ``a .. b-1`` by ``theta`` about the diagonal ``p_b - p_a``."""
    a, b = sorted(d)
    axis = diagonal(P, a, b)
    if np.linalg.norm(axis) < tol * P.perimeter or not np.any(axis):
        raise UndefinedBendError(f"diagonal {(a, b)} has zero length; bending is undefined")
    R = rotation(axis, theta)
    e = np.array(P.edges)
    e[a - 1 : b - 1] = e[a - 1 : b - 1] @ R.T
    return Polygon(e)


def ky_bend(P: Polygon, d: Tuple[int, int], theta: float, tol: float = ZERO_TOL) -> Polygon:
    """``bend`` on congruence classes: the identity at a zero diagonal."""
    try:
        return bend(P, d, theta, tol)
    except UndefinedBendError:
        return P


@dataclass(frozen=True)
class StratumSignature:
    triangulation: Triangulation
    S: FrozenSet[Tuple[int, int]]

    def to_json(self) -> dict:
        return {"triangulation": self.triangulation.to_json(), "S": [list(d) for d in sorted(self.S)]}


def stratum_signature(P: Polygon, t: Triangulation, tol: float = ZERO_TOL) -> StratumSignature:
    if P.n != t.n:
        raise SizeMismatchError(f"polygon has {P.n} edges but triangulation has n={t.n}")
    cut = tol * P.perimeter
    S = frozenset(d for d in t.diagonals if diagonal_length(P, *d) <= cut)
    return StratumSignature(t, S)


def ky_groups(P: Polygon, t: Triangulation, tol: float = ZERO_TOL) -> Tuple[Tuple[int, ...], ...]:
    """Edge groups (1-based) that rotate independently under T-congruence.

    These are the leaf sets of the components of the dual tree once the
    internal edges dual to zero diagonals are cut.
    """
    S = stratum_signature(P, t, tol).S
    tree = dual_tree(t)
    parent = {v: v for v in range(1, 2 * tree.n - 1)}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for k, (u, v) in enumerate(tree.edges):
        if tree.is_leaf_edge(k) or tree.sides[k] not in S:
            parent[find(u)] = find(v)
    groups = {}
    for leaf in tree.leaves:
        groups.setdefault(find(leaf), []).append(leaf)
    return tuple(sorted(tuple(g) for g in groups.values()))


def _canonical_frame(E: np.ndarray, cut: float) -> Optional[np.ndarray]:
    """Rotation taking the first real edge to +x and the next off-axis one into y > 0."""
    norms = np.linalg.norm(E, axis=1)
    big = np.flatnonzero(norms > cut)
    if not len(big):
        return None
    u1 = E[big[0]] / norms[big[0]]
    for k in big[1:]:
        perp = E[k] - (E[k] @ u1) * u1
        if np.linalg.norm(perp) > cut:
            u2 = perp / np.linalg.norm(perp)
            return np.array([u1, u2, np.cross(u1, u2)])
    # collinear group: any rotation taking u1 to +x will do
    x = np.array([1.0, 0.0, 0.0])
    c = float(u1 @ x)
    v = np.cross(u1, x)
    s = np.linalg.norm(v)
    if s < 1e-15:
        return np.eye(3) if c > 0 else np.diag([-1.0, -1.0, 1.0])
    return rotation(v, np.arctan2(s, c))


def ky_canonicalize(P: Polygon, t: Triangulation, tol: float = ZERO_TOL) -> Polygon:
    """Representative of the T-congruence class of ``P``.

    Each independent edge group is rotated into its own canonical frame.
    """
    cut = tol * P.perimeter
    out = np.array(P.edges)
    for g in ky_groups(P, t, tol):
        idx = np.array(g) - 1
        R = _canonical_frame(out[idx], cut)
        if R is not None:
            out[idx] = out[idx] @ R.T
    return Polygon(out)


def random_rotation(rng) -> np.ndarray:
    """Haar-random element of SO(3)."""
    Q, R = np.linalg.qr(rng.standard_normal((3, 3)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_polygon(n: int, rng, lengths: Optional[Sequence[float]] = None) -> Polygon:
    """A closed polygon: random side lengths in ``D_n`` (unless given), then sampled."""
    if lengths is None:
        while True:
            lengths = rng.uniform(0.2, 1.0, n)
            if in_cone_Dn(lengths) and np.all(2 * lengths < lengths.sum() - 1e-3):
                break
    return sample_linkage(lengths, rng)


def sample_linkage(r: Sequence[float], seed=0, max_iter: int = 10_000, tol: float = 1e-12) -> Polygon:
    """A random closed polygon with side lengths ``r``.

    Random unit directions are pushed towards closure on the product of
    spheres by minimum-norm linearized (Gauss-Newton) steps with
    backtracking on ``||sum r_i u_i||^2``.
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or np.any(r < 0):
        raise DegenerateInputError("side lengths must be a nonnegative vector")
    total = r.sum()
    if not in_cone_Dn(r, slack=1e-12 * max(total, 1.0)):
        raise InfeasibleError(f"side lengths {r.tolist()} violate 2 r_i <= sum r")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if total == 0:
        return Polygon(np.zeros((len(r), 3)))
    k = int(np.argmax(r))
    if 2 * r[k] >= total - 1e-12 * total:
        # boundary of the cone: the only closed shapes are flat
        u = random_rotation(rng)[0]
        e = -np.outer(r, u)
        e[k] = r[k] * u
        return Polygon(e)
    scale = total
    for _ in range(20):
        U = rng.standard_normal((len(r), 3))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        f = float(np.sum((r @ U) ** 2))
        for _ in range(max_iter):
            s = r @ U
            if np.sqrt(f) <= tol * scale:
                return Polygon(r[:, None] * U)
            D = _descent(U, r, s)
            step = 1.0
            while True:
                V = U + step * D
                V /= np.linalg.norm(V, axis=1, keepdims=True)
                fv = float(np.sum((r @ V) ** 2))
                if fv < f or step < 1e-12:
                    break
                step /= 2
            if fv >= f:
                break
            U, f = V, fv
    raise InfeasibleError(f"sampler failed to close a polygon with side lengths {r.tolist()}")


def _descent(U: np.ndarray, r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Minimum-norm tangent move cancelling the closure gap ``s``.

    Falls back to the projected gradient when the linearization is singular
    (all edges parallel).
    """
    P = np.eye(3)[None] - U[:, :, None] * U[:, None, :]
    M = np.einsum("i,ijk->jk", r * r, P)
    try:
        y = np.linalg.solve(M, -s)
        if not np.all(np.isfinite(y)) or np.linalg.cond(M) > 1e12:
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        y = -s / max(float(r @ r), 1e-300)
    return r[:, None] * np.einsum("ijk,k->ij", P, y)
