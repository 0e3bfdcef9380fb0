"""Imploded spin-frames on polygon edges and diagonals.

A spin-frame is a pair ``(g, lam)`` with ``g`` a unit quaternion and
``lam >= 0``; all ``g`` are identified when ``lam = 0``. Under the
dictionary ``c2 = sqrt(2 lam) g e_1`` the frame carries the edge vector
``F(c2) = (lam / 2) * axis(g)``.

Quaternions ``(a, b, c, d)`` stand for ``[[a + bi, c + di], [-c + di, a - bi]]``,
so ``j`` is the flip ``rho = [[0, 1], [-1, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateInputError, InvalidPairError, NormalizationError, NotClosedError, SizeMismatchError, UndefinedBendError
from .polygon import Polygon, hopf, hopf_lift
from .tree import DecomposedForest, Slot

Q_ONE = np.array([1.0, 0.0, 0.0, 0.0])
Q_RHO = np.array([0.0, 0.0, 1.0, 0.0])
RHO = np.array([[0, 1], [-1, 0]], dtype=complex)


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ]
    )


def qinv(q: np.ndarray) -> np.ndarray:
    """Inverse of a unit quaternion."""
    return np.array([q[0], -q[1], -q[2], -q[3]])


def qmatrix(q: np.ndarray) -> np.ndarray:
    a, b, c, d = q
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def qfrom_matrix(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    return np.array([M[0, 0].real, M[0, 0].imag, M[0, 1].real, M[0, 1].imag])


def qphase(t: complex) -> np.ndarray:
    """``diag(t, conj t)`` for ``|t| = 1``."""
    t = complex(t)
    return np.array([t.real, t.imag, 0.0, 0.0])


def qrandom(rng) -> np.ndarray:
    q = rng.standard_normal(4)
    return q / np.linalg.norm(q)


@dataclass(frozen=True, eq=False)
class SpinFrame:
    g: np.ndarray
    lam: float

    def __post_init__(self):
        g = np.array(self.g, dtype=float)
        nrm = np.linalg.norm(g)
        if g.shape != (4,) or not np.isclose(nrm, 1.0, atol=1e-9):
            raise DegenerateInputError("g must be a unit quaternion")
        g = g / nrm
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        if self.lam < 0:
            raise DegenerateInputError("lambda must be nonnegative")
        object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def zero(cls) -> "SpinFrame":
        return cls(Q_ONE, 0.0)

    @property
    def axis(self) -> np.ndarray:
        return ad_star(self.g)

    @property
    def vector(self) -> np.ndarray:
        """The edge vector ``(lam / 2) * axis``."""
        return self.lam / 2 * self.axis

    def times(self, q: np.ndarray) -> "SpinFrame":
        """Right multiplication ``g q``."""
        return SpinFrame(qmul(self.g, q), self.lam)

    def acted(self, q: np.ndarray) -> "SpinFrame":
        """Left multiplication ``q g``."""
        return SpinFrame(qmul(q, self.g), self.lam)

    def isclose(self, other: "SpinFrame", tol: float = 1e-9) -> bool:
        if abs(self.lam - other.lam) > tol:
            return False
        if self.lam <= tol:
            return True
        return bool(np.allclose(self.g, other.g, rtol=0, atol=tol))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpinFrame):
            return NotImplemented
        if self.lam != other.lam:
            return False
        return self.lam == 0.0 or bool(np.array_equal(self.g, other.g))

    __hash__ = None

    def to_json(self) -> dict:
        return {"g": [float(v) for v in self.g], "lambda": self.lam}


def ad_star(g: np.ndarray) -> np.ndarray:
    """Unit axis ``Ad*_g`` of the first fundamental weight, i.e. ``4 F(g e_1)``."""
    col = qmatrix(g)[:, 0]
    return 4 * hopf(col[0], col[1])


def c2_of(frame: SpinFrame) -> np.ndarray:
    return np.sqrt(2 * frame.lam) * qmatrix(frame.g)[:, 0]


def frame_of(z: complex, w: complex) -> SpinFrame:
    r2 = abs(z) ** 2 + abs(w) ** 2
    if r2 == 0:
        return SpinFrame.zero()
    r = np.sqrt(r2)
    return SpinFrame(qfrom_matrix([[z / r, -np.conj(w) / r], [w / r, np.conj(z) / r]]), r2 / 2)


def frame_of_vector(e) -> SpinFrame:
    """Canonical frame carrying the edge vector ``e``."""
    return frame_of(*hopf_lift(e))


def close_triangle(f1: SpinFrame, f2: SpinFrame, tol: float = 1e-12) -> SpinFrame:
    """Third frame closing a tripod: its vector is minus the other two."""
    z1, z2 = f1.lam == 0, f2.lam == 0
    if z1 and z2:
        return SpinFrame.zero()
    if z1 or z2:
        f = f2 if z1 else f1
        return f.times(Q_RHO)
    v = f1.vector + f2.vector
    if np.linalg.norm(v) <= tol * (f1.lam + f2.lam):
        return SpinFrame.zero()
    return frame_of_vector(-v)


def frames_of_polygon(P: Polygon, phases: Optional[Sequence[complex]] = None) -> List[SpinFrame]:
    """Canonical edge frames of a polygon, optionally twisted by edge phases."""
    E = [frame_of_vector(e) for e in P.edges]
    return E if phases is None else edge_rotate(E, phases)


def polygon_of(frames: Sequence[SpinFrame]) -> Polygon:
    return Polygon(np.array([f.vector for f in frames]).reshape(len(frames), 3))


class ForestFraming:
    """One spin-frame per slot of a decomposed forest."""

    def __init__(self, forest: DecomposedForest, frames: Sequence[SpinFrame]):
        frames = tuple(frames)
        if len(frames) != 3 * forest.num_tripods:
            raise SizeMismatchError(f"need {3 * forest.num_tripods} frames, got {len(frames)}")
        self.forest = forest
        self.frames = frames

    def __getitem__(self, slot: Slot) -> SpinFrame:
        i, k = slot
        return self.frames[3 * i + k]

    def replaced(self, updates: Dict[Slot, SpinFrame]) -> "ForestFraming":
        out = list(self.frames)
        for (i, k), f in updates.items():
            out[3 * i + k] = f
        return ForestFraming(self.forest, out)

    @property
    def tol(self) -> float:
        return 1e-9 * (max(f.lam for f in self.frames) + 1)

    @property
    def tripod_residuals(self) -> np.ndarray:
        return np.array(
            [
                np.linalg.norm(sum(self[(i, k)].vector for k in range(3)))
                for i in range(self.forest.num_tripods)
            ]
        )

    @property
    def lambda_mismatch(self) -> Dict[int, float]:
        return {e: abs(self[p].lam - self[m].lam) for e, (p, m) in self.forest.glued.items()}

    @property
    def flip_residuals(self) -> Dict[int, float]:
        """``|g_minus - g_plus rho|`` per glued edge, zero where ``lam`` vanishes."""
        out = {}
        for e, (p, m) in self.forest.glued.items():
            if self[p].lam <= self.tol and self[m].lam <= self.tol:
                out[e] = 0.0
            else:
                out[e] = float(np.linalg.norm(self[m].g - qmul(self[p].g, Q_RHO)))
        return out

    def is_closed(self) -> bool:
        return bool(np.all(self.tripod_residuals <= self.tol))

    def is_matched(self) -> bool:
        return all(v <= self.tol for v in self.lambda_mismatch.values())

    def is_normalized(self) -> bool:
        return self.is_matched() and all(v <= 1e-9 for v in self.flip_residuals.values())

    def leaves(self) -> List[SpinFrame]:
        return [self[s] for s in self.forest.distinguished]

    def residuals(self) -> dict:
        return {
            "tripod_closure": [float(x) for x in self.tripod_residuals],
            "lambda_mismatch": {str(e): v for e, v in sorted(self.lambda_mismatch.items())},
            "flip": {str(e): v for e, v in sorted(self.flip_residuals.items())},
            "normalized": self.is_normalized(),
            "tol": self.tol,
        }

    def to_json(self) -> dict:
        return {
            "forest": self.forest.tree.to_json(),
            "frames": [
                {"slot": [i, k], **self[(i, k)].to_json()} for i, k in self.forest.slots
            ],
        }


def extend_framing(E: Sequence[SpinFrame], forest: DecomposedForest) -> ForestFraming:
    """Fill the diagonals of a closed edge framing.

    Tripods are closed from the last one inwards; each cut passes
    ``(g rho^-1, lam)`` back to the earlier side.
    """
    E = list(E)
    if len(E) != forest.n:
        raise SizeMismatchError(f"need {forest.n} edge frames, got {len(E)}")
    lam_max = max(f.lam for f in E)
    res = float(np.linalg.norm(sum(f.vector for f in E)))
    if res > 1e-9 * (lam_max + 1):
        raise NotClosedError(f"edge frames do not close: residual {res:.3e}", residual=res)
    slots: Dict[Slot, SpinFrame] = {s: E[leaf] for leaf, s in enumerate(forest.distinguished)}
    rho_inv = qinv(Q_RHO)
    for i in range(forest.num_tripods - 1, 0, -1):
        minus = close_triangle(slots[(i, 1)], slots[(i, 2)])
        slots[(i, 0)] = minus
        plus = forest.partner[(i, 0)]
        slots[plus] = minus.times(rho_inv) if minus.lam > 0 else SpinFrame.zero()
    return ForestFraming(forest, [slots[s] for s in forest.slots])


def restrict_to_leaves(T: ForestFraming) -> List[SpinFrame]:
    if not T.is_normalized():
        raise NormalizationError("framing must be normalized before restricting")
    return T.leaves()


def act(T: ForestFraming, f: Sequence[np.ndarray]) -> ForestFraming:
    """Left action of ``SU(2)^{n-2}``, one quaternion per tripod."""
    out = [T[(i, k)].acted(f[i]) for i, k in T.forest.slots]
    return ForestFraming(T.forest, out)


def normalize(T: ForestFraming) -> Tuple[ForestFraming, List[np.ndarray]]:
    """Rotate each tripod after the first so that every glued pair satisfies
    ``g_minus = g_plus rho``. Returns the normalized framing and the witness."""
    forest = T.forest
    tol = T.tol
    f = [Q_ONE.copy() for _ in range(forest.num_tripods)]
    frames = list(T.frames)
    for j in range(1, forest.num_tripods):
        p = forest.partner[(j, 0)]
        plus = frames[3 * p[0] + p[1]]
        minus = frames[3 * j]
        if plus.lam > tol and minus.lam > tol:
            fj = qmul(qmul(plus.g, Q_RHO), qinv(minus.g))
            f[j] = fj
            for k in range(3):
                frames[3 * j + k] = frames[3 * j + k].acted(fj)
    return ForestFraming(forest, frames), f


def same_orbit(T1: ForestFraming, T2: ForestFraming, tol: Optional[float] = None) -> bool:
    """Whether two normalized framings differ by the antidiagonal torus on glued pairs."""
    tol = tol if tol is not None else max(T1.tol, T2.tol)
    forest = T1.forest
    if any(abs(a.lam - b.lam) > tol for a, b in zip(T1.frames, T2.frames)):
        return False
    if not all(a.isclose(b, tol) for a, b in zip(T1.leaves(), T2.leaves())):
        return False
    for p, m in forest.glued.values():
        if T1[p].lam <= tol:
            continue
        dp = qmul(qinv(T1[p].g), T2[p].g)
        dm = qmul(qinv(T1[m].g), T2[m].g)
        if abs(dp[2]) > tol or abs(dp[3]) > tol:
            return False
        if not np.allclose(dm, qinv(dp), rtol=0, atol=1e-8):
            return False
    return True


def edge_rotate(E, t: Sequence[complex]):
    """Right-multiply each edge frame by ``diag(t_i, conj t_i)``.

    Accepts a list of edge frames or a ``ForestFraming`` (acting on its leaf
    slots).
    """
    if isinstance(E, ForestFraming):
        new = edge_rotate(E.leaves(), t)
        return E.replaced(dict(zip(E.forest.distinguished, new)))
    if len(t) != len(E):
        raise SizeMismatchError(f"need {len(E)} phases, got {len(t)}")
    return [f.times(qphase(ti)) for f, ti in zip(E, t)]


def grade(T: ForestFraming, s: float) -> ForestFraming:
    """Scalar action ``c2 -> s c2`` for real ``s > 0``: every ``lam`` scales by ``s^2``."""
    return ForestFraming(T.forest, [SpinFrame(f.g, f.lam * s * s) for f in T.frames])


def bend_lift(T: ForestFraming, edge: int, t: complex) -> ForestFraming:
    """Bending along the diagonal dual to tree edge ``edge``, lifted to frames.

    ``t = exp(i theta / 2)`` bends the leaf polygon by ``theta``: the SU(2)
    phase is half the spatial angle.
    """
    forest = T.forest
    if edge not in forest.glued:
        raise InvalidPairError(f"tree edge {edge} is not internal")
    p, m = forest.glued[edge]
    if T[p].lam <= T.tol:
        raise UndefinedBendError(f"diagonal on tree edge {edge} has zero length")
    tq = qphase(t)
    updates = {p: T[p].times(qinv(tq))}
    gm = T[m].g
    h = qmul(qmul(gm, tq), qinv(gm))
    for j in forest.subtree(m[0]):
        for k in range(3):
            updates[(j, k)] = T[(j, k)].acted(h)
    return T.replaced(updates)


def ky_bend_lift(T: ForestFraming, edge: int, t: complex) -> ForestFraming:
    try:
        return bend_lift(T, edge, t)
    except UndefinedBendError:
        return T


def hamiltonians(T: ForestFraming) -> Dict[Slot, float]:
    return {s: T[s].lam for s in T.forest.slots}


def hamiltonian_ledger(T: ForestFraming) -> dict:
    """Compare each slot's ``lam`` with twice the matching length in the leaf polygon."""
    forest = T.forest
    tree = forest.tree
    P = polygon_of(T.leaves())
    V = P.vertices
    rows = []
    for i, k in forest.slots:
        e = forest.edge_of_slot((i, k))
        a, b = tree.sides[e]
        if tree.is_leaf_edge(e):
            kind, length = "edge", float(np.linalg.norm(P.edges[tree.leaf_of_edge(e) - 1]))
        else:
            kind, length = "diagonal", float(np.linalg.norm(V[b - 1] - V[a - 1]))
        lam = T[(i, k)].lam
        rows.append({"slot": [i, k], "kind": kind, "side": [a, b], "lambda": lam, "length": length,
                     "deviation": abs(lam - 2 * length)})
    return {"rows": rows, "max_deviation": max(r["deviation"] for r in rows)}


def random_phases(n: int, rng) -> np.ndarray:
    return np.exp(1j * rng.uniform(0, 2 * np.pi, n))


def random_torus_d(T: ForestFraming, rng) -> ForestFraming:
    """Apply a random element of the antidiagonal torus on glued pairs."""
    updates = {}
    for p, m in T.forest.glued.values():
        t = np.exp(1j * rng.uniform(0, 2 * np.pi))
        updates[p] = T[p].times(qphase(t))
        updates[m] = T[m].times(qphase(np.conj(t)))
    return T.replaced(updates)
