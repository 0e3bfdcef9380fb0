"""Hand-built polygons that sit on zero-diagonal strata.

``bowtie`` is a hexagon made of two closed triangles joined at a vertex, so
the fan diagonal (1, 4) vanishes. ``two_rhombi`` is the octagon analogue with
two planar rhombi and the middle fan diagonal (1, 5) at zero.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .polygon import Polygon, random_rotation

_TRIANGLE = np.array(
    [[1.0, 0.0, 0.0], [-0.5, np.sqrt(3) / 2, 0.0], [-0.5, -np.sqrt(3) / 2, 0.0]]
)


def rhombus(angle: float = np.pi / 3) -> np.ndarray:
    """Planar unit rhombus with interior angle ``angle`` at the first vertex."""
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([np.cos(angle), np.sin(angle), 0.0])
    return np.array([u, v - u, -u, u - v])


def bowtie(R1: Optional[np.ndarray] = None, R2: Optional[np.ndarray] = None) -> Polygon:
    """Two unit equilateral triangles as edges 1-3 and 4-6, each rotated independently."""
    R1 = np.eye(3) if R1 is None else R1
    R2 = np.diag([-1.0, -1.0, 1.0]) if R2 is None else R2
    return Polygon(np.vstack([_TRIANGLE @ R1.T, _TRIANGLE @ R2.T]))


def two_rhombi(R1: Optional[np.ndarray] = None, R2: Optional[np.ndarray] = None, angle: float = np.pi / 3) -> Polygon:
    """Two planar unit rhombi as edges 1-4 and 5-8, each rotated independently."""
    R1 = np.eye(3) if R1 is None else R1
    R2 = np.diag([-1.0, -1.0, 1.0]) if R2 is None else R2
    r = rhombus(angle)
    return Polygon(np.vstack([r @ R1.T, r @ R2.T]))


def random_bowtie(rng) -> Polygon:
    return bowtie(random_rotation(rng), random_rotation(rng))


def random_two_rhombi(rng, angle: float = np.pi / 3) -> Polygon:
    return two_rhombi(random_rotation(rng), random_rotation(rng), angle)
