"""JSON readers and writers for the package's value types.

Floats are written with Python's shortest round-trip ``repr``, so a dump
followed by a load reproduces every value bit for bit.
"""

from __future__ import annotations

import json
import sys
from typing import Any, List

import numpy as np

from .frames import ForestFraming, SpinFrame
from .kempe import EdgeWeighting, KempeGraph
from .polygon import FramedPolygon, Polygon
from .tree import Triangulation, TrivalentTree, decompose, dual_tree


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return obj


def dumps(obj: Any, indent: int = 2) -> str:
    return json.dumps(_plain(obj), indent=indent)


def read_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def tree_from_json(d: dict) -> TrivalentTree:
    """Accepts either the tree schema or the triangulation schema."""
    if "edges" in d and "leaf_edges" in d:
        return TrivalentTree(int(d["n"]), tuple(tuple(e) for e in d["edges"]), tuple(d["leaf_edges"]))
    return dual_tree(triangulation_from_json(d))


def triangulation_from_json(d: dict) -> Triangulation:
    return Triangulation(int(d["n"]), frozenset(tuple(sorted(x)) for x in d["diagonals"]))


def tree_to_json(tree: TrivalentTree) -> dict:
    out = tree.to_json()
    out["diagonals"] = [list(x) for x in sorted(tree.triangulation.diagonals)]
    return out


def kempe_from_json(d: dict) -> KempeGraph:
    return KempeGraph(int(d["n"]), {(int(i), int(j)): int(m) for i, j, m in d["edges"]})


def weighting_from_json(d: dict) -> EdgeWeighting:
    tree = tree_from_json(d["tree"])
    return EdgeWeighting(tree, {int(k): int(v) for k, v in d["w"].items()})


def polygon_from_json(d: dict) -> Polygon:
    return Polygon(np.array(d["edges"], dtype=float))


def framed_from_json(d: dict) -> FramedPolygon:
    cols = np.array(d["cols"], dtype=float)
    return FramedPolygon((cols[..., 0] + 1j * cols[..., 1]).T)


def edge_frames_from_json(d: dict) -> List[SpinFrame]:
    """Edge frames from either a framed matrix, a polygon, or an explicit frame list."""
    from .frames import frame_of, frames_of_polygon

    if "cols" in d:
        A = framed_from_json(d).A
        return [frame_of(A[0, i], A[1, i]) for i in range(A.shape[1])]
    if "frames" in d:
        return [SpinFrame(f["g"], f["lambda"]) for f in d["frames"]]
    return frames_of_polygon(polygon_from_json(d))


def framing_from_json(d: dict) -> ForestFraming:
    forest = decompose(tree_from_json(d["forest"]))
    by_slot = {tuple(f["slot"]): SpinFrame(f["g"], f["lambda"]) for f in d["frames"]}
    return ForestFraming(forest, [by_slot[s] for s in forest.slots])

