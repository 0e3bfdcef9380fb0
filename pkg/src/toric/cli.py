"""``toric`` command line.

Exit codes: 0 on success, 1 when the input is well formed but the
mathematics refuses it (or a verification suite finds failures), 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from . import io, verify
from .errors import NotClosedError, ToricError
from .frames import (
    bend_lift,
    extend_framing,
    hamiltonian_ledger,
    polygon_of,
    restrict_to_leaves,
)
from .kempe import induced_weighting, star_product
from .pluecker import initial_ideal, straighten
from .polygon import bend, diagonal_length, sample_linkage, stratum_signature
from .tree import Triangulation, decompose, dual_tree, fan_triangulation, parse_diagonals


class UsageError(Exception):
    pass


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def _load(path: Optional[str], what: str):
    if path is None:
        raise UsageError(f"--{what} is required")
    try:
        return io.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {what} from {path}: {exc}")


def _tree(args):
    return io.tree_from_json(_load(args.tree, "tree"))


def cmd_tree(args):
    if args.diagonals:
        try:
            diags = parse_diagonals(args.diagonals)
        except ValueError:
            raise UsageError(f"diagonals must look like A,B, got {args.diagonals}")
        n = args.n if args.n is not None else len(diags) + 3
        t = Triangulation(n, frozenset(diags))
    elif args.fan:
        if args.n is None:
            raise UsageError("--fan needs --n")
        t = fan_triangulation(args.n)
    else:
        raise UsageError("give --fan with --n, or --diagonals")
    return io.tree_to_json(dual_tree(t))


def cmd_kempe_product(args):
    tree = _tree(args)
    a = io.kempe_from_json(_load(args.a, "a"))
    b = io.kempe_from_json(_load(args.b, "b"))
    g = star_product(a, b, tree)
    return {"product": g.to_json(), "weight": g.weight(tree), "w": list(induced_weighting(g, tree).w)}


def cmd_straighten(args):
    tree = _tree(args)
    a = io.kempe_from_json(_load(args.a, "a"))
    b = io.kempe_from_json(_load(args.b, "b"))
    return straighten(a, b).to_json(tree)


def cmd_initial_ideal(args):
    if args.tree is not None:
        tree = _tree(args)
    elif args.n is not None:
        tree = dual_tree(fan_triangulation(args.n))
    else:
        raise UsageError("give --tree or --n")
    if args.n is not None and args.n != tree.n:
        raise UsageError(f"--n {args.n} does not match the tree (n={tree.n})")
    return {
        "n": tree.n,
        "quadrics": [
            {"quadric": list(q), **form.to_json(tree)} for q, form in initial_ideal(tree)
        ],
    }


def cmd_polygon_sample(args):
    if args.r is None:
        raise UsageError("--r is required")
    return sample_linkage(_floats(args.r), args.seed)


def cmd_polygon_bend(args):
    P = io.polygon_from_json(_load(args.polygon, "polygon"))
    if args.diag is None:
        raise UsageError("--diag is required")
    d = _ints(args.diag)
    if len(d) != 2:
        raise UsageError("--diag takes two vertices")
    return bend(P, tuple(d), args.theta)


def cmd_polygon_strata(args):
    tree = _tree(args)
    P = io.polygon_from_json(_load(args.polygon, "polygon"))
    t = tree.triangulation
    sig = stratum_signature(P, t, args.tol)
    return {
        "S": [list(d) for d in sorted(sig.S)],
        "diagonals": {f"{a},{b}": diagonal_length(P, a, b) for a, b in sorted(t.diagonals)},
    }


def cmd_frames_extend(args):
    forest = decompose(_tree(args))
    E = io.edge_frames_from_json(_load(args.edges, "edges"))
    T = extend_framing(E, forest)
    return {**T.to_json(), "residuals": T.residuals()}


def cmd_frames_bend(args):
    T = io.framing_from_json(_load(args.framing, "framing"))
    if args.edge is None:
        raise UsageError("--edge is required")
    B = bend_lift(T, args.edge, np.exp(0.5j * args.theta))
    return {**B.to_json(), "residuals": B.residuals()}


def cmd_frames_check(args):
    T = io.framing_from_json(_load(args.framing, "framing"))
    return {**T.residuals(), "ledger": hamiltonian_ledger(T)}


def cmd_verify(args):
    report = verify.run(args.suite, n_max=args.n_max, trials=args.trials, seed=args.seed)
    return report, (0 if not report["failures"] else 1)


def cmd_pipeline(args):
    tree = _tree(args)
    forest = decompose(tree)
    E = io.edge_frames_from_json(_load(args.edges, "edges"))
    T = extend_framing(E, forest)
    P = polygon_of(restrict_to_leaves(T))
    t = tree.triangulation
    sig = stratum_signature(P, t, args.tol)
    return {
        "framing": T.to_json(),
        "residuals": T.residuals(),
        "polygon": P.to_json(),
        "closure_residual": P.closure_residual,
        "diagonals": {f"{a},{b}": diagonal_length(P, a, b) for a, b in sorted(t.diagonals)},
        "S": [list(d) for d in sorted(sig.S)],
        "ledger": hamiltonian_ledger(T),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric", description=__doc__.splitlines()[0])
    p.add_argument("--out", help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def leaf(parent, name, fn, help=None):
        q = parent.add_parser(name, help=help)
        q.set_defaults(fn=fn)
        # also accepted after the subcommand; SUPPRESS keeps the global value when absent
        q.add_argument("--out", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        return q

    t = leaf(sub, "tree", cmd_tree, "dual tree of a triangulation")
    t.add_argument("--n", type=int)
    t.add_argument("--fan", action="store_true")
    t.add_argument("--diagonals", nargs="+", metavar="A,B")

    k = sub.add_parser("kempe").add_subparsers(dest="action", required=True)
    q = leaf(k, "product", cmd_kempe_product, "semigroup product of two Kempe graphs")
    for flag in ("--tree", "--a", "--b"):
        q.add_argument(flag)

    pl = sub.add_parser("pluecker").add_subparsers(dest="action", required=True)
    q = leaf(pl, "straighten", cmd_straighten, "expand a product in the Kempe basis")
    for flag in ("--tree", "--a", "--b"):
        q.add_argument(flag)
    q = leaf(pl, "initial-ideal", cmd_initial_ideal, "initial binomials of all quadrics")
    q.add_argument("--tree")
    q.add_argument("--n", type=int)

    po = sub.add_parser("polygon").add_subparsers(dest="action", required=True)
    q = leaf(po, "sample", cmd_polygon_sample, "random closed polygon with given sides")
    q.add_argument("--r")
    q.add_argument("--seed", type=int, default=0)
    q = leaf(po, "bend", cmd_polygon_bend, "bend a polygon along a diagonal")
    q.add_argument("--polygon", default="-")
    q.add_argument("--diag")
    q.add_argument("--theta", type=float, default=0.0)
    q = leaf(po, "strata", cmd_polygon_strata, "zero diagonals of a polygon")
    q.add_argument("--tree")
    q.add_argument("--polygon", default="-")
    q.add_argument("--tol", type=float, default=1e-8)

    fr = sub.add_parser("frames").add_subparsers(dest="action", required=True)
    q = leaf(fr, "extend", cmd_frames_extend, "extend edge frames over the diagonals")
    q.add_argument("--tree")
    q.add_argument("--edges", default="-")
    q = leaf(fr, "bend", cmd_frames_bend, "bending lifted to a framing")
    q.add_argument("--framing", default="-")
    q.add_argument("--edge", type=int)
    q.add_argument("--theta", type=float, default=0.0)
    q = leaf(fr, "check", cmd_frames_check, "residuals and the lambda ledger")
    q.add_argument("--framing", default="-")

    v = leaf(sub, "verify", cmd_verify, "run an invariant suite")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--n-max", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)

    q = leaf(sub, "pipeline", cmd_pipeline, "edges -> framing -> polygon -> strata -> ledger")
    q.add_argument("--tree")
    q.add_argument("--edges", default="-")
    q.add_argument("--tol", type=float, default=1e-8)
    return p


def _emit(obj, out: Optional[str]):
    text = io.dumps(obj) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("tol", "trials", "n_max"):
        val = getattr(args, name, None)
        if val is not None and val <= 0:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    try:
        result = args.fn(args)
    except UsageError as exc:
        parser.error(str(exc))
    except KeyError as exc:
        parser.error(f"input JSON is missing the key {exc}")
    except NotClosedError as exc:
        _emit({"error": str(exc), "residual": exc.residual}, None)
        return 1
    except ToricError as exc:
        print(f"toric: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
