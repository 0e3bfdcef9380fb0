"""Randomized and exhaustive invariant sweeps behind ``toric verify``.

Every suite returns ``{"suite", "cases", "failures"}``. Trials are seeded
from ``(seed, trial index)`` so reports do not depend on thread scheduling.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional

import numpy as np

from . import configs
from .frames import (
    act,
    bend_lift,
    extend_framing,
    frames_of_polygon,
    hamiltonian_ledger,
    normalize,
    polygon_of,
    qrandom,
    random_phases,
    random_torus_d,
    restrict_to_leaves,
    same_orbit,
)
from .kempe import induced_weighting, kempe_graphs, star_product, weighting_to_kempe
from .pluecker import (
    exponents_from_weighting,
    initial_form,
    leading_term,
    phi_monomial,
    quadric_terms,
    weight_deficit,
)
from .polygon import (
    bend,
    edges_of,
    hopf,
    ky_canonicalize,
    minors,
    mu_torus,
    project_to_zero_level,
    random_polygon,
    random_rotation,
    stratum_signature,
)
from .tree import all_triangulations, crosses, decompose, dual_tree, fan_triangulation, random_triangulation

SUITES = ("semigroup", "initial-ideal", "hopf", "bending", "frames", "strata")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TORIC_THREADS", "1")))
    except ValueError:
        return 1


def _run_trials(fn: Callable[[np.random.Generator], List[str]], trials: int, seed: int) -> List[str]:
    def one(k: int) -> List[str]:
        rng = np.random.default_rng([seed, k])
        return [f"trial {k}: {msg}" for msg in fn(rng)]

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return [m for msgs in pool.map(one, range(trials)) for m in msgs]


def _trees(n: int, seed: int, exhaustive_up_to: int = 7, extra: int = 10):
    if n <= exhaustive_up_to:
        return [dual_tree(t) for t in all_triangulations(n)]
    rng = np.random.default_rng([seed, n])
    return [dual_tree(fan_triangulation(n))] + [dual_tree(random_triangulation(n, rng)) for _ in range(extra)]


def suite_semigroup(n_max: int = 7, seed: int = 0, **_) -> dict:
    failures, cases = [], 0
    for n in range(4, n_max + 1):
        for tree in _trees(n, seed):
            forest = decompose(tree)
            singles = list(kempe_graphs(n, 1))[1:]
            for g1, g2 in itertools.combinations_with_replacement(singles, 2):
                cases += 1
                g, w = leading_term(g1, g2, tree)
                if g != star_product(g1, g2, tree):
                    failures.append(f"n={n} {g1.edges}*{g2.edges}: leading term differs from star product")
                if w != g1.weight(tree) + g2.weight(tree):
                    failures.append(f"n={n} {g1.edges}*{g2.edges}: weight not additive")
            for g in kempe_graphs(n, 2):
                cases += 1
                w = induced_weighting(g, tree)
                if weighting_to_kempe(w) != g:
                    failures.append(f"n={n} {g.edges}: weighting round trip failed")
                if phi_monomial(g, forest) != exponents_from_weighting(w, forest):
                    failures.append(f"n={n} {g.edges}: tripod exponents disagree")
    return {"suite": "semigroup", "cases": cases, "failures": failures}


def suite_initial_ideal(n_max: int = 8, seed: int = 0, **_) -> dict:
    failures, cases = [], 0
    for n in range(4, n_max + 1):
        for tree in _trees(n, seed, exhaustive_up_to=0):
            for q in quadric_terms(n):
                cases += 1
                try:
                    initial_form(q, tree)
                except ValueError as exc:
                    failures.append(f"n={n} {q}: {exc}")
                    continue
                d = weight_deficit(q, tree)
                if d <= 0 or d % 2:
                    failures.append(f"n={n} {q}: weight deficit {d} is not a positive even number")
    return {"suite": "initial-ideal", "cases": cases, "failures": failures}


def suite_hopf(trials: int = 1000, seed: int = 0, **_) -> dict:
    def trial(rng) -> List[str]:
        out = []
        z, w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        ref = (abs(z) ** 2 + abs(w) ** 2) / 4
        if abs(np.linalg.norm(hopf(z, w)) - ref) > 1e-12 * ref:
            out.append("Hopf norm identity")
        n = int(rng.integers(2, 10))
        A = project_to_zero_level(rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
        P = edges_of(A)
        if P.closure_residual > 1e-10:
            out.append(f"closure residual {P.closure_residual:.2e}")
        if np.max(np.abs(mu_torus(A) - 2 * P.side_lengths) / mu_torus(A)) > 1e-12:
            out.append("side length is not |C_i|^2 / 4")
        ggms = (np.abs(minors(A)) ** 2).sum(axis=1) / np.linalg.norm(A.A) ** 2
        if np.max(np.abs(ggms - mu_torus(A)) / mu_torus(A)) > 1e-9:
            out.append("GGMS identity")
        return out

    return {"suite": "hopf", "cases": trials, "failures": _run_trials(trial, trials, seed)}


def _noncrossing_pair(n: int, rng):
    diags = [(a, b) for a in range(1, n + 1) for b in range(a + 2, n + 1) if (a, b) != (1, n)]
    while True:
        d1, d2 = (diags[k] for k in rng.choice(len(diags), 2))
        if not crosses(d1, d2):
            return d1, d2


def suite_bending(trials: int = 100, seed: int = 0, **_) -> dict:
    def trial(rng) -> List[str]:
        out = []
        n = int(rng.integers(4, 10))
        P = random_polygon(n, rng)
        d1, d2 = _noncrossing_pair(n, rng)
        t1, t2 = rng.uniform(-np.pi, np.pi, 2)
        scale = P.perimeter
        Q = bend(P, d1, t1)
        if np.max(np.abs(Q.side_lengths - P.side_lengths)) > 1e-9 * scale:
            out.append("side lengths moved")
        if Q.closure_residual > 1e-9 * scale:
            out.append("closure lost")
        if np.max(np.abs(bend(P, d1, 2 * np.pi).edges - P.edges)) > 1e-9 * scale:
            out.append("bend by 2 pi is not the identity")
        ab = bend(bend(P, d1, t1), d2, t2)
        ba = bend(bend(P, d2, t2), d1, t1)
        if np.max(np.abs(ab.edges - ba.edges)) > 1e-9 * scale:
            out.append(f"bends along {d1} and {d2} do not commute")
        return out

    return {"suite": "bending", "cases": trials, "failures": _run_trials(trial, trials, seed)}


def suite_frames(trials: int = 100, seed: int = 0, **_) -> dict:
    def trial(rng) -> List[str]:
        out = []
        n = int(rng.integers(4, 9))
        t = random_triangulation(n, rng)
        forest = decompose(dual_tree(t))
        E = frames_of_polygon(random_polygon(n, rng), random_phases(n, rng))
        T = extend_framing(E, forest)
        if restrict_to_leaves(T) != E:
            out.append("restrict after extend changed the leaf frames")
        U = random_torus_d(T, rng)
        if not same_orbit(extend_framing(restrict_to_leaves(U), forest), U):
            out.append("extension of a restriction left the torus orbit")
        N, f = normalize(act(T, [qrandom(rng) for _ in range(forest.num_tripods)]))
        if not N.is_normalized():
            out.append("normalize did not normalize")
        edge = int(rng.choice(list(forest.glued)))
        theta = rng.uniform(-np.pi, np.pi)
        B = bend_lift(T, edge, np.exp(0.5j * theta))
        lifted = ky_canonicalize(polygon_of(B.leaves()), t)
        direct = ky_canonicalize(bend(polygon_of(E), forest.tree.sides[edge], theta), t)
        if np.max(np.abs(lifted.edges - direct.edges)) > 1e-9:
            out.append("bend_lift disagrees with bend")
        if hamiltonian_ledger(T)["max_deviation"] > 1e-9:
            out.append("lambda is not twice the length")
        return out

    return {"suite": "frames", "cases": trials, "failures": _run_trials(trial, trials, seed)}


def suite_strata(trials: int = 20, seed: int = 0, **_) -> dict:
    failures = []
    for name, make, t, zero in (
        ("bowtie", configs.random_bowtie, fan_triangulation(6), {(1, 4)}),
        ("two rhombi", configs.random_two_rhombi, fan_triangulation(8), {(1, 5)}),
    ):
        rng = np.random.default_rng([seed, len(name)])
        reps = [make(rng) for _ in range(trials)]
        for P in reps:
            S = stratum_signature(P, t).S
            if S != zero:
                failures.append(f"{name}: stratum {sorted(S)} != {sorted(zero)}")
        canon = [ky_canonicalize(P, t) for P in reps]
        gap = max(np.max(np.abs(c.edges - canon[0].edges)) for c in canon)
        if gap > 1e-9:
            failures.append(f"{name}: canonical forms differ by {gap:.2e}")

    def trial(rng) -> List[str]:
        n = int(rng.integers(4, 9))
        t = random_triangulation(n, rng)
        P = random_polygon(n, rng)
        a = ky_canonicalize(P, t)
        b = ky_canonicalize(P.rotated(random_rotation(rng)), t)
        msgs = []
        if np.max(np.abs(a.edges - b.edges)) > 1e-9:
            msgs.append("canonical form moved under a global rotation")
        if np.max(np.abs(ky_canonicalize(a, t).edges - a.edges)) > 1e-9:
            msgs.append("canonicalization is not idempotent")
        return msgs

    failures += _run_trials(trial, trials, seed)
    return {"suite": "strata", "cases": 2 * trials + trials, "failures": failures}


_RUNNERS: Dict[str, Callable[..., dict]] = {
    "semigroup": suite_semigroup,
    "initial-ideal": suite_initial_ideal,
    "hopf": suite_hopf,
    "bending": suite_bending,
    "frames": suite_frames,
    "strata": suite_strata,
}


def run(suite: str, n_max: Optional[int] = None, trials: Optional[int] = None, seed: int = 0) -> dict:
    """Run one suite, or all of them when ``suite == "all"``."""
    kw = {"seed": seed}
    if n_max is not None:
        kw["n_max"] = n_max
    if trials is not None:
        kw["trials"] = trials
    if suite == "all":
        reports = [_RUNNERS[s](**kw) for s in SUITES]
        return {
            "suite": "all",
            "cases": sum(r["cases"] for r in reports),
            "failures": [f"{r['suite']}: {m}" for r in reports for m in r["failures"]],
            "reports": reports,
        }
    return _RUNNERS[suite](**kw)
