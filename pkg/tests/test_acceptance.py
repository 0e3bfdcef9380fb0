"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line through the ``report`` fixture; the
lines are collected in the terminal summary under "acceptance criteria".
"""

import itertools
import time

import numpy as np

from toric import configs
from toric.frames import (
    bend_lift,
    extend_framing,
    frames_of_polygon,
    hamiltonian_ledger,
    polygon_of,
    random_phases,
    random_torus_d,
    restrict_to_leaves,
    same_orbit,
)
from toric.kempe import (
    admissible_weightings,
    induced_weighting,
    is_admissible,
    kempe_graphs,
    star_product,
    weighting_to_kempe,
)
from toric.pluecker import (
    exponents_from_weighting,
    initial_form,
    phi,
    phi_monomial,
    quadric_terms,
    straighten,
    weight_deficit,
    weighting_from_exponents,
)
from toric.polygon import (
    bend,
    edges_of,
    hopf,
    in_cone_Dn,
    ky_canonicalize,
    minors,
    mu_torus,
    project_to_zero_level,
    random_polygon,
    random_rotation,
    sample_linkage,
    stratum_signature,
)
from toric.tree import (
    Triangulation,
    all_triangulations,
    crosses,
    decompose,
    dual_tree,
    fan_triangulation,
    path_weight,
    random_triangulation,
    symmetric_hexagon,
)


def _leading_term_failure(g1, g2, tree):
    """Check the leading-term statement straight from the expansion; None if it holds."""
    exp = straighten(g1, g2)
    target = g1.weight(tree) + g2.weight(tree)
    weights = {g: g.weight(tree) for g in exp}
    top = [g for g, w in weights.items() if w == target]
    if len(top) != 1:
        return f"{len(top)} terms at weight {target}"
    g = top[0]
    if exp[g] != 1:
        return f"leading coefficient {exp[g]}"
    if any(w > target for w in weights.values()):
        return "a term outweighs w(G1) + w(G2)"
    if g != star_product(g1, g2, tree):
        return "leading term differs from the star product"
    return None


def test_criterion_1_leading_term(report):
    start = time.perf_counter()
    cases, bad = 0, []
    for n in range(4, 8):
        singles = [g for g in kempe_graphs(n, 1) if g.degree == 1]
        for t in all_triangulations(n):
            tree = dual_tree(t)
            for g1, g2 in itertools.combinations_with_replacement(singles, 2):
                cases += 1
                msg = _leading_term_failure(g1, g2, tree)
                if msg:
                    bad.append((n, g1.edges, g2.edges, msg))
    rng = np.random.default_rng(2024)
    pools = {n: [g for g in kempe_graphs(n, 3) if g.degree > 0] for n in (6, 7, 8)}
    for _ in range(500):
        n = int(rng.choice([6, 7, 8]))
        tree = dual_tree(random_triangulation(n, rng))
        g1, g2 = (pools[n][k] for k in rng.integers(len(pools[n]), size=2))
        cases += 1
        msg = _leading_term_failure(g1, g2, tree)
        if msg:
            bad.append((n, g1.edges, g2.edges, msg))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    report(1, ok, f"{cases} products, {len(bad)} failures, {elapsed:.1f} s")
    assert not bad, bad[:5]
    assert elapsed < 30


def test_criterion_2_hexagon_fixed_points(report):
    sym = dual_tree(symmetric_hexagon())
    w_sym = path_weight(sym, 1, 4)
    zig = dual_tree(Triangulation(6, frozenset({(1, 3), (3, 6), (4, 6)})))
    w_zig = path_weight(zig, 1, 4)
    x = phi(1, 4, decompose(sym))
    used = [i + 1 for i, row in enumerate(x.x) if any(row)]
    # Z13(tau_1) Z12(tau_2) Z13(tau_4): slot pairs (0,2), (0,1), (0,2) in 0-based labels
    phi_ok = used == [1, 2, 4] and x.x[0] == (0, 1, 0) and x.x[1] == (1, 0, 0) and x.x[3] == (0, 1, 0)
    ok = w_sym == 5 and phi_ok
    report(
        2,
        ok,
        f"symmetric-tree w_14 = {w_sym} (expected 5); Phi(Z_14) uses tripods {used}; "
        f"w_14 = {w_zig} on the caterpillar with diagonals 13, 36, 46. "
        "A path through 3 tripods has 4 edges, so 5 is out of reach on the symmetric tree",
    )
    assert phi_ok
    assert w_zig == 5
    assert w_sym == 5, "edge count on the symmetric hexagon tree is 4; see the decisions ledger"


def test_criterion_3_bijection_and_iso_chain(report):
    cases, bad = 0, 0
    for n in range(3, 8):
        graphs = list(kempe_graphs(n, 3))
        for t in all_triangulations(n):
            tree = dual_tree(t)
            for g in graphs:
                cases += 1
                w = induced_weighting(g, tree)
                bad += not (is_admissible(w) and w.degree == g.degree and weighting_to_kempe(w) == g)
            weights = list(admissible_weightings(tree, 3))
            bad += len(weights) != len(graphs)
            for w in weights:
                cases += 1
                bad += induced_weighting(weighting_to_kempe(w), tree) != w

    rng = np.random.default_rng(7)
    pools = {n: list(kempe_graphs(n, 2)) for n in range(4, 9)}
    chain_bad = 0
    for _ in range(1000):
        n = int(rng.integers(4, 9))
        tree = dual_tree(random_triangulation(n, rng))
        forest = decompose(tree)
        g1, g2 = (pools[n][k] for k in rng.integers(len(pools[n]), size=2))
        g = star_product(g1, g2, tree)
        w1, w2, w = (induced_weighting(h, tree) for h in (g1, g2, g))
        x1, x2, x = (exponents_from_weighting(v, forest) for v in (w1, w2, w))
        chain_bad += not (
            w == w1 + w2
            and x == x1 + x2
            and x == phi_monomial(g, forest)
            and weighting_from_exponents(x) == w
            and weighting_to_kempe(w) == g
        )
    ok = bad == 0 and chain_bad == 0
    report(3, ok, f"{cases} round trips ({bad} failures); 1000 iso-chain products ({chain_bad} failures)")
    assert ok


def test_criterion_4_initial_ideal(report):
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    cases, bad = 0, []
    for n in range(4, 9):
        trees = [dual_tree(fan_triangulation(n))] + [dual_tree(random_triangulation(n, rng)) for _ in range(10)]
        for tree in trees:
            for q in quadric_terms(n):
                cases += 1
                form = initial_form(q, tree)
                d = weight_deficit(q, tree)
                if len(form) != 2 or d <= 0 or d % 2:
                    bad.append((n, q, len(form), d))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    report(4, ok, f"{cases} quadrics, {len(bad)} failures, {elapsed:.1f} s")
    assert not bad, bad[:5]
    assert elapsed < 10


def test_criterion_5_hopf_ledger(report):
    rng = np.random.default_rng(5)
    z = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
    w = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
    ref = (np.abs(z) ** 2 + np.abs(w) ** 2) / 4
    hopf_err = float(np.max(np.abs(np.linalg.norm(hopf(z, w), axis=-1) - ref) / ref))

    closure, side_err = 0.0, 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 12))
        A = project_to_zero_level(rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
        P = edges_of(A)
        closure = max(closure, P.closure_residual)
        c = (np.abs(A.A) ** 2).sum(axis=0)
        side_err = max(side_err, float(np.max(np.abs(P.side_lengths - c / 4) / (c / 4))))

    ggms_err = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 12))
        A = project_to_zero_level(rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
        lhs = mu_torus(A)
        rhs = (np.abs(minors(A)) ** 2).sum(axis=1) / np.linalg.norm(A.A) ** 2
        ggms_err = max(ggms_err, float(np.max(np.abs(lhs - rhs) / lhs)))

    ok = hopf_err < 1e-12 and side_err < 1e-12 and closure < 1e-10 and ggms_err < 1e-9
    report(
        5,
        ok,
        f"Hopf norm {hopf_err:.1e}, edge length {side_err:.1e}, closure {closure:.1e}, GGMS {ggms_err:.1e}",
    )
    assert ok


def test_criterion_6_momentum_polytope(report):
    rng = np.random.default_rng(6)
    outside = 0
    for _ in range(10_000):
        n = int(rng.integers(3, 12))
        A = project_to_zero_level(rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n)))
        r = edges_of(A).side_lengths
        outside += not in_cone_Dn(r / r.sum(), slack=1e-12)

    feasible_fail = 0
    for _ in range(100):
        n = int(rng.integers(3, 10))
        while True:
            r = rng.uniform(0.05, 1.0, n)
            if in_cone_Dn(r):
                break
        P = sample_linkage(r, rng)
        feasible_fail += not (P.closure_residual < 1e-9 * r.sum() and np.allclose(P.side_lengths, r, atol=1e-9))

    infeasible_ok = 0
    for _ in range(100):
        n = int(rng.integers(3, 10))
        r = rng.uniform(0.05, 1.0, n)
        k = rng.integers(n)
        r[k] = r.sum() - r[k] + rng.uniform(0.01, 1.0)
        try:
            sample_linkage(r, rng)
        except ValueError:
            infeasible_ok += 1

    ok = outside == 0 and feasible_fail == 0 and infeasible_ok == 100
    report(
        6,
        ok,
        f"{outside}/10000 polygons outside D_n; sampler failed on {feasible_fail}/100 feasible, "
        f"refused {infeasible_ok}/100 infeasible",
    )
    assert ok


def _noncrossing_pair(n, rng):
    diags = [(a, b) for a in range(1, n + 1) for b in range(a + 2, n + 1) if (a, b) != (1, n)]
    while True:
        d1, d2 = (diags[k] for k in rng.choice(len(diags), 2, replace=False))
        if not crosses(d1, d2):
            return d1, d2


def test_criterion_7_bending(report):
    rng = np.random.default_rng(7)
    polys = []
    for _ in range(1000):
        # a square has no two distinct noncrossing diagonals
        n = int(rng.integers(5, 10))
        polys.append((random_polygon(n, rng), *_noncrossing_pair(n, rng), *rng.uniform(-np.pi, np.pi, 2)))
    start = time.perf_counter()
    worst = 0.0
    for P, d1, d2, t1, t2 in polys:
        s = P.perimeter
        Q = bend(P, d1, t1)
        ab = bend(Q, d2, t2)
        ba = bend(bend(P, d2, t2), d1, t1)
        worst = max(
            worst,
            np.max(np.abs(Q.side_lengths - P.side_lengths)) / s,
            Q.closure_residual / s,
            np.max(np.abs(bend(P, d1, 2 * np.pi).edges - P.edges)) / s,
            np.max(np.abs(ab.edges - ba.edges)) / s,
        )
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 5
    report(7, ok, f"1000 trials, worst relative deviation {worst:.1e}, {elapsed:.2f} s")
    assert ok


def test_criterion_8_frame_pipeline(report):
    rng = np.random.default_rng(8)
    exact_fail = orbit_fail = 0
    lam_gap = bend_gap = ledger_gap = 0.0
    for _ in range(500):
        n = int(rng.integers(4, 9))
        t = random_triangulation(n, rng)
        forest = decompose(dual_tree(t))
        E = frames_of_polygon(random_polygon(n, rng), random_phases(n, rng))
        T = extend_framing(E, forest)
        exact_fail += restrict_to_leaves(T) != E

        U = random_torus_d(T, rng)
        V = extend_framing(restrict_to_leaves(U), forest)
        lam_gap = max(lam_gap, max(abs(a.lam - b.lam) for a, b in zip(U.frames, V.frames)))
        orbit_fail += not same_orbit(V, U)

        edge = int(rng.choice(list(forest.glued)))
        theta = rng.uniform(-np.pi, np.pi)
        tt = np.exp(0.5j * theta)
        P = polygon_of(E)
        side = forest.tree.sides[edge]
        direct = ky_canonicalize(bend(P, side, theta), t)
        # t and -t cover the same rotation; t^2 is the lift of the doubled angle
        for lift, target in ((tt, direct), (-tt, direct), (tt * tt, ky_canonicalize(bend(P, side, 2 * theta), t))):
            got = ky_canonicalize(polygon_of(bend_lift(T, edge, lift).leaves()), t)
            bend_gap = max(bend_gap, float(np.max(np.abs(got.edges - target.edges))))

        rows = [r for r in hamiltonian_ledger(T)["rows"] if r["kind"] == "diagonal"]
        ledger_gap = max([ledger_gap] + [r["deviation"] for r in rows])

    ok = exact_fail == 0 and orbit_fail == 0 and lam_gap < 1e-12 and bend_gap < 1e-9 and ledger_gap < 1e-9
    report(
        8,
        ok,
        f"500 framings: restrict(extend) mismatches {exact_fail}, orbit failures {orbit_fail}, "
        f"lambda gap {lam_gap:.1e}, bend_lift vs bend {bend_gap:.1e}, internal lambda vs 2*diagonal {ledger_gap:.1e}",
    )
    assert ok


def test_criterion_9_ky_congruence(report):
    rng = np.random.default_rng(9)
    t6, t8 = fan_triangulation(6), fan_triangulation(8)

    bowties = [configs.random_bowtie(rng) for _ in range(20)]
    strata_ok = all(stratum_signature(B, t6).S == {(1, 4)} for B in bowties)
    reps = [ky_canonicalize(B, t6) for B in bowties]
    bow_gap = max(np.max(np.abs(a.edges - b.edges)) for a, b in itertools.combinations(reps, 2))
    raw_gap = max(np.max(np.abs(a.edges - b.edges)) for a, b in itertools.combinations(bowties, 2))

    rhombi = [configs.random_two_rhombi(rng) for _ in range(20)]
    strata_ok &= all(stratum_signature(R, t8).S == {(1, 5)} for R in rhombi)
    reps = [ky_canonicalize(R, t8) for R in rhombi]
    rh_gap = max(np.max(np.abs(a.edges - b.edges)) for a, b in itertools.combinations(reps, 2))

    base = ky_canonicalize(configs.two_rhombi(), t8)
    moved = min(
        float(np.max(np.abs(ky_canonicalize(bend(configs.two_rhombi(), d, 1.0), t8).edges - base.edges)))
        for d in ((1, 3), (1, 7))
    )
    global_gap = float(
        np.max(np.abs(ky_canonicalize(rhombi[0].rotated(random_rotation(rng)), t8).edges - reps[0].edges))
    )

    ok = strata_ok and bow_gap < 1e-9 and rh_gap < 1e-9 and moved > 1e-3 and raw_gap > 1e-3 and global_gap < 1e-9
    report(
        9,
        ok,
        f"bowties {bow_gap:.1e} apart after canonicalizing ({raw_gap:.2f} before); two rhombi {rh_gap:.1e}; "
        f"outer bends move the class by {moved:.2f}",
    )
    assert ok
