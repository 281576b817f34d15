"""Acceptance criteria 1-9, one test each.

Each test records a one-line PASS/FAIL verdict; the lines are printed in the
pytest terminal summary and when this file is run as a script.
"""
import itertools
import time

import oracle
from cactus_morse import graphs, verify
from cactus_morse.complexes import betti
from cactus_morse.faults import inject_fault
from cactus_morse.graphs import ROOT, cactus_from_edges, canonical_code

VERDICTS: dict[int, str] = {}


def record(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
    VERDICTS[number] = line
    print(line)
    assert ok, line


def failing_checks(report, names):
    return [w for w in report.counterexamples if w["check"] in names]


def test_criterion_1_enumeration_ground_truth():
    t0 = time.perf_counter()
    counts = [len(graphs.enumerate_cactus_graphs(n)) for n in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    brute = [sorted(canonical_code(cactus_from_edges(V, e, ROOT)[0]) for V, e in oracle.reduced_cacti(n))
             for n in (1, 2, 3)]
    ok = counts == [1, 2, 5] and brute == [graphs.enumerate_cactus_graphs(n) for n in (1, 2, 3)]
    record(1, "catalog counts 1, 2, 5 match brute force", ok and elapsed < 1,
           f"counts={counts}, {elapsed:.3f}s")


def test_criterion_2_morse_dichotomy():
    rep = verify.verify_morse_dichotomy(4)
    record(2, "height dichotomy over every (graph, forest), n <= 4",
           rep.passed and rep.seconds < 60,
           f"{rep.stats.get('instances')} instances, {len(rep.counterexamples)} failures, {rep.seconds:.2f}s")


LINK_CHECKS = {"down_link_sphere", "down_link_acyclic", "forest_complex_sphere", "sbu_vertex_sphere",
               "sbu_vertex_census", "sbu_graph_sphere", "join_dimension_arithmetic", "up_link_sphere",
               "descending_link_sphere", "descending_link_acyclic", "boundary_squares_to_zero",
               "construction_error", "thin_forest_complex_equals_down_link"}


def test_criterion_3_link_spheres():
    rep = verify.verify_links(4, x_max_n=0)
    bad = failing_checks(rep, LINK_CHECKS)
    record(3, "down-, blow-up, up- and descending links are spheres or acyclic, n <= 4",
           not bad and rep.passed and rep.seconds < 600,
           f"{rep.stats['graphs']} graphs, {len(bad)} failures, {rep.seconds:.2f}s")


def test_criterion_4_x_characterization():
    rep = verify.verify_links(3, x_max_n=3)
    bad = failing_checks(rep, {"x_characterization", "retraction_idempotent", "retraction_decreasing"})
    record(4, "descending blow-ups are exactly X; r idempotent and decreasing, n <= 3",
           rep.passed and not bad and rep.stats.get("x_tuples", 0) > 0,
           f"{rep.stats.get('x_tuples', 0)} tuples, {len(bad)} failures")


def test_criterion_5_detection():
    rep = verify.verify_detection(6)
    record(5, "loop / loop-digon detection at p, n <= 6", rep.passed and rep.seconds < 60,
           f"{rep.stats['graphs']} graphs, {rep.seconds:.2f}s")


def test_criterion_6_acyclicity():
    rep = verify.verify_homology(4)
    bad = failing_checks(rep, {"sigma_q_acyclic", "boundary_squares_to_zero"})
    vectors = [rep.stats[f"betti[n={n},c=all]"] for n in range(1, 5)]
    record(6, "reduced rational homology of the orbit complex vanishes, n <= 4",
           not bad and all(v[0] == 1 and not any(v[1:]) for v in vectors),
           f"betti={vectors}, {rep.seconds:.2f}s")


def test_criterion_7_sublevel_agreement():
    rep = verify.verify_homology(4)
    bad = failing_checks(rep, {"sublevel_agreement_below_c", "sublevel_surjection_at_c",
                               "filtration", "top_sublevel_is_everything"})
    record(7, "sublevel Betti numbers agree below c and dominate at c, n <= 4",
           rep.passed and not bad, f"{len(bad)} failures")


def test_criterion_8_stability():
    rep = verify.verify_stability(5)
    record(8, "stabilisation is a cell bijection for 2c < n+1 and a rational equivalence for 3c/2 < n+1, n <= 4",
           rep.passed and rep.stats["bijection_checks"] > 0,
           f"{rep.stats['maps']} maps, {rep.stats['theorem_degree_checks']} degree checks")


def test_criterion_9_structural_soundness():
    problems = []
    homology = verify.verify_homology(4)
    if failing_checks(homology, {"boundary_squares_to_zero", "euler_characteristic"}):
        problems.append("boundary or euler")
    from cactus_morse import quotient
    for n in range(1, 5):
        X = quotient.build_sigma_q(n).complex  # d∘d = 0 is checked on construction
        b = betti(X)
        if X.euler_characteristic() != sum((-1) ** i * x for i, x in enumerate(b.unreduced)):
            problems.append(f"euler n={n}")
    entries = []
    for n in (1, 2, 3):
        for V in range(1, n + 1):
            slots = [(a, c) for a in range(V) for c in range(a, V)]
            for edges in itertools.combinations_with_replacement(slots, V - 1 + n):
                if oracle.is_reduced_cactus(V, list(edges)):
                    entries.append((canonical_code(cactus_from_edges(V, list(edges), ROOT)[0]), V, list(edges)))
    for (c1, v1, e1), (c2, v2, e2) in itertools.combinations(entries, 2):
        if (c1 == c2) != oracle.based_isomorphic(v1, e1, v2, e2):
            problems.append("code completeness")
            break
    suites = {"height": lambda: verify.verify_morse_dichotomy(3),
              "sign": lambda: verify.verify_homology(3),
              "compatibility": lambda: verify.verify_links(3)}
    for fault, run in suites.items():
        with inject_fault(fault):
            if run().passed:
                problems.append(f"fault {fault} undetected")
    record(9, "d∘d = 0, Euler characteristic, code completeness, fault fixtures caught",
           not problems, ", ".join(problems) or f"{len(entries)} labelled graphs compared")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
