"""Exhaustive verification suites over small ranks.

Each suite returns a :class:`VerificationReport`.  Homotopy statements
(contractible, homotopy equivalent to a sphere) are checked as statements
about reduced rational homology only.
"""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from cactus_morse import blowup, complexes, graphs, morse, quotient
from cactus_morse.complexes import BoundaryError, betti, is_homology_sphere

# ideal forests touching p are checked to ascend only up to this rank; the
# count of compatible families at p grows very fast beyond it
BASEPOINT_CHECK_MAX_RANK = 3

HOMOLOGY_NOTE = "homotopy claims are certified as reduced rational homology only"


@dataclass
class VerificationReport:
    suite: str
    params: dict
    counterexamples: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        return "fail" if self.counterexamples else "pass"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, check: str, rank: int, code: str, **witness):
        self.counterexamples.append({"check": check, "rank": rank, "code": code, **witness})

    def count(self, key: str, by: int = 1):
        self.stats[key] = self.stats.get(key, 0) + by

    def finish(self) -> "VerificationReport":
        self.counterexamples.sort(key=lambda w: (w["rank"], w["code"], w["check"],
                                                 json.dumps(w, sort_keys=True, default=str)))
        self.stats = dict(sorted(self.stats.items()))
        return self

    @property
    def witness(self) -> dict | None:
        """Smallest failing instance: lowest rank, then code."""
        return self.counterexamples[0] if self.counterexamples else None

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {"name": self.suite, "params": self.params, "status": self.status,
               "witnesses": self.counterexamples, "stats": self.stats, "notes": self.notes}
        if include_timing:
            out["seconds"] = round(self.seconds, 3)
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, default=str)

    def table(self) -> str:
        lines = [f"{self.suite}: {self.status.upper()}  {self.params}"]
        lines += [f"  {k:<36} {v}" for k, v in self.stats.items()]
        for w in self.counterexamples[:20]:
            lines.append(f"  FAIL {w['check']} rank={w['rank']} {w['code']}")
        if len(self.counterexamples) > 20:
            lines.append(f"  ... {len(self.counterexamples) - 20} more")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _timed(fn: Callable[..., VerificationReport]):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        report = fn(*args, **kwargs)
        report.seconds = time.perf_counter() - t0
        return report.finish()
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# Morse dichotomy
# ---------------------------------------------------------------------------


@_timed
def verify_morse_dichotomy(max_n: int = 4) -> VerificationReport:
    """Collapsing F raises h iff F joins two vertices of level D(F), else lowers it."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rep = VerificationReport("morse", {"max_rank": max_n})
    for n in range(1, max_n + 1):
        for g in graphs.catalog_graphs(n):
            code = graphs.canonical_code(g)
            h = morse.height(g)
            for F in morse.enumerate_forests(g):
                rep.count("instances")
                h2 = morse.height(morse.collapse(g, F)[0])
                up = morse.connects_at_depth(g, F)
                if h2 == h:
                    rep.fail("equal_height", n, code, forest=sorted(F))
                elif up and not h2 > h:
                    rep.fail("connecting_forest_not_ascending", n, code, forest=sorted(F),
                             height=h, collapsed=h2)
                elif not up and not h2 < h:
                    rep.fail("non_connecting_forest_not_descending", n, code,
                             forest=sorted(F), height=h, collapsed=h2)
                if graphs.coweight(morse.collapse(g, F)[0]) > graphs.coweight(g):
                    rep.fail("coweight_increased", n, code, forest=sorted(F))
                if len(F) == 1:
                    rep.count("single_edges")
                    (e,) = F
                    if morse.is_descending(g, F) == morse.is_horizontal(g, e):
                        rep.fail("single_edge_vertical_iff_descending", n, code, edge=e)
    return rep


# ---------------------------------------------------------------------------
# links
# ---------------------------------------------------------------------------


def _sphere_or_fail(rep, check, n, code, X, d, **extra):
    try:
        ok = is_homology_sphere(X, d)
    except BoundaryError as exc:
        rep.fail(check, n, code, error=str(exc), **extra)
        return
    if not ok:
        rep.fail(check, n, code, expected_sphere=d, reduced=list(betti(X).reduced), **extra)


def _acyclic_or_fail(rep, check, n, code, X, **extra):
    b = betti(X)
    if not b.is_acyclic():
        rep.fail(check, n, code, reduced=list(b.reduced), empty=bool(b.reduced_minus_one), **extra)


def _check_graph_links(code: str, x_max_n: int) -> VerificationReport:
    """All link checks for one graph, stopping at its first failure.

    Stopping early keeps corrupted runs cheap: a broken compatibility test
    makes every family of partitions admissible and the ideal-forest count
    explodes.
    """
    g = graphs.from_code(code)
    rep = VerificationReport("links-graph", {})
    rep.count("graphs")
    rep.count("thin_graphs" if morse.is_thin(g) else "non_thin_graphs")
    state = {}
    stages = [_down_link_stage, _sbu_stage, _up_link_stage]
    if g.rank <= x_max_n:
        stages.append(_check_blowup_corpus)
    try:
        for stage in stages:
            stage(rep, g, code, state)
            if rep.counterexamples:
                break
    except BoundaryError as exc:
        rep.fail("boundary_squares_to_zero", g.rank, code, error=str(exc))
    except (ValueError, KeyError) as exc:
        rep.fail("construction_error", g.rank, code, error=f"{type(exc).__name__}: {exc}")
    return rep


def _down_link_stage(rep, g, code, state):
    n, V = g.rank, g.num_vertices
    down = state["down"] = morse.down_link_complex(g)
    if morse.is_thin(g):
        _sphere_or_fail(rep, "down_link_sphere", n, code, down, V - 2)
        fc = morse.forest_complex(g)
        _sphere_or_fail(rep, "forest_complex_sphere", n, code, fc, V - 2)
        if fc.cells != down.cells:
            rep.fail("thin_forest_complex_equals_down_link", n, code)
    else:
        _acyclic_or_fail(rep, "down_link_acyclic", n, code, down)


def _sbu_stage(rep, g, code, state):
    n, V, c = g.rank, g.num_vertices, graphs.coweight(g)
    dims = []
    for v in range(1, V):
        k = len(g.based_at[v])
        S = blowup.sbu_complex(g, v)
        rep.count("sbu_vertex_complexes")
        _sphere_or_fail(rep, "sbu_vertex_sphere", n, code, S, k - 2, vertex=v)
        if k >= 2:
            facets = len(S.cells[-1]) if S.cells else 0
            if S.counts[0] != 2 ** k - 2 or facets != math.factorial(k) or S.dim != k - 2:
                rep.fail("sbu_vertex_census", n, code, vertex=v, counts=S.counts)
        dims.append(k - 2)
    if (V - 2) + sum(dims) != c - V:
        rep.fail("join_dimension_arithmetic", n, code)
    _sphere_or_fail(rep, "sbu_graph_sphere", n, code, blowup.sbu_graph_complex(g), c - V)


def _up_link_stage(rep, g, code, state):
    n, V, c = g.rank, g.num_vertices, graphs.coweight(g)
    thin = morse.is_thin(g)
    up = blowup.up_link_complex(g)
    if thin:
        _sphere_or_fail(rep, "up_link_sphere", n, code, up, c - V)
    dlk = complexes.join(state["down"], up)
    rep.count("descending_links")
    if thin:
        _sphere_or_fail(rep, "descending_link_sphere", n, code, dlk, c - 1)
    else:
        _acyclic_or_fail(rep, "descending_link_acyclic", n, code, dlk)


def _check_blowup_corpus(rep, g, code, state=None):
    n = g.rank
    base = morse.height(g)
    for f in blowup.blowup_tuples(g):
        rep.count("x_tuples")
        desc = blowup.is_descending_blowup(g, blowup.tuple_forest(f))
        inside = blowup.x_membership(g, f)
        if desc != inside:
            rep.fail("x_characterization", n, code, tuple=_tuple_repr(f), descending=desc)
        if inside:
            r = blowup.retraction_r(g, f)
            if blowup.retraction_r(g, r) != r:
                rep.fail("retraction_idempotent", n, code, tuple=_tuple_repr(f))
            if any(a is not None and a != b for a, b in zip(r, f)):
                rep.fail("retraction_decreasing", n, code, tuple=_tuple_repr(f))
        forest = blowup.tuple_forest(f)
        if len(forest) == 1:
            big, F, _ = blowup.realize_blowup(g, forest)
            rep.count("round_trips")
            if graphs.canonical_code(morse.collapse(big, F)[0]) != code:
                rep.fail("blowup_round_trip", n, code, tuple=_tuple_repr(f))
    if n > BASEPOINT_CHECK_MAX_RANK:
        return
    for f in blowup.enumerate_ideal_forests(g, include_basepoint=True):
        if any(P.vertex == graphs.ROOT for P in f):
            rep.count("basepoint_ideal_forests")
            if morse.height(blowup.realize_blowup(g, f)[0]) < base:
                rep.fail("basepoint_blowup_descends", n, code,
                         forest=[_partition_repr(P) for P in sorted(f, key=blowup.Partition.sort_key)])


def _partition_repr(P):
    return [P.vertex, P.split_index, sorted(P.side)]


def _tuple_repr(f):
    return [None if P is None else _partition_repr(P) for P in f]


def _merge(into: VerificationReport, part: VerificationReport):
    into.counterexamples += part.counterexamples
    for k, v in part.stats.items():
        into.count(k, v)


@_timed
def verify_links(max_n: int = 4, x_max_n: int = 4, jobs: int = 1) -> VerificationReport:
    """Down-links, separating blow-up complexes, up-links and descending links."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rep = VerificationReport("links", {"max_rank": max_n, "x_max_rank": x_max_n},
                             notes=[HOMOLOGY_NOTE])
    codes = [c for n in range(1, max_n + 1) for c in graphs.enumerate_cactus_graphs(n)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_check_graph_links, codes, [x_max_n] * len(codes)))
    else:
        parts = [_check_graph_links(c, x_max_n) for c in codes]
    for part in parts:
        _merge(rep, part)
    return rep


# ---------------------------------------------------------------------------
# detection at the basepoint
# ---------------------------------------------------------------------------


@_timed
def verify_detection(max_n: int = 6) -> VerificationReport:
    """2c < n forces a loop at p; c < 2n/3 forces a loop or loop-digon pair at p."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rep = VerificationReport("detect", {"max_rank": max_n})
    sharp_loop, sharp_pair = [], []
    for n in range(1, max_n + 1):
        for g in graphs.catalog_graphs(n):
            code = graphs.canonical_code(g)
            loops, pairs = graphs.detect_base_features(g)
            _, c = graphs.weight_coweight(g)
            rep.count("graphs")
            if 2 * c < n and loops < 1:
                rep.fail("loop_when_2c_lt_n", n, code, coweight=c)
            if 3 * c < 2 * n and loops + pairs < 1:
                rep.fail("loop_or_pair_when_c_lt_2n_3", n, code, coweight=c)
            if 2 * c == n and loops == 0:
                sharp_loop.append(code)
            if 3 * c == 2 * n and loops + pairs == 0:
                sharp_pair.append(code)
    rep.stats["sharpness_2c_eq_n_without_loop"] = len(sharp_loop)
    rep.stats["sharpness_3c_eq_2n_without_loop_or_pair"] = len(sharp_pair)
    rep.stats["sharpness_examples"] = sorted(sharp_loop, key=lambda s: (len(s), s))[:3] + \
        sorted(sharp_pair, key=lambda s: (len(s), s))[:3]
    return rep


# ---------------------------------------------------------------------------
# homology of the quotients
# ---------------------------------------------------------------------------


def _quotients(max_n, cache_dir=None):
    out = {}
    for n in range(1, max_n + 1):
        for c in [None] + list(range(n)):
            out[(n, c)] = quotient.cached_sigma_q(n, c, cache_dir)
    return out


@_timed
def verify_homology(max_n: int = 4, cache_dir=None, orbit_check_max_n: int = 3) -> VerificationReport:
    """ΣQ_n is rationally acyclic and ΣQ_{n,c} agrees with it below degree c."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rep = VerificationReport("homology", {"max_rank": max_n}, notes=[
        "Betti numbers are exact over Q; ΣQ_n stands in for the group via contractibility of ΣK_n"])
    try:
        qs = _quotients(max_n, cache_dir)
    except BoundaryError as exc:
        rep.fail("boundary_squares_to_zero", 0, "", error=str(exc))
        return rep
    for (n, c), q in sorted(qs.items(), key=lambda kv: (kv[0][0], -1 if kv[0][1] is None else kv[0][1])):
        label = f"n={n},c={'all' if c is None else c}"
        b = betti(q.complex)
        rep.stats[f"betti[{label}]"] = list(b.unreduced)
        rep.stats[f"cells[{label}]"] = q.counts
        if q.complex.euler_characteristic() != sum((-1) ** i * x for i, x in enumerate(b.unreduced)):
            rep.fail("euler_characteristic", n, label)
        if c is None:
            if not b.is_acyclic():
                rep.fail("sigma_q_acyclic", n, label, reduced=list(b.reduced))
            continue
        full = betti(qs[(n, None)].complex)
        for i in range(c):
            if b.unreduced_at(i) != full.unreduced_at(i):
                rep.fail("sublevel_agreement_below_c", n, label, degree=i,
                         sublevel=b.unreduced_at(i), full=full.unreduced_at(i))
        if b.unreduced_at(c) < full.unreduced_at(c):
            rep.fail("sublevel_surjection_at_c", n, label, degree=c)
        if any(graphs.coweight(quotient.decode_cell(k)[0]) > c for ks in q.keys for k in ks):
            rep.fail("filtration", n, label)
        if c == n - 1 and q.keys != qs[(n, None)].keys:
            rep.fail("top_sublevel_is_everything", n, label)
    for n in range(1, min(max_n, orbit_check_max_n) + 1):
        for k, (g, flag) in quotient.quotient_cells(n).items():
            if flag:
                rep.count("orbit_boundary_checks")
                if not quotient.orbit_boundaries_agree(g, flag):
                    rep.fail("orbit_boundary_well_defined", n, k)
    return rep


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------


@_timed
def verify_stability(max_n: int = 4, cache_dir=None) -> VerificationReport:
    """ι: ΣQ_{n,c} -> ΣQ_{n+1,c} for n < max_n.

    Cell bijection when 2c < n+1, Betti equality (and vanishing relative
    homology) when 3c/2 < n+1, and the resulting degree-wise agreement of
    ΣQ_n and ΣQ_{n+1} for n > (3i-1)/2.
    """
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    rep = VerificationReport("stability", {"max_rank": max_n}, notes=[HOMOLOGY_NOTE])
    try:
        qs = _quotients(max_n, cache_dir)
    except BoundaryError as exc:
        rep.fail("boundary_squares_to_zero", 0, "", error=str(exc))
        return rep
    extra = {}

    def q(n, c):
        if (n, c) in qs:
            return qs[(n, c)]
        if (n, c) not in extra:
            extra[(n, c)] = quotient.cached_sigma_q(n, c, cache_dir)
        return extra[(n, c)]

    for n in range(1, max_n):
        for c in range(n):
            label = f"n={n},c={c}"
            m = quotient.iota(n, c, q(n, c), q(n + 1, c))
            rep.count("maps")
            if not m.is_injective():
                rep.fail("iota_injective", n, label)
            if not m.preserves_dimension():
                rep.fail("iota_preserves_dimension", n, label)
            bad = m.chain_map_failures()
            if bad:
                rep.fail("iota_chain_map", n, label, cells=bad[:5])
            if 2 * c < n + 1:
                rep.count("bijection_checks")
                if not m.bijective_in_each_dimension():
                    rep.fail("iota_cell_bijection", n, label,
                             source=m.source.counts, target=m.target.counts)
            if 3 * c < 2 * (n + 1):
                rep.count("homology_equivalence_checks")
                b1, b2 = betti(m.source.complex), betti(m.target.complex)
                if b1.unreduced != b2.unreduced:
                    rep.fail("iota_betti_equal", n, label,
                             source=list(b1.unreduced), target=list(b2.unreduced))
                rel = m.relative_betti()
                if any(rel):
                    rep.fail("iota_relative_homology_vanishes", n, label, relative=list(rel))
    for n in range(1, max_n):
        bn, bm = betti(qs[(n, None)].complex), betti(qs[(n + 1, None)].complex)
        for i in range(max(len(bn.unreduced), len(bm.unreduced))):
            if 2 * n > 3 * i - 1:
                rep.count("theorem_degree_checks")
                if bn.unreduced_at(i) != bm.unreduced_at(i):
                    rep.fail("stable_degree_agreement", n, f"i={i}",
                             lower=bn.unreduced_at(i), upper=bm.unreduced_at(i))
    return rep


SUITES = {
    "morse": verify_morse_dichotomy,
    "links": verify_links,
    "detect": verify_detection,
    "homology": verify_homology,
    "stability": verify_stability,
}
