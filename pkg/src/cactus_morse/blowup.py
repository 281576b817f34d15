"""Cactus blow-ups via half-edge partitions, separating complexes and up-links.

A blow-up at a vertex is described by a partition of the half-edges there
into two blocks (an ideal edge).  In a cactus graph the half-edges at v come
in pairs, one pair per cycle through v; index 0 is the pair of ``C_v`` and
indices 1..b(v) the cycles based at v.  A partition gives a cactus blow-up
iff exactly one pair is split and both blocks have at least two elements.

A partition is stored by the block *not* containing a reference half-edge:
the second half of pair 0 away from the basepoint, and a phantom basepoint
marker at p (so the basepoint stays on the reference side).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from cactus_morse.complexes import CellComplex, clique_complex, join, join_all, order_complex
from cactus_morse.graphs import ROOT, CactusGraph, cactus_from_edges
from cactus_morse.morse import down_link_complex, height

BASEPOINT_MARKER = -1


@dataclass(frozen=True)
class Partition:
    vertex: int
    split_index: int
    side: frozenset

    def sort_key(self):
        return (self.vertex, self.split_index, sorted(self.side))


IdealForest = frozenset  # of Partition


@dataclass(frozen=True)
class HalfEdgePair:
    index: int
    cycle: int
    a: int
    a_bar: int


def half_edge_pairs(g: CactusGraph, v: int) -> list[HalfEdgePair]:
    """Label the half-edges at v pairwise by the cycle they lie on."""
    out = []
    cycles = ([(0, g.towards_root[v])] if v != ROOT else []) + [
        (i + 1, k) for i, k in enumerate(g.based_at[v])]
    for index, k in cycles:
        seq = g.cycles[k].vertices
        pos = seq.index(v)
        es = g.cycle_edges[k]
        out.append(HalfEdgePair(index, k, 2 * es[pos],
                                2 * es[pos - 1] + 1))
    return out


def _halves(g, v):
    pairs = half_edge_pairs(g, v)
    which = {}
    for p in pairs:
        which[p.a] = p.index
        which[p.a_bar] = p.index
    universe = set(which)
    if v == ROOT:
        ref = BASEPOINT_MARKER
        universe.add(ref)
    else:
        ref = pairs[0].a_bar
    return pairs, which, frozenset(universe), ref


def _split_indices(side, pairs):
    return [p.index for p in pairs if (p.a in side) != (p.a_bar in side)]


def _is_valid(g, P):
    pairs, _, universe, ref = _halves(g, P.vertex)
    side = P.side
    if ref in side or not side <= universe:
        return False
    split = _split_indices(side, pairs)
    return len(side) >= 2 and len(universe - side) >= 2 and split == [P.split_index]


def cactus_partitions(g: CactusGraph, v: int) -> list[Partition]:
    """Every partition at v giving a reduced cactus blow-up."""
    pairs, _, universe, ref = _halves(g, v)
    free = sorted(universe - {ref})
    out = []
    for r in range(2, len(free) + 1):
        for side in itertools.combinations(free, r):
            side = frozenset(side)
            if len(universe) - r < 2:
                continue
            split = _split_indices(side, pairs)
            if len(split) == 1:
                out.append(Partition(v, split[0], side))
    return sorted(out, key=Partition.sort_key)


def is_separating(g: CactusGraph, v: int, P: Partition) -> bool:
    if v == ROOT:
        raise ValueError("the basepoint has no cycle C_p; separation is undefined")
    return P.split_index == 0


def compatible(P: Partition, Q: Partition) -> bool:
    """Some intersection of a block of P with a block of Q is empty.

    Blocks are stored away from a common reference element, so the
    complement-complement intersection is never empty and the test reduces
    to disjointness or nesting of the stored sides.
    """
    if P.vertex != Q.vertex:
        raise ValueError("partitions at different vertices")
    a, b = P.side, Q.side
    return not (a & b) or a <= b or b <= a


def separating_partitions(g: CactusGraph, v: int) -> list[Partition]:
    return [P for P in cactus_partitions(g, v) if is_separating(g, v, P)]


def sbu_complex(g: CactusGraph, v: int) -> CellComplex:
    """Flag complex of pairwise compatible separating partitions at v."""
    if v == ROOT:
        raise ValueError("separating blow-ups are defined away from the basepoint")
    return clique_complex(separating_partitions(g, v), compatible)


def sbu_graph_complex(g: CactusGraph) -> CellComplex:
    return join_all(sbu_complex(g, v) for v in range(1, g.num_vertices))


# ---------------------------------------------------------------------------
# ideal forests and their realisation
# ---------------------------------------------------------------------------


def realize_blowup(g: CactusGraph, f: Iterable[Partition]) -> tuple[CactusGraph, frozenset, dict[int, int]]:
    """Blow up ``g`` along an ideal forest.

    Returns the new graph, the forest of new edges in it (collapsing which
    gives back ``g``), and the map from old edge ids to new ones.
    """
    f = list(f)
    if not f:
        raise ValueError("empty ideal forest")
    by_vertex: dict[int, list[Partition]] = {}
    for P in f:
        if not _is_valid(g, P):
            raise ValueError(f"{P} is not a cactus partition of its vertex")
        by_vertex.setdefault(P.vertex, []).append(P)
    node = {}  # half-edge -> new endpoint
    new_edges = []
    next_vertex = g.num_vertices
    for v, parts in by_vertex.items():
        if len(set(parts)) != len(parts):
            raise ValueError("repeated partition")
        for P, Q in itertools.combinations(parts, 2):
            if not compatible(P, Q):
                raise ValueError(f"incompatible partitions {P} and {Q}")
        parts = sorted(parts, key=lambda P: -len(P.side))
        ids = {}
        for P in parts:
            ids[P] = next_vertex
            next_vertex += 1
        for i, P in enumerate(parts):
            parent = next((Q for Q in reversed(parts[:i]) if P.side < Q.side), None)
            new_edges.append((ids[P], v if parent is None else ids[parent]))
        for h in set().union(*(P.side for P in parts)):
            if h == BASEPOINT_MARKER:
                continue
            smallest = min((P for P in parts if h in P.side), key=lambda P: len(P.side))
            node[h] = ids[smallest]
    old = [(node.get(2 * e, u), node.get(2 * e + 1, w)) for e, (u, w) in enumerate(g.edges)]
    h, emap = cactus_from_edges(next_vertex, old + new_edges, ROOT)
    E = g.num_edges
    forest = frozenset(emap[E + t] for t in range(len(new_edges)))
    return h, forest, {e: emap[e] for e in range(E)}


def _compatible_families(parts: Sequence[Partition]) -> list[tuple[Partition, ...]]:
    out = [()]
    m = len(parts)
    higher = [{j for j in range(i + 1, m) if compatible(parts[i], parts[j])} for i in range(m)]

    def extend(fam, cand):
        out.append(tuple(parts[i] for i in fam))
        for j in sorted(cand):
            extend(fam + (j,), cand & higher[j])

    for i in range(m):
        extend((i,), higher[i])
    return out


def enumerate_ideal_forests(g: CactusGraph, include_basepoint: bool = True) -> list[IdealForest]:
    """All nonempty systems of pairwise compatible cactus partitions."""
    verts = range(0 if include_basepoint else 1, g.num_vertices)
    families = [_compatible_families(cactus_partitions(g, v)) for v in verts]
    out = []
    for combo in itertools.product(*families):
        f = frozenset(P for fam in combo for P in fam)
        if f:
            out.append(f)
    return out


def is_descending_blowup(g: CactusGraph, f: Iterable[Partition]) -> bool:
    return height(realize_blowup(g, f)[0]) < height(g)


# ---------------------------------------------------------------------------
# one-partition-per-vertex tuples
# ---------------------------------------------------------------------------

BlowupTuple = tuple  # entry v is a Partition at v or None; entry 0 is None


def blowup_tuples(g: CactusGraph) -> list[BlowupTuple]:
    """Every tuple with at least one non-bottom entry, over vertices other than p."""
    choices = [[None]] + [[None] + cactus_partitions(g, v) for v in range(1, g.num_vertices)]
    return [t for t in itertools.product(*choices) if any(x is not None for x in t)]


def tuple_depth(g: CactusGraph, f: BlowupTuple) -> int:
    return min(g.level[v] for v, P in enumerate(f) if P is not None)


def x_membership(g: CactusGraph, f: BlowupTuple) -> bool:
    """Some vertex on the shallowest blown-up level carries a separating entry."""
    if all(P is None for P in f):
        raise ValueError("tuple has no entries")
    depth = tuple_depth(g, f)
    return any(P is not None and g.level[v] == depth and is_separating(g, v, P)
               for v, P in enumerate(f))


def retraction_r(g: CactusGraph, f: BlowupTuple) -> BlowupTuple:
    """Drop every non-separating entry."""
    if not x_membership(g, f):
        raise ValueError("retraction is defined on X only")
    return tuple(P if P is not None and is_separating(g, v, P) else None
                 for v, P in enumerate(f))


def tuple_forest(f: BlowupTuple) -> IdealForest:
    return frozenset(P for P in f if P is not None)


# ---------------------------------------------------------------------------
# up-link and descending link
# ---------------------------------------------------------------------------


def descending_ideal_forests(g: CactusGraph, include_basepoint: bool = False) -> list[IdealForest]:
    """Ideal forests whose blow-up has lower height.

    Blow-ups touching p move cycles off the basepoint and raise the coweight,
    so by default they are not generated at all.
    """
    return [f for f in enumerate_ideal_forests(g, include_basepoint)
            if is_descending_blowup(g, f)]


def up_link_complex(g: CactusGraph, include_basepoint: bool = False) -> CellComplex:
    forests = descending_ideal_forests(g, include_basepoint)
    return order_complex(forests, lambda a, b: a < b)


def descending_link(g: CactusGraph) -> CellComplex:
    return join(down_link_complex(g), up_link_complex(g))
