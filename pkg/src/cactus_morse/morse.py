"""Height function, forests, collapses and down-links of cactus graphs."""
from __future__ import annotations

import itertools
from typing import Iterable

from cactus_morse.complexes import CellComplex, order_complex
from cactus_morse.graphs import ROOT, CactusGraph, cactus_from_edges

Forest = frozenset  # of edge ids


def distance(g: CactusGraph, v: int, w: int) -> int:
    """Number of cycles sharing an edge with a shortest path from v to w.

    Computed on the block tree: vertex u hangs below ``C_u``, a cycle hangs
    below its base, and we count cycle nodes on the tree path.
    """
    def up(u):
        path = [("v", u)]
        while u != ROOT:
            k = g.towards_root[u]
            u = g.cycles[k].base
            path += [("c", k), ("v", u)]
        return path

    a, b = up(v), up(w)
    lca = None
    while a and b and a[-1] == b[-1]:
        lca = a.pop()
        b.pop()
    count = sum(1 for kind, _ in a + b if kind == "c")
    return count + (1 if lca is not None and lca[0] == "c" else 0)


def levels(g: CactusGraph) -> list[list[int]]:
    """Λ_0, Λ_1, ...: vertices grouped by distance from the basepoint."""
    out: list[list[int]] = [[] for _ in range(max(g.level) + 1)]
    for v, lev in enumerate(g.level):
        out[lev].append(v)
    return out


def height(g: CactusGraph) -> tuple[int, ...]:
    """(c_0, n_1, c_1, ..., n_n, c_n) for a rank-n graph, compared lexicographically.

    n_i is minus the size of level i; c_i counts cycles whose base is not at
    level i.
    """
    n = g.rank
    sizes = [0] * (n + 1)
    for lev in g.level:
        sizes[lev] += 1
    based = [0] * (n + 1)
    for cyc in g.cycles:
        based[g.level[cyc.base]] += 1
    out = [n - based[0]]
    for i in range(1, n + 1):
        out += [-sizes[i], n - based[i]]
    return tuple(out)


def is_thin(g: CactusGraph) -> bool:
    return all(c.length <= 2 for c in g.cycles)


def is_forest(g: CactusGraph, edges: Iterable[int]) -> bool:
    """No loops and at least one edge of every cycle left out."""
    edges = set(edges)
    if any(g.is_loop(e) for e in edges):
        return False
    return all(not set(es) <= edges for es in g.cycle_edges)


def enumerate_forests(g: CactusGraph) -> list[Forest]:
    """All nonempty forests, ordered by size then edge ids."""
    per_cycle = []
    for es in g.cycle_edges:
        if len(es) == 1:
            continue
        per_cycle.append([c for r in range(len(es)) for c in itertools.combinations(es, r)])
    out = [frozenset(itertools.chain.from_iterable(p)) for p in itertools.product(*per_cycle)]
    return sorted((f for f in out if f), key=lambda f: (len(f), sorted(f)))


def collapse(g: CactusGraph, forest: Iterable[int]) -> tuple[CactusGraph, dict[int, int]]:
    """Collapse a forest; returns the new graph and the map on surviving edges."""
    forest = frozenset(forest)
    if not is_forest(g, forest):
        raise ValueError(f"{sorted(forest)} is not a forest")
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in forest:
        u, v = g.edges[e]
        parent[find(u)] = find(v)
    reps = sorted({find(x) for x in range(g.num_vertices)})
    rid = {r: i for i, r in enumerate(reps)}
    kept = [e for e in range(g.num_edges) if e not in forest]
    new_edges = [(rid[find(u)], rid[find(v)]) for u, v in (g.edges[e] for e in kept)]
    h, emap = cactus_from_edges(len(reps), new_edges, rid[find(ROOT)])
    return h, {e: emap[i] for i, e in enumerate(kept)}


def forest_depth(g: CactusGraph, forest: Iterable[int]) -> int:
    """D(F): the smallest level containing a vertex of F."""
    return min(g.level[x] for e in forest for x in g.edges[e])


def connects_at_depth(g: CactusGraph, forest: Iterable[int]) -> bool:
    """Whether some component of F contains two vertices of level D(F)."""
    forest = list(forest)
    depth = forest_depth(g, forest)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    for e in forest:
        u, v = g.edges[e]
        parent[find(u)] = find(v)
    seen = set()
    for x in list(parent):
        if g.level[x] == depth:
            r = find(x)
            if r in seen:
                return True
            seen.add(r)
    return False


def is_descending(g: CactusGraph, forest: Iterable[int]) -> bool:
    return height(collapse(g, forest)[0]) < height(g)


def is_horizontal(g: CactusGraph, e: int) -> bool:
    u, v = g.edges[e]
    return g.level[u] == g.level[v]


def down_link_complex(g: CactusGraph) -> CellComplex:
    """Order complex of the descending forests under inclusion."""
    forests = [f for f in enumerate_forests(g) if is_descending(g, f)]
    return order_complex(forests, lambda a, b: a < b)


def forest_complex(g: CactusGraph) -> CellComplex:
    """Order complex of all nonempty forests under inclusion."""
    return order_complex(enumerate_forests(g), lambda a, b: a < b)
