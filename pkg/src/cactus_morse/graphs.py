"""Basepointed reduced cactus graphs.

Two representations live here. :class:`HalfEdgeGraph` is the generic one
(half-edges, a pairing involution and an attaching map) and is what
``validate`` inspects. :class:`CactusGraph` is the structured cycle-tree form
used everywhere else: every cycle records its base (the vertex nearest the
basepoint) and the ordered rim of remaining vertices.

Edge and half-edge numbering of a :class:`CactusGraph` is fixed by the cycle
order.  Cycle ``k`` with vertex sequence ``s = (base, *rim)`` of length ``l``
owns ``l`` consecutive edge ids; its ``j``-th edge runs from ``s[j]`` to
``s[(j + 1) % l]``.  Edge ``e`` has half-edges ``2e`` (at the tail) and
``2e + 1`` (at the head).

Canonical codes are ASCII strings built recursively over the cycle tree::

    vertex := "(" cycle* ")"          cycles sorted by their own code
    cycle  := "[" vertex* "]"          rim read in the smaller direction

An optional edge colouring interleaves one colour character per edge inside
each cycle.  Codes decode back to graphs with :func:`from_code`.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

ROOT = 0
CATALOG_HEADER = "cactus-catalog v1 rank={n}"

_COLOR_BASE = ord("0")
_MAX_COLOR = 40


class StructureError(ValueError):
    """Malformed half-edge data: bad pairing involution or attaching map."""


# ---------------------------------------------------------------------------
# generic half-edge graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfEdgeGraph:
    """A finite basepointed graph given by half-edges.

    ``pairing[h]`` is the other half of the edge containing ``h`` and
    ``attach[h]`` the vertex ``h`` is incident to. Loops and multi-edges are
    allowed.
    """

    num_vertices: int
    pairing: tuple[int, ...]
    attach: tuple[int, ...]
    basepoint: int = ROOT

    def __post_init__(self):
        if len(self.pairing) != len(self.attach):
            raise StructureError("pairing and attach must cover the same half-edges")
        for h, k in enumerate(self.pairing):
            if not 0 <= k < len(self.pairing) or k == h or self.pairing[k] != h:
                raise StructureError(f"pairing is not a fixed-point-free involution at {h}")
        for h, v in enumerate(self.attach):
            if not 0 <= v < self.num_vertices:
                raise StructureError(f"half-edge {h} attached to unknown vertex {v}")
        if not 0 <= self.basepoint < self.num_vertices:
            raise StructureError("basepoint is not a vertex")

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]],
                   basepoint: int = ROOT) -> "HalfEdgeGraph":
        pairing, attach = [], []
        for u, v in edges:
            h = len(attach)
            pairing += [h + 1, h]
            attach += [u, v]
        return cls(num_vertices, tuple(pairing), tuple(attach), basepoint)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(self.attach[h], self.attach[k])
                for h, k in enumerate(self.pairing) if h < k]

    def valence(self, v: int) -> int:
        return sum(1 for a in self.attach if a == v)


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    is_cactus: bool
    is_reduced: bool


def _components(num_vertices, edges):
    parent = list(range(num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return [find(x) for x in range(num_vertices)]


def _blocks(num_vertices, edges):
    """Biconnected blocks as lists of edge ids; a loop is its own block."""
    adj = [[] for _ in range(num_vertices)]
    blocks = []
    for eid, (u, v) in enumerate(edges):
        if u == v:
            blocks.append([eid])
        else:
            adj[u].append((v, eid))
            adj[v].append((u, eid))
    disc = [-1] * num_vertices
    low = [0] * num_vertices
    stack = []
    clock = itertools.count()

    def dfs(u, parent_edge):
        disc[u] = low[u] = next(clock)
        for v, eid in adj[u]:
            if eid == parent_edge:
                continue
            if disc[v] == -1:
                stack.append(eid)
                dfs(v, eid)
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    block = []
                    while True:
                        e = stack.pop()
                        block.append(e)
                        if e == eid:
                            break
                    blocks.append(sorted(block))
            elif disc[v] < disc[u]:
                stack.append(eid)
                low[u] = min(low[u], disc[v])

    for s in range(num_vertices):
        if disc[s] == -1:
            dfs(s, None)
    return blocks


def _is_cycle_block(block, edges):
    if len(block) == 1:
        u, v = edges[block[0]]
        return u == v
    verts = {x for e in block for x in edges[e]}
    return len(verts) == len(block)


def validate(g: HalfEdgeGraph) -> ValidationReport:
    """Check connectivity, the cactus condition and reducedness.

    Reduced means: basepoint at least 2-valent, every other vertex at least
    3-valent, no separating edge.
    """
    edges = g.edges
    comp = _components(g.num_vertices, edges)
    connected = len(set(comp)) == 1
    blocks = _blocks(g.num_vertices, edges)
    is_cactus = connected and all(_is_cycle_block(b, edges) for b in blocks)
    bridges = any(len(b) == 1 and edges[b[0]][0] != edges[b[0]][1] for b in blocks)
    valence_ok = all(
        g.valence(v) >= (2 if v == g.basepoint else 3) for v in range(g.num_vertices))
    return ValidationReport(connected, is_cactus, connected and valence_ok and not bridges)


# ---------------------------------------------------------------------------
# cycle-tree form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A reduced cycle: its base vertex and the rim vertices in cyclic order."""

    base: int
    rim: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.rim) + 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.base,) + self.rim


@dataclass(frozen=True)
class Automorphism:
    """A based automorphism, as vertex and half-edge permutations."""

    vertex_map: tuple[int, ...]
    halfedge_map: tuple[int, ...]

    @property
    def edge_map(self) -> tuple[int, ...]:
        return tuple(self.halfedge_map[2 * e] // 2 for e in range(len(self.halfedge_map) // 2))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self`` after ``other``."""
        return Automorphism(
            tuple(self.vertex_map[x] for x in other.vertex_map),
            tuple(self.halfedge_map[h] for h in other.halfedge_map),
        )


@dataclass(frozen=True)
class CactusGraph:
    """A basepointed reduced cactus graph in cycle-tree form; vertex 0 is p."""

    num_vertices: int
    cycles: tuple[Cycle, ...]

    def __post_init__(self):
        n_v = self.num_vertices
        rim_owner = {}
        for k, cyc in enumerate(self.cycles):
            if not 0 <= cyc.base < n_v:
                raise ValueError(f"cycle {k} has unknown base {cyc.base}")
            for w in cyc.rim:
                if w == ROOT or not 0 <= w < n_v or w in rim_owner:
                    raise ValueError(f"vertex {w} cannot lie on the rim of cycle {k}")
                rim_owner[w] = k
        if len(rim_owner) != n_v - 1:
            raise ValueError("every non-root vertex must lie on exactly one rim")
        based = [[] for _ in range(n_v)]
        for k, cyc in enumerate(self.cycles):
            based[cyc.base].append(k)
        if not based[ROOT]:
            raise ValueError("rank must be at least 1")
        seen, queue = {ROOT}, [ROOT]
        for v in queue:
            for k in based[v]:
                for w in self.cycles[k].rim:
                    if w in seen:
                        raise ValueError("cycles do not form a tree")
                    seen.add(w)
                    queue.append(w)
        if len(seen) != n_v:
            raise ValueError("graph is not connected")
        for v in range(1, n_v):
            if not based[v]:
                raise ValueError(f"vertex {v} lies in a single cycle; graph is not reduced")

    # -- derived structure --------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.cycles)

    @cached_property
    def cycle_edges(self) -> tuple[tuple[int, ...], ...]:
        out, start = [], 0
        for cyc in self.cycles:
            out.append(tuple(range(start, start + cyc.length)))
            start += cyc.length
        return tuple(out)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        out = []
        for cyc in self.cycles:
            s = cyc.vertices
            out += [(s[j], s[(j + 1) % len(s)]) for j in range(len(s))]
        return tuple(out)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_cycle(self) -> tuple[int, ...]:
        return tuple(k for k, es in enumerate(self.cycle_edges) for _ in es)

    @cached_property
    def based_at(self) -> tuple[tuple[int, ...], ...]:
        based = [[] for _ in range(self.num_vertices)]
        for k, cyc in enumerate(self.cycles):
            based[cyc.base].append(k)
        return tuple(tuple(b) for b in based)

    @cached_property
    def towards_root(self) -> tuple[int, ...]:
        """``C_v`` for each vertex: the cycle through v not based at v (-1 for p)."""
        out = [-1] * self.num_vertices
        for k, cyc in enumerate(self.cycles):
            for w in cyc.rim:
                out[w] = k
        return tuple(out)

    @cached_property
    def level(self) -> tuple[int, ...]:
        lev = [0] * self.num_vertices
        for v in self.bfs_order:
            for k in self.based_at[v]:
                for w in self.cycles[k].rim:
                    lev[w] = lev[v] + 1
        return tuple(lev)

    @cached_property
    def bfs_order(self) -> tuple[int, ...]:
        order = [ROOT]
        for v in order:
            for k in self.based_at[v]:
                order.extend(self.cycles[k].rim)
        return tuple(order)

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def cycles_through(self, v: int) -> tuple[int, ...]:
        c = self.towards_root[v]
        return ((c,) if c >= 0 else ()) + self.based_at[v]

    def vertex_data(self, v: int) -> "VertexCycleData":
        return VertexCycleData(v, None if v == ROOT else self.towards_root[v],
                               len(self.based_at[v]), self.level[v])

    def to_halfedge(self) -> HalfEdgeGraph:
        return HalfEdgeGraph.from_edges(self.num_vertices, self.edges, ROOT)

    def __str__(self):
        return canonical_code(self)


@dataclass(frozen=True)
class VertexCycleData:
    vertex: int
    towards_root: int | None
    based_here: int
    level: int


def rose(n: int) -> CactusGraph:
    """The rose ``R_n``: n loops at the basepoint."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    return CactusGraph(1, tuple(Cycle(ROOT) for _ in range(n)))


def cactus_from_edges(num_vertices: int, edges: Sequence[tuple[int, int]],
                      root: int = ROOT) -> tuple[CactusGraph, list[int]]:
    """Build the cycle-tree form of an edge list.

    Returns the graph, with vertices renumbered in breadth-first order from
    ``root``, and the map from input edge ids to output edge ids.
    """
    blocks = _blocks(num_vertices, edges)
    if len(set(_components(num_vertices, edges))) != 1:
        raise ValueError("graph is not connected")
    if not all(_is_cycle_block(b, edges) for b in blocks):
        raise ValueError("graph is not a cactus")
    blocks_at = [[] for _ in range(num_vertices)]
    for i, b in enumerate(blocks):
        for x in {x for e in b for x in edges[e]}:
            blocks_at[x].append(i)
    newid = {root: 0}
    queue = [root]
    done = [False] * len(blocks)
    cycles, edge_map = [], [0] * len(edges)
    offset = 0
    for u in queue:
        for i in blocks_at[u]:
            if done[i]:
                continue
            done[i] = True
            block = blocks[i]
            seq, walk = [u], []
            if len(block) == 1:
                walk = [block[0]]
            else:
                cur, prev = u, None
                while True:
                    e = next(e for e in block if e != prev and cur in edges[e])
                    a, b = edges[e]
                    nxt = b if a == cur else a
                    walk.append(e)
                    if nxt == u:
                        break
                    seq.append(nxt)
                    cur, prev = nxt, e
            for w in seq[1:]:
                newid[w] = len(newid)
                queue.append(w)
            cycles.append((u, seq[1:]))
            for j, e in enumerate(walk):
                edge_map[e] = offset + j
            offset += len(walk)
    g = CactusGraph(len(newid), tuple(
        Cycle(newid[b], tuple(newid[w] for w in rim)) for b, rim in cycles))
    return g, edge_map


def to_cactus(h: HalfEdgeGraph) -> CactusGraph:
    report = validate(h)
    if not (report.connected and report.is_cactus and report.is_reduced):
        raise ValueError(f"not a reduced cactus graph: {report}")
    return cactus_from_edges(h.num_vertices, h.edges, h.basepoint)[0]


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------


def _color_char(c: int) -> str:
    if not 0 <= c < _MAX_COLOR:
        raise ValueError(f"edge colour {c} out of range")
    return chr(_COLOR_BASE + c)


def canonical_code(g: CactusGraph, coloring: Mapping[int, int] | Sequence[int] | None = None) -> str:
    """Complete invariant of the based (optionally edge-coloured) isomorphism class."""
    if coloring is not None and isinstance(coloring, Mapping):
        colors = [coloring.get(e, 0) for e in range(g.num_edges)]
    else:
        colors = coloring
    memo = {}

    def vertex(v):
        if v not in memo:
            memo[v] = "(" + "".join(sorted(cycle(k) for k in g.based_at[v])) + ")"
        return memo[v]

    def cycle(k):
        rims = [vertex(w) for w in g.cycles[k].rim]
        if colors is None:
            fwd, bwd = "".join(rims), "".join(reversed(rims))
        else:
            cs = [_color_char(colors[e]) for e in g.cycle_edges[k]]
            fwd = cs[0] + "".join(r + c for r, c in zip(rims, cs[1:]))
            bwd = cs[-1] + "".join(r + c for r, c in zip(reversed(rims), reversed(cs[:-1])))
        return "[" + min(fwd, bwd) + "]"

    return vertex(ROOT)


def decode(code: str) -> tuple[CactusGraph, tuple[int, ...] | None]:
    """Parse a (possibly coloured) code into a graph and its edge colouring."""
    cycles: list[tuple[int, list[int], list[int]]] = []
    pos = 0
    num_vertices = 0
    colored = None

    def expect(ch):
        nonlocal pos
        if pos >= len(code) or code[pos] != ch:
            raise ValueError(f"malformed code at {pos}: expected {ch!r}")
        pos += 1

    def parse_vertex():
        nonlocal pos, num_vertices
        v = num_vertices
        num_vertices += 1
        expect("(")
        while pos < len(code) and code[pos] == "[":
            parse_cycle(v)
        expect(")")
        return v

    def parse_cycle(base):
        nonlocal pos, colored
        expect("[")
        k = len(cycles)
        rec = (base, [], [])
        cycles.append(rec)
        while pos < len(code) and code[pos] != "]":
            ch = code[pos]
            if ch == "(":
                rec[1].append(parse_vertex())
            elif ch in "[)":
                raise ValueError(f"malformed code at {pos}")
            else:
                rec[2].append(ord(ch) - _COLOR_BASE)
                pos += 1
        expect("]")
        this_colored = bool(rec[2])
        if colored is None:
            colored = this_colored
        elif colored != this_colored:
            raise ValueError("mixed coloured and uncoloured cycles")
        if this_colored and len(rec[2]) != len(rec[1]) + 1:
            raise ValueError(f"cycle {k} has wrong number of colours")

    parse_vertex()
    if pos != len(code):
        raise ValueError("trailing characters in code")
    g = CactusGraph(num_vertices, tuple(Cycle(b, tuple(r)) for b, r, _ in cycles))
    if not colored:
        return g, None
    return g, tuple(c for _, _, cs in cycles for c in cs)


def from_code(code: str) -> CactusGraph:
    return decode(code)[0]


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------


def automorphism_group(g: CactusGraph) -> list[Automorphism]:
    """All based automorphisms of ``g`` (vertex + half-edge permutations fixing p)."""
    vcode = {}

    def vertex(v):
        if v not in vcode:
            vcode[v] = "(" + "".join(sorted(ccode(k) for k in g.based_at[v])) + ")"
        return vcode[v]

    def ccode(k):
        rims = [vertex(w) for w in g.cycles[k].rim]
        return "[" + min("".join(rims), "".join(reversed(rims))) + "]"

    def rim_codes(k):
        return [vertex(w) for w in g.cycles[k].rim]

    def vertex_isos(v, w):
        """Partial maps (vertex dict, halfedge dict) for subtree(v) -> subtree(w)."""
        groups = {}
        for k in g.based_at[v]:
            groups.setdefault(ccode(k), [[], []])[0].append(k)
        for k in g.based_at[w]:
            groups.setdefault(ccode(k), [[], []])[1].append(k)
        per_group = []
        for src, dst in groups.values():
            options = []
            for perm in itertools.permutations(dst):
                pair_opts = [cycle_isos(a, b) for a, b in zip(src, perm)]
                options.extend(_merge_all(pair_opts))
            per_group.append(options)
        out = []
        for combo in itertools.product(*per_group):
            vm, hm = {v: w}, {}
            for pv, ph in combo:
                vm.update(pv)
                hm.update(ph)
            out.append((vm, hm))
        return out

    def cycle_isos(a, b):
        ca, cb = g.cycles[a], g.cycles[b]
        ea, eb = g.cycle_edges[a], g.cycle_edges[b]
        ell = ca.length
        ra, rb = rim_codes(a), rim_codes(b)
        out = []
        if ra == rb:
            hm = {}
            for j in range(ell):
                hm[2 * ea[j]] = 2 * eb[j]
                hm[2 * ea[j] + 1] = 2 * eb[j] + 1
            subs = [vertex_isos(x, y) for x, y in zip(ca.rim, cb.rim)]
            out += [(pv, {**hm, **ph}) for pv, ph in _merge_all(subs)]
        if ra == rb[::-1]:
            hm = {}
            for j in range(ell):
                hm[2 * ea[j]] = 2 * eb[ell - 1 - j] + 1
                hm[2 * ea[j] + 1] = 2 * eb[ell - 1 - j]
            subs = [vertex_isos(x, y) for x, y in zip(ca.rim, reversed(cb.rim))]
            out += [(pv, {**hm, **ph}) for pv, ph in _merge_all(subs)]
        return out

    result = []
    for vm, hm in vertex_isos(ROOT, ROOT):
        result.append(Automorphism(
            tuple(vm[x] for x in range(g.num_vertices)),
            tuple(hm[h] for h in range(2 * g.num_edges)),
        ))
    return result


def _merge_all(option_lists):
    out = []
    for combo in itertools.product(*option_lists):
        vm, hm = {}, {}
        for pv, ph in combo:
            vm.update(pv)
            hm.update(ph)
        out.append((vm, hm))
    return out


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _compositions(total):
    """All ordered tuples of positive ints summing to ``total``."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _cycle_codes(r: int) -> tuple[str, ...]:
    """Codes of cycles whose subtree has rank r (the cycle itself counts 1)."""
    out = set()
    for comp in _compositions(r - 1):
        for rims in itertools.product(*(_vertex_codes(x) for x in comp)):
            out.add("[" + min("".join(rims), "".join(reversed(rims))) + "]")
    return tuple(sorted(out))


def _partitions(total, largest):
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _vertex_codes(r: int) -> tuple[str, ...]:
    """Codes of vertex subtrees of total rank r >= 1."""
    out = set()
    for parts in _partitions(r, r):
        groups = [(size, len(list(grp))) for size, grp in itertools.groupby(parts)]
        choices = [itertools.combinations_with_replacement(_cycle_codes(size), m)
                   for size, m in groups]
        for combo in itertools.product(*choices):
            out.add("(" + "".join(sorted(c for grp in combo for c in grp)) + ")")
    return tuple(sorted(out))


def enumerate_cactus_graphs(n: int) -> list[str]:
    """Canonical codes of all reduced cactus graphs of rank n, sorted."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    return list(_vertex_codes(n))


@lru_cache(maxsize=None)
def catalog_graphs(n: int) -> tuple[CactusGraph, ...]:
    return tuple(from_code(c) for c in enumerate_cactus_graphs(n))


def write_catalog(path: str | Path, n: int) -> Path:
    path = Path(path)
    lines = [CATALOG_HEADER.format(n=n)]
    lines += [code.encode("ascii").hex() for code in enumerate_cactus_graphs(n)]
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)
    return path


def read_catalog(path: str | Path) -> tuple[int, list[str]]:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("cactus-catalog v1 rank="):
        raise ValueError(f"{path}: not a v1 cactus catalog")
    n = int(lines[0].split("=", 1)[1])
    return n, [bytes.fromhex(x).decode("ascii") for x in lines[1:] if x]


# ---------------------------------------------------------------------------
# simple invariants and operations
# ---------------------------------------------------------------------------


def weight_coweight(g: CactusGraph) -> tuple[int, int]:
    b = len(g.based_at[ROOT])
    return b, g.rank - b


def coweight(g: CactusGraph) -> int:
    return g.rank - len(g.based_at[ROOT])


def wedge_loop(g: CactusGraph) -> CactusGraph:
    """``g`` wedge a circle at the basepoint; existing edge ids are kept."""
    return CactusGraph(g.num_vertices, g.cycles + (Cycle(ROOT),))


def detect_base_features(g: CactusGraph) -> tuple[int, int]:
    """(loops at p, loop-digon pairs at p)."""
    loops = pairs = 0
    for k in g.based_at[ROOT]:
        cyc = g.cycles[k]
        if cyc.length == 1:
            loops += 1
        elif cyc.length == 2:
            above = g.based_at[cyc.rim[0]]
            if len(above) == 1 and g.cycles[above[0]].length == 1:
                pairs += 1
    return loops, pairs
