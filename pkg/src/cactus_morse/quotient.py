"""Orbit complexes ΣQ_n and their coweight sublevel sets.

A cell is a top graph Γ together with a strict flag Φ_1 ⊊ ... ⊊ Φ_r of
nonempty forests, up to based automorphisms of Γ.  Its vertices are the
graphs Γ/Φ_r, ..., Γ/Φ_1, Γ, listed by increasing edge count; that order
orients the cell.  The orbit of (Γ, flag) is keyed by the canonical code of Γ
coloured by ``color(e) = min{j : e in Φ_j}`` (0 off the flag), which decodes
back to a representative.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from cactus_morse import __version__
from cactus_morse import complexes
from cactus_morse.complexes import BettiVector, CellComplex, betti, chain_betti
from cactus_morse.graphs import (
    CactusGraph,
    automorphism_group,
    canonical_code,
    catalog_graphs,
    coweight,
    decode,
    wedge_loop,
)
from cactus_morse.morse import collapse, enumerate_forests

Flag = tuple  # of frozensets of edge ids, strictly increasing


def flag_coloring(g: CactusGraph, flag: Flag) -> list[int]:
    colors = [0] * g.num_edges
    for j in range(len(flag), 0, -1):
        for e in flag[j - 1]:
            colors[e] = j
    return colors


def cell_key(g: CactusGraph, flag: Flag) -> str:
    return canonical_code(g, flag_coloring(g, flag))


def decode_cell(key: str) -> tuple[CactusGraph, Flag]:
    g, colors = decode(key)
    r = max(colors, default=0)
    flag = tuple(frozenset(e for e, c in enumerate(colors) if 0 < c <= j)
                 for j in range(1, r + 1))
    return g, flag


@dataclass(frozen=True)
class QuotientCell:
    key: str
    top: CactusGraph
    flag: Flag

    @property
    def dim(self) -> int:
        return len(self.flag)

    @property
    def max_coweight(self) -> int:
        return coweight(self.top)


def forest_flags(g: CactusGraph, r: int | None = None) -> list[Flag]:
    """All strict flags of nonempty forests (of length r, or every length >= 1)."""
    forests = enumerate_forests(g)
    supersets = {f: [h for h in forests if f < h] for f in forests}
    out = []

    def extend(flag):
        if r is None or len(flag) == r:
            out.append(flag)
        if r is not None and len(flag) >= r:
            return
        for h in supersets[flag[-1]]:
            extend(flag + (h,))

    for f in forests:
        extend((f,))
    return out


def flag_orbits(g: CactusGraph, r: int) -> list[Flag]:
    """One flag per automorphism orbit, deduplicated by coloured canonical code."""
    if r < 1:
        raise ValueError("flags have length at least 1")
    reps: dict[str, Flag] = {}
    for flag in forest_flags(g, r):
        reps.setdefault(cell_key(g, flag), flag)
    return [reps[k] for k in sorted(reps)]


def cell_faces(g: CactusGraph, flag: Flag) -> list[tuple[int, CactusGraph, Flag]]:
    """Signed faces (sign, top, flag) of the cell, in vertex-deletion order.

    With vertices v_0 = Γ/Φ_r, ..., v_r = Γ, deleting v_j for j < r drops
    Φ_{r-j} from the flag; deleting v_r collapses Φ_1 and pushes the rest of
    the flag forward.
    """
    r = len(flag)
    out = []
    for j in range(r):
        out.append((complexes.face_sign(j), g, flag[:r - j - 1] + flag[r - j:]))
    h, emap = collapse(g, flag[0])
    pushed = tuple(frozenset(emap[e] for e in phi - flag[0]) for phi in flag[1:])
    out.append((complexes.face_sign(r), h, pushed))
    return out


def cell_boundary(g: CactusGraph, flag: Flag) -> dict[str, int]:
    out: dict[str, int] = {}
    if not flag:
        return out
    for sign, h, fl in cell_faces(g, flag):
        k = cell_key(h, fl)
        out[k] = out.get(k, 0) + sign
    return {k: v for k, v in out.items() if v}


@dataclass
class QuotientComplex:
    rank: int
    coweight: int | None
    keys: list[list[str]]
    complex: CellComplex = field(repr=False)

    @property
    def counts(self) -> list[int]:
        return [len(k) for k in self.keys]

    @cached_property
    def index(self) -> dict[str, tuple[int, int]]:
        return {k: (d, i) for d, ks in enumerate(self.keys) for i, k in enumerate(ks)}

    def cell(self, key: str) -> QuotientCell:
        g, flag = decode_cell(key)
        return QuotientCell(key, g, flag)

    def boundary_of(self, key: str) -> dict[str, int]:
        d, i = self.index[key]
        if d == 0:
            return {}
        return {self.keys[d - 1][f]: a for f, a in self.complex.boundary[d][i].items()}

    def to_json(self) -> str:
        return json.dumps({"format": "sigma-q v1", "version": __version__, "rank": self.rank,
                           "coweight": self.coweight, "keys": self.keys,
                           "boundary": [[[i, f, a] for i, row in enumerate(bd)
                                         for f, a in sorted(row.items())]
                                        for bd in self.complex.boundary]},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "QuotientComplex":
        data = json.loads(text)
        if data.get("format") != "sigma-q v1":
            raise ValueError("not a sigma-q v1 file")
        keys = data["keys"]
        boundary = [[{} for _ in ks] for ks in keys]
        for d, trip in enumerate(data["boundary"]):
            for i, f, a in trip:
                boundary[d][i][f] = a
        return cls(data["rank"], data["coweight"], keys,
                   CellComplex([list(ks) for ks in keys], boundary))


def quotient_cells(n: int, c: int | None = None) -> dict[str, tuple[CactusGraph, Flag]]:
    """Orbit representatives of all cells of ΣQ_{n,c} (c=None: no bound)."""
    cells: dict[str, tuple[CactusGraph, Flag]] = {}
    for g in catalog_graphs(n):
        if c is not None and coweight(g) > c:
            continue
        cells.setdefault(cell_key(g, ()), (g, ()))
        for flag in forest_flags(g):
            cells.setdefault(cell_key(g, flag), (g, flag))
    return cells


def build_sigma_q(n: int, c: int | None = None) -> QuotientComplex:
    if n < 1:
        raise ValueError("rank must be at least 1")
    if c is not None and not 0 <= c <= n - 1:
        raise ValueError(f"coweight bound must lie in [0, {n - 1}]")
    cells = quotient_cells(n, c)
    top = max(len(fl) for _, fl in cells.values())
    keys = [sorted(k for k, (_, fl) in cells.items() if len(fl) == d) for d in range(top + 1)]
    index = [{k: i for i, k in enumerate(ks)} for ks in keys]
    boundary: list[list[dict[int, int]]] = [[{} for _ in keys[0]]]
    for d in range(1, top + 1):
        rows = []
        for k in keys[d]:
            g, flag = cells[k]
            rows.append({index[d - 1][f]: a for f, a in cell_boundary(g, flag).items()})
        boundary.append(rows)
    return QuotientComplex(n, c, keys, CellComplex([list(ks) for ks in keys], boundary))


def quotient_betti(n: int, c: int | None = None) -> BettiVector:
    return betti(build_sigma_q(n, c).complex)


def orbit_boundaries_agree(g: CactusGraph, flag: Flag) -> bool:
    """Boundary computed from every automorphic image of the flag is the same."""
    ref = cell_boundary(g, flag)
    for aut in automorphism_group(g):
        em = aut.edge_map
        image = tuple(frozenset(em[e] for e in phi) for phi in flag)
        if cell_boundary(g, image) != ref:
            return False
    return True


# ---------------------------------------------------------------------------
# stabilisation
# ---------------------------------------------------------------------------


@dataclass
class CellMap:
    source: QuotientComplex
    target: QuotientComplex
    mapping: dict[str, str]

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def preserves_dimension(self) -> bool:
        src, tgt = self.source.index, self.target.index
        return all(src[a][0] == tgt[b][0] for a, b in self.mapping.items())

    def is_bijective(self) -> bool:
        return self.is_injective() and set(self.mapping.values()) == set(
            k for ks in self.target.keys for k in ks)

    def bijective_in_each_dimension(self) -> bool:
        if not self.is_injective():
            return False
        image = set(self.mapping.values())
        return all(set(ks) <= image for ks in self.target.keys) and self.preserves_dimension()

    def chain_map_failures(self) -> list[str]:
        """Source cells x with d(ι x) != ι(d x)."""
        bad = []
        for ks in self.source.keys:
            for k in ks:
                lhs = self.target.boundary_of(self.mapping[k])
                rhs = {self.mapping[f]: a for f, a in self.source.boundary_of(k).items()}
                if lhs != rhs:
                    bad.append(k)
        return bad

    def relative_betti(self) -> tuple[int, ...]:
        """Homology of target modulo the image subcomplex."""
        image = set(self.mapping.values())
        keys = [[k for k in ks if k not in image] for ks in self.target.keys]
        idx = [{k: i for i, k in enumerate(ks)} for ks in keys]
        tindex = self.target.index
        boundary = [[{} for _ in keys[0]]] if keys else []
        for d in range(1, len(keys)):
            rows = []
            for k in keys[d]:
                _, i = tindex[k]
                row = {}
                for f, a in self.target.complex.boundary[d][i].items():
                    fk = self.target.keys[d - 1][f]
                    if fk in idx[d - 1]:
                        row[idx[d - 1][fk]] = a
                rows.append(row)
            boundary.append(rows)
        return chain_betti([len(ks) for ks in keys], boundary)


def iota_key(key: str) -> str:
    g, flag = decode_cell(key)
    return cell_key(wedge_loop(g), flag)


def iota(n: int, c: int, source: QuotientComplex | None = None,
         target: QuotientComplex | None = None) -> CellMap:
    """The stabilisation map ΣQ_{n,c} -> ΣQ_{n+1,c}: wedge a loop at p."""
    if not 0 <= c <= n - 1:
        raise ValueError(f"coweight bound must lie in [0, {n - 1}]")
    source = source or build_sigma_q(n, c)
    target = target or build_sigma_q(n + 1, c)
    mapping = {k: iota_key(k) for ks in source.keys for k in ks}
    return CellMap(source, target, mapping)


# ---------------------------------------------------------------------------
# on-disk cache
# ---------------------------------------------------------------------------


def cache_key(n: int, c: int | None) -> str:
    raw = json.dumps({"version": __version__, "n": n, "c": c}, sort_keys=True)
    return hashlib.sha256(raw.encode()).hexdigest()[:24]


def cached_sigma_q(n: int, c: int | None, cache_dir: str | Path | None) -> QuotientComplex:
    if cache_dir is None:
        return build_sigma_q(n, c)
    path = Path(cache_dir) / f"sigma-q-{cache_key(n, c)}.json"
    if path.exists():
        return QuotientComplex.from_json(path.read_text())
    q = build_sigma_q(n, c)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    tmp.write_text(q.to_json())
    tmp.replace(path)
    return q
