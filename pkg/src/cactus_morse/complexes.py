"""Finite cell complexes with signed boundaries and exact rational homology.

Every complex here is augmented: each 0-cell maps to the empty cell with
coefficient +1.  Reduced homology uses that augmentation; the empty complex
has reduced homology concentrated in degree -1.

Ranks are computed by fraction-free elimination over the integers, so no
floating point is involved anywhere.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence


def face_sign(i: int) -> int:
    return -1 if i % 2 else 1


class BoundaryError(ValueError):
    """The boundary operator does not square to zero."""


@dataclass
class CellComplex:
    """Cells grouped by dimension with sparse signed boundaries.

    ``boundary[k][i]`` maps face indices in dimension ``k - 1`` to integer
    coefficients; ``boundary[0]`` is a list of empty dicts.
    """

    cells: list[list[Hashable]]
    boundary: list[list[dict[int, int]]]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        while self.cells and not self.cells[-1]:
            self.cells.pop()
            self.boundary.pop()
        if len(self.cells) != len(self.boundary):
            raise ValueError("cells and boundary disagree on dimension")
        for k, (cs, bd) in enumerate(zip(self.cells, self.boundary)):
            if len(cs) != len(bd):
                raise ValueError(f"dimension {k}: {len(cs)} cells but {len(bd)} boundaries")
        if self.check:
            self.check_boundary()

    @classmethod
    def empty(cls) -> "CellComplex":
        return cls([], [])

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    @property
    def counts(self) -> list[int]:
        return [len(c) for c in self.cells]

    def is_empty(self) -> bool:
        return not self.cells

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts))

    def check_boundary(self):
        """Raise :class:`BoundaryError` unless d∘d = 0, augmentation included."""
        for k in range(1, len(self.cells)):
            for i, row in enumerate(self.boundary[k]):
                acc: dict[int, int] = {}
                for f, a in row.items():
                    if k == 1:
                        acc[0] = acc.get(0, 0) + a
                    else:
                        for g, b in self.boundary[k - 1][f].items():
                            acc[g] = acc.get(g, 0) + a * b
                if any(acc.values()):
                    raise BoundaryError(f"d∘d != 0 on cell {self.cells[k][i]!r} (dim {k})")

    def to_json(self) -> str:
        triplets = [[[i, f, a] for i, row in enumerate(bd) for f, a in sorted(row.items())]
                    for bd in self.boundary]
        return json.dumps({"format": "cell-complex v1", "counts": self.counts,
                           "labels": [[str(x) for x in cs] for cs in self.cells],
                           "boundary": triplets}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CellComplex":
        data = json.loads(text)
        if data.get("format") != "cell-complex v1":
            raise ValueError("not a v1 cell complex")
        cells = [list(x) for x in data["labels"]]
        boundary = [[{} for _ in cs] for cs in cells]
        for k, trip in enumerate(data["boundary"]):
            for i, f, a in trip:
                boundary[k][i][f] = a
        return cls(cells, boundary)


@dataclass(frozen=True)
class BettiVector:
    """Rational Betti numbers; ``reduced`` starts in degree 0.

    For the empty complex ``reduced_minus_one`` is 1 (the -1 sphere).
    """

    unreduced: tuple[int, ...]
    reduced: tuple[int, ...]
    reduced_minus_one: int = 0

    def is_acyclic(self) -> bool:
        return self.reduced_minus_one == 0 and not any(self.reduced)

    def reduced_at(self, i: int) -> int:
        if i == -1:
            return self.reduced_minus_one
        return self.reduced[i] if 0 <= i < len(self.reduced) else 0

    def unreduced_at(self, i: int) -> int:
        return self.unreduced[i] if 0 <= i < len(self.unreduced) else 0


# ---------------------------------------------------------------------------
# exact rank
# ---------------------------------------------------------------------------


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()}


def integer_rank(rows: Iterable[dict[int, int]]) -> int:
    """Rank over Q of a sparse integer matrix given as row dicts.

    Fraction-free row reduction: a row is reduced against a stored pivot row
    by ``r <- p*r - a*q`` and then divided by its content, so every entry
    stays an integer and the row space over Q is unchanged.
    """
    pivots: dict[int, dict[int, int]] = {}
    for row in sorted((r for r in rows if r), key=len):
        r = {c: v for c, v in row.items() if v}
        while r:
            col = min(r)
            q = pivots.get(col)
            if q is None:
                pivots[col] = _primitive(r)
                break
            a, p = r[col], q[col]
            if p == 1 or p == -1:
                m = a * p
                for c, v in q.items():
                    nv = r.get(c, 0) - m * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
            else:
                g = math.gcd(a, p)
                sa, sp = a // g, p // g
                nr = {c: sp * v for c, v in r.items()}
                for c, v in q.items():
                    nv = nr.get(c, 0) - sa * v
                    if nv:
                        nr[c] = nv
                    else:
                        nr.pop(c, None)
                r = _primitive(nr) if nr else nr
    return len(pivots)


def chain_betti(counts: Sequence[int], boundary: Sequence[Sequence[dict[int, int]]]) -> tuple[int, ...]:
    """Betti numbers of a non-augmented chain complex (e.g. a relative one)."""
    ranks = [0] + [integer_rank(boundary[k]) for k in range(1, len(counts))] + [0]
    return tuple(counts[k] - ranks[k] - ranks[k + 1] for k in range(len(counts)))


def betti(X: CellComplex) -> BettiVector:
    if X.is_empty():
        return BettiVector((), (), 1)
    unreduced = chain_betti(X.counts, X.boundary)
    reduced = (unreduced[0] - 1,) + unreduced[1:]
    return BettiVector(unreduced, reduced, 0)


def is_homology_sphere(X: CellComplex, d: int) -> bool:
    """Reduced rational homology equals that of S^d (d = -1: empty)."""
    b = betti(X)
    if d == -1:
        return b.reduced_minus_one == 1 and not any(b.reduced)
    if b.reduced_minus_one or d >= len(b.reduced) or b.reduced[d] != 1:
        return False
    return sum(b.reduced) == 1


def sphere_dimension(X: CellComplex) -> int | None:
    """d if X is a rational homology d-sphere, None if acyclic or otherwise."""
    b = betti(X)
    if b.reduced_minus_one:
        return -1 if not any(b.reduced) else None
    nz = [i for i, x in enumerate(b.reduced) if x]
    if len(nz) == 1 and b.reduced[nz[0]] == 1:
        return nz[0]
    return None


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


def from_simplices(simplices: Iterable[Sequence[int]], labels: Callable | None = None,
                   check: bool = True) -> CellComplex:
    """Simplicial complex from a face-closed family of increasing vertex tuples."""
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in simplices:
        s = tuple(s)
        by_dim.setdefault(len(s) - 1, []).append(s)
    if not by_dim:
        return CellComplex.empty()
    top = max(by_dim)
    cells = [sorted(by_dim.get(k, [])) for k in range(top + 1)]
    index = [{s: i for i, s in enumerate(cs)} for cs in cells]
    boundary = [[{} for _ in cells[0]]]
    for k in range(1, top + 1):
        rows = []
        for s in cells[k]:
            row = {}
            for i in range(k + 1):
                face = s[:i] + s[i + 1:]
                try:
                    f = index[k - 1][face]
                except KeyError:
                    raise ValueError(f"face {face} of {s} missing") from None
                row[f] = row.get(f, 0) + face_sign(i)
            rows.append(row)
        boundary.append(rows)
    if labels is not None:
        cells = [[labels(s) for s in cs] for cs in cells]
    return CellComplex(cells, boundary, check=check)


def clique_simplices(num_vertices: int, adjacent: Callable[[int, int], bool]) -> list[tuple[int, ...]]:
    """All nonempty cliques, as increasing tuples."""
    higher = [{j for j in range(i + 1, num_vertices) if adjacent(i, j)}
              for i in range(num_vertices)]
    out = []

    def extend(clique, candidates):
        out.append(clique)
        for j in sorted(candidates):
            extend(clique + (j,), candidates & higher[j])

    for i in range(num_vertices):
        extend((i,), higher[i])
    return out


def clique_complex(elements: Sequence, adjacent: Callable, check: bool = True) -> CellComplex:
    """Flag complex on ``elements`` whose edges are the adjacent pairs."""
    els = list(elements)
    simplices = clique_simplices(len(els), lambda i, j: adjacent(els[i], els[j]))
    return from_simplices(simplices, labels=lambda s: tuple(els[i] for i in s), check=check)


def order_complex(elements: Sequence, lt: Callable, check: bool = True) -> CellComplex:
    """Order complex of a finite strict partial order: k-cells are (k+1)-chains."""
    els = list(elements)
    m = len(els)
    above = [{j for j in range(m) if j != i and lt(els[i], els[j])} for i in range(m)]
    for i in range(m):
        if lt(els[i], els[i]):
            raise ValueError(f"order is not irreflexive at {els[i]!r}")
        for j in above[i]:
            if i in above[j]:
                raise ValueError(f"order is not antisymmetric at {els[i]!r}")
            if not above[j] <= above[i]:
                raise ValueError(f"order is not transitive at {els[i]!r}")
    # a linear extension: fewer elements below comes first
    below = [0] * m
    for i in range(m):
        for j in above[i]:
            below[j] += 1
    ext = sorted(range(m), key=lambda i: (below[i], i))
    simplices = clique_simplices(
        m, lambda a, b: ext[b] in above[ext[a]] or ext[a] in above[ext[b]])
    return from_simplices(simplices, labels=lambda s: tuple(els[ext[i]] for i in s), check=check)


def join(X: CellComplex, Y: CellComplex, check: bool = True) -> CellComplex:
    """Join of two augmented complexes.

    A cell is a pair (s, t) with s in X or empty and t in Y or empty, not both
    empty, of dimension dim s + dim t + 1.  The boundary is
    (ds, t) + (-1)^(dim s + 1) (s, dt), where the boundary of a vertex is the
    empty cell.
    """
    if X.is_empty():
        return Y
    if Y.is_empty():
        return X
    # augmented cell lists: index 0 of dimension -1 is the empty cell
    xa = [[None]] + X.cells
    ya = [[None]] + Y.cells

    def bd(Z, k, i):
        # boundary in augmented indexing: dimension k (>= 0) -> k-1
        return {0: 1} if k == 0 else Z.boundary[k][i]

    top = X.dim + Y.dim + 1
    cells: list[list] = [[] for _ in range(top + 1)]
    index: dict[tuple[int, int, int, int], int] = {}
    for p in range(-1, X.dim + 1):
        for q in range(-1, Y.dim + 1):
            d = p + q + 1
            if d < 0:
                continue
            for i in range(len(xa[p + 1])):
                for j in range(len(ya[q + 1])):
                    index[(p, i, q, j)] = len(cells[d])
                    cells[d].append((p, i, q, j))
    boundary: list[list[dict[int, int]]] = [[{} for _ in cells[0]]]
    for d in range(1, top + 1):
        rows = []
        for (p, i, q, j) in cells[d]:
            row: dict[int, int] = {}
            if p >= 0:
                for f, a in bd(X, p, i).items():
                    key = index[(p - 1, f, q, j)]
                    row[key] = row.get(key, 0) + a
            if q >= 0:
                s = face_sign(p + 1)
                for f, a in bd(Y, q, j).items():
                    key = index[(p, i, q - 1, f)]
                    row[key] = row.get(key, 0) + s * a
            rows.append({k: v for k, v in row.items() if v})
        boundary.append(rows)

    def label(cell):
        p, i, q, j = cell
        return (X.cells[p][i] if p >= 0 else None, Y.cells[q][j] if q >= 0 else None)

    return CellComplex([[label(c) for c in cs] for cs in cells], boundary, check=check)


def join_all(complexes: Iterable[CellComplex], check: bool = True) -> CellComplex:
    out = CellComplex.empty()
    for X in complexes:
        out = join(out, X, check=check)
    return out
