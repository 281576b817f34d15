import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from cactus_morse import complexes
from cactus_morse.complexes import (
    BoundaryError,
    CellComplex,
    betti,
    clique_complex,
    from_simplices,
    integer_rank,
    is_homology_sphere,
    join,
    join_all,
    order_complex,
    sphere_dimension,
)


def closure(facets):
    out = set()
    for f in facets:
        f = tuple(sorted(set(f)))
        for r in range(1, len(f) + 1):
            out.update(itertools.combinations(f, r))
    return sorted(out)


def simplex_boundary(k):
    return from_simplices(closure(itertools.combinations(range(k + 1), k)))


# 7-vertex torus and 6-vertex projective plane
TORUS = sorted({tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))) for i in range(7)}
               | {tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))) for i in range(7)})
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
       (1, 2, 4), (2, 3, 5), (1, 3, 4), (1, 3, 5), (2, 4, 5)]


# -- exact rank ---------------------------------------------------------------


matrices = st.integers(0, 6).flatmap(lambda r: st.integers(0, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_integer_rank_matches_fraction_elimination(m):
    rows = [{j: x for j, x in enumerate(row) if x} for row in m]
    assert integer_rank(rows) == oracle.rational_rank(m)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4),
       st.integers(2, 5))
def test_rank_of_dependent_rows(m, k):
    rows = [{j: x for j, x in enumerate(r) if x} for r in m]
    combo = {}
    for r in rows:
        for j, x in r.items():
            combo[j] = combo.get(j, 0) + k * x
    combo = {j: x for j, x in combo.items() if x}
    assert integer_rank(rows + [combo]) == integer_rank(rows)


def test_large_entries_stay_exact():
    big = 10 ** 30
    rows = [{0: big, 1: 1}, {0: 1, 1: 0}, {0: big + 1, 1: 1}]
    assert integer_rank(rows) == 2


# -- homology of standard spaces ---------------------------------------------


def test_point_and_empty():
    pt = from_simplices([(0,)])
    assert betti(pt).is_acyclic()
    assert is_homology_sphere(CellComplex.empty(), -1)
    assert betti(CellComplex.empty()).reduced_minus_one == 1
    assert not is_homology_sphere(pt, 0)


def test_two_points_is_zero_sphere():
    assert is_homology_sphere(from_simplices([(0,), (1,)]), 0)


def test_hollow_triangle():
    assert betti(simplex_boundary(2)).reduced == (0, 1)


def test_boundary_of_four_simplex():
    X = simplex_boundary(4)
    assert betti(X).reduced == (0, 0, 0, 1)
    assert X.euler_characteristic() == 0
    assert sphere_dimension(X) == 3


def test_cone_is_never_a_sphere():
    cone = from_simplices(closure([(0, 1, 2), (0, 2, 3)]))
    assert betti(cone).is_acyclic()
    assert all(not is_homology_sphere(cone, d) for d in range(4))
    assert sphere_dimension(cone) is None


def test_torus_and_projective_plane_over_q():
    for surface in (TORUS, RP2):
        edge_use = {}
        for f in surface:
            for e in itertools.combinations(f, 2):
                edge_use[e] = edge_use.get(e, 0) + 1
        assert set(edge_use.values()) == {2}
    assert betti(from_simplices(closure(TORUS))).unreduced == (1, 2, 1)
    assert betti(from_simplices(closure(RP2))).unreduced == (1, 0, 0)


def test_bad_boundary_detected():
    with pytest.raises(BoundaryError):
        CellComplex([["a", "b"], ["e"], ["f"]], [[{}, {}], [{0: 1, 1: -1}], [{0: 1}]])
    with pytest.raises(BoundaryError):
        CellComplex([["a", "b"], ["e"]], [[{}, {}], [{0: 1, 1: 1}]])


def test_missing_face_rejected():
    with pytest.raises(ValueError):
        from_simplices([(0,), (0, 1)])


# -- order complexes ----------------------------------------------------------


def test_antichain_order_complex():
    X = order_complex(["a", "b"], lambda x, y: False)
    assert X.counts == [2]
    assert is_homology_sphere(X, 0)


def test_total_order_contractible():
    X = order_complex([3, 1, 2], lambda x, y: x < y)
    assert X.counts == [3, 3, 1]
    assert betti(X).is_acyclic()


def test_square_boundary_face_poset():
    vertices = [frozenset([i]) for i in range(4)]
    edges = [frozenset([i, (i + 1) % 4]) for i in range(4)]
    X = order_complex(vertices + edges, lambda a, b: a < b)
    assert X.counts == [8, 8]
    assert is_homology_sphere(X, 1)


def test_order_complex_validates_order():
    with pytest.raises(ValueError):
        order_complex([1, 2], lambda a, b: a != b)
    with pytest.raises(ValueError):
        order_complex([1], lambda a, b: True)


def test_subset_lattice_proper_part_is_sphere():
    for k in range(2, 5):
        proper = [frozenset(s) for r in range(1, k) for s in itertools.combinations(range(k), r)]
        assert is_homology_sphere(order_complex(proper, lambda a, b: a < b), k - 2)


# -- clique complexes and joins ----------------------------------------------


def test_clique_complex_of_cycle():
    X = clique_complex(range(5), lambda a, b: (a - b) % 5 in (1, 4))
    assert X.counts == [5, 5]
    assert is_homology_sphere(X, 1)


def test_join_of_zero_spheres_is_circle():
    s0 = from_simplices([(0,), (1,)])
    J = join(s0, s0)
    assert J.counts == [4, 4]
    assert is_homology_sphere(J, 1)


def test_join_with_empty_is_identity():
    s1 = simplex_boundary(2)
    assert join(s1, CellComplex.empty()).counts == s1.counts
    assert join(CellComplex.empty(), s1).counts == s1.counts
    assert join_all([]).is_empty()


def test_join_dimensions_add():
    spheres = [CellComplex.empty(), from_simplices([(0,), (1,)]), simplex_boundary(2),
               simplex_boundary(3)]
    for (a, X), (b, Y) in itertools.product(enumerate(spheres, -1), repeat=2):
        assert is_homology_sphere(join(X, Y), a + b + 1)


def test_join_with_contractible_is_contractible():
    cone = from_simplices(closure([(0, 1)]))
    assert betti(join(cone, simplex_boundary(2))).is_acyclic()


# -- invariances --------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_betti_invariant_under_relabelling(rnd):
    perm = list(range(7))
    rnd.shuffle(perm)
    torus = [tuple(sorted(perm[v] for v in f)) for f in TORUS]
    rnd.shuffle(torus)
    assert betti(from_simplices(closure(torus))).unreduced == (1, 2, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)),
                min_size=1, max_size=10))
def test_euler_characteristic_equals_alternating_betti(facets):
    X = from_simplices(closure(facets))
    b = betti(X)
    assert X.euler_characteristic() == sum((-1) ** i * x for i, x in enumerate(b.unreduced))


def test_face_sign_is_used(monkeypatch):
    monkeypatch.setattr(complexes, "face_sign", lambda i: 1)
    with pytest.raises(BoundaryError):
        from_simplices(closure([(0, 1, 2)]))


def test_json_roundtrip():
    X = from_simplices(closure(RP2))
    Y = CellComplex.from_json(X.to_json())
    assert Y.counts == X.counts and Y.boundary == X.boundary
    assert betti(Y) == betti(X)
    with pytest.raises(ValueError):
        CellComplex.from_json('{"format": "other"}')


def test_shuffled_cell_order_keeps_betti():
    X = from_simplices(closure(TORUS))
    rng = random.Random(3)
    perms = [list(range(n)) for n in X.counts]
    for p in perms:
        rng.shuffle(p)
    inv = [{old: new for new, old in enumerate(p)} for p in perms]
    cells = [[X.cells[k][i] for i in p] for k, p in enumerate(perms)]
    boundary = [[{inv[k - 1][f]: a for f, a in X.boundary[k][i].items()} if k else {}
                 for i in p] for k, p in enumerate(perms)]
    assert betti(CellComplex(cells, boundary)) == betti(X)
