"""Labelings, parity, degree, reduced stars, collapses, merges, the driver."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubalex import alexander as al
from cubalex import complex_core as cc
from cubalex import factories as fa
from cubalex import shelling as sh
from cubalex.complex_core import SIMPLEX, SIMPLICIAL, build_complex
from cubalex.errors import (
    BadCenterLabel, HasBoundary, LabelClash, NotSimplePair, OddCycle,
)

from gen import random_disk_polyomino


def brute_force_two_colorable(g):
    """Oracle: exhaustive search for a proper 2-coloring."""
    nodes = sorted(g.nodes)
    for bits in itertools.product((1, -1), repeat=len(nodes)):
        col = dict(zip(nodes, bits))
        if all(col[a] != col[b] for a, b in g.edges):
            return True
    return False


def cone(center, cycle, closed=True):
    rng = range(len(cycle)) if closed else range(len(cycle) - 1)
    cells = [(2, [center, cycle[i], cycle[(i + 1) % len(cycle)]], SIMPLEX)
             for i in rng]
    return build_complex(2, SIMPLICIAL, sorted({center, *cycle}), cells)


# -- labeling and parity -------------------------------------------------------


def test_square_triangulation_alternates():
    T = cc.canonical_triangulation(fa.unit_cube(2))
    lab = al.alexander_label(T)
    g = T.adjacency_graph()
    assert all(lab.parity[a] != lab.parity[b] for a, b in g.edges)


def test_doubled_square_parity_split():
    dd = fa.doubled_complex(fa.unit_cube(2))
    # oracle: the adjacency graph is 2-colorable by exhaustive search
    assert brute_force_two_colorable(dd.adjacency_graph())
    lab = al.alexander_label(dd)
    plus = sum(1 for s in lab.parity.values() if s == 1)
    assert dd.n_cells(2) == 16 and plus == 8


def test_odd_cycle_raises():
    # oracle: three mutually adjacent triangles are not 2-colorable
    K = fa.mutually_adjacent_triangles()
    assert not brute_force_two_colorable(K.adjacency_graph())
    with pytest.raises(OddCycle) as exc:
        al.alexander_label(K, vertex_labels={0: 0, 1: 1, 2: 2, 3: 2})
    assert len(exc.value.cycle) >= 3


def test_label_clash():
    T = cc.canonical_triangulation(fa.unit_cube(2))
    labels = {v: 0 for v in T.vertices}
    with pytest.raises(LabelClash):
        al.alexander_label(T, vertex_labels=labels)


def test_parity_seed_deterministic():
    dd = fa.doubled_complex(fa.unit_cube(2))
    lab1 = al.alexander_label(dd)
    lab2 = al.alexander_label(dd)
    assert lab1.parity == lab2.parity


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=2, max_value=6))
def test_parity_is_proper_coloring_on_fans(k):
    # fan of 2k triangles around a center: always 2-colorable
    cycle = list(range(1, 2 * k + 1))
    K = cone(0, cycle)
    labels = {0: 0}
    labels.update({v: 1 if v % 2 else 2 for v in cycle})
    lab = al.alexander_label(K, vertex_labels=labels)
    g = K.adjacency_graph()
    assert all(lab.parity[a] != lab.parity[b] for a, b in g.edges)


# -- degree -----------------------------------------------------------------------


def test_degree_circle():
    C = fa.circle_complex(2)
    lab = al.alexander_label(C, vertex_labels={0: 0, 1: 1})
    assert al.degree(lab) == 1


def test_degree_doubled():
    dd = fa.doubled_complex(fa.unit_cube(2))
    assert al.degree(al.alexander_label(dd)) == 8
    d3 = fa.doubled_complex(fa.unit_cube(3))
    assert al.degree(al.alexander_label(d3)) == 48


def test_degree_needs_closed():
    T = cc.canonical_triangulation(fa.unit_cube(2))
    with pytest.raises(HasBoundary):
        al.degree(al.alexander_label(T))


# -- reduced stars, pairs, clovers ------------------------------------------------------


def filtering_oracle(lab, v, apex):
    """Oracle: reduced star by direct filtering of the star's cells."""
    K = lab.complex
    return sorted(
        K.cell(i).verts for i in K.star_cell_ids(v)
        if all(lab.label(w) != apex for w in K.cell(i).verts))


def test_reduced_star_filtering():
    dd = fa.doubled_complex(fa.unit_cube(2))
    lab = al.alexander_label(dd)
    corner = next(v for v, d in dd.vertex_cube_dim.items() if d == 0)
    rs = al.reduced_star(lab, corner, apex=1)
    assert sorted(c.verts for c in rs.cells()) == filtering_oracle(lab, corner, 1)


def test_reduced_star_identity_when_no_apex():
    # a star whose link has no apex vertices: filtering removes nothing
    K = cone(0, [1, 2, 3, 4])
    labels = {0: 0, 1: 1, 2: 2, 3: 1, 4: 2}
    lab = al.alexander_label(K, vertex_labels=labels)
    rs = al.reduced_star(lab, 3, apex=5_000)  # label never present
    star_cells = sorted(K.cell(i).verts for i in K.star_cell_ids(3))
    assert sorted(c.verts for c in rs.cells()) == star_cells


def test_bad_center_label():
    dd = fa.doubled_complex(fa.unit_cube(2))
    lab = al.alexander_label(dd)
    center = next(v for v, d in dd.vertex_cube_dim.items() if d == 2)
    with pytest.raises(BadCenterLabel):
        al.reduced_star(lab, center)  # apex defaults to w_2 = its own label


@pytest.mark.parametrize("k", [1, 2, 3])
def test_simple_pairs_matching(k):
    cycle = list(range(1, 2 * k + 1))
    K = cone(0, cycle)
    labels = {0: 0}
    labels.update({v: 1 if v % 2 else 2 for v in cycle})
    lab = al.alexander_label(K, vertex_labels=labels)
    pairs = al.simple_pairs(lab, 0)
    assert len(pairs) == k
    assert al.simple_pairs(lab, 0) == pairs  # rerun identical


def test_clover_of_six_star():
    K = cone(0, [1, 2, 3, 4, 5, 6])
    labels = {0: 0}
    labels.update({v: 1 if v % 2 else 2 for v in range(1, 7)})
    lab = al.alexander_label(K, vertex_labels=labels)
    cl = al.clover_of(lab, 0)
    assert cl.leaf_count() == 3
    rs = al.reduced_star(lab, 0)
    assert cc.is_isomorphic(cl.midrib, rs)
    assert cl.midrib.n_cells(1) == rs.n_cells(1)


def test_clover_two_simplex_star():
    # two triangles sharing their w2-avoiding face [0,1]: exactly one pair
    K = build_complex(2, SIMPLICIAL, [0, 1, 2, 3],
                      [(2, [0, 1, 2], SIMPLEX), (2, [0, 1, 3], SIMPLEX)])
    lab = al.alexander_label(K, vertex_labels={0: 0, 1: 1, 2: 2, 3: 2})
    cl = al.clover_of(lab, 0)
    assert cl.leaf_count() == 1


# -- collapse ------------------------------------------------------------------------


def test_collapse_doubled_square_recount():
    dd = fa.doubled_complex(fa.unit_cube(2))
    lab = al.alexander_label(dd)
    corner = min(v for v, d in dd.vertex_cube_dim.items() if d == 0)
    star_size = sum(1 for i in dd.star_cell_ids(corner)
                    if dd.cell(i).dim == 2)
    Q, lab2, step = al.collapse_at(lab, corner, apex=1)
    assert step.covers == star_size // 2
    assert Q.n_cells(2) == dd.n_cells(2) - star_size
    assert al.degree(lab2) == al.degree(lab) - step.covers


def test_collapse_identity_when_no_apex_in_star():
    dd = fa.doubled_complex(fa.unit_cube(2))
    lab = al.alexander_label(dd)
    corner = min(v for v, d in dd.vertex_cube_dim.items() if d == 0)
    Q, lab2, step = al.collapse_at(lab, corner, apex=9)  # label absent
    assert Q is dd and step.covers == 0


def test_two_collapses_compose():
    dd = fa.doubled_complex(fa.unit_cube(2))
    lab = al.alexander_label(dd)
    ledger = al.ReductionLedger()
    corners = sorted(v for v, d in dd.vertex_cube_dim.items() if d == 0)
    Q, lab2, s1 = al.collapse_at(lab, corners[0], apex=1)
    ledger.add(s1)
    nxt = [v for v in corners[1:] if v in Q.vertices and lab2.label(v) == 0]
    Q2, lab3, s2 = al.collapse_at(lab2, nxt[0], apex=1)
    ledger.add(s2)
    assert ledger.total_covers == s1.covers + s2.covers
    assert al.degree(lab3) == al.degree(lab) - ledger.total_covers
    assert ledger.degree_delta == -ledger.total_covers


def test_ledger_serialization():
    led = al.ReductionLedger()
    led.add(al.LedgerStep(3, 4, 2, -2))
    assert led.to_json()[0]["covers"] == 2


# -- merge -----------------------------------------------------------------------------


def test_merge_simple_pair_counts():
    K1 = cone(100, [0, 1, 2, 3])
    K2 = cone(200, [2, 1, 0, 6])
    merged, m = al.merge_star_pair(K1, K2)
    union_n = K1.n_cells(2) + K2.n_cells(2)
    assert m == (union_n - merged.n_cells(2)) // 2
    assert m == 2  # = #(K1 cap K2)^(n-1): the shared edges [0,1],[1,2]
    # boundary restriction preserved
    bd = {merged.cell(i).verts for i in merged.boundary_facet_ids()}
    U = al.union_complexes(K1, K2)
    assert bd == {U.cell(i).verts for i in U.boundary_facet_ids()}


def test_merge_single_edge_degenerate():
    merged, m = al.merge_star_pair(cone(100, [0, 1, 8]), cone(300, [1, 0, 7]))
    assert m == 1 and merged.n_cells(2) == 4


def test_merge_rejects_disjoint():
    with pytest.raises(NotSimplePair):
        al.merge_star_pair(cone(100, [0, 1, 2]), cone(200, [10, 11, 12]))


# -- reduction driver -------------------------------------------------------------------


@pytest.mark.parametrize("cells", [
    [(0, 0)],
    [(0, 0), (1, 0)],
    [(0, 0), (1, 0), (0, 1)],
    [(0, 0), (1, 0), (0, 1), (1, 1)],
    [(x, y) for x in range(3) for y in range(2)],
])
def test_driver_matches_star_replacement(cells):
    K = fa.grid_complex(cells)
    final, lab, ledger = al.reduce_cubical(K)
    S = sh.star_replacement(K)
    assert cc.is_isomorphic(S, final)
    assert ledger.total_covers == sh.star_replacement_cover_count(K)


def test_driver_random_disks():
    rng = random.Random(7)
    for _ in range(5):
        cells = random_disk_polyomino(rng, 8)
        K = fa.grid_complex(cells)
        final, lab, ledger = al.reduce_cubical(K)
        assert cc.is_isomorphic(sh.star_replacement(K), final)
        assert ledger.total_covers == sh.star_replacement_cover_count(K)
