"""Constructors for the standard complexes used in tests and the CLI."""

from __future__ import annotations

from .complex_core import (
    CUBE, CUBICAL, SIMPLEX, SIMPLICIAL, build_complex, canonical_triangulation,
)


def _corner_id(coords, pos):
    return coords.setdefault(pos, len(coords))


def grid_complex(cells):
    """Cubical 2-complex from unit squares given by lower-left integer corners."""
    coords = {}
    squares = []
    for (x, y) in cells:
        vs = [_corner_id(coords, (x, y)), _corner_id(coords, (x + 1, y)),
              _corner_id(coords, (x, y + 1)), _corner_id(coords, (x + 1, y + 1))]
        squares.append((2, vs, CUBE))
    verts = {i: pos for pos, i in coords.items()}
    return build_complex(2, CUBICAL, verts, squares)


def box_complex(n, corners=((0,) * 1,)):
    """Cubical n-complex of unit n-cubes at the given integer corners."""
    coords = {}
    cubes = []
    for corner in corners:
        vs = []
        for i in range(2 ** n):
            pos = tuple(corner[j] + ((i >> j) & 1) for j in range(n))
            vs.append(_corner_id(coords, pos))
        cubes.append((n, vs, CUBE))
    verts = {i: pos for pos, i in coords.items()}
    return build_complex(n, CUBICAL, verts, cubes)


def unit_cube(n):
    return box_complex(n, corners=((0,) * n,))


def cube_boundary_complex(n):
    """The (n-1)-complex of all 2n facets of the unit n-cube."""
    K = unit_cube(n)
    top = K.top_ids()[0]
    return K.subcomplex(K.facet_ids(top))


def domino():
    return grid_complex([(0, 0), (1, 0)])


def rect_grid(w, h):
    return grid_complex([(x, y) for x in range(w) for y in range(h)])


def doubled_complex(K):
    """Double of a cubical cell complex along its boundary.

    Triangulates K twice; triangulation vertices whose source cube lies on
    the boundary are shared, interior ones are duplicated.  The result is a
    closed simplicial complex (16 triangles for a square, 96 tetrahedra for
    a 3-cube).
    """
    T = canonical_triangulation(K)
    boundary = {(c.dim, c.verts)
                for c in K.subcomplex(K.boundary_facet_ids()).cells()}
    boundary |= {(0, (v,)) for v in K.boundary_vertex_ids()}
    offset = max(T.vertices) + 1
    remap = {}
    for v in T.vertices:
        src = T.triangulation_source[v]
        remap[v] = v if src in boundary else v + offset

    verts = dict(T.vertices)
    vdim = dict(T.vertex_cube_dim)
    cells = [(c.dim, list(c.verts), SIMPLEX) for c in T.cells(T.dimension)]
    for v, w in remap.items():
        if w != v:
            verts[w] = T.vertices[v]
            vdim[w] = T.vertex_cube_dim[v]
    for c in T.cells(T.dimension):
        cells.append((c.dim, [remap[v] for v in c.verts], SIMPLEX))
    D = build_complex(T.dimension, SIMPLICIAL, verts, cells)
    D.vertex_cube_dim.update(vdim)
    return D


def circle_complex(edges=2):
    """A 1-complex on a circle; edges=2 gives the two-cell hemisphere circle."""
    if edges == 2:
        return build_complex(1, SIMPLICIAL, [0, 1],
                             [(1, [0, 1], SIMPLEX), (1, [1, 0], SIMPLEX)])
    cells = [(1, [i, (i + 1) % edges], SIMPLEX) for i in range(edges)]
    return build_complex(1, SIMPLICIAL, list(range(edges)), cells)


def mutually_adjacent_triangles():
    """Three pairwise-adjacent triangles: a 3-cycle in the adjacency graph."""
    cells = [(2, [0, 1, 2], SIMPLEX), (2, [0, 1, 3], SIMPLEX),
             (2, [0, 2, 3], SIMPLEX)]
    return build_complex(2, SIMPLICIAL, [0, 1, 2, 3], cells)


def product_with_interval(base, layers):
    """Cubical product of a cubical complex with [0..layers].

    Vertex ids are (v, level) pairs flattened; cube orders interleave the
    binary orders of the factors (interval bit last).
    """
    ids = {}

    def vid(v, t):
        return ids.setdefault((v, t), len(ids))

    cells = []
    n = base.dimension
    for t in range(layers):
        for i in base.top_ids():
            order = base.cell(i).order
            vs = [vid(v, t) for v in order] + [vid(v, t + 1) for v in order]
            cells.append((n + 1, vs, CUBE))
    verts = {}
    for (v, t), i in ids.items():
        c = base.vertices[v]
        verts[i] = None if c is None else tuple(c) + (t,)
    return build_complex(n + 1, CUBICAL, verts, cells)


# -- polyominoes ------------------------------------------------------------------


def _canon_polyomino(cells):
    best = None
    pts = list(cells)
    for flip in (False, True):
        q = [(-x, y) if flip else (x, y) for x, y in pts]
        for _ in range(4):
            q = [(y, -x) for x, y in q]
            mx = min(x for x, _ in q)
            my = min(y for _, y in q)
            norm = tuple(sorted((x - mx, y - my) for x, y in q))
            if best is None or norm < best:
                best = norm
    return best


def free_polyominoes(max_cells):
    """Free polyominoes (up to D4 symmetry) with up to `max_cells` squares."""
    levels = {1: {((0, 0),)}}
    for k in range(2, max_cells + 1):
        new = set()
        for poly in levels[k - 1]:
            cells = set(poly)
            for (x, y) in poly:
                for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    c = (x + dx, y + dy)
                    if c in cells:
                        continue
                    new.add(_canon_polyomino(cells | {c}))
        levels[k] = new
    return {k: sorted(levels[k]) for k in range(1, max_cells + 1)}


def is_disk_polyomino(cells):
    """True iff the polyomino's complex is a 2-cell (disk)."""
    from .complex_core import cell_check
    K = grid_complex(cells)
    return not cell_check(K)
