"""Random generators shared by the test modules."""

import random

from cubalex import factories as fa
from cubalex import refinement as rf


def random_disk_polyomino(rng, max_cells):
    """Edge-connected polyomino whose complex is a disk."""
    while True:
        cells = {(0, 0)}
        target = rng.randint(1, max_cells)
        guard = 0
        while len(cells) < target and guard < 200:
            guard += 1
            x, y = rng.choice(sorted(cells))
            dx, dy = rng.choice([(1, 0), (-1, 0), (0, 1), (0, -1)])
            cells.add((x + dx, y + dy))
        if fa.is_disk_polyomino(sorted(cells)):
            return sorted(cells)


def random_molecule(rng, n=2, max_atoms=4, max_blocks=3, max_rho=3):
    """A random valid molecule built root-first with rejection sampling."""
    while True:
        try:
            return _try_random_molecule(rng, n, max_atoms, max_blocks, max_rho)
        except Exception:
            continue


def _try_random_molecule(rng, n, max_atoms, max_blocks, max_rho):
    rho_root = rng.randint(1, max_rho)
    side = 3 ** rho_root
    # root atom: a straight or L-shaped run of blocks
    count = rng.randint(1, max_blocks)
    blocks = [(0,) * n]
    axis = rng.randrange(n)
    for i in range(1, count):
        last = blocks[-1]
        if rng.random() < 0.3:
            axis = rng.randrange(n)
        step = tuple(side if a == axis else 0 for a in range(n))
        blocks.append(tuple(last[a] + step[a] for a in range(n)))
    atoms = [[(c, side) for c in dict.fromkeys(blocks)]]
    indices = [rho_root]

    n_children = rng.randint(0, max_atoms - 1)
    for _ in range(n_children):
        parent = rng.randrange(len(atoms))
        rho_c = rng.randint(0, indices[parent] - 1) if indices[parent] > 0 else None
        if rho_c is None:
            continue
        side_c = 3 ** rho_c
        pb_corner, pb_side = atoms[parent][rng.randrange(len(atoms[parent]))]
        axis = rng.randrange(n)
        direction = rng.choice([0, 1])
        # child sits flush against the chosen face, 3-adically aligned
        corner = list(pb_corner)
        if direction:
            corner[axis] = pb_corner[axis] + pb_side
        else:
            corner[axis] = pb_corner[axis] - side_c
        for a in range(n):
            if a != axis:
                slots = pb_side // side_c
                corner[a] = pb_corner[a] + side_c * rng.randrange(slots)
        atoms.append([(tuple(corner), side_c)])
        indices.append(rho_c)
    return rf.build_molecule(n, atoms, indices)


def random_sketch_pieces(rng, max_pieces=30, colors=3):
    """Pieces, colors, incidences and roots for a neighborly forest test.

    Per-color subgraphs are connected by construction; one root per color.
    """
    m = rng.randint(colors, max_pieces)
    pieces = list(range(1, m + 1))
    col = {}
    for i, p in enumerate(pieces):
        col[p] = (i % colors) + 1
    incid = []
    sid = 0
    by_color = {}
    for p in pieces:
        by_color.setdefault(col[p], []).append(p)
    for c, group in by_color.items():
        # random connected graph: a random spanning tree plus extras
        order = group[:]
        rng.shuffle(order)
        for i in range(1, len(order)):
            a = order[rng.randrange(i)]
            incid.append((a, order[i], f"s{sid}"))
            sid += 1
        for _ in range(rng.randint(0, len(group))):
            a, b = rng.sample(group, 2) if len(group) >= 2 else (None, None)
            if a is not None:
                incid.append((a, b, f"s{sid}"))
                sid += 1
    roots = [group[0] for group in by_color.values()]
    return pieces, col, incid, roots
