"""Pure-numpy kernels: Gauss linking double sum and batch torus distances.

Twin of the compiled `_kernels` extension; `cubalex.kernels` picks whichever
is importable.  Keep signatures and semantics in lockstep with the .pyx.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def gauss_linking_sum(x, y, chunk=512):
    """Gauss linking integral of two closed polylines in R^3.

    Midpoint-rule discretization of
        lk = (1/4pi) oint oint (t_x x t_y) . (p_x - p_y) / |p_x - p_y|^3,
    using segment midpoints and tangent*ds per segment.  The curves must be
    closed (first point not repeated); O(N*M) work, chunked to bound memory.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx = np.roll(x, -1, axis=0) - x
    dy = np.roll(y, -1, axis=0) - y
    mx = x + 0.5 * dx
    my = y + 0.5 * dy
    total = 0.0
    for a in range(0, len(mx), chunk):
        pa = mx[a:a + chunk]
        ta = dx[a:a + chunk]
        diff = pa[:, None, :] - my[None, :, :]
        r3 = np.einsum("ijk,ijk->ij", diff, diff) ** 1.5
        cross = np.cross(ta[:, None, :], dy[None, :, :])
        total += float(np.einsum("ijk,ijk->ij", cross, diff / r3[..., None]).sum())
    return total / (4.0 * np.pi)


def torus_distances(points, b, flat):
    """Distances from 4-d points to the model core torus.

    flat=0: the round torus (revolved meridian), distance
        sqrt(x1^2 + (sqrt(x2^2 + (r-1)^2) - b)^2),  r = sqrt(x3^2 + x4^2);
    flat=1: the flat torus S^1(b) x S^1(1),
        sqrt((sqrt(x1^2+x2^2) - b)^2 + (r-1)^2).
    """
    p = np.asarray(points, dtype=np.float64)
    r = np.hypot(p[:, 2], p[:, 3])
    if flat:
        s = np.hypot(p[:, 0], p[:, 1])
        return np.hypot(s - b, r - 1.0)
    s = np.hypot(p[:, 1], r - 1.0)
    return np.hypot(p[:, 0], s - b)
