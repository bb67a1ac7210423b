# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Gauss linking double sum and batch torus distances.

Twin of `_kernels_py`; semantics must match it exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, hypot

cnp.import_array()

BACKEND = "cython"


def gauss_linking_sum(object x_in, object y_in, int chunk=512):
    """Gauss linking integral of two closed polylines in R^3 (midpoint rule)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] y = np.ascontiguousarray(y_in, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dx = np.roll(x, -1, axis=0) - x
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dy = np.roll(y, -1, axis=0) - y
    cdef cnp.ndarray[cnp.float64_t, ndim=2] mx = x + 0.5 * dx
    cdef cnp.ndarray[cnp.float64_t, ndim=2] my = y + 0.5 * dy
    cdef double total = 0.0
    cdef double px, py_, pz, tx, ty, tz, qx, qy, qz, sx, sy, sz
    cdef double cx, cy, cz, dxx, dyy, dzz, r2, r3
    cdef Py_ssize_t i, j
    for i in range(n):
        px = mx[i, 0]; py_ = mx[i, 1]; pz = mx[i, 2]
        tx = dx[i, 0]; ty = dx[i, 1]; tz = dx[i, 2]
        for j in range(m):
            qx = my[j, 0]; qy = my[j, 1]; qz = my[j, 2]
            sx = dy[j, 0]; sy = dy[j, 1]; sz = dy[j, 2]
            dxx = px - qx; dyy = py_ - qy; dzz = pz - qz
            r2 = dxx * dxx + dyy * dyy + dzz * dzz
            r3 = r2 * sqrt(r2)
            cx = ty * sz - tz * sy
            cy = tz * sx - tx * sz
            cz = tx * sy - ty * sx
            total += (cx * dxx + cy * dyy + cz * dzz) / r3
    return total / (4.0 * np.pi)


def torus_distances(object points, double b, int flat):
    """Distances from 4-d points to the model core torus (see _kernels_py)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] p = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double r, s
    cdef Py_ssize_t i
    for i in range(n):
        r = hypot(p[i, 2], p[i, 3])
        if flat:
            s = hypot(p[i, 0], p[i, 1])
            out[i] = hypot(s - b, r - 1.0)
        else:
            s = hypot(p[i, 1], r - 1.0)
            out[i] = hypot(p[i, 0], s - b)
    return out
