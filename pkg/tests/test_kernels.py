"""Backend agreement and the exact-polygon linking oracle."""

import numpy as np
import pytest

from cubalex import _kernels_py
from cubalex import kernels


def polygon_linking_oracle(ls, ks):
    """Exact linking number of two closed polygons (solid-angle formula)."""
    ls = np.vstack([ls, ls[:1]])
    ks = np.vstack([ks, ks[:1]])
    total = 0.0
    for i in range(len(ks) - 1):
        for j in range(len(ls) - 1):
            a = ls[j] - ks[i]
            b = ls[j] - ks[i + 1]
            c = ls[j + 1] - ks[i + 1]
            d = ls[j + 1] - ks[i]
            p = np.dot(a, np.cross(b, c))
            an, bn, cn, dn = (np.linalg.norm(v) for v in (a, b, c, d))
            d1 = an * bn * cn + np.dot(a, b) * cn + np.dot(b, c) * an + np.dot(c, a) * bn
            d2 = an * dn * cn + np.dot(a, d) * cn + np.dot(d, c) * an + np.dot(c, a) * dn
            total += np.arctan2(p, d1) + np.arctan2(p, d2)
    return total / (2 * np.pi)


def circles(n=400):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    c1 = np.c_[np.cos(t), np.sin(t), 0 * t]
    c2 = np.c_[1 + np.cos(t), 0 * t, np.sin(t)]
    c3 = np.c_[5 + np.cos(t), np.sin(t), 0 * t]
    return c1, c2, c3


def test_linked_circles():
    c1, c2, c3 = circles()
    assert abs(abs(kernels.gauss_linking_sum(c1, c2)) - 1) < 1e-3
    assert abs(kernels.gauss_linking_sum(c1, c3)) < 1e-3


def test_gauss_sum_matches_polygon_oracle():
    c1, c2, c3 = circles(120)
    lk_exact = polygon_linking_oracle(c1, c2)
    lk_quad = kernels.gauss_linking_sum(c1, c2)
    assert abs(lk_exact - round(lk_exact)) < 1e-9  # oracle is exact
    assert abs(lk_quad - lk_exact) < 5e-3


def test_backends_agree():
    c1, c2, _ = circles(200)
    a = _kernels_py.gauss_linking_sum(c1, c2)
    b = kernels.gauss_linking_sum(c1, c2)
    assert abs(a - b) < 1e-10
    pts = np.random.default_rng(0).normal(size=(100, 4))
    for flat in (0, 1):
        da = _kernels_py.torus_distances(pts, 0.05, flat)
        db = kernels.torus_distances(pts, 0.05, flat)
        assert np.abs(da - db).max() < 1e-14


@pytest.mark.skipif("cython" not in kernels.available_backends(),
                    reason="compiled kernels not built")
def test_compiled_backend_present():
    assert kernels.BACKEND == "cython"
