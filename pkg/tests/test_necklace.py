"""Transforms, core geometry, tube hierarchy, and small-scale verifications.

The full-size verifications (b = 0.05, m = 1700) run in the acceptance
suite; here the same machinery runs on the smallest conforming parameters
that keep each test under a second or two.
"""

import math

import numpy as np
import pytest

from cubalex import necklace as nk
from cubalex.errors import ParamsInvalid
from cubalex.necklace import geometry as ge
from cubalex.necklace import transforms as tr


def small_params():
    # b = 0.1: window [4b^2/3, 3b^2/2] = [0.013333, 0.015]: m = 450 fits
    return nk.NecklaceParams(b=0.1, m=450)


# -- transforms -----------------------------------------------------------------


def test_phi_psi_formulas():
    assert np.allclose(tr.phi(np.zeros(4)), [0, 0, 1, 0])
    assert np.allclose(tr.psi(np.array([1.0, 2, 3, 4])), [3, 4, 2, 2])
    x = np.random.default_rng(1).normal(size=4)
    assert np.allclose(tr.PHI(x), tr.phi(x))
    assert np.allclose(tr.PSI(x), tr.psi(x))


def test_rotation_full_turn_identity():
    m = 38
    assert np.allclose(tr.rotation(m, m).A, np.eye(4), atol=1e-12)


def test_isometries_orientation_preserving():
    for S in (tr.PHI, tr.PSI, tr.rotation(3, 14)):
        assert S.orthogonality_error() < 1e-12
        assert abs(S.det() - 1.0) < 1e-12


def test_composition_scale_and_inverse():
    S = tr.PHI.compose(tr.scaling(0.25)).compose(tr.rotation(2, 10))
    assert abs(S.scale - 0.25) < 1e-15
    x = np.array([0.3, -0.2, 1.1, 0.4])
    assert np.allclose(S.inverse()(S(x)), x, atol=1e-12)


# -- core geometry -------------------------------------------------------------


def test_points_on_cores():
    b = 0.1
    assert ge.dist_to_core(np.array([b, 0, 1, 0]), "T~", b) == pytest.approx(0, abs=1e-14)
    assert ge.dist_to_core(np.array([0, b, 1, 0]), "T", b) == pytest.approx(0, abs=1e-14)


def test_closed_form_matches_sampling_oracle():
    b = 0.1
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(30, 4)) * 0.4 + np.array([0, 0, 1, 0])
    for pat in ("T", "T~"):
        dense = ge.sample_model_torus(pat, b, 1000, 1000)
        cf = ge.dist_to_core(pts, pat, b)
        brute = np.sqrt(
            ((pts[:, None, :] - dense[None, :, :]) ** 2).sum(-1)).min(1)
        assert np.abs(cf - brute).max() < 1e-4


def test_closed_form_thousand_points_two_stage():
    # 10^3 random points against dense two-stage parameter sampling
    b = 0.1
    rng = np.random.default_rng(7)
    pts = rng.normal(size=(1000, 4)) * 0.5 + np.array([0, 0, 1, 0])
    two_pi = 2 * np.pi
    g = 192
    for pat in ("T", "T~"):
        cf = ge.dist_to_core(pts, pat, b)
        coarse_angles = np.linspace(0, two_pi, g, endpoint=False)
        coarse = ge.sample_model_torus(pat, b, g, g)
        est = np.empty(len(pts))
        for lo in range(0, len(pts), 200):
            chunk = pts[lo:lo + 200]
            d2 = ((chunk[:, None, :] - coarse[None, :, :]) ** 2).sum(-1)
            best = d2.argmin(1)
            for t, idx in enumerate(best):
                u0 = coarse_angles[idx // g]
                v0 = coarse_angles[idx % g]
                du = two_pi / g
                us = np.linspace(u0 - du, u0 + du, 48)
                vs = np.linspace(v0 - du, v0 + du, 48)
                fine = ge.model_core_points(pat, b, us, vs)
                est[lo + t] = np.sqrt(
                    ((chunk[t] - fine) ** 2).sum(-1).min())
        assert np.abs(cf - est).max() < 1e-4


def test_sigma_circles_in_the_flat():
    p = small_params()
    for j in (1, 2, 3):
        s = ge.sigma_polyline(j, p.m, p.b, 64)
        assert np.abs(s[:, 1]).max() < 1e-15
        st = ge.sigma_tilde_polyline(j, p.m, p.b, 64)
        assert np.abs(st[:, 1]).max() < 1e-15


def test_core_centers_on_longitude():
    p = small_params()
    for j in (1, 2, 5):
        z = ge.core_center(j, p.m, p.b)
        assert abs(math.hypot(z[2], z[3]) - (1 - p.b)) < 1e-12
        assert abs(z[0]) < 1e-12 and abs(z[1]) < 1e-12


# -- params and tubes ------------------------------------------------------------


def test_params_window():
    with pytest.raises(ParamsInvalid):
        nk.NecklaceParams(b=0.2, m=1700)
    with pytest.raises(ParamsInvalid):
        nk.NecklaceParams(b=0.05, m=1701)  # odd
    p = nk.tubes.tiny_params()
    assert not p.window_conforming()


def test_jacobian_exponent():
    p = small_params()
    want = -4 * math.log(2 * p.m * p.b) / math.log(p.b)
    assert p.jacobian_exponent() == pytest.approx(want)


def test_generation_counts_and_patterns():
    p = small_params()
    sys0 = nk.generate(p, 0)
    assert len(sys0.tubes) == 1 and sys0.tubes[0].pattern == "T"
    sys1 = nk.generate(p, 1)
    lev1 = sys1.level(1)
    assert len(lev1) == p.m
    assert sum(1 for t in lev1 if t.pattern == "T") == p.m // 2


def test_scale_ledger_exact():
    p = small_params()
    system = nk.generate(p, 3, children_per_tube=4)
    assert max(system.scale_errors()) <= 1e-12


def test_equivariance_small():
    p = small_params()
    pts = ge.sample_core(1, p.m, p.b, 6, 12)
    r2 = tr.rotation(2, p.m)
    for j in (2, 3):
        d1 = ge.dist_point_to_tau(pts, j, p.m, p.b)
        d2 = ge.dist_point_to_tau(r2(pts), j + 2, p.m, p.b)
        assert np.abs(d1 - d2).max() < 1e-9


# -- verifications at small scale ---------------------------------------------------


def test_disjointness_small():
    p = small_params()
    rep = nk.verify_disjointness(p, starts=8, grid=32)
    assert rep["pass"]
    assert rep["c0"] > 0 and rep["c1"] > 0
    assert p.rho == min(rep["c0"], rep["c1"]) / 10


def test_containment_small():
    p = small_params()
    p.c0 = p.c1 = 0.45  # plausible empirical constants for the nesting check
    rep = nk.verify_containment(p)
    assert rep["pass_core"] and rep["pass_nesting"] and rep["pass"]
    # the nesting inequality holds throughout the strict regime b < rho/10
    assert rep["nesting_holds_below_rho_over_10"]
    rho = p.rho
    b = rho / 20
    assert rho * b ** 2 + b ** 2 < rho * b / 5


def test_containment_budget():
    p = small_params()
    with pytest.raises(nk.verify.SamplingBudgetExceeded):
        nk.verify_containment(p, n_phi=3000, n_theta=3000)


def test_linking_small():
    p = small_params()
    rep = nk.verify_linking(p, nodes=1500, pairs=[(1, 2), (1, 3), (p.m, 1)])
    assert rep["pass"]
    assert abs(abs(rep["pairs"]["1,2"]["lk"]) - 1) < 1e-3
    assert abs(rep["pairs"]["1,3"]["lk"]) < 1e-3
    assert abs(abs(rep["pairs"][f"{p.m},1"]["lk"]) - 1) < 1e-3


def test_tube_diameters_shrink_geometrically():
    # Cantor-set criterion: component diameters fall by the factor b per level
    p = small_params()
    system = nk.generate(p, 2, children_per_tube=3)
    model = ge.sample_model_torus("T", p.b, 24, 48)
    diams = {}
    for t in system.tubes:
        pts = t.transform(model)
        d = np.ptp(pts, axis=0).max()
        diams.setdefault(t.level, []).append(d)
    for k in (1, 2):
        ratio = max(diams[k]) / max(diams[k - 1])
        assert ratio == pytest.approx(p.b, rel=0.2)


def test_calibration_stability():
    rep = nk.calibrate_constants(bs=(0.05, 0.07), starts=2, grid=16)
    assert rep["stable"]
    assert rep["b_window"] == (0.05, 0.07)
    assert all(r["c0"] > 0 and r["c1"] > 0 for r in rep["rows"])


def test_export_cores_csv(tmp_path):
    p = small_params()
    system = nk.generate(p, 1, children_per_tube=6)
    path = tmp_path / "cores.csv"
    count = nk.export_geometry(system, str(path), what="cores", nodes=32)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == count + 1  # header
    # m polylines at level 1 (6 sampled children here)
    words = {line.split(",")[0] for line in lines[1:]}
    assert len(words) == 6


def test_export_slice_two_curves_per_tube(tmp_path):
    p = small_params()
    p.c0 = p.c1 = 0.45
    system = nk.generate(p, 1, children_per_tube=4)
    path = tmp_path / "slice.csv"
    nk.export_geometry(system, str(path), what="slice", nodes=16)
    words = {line.split(",")[0]
             for line in path.read_text().strip().splitlines()[1:]}
    assert len(words) == 2 * 4


def test_export_empty_system(tmp_path):
    p = small_params()
    system = nk.generate(p, 0)
    path = tmp_path / "empty.csv"
    count = nk.export_geometry(system, str(path), what="cores")
    assert count == 0 and path.exists()
