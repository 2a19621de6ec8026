import cmath
import json
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from leeyang.errors import ConvergenceError
from leeyang.freeenergy import PhaseSystem
from leeyang.locator import (
    TAU_CURVE,
    blume_capel_criticals,
    density_profile,
    find_multiple_points,
    multiple_points_json,
    predict,
    quantize_zeros,
    refine_two_term,
    seed_scan,
    trace_curve,
    trace_pair,
    zero_density,
)
from leeyang.polyroots import match_zeros

BC_J = math.log(16) / 4  # exp(-4J) = 1/16
POTTS_Q, POTTS_D = 25, 3


def potts(ratio):
    return PhaseSystem("potts", math.log(ratio * POTTS_Q) / POTTS_D, d=POTTS_D, q=POTTS_Q)


def _residuals(curve):
    F = [curve.system.f_df(curve.pair[0], z)[0] - curve.system.f_df(curve.pair[1], z)[0] for z in curve.z]
    return np.abs(np.real(F) - curve.level)


@pytest.mark.parametrize("J", [0.6, 1.0, 2.0])
def test_ising_curve_is_unit_circle(J):
    s = PhaseSystem("ising", J)
    c = trace_curve(s, ("plus", "minus"), 16, 1.0)
    assert c.closed
    assert np.max(np.abs(np.abs(c.z) - 1)) <= 1e-9
    assert c.winding == pytest.approx(2 * math.pi * 32, abs=1e-6)


def test_curve_invariants():
    s = PhaseSystem("blume-capel", BC_J, lam=0.0)
    for c in trace_pair(s, ("plus", "zero"), 64):
        assert np.max(_residuals(c)) <= TAU_CURVE
        assert np.max(np.abs(np.diff(c.phase_accum))) < math.pi / 4
        assert np.all(np.diff(c.arc_length) > 0)


def test_seed_precondition():
    s = PhaseSystem("ising", 1.0)
    with pytest.raises(ValueError):
        trace_curve(s, ("plus", "minus"), 16, 1.5)


def test_seed_scan_ising():
    seeds = seed_scan(PhaseSystem("ising", 1.0), ("plus", "minus"), 16, grid=(32, 64))
    assert seeds
    assert max(abs(abs(z) - 1) for z in seeds) <= 1e-6


def test_seed_scan_blume_capel_above_upper_critical():
    crit = blume_capel_criticals(math.log(5))
    s = PhaseSystem("blume-capel", math.log(5), lam=1.5 * crit.lam_plus)
    assert seed_scan(s, ("plus", "zero"), 64) == []
    assert seed_scan(s, ("minus", "zero"), 64) == []
    assert seed_scan(s, ("plus", "minus"), 64)


def test_potts_three_seed_families():
    s = potts(1.17)
    for pair in s.pairs():
        assert seed_scan(s, pair, 1000), pair


def test_ising_quantized_angles():
    J = 1.25
    eps = math.exp(-8 * J)
    V = 64
    pred = predict(PhaseSystem("ising", J), V)
    u = pred.in_variable()
    assert len(u) == V
    phis = np.sort(np.abs([cmath.phase(zr.z) for zr in u]))[::2]
    k = np.arange(1, V // 2 + 1)
    base = (2 * k - 1) * math.pi / V
    expect = base + 2 * eps * np.sin(base)
    assert np.max(np.abs(phis - expect)) <= 10 * eps**2


def test_ising_refined_on_circle():
    s = PhaseSystem("ising", 0.9)
    c = trace_curve(s, ("plus", "minus"), 32, 1.0)
    for zr in quantize_zeros(c).zeros:
        z = refine_two_term(s, c.pair, 32, zr.z, zr.k)
        assert abs(abs(z) - 1) <= 1e-12


def test_closed_curve_count_matches_winding():
    for s, pair, V in [(PhaseSystem("ising", 1.0), ("plus", "minus"), 24),
                       (potts(1.3), ("M", "O"), 1000)]:
        for c in trace_pair(s, pair, V):
            if c.closed and c.fully_stable:
                q = quantize_zeros(c)
                assert len(q.zeros) == round(c.winding / (2 * math.pi))


def test_refinement_shift_scales_as_inverse_square():
    s = PhaseSystem("ising", 1.0)
    Vs = np.array([16, 32, 64, 128])
    dist = []
    for V in Vs:
        c = trace_curve(s, ("plus", "minus"), int(V), 1.0, ds0=0.1 / V, ds_max=0.5 / V)
        dist.append(max(abs(refine_two_term(s, c.pair, int(V), zr.z, zr.k) - zr.z)
                        for zr in quantize_zeros(c).zeros))
    slope = np.polyfit(np.log(Vs), np.log(dist), 1)[0]
    assert slope == pytest.approx(-2, abs=0.2)


def test_refine_basin_guard():
    s = PhaseSystem("ising", 1.0)
    with pytest.raises(ConvergenceError):
        refine_two_term(s, ("plus", "minus"), 16, 0.05 + 0j, 0, max_iter=50)


def test_density_at_i():
    J, V = 0.8, 32
    s = PhaseSystem("ising", J)
    eps = math.exp(-8 * J)
    for z in (1j, -1j):
        expect = V / (2 * math.pi) * abs(-2 / z + 2 * eps * (z + z**-3))
        assert zero_density(s, ("plus", "minus"), z, V) == pytest.approx(expect, rel=1e-14)
        h = 1e-6
        F = lambda w: s.f_df("plus", w)[0] - s.f_df("minus", w)[0]
        fd = V / (2 * math.pi) * abs((F(z + h) - F(z - h)) / (2 * h))
        assert zero_density(s, ("plus", "minus"), z, V) == pytest.approx(fd, rel=1e-6)


def test_density_integral_ising():
    V = 64
    c = trace_curve(PhaseSystem("ising", 1.0), ("plus", "minus"), V, 1.0)
    s, rho, cum = density_profile(c)
    # z runs over the circle once, u = z**2 twice: 2V zeros in z
    assert cum[-1] == pytest.approx(2 * V, rel=1e-9)
    assert s[-1] == pytest.approx(2 * math.pi, rel=1e-9)


def test_density_nonconstant_on_ellipse():
    s = PhaseSystem("blume-capel", BC_J, lam=0.0)
    c = trace_pair(s, ("plus", "zero"), 64)[0]
    _, rho, _ = density_profile(c)
    assert (rho.max() - rho.min()) / rho.mean() > 1e-2


def test_blume_capel_minus_zero_band():
    eps = 1 / 16
    s = PhaseSystem("blume-capel", BC_J, lam=0.0)
    curves = trace_pair(s, ("minus", "zero"), 64)
    pts = np.concatenate([c.z[c.stable] for c in curves])
    assert pts.size
    gap = 1 - np.abs(pts)
    assert gap.min() >= 0 and gap.max() <= 3 * eps


def test_blume_capel_ellipse_pointwise():
    J = BC_J
    e4, e6 = math.exp(-4 * J), math.exp(-6 * J)
    s = PhaseSystem("blume-capel", J, lam=0.0)
    for c in trace_pair(s, ("plus", "zero"), 64):
        x, y = c.z.real, c.z.imag
        G = x * x + y * y - 1 - 2 * x * e4 - 4 * (x * x - y * y) * e6
        grad = np.hypot(2 * x - 2 * e4 - 8 * x * e6, 2 * y + 8 * y * e6)
        dist = np.abs(G) / grad
        assert np.max(dist[c.stable]) <= 10 * math.exp(-8 * J)


def test_predicted_symmetry_blume_capel():
    s = PhaseSystem("blume-capel", BC_J, lam=math.log(0.9))
    pred = predict(s, 64)
    z = pred.zeros.values
    assert match_zeros(z, np.conj(z)).max_distance <= 1e-9
    assert match_zeros(z, 1 / np.conj(z)).max_distance <= 1e-9


def test_triple_points_blume_capel():
    J = math.log(5)
    s = PhaseSystem("blume-capel", J, lam=0.0)
    mp = find_multiple_points(s, ("plus", "minus", "zero"), 64, 1j, d=2)
    assert abs(abs(mp.z) - 1) <= 1e-10
    assert abs(cmath.phase(mp.z) - math.pi / 2) <= 5 * math.exp(-2 * J)
    assert mp.exclusion_radius == pytest.approx(1 / 8)
    data = json.loads(multiple_points_json([mp]))
    assert data["multiple_points"][0]["phases"] == ["plus", "minus", "zero"]


def test_blume_capel_criticals():
    J = math.log(5)
    eps = math.exp(-4 * J)
    crit = blume_capel_criticals(J)
    assert abs(crit.lam_minus + eps) <= 10 * math.exp(-6 * J)
    assert abs(crit.lam_plus - eps) <= 10 * math.exp(-6 * J)
    lams = np.linspace(crit.lam_minus, crit.lam_plus, 12)[1:-1]
    thetas = [crit.theta_c(l) for l in lams]
    assert np.all(np.diff(thetas) < 0)
    h = 1e-7
    for theta in (0.3, 1.5, 2.8):
        slope = (crit.delta(theta, h) - crit.delta(theta, -h)) / (2 * h)
        assert abs(slope + 1) <= 5 * eps
    assert crit.theta_c(2 * crit.lam_plus) is None


def test_potts_radius_formula():
    s = potts(1.2529)
    eps2 = s.q * math.exp(-2 * s.d * s.J)
    F = lambda z: (s.f_df("M", z)[0] - s.f_df("O", z)[0]).real
    for theta in np.linspace(0.1, 3.0, 8):
        r = brentq(lambda r: F(r * cmath.exp(1j * theta)), 0.5, 3.0)
        assert abs(r - (1 + eps2 * (1 - math.cos(theta)))) <= 10 / s.q**2


def test_potts_outward_shift():
    s = potts(1.3)
    F = lambda z: (s.f_df("M", z)[0] - s.f_df("O", z)[0]).real
    shifts = {}
    for V in (500, 2000):
        c = [c for c in trace_pair(s, ("M", "O"), V) if c.closed][0]
        zr = list(quantize_zeros(c).zeros)[5]
        z = refine_two_term(s, c.pair, V, zr.z, zr.k)
        theta = cmath.phase(z)
        r_inf = brentq(lambda r: F(r * cmath.exp(1j * theta)), 0.5, 3.0)
        shifts[V] = abs(z) - r_inf
    assert shifts[500] > 0 and shifts[2000] > 0
    assert shifts[500] / shifts[2000] == pytest.approx(4, rel=0.2)


def test_curve_serialization():
    c = trace_curve(PhaseSystem("ising", 1.0), ("plus", "minus"), 8, 1.0)
    rows = list(c.csv_rows())
    assert len(rows) == len(c) and rows[0][0] == "plus-minus"
    d = c.to_dict()
    assert json.loads(json.dumps(d))["re"] == [float(v) for v in c.z.real]
