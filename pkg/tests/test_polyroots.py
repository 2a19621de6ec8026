import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from leeyang.errors import RootFindingError
from leeyang.models import ModelSpec, SectorWeights, enumerate_sector_weights
from leeyang.polyroots import (
    Zero,
    ZeroSet,
    find_roots,
    match_zeros,
    polynomial,
    residual,
    roots_of,
)

# roots in u of the Ising 2x2 (J = 0.8) polynomial, from a closed-form palindromic
# quartic solve (w = u + 1/u) done independently
ISING_L2_J08 = [
    complex(-0.7075934400445304, -0.706619787159932),
    complex(0.7042703254981825, -0.7099319042152452),
    complex(0.7042703254981825, 0.7099319042152452),
    complex(-0.7075934400445304, 0.706619787159932),
]


@pytest.mark.parametrize("D", [1, 2, 7, 16, 40])
def test_roots_of_minus_one(D):
    c = np.zeros(D + 1)
    c[0] = c[-1] = 1.0
    roots, res, _ = roots_of(c)
    expect = np.exp(1j * np.pi * (2 * np.arange(D) + 1) / D)
    rep = match_zeros(roots, expect)
    assert rep.max_distance <= 1e-12 and not rep.unmatched_a


def test_ising_2x2_fixture():
    w = enumerate_sector_weights(ModelSpec("ising", 0.8, 2, 2))
    zs = find_roots(w)
    assert zs.variable == "u" and len(zs) == 4
    assert np.max(np.abs(np.abs(zs.values) - 1)) <= 1e-10
    rep = match_zeros(zs.values, np.array(ISING_L2_J08))
    assert rep.max_distance <= 1e-12


def test_palindromic_and_conjugate_closure():
    rng = np.random.default_rng(3)
    half = rng.uniform(0.5, 2.0, 9)
    c = np.r_[half, rng.uniform(0.5, 2.0), half[::-1]]
    roots, _, _ = roots_of(c)
    assert match_zeros(roots, 1 / roots).max_distance <= 1e-10
    assert match_zeros(roots, np.conj(roots)).max_distance <= 1e-10


@given(st.lists(st.floats(0.1, 10.0), min_size=3, max_size=65))
def test_roots_reproduce_coefficients(coeffs):
    c = np.array(coeffs)
    roots, res, _ = roots_of(c)
    assert np.all(res <= 1e-8)
    rebuilt = c[-1] * np.poly(roots)[::-1]
    scale = np.max(np.abs(c))
    assert np.max(np.abs(rebuilt - c)) <= 1e-6 * scale


def test_deterministic():
    w = enumerate_sector_weights(ModelSpec("blume-capel", 0.6, 2, 2, lam=0.1))
    a, b = find_roots(w), find_roots(w)
    assert a.to_csv() == b.to_csv()


def test_origin_zeros_are_kept():
    model = ModelSpec("potts", 0.5, 1, 3, q=3)
    w = SectorWeights(model, 0, 1, np.array([0.0, 0.0, 2.0, 1.0]))
    zs = find_roots(w)
    assert len(zs) == 3
    assert sorted(abs(v) for v in zs.values)[:2] == [0.0, 0.0]
    assert min(abs(v + 2) for v in zs.values) <= 1e-14


def test_non_convergence_reports_all_roots(monkeypatch):
    import leeyang.polyroots as pr

    monkeypatch.setattr(pr, "MAX_SWEEPS", 0)
    monkeypatch.setattr(pr, "_newton_polish", lambda c, z, steps=3: z)
    w = enumerate_sector_weights(ModelSpec("ising", 0.5, 2, 3))
    with pytest.raises(RootFindingError) as info:
        find_roots(w)
    assert len(info.value.zeros) == 9
    assert info.value.failed


def test_residual_definition():
    c = np.array([2.0, -3.0, 1.0])  # (z-1)(z-2)
    assert residual(c, 1.0) <= 1e-15
    z = 3.0
    assert residual(c, z) == pytest.approx(2.0 / (3.0 * 9.0))


def test_polynomial_layout():
    w = enumerate_sector_weights(ModelSpec("ising", 0.5, 1, 3))
    assert len(polynomial(w, "u")) == 4
    assert len(polynomial(w, "z")) == 7
    with pytest.raises(ValueError):
        polynomial(enumerate_sector_weights(ModelSpec("potts", 0.5, 1, 3, q=3)), "u")


def test_match_examples():
    a = np.array([1 + 1j, 2, -1j, 0.5])
    rep = match_zeros(a, a)
    assert rep.max_distance == 0 and not rep.unmatched_a and not rep.unmatched_b
    b = np.r_[a + 1e-3, 10, -10]
    rep = match_zeros(a, b)
    assert len(rep.unmatched_b) == 2 and not rep.unmatched_a
    assert rep.max_distance == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        match_zeros(ZeroSet([Zero(1j, "u")]), ZeroSet([Zero(1j, "z")]))


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(finite, finite, st.floats(0, 1e3), st.sampled_from(["exact", "predicted"]),
                          st.one_of(st.none(), st.sampled_from(["plus-minus", "D-O"])),
                          st.one_of(st.none(), st.integers(-10**6, 10**6))), max_size=20))
def test_csv_and_json_roundtrip(rows):
    zs = ZeroSet([Zero(complex(a, b), "z", r, s, p, k) for a, b, r, s, p, k in rows])
    assert ZeroSet.from_csv(zs.to_csv()) == zs
    assert ZeroSet.from_json(zs.to_json()) == zs


def test_cmath_sanity_of_fixture():
    for u in ISING_L2_J08:
        assert abs(abs(u) - 1) < 1e-12
        assert math.isfinite(cmath.phase(u))
