import cmath

import numpy as np
import pytest

from conftest import random_z
from leeyang.errors import NumericalError, RangeError
from leeyang.models import ModelSpec, enumerate_sector_weights, evaluate_Z
from leeyang.transfer import build_transfer, evaluate_Z_tm, extract_coefficients, log_Z_tm


@pytest.mark.parametrize("L", [2, 5, 16])
def test_ising_chain_dimension_and_trace(L, rng):
    model = ModelSpec("ising", 0.7, 1, L)
    assert build_transfer(model, 1.0).dim == 2
    w = enumerate_sector_weights(model)
    for z in random_z(rng):
        ref = evaluate_Z(w, z)
        assert abs(evaluate_Z_tm(model, z) - ref) <= 1e-10 * abs(ref)


def test_ising_2x2_trace_matches_configuration_sum():
    model = ModelSpec("ising", 0.9, 2, 2)
    w = enumerate_sector_weights(model)
    z = 0.6 - 0.9j
    assert abs(evaluate_Z_tm(model, z) - evaluate_Z(w, z)) <= 1e-12 * abs(evaluate_Z(w, z))


def test_real_symmetric_at_one_and_positive_for_real_z():
    model = ModelSpec("blume-capel", 0.6, 2, 3, lam=0.2)
    T = build_transfer(model, 1.0).entries
    np.testing.assert_allclose(T, T.T, rtol=1e-15)
    assert np.all(np.abs(T.imag) == 0)
    T2 = build_transfer(model, 1.7).entries
    assert np.all(T2.real > 0) and np.all(T2.imag == 0)


def test_examples_against_enumeration():
    model = ModelSpec("ising", 0.5, 2, 4)
    w = enumerate_sector_weights(model)
    assert evaluate_Z_tm(model, 1.0) == pytest.approx(evaluate_Z(w, 1.0), rel=1e-11)
    bc = ModelSpec("blume-capel", 0.5, 2, 3, lam=-0.1)
    z = 0.7 + 0.4j
    ref = evaluate_Z(enumerate_sector_weights(bc), z)
    assert abs(evaluate_Z_tm(bc, z) - ref) <= 1e-10 * abs(ref)


def test_conjugation_and_methods_agree(rng):
    model = ModelSpec("potts", 0.8, 2, 3, q=3)
    for z in random_z(rng, 4):
        a = evaluate_Z_tm(model, z)
        assert evaluate_Z_tm(model, np.conj(z)) == pytest.approx(np.conj(a), rel=1e-12)
        assert evaluate_Z_tm(model, z, method="eig") == pytest.approx(a, rel=1e-10)


def test_log_mode_matches_and_survives_overflow():
    model = ModelSpec("ising", 0.8, 2, 4)
    z = 0.9 + 0.2j
    assert cmath.exp(log_Z_tm(model, z)) == pytest.approx(evaluate_Z_tm(model, z), rel=1e-11)
    big = ModelSpec("ising", 30.0, 2, 6)
    with pytest.raises(NumericalError, match="log"):
        evaluate_Z_tm(big, 1.0)
    lz = log_Z_tm(big, 1.0)
    # ground states dominate: log Z ~ 2 d V J + log 2
    assert lz.real == pytest.approx(2 * 36 * 30.0 + np.log(2), rel=1e-12)


def test_range_errors():
    with pytest.raises(RangeError):
        build_transfer(ModelSpec("ising", 0.5, 3, 2), 1.0)
    with pytest.raises(RangeError):
        build_transfer(ModelSpec("blume-capel", 0.5, 2, 8), 1.0)


@pytest.mark.parametrize("spec", [
    ("ising", 0.8, 2, 2, 0.0, 2),
    ("ising", 0.4, 2, 4, 0.0, 2),
    ("blume-capel", 0.6, 2, 3, 0.1, 2),
    ("potts", 0.7, 2, 3, 0.0, 3),
    ("potts", 0.6, 1, 9, 0.0, 4),
])
def test_extracted_coefficients_match_enumeration(spec):
    model = ModelSpec(*spec)
    got = extract_coefficients(model)
    ref = enumerate_sector_weights(model)
    assert got.m_min == ref.m_min and got.step == ref.step
    scale = np.max(ref.weights)
    assert np.max(np.abs(got.weights - ref.weights)) <= 1e-10 * scale
    if model.kind.value != "potts":
        assert np.max(np.abs(got.weights - got.weights[::-1])) <= 1e-10 * scale


def test_potts_sum_of_weights_is_Z1():
    model = ModelSpec("potts", 0.6, 2, 4, q=3)
    w = extract_coefficients(model, workers=2)
    assert w.weights.sum() == pytest.approx(evaluate_Z_tm(model, 1.0).real, rel=1e-10)


def test_deterministic_across_worker_counts():
    model = ModelSpec("blume-capel", 0.6, 2, 3, lam=0.1)
    a = extract_coefficients(model, workers=1).weights
    b = extract_coefficients(model, workers=4).weights
    np.testing.assert_array_equal(a, b)
