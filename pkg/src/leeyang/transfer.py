"""Row-to-row transfer matrices for d = 1 and d = 2 periodic lattices.

``Z(z) = trace(T(z)**L)``.  Each row's single-row weight (within-row bonds,
on-site terms and field) is split symmetrically between the two matrix
indices, so ``T(1)`` is real symmetric.
"""

from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from leeyang._backend import threads
from leeyang.errors import ConditioningError, NumericalError, RangeError
from leeyang.models import ModelKind, ModelSpec, SectorWeights

DEFAULT_DIM_CAP = 2187
IMAG_TOL = 1e-8


@dataclass
class TransferOperator:
    model: ModelSpec
    z: complex
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _row_tables(model: ModelSpec):
    """Per-row log weight, per-row m, and row-pair log weight at h = 0."""
    alpha = np.array(model.alphabet)
    width = model.L if model.d == 2 else 1
    rows = np.array(list(itertools.product(range(model.n_states), repeat=width)), dtype=np.int64)
    spins = alpha[rows]

    if model.kind is ModelKind.ISING:
        def bond(a, b):
            return model.J * a * b
        site = np.zeros_like(spins, dtype=float)
        m = spins.sum(axis=1)
    elif model.kind is ModelKind.BLUME_CAPEL:
        def bond(a, b):
            return -model.J * (a - b) ** 2
        site = model.lam * spins.astype(float) ** 2
        m = spins.sum(axis=1)
    else:
        def bond(a, b):
            return model.J * (a == b)
        site = np.zeros_like(spins, dtype=float)
        m = (spins == 1).sum(axis=1)

    intra = site.sum(axis=1)
    if width > 1:
        intra = intra + bond(spins, np.roll(spins, -1, axis=1)).sum(axis=1)
    inter = bond(spins[:, None, :], spins[None, :, :]).sum(axis=2)
    return intra.astype(float), m.astype(np.int64), inter.astype(float)


def _check(model: ModelSpec, dim_cap: int):
    if model.d not in (1, 2):
        raise RangeError(f"transfer matrices support d in {{1, 2}}, got d={model.d}")
    dim = model.n_states ** (model.L if model.d == 2 else 1)
    if dim > dim_cap:
        raise RangeError(f"transfer-matrix dimension {dim} exceeds cap {dim_cap}")


def build_transfer(model: ModelSpec, z: complex, dim_cap: int = DEFAULT_DIM_CAP) -> TransferOperator:
    _check(model, dim_cap)
    intra, m, inter = _row_tables(model)
    log_z = cmath.log(complex(z))
    half = np.exp(0.5 * intra + 0.5 * m * log_z)
    entries = half[:, None] * np.exp(inter) * half[None, :]
    return TransferOperator(model=model, z=complex(z), entries=entries)


def _matrix_power_trace(T: np.ndarray, n: int) -> complex:
    P = T.copy()
    for _ in range(n - 1):
        P = P @ T
    return complex(np.trace(P))


def evaluate_Z_tm(model: ModelSpec, z: complex, method: str = "power",
                  dim_cap: int = DEFAULT_DIM_CAP) -> complex:
    """Periodic partition function ``trace(T(z)**L)``.

    ``method="eig"`` sums ``L``-th powers of the eigenvalues instead.
    """
    T = build_transfer(model, z, dim_cap).entries
    with np.errstate(over="ignore", invalid="ignore"):
        if method == "eig":
            value = complex(np.sum(np.linalg.eigvals(T) ** model.L))
        else:
            value = _matrix_power_trace(T, model.L)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericalError("transfer-matrix product overflowed; use log_Z_tm (log-scaled mode)")
    return value


def log_Z_tm(model: ModelSpec, z: complex, dim_cap: int = DEFAULT_DIM_CAP) -> complex:
    """``log Z`` with periodic renormalization of the matrix power.

    The imaginary part is the principal phase of Z.
    """
    T = build_transfer(model, z, dim_cap).entries
    s0 = np.max(np.abs(T))
    T = T / s0
    log_scale = model.L * math.log(s0)
    P = T.copy()
    for _ in range(model.L - 1):
        P = P @ T
        s = np.max(np.abs(P))
        P /= s
        log_scale += math.log(s)
    return log_scale + cmath.log(complex(np.trace(P)))


def _polynomial_layout(model: ModelSpec):
    """(degree, sample -> z map, prefactor power) for the fugacity polynomial."""
    V = model.V
    if model.kind is ModelKind.ISING:
        return V, (lambda k, N: cmath.exp(1j * math.pi * k / N)), V
    if model.kind is ModelKind.BLUME_CAPEL:
        return 2 * V, (lambda k, N: cmath.exp(2j * math.pi * k / N)), V
    return V, (lambda k, N: cmath.exp(2j * math.pi * k / N)), 0


def extract_coefficients(model: ModelSpec, dim_cap: int = DEFAULT_DIM_CAP,
                         workers: int | None = None) -> SectorWeights:
    """Recover sector weights from unit-circle samples by an inverse DFT.

    Ising samples use ``u = z**2`` so the polynomial has degree ``V``.
    """
    _check(model, dim_cap)
    D, z_of, shift = _polynomial_layout(model)
    N = D + 1
    zs = [z_of(k, N) for k in range(N)]

    def sample(z):
        return evaluate_Z_tm(model, z, dim_cap=dim_cap) * z**shift

    with ThreadPoolExecutor(max_workers=workers or threads()) as pool:
        values = np.array(list(pool.map(sample, zs)), dtype=complex)

    coeffs = np.fft.fft(values) / N
    scale = np.max(np.abs(coeffs))
    ratio = float(np.max(np.abs(coeffs.imag)) / scale)
    if ratio > IMAG_TOL:
        raise ConditioningError(f"recovered coefficients have imaginary part ratio {ratio:.3e}", ratio)
    real = coeffs.real
    if np.min(real) < -IMAG_TOL * scale:
        ratio = float(-np.min(real) / scale)
        raise ConditioningError(f"recovered coefficient negative beyond tolerance (ratio {ratio:.3e})", ratio)
    real = np.where(real < 0, 0.0, real)
    m_min, _, step = model.m_range
    return SectorWeights(model=model, m_min=m_min, step=step, weights=real)
