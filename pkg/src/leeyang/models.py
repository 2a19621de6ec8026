"""Spin models on periodic hypercubic lattices and the enumeration oracle.

Conventions
-----------
beta is absorbed into the couplings, so ``J``, ``lam`` and ``h`` are already
dimensionless.  The fugacity is ``z = exp(h)``.

Every site ``x`` is bonded to ``x + e_a`` for each axis ``a``, giving exactly
``d * V`` bonds.  For ``L = 2`` this counts each neighbouring pair twice (once
per direction); the transfer-matrix engine uses the same convention.

Hamiltonians (``beta H``)::

    Ising        -J sum s_x s_y            - h sum s_x               s in {-1, +1}
    Blume-Capel  +J sum (s_x - s_y)**2     - sum (lam s_x**2 + h s_x) s in {-1, 0, +1}
    Potts        -J sum delta(s_x, s_y)    - h sum delta(s_x, 1)     s in {1..q}
"""

from __future__ import annotations

import cmath
import enum
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from leeyang._backend import kernels
from leeyang.errors import DomainError, InvalidConfigurationError, RangeError

DEFAULT_ENUMERATION_CAP = 20_000_000


class ModelKind(str, enum.Enum):
    ISING = "ising"
    BLUME_CAPEL = "blume-capel"
    POTTS = "potts"


@dataclass(frozen=True)
class ModelSpec:
    """Model, couplings and periodic lattice geometry."""

    kind: ModelKind
    J: float
    d: int
    L: int
    lam: float = 0.0
    q: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if not self.J > 0:
            raise ValueError(f"coupling J must be positive, got {self.J}")
        if self.d < 1:
            raise ValueError(f"dimension d must be >= 1, got {self.d}")
        if self.L < 2:
            raise ValueError(f"side length L must be >= 2, got {self.L}")
        if self.kind is ModelKind.POTTS and self.q < 2:
            raise ValueError(f"Potts q must be >= 2, got {self.q}")
        if self.L**self.d > 2**62:
            raise ValueError("volume L**d does not fit a machine integer")

    @property
    def V(self) -> int:
        return self.L**self.d

    @property
    def n_states(self) -> int:
        return {ModelKind.ISING: 2, ModelKind.BLUME_CAPEL: 3, ModelKind.POTTS: self.q}[self.kind]

    @property
    def alphabet(self) -> tuple[int, ...]:
        if self.kind is ModelKind.ISING:
            return (1, -1)
        if self.kind is ModelKind.BLUME_CAPEL:
            return (-1, 0, 1)
        return tuple(range(1, self.q + 1))

    @property
    def m_range(self) -> tuple[int, int, int]:
        """(m_min, m_max, step) of the field-conjugate quantum number."""
        V = self.V
        if self.kind is ModelKind.ISING:
            return (-V, V, 2)
        if self.kind is ModelKind.BLUME_CAPEL:
            return (-V, V, 1)
        return (0, V, 1)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "J": self.J, "d": self.d, "L": self.L}
        if self.kind is ModelKind.BLUME_CAPEL:
            out["lambda"] = self.lam
        if self.kind is ModelKind.POTTS:
            out["q"] = self.q
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        return cls(
            kind=ModelKind(data["kind"]),
            J=float(data["J"]),
            d=int(data["d"]),
            L=int(data["L"]),
            lam=float(data.get("lambda", 0.0)),
            q=int(data.get("q", 2)),
        )


def bonds(d: int, L: int) -> np.ndarray:
    """Bond multiset of the periodic lattice as an array of shape (d*V, 2).

    Site index is ``sum_a x_a * L**a``.
    """
    V = L**d
    coords = np.array(list(itertools.product(range(L), repeat=d)))[:, ::-1]
    index = (coords * (L ** np.arange(d))).sum(axis=1)
    order = np.argsort(index)
    coords = coords[order]
    out = []
    for a in range(d):
        shifted = coords.copy()
        shifted[:, a] = (shifted[:, a] + 1) % L
        nbr = (shifted * (L ** np.arange(d))).sum(axis=1)
        out.append(np.stack([np.arange(V), nbr], axis=1))
    return np.concatenate(out).astype(np.int64)


def _as_config(model: ModelSpec, config) -> np.ndarray:
    spins = np.asarray(config)
    if spins.ndim != 1:
        spins = spins.reshape(-1)
    if spins.shape[0] != model.V:
        raise InvalidConfigurationError(f"configuration has {spins.shape[0]} sites, expected V={model.V}")
    if not np.isin(spins, model.alphabet).all():
        raise InvalidConfigurationError(f"spin values outside alphabet {model.alphabet}")
    return spins.astype(np.int64)


def hamiltonian(model: ModelSpec, config, h: complex = 0.0) -> complex:
    """``beta H`` of one configuration at field ``h``."""
    s = _as_config(model, config)
    b = bonds(model.d, model.L)
    sx, sy = s[b[:, 0]], s[b[:, 1]]
    if model.kind is ModelKind.ISING:
        energy = -model.J * float(np.sum(sx * sy)) - h * float(s.sum())
    elif model.kind is ModelKind.BLUME_CAPEL:
        energy = model.J * float(np.sum((sx - sy) ** 2)) - model.lam * float(np.sum(s * s)) - h * float(s.sum())
    else:
        energy = -model.J * float(np.sum(sx == sy)) - h * float(np.sum(s == 1))
    if isinstance(h, complex):
        return complex(energy)
    return energy


@dataclass
class SectorWeights:
    """Zero-field Boltzmann weight of each field sector.

    ``Z(z) = sum_j weights[j] * z**(m_min + j*step)``.
    """

    model: ModelSpec
    m_min: int
    step: int
    weights: np.ndarray = field(repr=False)

    @property
    def m_values(self) -> np.ndarray:
        return self.m_min + self.step * np.arange(len(self.weights))

    @property
    def m_max(self) -> int:
        return self.m_min + self.step * (len(self.weights) - 1)

    def weight(self, m: int) -> float:
        j, r = divmod(m - self.m_min, self.step)
        if r or not 0 <= j < len(self.weights):
            return 0.0
        return float(self.weights[j])

    def to_json(self) -> str:
        return json.dumps(
            {
                "model": self.model.to_dict(),
                "m_min": self.m_min,
                "step": self.step,
                "weights": [float(w) for w in self.weights],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SectorWeights":
        data = json.loads(text)
        return cls(
            model=ModelSpec.from_dict(data["model"]),
            m_min=int(data["m_min"]),
            step=int(data["step"]),
            weights=np.array(data["weights"], dtype=float),
        )


def _kernel_tables(model: ModelSpec):
    alpha = np.array(model.alphabet)
    if model.kind is ModelKind.ISING:
        site_m = alpha
        site_n2 = np.zeros_like(alpha)
        bond_val = np.outer(alpha, alpha)
    elif model.kind is ModelKind.BLUME_CAPEL:
        site_m = alpha
        site_n2 = alpha * alpha
        bond_val = (alpha[:, None] - alpha[None, :]) ** 2
    else:
        site_m = (alpha == 1).astype(np.int64)
        site_n2 = np.zeros_like(alpha)
        bond_val = (alpha[:, None] == alpha[None, :]).astype(np.int64)
    return site_m, site_n2, bond_val


def enumerate_sector_weights(model: ModelSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> SectorWeights:
    """Exact sector weights by visiting every configuration.

    Configurations are binned by integer totals (m, bond sum, sum s**2) and
    the histogram is converted to weights with exactly rounded sums.
    """
    n_configs = model.n_states**model.V
    if n_configs > cap:
        raise RangeError(
            f"enumeration needs {model.n_states}^{model.V} = {n_configs} states, "
            f"above the cap of {cap} states"
        )
    site_m, site_n2, bond_val = _kernel_tables(model)
    counts, m_lo, b_lo = kernels.sector_histogram(
        model.n_states, site_m, site_n2, bond_val, bonds(model.d, model.L), model.V
    )
    b_vals = b_lo + np.arange(counts.shape[1])
    n2_vals = np.arange(counts.shape[2])
    if model.kind is ModelKind.BLUME_CAPEL:
        log_w = -model.J * b_vals[:, None] + model.lam * n2_vals[None, :]
    else:
        log_w = model.J * b_vals[:, None] + 0.0 * n2_vals[None, :]
    if np.max(log_w, initial=-np.inf) > 700:
        raise RangeError("sector weights overflow double precision; lower J or L")
    boltz = np.exp(log_w)

    m_min, m_max, step = model.m_range
    weights = np.zeros((m_max - m_min) // step + 1)
    for i in range(counts.shape[0]):
        m = m_lo + i
        nz = np.nonzero(counts[i])
        if len(nz[0]) == 0:
            continue
        terms = counts[i][nz].astype(float) * boltz[nz]
        weights[(m - m_min) // step] = math.fsum(terms)
    return SectorWeights(model=model, m_min=m_min, step=step, weights=weights)


def evaluate_Z(weights: SectorWeights, z: complex) -> complex:
    """``sum_m weights[m] z**m`` by Horner on ``z**-m_min * Z``."""
    z = complex(z)
    if z == 0 and weights.m_min < 0:
        raise DomainError("Z has negative powers of z; cannot evaluate at z = 0")
    zs = z**weights.step
    acc = 0j
    for w in weights.weights[::-1]:
        acc = acc * zs + w
    if weights.m_min == 0:
        return acc
    return acc * z**weights.m_min


def direct_sum(model: ModelSpec, z: complex, cap: int = 2_000_000) -> complex:
    """Configuration sum of ``exp(-beta H)`` at ``h = log z``; independent oracle.

    Evaluates the Hamiltonian of every configuration (vectorized), without
    sector binning.
    """
    n_configs = model.n_states**model.V
    if n_configs > cap:
        raise RangeError(f"direct sum over {n_configs} states exceeds cap {cap}")
    h = cmath.log(complex(z))
    alpha = np.array(model.alphabet)
    b = bonds(model.d, model.L)
    total = 0j
    chunk = 1 << 14
    powers = model.n_states ** np.arange(model.V, dtype=np.int64)
    for start in range(0, n_configs, chunk):
        idx = np.arange(start, min(start + chunk, n_configs), dtype=np.int64)
        s = alpha[(idx[:, None] // powers[None, :]) % model.n_states]
        sx, sy = s[:, b[:, 0]], s[:, b[:, 1]]
        if model.kind is ModelKind.ISING:
            energy = -model.J * (sx * sy).sum(1) - h * s.sum(1)
        elif model.kind is ModelKind.BLUME_CAPEL:
            energy = model.J * ((sx - sy) ** 2).sum(1) - model.lam * (s * s).sum(1) - h * s.sum(1)
        else:
            energy = -model.J * (sx == sy).sum(1) - h * (s == 1).sum(1)
        total += np.exp(-energy).sum()
    return complex(total)
