"""Metastable free energies ``beta f_l(z)`` from the low-temperature and
large-q expansions, with analytic z-derivatives.

Remainders are dropped; each evaluation carries the order of what was
dropped (``budget``) so callers can set tolerances.  ``h = log z`` uses the
principal branch; every other term is written in powers of ``z``.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import brentq

from leeyang.errors import DomainError, RangeError
from leeyang.models import ModelKind, ModelSpec

TAU_STAB = 1e-12


@dataclass(frozen=True)
class PhaseLabel:
    name: str
    degeneracy: int = 1

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FreeEnergyEval:
    phase: PhaseLabel
    z: complex
    f: complex
    df_dz: complex
    truncation_order: str
    budget: float
    trusted: bool = True


@dataclass(frozen=True)
class EffectiveFreeEnergy:
    base: FreeEnergyEval
    volume: int

    @property
    def f_eff(self) -> complex:
        return self.base.f - math.log(self.base.phase.degeneracy) / self.volume


def _check_z(z):
    if np.ndim(z) == 0 and z == 0:
        raise DomainError("free energies are singular at z = 0")


# -- Ising -------------------------------------------------------------------

def _ising(J, d, z, name, log):
    eps = math.exp(-4 * d * J)
    if name == "plus":
        return -log(z) - d * J - eps * z**-2, -1 / z + 2 * eps * z**-3
    if name == "minus":
        return log(z) - d * J - eps * z**2, 1 / z - 2 * eps * z
    raise ValueError(f"unknown Ising phase {name!r}")


def ising_f(J: float, d: int, z: complex, phase: str) -> FreeEnergyEval:
    """``beta f_{+/-} = -/+ h - dJ - exp(-4dJ) z**-/+2``."""
    _check_z(z)
    f, df = _ising(J, d, complex(z), phase, cmath.log)
    return FreeEnergyEval(
        PhaseLabel(phase, 1), complex(z), f, df,
        truncation_order="O(exp(-4(2d-1)J))", budget=math.exp(-4 * (2 * d - 1) * J),
        trusted=math.exp(-J) <= 0.2,
    )


# -- Blume-Capel (d = 2) -----------------------------------------------------

def _blume_capel(J, lam, z, name, log):
    a = math.exp(-lam - 4 * J)
    b = math.exp(-2 * lam - 6 * J)
    if name == "plus":
        f = -(log(z) + lam + a / z + 2 * b * z**-2)
        df = -(1 / z - a * z**-2 - 4 * b * z**-3)
        return f, df
    if name == "minus":
        f = -(-log(z) + lam + a * z + 2 * b * z**2)
        df = -(-1 / z + a + 4 * b * z)
        return f, df
    if name == "zero":
        c = math.exp(lam - 4 * J)
        e = math.exp(2 * lam - 6 * J)
        f = -((z + 1 / z) * c + 2 * (z**2 + z**-2) * e)
        df = -((1 - z**-2) * c + 2 * (2 * z - 2 * z**-3) * e)
        return f, df
    raise ValueError(f"unknown Blume-Capel phase {name!r}")


def blume_capel_f(J: float, lam: float, z: complex, phase: str, d: int = 2) -> FreeEnergyEval:
    if d != 2:
        raise RangeError("Blume-Capel expansions are implemented for d = 2 only")
    _check_z(z)
    f, df = _blume_capel(J, lam, complex(z), phase, cmath.log)
    return FreeEnergyEval(
        PhaseLabel(phase, 1), complex(z), f, df,
        truncation_order="O(exp(-8J))", budget=math.exp(-8 * J), trusted=math.exp(-J) <= 0.2,
    )


# -- Potts -------------------------------------------------------------------

def _potts(q, J, d, z, name, log):
    Q = q - 1 + z
    if name == "D":
        E = math.exp(J) - 1
        kappa = d * (2 * d - 1)
        Q2, Q3 = q - 1 + z**2, q - 1 + z**3
        r2 = Q2 / Q**2
        dr2 = 2 * z / Q**2 - 2 * Q2 / Q**3
        r3 = Q3 / Q**3
        dr3 = 3 * z**2 / Q**3 - 3 * Q3 / Q**4
        f = -(log(Q) + d * E * r2 + kappa * E**2 * r3 - (kappa + 0.5) * E**2 * r2**2)
        df = -(1 / Q + d * E * dr2 + kappa * E**2 * dr3 - (kappa + 0.5) * E**2 * 2 * r2 * dr2)
        return f, df
    A = math.exp(-2 * d * J)
    B = d * math.exp(-(4 * d - 1) * J)
    C = (d + 0.5) * math.exp(-4 * d * J)
    eJ = math.exp(J)
    Q2 = q - 1 + z**2
    S = Q**2 + eJ * Q2
    dS = 2 * Q + 2 * eJ * z
    if name == "M":
        f = -(log(z) + d * J + A * (Q / z - 1) + B * S * z**-2 - C * Q**2 * z**-2)
        df = -(1 / z - A * (q - 1) * z**-2 + B * (dS * z**-2 - 2 * S * z**-3)
               - C * (2 * Q * z**-2 - 2 * Q**2 * z**-3))
        return f, df
    if name == "O":
        f = -(d * J + A * (Q - 1) + B * S - C * Q**2)
        df = -(A + B * dS - 2 * C * Q)
        return f, df
    raise ValueError(f"unknown Potts phase {name!r}")


def _potts_trusted(q, J, d):
    return q >= 20 and abs(math.exp(d * J) / q - 1) <= 0.3


def potts_f(q: int, J: float, d: int, z: complex, phase: str) -> FreeEnergyEval:
    _check_z(z)
    if abs(q - 1 + complex(z)) < 1e-12 * q:
        raise DomainError(f"z = {z} is at the branch point z = -(q-1) of the disordered phase")
    f, df = _potts(q, J, d, complex(z), phase, cmath.log)
    if phase == "D":
        order, budget = f"O(q^-(3-4/{d}))", q ** -(3 - 4 / d)
    else:
        order, budget = f"O(q^-(3-2/{d}))", q ** -(3 - 2 / d)
    deg = q - 1 if phase == "O" else 1
    return FreeEnergyEval(PhaseLabel(phase, deg), complex(z), f, df, order, budget, _potts_trusted(q, J, d))


def potts_transition_J(q: int, d: int) -> float:
    """Coupling where the disordered and ordered expansions tie at z = 1."""
    def gap(J):
        return (_potts(q, J, d, 1.0 + 0j, "D", cmath.log)[0] - _potts(q, J, d, 1.0 + 0j, "O", cmath.log)[0]).real
    # bracket e^{dJ}/q in [1, 2]; outside it one of the two expansions breaks down
    J0 = math.log(q) / d
    return brentq(gap, J0, J0 + math.log(2.0) / d, xtol=1e-15)


# -- phase systems -----------------------------------------------------------

class PhaseSystem:
    """All phases of one model at fixed couplings.

    ``variable`` is the fugacity variable exact zeros are reported in: ``u``
    for Ising (``u = z**2``), ``z`` otherwise.
    """

    def __init__(self, kind, J, d=2, lam=0.0, q=2):
        self.kind = ModelKind(kind)
        self.J, self.d, self.lam, self.q = float(J), int(d), float(lam), int(q)
        if self.kind is ModelKind.ISING:
            self.labels = (PhaseLabel("plus"), PhaseLabel("minus"))
            self._fn = lambda z, name, log: _ising(self.J, self.d, z, name, log)
            self.budget = math.exp(-4 * (2 * self.d - 1) * self.J)
            self.trusted = math.exp(-self.J) <= 0.2
        elif self.kind is ModelKind.BLUME_CAPEL:
            if self.d != 2:
                raise RangeError("Blume-Capel expansions are implemented for d = 2 only")
            self.labels = (PhaseLabel("plus"), PhaseLabel("minus"), PhaseLabel("zero"))
            self._fn = lambda z, name, log: _blume_capel(self.J, self.lam, z, name, log)
            self.budget = math.exp(-8 * self.J)
            self.trusted = math.exp(-self.J) <= 0.2
        else:
            self.labels = (PhaseLabel("D"), PhaseLabel("M"), PhaseLabel("O", self.q - 1))
            self._fn = lambda z, name, log: _potts(self.q, self.J, self.d, z, name, log)
            self.budget = self.q ** -(3 - 4 / self.d)
            self.trusted = _potts_trusted(self.q, self.J, self.d)
        self.names = tuple(lab.name for lab in self.labels)
        self._deg = {lab.name: lab.degeneracy for lab in self.labels}

    @classmethod
    def from_model(cls, model: ModelSpec) -> "PhaseSystem":
        return cls(model.kind, model.J, model.d, model.lam, model.q)

    @property
    def variable(self) -> str:
        return "u" if self.kind is ModelKind.ISING else "z"

    @property
    def symmetric(self) -> bool:
        """Whether the model has the h <-> -h symmetry."""
        return self.kind in (ModelKind.ISING, ModelKind.BLUME_CAPEL)

    def in_domain(self, z):
        """Whether the expansions are usable at ``z`` (array-aware).

        Low-temperature series are in ``exp(-4dJ) z**+/-2`` (Ising) or
        ``exp(-4J) z**+/-1`` (Blume-Capel); they are cut off once that
        parameter exceeds 1/4.  The Potts series are in powers of
        ``(q - 1 + z**k) / (q - 1 + z)**k``, small only while ``|z|**2 <= q - 1``.
        """
        z = np.asarray(z, dtype=complex)
        ok = z != 0
        r = np.abs(np.where(ok, z, 1.0))
        r = np.maximum(r, 1.0 / r)
        if self.kind is ModelKind.ISING:
            ok &= math.exp(-4 * self.d * self.J) * r**2 <= 0.25
        elif self.kind is ModelKind.BLUME_CAPEL:
            ok &= math.exp(-4 * self.J + abs(self.lam)) * r <= 0.25
        else:
            ok &= np.abs(z) ** 2 <= self.q - 1
        return ok if ok.ndim else bool(ok)

    def degeneracy(self, name: str) -> int:
        return self._deg[name]

    def pairs(self) -> list[tuple[str, str]]:
        return list(combinations(self.names, 2))

    def level(self, pair, V: int) -> float:
        """Offset of ``Re(f_l - f_m)`` on the finite-volume coexistence curve."""
        return math.log(self._deg[pair[0]] / self._deg[pair[1]]) / V

    def f_df(self, name: str, z: complex) -> tuple[complex, complex]:
        return self._fn(z, name, cmath.log)

    def f_df_array(self, name: str, z: np.ndarray):
        return self._fn(np.asarray(z, dtype=complex), name, np.log)

    def evaluate(self, name: str, z: complex) -> FreeEnergyEval:
        if self.kind is ModelKind.ISING:
            return ising_f(self.J, self.d, z, name)
        if self.kind is ModelKind.BLUME_CAPEL:
            return blume_capel_f(self.J, self.lam, z, name)
        return potts_f(self.q, self.J, self.d, z, name)

    def effective(self, z: complex, V: int) -> list[EffectiveFreeEnergy]:
        return [EffectiveFreeEnergy(self.evaluate(n, z), V) for n in self.names]

    def re_eff(self, z: complex, V: int | None) -> dict[str, float]:
        """``Re f_eff`` of every phase (``V=None``: infinite volume)."""
        out = {}
        for n in self.names:
            f = self._fn(z, n, cmath.log)[0].real
            if V:
                f -= math.log(self._deg[n]) / V
            out[n] = f
        return out

    def __repr__(self):
        return f"PhaseSystem({self.kind.value}, J={self.J}, d={self.d}, lam={self.lam}, q={self.q})"


@dataclass(frozen=True)
class StabilityReport:
    stable: tuple[str, ...]
    gaps: dict


def classify_stability(evals, tol: float = TAU_STAB) -> StabilityReport:
    """Phases whose ``Re f_eff`` is within ``tol`` of the minimum."""
    if len(evals) < 2:
        raise ValueError("need at least two phases")
    re = {}
    for e in evals:
        if isinstance(e, EffectiveFreeEnergy):
            re[e.base.phase.name] = e.f_eff.real
        else:
            re[e.phase.name] = e.f.real
    fmin = min(re.values())
    gaps = {k: v - fmin for k, v in re.items()}
    return StabilityReport(tuple(k for k, g in gaps.items() if g <= tol), gaps)


TABLE_COLUMNS = ("z_re", "z_im", "phase", "f_re", "f_im", "df_re", "df_im", "gap")


def evaluation_table_csv(system: PhaseSystem, zs, V: int | None = None) -> str:
    """One row per (z, phase); ``gap`` is ``Re f_eff`` minus the minimum over phases."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for z in zs:
        z = complex(z)
        re = system.re_eff(z, V)
        fmin = min(re.values())
        for n in system.names:
            f, df = system.f_df(n, z)
            w.writerow([repr(z.real), repr(z.imag), n, repr(f.real), repr(f.imag),
                        repr(df.real), repr(df.imag), repr(re[n] - fmin)])
    return buf.getvalue()
