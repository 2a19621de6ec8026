"""Roots of fugacity polynomials and zero-set bookkeeping."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from leeyang._backend import kernels
from leeyang.errors import RootFindingError
from leeyang.models import ModelKind, SectorWeights

RESIDUAL_TOL = 1e-8
MAX_SWEEPS = 200
STEP_TOL = 1e-13
# fixed irrational offset of the initial angles, in units of the spacing
_ROTATION = (math.sqrt(5.0) - 1.0) / 2.0

CSV_COLUMNS = ("variable", "re", "im", "residual", "source", "pair", "k")


@dataclass
class Zero:
    z: complex
    variable: str = "z"
    residual: float = 0.0
    source: str = "exact"
    pair: str | None = None
    k: int | None = None


@dataclass
class ZeroSet:
    zeros: list[Zero] = field(default_factory=list)

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    @property
    def values(self) -> np.ndarray:
        return np.array([zr.z for zr in self.zeros], dtype=complex)

    @property
    def variable(self) -> str | None:
        return self.zeros[0].variable if self.zeros else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for zr in self.zeros:
            w.writerow([
                zr.variable,
                repr(float(zr.z.real)),
                repr(float(zr.z.imag)),
                repr(float(zr.residual)),
                zr.source,
                zr.pair or "",
                "" if zr.k is None else str(zr.k),
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ZeroSet":
        rows = csv.DictReader(io.StringIO(text))
        out = []
        for r in rows:
            out.append(Zero(
                z=complex(float(r["re"]), float(r["im"])),
                variable=r["variable"],
                residual=float(r["residual"]),
                source=r["source"],
                pair=r["pair"] or None,
                k=int(r["k"]) if r["k"] else None,
            ))
        return cls(out)

    def to_json(self) -> str:
        items = []
        for zr in self.zeros:
            d = asdict(zr)
            d["re"], d["im"] = float(zr.z.real), float(zr.z.imag)
            del d["z"]
            items.append(d)
        return json.dumps({"zeros": items}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ZeroSet":
        data = json.loads(text)
        return cls([
            Zero(z=complex(d["re"], d["im"]), variable=d["variable"], residual=d["residual"],
                 source=d["source"], pair=d["pair"], k=d["k"])
            for d in data["zeros"]
        ])


def polynomial(weights: SectorWeights, variable: str = "z") -> np.ndarray:
    """Ascending coefficients of ``z**-m_min * Z`` (or of ``P(u)`` for ``u = z**2``)."""
    w = np.asarray(weights.weights, dtype=float)
    if variable == "u":
        if weights.step != 2:
            raise ValueError("variable u requires sectors with step 2 (Ising)")
        return w.copy()
    if weights.step == 1:
        return w.copy()
    out = np.zeros((len(w) - 1) * weights.step + 1)
    out[:: weights.step] = w
    return out


def default_variable(weights: SectorWeights) -> str:
    return "u" if weights.model.kind is ModelKind.ISING else "z"


def residual(coeffs, z: complex) -> float:
    """``|P(z)| / (||P||_inf * max(1, |z|)**deg)`` with compensated evaluation."""
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    if abs(z) <= 1.0:
        return abs(kernels.comp_horner(c / scale, complex(z))) / 1.0
    return abs(kernels.comp_horner(c[::-1] / scale, 1.0 / complex(z)))


def _newton_polish(c: np.ndarray, z: complex, steps: int = 3) -> complex:
    """Newton steps with compensated values; keep a step only if it helps."""
    n = len(c) - 1
    dc = c[1:] * np.arange(1, n + 1)
    best, best_res = z, residual(c, z)
    for _ in range(steps):
        if abs(z) <= 1.0:
            p = kernels.comp_horner(c, z)
            dp = np.polyval(dc[::-1], z)
            if dp == 0:
                break
            znew = z - p / dp
        else:
            w = 1.0 / z
            r = kernels.comp_horner(c[::-1], w)
            rc = c[::-1]
            dr = np.polyval((rc[1:] * np.arange(1, n + 1))[::-1], w)
            den = n * r - w * dr
            if den == 0:
                break
            znew = z - z * r / den
        res = residual(c, znew)
        if res > best_res:
            break
        z = complex(znew)
        best, best_res = z, res
    return best


def roots_of(coeffs, tol: float = RESIDUAL_TOL) -> tuple[np.ndarray, np.ndarray, int]:
    """All roots of ``sum coeffs[i] x**i``; returns (roots, residuals, sweeps)."""
    c = np.asarray(coeffs, dtype=complex)
    if len(c) < 2:
        raise ValueError("polynomial degree must be >= 1")
    if c[-1] == 0 or c[0] == 0:
        raise ValueError("strip zero leading/trailing coefficients first")
    c = c / np.max(np.abs(c))
    D = len(c) - 1
    radius = abs(c[0] / c[-1]) ** (1.0 / D)
    angles = 2.0 * math.pi * (np.arange(D) + _ROTATION) / D
    roots = radius * np.exp(1j * angles)
    sweeps, _ = kernels.aberth(c, roots, STEP_TOL, MAX_SWEEPS)
    roots = np.array([_newton_polish(c, complex(r)) for r in roots])
    res = np.array([residual(c, r) for r in roots])
    return roots, res, sweeps


def find_roots(weights: SectorWeights, variable: str | None = None) -> ZeroSet:
    """Exact zeros of the partition function in ``z`` (or ``u = z**2``)."""
    variable = variable or default_variable(weights)
    c = polynomial(weights, variable)
    nz = np.nonzero(c)[0]
    lo, hi = nz[0], nz[-1]
    c = c[lo: hi + 1]
    origin = [0j] * int(lo)
    roots, res, _ = roots_of(c)
    zs = ZeroSet([Zero(z=complex(r), variable=variable, residual=float(e)) for r, e in zip(roots, res)]
                 + [Zero(z=o, variable=variable) for o in origin])
    failed = [i for i, e in enumerate(res) if not e <= RESIDUAL_TOL]
    if failed:
        raise RootFindingError(
            f"{len(failed)} roots failed to converge; residuals "
            + ", ".join(f"{res[i]:.2e}" for i in failed[:8]),
            zs,
            failed,
        )
    return zs


@dataclass
class MatchReport:
    pairs: list[tuple[int, int, float]]
    unmatched_a: list[int]
    unmatched_b: list[int]

    @property
    def distances(self) -> np.ndarray:
        return np.array([p[2] for p in self.pairs])

    @property
    def max_distance(self) -> float:
        return float(self.distances.max()) if self.pairs else 0.0

    @property
    def mean_distance(self) -> float:
        return float(self.distances.mean()) if self.pairs else 0.0

    def to_dict(self) -> dict:
        return {
            "max_distance": self.max_distance,
            "mean_distance": self.mean_distance,
            "n_pairs": len(self.pairs),
            "unmatched_a": self.unmatched_a,
            "unmatched_b": self.unmatched_b,
        }


def match_zeros(a, b) -> MatchReport:
    """Greedy mutual-nearest pairing: repeatedly join the closest free pair."""
    va = a.values if isinstance(a, ZeroSet) else np.asarray(a, dtype=complex)
    vb = b.values if isinstance(b, ZeroSet) else np.asarray(b, dtype=complex)
    if isinstance(a, ZeroSet) and isinstance(b, ZeroSet) and a.variable and b.variable:
        if a.variable != b.variable:
            raise ValueError(f"zero sets use different variables: {a.variable} vs {b.variable}")
    if len(va) == 0 or len(vb) == 0:
        return MatchReport([], list(range(len(va))), list(range(len(vb))))
    dist = np.abs(va[:, None] - vb[None, :])
    order = np.lexsort((np.tile(np.arange(len(vb)), len(va)), np.repeat(np.arange(len(va)), len(vb)),
                        dist.ravel()))
    used_a = np.zeros(len(va), bool)
    used_b = np.zeros(len(vb), bool)
    pairs = []
    n_target = min(len(va), len(vb))
    for flat in order:
        i, j = divmod(int(flat), len(vb))
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        pairs.append((i, j, float(dist[i, j])))
        if len(pairs) == n_target:
            break
    pairs.sort()
    return MatchReport(pairs, [int(i) for i in np.nonzero(~used_a)[0]], [int(j) for j in np.nonzero(~used_b)[0]])
