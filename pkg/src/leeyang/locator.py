"""Asymptotic zero locations from the metastable free energies.

A zero of ``sum_l q_l exp(-V f_l)`` away from multiple points sits where two
effective free energies tie in real part,

    Re f_l - Re f_m = log(q_l / q_m) / V          (the coexistence curve)

with every other phase strictly higher, and where the relative phase is an
odd multiple of pi,

    V Im(f_l - f_m) = pi (mod 2 pi).

The curve is traced by predictor-corrector continuation, the phase is
accumulated along it, and zeros are read off at the odd-pi crossings.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from leeyang.errors import ConvergenceError, DegenerateGradientError
from leeyang.freeenergy import TAU_STAB, PhaseSystem
from leeyang.polyroots import Zero, ZeroSet

TAU_CURVE = 1e-10
SEED_TOL = 1e-6
DS_MAX = 1e-2
DS_MIN = 1e-12
DEFAULT_WINDOW = (0.05, 20.0)
DEFAULT_GRID = (64, 256)


def pair_label(pair) -> str:
    return f"{pair[0]}-{pair[1]}"


@dataclass
class CoexistenceCurve:
    pair: tuple[str, str]
    level: float
    V: int
    z: np.ndarray
    phase_accum: np.ndarray
    stable: np.ndarray
    arc_length: np.ndarray
    closed: bool
    seed: complex
    diagnostic: str | None = None
    system: PhaseSystem | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.z)

    @property
    def winding(self) -> float:
        return float(self.phase_accum[-1] - self.phase_accum[0])

    @property
    def fully_stable(self) -> bool:
        return bool(np.all(self.stable))

    def csv_rows(self):
        label = pair_label(self.pair)
        for i, (z, p, s) in enumerate(zip(self.z, self.phase_accum, self.stable)):
            yield [label, i, repr(float(z.real)), repr(float(z.imag)), repr(float(p)), int(bool(s))]

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "level": self.level,
            "V": self.V,
            "closed": self.closed,
            "seed": [self.seed.real, self.seed.imag],
            "diagnostic": self.diagnostic,
            "re": [float(v) for v in self.z.real],
            "im": [float(v) for v in self.z.imag],
            "phase_accum": [float(v) for v in self.phase_accum],
            "stable": [bool(v) for v in self.stable],
        }


@dataclass
class MultiplePoint:
    z: complex
    phases: tuple[str, ...]
    exclusion_radius: float

    def to_dict(self) -> dict:
        return {"re": self.z.real, "im": self.z.imag, "phases": list(self.phases),
                "exclusion_radius": self.exclusion_radius}


def multiple_points_json(points) -> str:
    return json.dumps({"multiple_points": [p.to_dict() for p in points]}, sort_keys=True)


# -- helpers -----------------------------------------------------------------

def _pair_fn(system: PhaseSystem, pair):
    a, b = pair

    def F(z):
        fa, da = system.f_df(a, z)
        fb, db = system.f_df(b, z)
        return fa - fb, da - db
    return F


def _is_stable(system, pair, z, V, tol=TAU_STAB) -> bool:
    re = system.re_eff(z, V)
    ref = re[pair[0]]
    return all(re[k] - ref > tol for k in system.names if k not in pair)


def _correct(F, z, level, tol, max_iter=10):
    """Newton along the gradient of ``Re F`` until ``|Re F - level| <= tol``."""
    for it in range(max_iter + 1):
        Fz, dF = F(z)
        g = Fz.real - level
        if abs(g) <= tol:
            return z, Fz, dF, it
        if it == max_iter:
            return None
        a = abs(dF)
        if a < 1e-14:
            raise DegenerateGradientError(f"gradient vanishes near z = {z}", z)
        z = z - g * dF.conjugate() / (a * a)
    return None


def _unwrapped_increment(V, Fa, dFa, Fb, dFb, za, zb):
    """``V * d Im F`` between neighbours, exact up to a 2 pi multiple fixed by the trapezoid."""
    trap = V * (0.5 * (dFa + dFb) * (zb - za)).imag
    exact = V * (Fb.imag - Fa.imag)
    return exact - 2 * math.pi * round((exact - trap) / (2 * math.pi))


def _seg_distance(p, a, b):
    """Distance from point ``p`` to segments ``a[i] -> b[i]`` (vectorized)."""
    ab = b - a
    L2 = np.abs(ab) ** 2
    t = np.where(L2 > 0, ((p - a) * np.conj(ab)).real / np.where(L2 > 0, L2, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(a + t * ab - p)


# -- tracing -----------------------------------------------------------------

def _trace_direction(system, pair, V, F, level, z0, F0, dF0, p0, sign, window, ds0, ds_max, tol, max_points):
    rmin, rmax = window
    zs, ps = [z0], [p0]
    z, Fz, dF = z0, F0, dF0
    ds = ds0
    arc = 0.0
    closed = False
    diagnostic = None
    while len(zs) < max_points:
        t = sign * 1j * dF.conjugate() / abs(dF)
        res = _correct(F, z + ds * t, level, tol)
        if res is not None:
            zn, Fn, dFn, iters = res
            if abs(dFn) < 1e-14:
                raise DegenerateGradientError(f"gradient vanishes near z = {zn}", zn)
            tn = sign * 1j * dFn.conjugate() / abs(dFn)
            step = zn - z
            ok = (tn * t.conjugate()).real > 0.5 and (step * t.conjugate()).real > 0 and iters <= 4
            if ok:
                incr = _unwrapped_increment(V, Fz, dF, Fn, dFn, z, zn)
                ok = abs(incr) <= math.pi / 8
        else:
            ok = False
        if not ok:
            ds *= 0.5
            if ds < DS_MIN:
                diagnostic = f"step underflow at z = {z:.12g}"
                break
            continue

        seg = abs(step)
        if arc > 3 * ds_max and len(zs) > 8:
            d_close = _seg_distance(z0, np.array([z]), np.array([zn]))[0]
            if d_close <= 0.25 * seg:
                closing = _unwrapped_increment(V, Fz, dF, F0, dF0, z, z0)
                zs.append(z0)
                ps.append(ps[-1] + closing)
                closed = True
                break
        zs.append(zn)
        ps.append(ps[-1] + incr)
        arc += seg
        z, Fz, dF = zn, Fn, dFn
        if not (rmin <= abs(zn) <= rmax and system.in_domain(zn)):
            break
        if iters < 2:
            ds = min(2 * ds, ds_max)
    else:
        diagnostic = f"point cap {max_points} reached"
    return zs, ps, closed, diagnostic


def trace_curve(system: PhaseSystem, pair, V: int, z0: complex, window=DEFAULT_WINDOW,
                ds0: float = 1e-3, ds_max: float = DS_MAX, tol: float = TAU_CURVE,
                max_points: int = 200_000) -> CoexistenceCurve:
    """Continue the coexistence curve of ``pair`` through ``z0``.

    Orientation is the direction in which ``Im(f_l - f_m)`` increases.  Open
    curves are traced both ways from the seed until they leave ``window``.
    """
    pair = tuple(pair)
    level = system.level(pair, V)
    F = _pair_fn(system, pair)
    F0, _ = F(complex(z0))
    if abs(F0.real - level) > SEED_TOL:
        raise ValueError(f"seed residual {abs(F0.real - level):.2e} exceeds {SEED_TOL}")
    res = _correct(F, complex(z0), level, tol)
    if res is None:
        raise ConvergenceError(f"could not correct seed {z0} onto the curve")
    z0, F0, dF0, _ = res
    p0 = V * F0.imag
    fz, fp, closed, diag = _trace_direction(system, pair, V, F, level, z0, F0, dF0, p0, +1,
                                            window, ds0, ds_max, tol, max_points)
    if closed:
        zs, ps = fz, fp
    else:
        bz, bp, _, bdiag = _trace_direction(system, pair, V, F, level, z0, F0, dF0, p0, -1,
                                            window, ds0, ds_max, tol, max_points)
        zs = bz[::-1] + fz[1:]
        ps = bp[::-1] + fp[1:]
        diag = "; ".join(d for d in (diag, bdiag) if d) or None
    zs = np.array(zs, dtype=complex)
    ps = np.array(ps, dtype=float)
    arc = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(zs)))))
    stable = np.array([_is_stable(system, pair, z, V) for z in zs], dtype=bool)
    return CoexistenceCurve(pair, level, V, zs, ps, stable, arc, closed, complex(z0), diag, system)


def seed_scan(system: PhaseSystem, pair, V: int, grid=DEFAULT_GRID, window=DEFAULT_WINDOW,
              stable_only: bool = True, ds: float = 1e-3) -> list[complex]:
    """Sign changes of ``Re(f_l - f_m) - level`` on a polar grid, bisected to seeds.

    Radii are log-spaced over the window; the angular grid contains the real
    axis (``theta = 0`` and ``-pi``) so symmetric curves get real seeds.
    """
    pair = tuple(pair)
    n_r, n_t = grid
    level = system.level(pair, V)
    radii = np.geomspace(window[0], window[1], n_r)
    thetas = -math.pi + 2 * math.pi * np.arange(n_t) / n_t

    def g_polar(logr, th):
        z = np.exp(logr + 1j * th)
        fa = system.f_df_array(pair[0], z)[0]
        fb = system.f_df_array(pair[1], z)[0]
        return (fa - fb).real - level

    LR, TH = np.meshgrid(np.log(radii), thetas, indexing="ij")
    with np.errstate(all="ignore"):
        G = g_polar(LR, TH)
    sgn = np.where(system.in_domain(np.exp(LR + 1j * TH)), np.sign(G), 0.0)

    # edges as (logr_a, th_a, logr_b, th_b)
    edges = []
    ir, it = np.nonzero(sgn[:-1, :] * sgn[1:, :] < 0)
    for i, j in zip(ir, it):
        edges.append((LR[i, j], TH[i, j], LR[i + 1, j], TH[i + 1, j]))
    jn = (np.arange(n_t) + 1) % n_t
    ir, it = np.nonzero(sgn * sgn[:, jn] < 0)
    for i, j in zip(ir, it):
        tb = TH[i, jn[j]] if jn[j] else math.pi
        edges.append((LR[i, j], TH[i, j], LR[i, j], tb))
    if not edges:
        return []
    E = np.array(edges)
    a_lr, a_th, b_lr, b_th = E.T.copy()
    with np.errstate(all="ignore"):
        ga = g_polar(a_lr, a_th)
        for _ in range(60):
            m_lr, m_th = 0.5 * (a_lr + b_lr), 0.5 * (a_th + b_th)
            gm = g_polar(m_lr, m_th)
            left = np.sign(gm) == np.sign(ga)
            a_lr = np.where(left, m_lr, a_lr)
            a_th = np.where(left, m_th, a_th)
            ga = np.where(left, gm, ga)
            b_lr = np.where(left, b_lr, m_lr)
            b_th = np.where(left, b_th, m_th)
        m_lr, m_th = 0.5 * (a_lr + b_lr), 0.5 * (a_th + b_th)
        gm = g_polar(m_lr, m_th)
    seeds = []
    for lr, th, gv in zip(m_lr, m_th, gm):
        z = cmath.rect(math.exp(lr), th)
        if not abs(gv) <= SEED_TOL or not system.in_domain(z):
            continue
        if th == 0.0 or th == -math.pi or th == math.pi:
            z = complex(z.real, 0.0)
        if stable_only and not _is_stable(system, pair, z, V):
            continue
        seeds.append(z)
    seeds.sort(key=lambda z: (z.imag != 0.0, cmath.phase(z), abs(z)))
    kept: list[complex] = []
    for z in seeds:
        if all(abs(z - k) > 10 * ds for k in kept):
            kept.append(z)
    return kept


def trace_pair(system: PhaseSystem, pair, V: int, grid=DEFAULT_GRID, window=DEFAULT_WINDOW,
               ds0: float = 1e-3, ds_max: float = DS_MAX) -> list[CoexistenceCurve]:
    """Trace every component of one pair's coexistence set that has a stable seed."""
    curves: list[CoexistenceCurve] = []
    for seed in seed_scan(system, pair, V, grid, window):
        covered = False
        for c in curves:
            if np.min(_seg_distance(seed, c.z[:-1], c.z[1:])) <= 1e-3:
                covered = True
                break
        if covered:
            continue
        curves.append(trace_curve(system, pair, V, seed, window, ds0, ds_max))
    curves.sort(key=lambda c: (cmath.phase(c.seed), abs(c.seed)))
    return curves


# -- multiple points ---------------------------------------------------------

def find_multiple_points(system: PhaseSystem, phases, V: int, seed: complex, c_delta: float = 1.0,
                         d: int | None = None, tol: float = 1e-10, max_iter: int = 50) -> MultiplePoint:
    """Newton in the plane for ``Re f_eff`` equal across three phases."""
    l, m, k = phases
    F1 = _pair_fn(system, (l, m))
    F2 = _pair_fn(system, (l, k))
    lv1, lv2 = system.level((l, m), V), system.level((l, k), V)
    z = complex(seed)
    for _ in range(max_iter):
        a, da = F1(z)
        b, db = F2(z)
        g = np.array([a.real - lv1, b.real - lv2])
        if np.max(np.abs(g)) <= tol:
            break
        jac = np.array([[da.real, -da.imag], [db.real, -db.imag]])
        try:
            dx, dy = np.linalg.solve(jac, -g)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian at {z}") from exc
        z = z + complex(dx, dy)
        if not math.isfinite(abs(z)):
            break
    else:
        a, _ = F1(z)
        b, _ = F2(z)
        if max(abs(a.real - lv1), abs(b.real - lv2)) > tol:
            raise ConvergenceError(f"multiple-point Newton did not converge from {seed}")
    a, _ = F1(z)
    b, _ = F2(z)
    if not (math.isfinite(abs(z)) and max(abs(a.real - lv1), abs(b.real - lv2)) <= tol):
        raise ConvergenceError(f"multiple-point Newton diverged from {seed}")
    d = d or system.d
    L = V ** (1.0 / d)
    order = tuple(n for n in system.names if n in phases)
    return MultiplePoint(z, order, c_delta * L ** (-(d - 1)))


def locate_multiple_points(system: PhaseSystem, curves, V: int, c_delta: float = 1.0,
                           d: int | None = None) -> list[MultiplePoint]:
    """Triple points where a traced curve changes stability."""
    found: list[MultiplePoint] = []
    for c in curves:
        flips = np.nonzero(c.stable[:-1] != c.stable[1:])[0]
        for i in flips:
            zs = 0.5 * (c.z[i] + c.z[i + 1])
            re = system.re_eff(zs, V)
            others = [k for k in system.names if k not in c.pair]
            if not others:
                continue
            k = min(others, key=lambda n: re[n])
            try:
                mp = find_multiple_points(system, (c.pair[0], c.pair[1], k), V, zs, c_delta, d)
            except ConvergenceError:
                continue
            if all(abs(mp.z - f.z) > 1e-7 for f in found):
                found.append(mp)
    found.sort(key=lambda p: (cmath.phase(p.z), abs(p.z)))
    return found


# -- quantization and refinement ---------------------------------------------

@dataclass
class QuantizeResult:
    zeros: ZeroSet
    excluded_unstable: ZeroSet
    excluded_near_multiple: ZeroSet


def _two_term_residual(system, pair, V, z, k):
    F = _pair_fn(system, pair)
    Fz, _ = F(z)
    ln_ratio = math.log(system.degeneracy(pair[0]) / system.degeneracy(pair[1]))
    re = V * Fz.real - ln_ratio
    im = math.remainder(V * Fz.imag - (2 * k + 1) * math.pi, 2 * math.pi)
    return math.hypot(re, im)


def quantize_zeros(curve: CoexistenceCurve, V: int | None = None, multiple_points=()) -> QuantizeResult:
    """Points where the accumulated phase crosses an odd multiple of pi.

    Positions are linear interpolations between curve points.
    """
    V = V or curve.V
    label = pair_label(curve.pair)
    kept, unstable, near = [], [], []
    p = curve.phase_accum
    for i in range(len(p) - 1):
        pa, pb = p[i], p[i + 1]
        if pa == pb:
            continue
        lo, hi = min(pa, pb), max(pa, pb)
        n_lo = math.ceil((lo - math.pi) / (2 * math.pi))
        n_hi = math.floor((hi - math.pi) / (2 * math.pi))
        for n in range(n_lo, n_hi + 1):
            target = math.pi + 2 * math.pi * n
            if target == pa:
                continue  # counted with the previous segment
            t = (target - pa) / (pb - pa)
            z = complex(curve.z[i] + t * (curve.z[i + 1] - curve.z[i]))
            res = _two_term_residual(curve.system, curve.pair, V, z, n) if curve.system else 0.0
            zr = Zero(z=z, variable="z", residual=res, source="predicted", pair=label, k=n)
            if not (curve.stable[i] and curve.stable[i + 1]):
                unstable.append(zr)
            elif any(abs(z - mp.z) < mp.exclusion_radius for mp in multiple_points):
                near.append(zr)
            else:
                kept.append(zr)
    return QuantizeResult(ZeroSet(kept), ZeroSet(unstable), ZeroSet(near))


def refine_two_term(system: PhaseSystem, pair, V: int, z_guess: complex, k: int,
                    tol: float = 1e-12, max_iter: int = 50) -> complex:
    """Newton on ``V (f_l - f_m) - log(q_l/q_m) - i pi (2k + 1) = 0``.

    The imaginary part is unwrapped continuously from ``z_guess`` so the
    branch ``k`` is kept.
    """
    F = _pair_fn(system, pair)
    ln_ratio = math.log(system.degeneracy(pair[0]) / system.degeneracy(pair[1]))
    target = (2 * k + 1) * math.pi
    z = complex(z_guess)
    Fz, dF = F(z)
    shift = 2 * math.pi * round((target - V * Fz.imag) / (2 * math.pi))
    spacing = math.pi / max(V * abs(dF), 1e-300)
    G = complex(V * Fz.real - ln_ratio, V * Fz.imag + shift - target)
    for _ in range(max_iter):
        floor = max(tol, 64 * 2.0**-52 * V * (abs(Fz) + 1))
        if abs(G) <= floor:
            break
        dz = -G / (V * dF)
        zn = z + dz
        Fn, dFn = F(zn)
        predicted = V * Fz.imag + shift + V * (0.5 * (dF + dFn) * dz).imag
        shift += 2 * math.pi * round((predicted - V * Fn.imag - shift) / (2 * math.pi))
        z, Fz, dF = zn, Fn, dFn
        G = complex(V * Fz.real - ln_ratio, V * Fz.imag + shift - target)
        if not math.isfinite(abs(z)) or abs(z - z_guess) > 4 * spacing:
            raise ConvergenceError(f"two-term refinement left the basin of k={k} near {z_guess}")
    else:
        if abs(G) > max(tol, 64 * 2.0**-52 * V * (abs(Fz) + 1)):
            raise ConvergenceError(f"two-term refinement did not converge near {z_guess}")
    return z


# -- density -----------------------------------------------------------------

def zero_density(system: PhaseSystem, pair, z: complex, V: int) -> float:
    """Zeros per unit arc length: ``V |d(f_l - f_m)/dz| / (2 pi)``."""
    _, dF = _pair_fn(system, pair)(complex(z))
    return V * abs(dF) / (2 * math.pi)


def density_profile(curve: CoexistenceCurve):
    """(arc length, density, cumulative integral) along a traced curve.

    Each segment is integrated by Simpson's rule through the curve midpoint;
    segment arc length uses Richardson-extrapolated chords.
    """
    system, pair, V = curve.system, curve.pair, curve.V
    F = _pair_fn(system, pair)
    z = curve.z
    rho = np.array([V * abs(F(zz)[1]) / (2 * math.pi) for zz in z])
    s = np.zeros(len(z))
    cum = np.zeros(len(z))
    for i in range(len(z) - 1):
        za, zb = z[i], z[i + 1]
        res = _correct(F, 0.5 * (za + zb), curve.level, TAU_CURVE)
        zm = res[0] if res is not None else 0.5 * (za + zb)
        c_full = abs(zb - za)
        c_half = abs(zm - za) + abs(zb - zm)
        length = (4 * c_half - c_full) / 3
        rm = V * abs(F(zm)[1]) / (2 * math.pi)
        s[i + 1] = s[i] + length
        cum[i + 1] = cum[i] + length * (rho[i] + 4 * rm + rho[i + 1]) / 6
    return s, rho, cum


# -- Blume-Capel critical fields ---------------------------------------------

@dataclass(frozen=True)
class BlumeCapelCriticals:
    J: float
    lam_minus: float
    lam_plus: float

    def delta(self, theta: float, lam: float) -> float:
        """``Re beta f_+/- - Re beta f_0`` on the unit circle."""
        return _bc_delta(self.J, theta, lam)

    def theta_c(self, lam: float) -> float | None:
        """Splitting angle in (0, pi); ``None`` outside ``[lam_minus, lam_plus]``."""
        if lam < self.lam_minus or lam > self.lam_plus:
            return None
        if lam == self.lam_plus:
            return 0.0
        if lam == self.lam_minus:
            return math.pi
        a, b = 0.0, math.pi
        fa = self.delta(a, lam)
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = self.delta(m, lam)
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
            if b - a <= 1e-15:
                break
        return 0.5 * (a + b)


def _bc_delta(J, theta, lam):
    s = PhaseSystem("blume-capel", J, 2, lam)
    z = cmath.exp(1j * theta)
    return s.f_df("plus", z)[0].real - s.f_df("zero", z)[0].real


def blume_capel_criticals(J: float) -> BlumeCapelCriticals:
    """Fields where the 0 phase first touches (theta = pi) and leaves (theta = 0) the unit circle."""
    def root(theta):
        w = 4 * math.exp(-4 * J) + 0.1
        return brentq(lambda lam: _bc_delta(J, theta, lam), -w, w, xtol=1e-15)
    return BlumeCapelCriticals(J, root(math.pi), root(0.0))


# -- full pipeline -----------------------------------------------------------

@dataclass
class Prediction:
    system: PhaseSystem
    V: int
    curves: list[CoexistenceCurve]
    multiple_points: list[MultiplePoint]
    zeros: ZeroSet
    excluded_unstable: ZeroSet
    excluded_near_multiple: ZeroSet
    refine_failures: int = 0

    def in_variable(self, zs: ZeroSet | None = None) -> ZeroSet:
        """Zeros in the system's fugacity variable (``u = z**2`` for Ising)."""
        zs = self.zeros if zs is None else zs
        if self.system.variable == "z":
            return zs
        out = []
        for zr in zs:
            z = zr.z
            if z.real > 0 or (z.real == 0 and z.imag > 0):
                out.append(Zero(z=z * z, variable="u", residual=zr.residual, source=zr.source,
                                pair=zr.pair, k=zr.k))
        out.sort(key=lambda zr: (cmath.phase(zr.z), abs(zr.z)))
        return ZeroSet(out)


def predict(system: PhaseSystem, V: int, grid=DEFAULT_GRID, window=DEFAULT_WINDOW, c_delta: float = 1.0,
            d: int | None = None, refine: bool = True, ds0: float = 1e-3, ds_max: float = DS_MAX) -> Prediction:
    """Seeds -> curves -> multiple points -> quantized (and refined) zeros."""
    curves = []
    for pair in system.pairs():
        curves.extend(trace_pair(system, pair, V, grid, window, ds0, ds_max))
    mps = locate_multiple_points(system, curves, V, c_delta, d)
    kept, unstable, near = [], [], []
    failures = 0
    for c in curves:
        q = quantize_zeros(c, V, mps)
        unstable.extend(q.excluded_unstable)
        near.extend(q.excluded_near_multiple)
        for zr in q.zeros:
            if refine:
                try:
                    z = refine_two_term(system, c.pair, V, zr.z, zr.k)
                except ConvergenceError:
                    failures += 1
                    kept.append(zr)
                    continue
                zr = Zero(z=z, variable="z", residual=_two_term_residual(system, c.pair, V, z, zr.k),
                          source="predicted", pair=zr.pair, k=zr.k)
                if not _is_stable(system, c.pair, z, V):
                    unstable.append(zr)
                    continue
                if any(abs(z - mp.z) < mp.exclusion_radius for mp in mps):
                    near.append(zr)
                    continue
            kept.append(zr)

    def order(zs):
        return ZeroSet(sorted(zs, key=lambda zr: (zr.pair or "", cmath.phase(zr.z), abs(zr.z))))
    return Prediction(system, V, curves, mps, order(kept), order(unstable), order(near), failures)
