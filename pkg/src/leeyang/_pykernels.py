"""Pure-Python/NumPy implementations of the hot kernels.

Signatures mirror :mod:`leeyang._ckernels`; :mod:`leeyang._backend` picks
one at import time.
"""

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1
_EPS = 2.0**-53


def sector_histogram(n_states, site_m, site_n2, bond_val, bonds, n_sites, chunk=1 << 15):
    """Count all ``n_states**n_sites`` configurations by (m, bond sum, n2).

    Returns ``(counts, m_lo, b_lo)`` where ``counts[m - m_lo, b - b_lo, n2]``
    is the exact number of configurations with those totals.
    """
    site_m = np.asarray(site_m, dtype=np.int64)
    site_n2 = np.asarray(site_n2, dtype=np.int64)
    bond_val = np.asarray(bond_val, dtype=np.int64)
    bonds = np.asarray(bonds, dtype=np.int64)
    n_bonds = len(bonds)
    m_lo, m_hi = n_sites * site_m.min(), n_sites * site_m.max()
    b_lo, b_hi = n_bonds * bond_val.min(), n_bonds * bond_val.max()
    n2_hi = n_sites * site_n2.max()
    shape = (int(m_hi - m_lo + 1), int(b_hi - b_lo + 1), int(n2_hi + 1))
    flat = np.zeros(shape[0] * shape[1] * shape[2], dtype=np.int64)

    total = n_states**n_sites
    powers = n_states ** np.arange(n_sites, dtype=np.int64)
    bx, by = bonds[:, 0], bonds[:, 1]
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % n_states
        m = site_m[digits].sum(axis=1)
        n2 = site_n2[digits].sum(axis=1)
        b = bond_val[digits[:, bx], digits[:, by]].sum(axis=1)
        key = ((m - m_lo) * shape[1] + (b - b_lo)) * shape[2] + n2
        flat += np.bincount(key, minlength=flat.size)
    return flat.reshape(shape), int(m_lo), int(b_lo)


# -- error-free transformations ------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def comp_horner(coeffs, z):
    """Compensated Horner value of ``sum coeffs[i] z**i``.

    Accurate as if computed in twice the working precision.
    """
    x, y = z.real, z.imag
    c = coeffs
    n = len(c) - 1
    sr, si = c[n].real, c[n].imag
    rr = ri = 0.0
    for i in range(n - 1, -1, -1):
        p1, e1 = _two_prod(sr, x)
        p2, e2 = _two_prod(si, y)
        p3, e3 = _two_prod(sr, y)
        p4, e4 = _two_prod(si, x)
        p5, e5 = _two_sum(p1, -p2)
        p6, e6 = _two_sum(p3, p4)
        sr, s1 = _two_sum(p5, c[i].real)
        si, s2 = _two_sum(p6, c[i].imag)
        er = (e1 - e2) + e5 + s1
        ei = (e3 + e4) + e6 + s2
        rr, ri = rr * x - ri * y + er, rr * y + ri * x + ei
    return complex(sr + rr, si + ri)


def _horner_ratio(c, z):
    """Return (p/p', |p|, rounding bound of p) evaluated in a stable orientation."""
    n = len(c) - 1
    if abs(z) <= 1.0:
        p = c[n]
        dp = 0j
        bound = abs(c[n])
        az = abs(z)
        for i in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[i]
            bound = bound * az + abs(c[i])
        if dp == 0:
            return complex("nan"), abs(p), bound * 4 * n * _EPS
        return p / dp, abs(p), bound * 4 * n * _EPS
    w = 1.0 / z
    aw = abs(w)
    r = c[0]
    dr = 0j
    bound = abs(c[0])
    for i in range(1, n + 1):
        dr = dr * w + r
        r = r * w + c[i]
        bound = bound * aw + abs(c[i])
    den = n * r - w * dr
    if den == 0:
        return complex("nan"), abs(r), bound * 4 * n * _EPS
    return z * r / den, abs(r), bound * 4 * n * _EPS


def aberth(coeffs, roots, tol, max_sweeps):
    """Gauss-Seidel Aberth-Ehrlich iteration, updating ``roots`` in place.

    Returns ``(sweeps, converged)``; a root is frozen once its correction is
    below ``tol * |root|`` or its value is under the rounding bound.
    """
    c = [complex(v) for v in coeffs]
    z = [complex(v) for v in roots]
    n = len(z)
    done = [False] * n
    sweeps = 0
    while sweeps < max_sweeps and not all(done):
        sweeps += 1
        for k in range(n):
            if done[k]:
                continue
            zk = z[k]
            ratio, pabs, bound = _horner_ratio(c, zk)
            if pabs <= bound:
                done[k] = True
                continue
            s = 0j
            for j in range(n):
                if j != k:
                    s += 1.0 / (zk - z[j])
            w = ratio / (1.0 - ratio * s)
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                continue
            z[k] = zk - w
            if abs(w) <= tol * abs(z[k]):
                done[k] = True
    for k in range(n):
        roots[k] = z[k]
    return sweeps, np.array(done, dtype=bool)
