# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels in :mod:`leeyang._pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fma, isfinite, sqrt

cnp.import_array()

cdef double _EPS = 2.0 ** -53


def sector_histogram(int n_states, site_m, site_n2, bond_val, bonds, int n_sites, chunk=None):
    """Odometer enumeration with incremental energy updates."""
    cdef long[::1] sm = np.ascontiguousarray(site_m, dtype=np.int64)
    cdef long[::1] sn = np.ascontiguousarray(site_n2, dtype=np.int64)
    cdef long[:, ::1] bv = np.ascontiguousarray(bond_val, dtype=np.int64)
    bonds_arr = np.ascontiguousarray(bonds, dtype=np.int64)
    cdef Py_ssize_t n_bonds = bonds_arr.shape[0]
    cdef long m_lo = n_sites * min(site_m), m_hi = n_sites * max(site_m)
    cdef long b_lo = n_bonds * np.min(bond_val), b_hi = n_bonds * np.max(bond_val)
    cdef long n2_hi = n_sites * max(site_n2)
    cdef Py_ssize_t nm = m_hi - m_lo + 1, nb = b_hi - b_lo + 1, nn = n2_hi + 1

    # incidence lists with multiplicity
    deg = np.zeros(n_sites, dtype=np.int64)
    for bx, by in bonds_arr:
        deg[bx] += 1
        deg[by] += 1
    cdef long[::1] start = np.concatenate(([0], np.cumsum(deg))).astype(np.int64)
    cdef long[::1] nbr = np.empty(2 * n_bonds, dtype=np.int64)
    fill = np.array(start[:n_sites], dtype=np.int64)
    for bx, by in bonds_arr:
        nbr[fill[bx]] = by
        fill[bx] += 1
        nbr[fill[by]] = bx
        fill[by] += 1

    counts_np = np.zeros((nm, nb, nn), dtype=np.int64)
    cdef long[:, :, ::1] counts = counts_np
    cdef long[::1] digit = np.zeros(n_sites, dtype=np.int64)
    cdef long m = n_sites * sm[0], n2 = n_sites * sn[0], b = n_bonds * bv[0, 0]
    cdef long x, old, new, j, delta
    cdef long s = n_states
    while True:
        counts[m - m_lo, b - b_lo, n2] += 1
        x = 0
        while x < n_sites and digit[x] == s - 1:
            # carry: s-1 -> 0
            old = s - 1
            new = 0
            delta = 0
            for j in range(start[x], start[x + 1]):
                delta += bv[new, digit[nbr[j]]] - bv[old, digit[nbr[j]]]
            b += delta
            m += sm[new] - sm[old]
            n2 += sn[new] - sn[old]
            digit[x] = new
            x += 1
        if x == n_sites:
            break
        old = digit[x]
        new = old + 1
        delta = 0
        for j in range(start[x], start[x + 1]):
            delta += bv[new, digit[nbr[j]]] - bv[old, digit[nbr[j]]]
        b += delta
        m += sm[new] - sm[old]
        n2 += sn[new] - sn[old]
        digit[x] = new
    return counts_np, int(m_lo), int(b_lo)


cdef inline void _two_sum(double a, double b, double* s, double* e) noexcept nogil:
    cdef double ss = a + b
    cdef double bb = ss - a
    s[0] = ss
    e[0] = (a - (ss - bb)) + (b - bb)


cdef inline void _two_prod(double a, double b, double* p, double* e) noexcept nogil:
    cdef double pp = a * b
    p[0] = pp
    e[0] = fma(a, b, -pp)


cdef double complex _comp_horner(double complex[::1] c, double complex z) noexcept nogil:
    cdef Py_ssize_t n = c.shape[0] - 1, i
    cdef double x = z.real, y = z.imag
    cdef double sr = c[n].real, si = c[n].imag, rr = 0.0, ri = 0.0, t
    cdef double p1, e1, p2, e2, p3, e3, p4, e4, p5, e5, p6, e6, s1, s2, er, ei
    for i in range(n - 1, -1, -1):
        _two_prod(sr, x, &p1, &e1)
        _two_prod(si, y, &p2, &e2)
        _two_prod(sr, y, &p3, &e3)
        _two_prod(si, x, &p4, &e4)
        _two_sum(p1, -p2, &p5, &e5)
        _two_sum(p3, p4, &p6, &e6)
        _two_sum(p5, c[i].real, &sr, &s1)
        _two_sum(p6, c[i].imag, &si, &s2)
        er = (e1 - e2) + e5 + s1
        ei = (e3 + e4) + e6 + s2
        t = rr * x - ri * y + er
        ri = rr * y + ri * x + ei
        rr = t
    return (sr + rr) + 1j * (si + ri)


def comp_horner(coeffs, z):
    """Compensated Horner value of ``sum coeffs[i] z**i``."""
    cdef double complex[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    return complex(_comp_horner(c, z))


cdef inline double _cabs(double complex z) noexcept nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef int _horner_ratio(double complex[::1] c, double complex z,
                       double complex* ratio, double* pabs, double* bound) noexcept nogil:
    cdef Py_ssize_t n = c.shape[0] - 1, i
    cdef double complex p, dp, w, den
    cdef double az, bnd
    if _cabs(z) <= 1.0:
        p = c[n]
        dp = 0
        bnd = _cabs(c[n])
        az = _cabs(z)
        for i in range(n - 1, -1, -1):
            dp = dp * z + p
            p = p * z + c[i]
            bnd = bnd * az + _cabs(c[i])
        pabs[0] = _cabs(p)
        bound[0] = bnd * 4 * n * _EPS
        if dp == 0:
            return 0
        ratio[0] = p / dp
        return 1
    w = 1.0 / z
    az = _cabs(w)
    p = c[0]
    dp = 0
    bnd = _cabs(c[0])
    for i in range(1, n + 1):
        dp = dp * w + p
        p = p * w + c[i]
        bnd = bnd * az + _cabs(c[i])
    pabs[0] = _cabs(p)
    bound[0] = bnd * 4 * n * _EPS
    den = n * p - w * dp
    if den == 0:
        return 0
    ratio[0] = z * p / den
    return 1


def aberth(coeffs, roots, double tol, int max_sweeps):
    """Gauss-Seidel Aberth-Ehrlich iteration, updating ``roots`` in place."""
    cdef double complex[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double complex[::1] z = roots
    cdef Py_ssize_t n = z.shape[0], k, j
    done_np = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] done = done_np
    cdef int sweeps = 0, remaining = n, ok
    cdef double complex ratio, s, w, zk
    cdef double pabs, bound
    with nogil:
        while sweeps < max_sweeps and remaining > 0:
            sweeps += 1
            for k in range(n):
                if done[k]:
                    continue
                zk = z[k]
                ok = _horner_ratio(c, zk, &ratio, &pabs, &bound)
                if pabs <= bound:
                    done[k] = 1
                    remaining -= 1
                    continue
                if not ok:
                    continue
                s = 0
                for j in range(n):
                    if j != k:
                        s = s + 1.0 / (zk - z[j])
                w = ratio / (1.0 - ratio * s)
                if not (isfinite(w.real) and isfinite(w.imag)):
                    continue
                z[k] = zk - w
                if _cabs(w) <= tol * _cabs(z[k]):
                    done[k] = 1
                    remaining -= 1
    return sweeps, done_np.astype(bool)
