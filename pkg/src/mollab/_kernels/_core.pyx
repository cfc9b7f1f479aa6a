# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: periodic convolutions, double-difference sums,
and the finite-volume flux/update core.

Every function here has a pure-numpy twin in `fallback.py` with the same
signature and the same arithmetic order; the two are tested for agreement.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, fmax, fmin, pow, sqrt

cnp.import_array()


cdef inline Py_ssize_t wrap_idx(Py_ssize_t i, Py_ssize_t n) nogil:
    while i < 0:
        i += n
    while i >= n:
        i -= n
    return i


def conv1(const double[::1] x, const double[::1] w, const long[::1] off):
    """y[i] = sum_j w[j] * x[(i - off[j]) mod n]."""
    cdef Py_ssize_t n = x.shape[0], m = w.shape[0]
    cdef Py_ssize_t i, j, sh
    cdef double wj
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] y = out
    for j in range(m):
        wj = w[j]
        sh = wrap_idx(off[j], n)
        for i in range(sh):
            y[i] += wj * x[n - sh + i]
        for i in range(sh, n):
            y[i] += wj * x[i - sh]
    return out


def conv2(const double[:, ::1] x, const double[::1] w, const long[::1] off0, const long[::1] off1):
    # offset-outermost with two contiguous column segments per row; the
    # per-element accumulation order matches the fallback's roll-accumulate
    cdef Py_ssize_t n0 = x.shape[0], n1 = x.shape[1], m = w.shape[0]
    cdef Py_ssize_t i0, i1, j, s0, sh
    cdef double wj
    out = np.zeros((n0, n1), dtype=np.float64)
    cdef double[:, ::1] y = out
    for j in range(m):
        wj = w[j]
        sh = wrap_idx(off1[j], n1)
        for i0 in range(n0):
            s0 = wrap_idx(i0 - off0[j], n0)
            for i1 in range(sh):
                y[i0, i1] += wj * x[s0, n1 - sh + i1]
            for i1 in range(sh, n1):
                y[i0, i1] += wj * x[s0, i1 - sh]
    return out


def conv_st1(const double[:, ::1] x, const double[::1] w, const long[::1] offt, const long[::1] offx,
             bint wrap_time, Py_ssize_t t0, Py_ssize_t t1):
    """Space-time convolution of x[t, i]; output rows t0..t1-1.

    Time index wraps when wrap_time is set, otherwise the caller must pick
    t0/t1 so that every needed row exists.
    """
    cdef Py_ssize_t nt = x.shape[0], n = x.shape[1], m = w.shape[0]
    cdef Py_ssize_t t, i, j, tt
    cdef double acc
    out = np.empty((t1 - t0, n), dtype=np.float64)
    cdef double[:, ::1] y = out
    for t in range(t0, t1):
        for i in range(n):
            acc = 0.0
            for j in range(m):
                tt = t - offt[j]
                if wrap_time:
                    tt = wrap_idx(tt, nt)
                acc += w[j] * x[tt, wrap_idx(i - offx[j], n)]
            y[t - t0, i] = acc
    return out


def cet_g1(const double[::1] f, const double[::1] g, const double[::1] w, const long[::1] off):
    """G[i] = sum_j w[j] * (f[i-o_j] - f[i]) * (g[i-o_j] - g[i]), periodic."""
    cdef Py_ssize_t n = f.shape[0], m = w.shape[0]
    cdef Py_ssize_t i, j, k, sh
    cdef double wj
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] y = out
    for j in range(m):
        wj = w[j]
        sh = wrap_idx(off[j], n)
        for i in range(sh):
            k = n - sh + i
            y[i] += wj * (f[k] - f[i]) * (g[k] - g[i])
        for i in range(sh, n):
            k = i - sh
            y[i] += wj * (f[k] - f[i]) * (g[k] - g[i])
    return out


def cet_g2(const double[:, ::1] f, const double[:, ::1] g, const double[::1] w,
           const long[::1] off0, const long[::1] off1):
    cdef Py_ssize_t n0 = f.shape[0], n1 = f.shape[1], m = w.shape[0]
    cdef Py_ssize_t i0, i1, j, s0, sh, k1
    cdef double wj
    out = np.zeros((n0, n1), dtype=np.float64)
    cdef double[:, ::1] y = out
    for j in range(m):
        wj = w[j]
        sh = wrap_idx(off1[j], n1)
        for i0 in range(n0):
            s0 = wrap_idx(i0 - off0[j], n0)
            for i1 in range(sh):
                k1 = n1 - sh + i1
                y[i0, i1] += wj * (f[s0, k1] - f[i0, i1]) * (g[s0, k1] - g[i0, i1])
            for i1 in range(sh, n1):
                k1 = i1 - sh
                y[i0, i1] += wj * (f[s0, k1] - f[i0, i1]) * (g[s0, k1] - g[i0, i1])
    return out


def cet_g_st1(const double[:, ::1] f, const double[:, ::1] g, const double[::1] w,
              const long[::1] offt, const long[::1] offx, bint wrap_time,
              Py_ssize_t t0, Py_ssize_t t1):
    cdef Py_ssize_t nt = f.shape[0], n = f.shape[1], m = w.shape[0]
    cdef Py_ssize_t t, i, j, tt, k
    cdef double acc
    out = np.empty((t1 - t0, n), dtype=np.float64)
    cdef double[:, ::1] y = out
    for t in range(t0, t1):
        for i in range(n):
            acc = 0.0
            for j in range(m):
                tt = t - offt[j]
                if wrap_time:
                    tt = wrap_idx(tt, nt)
                k = wrap_idx(i - offx[j], n)
                acc += w[j] * (f[tt, k] - f[t, i]) * (g[tt, k] - g[t, i])
            y[t - t0, i] = acc
    return out


cdef inline double minmod(double a, double b) nogil:
    if a > 0.0 and b > 0.0:
        return fmin(a, b)
    if a < 0.0 and b < 0.0:
        return fmax(a, b)
    return 0.0


def euler_rhs(const double[::1] rho, const double[::1] mom, double gamma, double kappa,
              double dx, int flux, int order, double vac):
    """Semi-discrete RHS of the 1D isentropic system, periodic.

    flux: 0 = local Lax-Friedrichs, 1 = HLL. order: 1 = piecewise constant,
    2 = minmod-limited linear reconstruction. Returns (drho, dmom, amax)
    where amax is the largest |v| + c over cell averages.
    """
    cdef Py_ssize_t n = rho.shape[0]
    cdef Py_ssize_t i, il
    cdef double s = gamma * kappa
    cdef bint g2 = gamma == 2.0   # pow-free fast path for the common law
    cdef double amax = 0.0
    cdef double v_i, c_i, a
    cdef double rl, rr, ml, mr, vl, vr, pl, pr, cl, cr
    cdef double frl, fml, frr, fmr, sl, sr
    cdef double half = 0.5

    srho_arr = np.zeros(n, dtype=np.float64)
    smom_arr = np.zeros(n, dtype=np.float64)
    frho_arr = np.empty(n, dtype=np.float64)
    fmom_arr = np.empty(n, dtype=np.float64)
    drho_arr = np.empty(n, dtype=np.float64)
    dmom_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] srho = srho_arr
    cdef double[::1] smom = smom_arr
    cdef double[::1] frho = frho_arr
    cdef double[::1] fmom = fmom_arr
    cdef double[::1] drho = drho_arr
    cdef double[::1] dmom = dmom_arr

    for i in range(n):
        if rho[i] > vac:
            v_i = mom[i] / rho[i]
        else:
            v_i = 0.0
        if g2:
            c_i = sqrt(s * rho[i])
        else:
            c_i = sqrt(s * pow(rho[i], gamma - 1.0))
        a = fabs(v_i) + c_i
        if a > amax:
            amax = a

    if order == 2:
        for i in range(n):
            srho[i] = minmod(rho[i] - rho[wrap_idx(i - 1, n)],
                             rho[wrap_idx(i + 1, n)] - rho[i])
            smom[i] = minmod(mom[i] - mom[wrap_idx(i - 1, n)],
                             mom[wrap_idx(i + 1, n)] - mom[i])

    # frho[i], fmom[i]: numerical flux through the interface between
    # cells i-1 and i.
    for i in range(n):
        il = wrap_idx(i - 1, n)
        rl = rho[il] + half * srho[il]
        ml = mom[il] + half * smom[il]
        rr = rho[i] - half * srho[i]
        mr = mom[i] - half * smom[i]
        if rl > vac:
            vl = ml / rl
        else:
            vl = 0.0
        if rr > vac:
            vr = mr / rr
        else:
            vr = 0.0
        if g2:
            pl = kappa * (rl * rl)
            pr = kappa * (rr * rr)
            cl = sqrt(s * rl)
            cr = sqrt(s * rr)
        else:
            pl = kappa * pow(rl, gamma)
            pr = kappa * pow(rr, gamma)
            cl = sqrt(s * pow(rl, gamma - 1.0))
            cr = sqrt(s * pow(rr, gamma - 1.0))
        frl = ml
        fml = ml * vl + pl
        frr = mr
        fmr = mr * vr + pr
        if flux == 0:
            a = fmax(fabs(vl) + cl, fabs(vr) + cr)
            frho[i] = half * (frl + frr) - half * a * (rr - rl)
            fmom[i] = half * (fml + fmr) - half * a * (mr - ml)
        else:
            sl = fmin(vl - cl, vr - cr)
            sr = fmax(vl + cl, vr + cr)
            if sl >= 0.0:
                frho[i] = frl
                fmom[i] = fml
            elif sr <= 0.0:
                frho[i] = frr
                fmom[i] = fmr
            else:
                frho[i] = (sr * frl - sl * frr + sl * sr * (rr - rl)) / (sr - sl)
                fmom[i] = (sr * fml - sl * fmr + sl * sr * (mr - ml)) / (sr - sl)

    for i in range(n):
        drho[i] = -(frho[wrap_idx(i + 1, n)] - frho[i]) / dx
        dmom[i] = -(fmom[wrap_idx(i + 1, n)] - fmom[i]) / dx

    return drho_arr, dmom_arr, amax
