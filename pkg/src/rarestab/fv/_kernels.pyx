# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled local Lax-Friedrichs kernels; same arithmetic as ``_kernels_py``."""
import numpy as np

from libc.math cimport fabs, sqrt

NAME = "cython"


cdef inline double _minmod(double a, double b) noexcept nogil:
    if a * b <= 0.0:
        return 0.0
    if fabs(a) < fabs(b):
        return a
    return b


cdef inline void _cons(const double* w, double gamma, double* q) noexcept nogil:
    q[0] = w[0]
    q[1] = w[0] * w[1]
    q[2] = w[0] * w[2]
    q[3] = w[3] / (gamma - 1.0) + 0.5 * w[0] * (w[1] * w[1] + w[2] * w[2])


cdef inline void _llf(const double* ql, const double* wl, const double* qr,
                      const double* wr, int d, double gamma, double* f) noexcept nogil:
    cdef double unl = wl[d]
    cdef double unr = wr[d]
    cdef double cl = sqrt(gamma * wl[3] / wl[0])
    cdef double cr = sqrt(gamma * wr[3] / wr[0])
    cdef double lam = fabs(unl) + cl
    cdef double lr = fabs(unr) + cr
    cdef double fl[4]
    cdef double fr[4]
    cdef int k
    if lr > lam:
        lam = lr
    fl[0] = ql[0] * unl
    fl[1] = ql[1] * unl
    fl[2] = ql[2] * unl
    fl[3] = (ql[3] + wl[3]) * unl
    fr[0] = qr[0] * unr
    fr[1] = qr[1] * unr
    fr[2] = qr[2] * unr
    fr[3] = (qr[3] + wr[3]) * unr
    fl[d] = fl[d] + wl[3]
    fr[d] = fr[d] + wr[3]
    for k in range(4):
        f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * lam * (qr[k] - ql[k])


cdef void _primitives(double[:, :, ::1] q, double gamma, double[:, :, ::1] w) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double rho, u1, u2
    for i in range(q.shape[1]):
        for j in range(q.shape[2]):
            rho = q[0, i, j]
            u1 = q[1, i, j] / rho
            u2 = q[2, i, j] / rho
            w[0, i, j] = rho
            w[1, i, j] = u1
            w[2, i, j] = u2
            w[3, i, j] = (gamma - 1.0) * (q[3, i, j] - 0.5 * (q[1, i, j] * u1 + q[2, i, j] * u2))


cdef void _face(double[:, :, ::1] qe, double[:, :, ::1] we, Py_ssize_t ia, Py_ssize_t ja,
                Py_ssize_t ib, Py_ssize_t jb, int di, int dj, int order, int d,
                double gamma, double* f) noexcept nogil:
    # face between cell a (left) and cell b (right); (di, dj) is the unit step a -> b
    cdef double ql[4]
    cdef double qr[4]
    cdef double wl[4]
    cdef double wr[4]
    cdef int k
    cdef double s
    if order == 1:
        for k in range(4):
            ql[k] = qe[k, ia, ja]
            qr[k] = qe[k, ib, jb]
            wl[k] = we[k, ia, ja]
            wr[k] = we[k, ib, jb]
    else:
        for k in range(4):
            s = _minmod(we[k, ia, ja] - we[k, ia - di, ja - dj], we[k, ib, jb] - we[k, ia, ja])
            wl[k] = we[k, ia, ja] + 0.5 * s
            s = _minmod(we[k, ib, jb] - we[k, ia, ja], we[k, ib + di, jb + dj] - we[k, ib, jb])
            wr[k] = we[k, ib, jb] - 0.5 * s
        _cons(wl, gamma, ql)
        _cons(wr, gamma, qr)
    _llf(ql, wl, qr, wr, d, gamma, f)


def face_flux(ql_in, qr_in, int d, double gamma):
    """First-order flux between two conserved 4-vectors."""
    cdef double[:, :, ::1] q = np.empty((4, 1, 2))
    cdef double[:, :, ::1] w = np.empty((4, 1, 2))
    cdef double ql[4]
    cdef double qr[4]
    cdef double wl[4]
    cdef double wr[4]
    cdef double f[4]
    cdef int k
    for k in range(4):
        q[k, 0, 0] = ql_in[k]
        q[k, 0, 1] = qr_in[k]
    _primitives(q, gamma, w)
    for k in range(4):
        ql[k] = q[k, 0, 0]
        qr[k] = q[k, 0, 1]
        wl[k] = w[k, 0, 0]
        wr[k] = w[k, 0, 1]
    _llf(ql, wl, qr, wr, d, gamma, f)
    return np.array([f[0], f[1], f[2], f[3]])


def residual(double[:, :, ::1] qe, int ng, double dx, double dy, double gamma, int order,
             double[:, :, ::1] res, double[:, :, ::1] bflux):
    cdef Py_ssize_t nx = qe.shape[1] - 2 * ng
    cdef Py_ssize_t ny = qe.shape[2] - 2 * ng
    cdef double[:, :, ::1] we = np.empty_like(np.asarray(qe))
    cdef double[:, :, ::1] fx = np.empty((4, nx + 1, ny))
    cdef double[:, :, ::1] fy = np.empty((4, nx, ny + 1))
    cdef double f[4]
    cdef Py_ssize_t i, j, ie, je
    cdef int k
    with nogil:
        _primitives(qe, gamma, we)
        for i in range(nx + 1):
            ie = ng - 1 + i
            for j in range(ny):
                je = ng + j
                _face(qe, we, ie, je, ie + 1, je, 1, 0, order, 1, gamma, f)
                for k in range(4):
                    fx[k, i, j] = f[k]
        for i in range(nx):
            ie = ng + i
            for j in range(ny + 1):
                je = ng - 1 + j
                _face(qe, we, ie, je, ie, je + 1, 0, 1, order, 2, gamma, f)
                for k in range(4):
                    fy[k, i, j] = f[k]
        for k in range(4):
            for i in range(nx):
                for j in range(ny):
                    res[k, i, j] = (-(fx[k, i + 1, j] - fx[k, i, j]) / dx
                                    - (fy[k, i, j + 1] - fy[k, i, j]) / dy)
            for j in range(ny):
                bflux[0, k, j] = fx[k, 0, j]
                bflux[1, k, j] = fx[k, nx, j]


def max_wavespeed(double[:, :, ::1] q, double gamma):
    cdef Py_ssize_t i, j
    cdef double rho, u1, u2, p, c, a, best = 0.0
    with nogil:
        for i in range(q.shape[1]):
            for j in range(q.shape[2]):
                rho = q[0, i, j]
                u1 = q[1, i, j] / rho
                u2 = q[2, i, j] / rho
                p = (gamma - 1.0) * (q[3, i, j] - 0.5 * (q[1, i, j] * u1 + q[2, i, j] * u2))
                c = sqrt(gamma * p / rho)
                a = fabs(u1)
                if fabs(u2) > a:
                    a = fabs(u2)
                if a + c > best:
                    best = a + c
    return best
