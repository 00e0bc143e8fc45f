"""Pure numpy kernels: local Lax-Friedrichs residual and wave-speed bound.

Mirrors ``_kernels.pyx`` operation by operation; the two agree to rounding.
"""
import numpy as np

NAME = "python"


def primitives(q, gamma):
    rho = q[0]
    u1 = q[1] / rho
    u2 = q[2] / rho
    p = (gamma - 1.0) * (q[3] - 0.5 * (q[1] * u1 + q[2] * u2))
    return np.stack([rho, u1, u2, p])


def conserved(w, gamma):
    rho, u1, u2, p = w
    E = p / (gamma - 1.0) + 0.5 * rho * (u1 * u1 + u2 * u2)
    return np.stack([rho, rho * u1, rho * u2, E])


def _minmod(a, b):
    return np.where(a * b <= 0.0, 0.0, np.where(np.abs(a) < np.abs(b), a, b))


def llf_flux(ql, wl, qr, wr, d, gamma):
    """Interface flux along axis ``d`` (1 or 2) from left/right states."""
    unl = wl[d]
    unr = wr[d]
    cl = np.sqrt(gamma * wl[3] / wl[0])
    cr = np.sqrt(gamma * wr[3] / wr[0])
    lam = np.maximum(np.abs(unl) + cl, np.abs(unr) + cr)
    pl = wl[3]
    pr = wr[3]
    fl = [ql[0] * unl, ql[1] * unl, ql[2] * unl, (ql[3] + pl) * unl]
    fr = [qr[0] * unr, qr[1] * unr, qr[2] * unr, (qr[3] + pr) * unr]
    fl[d] = fl[d] + pl
    fr[d] = fr[d] + pr
    return np.stack([0.5 * (fl[k] + fr[k]) - 0.5 * lam * (qr[k] - ql[k]) for k in range(4)])


def face_flux(ql, qr, d, gamma):
    """First-order flux between two conserved 4-vectors."""
    ql = np.asarray(ql, dtype=float).reshape(4, 1)
    qr = np.asarray(qr, dtype=float).reshape(4, 1)
    return llf_flux(ql, primitives(ql, gamma), qr, primitives(qr, gamma), d, gamma)[:, 0]


def _face_states(qe, we, axis, order, gamma):
    """Left/right states on every face along ``axis`` of the extended array."""
    n = qe.shape[axis]

    def sl(a, b):
        idx = [slice(None)] * 3
        idx[axis] = slice(a, n + b if b <= 0 else b)
        return tuple(idx)

    if order == 1:
        return qe[sl(1, -2)], we[sl(1, -2)], qe[sl(2, -1)], we[sl(2, -1)]
    # cells 1..n-2 carry limited slopes
    dw = np.diff(we, axis=axis)
    idx_m = [slice(None)] * 3
    idx_p = [slice(None)] * 3
    idx_m[axis] = slice(0, -1)
    idx_p[axis] = slice(1, None)
    slope = _minmod(dw[tuple(idx_m)], dw[tuple(idx_p)])
    # slope[k] belongs to extended cell k+1
    idx_c = [slice(None)] * 3
    idx_c[axis] = slice(1, -1)
    wc = we[tuple(idx_c)]
    w_right_face = wc + 0.5 * slope
    w_left_face = wc - 0.5 * slope
    m = wc.shape[axis]
    a = [slice(None)] * 3
    b = [slice(None)] * 3
    a[axis] = slice(0, m - 1)
    b[axis] = slice(1, m)
    wl = w_right_face[tuple(a)]
    wr = w_left_face[tuple(b)]
    return conserved(wl, gamma), wl, conserved(wr, gamma), wr


def residual(qe, ng, dx, dy, gamma, order, res, bflux):
    """Fill ``res`` with the semi-discrete right-hand side on interior cells.

    ``qe`` has ``ng`` ghost layers on every side; ``bflux[0]``/``bflux[1]``
    receive the x1-fluxes through the left/right domain faces.
    """
    nx = qe.shape[1] - 2 * ng
    ny = qe.shape[2] - 2 * ng
    we = primitives(qe, gamma)
    # two ghost layers needed by the limited reconstruction
    qx = qe[:, ng - 2:ng + nx + 2, ng:ng + ny]
    wx = we[:, ng - 2:ng + nx + 2, ng:ng + ny]
    ql, wl, qr, wr = _face_states(qx, wx, 1, order, gamma)
    fx = llf_flux(ql, wl, qr, wr, 1, gamma)
    qy = qe[:, ng:ng + nx, ng - 2:ng + ny + 2]
    wy = we[:, ng:ng + nx, ng - 2:ng + ny + 2]
    ql, wl, qr, wr = _face_states(qy, wy, 2, order, gamma)
    fy = llf_flux(ql, wl, qr, wr, 2, gamma)
    res[...] = -(fx[:, 1:, :] - fx[:, :-1, :]) / dx - (fy[:, :, 1:] - fy[:, :, :-1]) / dy
    bflux[0] = fx[:, 0, :]
    bflux[1] = fx[:, -1, :]


def max_wavespeed(q, gamma):
    w = primitives(q, gamma)
    c = np.sqrt(gamma * w[3] / w[0])
    return float(np.max(np.maximum(np.abs(w[1]), np.abs(w[2])) + c))
