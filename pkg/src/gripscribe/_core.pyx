# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernel.  Mirrors _core_py.run_chain expression by
expression (same state layout, same parameter vector, same status codes);
keep the two implementations in lockstep when editing."""

from libc.math cimport sin, cos, isfinite

DEF DET_EPS = 1e-12

BACKEND = "cython"


cdef struct Params:
    double l1, l2, bx, by, m1, m2, lc1, lc2, i1, i2, b1, b2, drag, kh, dh
    double m11, m22, mc
    int mode


cdef inline int _deriv(Params* pp, double th, double ps, double w1, double w2,
                       double tx, double ty, double tvx, double tvy,
                       double* out) nogil:
    cdef double c1, s1, c2, s2, px, py, vx, vy, fx, fy, gx, gy
    cdef double tau1, tau2, pd, wr, sg, m12, det, r1, r2
    c1 = cos(th); s1 = sin(th)
    c2 = cos(ps); s2 = sin(ps)
    px = pp.bx + pp.l1 * c1 + pp.l2 * c2
    py = pp.by + pp.l1 * s1 + pp.l2 * s2
    vx = -pp.l1 * s1 * w1 - pp.l2 * s2 * w2
    vy = pp.l1 * c1 * w1 + pp.l2 * c2 * w2
    fx = pp.kh * (tx - px) + pp.dh * (tvx - vx)
    fy = pp.kh * (ty - py) + pp.dh * (tvy - vy)
    gx = fx - pp.drag * vx
    gy = fy - pp.drag * vy
    tau1 = -pp.l1 * s1 * gx + pp.l1 * c1 * gy
    tau2 = -pp.l2 * s2 * gx + pp.l2 * c2 * gy
    if pp.mode == 2:
        tau1 = tau1 - pp.b1 * w1
        tau2 = tau2 - pp.b2 * w2
        pd = pp.b1 * w1 * w1 + pp.b2 * w2 * w2
    elif pp.mode == 1:
        wr = w2 - w1
        tau1 = tau1 + (pp.b2 * wr - pp.b1 * w1)
        tau2 = tau2 - pp.b2 * wr
        pd = pp.b1 * w1 * w1 + pp.b2 * wr * wr
    else:
        tau1 = tau1 - pp.b1 * w1
        pd = pp.b1 * w1 * w1
    pd = pd + pp.drag * (vx * vx + vy * vy)
    sg = pp.mc * sin(th - ps)
    m12 = pp.mc * cos(th - ps)
    det = pp.m11 * pp.m22 - m12 * m12
    if det < DET_EPS:
        return 1
    r1 = tau1 - sg * w2 * w2
    r2 = tau2 + sg * w1 * w1
    out[0] = w1
    out[1] = w2
    out[2] = (pp.m22 * r1 - m12 * r2) / det
    out[3] = (pp.m11 * r2 - m12 * r1) / det
    out[4] = fx * vx + fy * vy
    out[5] = pd
    return 0


def run_chain(double[::1] p, double[::1] y0, double[:, ::1] targets, double dt,
              double[:, ::1] states, double[:, ::1] pen, double[:, ::1] energy):
    """Integrate N = (targets.shape[0]-1)//2 steps; fill the output arrays.

    Returns (status, steps_completed); see _core_py.run_chain.
    """
    cdef Params pr
    pr.l1 = p[0]; pr.l2 = p[1]; pr.bx = p[2]; pr.by = p[3]
    pr.m1 = p[4]; pr.m2 = p[5]; pr.lc1 = p[6]; pr.lc2 = p[7]
    pr.i1 = p[8]; pr.i2 = p[9]; pr.b1 = p[10]; pr.b2 = p[11]
    pr.mode = <int> p[12]; pr.drag = p[13]; pr.kh = p[14]; pr.dh = p[15]
    pr.m11 = pr.i1 + pr.m1 * pr.lc1 * pr.lc1 + pr.m2 * pr.l1 * pr.l1
    pr.m22 = pr.i2 + pr.m2 * pr.lc2 * pr.lc2
    pr.mc = pr.m2 * pr.l1 * pr.lc2

    cdef double th = y0[0], ps = y0[1], w1 = y0[2], w2 = y0[3]
    cdef double work = y0[4], diss = y0[5]
    cdef Py_ssize_t n = (targets.shape[0] - 1) // 2
    cdef double h = dt, h2 = 0.5 * dt, h6 = dt / 6.0
    cdef double k1[6]
    cdef double k2[6]
    cdef double k3[6]
    cdef double k4[6]
    cdef double m12
    cdef Py_ssize_t i, j
    cdef int status = 0

    with nogil:
        _save(&pr, th, ps, w1, w2, work, diss, 0, states, pen, energy)
        for i in range(n):
            j = 2 * i
            if _deriv(&pr, th, ps, w1, w2, targets[j, 0], targets[j, 1],
                      targets[j, 2], targets[j, 3], k1):
                status = 1
                break
            if _deriv(&pr, th + h2 * k1[0], ps + h2 * k1[1], w1 + h2 * k1[2],
                      w2 + h2 * k1[3], targets[j + 1, 0], targets[j + 1, 1],
                      targets[j + 1, 2], targets[j + 1, 3], k2):
                status = 1
                break
            if _deriv(&pr, th + h2 * k2[0], ps + h2 * k2[1], w1 + h2 * k2[2],
                      w2 + h2 * k2[3], targets[j + 1, 0], targets[j + 1, 1],
                      targets[j + 1, 2], targets[j + 1, 3], k3):
                status = 1
                break
            if _deriv(&pr, th + h * k3[0], ps + h * k3[1], w1 + h * k3[2],
                      w2 + h * k3[3], targets[j + 2, 0], targets[j + 2, 1],
                      targets[j + 2, 2], targets[j + 2, 3], k4):
                status = 1
                break
            th = th + h6 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
            ps = ps + h6 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
            w1 = w1 + h6 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
            w2 = w2 + h6 * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
            work = work + h6 * (k1[4] + 2.0 * (k2[4] + k3[4]) + k4[4])
            diss = diss + h6 * (k1[5] + 2.0 * (k2[5] + k3[5]) + k4[5])
            if not (isfinite(th) and isfinite(ps) and isfinite(w1)
                    and isfinite(w2)):
                status = 2
                break
            _save(&pr, th, ps, w1, w2, work, diss, i + 1, states, pen, energy)
    if status:
        return status, i
    return 0, n


cdef inline void _save(Params* pp, double th, double ps, double w1, double w2,
                       double work, double diss, Py_ssize_t i,
                       double[:, ::1] states, double[:, ::1] pen,
                       double[:, ::1] energy) nogil:
    cdef double m12
    states[i, 0] = th; states[i, 1] = ps
    states[i, 2] = w1; states[i, 3] = w2
    pen[i, 0] = pp.bx + pp.l1 * cos(th) + pp.l2 * cos(ps)
    pen[i, 1] = pp.by + pp.l1 * sin(th) + pp.l2 * sin(ps)
    m12 = pp.mc * cos(th - ps)
    energy[i, 0] = work
    energy[i, 1] = diss
    energy[i, 2] = 0.5 * (pp.m11 * w1 * w1 + 2.0 * m12 * w1 * w2
                          + pp.m22 * w2 * w2)
