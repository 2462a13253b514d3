"""Pure-Python stepping kernel: fixed-step RK4 on the damped two-bar chain.

State vector y = (theta1, psi2, omega1, omega2, work_in, dissipated): the two
energy integrals ride along as extra states so the whole ledger inherits the
integrator's fourth-order accuracy.  `targets` supplies the hand target
(x, y, vx, vy) on a half-step grid (2N+1 rows for N steps) so every RK4 stage
sees the exact target of its stage time.

The compiled extension in _core.pyx mirrors this arithmetic expression by
expression; keep the two in lockstep when editing.

Parameter vector layout (see dynamics._pack_params):
  [l1, l2, base_x, base_y, m1, m2, lc1, lc2, i1, i2,
   b1, b2, damper_mode, pen_drag, hand_k, hand_d]
damper_mode: 0 = single damper on the base joint, 1 = relative at the elbow,
2 = both on absolute rates at the base.

Status codes: 0 ok, 1 near-singular mass matrix, 2 non-finite state.
"""

import math

BACKEND = "python"

_DET_EPS = 1e-12


def run_chain(p, y0, targets, dt, states, pen, energy):
    """Integrate N = (len(targets)-1)//2 steps; fill the output arrays.

    Returns (status, steps_completed).  Output row i is the state after i
    steps; row 0 is the initial condition.  On failure the rows up to and
    including steps_completed are valid.
    """
    # native floats throughout: faster scalar arithmetic than numpy scalars
    # and silent inf propagation for the non-finite guard
    p = [float(v) for v in p]
    l1 = p[0]; l2 = p[1]; bx = p[2]; by = p[3]
    m1 = p[4]; m2 = p[5]; lc1 = p[6]; lc2 = p[7]
    i1 = p[8]; i2 = p[9]; b1 = p[10]; b2 = p[11]
    mode = int(p[12]); drag = p[13]; kh = p[14]; dh = p[15]

    m11 = i1 + m1 * lc1 * lc1 + m2 * l1 * l1
    m22 = i2 + m2 * lc2 * lc2
    mc = m2 * l1 * lc2

    th = float(y0[0]); ps = float(y0[1]); w1 = float(y0[2]); w2 = float(y0[3])
    work = float(y0[4]); diss = float(y0[5])

    targets = [(float(r[0]), float(r[1]), float(r[2]), float(r[3]))
               for r in targets]
    n = (len(targets) - 1) // 2
    dt = float(dt)
    sin = math.sin
    cos = math.cos

    def deriv(th, ps, w1, w2, tx, ty, tvx, tvy):
        c1 = cos(th); s1 = sin(th)
        c2 = cos(ps); s2 = sin(ps)
        px = bx + l1 * c1 + l2 * c2
        py = by + l1 * s1 + l2 * s2
        vx = -l1 * s1 * w1 - l2 * s2 * w2
        vy = l1 * c1 * w1 + l2 * c2 * w2
        fx = kh * (tx - px) + dh * (tvx - vx)
        fy = kh * (ty - py) + dh * (tvy - vy)
        gx = fx - drag * vx
        gy = fy - drag * vy
        tau1 = -l1 * s1 * gx + l1 * c1 * gy
        tau2 = -l2 * s2 * gx + l2 * c2 * gy
        if mode == 2:
            tau1 -= b1 * w1
            tau2 -= b2 * w2
            pd = b1 * w1 * w1 + b2 * w2 * w2
        elif mode == 1:
            wr = w2 - w1
            tau1 += b2 * wr - b1 * w1
            tau2 -= b2 * wr
            pd = b1 * w1 * w1 + b2 * wr * wr
        else:
            tau1 -= b1 * w1
            pd = b1 * w1 * w1
        pd += drag * (vx * vx + vy * vy)
        sg = mc * sin(th - ps)
        m12 = mc * cos(th - ps)
        det = m11 * m22 - m12 * m12
        if det < _DET_EPS:
            return None
        r1 = tau1 - sg * w2 * w2
        r2 = tau2 + sg * w1 * w1
        a1 = (m22 * r1 - m12 * r2) / det
        a2 = (m11 * r2 - m12 * r1) / det
        return w1, w2, a1, a2, fx * vx + fy * vy, pd

    def save(i):
        states[i, 0] = th; states[i, 1] = ps
        states[i, 2] = w1; states[i, 3] = w2
        pen[i, 0] = bx + l1 * cos(th) + l2 * cos(ps)
        pen[i, 1] = by + l1 * sin(th) + l2 * sin(ps)
        m12 = mc * cos(th - ps)
        energy[i, 0] = work
        energy[i, 1] = diss
        energy[i, 2] = 0.5 * (m11 * w1 * w1 + 2.0 * m12 * w1 * w2 + m22 * w2 * w2)

    save(0)
    h = dt
    h2 = 0.5 * dt
    h6 = dt / 6.0
    for i in range(n):
        j = 2 * i
        t0 = targets[j]
        tm = targets[j + 1]
        t1 = targets[j + 2]
        k1 = deriv(th, ps, w1, w2, t0[0], t0[1], t0[2], t0[3])
        if k1 is None:
            return 1, i
        k2 = deriv(th + h2 * k1[0], ps + h2 * k1[1], w1 + h2 * k1[2],
                   w2 + h2 * k1[3], tm[0], tm[1], tm[2], tm[3])
        if k2 is None:
            return 1, i
        k3 = deriv(th + h2 * k2[0], ps + h2 * k2[1], w1 + h2 * k2[2],
                   w2 + h2 * k2[3], tm[0], tm[1], tm[2], tm[3])
        if k3 is None:
            return 1, i
        k4 = deriv(th + h * k3[0], ps + h * k3[1], w1 + h * k3[2],
                   w2 + h * k3[3], t1[0], t1[1], t1[2], t1[3])
        if k4 is None:
            return 1, i
        th += h6 * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
        ps += h6 * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
        w1 += h6 * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
        w2 += h6 * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
        work += h6 * (k1[4] + 2.0 * (k2[4] + k3[4]) + k4[4])
        diss += h6 * (k1[5] + 2.0 * (k2[5] + k3[5]) + k4[5])
        if not (math.isfinite(th) and math.isfinite(ps)
                and math.isfinite(w1) and math.isfinite(w2)):
            return 2, i
        save(i + 1)
    return 0, n
