"""Compiled inner loops for dataset-size accumulation.

All kernels are sequential and use Neumaier-compensated accumulation, so
results are bit-deterministic for a given input and never depend on chunking
or thread scheduling (callers parallelize only across independent kernel
invocations).  fastmath stays off: the compensation depends on IEEE ordering.
"""

from __future__ import annotations

import numba
import numpy as np

_SQRT_HALF = 1.0 / np.sqrt(2.0)


@numba.njit(cache=True, nogil=True)
def phasor_sums(x, beta):
    """(sum cos(beta x_j), sum sin(beta x_j)), compensated."""
    sc = 0.0
    cc = 0.0
    ss = 0.0
    cs = 0.0
    for j in range(x.shape[0]):
        a = beta * x[j]
        t = np.cos(a)
        y = sc + t
        if abs(sc) >= abs(t):
            cc += (sc - y) + t
        else:
            cc += (t - y) + sc
        sc = y
        t = np.sin(a)
        y = ss + t
        if abs(ss) >= abs(t):
            cs += (ss - y) + t
        else:
            cs += (t - y) + ss
        ss = y
    return sc + cc, ss + cs


@numba.njit(cache=True, nogil=True)
def hermite_power_sums(x, w, kmax, weighted):
    """S[k] = sum_j w_j H_k(x_j / sqrt(2)) for k = 0..kmax, compensated.

    With weighted=False, w is ignored and unit weights are used.  This is the
    accumulation behind normally ordered moment estimates; H_k values at
    order ~18 reach ~1e18 for |x| ~ 10, hence the compensation.
    """
    s = np.zeros(kmax + 1)
    c = np.zeros(kmax + 1)
    for j in range(x.shape[0]):
        y = x[j] * _SQRT_HALF
        wj = w[j] if weighted else 1.0
        if weighted and wj == 0.0:
            continue
        hprev = 1.0
        h = 2.0 * y
        for k in range(kmax + 1):
            if k == 0:
                v = 1.0
            elif k == 1:
                v = h
            else:
                hnext = 2.0 * y * h - 2.0 * (k - 1) * hprev
                hprev = h
                h = hnext
                v = h
            t = wj * v
            y2 = s[k] + t
            if abs(s[k]) >= abs(t):
                c[k] += (s[k] - y2) + t
            else:
                c[k] += (t - y2) + s[k]
            s[k] = y2
    return s + c


@numba.njit(cache=True, nogil=True)
def centered_power_sums(x, w, mean, kmax, weighted):
    """S[k] = sum_j w_j (x_j - mean)^k for k = 0..kmax, compensated."""
    s = np.zeros(kmax + 1)
    c = np.zeros(kmax + 1)
    for j in range(x.shape[0]):
        d = x[j] - mean
        wj = w[j] if weighted else 1.0
        if weighted and wj == 0.0:
            continue
        p = 1.0
        for k in range(kmax + 1):
            if k > 0:
                p *= d
            t = wj * p
            y2 = s[k] + t
            if abs(s[k]) >= abs(t):
                c[k] += (s[k] - y2) + t
            else:
                c[k] += (t - y2) + s[k]
            s[k] = y2
    return s + c


@numba.njit(cache=True, nogil=True)
def jacobi_eigenvalues_f64(a, max_sweeps):
    """Eigenvalues of a symmetric float64 matrix by cyclic Jacobi rotations.

    Works on a copy's lower data in place; classic threshold strategy: early
    sweeps skip pivots below a coarse global threshold, later sweeps zero
    pivots that are negligible relative to their diagonal pair.  Returns the
    diagonal (unsorted) once the off-diagonal mass is at rounding level, or
    after max_sweeps (caller treats that as failure via the second output).
    """
    l = a.shape[0]
    if l == 1:
        return a[:, 0].copy(), True
    eps = 2.220446049250313e-16
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(l - 1):
            for q in range(p + 1, l):
                off += abs(a[p, q])
        if off == 0.0:
            break
        scale = 0.0
        for p in range(l):
            for q in range(l):
                scale += abs(a[p, q])
        if off <= eps * scale:
            break
        thresh = 0.2 * off / (l * l) if sweep < 3 else 0.0
        for p in range(l - 1):
            for q in range(p + 1, l):
                apq = a[p, q]
                small = 100.0 * abs(apq)
                if sweep > 3 and small <= eps * abs(a[p, p]) and small <= eps * abs(a[q, q]):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if abs(apq) <= thresh or apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if small <= eps * abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                cth = 1.0 / np.sqrt(1.0 + t * t)
                sth = t * cth
                tau = sth / (1.0 + cth)
                dh = t * apq
                a[p, p] -= dh
                a[q, q] += dh
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(l):
                    if r == p or r == q:
                        continue
                    g = a[r, p]
                    hh = a[r, q]
                    a[r, p] = g - sth * (hh + tau * g)
                    a[r, q] = hh + sth * (g - tau * hh)
                    a[p, r] = a[r, p]
                    a[q, r] = a[r, q]
    off = 0.0
    scale = 0.0
    for p in range(l):
        for q in range(l):
            scale += abs(a[p, q])
            if p != q:
                off += abs(a[p, q])
    diag = np.empty(l)
    for p in range(l):
        diag[p] = a[p, p]
    return diag, off <= 64.0 * eps * max(scale, 1e-300)


@numba.njit(cache=True, nogil=True)
def rayleigh_cg_min(a, starts, tol, max_iter):
    """Smallest Rayleigh quotient found by nonlinear CG from multiple starts.

    Minimizes x'Ax / x'x with Polak-Ribiere direction updates on normalized
    iterates and an exact line search over span{x, d} (2x2 generalized
    eigenproblem in closed form).  A start counts as converged when the
    eigen-residual ||Ax - Rx|| drops below tol * max(1, ||A||_F).  Returns
    (best value over converged starts, number of converged starts).
    """
    l = a.shape[0]
    fro = 0.0
    for i in range(l):
        for j in range(l):
            fro += a[i, j] * a[i, j]
    conv = tol * max(1.0, np.sqrt(fro))
    best = np.inf
    converged = 0
    ax = np.empty(l)
    ad = np.empty(l)
    g = np.empty(l)
    gnew = np.empty(l)
    d = np.empty(l)
    xnew = np.empty(l)
    for s in range(starts.shape[0]):
        x = starts[s].copy()
        nrm = 0.0
        for i in range(l):
            nrm += x[i] * x[i]
        nrm = np.sqrt(nrm)
        if nrm == 0.0:
            continue
        for i in range(l):
            x[i] /= nrm
        for i in range(l):
            acc = 0.0
            for j in range(l):
                acc += a[i, j] * x[j]
            ax[i] = acc
        rq = 0.0
        for i in range(l):
            rq += x[i] * ax[i]
        g2 = 0.0
        for i in range(l):
            g[i] = 2.0 * (ax[i] - rq * x[i])
            d[i] = -g[i]
            g2 += g[i] * g[i]
        ok = False
        for it in range(max_iter):
            if 0.5 * np.sqrt(g2) <= conv:
                ok = True
                break
            # exact minimization of the quotient over span{x, d}
            for i in range(l):
                acc = 0.0
                for j in range(l):
                    acc += a[i, j] * d[j]
                ad[i] = acc
            a12 = 0.0
            a22 = 0.0
            b12 = 0.0
            b22 = 0.0
            for i in range(l):
                a12 += x[i] * ad[i]
                a22 += d[i] * ad[i]
                b12 += x[i] * d[i]
                b22 += d[i] * d[i]
            ca = b22 - b12 * b12          # det of the Gram matrix (x normalized)
            cb = -(rq * b22 + a22 - 2.0 * a12 * b12)
            cc2 = rq * a22 - a12 * a12
            lam = rq
            if ca > 1e-300:
                disc = cb * cb - 4.0 * ca * cc2
                if disc < 0.0:
                    disc = 0.0
                sq = np.sqrt(disc)
                # smaller root, computed stably
                if cb <= 0.0:
                    lam = (2.0 * cc2) / (-cb + sq) if (-cb + sq) != 0.0 else rq
                else:
                    lam = (-cb - sq) / (2.0 * ca)
            # eigenvector row with the larger pivot
            e1 = rq - lam
            e2 = a12 - lam * b12
            e3 = a22 - lam * b22
            if abs(e2) > 1e-300 or abs(e3) > 1e-300:
                if abs(e3) >= abs(e2):
                    c1 = 1.0
                    c2 = -e2 / e3 if e3 != 0.0 else 0.0
                else:
                    c1 = -e3 / e2
                    c2 = 1.0
            else:
                c1 = 1.0
                c2 = 0.0
            nrm = 0.0
            for i in range(l):
                xnew[i] = c1 * x[i] + c2 * d[i]
                nrm += xnew[i] * xnew[i]
            nrm = np.sqrt(nrm)
            if nrm <= 1e-150:
                for i in range(l):
                    d[i] = -g[i]
                continue
            for i in range(l):
                x[i] = xnew[i] / nrm
            for i in range(l):
                acc = 0.0
                for j in range(l):
                    acc += a[i, j] * x[j]
                ax[i] = acc
            rq = 0.0
            for i in range(l):
                rq += x[i] * ax[i]
            gdot = 0.0
            g2new = 0.0
            for i in range(l):
                gnew[i] = 2.0 * (ax[i] - rq * x[i])
                gdot += gnew[i] * (gnew[i] - g[i])
                g2new += gnew[i] * gnew[i]
            beta = gdot / g2 if g2 > 0.0 else 0.0
            if beta < 0.0 or (it + 1) % (2 * l) == 0:
                beta = 0.0
            for i in range(l):
                d[i] = -gnew[i] + beta * d[i]
                g[i] = gnew[i]
            g2 = g2new
        if ok:
            converged += 1
            if rq < best:
                best = rq
    return best, converged
