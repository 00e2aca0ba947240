# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``; same signatures, same results."""
import numpy as np
from libc.math cimport sin, cos, acos, sqrt, floor, fabs, M_PI

cdef double EDGE_EPS = 1e-9
cdef double TWO_PI = 2.0 * M_PI


def radial_points(theta, double a0, cos_c, sin_c):
    cdef double[::1] th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef double[::1] cc = np.ascontiguousarray(cos_c, dtype=np.float64)
    cdef double[::1] sc = np.ascontiguousarray(sin_c, dtype=np.float64)
    cdef Py_ssize_t n = th.shape[0], i, k
    pts_arr = np.empty((n, 2))
    tans_arr = np.empty((n, 2))
    cdef double[:, ::1] pts = pts_arr
    cdef double[:, ::1] tans = tans_arr
    cdef double t, rho, drho, ct, st
    for i in range(n):
        t = th[i]
        rho = a0
        drho = 0.0
        for k in range(cc.shape[0]):
            if cc[k] != 0.0:
                rho += cc[k] * cos((k + 1) * t)
                drho -= (k + 1) * cc[k] * sin((k + 1) * t)
        for k in range(sc.shape[0]):
            if sc[k] != 0.0:
                rho += sc[k] * sin((k + 1) * t)
                drho += (k + 1) * sc[k] * cos((k + 1) * t)
        ct = cos(t)
        st = sin(t)
        pts[i, 0] = rho * ct
        pts[i, 1] = rho * st
        tans[i, 0] = drho * ct - rho * st
        tans[i, 1] = drho * st + rho * ct
    return pts_arr, tans_arr


def polygon_eval(pts_in, tans_in):
    cdef double[:, ::1] pts = np.ascontiguousarray(pts_in, dtype=np.float64)
    cdef double[:, ::1] tans = np.ascontiguousarray(tans_in, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], i, j, h
    g_per_arr = np.empty(n)
    g_area_arr = np.empty(n)
    cdef double[::1] g_per = g_per_arr
    cdef double[::1] g_area = g_area_arr
    ux_arr = np.empty(n)
    uy_arr = np.empty(n)
    cdef double[::1] ux = ux_arr
    cdef double[::1] uy = uy_arr
    cdef double per = 0.0, cross = 0.0, ex, ey, ln, tn
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        ex = pts[j, 0] - pts[i, 0]
        ey = pts[j, 1] - pts[i, 1]
        ln = sqrt(ex * ex + ey * ey)
        per += ln
        cross += pts[i, 0] * pts[j, 1] - pts[i, 1] * pts[j, 0]
        if ln > EDGE_EPS:
            ux[i] = ex / ln
            uy[i] = ey / ln
        else:
            tn = sqrt(tans[i, 0] * tans[i, 0] + tans[i, 1] * tans[i, 1])
            ux[i] = tans[i, 0] / tn
            uy[i] = tans[i, 1] / tn
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        h = i - 1 if i > 0 else n - 1
        g_per[i] = tans[i, 0] * (ux[h] - ux[i]) + tans[i, 1] * (uy[h] - uy[i])
        g_area[i] = 0.5 * (tans[i, 0] * pts[j, 1] - tans[i, 1] * pts[j, 0]
                           + pts[h, 0] * tans[i, 1] - pts[h, 1] * tans[i, 0])
    return per, 0.5 * cross, g_per_arr, g_area_arr


cdef inline double close_pair(double rest, double t_left, double slack) nogil:
    # pair (x, y) with x + y = rest, sin x + sin y = t_left, both in [0, pi]:
    # cos((y - x)/2) = t_left / (2 sin(rest/2)) =: c, admissible iff c >= |cos(rest/2)|,
    # and 2 sin(x/2) + 2 sin(y/2) = 4 sin(rest/4) sqrt((1 + c)/2)
    cdef double sq, cq, cap, c, ch
    if rest < 0.0 or t_left < 0.0:
        return -1.0
    sq = sin(0.25 * rest)
    cq = cos(0.25 * rest)
    cap = 4.0 * sq * cq
    if cap <= 0.0 or t_left >= cap:
        if t_left - cap > slack:
            return -1.0
        return 4.0 * sq
    c = t_left / cap
    ch = cq * cq - sq * sq
    if c < fabs(ch):
        return -1.0
    return 4.0 * sq * sqrt(0.5 * (1.0 + c))


cdef inline void split_pair(double rest, double t_left, double* xo, double* yo):
    cdef double half = 0.5 * rest, cap = 2.0 * sin(0.5 * rest), spread = 0.0
    if cap > 0.0 and t_left < cap:
        spread = acos(t_left / cap)
    xo[0] = half - spread
    yo[0] = half + spread


def scan_disk_grid(double two_area, int m, double res, double slack):
    cdef int free = m - 2
    if free < 1 or free > 3:
        raise ValueError("grid scan supports 3 <= m <= 5")
    cdef long top = <long>floor(TWO_PI / 3.0 / res + 1e-9) + 1
    sin_arr = np.sin(np.arange(top + 1) * res)
    half_arr = np.sin(0.5 * np.arange(top + 1) * res)
    cdef double[::1] sn = sin_arr
    cdef double[::1] sh = half_arr
    cdef double best = -1.0, per, best_rest = 0.0, best_left = 0.0
    cdef long[3] bj
    cdef long count = 0
    cdef long j1, j2, j3, m1, m2, m3
    cdef double s1, s2, s3, q1, q2, q3, h1, h2, h3

    bj[0] = 0
    bj[1] = 0
    bj[2] = 0
    m1 = <long>floor(TWO_PI / m / res + 1e-9)
    with nogil:
        for j1 in range(0, m1 + 1):
            s1 = j1 * res
            q1 = sn[j1]
            h1 = sh[j1]
            if free == 1:
                per = close_pair(TWO_PI - s1, two_area - q1, slack)
                if per >= 0.0:
                    count += 1
                    per += 2.0 * h1
                    if per > best:
                        best = per
                        bj[0] = j1
                        best_rest = TWO_PI - s1
                        best_left = two_area - q1
                continue
            m2 = <long>floor((TWO_PI - s1) / (m - 1) / res + 1e-9)
            for j2 in range(j1, m2 + 1):
                s2 = s1 + j2 * res
                q2 = q1 + sn[j2]
                h2 = h1 + sh[j2]
                if free == 2:
                    per = close_pair(TWO_PI - s2, two_area - q2, slack)
                    if per >= 0.0:
                        count += 1
                        per += 2.0 * h2
                        if per > best:
                            best = per
                            bj[0] = j1
                            bj[1] = j2
                            best_rest = TWO_PI - s2
                            best_left = two_area - q2
                    continue
                m3 = <long>floor((TWO_PI - s2) / (m - 2) / res + 1e-9)
                for j3 in range(j2, m3 + 1):
                    s3 = s2 + j3 * res
                    q3 = q2 + sn[j3]
                    h3 = h2 + sh[j3]
                    per = close_pair(TWO_PI - s3, two_area - q3, slack)
                    if per >= 0.0:
                        count += 1
                        per += 2.0 * h3
                        if per > best:
                            best = per
                            bj[0] = j1
                            bj[1] = j2
                            bj[2] = j3
                            best_rest = TWO_PI - s3
                            best_left = two_area - q3
    angles = np.zeros(m)
    cdef double x = 0.0, y = 0.0
    if best >= 0.0:
        for j1 in range(free):
            angles[j1] = bj[j1] * res
        split_pair(best_rest, best_left, &x, &y)
        angles[free] = x
        angles[free + 1] = y
    return best, angles, count
