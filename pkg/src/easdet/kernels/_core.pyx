# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the per-pixel kernels.

Each function mirrors the per-element operation order of the NumPy
fallback in _numpy.py, and the extension is built with -ffp-contract=off,
so both backends produce bitwise-identical maps.
"""

import numpy as np

from libc.math cimport fabs, sqrt

NAME = "compiled"

cdef double EIG_EPS = 1e-12


cdef inline Py_ssize_t _clamp(Py_ssize_t i, Py_ssize_t n) nogil:
    if i < 0:
        return 0
    if i >= n:
        return n - 1
    return i


def sep_convolve(double[:, ::1] img, double[::1] kx, double[::1] ky):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t nx = kx.shape[0], ny = ky.shape[0]
    cdef Py_ssize_t rx = (nx - 1) // 2, ry = (ny - 1) // 2
    cdef Py_ssize_t x, y, t
    cdef double s
    tmp_arr = np.empty((h, w), dtype=np.float64)
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                s = kx[0] * img[y, _clamp(x - rx, w)]
                for t in range(1, nx):
                    s += kx[t] * img[y, _clamp(x - rx + t, w)]
                tmp[y, x] = s
        for y in range(h):
            for x in range(w):
                s = ky[0] * tmp[_clamp(y - ry, h), x]
                for t in range(1, ny):
                    s += ky[t] * tmp[_clamp(y - ry + t, h), x]
                out[y, x] = s
    return out_arr


def central_diff(double[:, ::1] img):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t x, y
    ix_arr = np.empty((h, w), dtype=np.float64)
    iy_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] ix = ix_arr
    cdef double[:, ::1] iy = iy_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                ix[y, x] = (img[y, _clamp(x + 1, w)] - img[y, _clamp(x - 1, w)]) * 0.5
                iy[y, x] = (img[_clamp(y + 1, h), x] - img[_clamp(y - 1, h), x]) * 0.5
    return ix_arr, iy_arr


def moment_products(double[:, ::1] ix, double[:, ::1] iy, double clamp, bint quadrant_mask):
    cdef Py_ssize_t h = ix.shape[0], w = ix.shape[1]
    cdef Py_ssize_t x, y
    cdef double gx, gy, v
    pxx_arr = np.empty((h, w), dtype=np.float64)
    pyy_arr = np.empty((h, w), dtype=np.float64)
    pxy_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] pxx = pxx_arr
    cdef double[:, ::1] pyy = pyy_arr
    cdef double[:, ::1] pxy = pxy_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                gx = ix[y, x]
                gy = iy[y, x]
                if quadrant_mask and (gx < 0.0 or gy < 0.0):
                    pxx[y, x] = 0.0
                    pyy[y, x] = 0.0
                    pxy[y, x] = 0.0
                else:
                    v = gx * gx
                    if v > clamp:
                        v = clamp
                    pxx[y, x] = v
                    v = gy * gy
                    if v > clamp:
                        v = clamp
                    pyy[y, x] = v
                    pxy[y, x] = gx * gy
    return pxx_arr, pyy_arr, pxy_arr


def box_mean(double[:, ::1] img, Py_ssize_t k):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t r = (k - 1) // 2
    cdef Py_ssize_t x, y, t
    cdef double s, kk = <double>(k * k)
    tmp_arr = np.empty((h, w), dtype=np.float64)
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] tmp = tmp_arr
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                s = img[y, _clamp(x - r, w)]
                for t in range(1, k):
                    s += img[y, _clamp(x - r + t, w)]
                tmp[y, x] = s
        for y in range(h):
            for x in range(w):
                s = tmp[_clamp(y - r, h), x]
                for t in range(1, k):
                    s += tmp[_clamp(y - r + t, h), x]
                out[y, x] = s / kk
    return out_arr


def eas8(double[:, ::1] tr):
    cdef Py_ssize_t h = tr.shape[0], w = tr.shape[1]
    cdef Py_ssize_t x, y, xl, xr, yt, yb
    cdef double s
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for y in range(h):
            yt = _clamp(y - 1, h)
            yb = _clamp(y + 1, h)
            for x in range(w):
                xl = _clamp(x - 1, w)
                xr = _clamp(x + 1, w)
                s = fabs(tr[yt, xl] - tr[yb, xr])
                s += fabs(tr[y, xl] - tr[y, xr])
                s += fabs(tr[yb, xl] - tr[yt, xr])
                s += fabs(tr[yt, x] - tr[yb, x])
                out[y, x] = s * 0.25
    return out_arr


def edge_keep(double[:, ::1] sxx, double[:, ::1] syy, double[:, ::1] sxy, double thr):
    cdef Py_ssize_t h = sxx.shape[0], w = sxx.shape[1]
    cdef Py_ssize_t x, y
    cdef double a, b, c, t, det, disc, s, lmax, lmin
    keep_arr = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[:, ::1] keep = keep_arr
    with nogil:
        for y in range(h):
            for x in range(w):
                a = sxx[y, x]
                b = syy[y, x]
                c = sxy[y, x]
                t = a + b
                det = a * b - c * c
                disc = t * t - 4.0 * det
                if disc < 0.0:
                    disc = 0.0
                s = sqrt(disc)
                lmax = (t + s) * 0.5
                lmin = (t - s) * 0.5
                if lmax < EIG_EPS:
                    keep[y, x] = 1
                elif lmin < EIG_EPS:
                    keep[y, x] = 0
                elif lmax <= thr * lmin:
                    keep[y, x] = 1
                else:
                    keep[y, x] = 0
    return keep_arr


def nms_strict(double[:, ::1] score, Py_ssize_t radius):
    cdef Py_ssize_t h = score.shape[0], w = score.shape[1]
    cdef Py_ssize_t x, y, dy, dx, y0, y1, x0, x1, ny, nx, n = 0
    cdef double v
    cdef bint ok
    ys_arr = np.empty(h * w, dtype=np.int64)
    xs_arr = np.empty(h * w, dtype=np.int64)
    cdef long long[::1] ys = ys_arr
    cdef long long[::1] xs = xs_arr
    with nogil:
        for y in range(h):
            y0 = y - radius
            if y0 < 0:
                y0 = 0
            y1 = y + radius
            if y1 >= h:
                y1 = h - 1
            for x in range(w):
                v = score[y, x]
                x0 = x - radius
                if x0 < 0:
                    x0 = 0
                x1 = x + radius
                if x1 >= w:
                    x1 = w - 1
                ok = True
                for ny in range(y0, y1 + 1):
                    for nx in range(x0, x1 + 1):
                        if ny == y and nx == x:
                            continue
                        if score[ny, nx] >= v:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    ys[n] = y
                    xs[n] = x
                    n += 1
    return ys_arr[:n].copy(), xs_arr[:n].copy()
