"""Pure-NumPy implementations of the per-pixel kernels.

This is the fallback backend, used when the compiled extension is not
available. Accumulation orders are written to mirror the compiled twin
exactly (same per-element operation sequence), so both backends produce
bitwise-identical maps; the compiled extension is built with FMA
contraction disabled for the same reason.

All image arguments are 2-D C-contiguous float64 arrays.
"""

import numpy as np

NAME = "python"

# Eigenvalues below this are treated as zero by the edge test.
EIG_EPS = 1e-12


def sep_convolve(img, kx, ky):
    """Separable convolution with replicate borders: horizontal pass with
    kx, then vertical pass with ky. Kernel lengths must be odd."""
    h, w = img.shape
    rx = (kx.shape[0] - 1) // 2
    p = np.pad(img, ((0, 0), (rx, rx)), mode="edge")
    acc = kx[0] * p[:, 0:w]
    for t in range(1, kx.shape[0]):
        acc += kx[t] * p[:, t : t + w]

    ry = (ky.shape[0] - 1) // 2
    p = np.pad(acc, ((ry, ry), (0, 0)), mode="edge")
    out = ky[0] * p[0:h, :]
    for t in range(1, ky.shape[0]):
        out += ky[t] * p[t : t + h, :]
    return out


def central_diff(img):
    """Central differences (f(x+1) - f(x-1))/2 with replicate borders."""
    p = np.pad(img, ((0, 0), (1, 1)), mode="edge")
    ix = (p[:, 2:] - p[:, :-2]) * 0.5
    p = np.pad(img, ((1, 1), (0, 0)), mode="edge")
    iy = (p[2:, :] - p[:-2, :]) * 0.5
    return ix, iy


def moment_products(ix, iy, clamp, quadrant_mask):
    """Clamped squared-derivative products. ix^2 and iy^2 are clamped at
    `clamp`; the cross product is not. With the quadrant mask on, pixels
    whose (ix, iy) lies outside the closed first quadrant contribute zeros
    to all three products."""
    pxx = ix * ix
    pyy = iy * iy
    pxy = ix * iy
    np.minimum(pxx, clamp, out=pxx)
    np.minimum(pyy, clamp, out=pyy)
    if quadrant_mask:
        drop = (ix < 0.0) | (iy < 0.0)
        pxx[drop] = 0.0
        pyy[drop] = 0.0
        pxy[drop] = 0.0
    return pxx, pyy, pxy


def box_mean(img, k):
    """K x K box average with replicate borders. The divisor is always
    k*k regardless of any masking applied upstream."""
    h, w = img.shape
    r = (k - 1) // 2
    p = np.pad(img, ((0, 0), (r, r)), mode="edge")
    acc = p[:, 0:w].copy()
    for t in range(1, k):
        acc += p[:, t : t + w]
    p = np.pad(acc, ((r, r), (0, 0)), mode="edge")
    out = p[0:h, :].copy()
    for t in range(1, k):
        out += p[t : t + h, :]
    out /= float(k * k)
    return out


def eas8(tr):
    """Radial asymmetry of a trace map over the eight neighbors: mean
    absolute difference of the four opposite pairs (LT,RB), (L,R),
    (LB,RT), (T,B), replicate borders."""
    h, w = tr.shape
    p = np.pad(tr, 1, mode="edge")
    lt = p[0:h, 0:w]
    rb = p[2 : h + 2, 2 : w + 2]
    le = p[1 : h + 1, 0:w]
    ri = p[1 : h + 1, 2 : w + 2]
    lb = p[2 : h + 2, 0:w]
    rt = p[0:h, 2 : w + 2]
    tp = p[0:h, 1 : w + 1]
    bt = p[2 : h + 2, 1 : w + 1]
    acc = np.abs(lt - rb)
    acc += np.abs(le - ri)
    acc += np.abs(lb - rt)
    acc += np.abs(tp - bt)
    acc *= 0.25
    return acc


def edge_keep(sxx, syy, sxy, thr):
    """Edge-effect test on the averaged second-moment maps. Returns a
    uint8 mask: 1 = kept, 0 = excluded (lmax > thr * lmin). A vanishing
    lmin with a non-vanishing lmax counts as an infinite ratio; a fully
    vanishing matrix (flat region) is kept."""
    t = sxx + syy
    det = sxx * syy - sxy * sxy
    disc = t * t - 4.0 * det
    np.maximum(disc, 0.0, out=disc)
    s = np.sqrt(disc)
    lmax = (t + s) * 0.5
    lmin = (t - s) * 0.5
    flat = lmax < EIG_EPS
    edge = (lmin < EIG_EPS) & ~flat
    keep = flat | (~edge & (lmax <= thr * lmin))
    return keep.astype(np.uint8)


def nms_strict(score, radius):
    """Coordinates of strict local maxima over the (2*radius+1)^2
    neighborhood. Border pixels are compared only against in-bounds
    neighbors; plateau ties survive nowhere. Returns (ys, xs) in
    row-major scan order."""
    h, w = score.shape
    p = np.full((h + 2 * radius, w + 2 * radius), -np.inf)
    p[radius : radius + h, radius : radius + w] = score
    keep = np.ones((h, w), dtype=bool)
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            if dy == 0 and dx == 0:
                continue
            nb = p[radius + dy : radius + dy + h, radius + dx : radius + dx + w]
            np.logical_and(keep, score > nb, out=keep)
    ys, xs = np.nonzero(keep)
    return ys.astype(np.int64), xs.astype(np.int64)
