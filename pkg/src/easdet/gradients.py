"""Image derivatives, second-moment maps, and 2x2 eigenvalue recovery.

The detector never eigendecomposes: it relies on the fact that for the
symmetric 2x2 structure matrix the two eigenvalues sum to the trace, so
comparing traces compares eigenvalue sums directly. The closed-form
``eigen_pair`` here exists for edge classification and for validating
that shortcut.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BadWindow
from .image import as_image

EIG_EPS = kernels.EIG_EPS


def derivatives(img):
    """Central-difference x and y derivatives, (next - prev) / 2, with
    replicated borders. Returns (ix, iy)."""
    return kernels.central_diff(as_image(img))


@dataclass(frozen=True)
class MomentMaps:
    """Per-pixel windowed second-moment entries: sxx, syy are the box
    means of the (clamped) squared derivatives, sxy of their product.
    Each map has the source image's shape."""

    sxx: np.ndarray
    syy: np.ndarray
    sxy: np.ndarray

    @property
    def shape(self):
        return self.sxx.shape

    def trace(self):
        """Eigenvalue sum of the structure matrix at every pixel."""
        return self.sxx + self.syy


def moment_maps(img, k, clamp=1.0, quadrant_mask=True):
    """Build the windowed second-moment maps with a k x k box mean.

    k must be odd and positive. The squared-derivative products are
    clamped at `clamp` before averaging (the cross product is not).
    With `quadrant_mask` on, pixels whose x or y derivative is negative
    contribute zero to all three products, restricting the statistics to
    one gradient quadrant.
    """
    if k < 1 or k % 2 == 0:
        raise BadWindow(f"window size must be odd and positive, got {k}")
    ix, iy = kernels.central_diff(as_image(img))
    pxx, pyy, pxy = kernels.moment_products(ix, iy, float(clamp), bool(quadrant_mask))
    sxx = kernels.box_mean(pxx, int(k))
    syy = kernels.box_mean(pyy, int(k))
    sxy = kernels.box_mean(pxy, int(k))
    return MomentMaps(sxx=sxx, syy=syy, sxy=sxy)


def patch_trace(img, clamp=1.0, quadrant_mask=False):
    """Whole-patch eigenvalue sum: the mean clamped squared derivatives
    over the entire image, summed for x and y. This is the single-window
    limit of moment_maps followed by trace."""
    ix, iy = kernels.central_diff(as_image(img))
    pxx, pyy, _ = kernels.moment_products(ix, iy, float(clamp), bool(quadrant_mask))
    return float(pxx.mean() + pyy.mean())


def patch_distance(a, b, clamp=1.0, quadrant_mask=False):
    """Distance between two patches' derivative distributions: absolute
    difference of their whole-patch eigenvalue sums."""
    return abs(
        patch_trace(a, clamp, quadrant_mask) - patch_trace(b, clamp, quadrant_mask)
    )


def eigen_pair(sxx, syy, sxy):
    """Eigenvalues of [[sxx, sxy], [sxy, syy]] in closed form.

    Works elementwise on scalars or arrays; returns (lmin, lmax). The
    discriminant is clamped at zero so round-off never yields NaN.
    """
    sxx = np.asarray(sxx, dtype=np.float64)
    syy = np.asarray(syy, dtype=np.float64)
    sxy = np.asarray(sxy, dtype=np.float64)
    t = sxx + syy
    det = sxx * syy - sxy * sxy
    disc = np.maximum(t * t - 4.0 * det, 0.0)
    s = np.sqrt(disc)
    lmax = (t + s) * 0.5
    lmin = (t - s) * 0.5
    if lmax.ndim == 0:
        return float(lmin), float(lmax)
    return lmin, lmax
