"""Deterministic synthetic test images.

The benchmark suites need a stand-in for natural photographs with
structure at every scale: a 1/f-spectrum cloud base, a few dozen
hard-edged shapes of log-uniform sizes, and a whisper of pixel noise.
All generators are pure functions of their arguments (fixed RNG seeds),
so benchmark runs are reproducible bit for bit.
"""

import numpy as np

from .image import as_image


def constant(width=64, height=None, value=0.5):
    if height is None:
        height = width
    return np.full((height, width), float(value))


def synthetic_scene(width=512, height=None, seed=6):
    """Natural-image stand-in: smooth cloud background plus rectangles
    and disks spanning sizes from a few pixels to a third of the frame,
    with mild white noise on top."""
    if height is None:
        height = width
    rng = np.random.default_rng(seed)

    # cloud background with a 1/f^1.9 amplitude spectrum
    white = rng.standard_normal((height, width))
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.fftfreq(width)[None, :]
    rho = np.hypot(fx, fy)
    with np.errstate(divide="ignore"):
        filt = np.where(rho > 0, rho ** -1.9, 0.0)
    cloud = np.real(np.fft.ifft2(np.fft.fft2(white) * filt))
    cloud = (cloud - cloud.mean()) / cloud.std()
    img = 0.5 + 0.16 * cloud

    ys, xs = np.mgrid[0:height, 0:width]
    n_shapes = max(24, int(round(70 * (width * height) / (512.0 * 512.0))))
    max_size = max(8.0, min(140.0, min(width, height) / 3.0))
    for _ in range(n_shapes):
        size = float(np.exp(rng.uniform(np.log(6.0), np.log(max_size))))
        value = float(rng.uniform(0.0, 1.0))
        opacity = float(rng.uniform(0.35, 1.0))
        if rng.uniform() < 0.6:
            w = max(4, int(round(size * rng.uniform(0.5, 1.5))))
            h = max(4, int(round(size * rng.uniform(0.5, 1.5))))
            x0 = int(rng.integers(0, max(1, width - w)))
            y0 = int(rng.integers(0, max(1, height - h)))
            region = (slice(y0, y0 + h), slice(x0, x0 + w))
            img[region] = (1.0 - opacity) * img[region] + opacity * value
        else:
            r = size / 2.0
            cx = float(rng.uniform(r, width - r))
            cy = float(rng.uniform(r, height - r))
            mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r
            img[mask] = (1.0 - opacity) * img[mask] + opacity * value

    img += 0.015 * rng.standard_normal((height, width))
    return as_image(np.clip(img, 0.02, 0.98))


def white_square(size=256, square=11):
    """A single centered white square on black; its four corners are the
    only non-edge structure in the frame."""
    img = np.zeros((size, size))
    x0 = (size - square) // 2
    img[x0 : x0 + square, x0 : x0 + square] = 1.0
    return as_image(img)


def square_geometry(size=256, square=11):
    """Corner pixels and edge-midpoint pixels of the white_square image,
    as (x, y) tuples."""
    a = (size - square) // 2
    b = a + square - 1
    m = a + (square - 1) // 2
    corners = [(a, a), (b, a), (a, b), (b, b)]
    midpoints = [(m, a), (a, m), (b, m), (m, b)]
    return corners, midpoints


def checkerboard(size=512, cell=8):
    ys, xs = np.mgrid[0:size, 0:size]
    return as_image(((xs // cell + ys // cell) % 2).astype(np.float64))


def rings(size=256, period=14.0, amplitude=0.35):
    """Concentric cosine rings about the image center; radially symmetric
    and smooth enough for bilinear resampling to track closely."""
    c = (size - 1) / 2.0
    ys, xs = np.mgrid[0:size, 0:size]
    rho = np.hypot(xs - c, ys - c)
    return as_image(0.5 + amplitude * np.cos(2.0 * np.pi * rho / period))


def strip_patch(n_strips, size=128, width=3, spacing=14, x0=8):
    """Black patch with n full-height white vertical strips; every strip
    adds the same derivative energy, so patch statistics are linear in
    the strip count as long as strips stay separated."""
    img = np.zeros((size, size))
    for i in range(n_strips):
        x = x0 + i * spacing
        img[:, x : x + width] = 1.0
    return as_image(img)


def strip_pairs():
    """Six patch pairs whose edge-count difference strictly decreases
    with the pair index: (8 strips vs 1), (8 vs 2), ... (8 vs 6)."""
    dense = strip_patch(8)
    return [(dense, strip_patch(k)) for k in range(1, 7)]
