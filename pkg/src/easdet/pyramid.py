"""Octave pyramid: smooth-and-halve image stack for multi-scale detection.

Each octave halves both dimensions (floor division) after a 5-tap
binomial smoothing pass, so a pixel at octave o covers a 2^o x 2^o block
of the original image; coordinates map back as x * 2^o.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import TooSmall
from .image import as_image

# 5-tap binomial low-pass, weights {1, 4, 6, 4, 1} / 16
SMOOTH_TAPS = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0

MIN_LEVEL = 16


@dataclass(frozen=True)
class OctaveStack:
    """Pyramid levels, coarsening by 2x per octave; levels[0] is the
    source image itself (never smoothed)."""

    levels: tuple

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, o):
        return self.levels[o]

    def scale(self, o):
        """Side length, in source pixels, of one pixel at octave o."""
        return 1 << o

    def to_source(self, o, xs, ys):
        """Map octave-o pixel coordinates back to source coordinates."""
        s = 1 << o
        return np.asarray(xs) * s, np.asarray(ys) * s


def decimate(img):
    """Smooth with the binomial kernel (replicate borders), then keep the
    even-indexed rows and columns, truncated to the floor-halved size."""
    img = as_image(img)
    h, w = img.shape
    smoothed = kernels.sep_convolve(img, SMOOTH_TAPS, SMOOTH_TAPS)
    return np.ascontiguousarray(smoothed[0 : (h // 2) * 2 : 2, 0 : (w // 2) * 2 : 2])


def build_pyramid(img, max_octaves=6):
    """Build the octave stack, stopping before any level would fall under
    16 pixels on a side or once max_octaves levels exist."""
    img = as_image(img)
    if img.shape[0] < MIN_LEVEL or img.shape[1] < MIN_LEVEL:
        raise TooSmall(
            f"image {img.shape[1]}x{img.shape[0]} is smaller than "
            f"{MIN_LEVEL}x{MIN_LEVEL}"
        )
    if max_octaves < 1:
        raise ValueError(f"max_octaves must be positive, got {max_octaves}")
    levels = [img]
    while len(levels) < max_octaves:
        h, w = levels[-1].shape
        if h // 2 < MIN_LEVEL or w // 2 < MIN_LEVEL:
            break
        levels.append(decimate(levels[-1]))
    return OctaveStack(levels=tuple(levels))
