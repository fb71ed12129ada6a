"""Corner-detector baselines sharing the multi-scale pipeline.

Both baselines score the standard windowed structure tensor (no
quadrant restriction): `harris` uses det - k * trace^2, `min_eigen` the
smaller eigenvalue. Everything downstream (pyramid, suppression,
pooling, ranking, serialization) is identical to the main detector so
that repeatability comparisons isolate the score function itself.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .eas import EasConfig, _rank_and_pool, octave_window
from .errors import UnknownDetector
from .gradients import eigen_pair, moment_maps
from .image import as_image
from .pyramid import build_pyramid

KINDS = ("harris", "min_eigen")


@dataclass(frozen=True)
class BaselineKind:
    kind: str
    harris_k: float = 0.04

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnknownDetector(f"unknown baseline kind {self.kind!r}")
        if not 0 < self.harris_k < 0.25:
            raise ValueError(f"harris_k must be in (0, 0.25), got {self.harris_k}")


def baseline_score(m, b):
    """Score map from moment maps computed with the quadrant mask off."""
    if b.kind == "harris":
        t = m.sxx + m.syy
        det = m.sxx * m.syy - m.sxy * m.sxy
        return det - b.harris_k * (t * t)
    lmin, _ = eigen_pair(m.sxx, m.syy, m.sxy)
    return lmin


def detect_baseline(img, b, cfg=None, top_n=500):
    """Multi-scale baseline detection with the shared pipeline; negative
    scores are floored at 0 before suppression, and there is no edge
    elimination step (the ratio test is the main detector's device).

    `b` may be a BaselineKind or one of its kind names."""
    if isinstance(b, str):
        b = BaselineKind(kind=b)
    if cfg is None:
        cfg = EasConfig()
    if top_n < 1:
        raise ValueError(f"top_n must be at least 1, got {top_n}")
    img = as_image(img)
    stack = build_pyramid(img, max_octaves=cfg.max_octaves)
    per_octave = []
    for o in range(len(stack)):
        k = octave_window(cfg.k_base, o)
        m = moment_maps(stack[o], k, clamp=cfg.clamp, quadrant_mask=False)
        score = np.maximum(baseline_score(m, b), 0.0)
        ys, xs = kernels.nms_strict(score, cfg.nms_radius)
        if ys.shape[0] == 0:
            continue
        s = 1 << o
        per_octave.append((xs * s, ys * s, score[ys, xs], o))
    return _rank_and_pool(per_octave, top_n)
