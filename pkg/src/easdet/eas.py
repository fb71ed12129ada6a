"""Eigenvalue-asymmetry keypoint detector.

Scores each pixel by how asymmetric the windowed derivative statistics
are across its neighborhood: the trace of the 2x2 second-moment matrix
(the eigenvalue sum) is compared between the four opposite neighbor
pairs, so no eigendecomposition is needed per comparison. Elongated
edge responses are removed with an eigenvalue-ratio test, strict local
maxima survive suppression, and detections from all pyramid octaves are
pooled into a single ranked list.
"""

import json
from dataclasses import dataclass, asdict

import numpy as np

from . import kernels
from .errors import FormatError
from .gradients import MomentMaps, eigen_pair, moment_maps
from .image import as_image
from .pyramid import build_pyramid

EIG_EPS = kernels.EIG_EPS

CSV_HEADER = "x,y,r,score,octave"


@dataclass(frozen=True)
class EasConfig:
    """Detector knobs.

    clamp     : ceiling applied to squared derivatives before averaging
    quadrant_mask : restrict moment statistics to the positive-derivative
                    quadrant (zero contribution where ix < 0 or iy < 0)
    edge_thr  : eigenvalue ratio above which a pixel counts as an edge
    max_octaves : pyramid depth cap
    k_base    : averaging window at octave 0; halved (kept odd) per octave
    nms_radius : suppression radius (1 means a 3x3 neighborhood)
    """

    clamp: float = 1.0
    quadrant_mask: bool = True
    edge_thr: float = 5.0
    max_octaves: int = 6
    k_base: int = 10
    nms_radius: int = 1

    def __post_init__(self):
        if not self.clamp > 0:
            raise ValueError(f"clamp must be positive, got {self.clamp}")
        if not self.edge_thr > 1:
            raise ValueError(f"edge_thr must exceed 1, got {self.edge_thr}")
        if not 1 <= self.max_octaves <= 6:
            raise ValueError(f"max_octaves must be in 1..6, got {self.max_octaves}")
        if self.k_base < 1:
            raise ValueError(f"k_base must be positive, got {self.k_base}")
        if self.nms_radius < 1:
            raise ValueError(f"nms_radius must be at least 1, got {self.nms_radius}")


@dataclass(frozen=True)
class Keypoint:
    """A detection in original-image coordinates; r = 2**octave is the
    side length of the detection's pixel footprint."""

    x: int
    y: int
    r: int
    score: float
    octave: int


def octave_window(k_base, octave):
    """Averaging window size at the given octave: the base size halved
    per octave, rounded half-up, then snapped down to odd, floored at 1."""
    k = max(1, int(np.floor(k_base / float(1 << octave) + 0.5)))
    if k % 2 == 0:
        k -= 1
    return max(1, k)


def trace_map(m):
    """Per-pixel eigenvalue sum of the second-moment matrix (its trace)."""
    return m.sxx + m.syy


def eas_map(t):
    """Average absolute trace difference over the four opposite neighbor
    pairs (diagonal, horizontal, anti-diagonal, vertical), replicate
    border. Zero exactly where all four pairs agree."""
    return kernels.eas8(as_image(t))


def edge_mask(m, edge_thr):
    """1.0 where a pixel survives the eigenvalue-ratio edge test, 0.0
    where it is excluded. Near-zero lmax (flat) is always kept; near-zero
    lmin with non-trivial lmax counts as an infinite ratio."""
    keep = kernels.edge_keep(m.sxx, m.syy, m.sxy, float(edge_thr))
    return keep.astype(np.float64)


def nms(score, radius):
    """Strict local maxima of the score map: pixels greater than every
    in-bounds neighbor within the (2*radius+1)^2 window. Ties produce no
    detection. Returns (x, y, score) tuples in row-major order."""
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    score = as_image(score)
    ys, xs = kernels.nms_strict(score, int(radius))
    return [(int(x), int(y), float(score[y, x])) for x, y in zip(xs, ys)]


def score_octave(level, cfg, octave):
    """EAS score map for one pyramid level with edge-excluded pixels
    zeroed; this is the map suppression runs on."""
    k = octave_window(cfg.k_base, octave)
    m = moment_maps(level, k, clamp=cfg.clamp, quadrant_mask=cfg.quadrant_mask)
    score = eas_map(trace_map(m))
    return score * edge_mask(m, cfg.edge_thr)


def _rank_and_pool(per_octave, top_n):
    """per_octave: list of (xs, ys, scores, octave) in original coords.
    Global order: score descending, then octave, then y, then x."""
    if not per_octave:
        return []
    xs = np.concatenate([p[0] for p in per_octave])
    ys = np.concatenate([p[1] for p in per_octave])
    scores = np.concatenate([p[2] for p in per_octave])
    octs = np.concatenate(
        [np.full(p[0].shape[0], p[3], dtype=np.int64) for p in per_octave]
    )
    order = np.lexsort((xs, ys, octs, -scores))[:top_n]
    return [
        Keypoint(
            x=int(xs[i]),
            y=int(ys[i]),
            r=1 << int(octs[i]),
            score=float(scores[i]),
            octave=int(octs[i]),
        )
        for i in order
    ]


def detect(img, cfg=None, top_n=500):
    """Run the full detector and return at most top_n keypoints.

    Each octave level is scored independently (window size shrinking
    with the octave), suppressed, and its surviving maxima are mapped
    back to original coordinates with footprint r = 2**octave before the
    global ranking. Deterministic for identical inputs.
    """
    if cfg is None:
        cfg = EasConfig()
    if top_n < 1:
        raise ValueError(f"top_n must be at least 1, got {top_n}")
    img = as_image(img)
    stack = build_pyramid(img, max_octaves=cfg.max_octaves)
    per_octave = []
    for o in range(len(stack)):
        score = score_octave(stack[o], cfg, o)
        ys, xs = kernels.nms_strict(score, cfg.nms_radius)
        if ys.shape[0] == 0:
            continue
        s = 1 << o
        per_octave.append((xs * s, ys * s, score[ys, xs], o))
    return _rank_and_pool(per_octave, top_n)


# ---------------------------------------------------------------------------
# Keypoint list serialization


def write_keypoints_csv(kps, f):
    f.write(CSV_HEADER + "\n")
    for kp in kps:
        f.write(f"{kp.x},{kp.y},{kp.r},{kp.score:.9g},{kp.octave}\n")


def read_keypoints_csv(f):
    lines = [ln.strip() for ln in f if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise FormatError(f"expected keypoint CSV header {CSV_HEADER!r}")
    kps = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 5:
            raise FormatError(f"bad keypoint row: {ln!r}")
        try:
            kps.append(
                Keypoint(
                    x=int(parts[0]),
                    y=int(parts[1]),
                    r=int(parts[2]),
                    score=float(parts[3]),
                    octave=int(parts[4]),
                )
            )
        except ValueError as e:
            raise FormatError(f"bad keypoint row {ln!r}: {e}") from None
    return kps


def write_keypoints_json(kps, f):
    json.dump([asdict(kp) for kp in kps], f, indent=0)
    f.write("\n")


def read_keypoints_json(f):
    try:
        data = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"bad keypoint JSON: {e}") from None
    return [
        Keypoint(
            x=int(d["x"]),
            y=int(d["y"]),
            r=int(d["r"]),
            score=float(d["score"]),
            octave=int(d["octave"]),
        )
        for d in data
    ]
