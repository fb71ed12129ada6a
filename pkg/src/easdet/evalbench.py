"""Repeatability evaluation: correspondence counting between keypoint
lists, single-condition scoring, benchmark sweeps over blur grids, and
wall-clock timing.

The repeatability of a detector under a degradation is the fraction of
its top-ranked keypoints in the clean image that reappear at the
corresponding coordinates in the degraded one. When the degradation
includes a geometric transform, the image is blurred first and warped
second, and the condition string records that order.
"""

import json
import time
from dataclasses import dataclass, asdict

import numpy as np

from . import baselines, eas
from .blur import BlurPipeline, BlurSpec, apply_pipeline, pipeline_condition
from .errors import UnknownDetector
from .image import WarpSpec, as_image, warp

DETECTORS = ("eas", "harris", "min_eigen")

REPORT_HEADER = "detector,condition,top_n,n_c,repeatability"


def detect_by_name(img, detector, cfg=None, top_n=500):
    """Dispatch to the named detector (eas, harris, or min_eigen)."""
    name = detector.replace("-", "_")
    if name == "eas":
        return eas.detect(img, cfg=cfg, top_n=top_n)
    if name in ("harris", "min_eigen"):
        return baselines.detect_baseline(
            img, baselines.BaselineKind(kind=name), cfg=cfg, top_n=top_n
        )
    raise UnknownDetector(f"unknown detector {detector!r}")


@dataclass(frozen=True)
class EvalConfig:
    """top_n ranks per image; tol is the correspondence distance
    tolerance in pixels (0 means exact integer coordinates after
    rounding); transform maps clean-image coordinates into the degraded
    image."""

    top_n: int = 500
    tol: float = 1.0
    transform: WarpSpec | None = None

    def __post_init__(self):
        if self.top_n < 1:
            raise ValueError(f"top_n must be at least 1, got {self.top_n}")
        if self.tol < 0:
            raise ValueError(f"tol must be non-negative, got {self.tol}")


@dataclass(frozen=True)
class RepeatabilityResult:
    detector: str
    condition: str
    top_n: int
    n_c: int
    repeatability: float


def correspondences(a, b, w=None, tol=0.0):
    """Count one-to-one correspondences between two keypoint lists.

    Each keypoint of `a` is mapped through the transform (identity when
    None) and greedily matched, in descending-score order of `a`, to the
    nearest still-unused keypoint of `b` within `tol` pixels. tol=0
    requires equality of the rounded integer coordinates. Ties prefer
    the higher-ranked `b` keypoint, so the count is deterministic.
    """
    if not a or not b:
        return 0
    order = sorted(range(len(a)), key=lambda i: (-a[i].score, a[i].octave, a[i].y, a[i].x))
    ax = np.array([kp.x for kp in a], dtype=np.float64)
    ay = np.array([kp.y for kp in a], dtype=np.float64)
    if w is not None and not w.is_identity():
        ax, ay = w.apply(ax, ay)
    bx = np.array([kp.x for kp in b], dtype=np.float64)
    by = np.array([kp.y for kp in b], dtype=np.float64)
    if tol == 0:
        # bucket b by integer coordinates, then pop per matching a
        buckets = {}
        for j in range(len(b)):
            buckets.setdefault((int(bx[j]), int(by[j])), []).append(j)
        rx = np.floor(ax + 0.5)
        ry = np.floor(ay + 0.5)
        n = 0
        for i in order:
            key = (int(rx[i]), int(ry[i]))
            slot = buckets.get(key)
            if slot:
                slot.pop(0)
                n += 1
        return n
    used = np.zeros(len(b), dtype=bool)
    n = 0
    for i in order:
        d2 = (bx - ax[i]) ** 2 + (by - ay[i]) ** 2
        d2[used] = np.inf
        j = int(np.argmin(d2))
        if d2[j] <= tol * tol:
            used[j] = True
            n += 1
    return n


def _ratio(n_c, top_n, len_a, len_b):
    # Denominator saturates at what the images could supply, so a sparse
    # image compared against itself still scores 1.0.
    eff = min(top_n, len_a, len_b)
    if eff == 0:
        return 1.0 if len_a == len_b == 0 else 0.0
    return n_c / eff


def repeatability(img, detector, pipeline=None, cfg=None, det_cfg=None):
    """Score one detector under one degradation condition.

    The clean image is detected as-is; the comparison image is the
    pipeline output (clean if None), warped afterwards when the config
    carries a non-identity transform. det_cfg tunes the detector itself
    (window sizes, thresholds, octave count) for both images.
    """
    if cfg is None:
        cfg = EvalConfig()
    img = as_image(img)
    kps_a = detect_by_name(img, detector, cfg=det_cfg, top_n=cfg.top_n)
    degraded = apply_pipeline(img, pipeline) if pipeline is not None else img
    w = cfg.transform
    warped = w is not None and not w.is_identity()
    if warped:
        h, wd = img.shape
        degraded = warp(degraded, w, (wd, h))
    kps_b = detect_by_name(degraded, detector, cfg=det_cfg, top_n=cfg.top_n)
    n_c = correspondences(kps_a, kps_b, w=w if warped else None, tol=cfg.tol)
    condition = pipeline_condition(pipeline) if pipeline is not None else "identity"
    if warped:
        m = w.matrix
        six = ",".join(
            f"{v:.9g}" for v in (m[0, 0], m[0, 1], m[0, 2], m[1, 0], m[1, 1], m[1, 2])
        )
        condition += f" then warp {six}"
    return RepeatabilityResult(
        detector=detector.replace("-", "_"),
        condition=condition,
        top_n=cfg.top_n,
        n_c=n_c,
        repeatability=_ratio(n_c, cfg.top_n, len(kps_a), len(kps_b)),
    )


def sweep(img, detectors, axis, top_ns, tol=0.0, theta=np.pi / 4):
    """Grid evaluation over one blur axis.

    axis is ("gaussian", sigmas) or ("motion", lengths); motion uses the
    given angle for every length. Rows come out ordered by (detector,
    condition, top_n). Detection runs once per (detector, image) at the
    largest top_n; smaller ranks reuse prefixes of that ranking, which
    equals detecting at the smaller top_n directly.
    """
    kind, values = axis
    if kind not in ("gaussian", "motion"):
        raise ValueError(f"unknown sweep axis {kind!r}")
    if not values or not detectors or not top_ns:
        raise ValueError("sweep needs non-empty detectors, values, and top_ns")
    img = as_image(img)
    top_ns = sorted(int(t) for t in top_ns)
    n_max = top_ns[-1]

    conditions = []
    for v in values:
        if kind == "gaussian":
            step = BlurSpec.gaussian(float(v))
        else:
            step = BlurSpec.motion(float(v), float(theta))
        pipeline = BlurPipeline(steps=(step,))
        conditions.append((pipeline_condition(pipeline), apply_pipeline(img, pipeline)))

    results = []
    for det in detectors:
        name = det.replace("-", "_")
        kps_a = detect_by_name(img, name, top_n=n_max)
        for condition, degraded in conditions:
            kps_b = detect_by_name(degraded, name, top_n=n_max)
            for top_n in top_ns:
                a = kps_a[:top_n]
                b = kps_b[:top_n]
                n_c = correspondences(a, b, w=None, tol=tol)
                results.append(
                    RepeatabilityResult(
                        detector=name,
                        condition=condition,
                        top_n=top_n,
                        n_c=n_c,
                        repeatability=_ratio(n_c, top_n, len(a), len(b)),
                    )
                )
    return results


def timing(img, detector="eas", repeats=11):
    """Median wall-clock milliseconds of a full detection, measured over
    `repeats` runs after one untimed warm-up."""
    if repeats < 3:
        raise ValueError(f"repeats must be at least 3, got {repeats}")
    img = as_image(img)
    detect_by_name(img, detector)
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        detect_by_name(img, detector)
        samples.append((time.perf_counter() - t0) * 1000.0)
    return float(np.median(samples))


# ---------------------------------------------------------------------------
# Report serialization


def result_row(r):
    return f"{r.detector},\"{r.condition}\",{r.top_n},{r.n_c},{r.repeatability:.9g}"


def write_report_csv(results, f):
    f.write(REPORT_HEADER + "\n")
    for r in results:
        f.write(result_row(r) + "\n")


def write_report_json(results, f):
    json.dump([asdict(r) for r in results], f, indent=0)
    f.write("\n")


def write_series(results, directory, stem="series"):
    """Per-detector CSV files (condition, top_n, n_c, repeatability),
    ready for external plotting. Creates the directory if needed and
    returns the paths written."""
    import os

    os.makedirs(directory, exist_ok=True)
    paths = []
    detectors = []
    for r in results:
        if r.detector not in detectors:
            detectors.append(r.detector)
    for det in detectors:
        path = os.path.join(directory, f"{stem}_{det}.csv")
        with open(path, "w") as f:
            f.write("condition,top_n,n_c,repeatability\n")
            for r in results:
                if r.detector == det:
                    f.write(
                        f"\"{r.condition}\",{r.top_n},{r.n_c},{r.repeatability:.9g}\n"
                    )
        paths.append(path)
    return paths
