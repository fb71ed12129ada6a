"""Blur-robust keypoint detection via eigenvalue asymmetry.

The detector scores pixels by comparing windowed derivative statistics
(through the trace of the second-moment matrix, which equals the
eigenvalue sum) across opposite neighbor pairs, eliminates elongated
edge responses with an eigenvalue-ratio test, and pools strict local
maxima from a half-resolution octave pyramid into one ranked list.
Companion modules provide Harris and minimum-eigenvalue baselines on
the identical pipeline, a synthetic blur laboratory, and a
repeatability benchmark harness.
"""

from . import kernels, testimages
from .baselines import BaselineKind, baseline_score, detect_baseline
from .blur import (
    BlurPipeline,
    BlurSpec,
    Region,
    apply_pipeline,
    gaussian_kernel,
    motion_kernel,
    parse_pipeline,
    pipeline_text,
    rotational_blur,
    salt_pepper,
)
from .eas import (
    EasConfig,
    Keypoint,
    detect,
    eas_map,
    edge_mask,
    nms,
    octave_window,
    read_keypoints_csv,
    read_keypoints_json,
    trace_map,
    write_keypoints_csv,
    write_keypoints_json,
)
from .errors import (
    BadWindow,
    FormatError,
    SingularWarp,
    TooSmall,
    UnknownDetector,
)
from .evalbench import (
    EvalConfig,
    RepeatabilityResult,
    correspondences,
    detect_by_name,
    repeatability,
    sweep,
    timing,
)
from .gradients import (
    MomentMaps,
    derivatives,
    eigen_pair,
    moment_maps,
    patch_distance,
    patch_trace,
)
from .image import (
    Kernel2D,
    WarpSpec,
    as_image,
    convolve,
    load_image,
    load_raw_f32,
    save_image,
    warp,
)
from .pyramid import OctaveStack, build_pyramid, decimate

__version__ = "0.1.0"

__all__ = [
    "BadWindow",
    "BaselineKind",
    "BlurPipeline",
    "BlurSpec",
    "EasConfig",
    "EvalConfig",
    "FormatError",
    "Kernel2D",
    "Keypoint",
    "MomentMaps",
    "OctaveStack",
    "Region",
    "RepeatabilityResult",
    "SingularWarp",
    "TooSmall",
    "UnknownDetector",
    "WarpSpec",
    "apply_pipeline",
    "as_image",
    "baseline_score",
    "build_pyramid",
    "convolve",
    "correspondences",
    "decimate",
    "derivatives",
    "detect",
    "detect_baseline",
    "detect_by_name",
    "eas_map",
    "edge_mask",
    "eigen_pair",
    "gaussian_kernel",
    "kernels",
    "load_image",
    "load_raw_f32",
    "moment_maps",
    "motion_kernel",
    "nms",
    "octave_window",
    "parse_pipeline",
    "patch_distance",
    "patch_trace",
    "pipeline_text",
    "read_keypoints_csv",
    "read_keypoints_json",
    "repeatability",
    "rotational_blur",
    "salt_pepper",
    "save_image",
    "sweep",
    "testimages",
    "timing",
    "trace_map",
    "warp",
    "write_keypoints_csv",
    "write_keypoints_json",
    "__version__",
]
