"""Synthetic image degradation: Gaussian, linear-motion, and rotational
blur, salt-and-pepper noise, and ordered pipelines of those steps with
optional rectangular regions for space-variant application.

Pipelines are describable as line-oriented text (one step per line):

    gaussian sigma=9
    motion l=30 theta=1.5708
    rotational alpha=1.0472 cx=256 cy=256
    saltpepper frac=0.1 seed=42

Any step may carry a trailing ``region x=.. y=.. w=.. h=..`` clause; the
step is then computed on the full image but blended in only inside that
rectangle (hard-edged), leaving outside pixels bitwise untouched.
Everything is deterministic: the noise generator is a fixed counter
hash, so identical inputs and seeds reproduce outputs bitwise.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .image import Kernel2D, WarpSpec, as_image, convolve, warp

KINDS = ("gaussian", "motion", "rotational", "saltpepper")

# splitmix64 mixing constants; the per-pixel hash is
#   z = mix(seed + (index + 1) * GOLDEN)
# with the output mapped to [0, 1) from the top 53 bits.
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in pixel units, clipped to the image at
    application time."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"region must have positive size, got {self.w}x{self.h}")


@dataclass(frozen=True)
class BlurSpec:
    """One degradation step. Which parameters matter depends on `kind`:
    gaussian(sigma), motion(l, theta), rotational(alpha, cx, cy with
    None meaning the image center), saltpepper(frac, seed)."""

    kind: str
    sigma: float = 0.0
    l: float = 0.0
    theta: float = 0.0
    alpha: float = 0.0
    cx: float | None = None
    cy: float | None = None
    frac: float = 0.0
    seed: int = 0
    region: Region | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown blur kind {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError(f"gaussian needs sigma > 0, got {self.sigma}")
        if self.kind == "motion" and not self.l >= 1:
            raise ValueError(f"motion needs l >= 1, got {self.l}")
        if self.kind == "rotational" and not 0 < self.alpha < 2 * math.pi:
            raise ValueError(f"rotational needs 0 < alpha < 2*pi, got {self.alpha}")
        if self.kind == "saltpepper" and not 0 <= self.frac <= 1:
            raise ValueError(f"saltpepper needs frac in [0, 1], got {self.frac}")

    @classmethod
    def gaussian(cls, sigma, region=None):
        return cls(kind="gaussian", sigma=float(sigma), region=region)

    @classmethod
    def motion(cls, l, theta, region=None):
        return cls(kind="motion", l=float(l), theta=float(theta), region=region)

    @classmethod
    def rotational(cls, alpha, cx=None, cy=None, region=None):
        return cls(kind="rotational", alpha=float(alpha), cx=cx, cy=cy, region=region)

    @classmethod
    def salt_pepper(cls, frac, seed=0, region=None):
        return cls(kind="saltpepper", frac=float(frac), seed=int(seed), region=region)


@dataclass(frozen=True)
class BlurPipeline:
    steps: tuple

    def __post_init__(self):
        steps = tuple(self.steps)
        if not steps:
            raise ValueError("pipeline must contain at least one step")
        object.__setattr__(self, "steps", steps)


# ---------------------------------------------------------------------------
# Kernels


def gaussian_kernel(sigma):
    """Separable Gaussian PSF with radius ceil(3*sigma), normalized."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    radius = int(math.ceil(3.0 * sigma))
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    w = np.exp(-(d * d) / (2.0 * sigma * sigma))
    w /= w.sum()
    return Kernel2D.separable(w, w).validate_psf()


def motion_kernel(l, theta):
    """PSF of a centered line segment: round(l) unit-spaced point samples
    along direction theta, splatted bilinearly and normalized. theta is
    taken modulo pi (a line has no sense of direction), and axis-aligned
    directions are snapped exact so e.g. l=3, theta=0 yields the crisp
    horizontal 3-tap {1/3, 1/3, 1/3}."""
    if not l >= 1:
        raise ValueError(f"l must be at least 1, got {l}")
    n = max(1, int(math.floor(l + 0.5)))
    if n == 1:
        return Kernel2D.identity().validate_psf()
    tc = math.fmod(theta, math.pi)
    if tc < 0:
        tc += math.pi
    c, s = math.cos(tc), math.sin(tc)
    if abs(c) < 1e-12:
        c, s = 0.0, 1.0
    elif abs(s) < 1e-12:
        c, s = 1.0 if c > 0 else -1.0, 0.0
    t = np.arange(n, dtype=np.float64) - (n - 1) / 2.0
    px = t * c
    py = t * s
    rx = int(np.floor(np.abs(px).max())) + 1
    ry = int(np.floor(np.abs(py).max())) + 1
    k = np.zeros((2 * ry + 1, 2 * rx + 1))
    for i in range(n):
        gx = rx + px[i]
        gy = ry + py[i]
        x0 = int(math.floor(gx))
        y0 = int(math.floor(gy))
        fx = gx - x0
        fy = gy - y0
        k[y0, x0] += (1.0 - fx) * (1.0 - fy)
        k[y0, x0 + 1] += fx * (1.0 - fy)
        k[y0 + 1, x0] += (1.0 - fx) * fy
        k[y0 + 1, x0 + 1] += fx * fy
    rows = np.nonzero(np.any(k != 0.0, axis=1))[0]
    cols = np.nonzero(np.any(k != 0.0, axis=0))[0]
    k = np.ascontiguousarray(k[rows[0] : rows[-1] + 1, cols[0] : cols[-1] + 1])
    k /= k.sum()
    if k.shape[0] == 1:
        return Kernel2D.separable(k[0], np.ones(1)).validate_psf()
    if k.shape[1] == 1:
        return Kernel2D.separable(np.ones(1), k[:, 0]).validate_psf()
    return Kernel2D(weights=k).validate_psf()


# ---------------------------------------------------------------------------
# Non-convolution degradations


def _pairwise_mean(arrays):
    """Mean accumulated as a balanced pairwise tree so that a power-of-two
    count of identical arrays averages back to itself exactly."""
    stack = []
    n = 0
    for a in arrays:
        n += 1
        count, cur = 1, a
        while stack and stack[-1][0] == count:
            c, b = stack.pop()
            count, cur = count + c, b + cur
        stack.append((count, cur))
    if not stack:
        raise ValueError("no arrays to average")
    count, total = stack.pop()
    while stack:
        c, b = stack.pop()
        total = b + total
        count += c
    return total / float(n)


def rotational_blur(img, alpha, center=None, samples=64):
    """Average of `samples` bilinear rotations of the image by angles
    uniformly spanning [-alpha/2, +alpha/2] about `center` (image center
    when None); rotated samples falling outside replicate the border."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if samples < 2:
        raise ValueError(f"samples must be at least 2, got {samples}")
    img = as_image(img)
    h, w = img.shape
    if center is None:
        center = ((w - 1) / 2.0, (h - 1) / 2.0)
    cx, cy = float(center[0]), float(center[1])
    angles = np.linspace(-alpha / 2.0, alpha / 2.0, samples)
    rotations = (
        warp(img, WarpSpec.rotation(a, cx, cy), (w, h), border="replicate")
        for a in angles
    )
    return _pairwise_mean(rotations)


def salt_pepper(img, fraction, seed=0):
    """Replace `fraction` of the pixels with 0 or 1 equiprobably.

    Selection and polarity come from a splitmix64-style hash of
    (seed, pixel index), so the output depends only on (img, fraction,
    seed) and is bitwise reproducible; see module docstring for the
    exact constants.
    """
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    img = as_image(img)
    n = img.size
    idx = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(seed % (1 << 64)) + idx * GOLDEN
    z ^= z >> np.uint64(30)
    z *= MIX1
    z ^= z >> np.uint64(27)
    z *= MIX2
    z ^= z >> np.uint64(31)
    u = (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
    sel = u < fraction
    out = img.copy()
    flat = out.reshape(-1)
    flat[sel] = (z[sel] & np.uint64(1)).astype(np.float64)
    return out


# ---------------------------------------------------------------------------
# Pipelines


def _apply_step(img, step):
    if step.kind == "gaussian":
        return convolve(img, gaussian_kernel(step.sigma))
    if step.kind == "motion":
        return convolve(img, motion_kernel(step.l, step.theta))
    if step.kind == "rotational":
        center = None if step.cx is None or step.cy is None else (step.cx, step.cy)
        return rotational_blur(img, step.alpha, center=center)
    return salt_pepper(img, step.frac, step.seed)


def apply_pipeline(img, p):
    """Apply the pipeline's steps in order. A step with a region is
    computed on the full image and blended in hard-edged inside the
    rectangle; pixels outside stay bitwise identical."""
    img = as_image(img)
    for step in p.steps:
        full = _apply_step(img, step)
        if step.region is None:
            img = full
        else:
            h, w = img.shape
            r = step.region
            x0, y0 = max(0, r.x), max(0, r.y)
            x1, y1 = min(w, r.x + r.w), min(h, r.y + r.h)
            out = img.copy()
            if x0 < x1 and y0 < y1:
                out[y0:y1, x0:x1] = full[y0:y1, x0:x1]
            img = out
    return img


# ---------------------------------------------------------------------------
# Text format


def _parse_kv(tokens, line):
    kv = {}
    for tok in tokens:
        if "=" not in tok:
            raise FormatError(f"expected key=value, got {tok!r} in line {line!r}")
        key, _, val = tok.partition("=")
        kv[key] = val
    return kv


def _num(kv, key, line, cast=float):
    if key not in kv:
        raise FormatError(f"missing {key}= in line {line!r}")
    try:
        return cast(kv.pop(key))
    except ValueError:
        raise FormatError(f"bad value for {key}= in line {line!r}") from None


def parse_step(line, default_seed=0):
    """Parse one pipeline line into a blur step."""
    tokens = line.split()
    kind = tokens[0]
    region = None
    if "region" in tokens:
        i = tokens.index("region")
        rkv = _parse_kv(tokens[i + 1 :], line)
        try:
            region = Region(
                x=_num(rkv, "x", line, int),
                y=_num(rkv, "y", line, int),
                w=_num(rkv, "w", line, int),
                h=_num(rkv, "h", line, int),
            )
        except FormatError:
            raise
        except ValueError as e:
            raise FormatError(f"invalid region in line {line!r}: {e}") from None
        if rkv:
            raise FormatError(f"unknown region keys {sorted(rkv)} in line {line!r}")
        tokens = tokens[:i]
    kv = _parse_kv(tokens[1:], line)
    try:
        if kind == "gaussian":
            step = BlurSpec.gaussian(_num(kv, "sigma", line), region=region)
        elif kind == "motion":
            step = BlurSpec.motion(
                _num(kv, "l", line), _num(kv, "theta", line), region=region
            )
        elif kind == "rotational":
            alpha = _num(kv, "alpha", line)
            cx = _num(kv, "cx", line) if "cx" in kv else None
            cy = _num(kv, "cy", line) if "cy" in kv else None
            step = BlurSpec.rotational(alpha, cx=cx, cy=cy, region=region)
        elif kind == "saltpepper":
            frac = _num(kv, "frac", line)
            seed = _num(kv, "seed", line, int) if "seed" in kv else default_seed
            step = BlurSpec.salt_pepper(frac, seed=seed, region=region)
        else:
            raise FormatError(f"unknown step kind {kind!r} in line {line!r}")
    except ValueError as e:
        raise FormatError(f"invalid step {line!r}: {e}") from None
    if kv:
        raise FormatError(f"unknown keys {sorted(kv)} in line {line!r}")
    return step


def parse_pipeline(text, default_seed=0):
    """Parse the line-oriented pipeline format ('#' starts a comment).
    saltpepper lines may omit seed=, inheriting `default_seed`."""
    steps = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        steps.append(parse_step(line, default_seed=default_seed))
    if not steps:
        raise FormatError("pipeline text contains no steps")
    return BlurPipeline(steps=tuple(steps))


def step_text(step):
    """Canonical single-line form of a step (re-parseable)."""
    if step.kind == "gaussian":
        body = f"gaussian sigma={step.sigma:.9g}"
    elif step.kind == "motion":
        body = f"motion l={step.l:.9g} theta={step.theta:.9g}"
    elif step.kind == "rotational":
        body = f"rotational alpha={step.alpha:.9g}"
        if step.cx is not None and step.cy is not None:
            body += f" cx={step.cx:.9g} cy={step.cy:.9g}"
    else:
        body = f"saltpepper frac={step.frac:.9g} seed={step.seed}"
    if step.region is not None:
        r = step.region
        body += f" region x={r.x} y={r.y} w={r.w} h={r.h}"
    return body


def pipeline_text(p):
    """Canonical multi-line form, one step per line."""
    return "\n".join(step_text(s) for s in p.steps)


def pipeline_condition(p):
    """Single-line description for report rows."""
    return "; ".join(step_text(s) for s in p.steps)
