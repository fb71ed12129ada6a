"""Image container conventions, file I/O, convolution, and warping.

An image ("ImageF") is a 2-D C-contiguous float64 array of shape
(height, width), row-major, holding luminance in the nominal range [0, 1]
with no NaN or Inf. Every public function in the library takes and
returns images in this form; ``as_image`` coerces and validates.

Supported input formats: PGM (P2/P5, maxval up to 65535) and PNG (8/16-bit
gray and RGB(A); color is reduced to luminance with Rec.601 weights
0.299/0.587/0.114, alpha is ignored). Outputs: 8/16-bit PGM and a raw
float32 dump (two 32-bit little-endian words ``width`` then ``height``,
followed by the raster as little-endian float32, row-major).
"""

import io
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, SingularWarp
from . import kernels

REC601 = (0.299, 0.587, 0.114)


def as_image(a):
    """Coerce to the library's image form and validate the invariants."""
    img = np.ascontiguousarray(a, dtype=np.float64)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"expected a 2-D image, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains NaN or Inf")
    return img


# ---------------------------------------------------------------------------
# File I/O


def _parse_pgm(data):
    if data[:2] not in (b"P2", b"P5"):
        raise FormatError("not a PGM file")
    binary = data[:2] == b"P5"

    # Header tokens (magic, width, height, maxval) with '#' comments.
    pos = 2
    tokens = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise FormatError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as e:
        raise FormatError(f"bad PGM header token: {e}") from None
    if width < 1 or height < 1 or not 1 <= maxval <= 65535:
        raise FormatError(f"bad PGM dimensions {width}x{height} maxval {maxval}")

    n = width * height
    if binary:
        pos += 1  # single whitespace after maxval
        dtype = ">u2" if maxval > 255 else "u1"
        itemsize = 2 if maxval > 255 else 1
        raster = data[pos : pos + n * itemsize]
        if len(raster) < n * itemsize:
            raise FormatError("truncated PGM raster")
        values = np.frombuffer(raster, dtype=dtype, count=n)
    else:
        try:
            values = np.array(data[pos:].split()[:n], dtype=np.int64)
        except ValueError as e:
            raise FormatError(f"bad PGM sample: {e}") from None
        if values.size < n:
            raise FormatError("truncated PGM raster")
    if values.max(initial=0) > maxval:
        raise FormatError("PGM sample exceeds maxval")
    return as_image(values.reshape(height, width).astype(np.float64) / maxval)


def _load_png(path):
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGB")
                mode = "RGB"
            elif mode == "LA":
                im = im.convert("L")
                mode = "L"
            arr = np.asarray(im)
    except UnidentifiedImageError as e:
        raise FormatError(f"unsupported image: {e}") from None
    if mode in ("I", "I;16"):
        img = arr.astype(np.float64) / 65535.0
    elif mode == "L":
        img = arr.astype(np.float64) / 255.0
    elif mode in ("RGB", "RGBA"):
        rgb = arr[:, :, :3].astype(np.float64) / 255.0
        img = REC601[0] * rgb[:, :, 0] + REC601[1] * rgb[:, :, 1] + REC601[2] * rgb[:, :, 2]
    else:
        raise FormatError(f"unsupported PNG mode {mode!r}")
    return as_image(img)


def load_image(path):
    """Load a PGM or PNG file as a luminance image in [0, 1]. The format
    is sniffed from the content, not the extension."""
    with open(path, "rb") as f:
        head = f.read(8)
    if head[:2] in (b"P2", b"P5"):
        with open(path, "rb") as f:
            return _parse_pgm(f.read())
    if head == b"\x89PNG\r\n\x1a\n":
        return _load_png(path)
    raise FormatError(f"{path}: not a PGM or PNG file")


def _quantize(img, maxval):
    # round-half-up, so 0.5 -> 128 at maxval 255
    return np.clip(np.floor(img * maxval + 0.5), 0, maxval)


def save_image(img, path, mode="pgm8"):
    """Write an image as 8/16-bit binary PGM or as a raw float32 dump."""
    img = as_image(img)
    h, w = img.shape
    if mode == "pgm8":
        payload = _quantize(img, 255).astype(np.uint8).tobytes()
        header = f"P5\n{w} {h}\n255\n".encode()
    elif mode == "pgm16":
        payload = _quantize(img, 65535).astype(">u2").tobytes()
        header = f"P5\n{w} {h}\n65535\n".encode()
    elif mode == "raw_f32":
        header = struct.pack("<II", w, h)
        payload = img.astype("<f4").tobytes()
    else:
        raise ValueError(f"unknown save mode {mode!r}")
    with open(path, "wb") as f:
        f.write(header)
        f.write(payload)


def load_raw_f32(path):
    """Read back a raw_f32 dump. Values that fit float32 exactly round-trip
    bit-exactly; the result is returned widened to float64."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 8:
        raise FormatError("truncated raw_f32 header")
    w, h = struct.unpack("<II", data[:8])
    if w < 1 or h < 1:
        raise FormatError(f"bad raw_f32 dimensions {w}x{h}")
    n = w * h
    if (len(data) - 8) // 4 < n:
        raise FormatError("truncated raw_f32 raster")
    raster = np.frombuffer(data, dtype="<f4", count=n, offset=8)
    return as_image(raster.reshape(h, w))


# ---------------------------------------------------------------------------
# Kernels and convolution


@dataclass(frozen=True)
class Kernel2D:
    """A (2*radius_y+1) x (2*radius_x+1) weight grid; separable kernels
    additionally carry their 1-D factors so convolve can run two passes."""

    weights: np.ndarray
    kx: np.ndarray | None = None
    ky: np.ndarray | None = None

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] % 2 == 0 or w.shape[1] % 2 == 0:
            raise ValueError(f"kernel must be odd-sized 2-D, got shape {w.shape}")
        object.__setattr__(self, "weights", w)

    @property
    def radius_x(self):
        return (self.weights.shape[1] - 1) // 2

    @property
    def radius_y(self):
        return (self.weights.shape[0] - 1) // 2

    @classmethod
    def separable(cls, kx, ky):
        kx = np.ascontiguousarray(kx, dtype=np.float64)
        ky = np.ascontiguousarray(ky, dtype=np.float64)
        return cls(weights=np.outer(ky, kx), kx=kx, ky=ky)

    @classmethod
    def identity(cls):
        return cls(weights=np.ones((1, 1)))

    def validate_psf(self):
        """Blur kernels must be non-negative and normalized."""
        if np.any(self.weights < 0):
            raise ValueError("PSF weights must be non-negative")
        if abs(float(self.weights.sum()) - 1.0) > 1e-9:
            raise ValueError("PSF weights must sum to 1")
        return self


def convolve(img, k, border="replicate"):
    """Correlate the image with the kernel window centered at each pixel,
    replicating the border. Kernels carrying 1-D factors run as two
    separable passes (equal to the direct result within 1e-6)."""
    if border != "replicate":
        raise ValueError("only replicate borders are supported")
    img = as_image(img)
    if k.kx is not None and k.ky is not None:
        return kernels.sep_convolve(img, k.kx, k.ky)
    h, w = img.shape
    ry, rx = k.radius_y, k.radius_x
    p = np.pad(img, ((ry, ry), (rx, rx)), mode="edge")
    acc = np.zeros_like(img)
    wts = k.weights
    for j in range(wts.shape[0]):
        for i in range(wts.shape[1]):
            wt = wts[j, i]
            if wt != 0.0:
                acc += wt * p[j : j + h, i : i + w]
    return acc


# ---------------------------------------------------------------------------
# Geometric warps


@dataclass(frozen=True)
class WarpSpec:
    """Forward (source -> destination) homogeneous transform in pixel
    units; warping inverse-maps through it."""

    kind: str
    matrix: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.float64)
        if m.shape != (3, 3):
            raise ValueError(f"warp matrix must be 3x3, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls):
        return cls(kind="identity")

    @classmethod
    def rotation(cls, theta, cx, cy):
        """Rotation by theta radians about (cx, cy); positive theta turns
        +x toward +y (clockwise on screen with y down)."""
        c, s = np.cos(theta), np.sin(theta)
        m = np.array(
            [
                [c, -s, cx - c * cx + s * cy],
                [s, c, cy - s * cx - c * cy],
                [0.0, 0.0, 1.0],
            ]
        )
        return cls(kind="rotation", matrix=m)

    @classmethod
    def affine(cls, a, b, c, d, e, f):
        """Upper-left 2x3 block row-major: x' = a x + b y + c, y' = d x + e y + f."""
        return cls(kind="affine", matrix=np.array([[a, b, c], [d, e, f], [0.0, 0.0, 1.0]]))

    @classmethod
    def scale(cls, s):
        """Uniform scaling about the origin."""
        return cls(kind="scale", matrix=np.diag([float(s), float(s), 1.0]))

    def is_identity(self):
        return np.array_equal(self.matrix, np.eye(3))

    def apply(self, xs, ys):
        """Map source points forward through the transform."""
        m = self.matrix
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.float64)
        d = m[2, 0] * xs + m[2, 1] * ys + m[2, 2]
        return (
            (m[0, 0] * xs + m[0, 1] * ys + m[0, 2]) / d,
            (m[1, 0] * xs + m[1, 1] * ys + m[1, 2]) / d,
        )


def _bilinear(img, sx, sy, border, fill):
    """Sample img at float coords; border is 'fill' (outside -> fill) or
    'replicate' (coords clamped into the image)."""
    h, w = img.shape
    if border == "replicate":
        sx = np.clip(sx, 0.0, w - 1.0)
        sy = np.clip(sy, 0.0, h - 1.0)
        outside = None
    else:
        outside = (sx < 0.0) | (sx > w - 1.0) | (sy < 0.0) | (sy > h - 1.0)
        sx = np.clip(sx, 0.0, w - 1.0)
        sy = np.clip(sy, 0.0, h - 1.0)
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = sx - x0
    fy = sy - y0
    a = img[y0, x0]
    b = img[y0, x1]
    c = img[y1, x0]
    d = img[y1, x1]
    # lerp form: exact at integer coords and on constant images
    top = a + fx * (b - a)
    bot = c + fx * (d - c)
    out = top + fy * (bot - top)
    if outside is not None:
        out[outside] = fill
    return out


def warp(img, w, out_size, fill=0.0, border="fill"):
    """Inverse-map the image through the warp with bilinear sampling.
    out_size is (width, height); destination pixels whose source lies
    outside the image receive `fill` (or the nearest border sample when
    border='replicate')."""
    img = as_image(img)
    m = w.matrix
    if abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) <= 1e-12:
        raise SingularWarp(f"warp matrix is singular: {m.tolist()}")
    inv = np.linalg.inv(m)
    ow, oh = int(out_size[0]), int(out_size[1])
    xs, ys = np.meshgrid(np.arange(ow, dtype=np.float64), np.arange(oh, dtype=np.float64))
    d = inv[2, 0] * xs + inv[2, 1] * ys + inv[2, 2]
    sx = (inv[0, 0] * xs + inv[0, 1] * ys + inv[0, 2]) / d
    sy = (inv[1, 0] * xs + inv[1, 1] * ys + inv[1, 2]) / d
    return _bilinear(img, sx, sy, border, fill)
