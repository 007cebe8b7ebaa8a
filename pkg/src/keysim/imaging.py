"""Image container conventions and photometric operations.

An image is a float64 numpy array with values in [0, 1]:

* grayscale: shape ``(h, w)``
* color:     shape ``(h, w, 3)``, row-major, RGB

Pixels stay floating point through the whole renderer -> warp -> train
chain and are quantized to 8 bit only at file I/O, which avoids
double-quantization artifacts.  Every operation returns a new array with
values clamped back into [0, 1].
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import correlate1d

from .errors import InvalidParameter, IoFailure
from .rng import Rng

__all__ = [
    "Rng",
    "validate_image",
    "clamp01",
    "gaussian_blur",
    "add_gaussian_noise",
    "adjust_brightness_contrast",
    "to_gray",
    "resize_bilinear",
    "write_image",
    "read_image",
]


def validate_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim not in (2, 3) or (img.ndim == 3 and img.shape[2] not in (1, 3)):
        raise InvalidParameter(f"image shape {img.shape} not (h,w) or (h,w,3)")
    if img.ndim == 3 and img.shape[2] == 1:
        img = img[:, :, 0]
    if not np.isfinite(img).all():
        raise InvalidParameter("image contains NaN or Inf")
    return img


def clamp01(img: np.ndarray) -> np.ndarray:
    return np.clip(img, 0.0, 1.0)


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(np.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with reflect padding.

    Kernel radius is ceil(3*sigma) and the kernel is normalized to sum 1,
    so constant images are preserved exactly.  sigma = 0 returns the input
    unchanged.
    """
    img = validate_image(img)
    if not np.isfinite(sigma):
        raise InvalidParameter("sigma must be finite")
    if sigma < 0:
        raise InvalidParameter("sigma must be >= 0")
    if sigma == 0:
        return img
    k = _gaussian_kernel(sigma)
    # scipy's "mirror" mode is reflection without repeating the edge sample.
    out = correlate1d(img, k, axis=0, mode="mirror")
    out = correlate1d(out, k, axis=1, mode="mirror")
    return clamp01(out)


def add_gaussian_noise(img: np.ndarray, sigma: float, rng: Rng) -> np.ndarray:
    """Add i.i.d. N(0, sigma^2) per pixel, then clamp to [0, 1]."""
    img = validate_image(img)
    if sigma < 0:
        raise InvalidParameter("sigma must be >= 0")
    if sigma == 0:
        return img
    return clamp01(img + rng.normal(0.0, sigma, img.shape))


def adjust_brightness_contrast(img: np.ndarray, brightness: float, contrast: float) -> np.ndarray:
    """Affine photometric map around mid-gray.

    out = clamp(contrast * (in - 0.5) + 0.5 + brightness); (0, 1) is identity.
    """
    img = validate_image(img)
    if contrast <= 0:
        raise InvalidParameter("contrast must be > 0")
    return clamp01(contrast * (img - 0.5) + 0.5 + brightness)


def to_gray(img: np.ndarray) -> np.ndarray:
    """Rec.601 luma; grayscale inputs pass through."""
    img = validate_image(img)
    if img.ndim == 2:
        return img
    return img @ np.array([0.299, 0.587, 0.114])


def resize_bilinear(img: np.ndarray, out_size: tuple[int, int]) -> np.ndarray:
    """Resize to (width, height) with bilinear sampling at pixel centers.

    Uses the half-pixel-center convention, so resizing to the input size is
    the identity.  Border samples clamp to the edge.
    """
    img = validate_image(img)
    out_w, out_h = int(out_size[0]), int(out_size[1])
    if out_w <= 0 or out_h <= 0:
        raise InvalidParameter("output size must be positive")
    in_h, in_w = img.shape[:2]
    xs = (np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5
    ys = (np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5
    xs = np.clip(xs, 0.0, in_w - 1.0)
    ys = np.clip(ys, 0.0, in_h - 1.0)
    x0 = np.clip(np.floor(xs).astype(int), 0, in_w - 1)
    y0 = np.clip(np.floor(ys).astype(int), 0, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    y1 = np.minimum(y0 + 1, in_h - 1)
    fx = (xs - x0)[None, :]
    fy = (ys - y0)[:, None]
    if img.ndim == 3:
        fx = fx[:, :, None]
        fy = fy[:, :, None]
    top = img[y0[:, None], x0[None, :]] * (1 - fx) + img[y0[:, None], x1[None, :]] * fx
    bot = img[y1[:, None], x0[None, :]] * (1 - fx) + img[y1[:, None], x1[None, :]] * fx
    return clamp01(top * (1 - fy) + bot * fy)


def quantize_u8(img: np.ndarray) -> np.ndarray:
    return np.round(clamp01(img) * 255.0).astype(np.uint8)


def dequantize_u8(raw: np.ndarray) -> np.ndarray:
    return raw.astype(np.float64) / 255.0


def write_image(path, img: np.ndarray) -> None:
    """Write binary PPM (P6) for color or PGM (P5) for grayscale, maxval 255."""
    img = validate_image(img)
    raw = quantize_u8(img)
    h, w = raw.shape[:2]
    magic = b"P6" if raw.ndim == 3 else b"P5"
    header = magic + f"\n{w} {h}\n255\n".encode("ascii")
    try:
        with open(path, "wb") as f:
            f.write(header + raw.tobytes())
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def read_image(path) -> np.ndarray:
    """Read a binary PPM/PGM written by :func:`write_image` (bit-exact round trip)."""
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    try:
        pos = 0

        def _token():
            # Exactly one whitespace byte terminates each header token, so the
            # scan never eats pixel bytes that happen to look like whitespace.
            nonlocal pos
            while data[pos : pos + 1].isspace():
                pos += 1
            if data[pos : pos + 1] == b"#":
                pos = data.index(b"\n", pos) + 1
                return _token()
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace():
                pos += 1
            return data[start:pos]

        magic = _token()
        w, h, maxval = int(_token()), int(_token()), int(_token())
        pos += 1  # the single whitespace byte before the binary payload
        rest = data[pos:]
    except (ValueError, IndexError) as e:
        raise IoFailure(f"{path}: malformed PNM header") from e
    if maxval != 255 or magic not in (b"P5", b"P6"):
        raise IoFailure(f"{path}: unsupported PNM variant {magic!r} maxval {maxval}")
    channels = 3 if magic == b"P6" else 1
    need = w * h * channels
    raw = np.frombuffer(rest[:need], dtype=np.uint8)
    if raw.size != need:
        raise IoFailure(f"{path}: truncated pixel payload")
    raw = raw.reshape((h, w, 3)) if channels == 3 else raw.reshape((h, w))
    return dequantize_u8(raw)
