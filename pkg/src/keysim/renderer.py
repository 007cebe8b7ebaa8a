"""Procedural rendering of labeled keypress captures.

One capture is built in screen space first (keyboard, optional on-screen
defense, thumb sprite over the pressed key), then perspective-warped onto
the projected phone quad over a procedural background, and finally
degraded photometrically in a fixed order: illumination, blur,
brightness/contrast, sensor noise.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import fonts
from .errors import InvalidParameter
from .geometry import (
    CameraIntrinsics,
    CameraPose,
    Homography,
    PhoneModel,
    Point2,
    apply_homography_array,
    bilinear_sample,
    compute_homography_dlt,
    project_phone_corners,
)
from .imaging import (
    add_gaussian_noise,
    adjust_brightness_contrast,
    clamp01,
    gaussian_blur,
    resize_bilinear,
)
from .layout import (
    KEYBOARD_RECT,
    TEMPLATE_H,
    TEMPLATE_W,
    KeyboardLayout,
    KeyLabel,
    qwerty_layout,
    randomized_layout,
)
from .rng import Rng

__all__ = [
    "CaptureParams",
    "DefenseSpec",
    "DEFAULT_INTRINSICS",
    "IPHONE_XR_SCREEN",
    "SKIN_PALETTE",
    "qwerty_layout",
    "randomized_layout",
    "render_screen",
    "render_capture",
    "draw_thumb",
    "composite_scene",
    "render_background",
]

# ---------------------------------------------------------------------------
# Device presets

TEMPLATE_CORNERS = (
    Point2(0.0, 0.0),
    Point2(TEMPLATE_W - 1.0, 0.0),
    Point2(TEMPLATE_W - 1.0, TEMPLATE_H - 1.0),
    Point2(0.0, TEMPLATE_H - 1.0),
)

# Active screen area of the victim handset (meters).
IPHONE_XR_SCREEN = PhoneModel(width_m=0.0623, height_m=0.1348, template_corners=TEMPLATE_CORNERS)

# Attacker camera resembling a phone main camera (~60 deg horizontal FOV)
# at half of an 8 MP sensor's linear resolution.
DEFAULT_INTRINSICS = CameraIntrinsics(
    focal_px=1411.0,
    principal_point=Point2(815.5, 611.5),
    sensor_resolution=(1632, 1224),
)

BEZEL_PX = 14  # dark border drawn around the screen, template pixel units

SKIN_PALETTE = np.array(
    [
        [0.96, 0.84, 0.76],
        [0.92, 0.76, 0.65],
        [0.85, 0.65, 0.52],
        [0.70, 0.50, 0.38],
        [0.55, 0.37, 0.26],
        [0.38, 0.26, 0.18],
    ]
)

BACKGROUND_PALETTES = {
    "office": [
        (0.74, 0.76, 0.79),
        (0.55, 0.60, 0.66),
        (0.47, 0.55, 0.47),
        (0.68, 0.64, 0.55),
        (0.62, 0.66, 0.72),
        (0.42, 0.45, 0.50),
    ],
    "warm": [
        (0.62, 0.50, 0.38),
        (0.76, 0.62, 0.45),
        (0.52, 0.42, 0.34),
        (0.80, 0.70, 0.54),
        (0.58, 0.46, 0.42),
        (0.70, 0.58, 0.50),
    ],
}

# Screen colors
_SCREEN_BG = (0.93, 0.94, 0.96)
_STATUS_BAR = (0.86, 0.87, 0.90)
_BUBBLE = (0.88, 0.89, 0.92)
_INPUT_FIELD = (0.99, 0.99, 0.99)
_KB_PANEL = (0.78, 0.80, 0.83)
_KEY_FACE = (0.985, 0.985, 0.985)
_GLYPH = (0.25, 0.26, 0.30)
_HIGHLIGHT = (0.62, 0.76, 0.98)
_BEZEL = (0.10, 0.10, 0.11)

DEFENSE_KINDS = (
    "none",
    "gaussian_screen",
    "small_corruption",
    "large_corruption",
    "thumb_corruption",
)

# size fractions of the keyboard width, and the accepted occluded fraction
# of the keyboard region that a draw must land in
_CORRUPTION_GEOMETRY = {
    "small_corruption": {"count": 5, "size": (0.05, 0.09), "occlusion": (0.02, 0.12)},
    "large_corruption": {"count": 5, "size": (0.22, 0.38), "occlusion": (0.25, 0.45)},
    "thumb_corruption": {"count": 1, "size": (0.16, 0.26), "occlusion": (0.01, 0.60)},
}
_THUMB_CORRUPTION_RADIUS = 12.0  # max offset of the shape center from the key
_SKIN_DECOY_PROB = 0.35  # chance a corruption shape uses a skin-like color


@dataclass(frozen=True)
class DefenseSpec:
    """One on-screen perturbation: kind, strength, and its own seed."""

    kind: str = "none"
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in DEFENSE_KINDS:
            raise InvalidParameter(f"unknown defense kind {self.kind!r}")
        if self.sigma < 0:
            raise InvalidParameter("defense sigma must be >= 0")


@dataclass(frozen=True)
class CaptureParams:
    """One sampled attacker/victim configuration for a single capture."""

    pose: CameraPose
    intr: CameraIntrinsics = DEFAULT_INTRINSICS
    illumination: float = 1.0
    brightness: float = 0.0
    contrast: float = 1.0
    blur_sigma: float = 0.0
    noise_sigma: float = 0.0
    skin_tone: int = 2
    thumb_jitter_px: tuple[float, float] = (0.0, 0.0)
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.skin_tone < len(SKIN_PALETTE):
            raise InvalidParameter(f"skin_tone index out of range: {self.skin_tone}")
        if self.blur_sigma < 0 or self.noise_sigma < 0:
            raise InvalidParameter("blur/noise sigma must be >= 0")
        if self.contrast <= 0:
            raise InvalidParameter("contrast must be > 0")
        if self.illumination <= 0:
            raise InvalidParameter("illumination must be > 0")


# ---------------------------------------------------------------------------
# Screen rendering


def _fill(img, x0, y0, x1, y1, color):
    img[int(y0) : int(y1), int(x0) : int(x1)] = color


@functools.lru_cache(maxsize=64)
def _base_screen(slot_letters: str) -> np.ndarray:
    """Deterministic screen template for a layout; cached read-only."""
    layout = KeyboardLayout(slot_letters)
    img = np.empty((TEMPLATE_H, TEMPLATE_W, 3))
    img[:] = _SCREEN_BG
    _fill(img, 0, 0, TEMPLATE_W, 12, _STATUS_BAR)
    # a couple of fixed chat bubbles so the upper screen is not featureless
    _fill(img, 10, 30, 110, 58, _BUBBLE)
    _fill(img, 56, 72, 150, 96, _BUBBLE)
    _fill(img, 10, 110, 96, 132, _BUBBLE)
    _fill(img, 6, 176, TEMPLATE_W - 6, 192, _INPUT_FIELD)
    kx0, ky0, kx1, ky1 = KEYBOARD_RECT
    _fill(img, kx0, ky0, kx1, ky1, _KB_PANEL)
    for slot, rect in enumerate(layout.slots):
        _fill(img, rect.x0, rect.y0, rect.x1, rect.y1, _KEY_FACE)
        _draw_key_glyph(img, layout.letter_at(slot), rect)
    img.setflags(write=False)
    return img


def _draw_key_glyph(img, letter, rect):
    scale = 2
    gw, gh = fonts.GLYPH_W * scale, fonts.GLYPH_H * scale
    x = int(rect.x0 + (rect.width() - gw) // 2)
    y = int(rect.y0 + (rect.height() - gh) // 2)
    fonts.draw_glyph(img, letter, x, y, scale, _GLYPH)


def render_screen(
    layout: KeyboardLayout, pressed: KeyLabel | None = None, defense: DefenseSpec | None = None
) -> np.ndarray:
    """Template-resolution screen image: keys, pressed highlight, defense.

    The thumb is not part of the screen; render_capture composites it on
    top, so on-screen defenses never occlude the finger itself.
    """
    img = _base_screen(layout.slot_letters).copy()
    if pressed is not None:
        rect = layout.slot_rect(pressed.letter)
        _fill(img, rect.x0, rect.y0, rect.x1, rect.y1, _HIGHLIGHT)
        _draw_key_glyph(img, pressed.letter, rect)
    if defense is not None and defense.kind != "none":
        img = _apply_defense(img, layout, pressed, defense)
    return img


def _apply_defense(img, layout, pressed, defense):
    rng = Rng(defense.seed).child("defense")
    if defense.kind == "gaussian_screen":
        return add_gaussian_noise(img, defense.sigma, rng)
    if defense.kind == "thumb_corruption" and pressed is None:
        raise InvalidParameter("thumb_corruption requires a pressed key")
    geom = _CORRUPTION_GEOMETRY[defense.kind]
    kx0, ky0, kx1, ky1 = KEYBOARD_RECT
    kb_w = kx1 - kx0
    before = img[ky0:ky1, kx0:kx1].copy()
    # redraw until the occluded fraction of the keyboard lands in the
    # configured class range; deterministic, since every attempt consumes
    # the same rng stream
    for _attempt in range(50):
        trial = img.copy()
        for _ in range(geom["count"]):
            size = rng.uniform(*geom["size"]) * kb_w
            if defense.kind == "thumb_corruption":
                cx, cy = layout.slot_rect(pressed.letter).center()
                ang = rng.uniform(0, 2 * math.pi)
                rad = rng.uniform(0, _THUMB_CORRUPTION_RADIUS)
                cx, cy = cx + rad * math.cos(ang), cy + rad * math.sin(ang)
            else:
                cx = rng.uniform(kx0, kx1)
                cy = rng.uniform(ky0, ky1)
            _draw_shape(trial, rng, cx, cy, size)
        changed = np.any(np.abs(trial[ky0:ky1, kx0:kx1] - before) > 0.02, axis=2)
        frac = float(changed.mean())
        lo, hi = geom["occlusion"]
        if lo <= frac <= hi:
            return trial
    raise InvalidParameter(
        f"{defense.kind}: could not reach occlusion range {geom['occlusion']} in 50 draws"
    )


def _shape_color(rng):
    if rng.uniform() < _SKIN_DECOY_PROB:
        base = SKIN_PALETTE[int(rng.integers(0, len(SKIN_PALETTE)))]
        return clamp01(base + rng.uniform(-0.06, 0.06, 3))
    return rng.uniform(0.05, 0.95, 3)


def _draw_shape(img, rng, cx, cy, size):
    """Stamp one opaque random shape (circle, square, or triangle)."""
    kind = int(rng.integers(0, 3))
    color = _shape_color(rng)
    h, w = img.shape[:2]
    r = size / 2.0
    x0, x1 = max(0, int(cx - r - 2)), min(w, int(cx + r + 3))
    y0, y1 = max(0, int(cy - r - 2)), min(h, int(cy + r + 3))
    if x0 >= x1 or y0 >= y1:
        return
    gx, gy = np.meshgrid(np.arange(x0, x1, dtype=float), np.arange(y0, y1, dtype=float))
    dx, dy = gx - cx, gy - cy
    if kind == 0:  # circle
        alpha = np.clip(r + 0.5 - np.hypot(dx, dy), 0.0, 1.0)
    elif kind == 1:  # axis-aligned square
        alpha = np.clip(r + 0.5 - np.maximum(np.abs(dx), np.abs(dy)), 0.0, 1.0)
    else:  # triangle at a random orientation
        theta = rng.uniform(0, 2 * math.pi)
        sd = None
        verts = [
            (cx + 1.25 * r * math.cos(theta + k * 2 * math.pi / 3),
             cy + 1.25 * r * math.sin(theta + k * 2 * math.pi / 3))
            for k in range(3)
        ]
        for k in range(3):
            ax, ay = verts[k]
            bx, by = verts[(k + 1) % 3]
            ex, ey = bx - ax, by - ay
            n = math.hypot(ex, ey)
            d = ((gx - ax) * ey - (gy - ay) * ex) / n  # signed distance to edge
            sd = d if sd is None else np.minimum(sd, d)
        alpha = np.clip(sd + 0.5, 0.0, 1.0)
    region = img[y0:y1, x0:x1]
    region[:] = region * (1 - alpha[..., None]) + color * alpha[..., None]


# ---------------------------------------------------------------------------
# Thumb sprite


def draw_thumb(img: np.ndarray, anchor: tuple[float, float], skin_rgb, rng: Rng) -> np.ndarray:
    """Composite a shaded capsule thumb whose centroid sits at `anchor`.

    The capsule is short by design so that its centroid stays inside the
    pressed key slot for any jitter within the configured bound.
    """
    out = img.copy()
    length = rng.uniform(20.0, 26.0)
    radius = rng.uniform(7.5, 9.0)
    theta = math.radians(rng.uniform(-25.0, 25.0))
    ux, uy = math.sin(theta), -math.cos(theta)  # toward the top of the screen
    ax, ay = anchor
    tipx, tipy = ax + ux * length / 2.0, ay + uy * length / 2.0
    basex, basey = ax - ux * length / 2.0, ay - uy * length / 2.0

    h, w = out.shape[:2]
    pad = radius + 2
    x0 = max(0, int(min(tipx, basex) - pad))
    x1 = min(w, int(max(tipx, basex) + pad + 1))
    y0 = max(0, int(min(tipy, basey) - pad))
    y1 = min(h, int(max(tipy, basey) + pad + 1))
    gx, gy = np.meshgrid(np.arange(x0, x1, dtype=float), np.arange(y0, y1, dtype=float))

    # distance to the capsule axis segment
    vx, vy = basex - tipx, basey - tipy
    seg_len2 = vx * vx + vy * vy
    t = np.clip(((gx - tipx) * vx + (gy - tipy) * vy) / seg_len2, 0.0, 1.0)
    px, py = tipx + t * vx, tipy + t * vy
    dist = np.hypot(gx - px, gy - py)
    alpha = np.clip(radius + 0.5 - dist, 0.0, 1.0)

    radial = np.clip(dist / radius, 0.0, 1.0)
    shade = (1.04 - 0.28 * radial**2) * (1.05 - 0.12 * t)
    color = clamp01(np.asarray(skin_rgb) * shade[..., None])
    # nail: a lighter disc just behind the tip
    nail_d = np.hypot(gx - (tipx + 0.12 * vx), gy - (tipy + 0.12 * vy))
    nail = np.clip(0.45 * radius + 0.5 - nail_d, 0.0, 1.0)
    color = clamp01(color * (1.0 + 0.12 * nail[..., None]))

    region = out[y0:y1, x0:x1]
    region[:] = region * (1 - alpha[..., None]) + color * alpha[..., None]
    return out


# ---------------------------------------------------------------------------
# Scene compositing


def render_background(height: int, width: int, rng: Rng, palette: str = "office") -> np.ndarray:
    """Smooth low-frequency colored field standing in for the surroundings."""
    colors = BACKGROUND_PALETTES[palette]
    base = np.asarray(colors[int(rng.integers(0, len(colors)))])
    coarse = rng.uniform(-0.10, 0.10, (6, 8))
    fld = resize_bilinear(np.clip(coarse + 0.5, 0, 1), (width, height)) - 0.5
    img = base[None, None, :] * (1.0 + 1.6 * fld[:, :, None])
    img += rng.normal(0.0, 0.006, img.shape)
    return clamp01(img)


def _body_image(screen: np.ndarray) -> np.ndarray:
    body = np.empty((TEMPLATE_H + 2 * BEZEL_PX, TEMPLATE_W + 2 * BEZEL_PX, 3))
    body[:] = _BEZEL
    body[BEZEL_PX : BEZEL_PX + TEMPLATE_H, BEZEL_PX : BEZEL_PX + TEMPLATE_W] = screen
    return body


def composite_scene(
    screen: np.ndarray,
    pose: CameraPose,
    intr: CameraIntrinsics,
    phone: PhoneModel,
    rng_background: Rng,
    palette: str = "office",
    corner_jitter_px: float = 0.0,
    rng_jitter: Rng | None = None,
):
    """Warp the (bezel-padded) screen onto its projected quad over a background.

    Returns (frame, corners) where corners are the true projected screen
    corners.  When corner_jitter_px > 0 the rendered quad is independently
    perturbed per corner while the returned corners stay unjittered, which
    models imperfect real-world alignment as a non-projective residual.
    """
    corners = project_phone_corners(pose, intr, phone)
    pts = np.array([[c.x, c.y] for c in corners])
    render_pts = pts
    if corner_jitter_px > 0:
        if rng_jitter is None:
            raise InvalidParameter("corner jitter requested without an rng")
        render_pts = pts + rng_jitter.uniform(-corner_jitter_px, corner_jitter_px, (4, 2))

    h_t2f = compute_homography_dlt(
        np.array([[c.x, c.y] for c in phone.template_corners]), render_pts
    )
    body = _body_image(screen)
    bh, bw = body.shape[:2]

    body_template = np.array(
        [
            [-BEZEL_PX, -BEZEL_PX],
            [TEMPLATE_W - 1 + BEZEL_PX, -BEZEL_PX],
            [TEMPLATE_W - 1 + BEZEL_PX, TEMPLATE_H - 1 + BEZEL_PX],
            [-BEZEL_PX, TEMPLATE_H - 1 + BEZEL_PX],
        ],
        dtype=float,
    )
    body_frame = apply_homography_array(h_t2f, body_template)

    sw, sh = intr.sensor_resolution
    x0 = max(0, int(math.floor(body_frame[:, 0].min())) - 1)
    x1 = min(sw, int(math.ceil(body_frame[:, 0].max())) + 2)
    y0 = max(0, int(math.floor(body_frame[:, 1].min())) - 1)
    y1 = min(sh, int(math.ceil(body_frame[:, 1].max())) + 2)

    frame = render_background(sh, sw, rng_background, palette)
    if x0 >= x1 or y0 >= y1:
        return frame, corners

    hinv = h_t2f.inverse().m
    gx, gy = np.meshgrid(np.arange(x0, x1, dtype=float), np.arange(y0, y1, dtype=float))
    acc_color = np.zeros((y1 - y0, x1 - x0, 3))
    acc_cover = np.zeros((y1 - y0, x1 - x0))
    # 2x2 supersampling keeps far captures antialiased, which is what
    # preserves sub-pixel fingertip position at long distances.
    for dx in (-0.25, 0.25):
        for dy in (-0.25, 0.25):
            sx, sy = gx + dx, gy + dy
            denom = hinv[2, 0] * sx + hinv[2, 1] * sy + hinv[2, 2]
            tx = (hinv[0, 0] * sx + hinv[0, 1] * sy + hinv[0, 2]) / denom
            ty = (hinv[1, 0] * sx + hinv[1, 1] * sy + hinv[1, 2]) / denom
            val, inside = bilinear_sample(body, tx + BEZEL_PX, ty + BEZEL_PX, 0.0)
            acc_color += val
            acc_cover += inside
    acc_color /= 4.0
    acc_cover /= 4.0
    patch = frame[y0:y1, x0:x1]
    frame[y0:y1, x0:x1] = patch * (1 - acc_cover[..., None]) + acc_color
    return frame, corners


def render_capture(
    layout: KeyboardLayout,
    pressed: KeyLabel,
    params: CaptureParams,
    defense: DefenseSpec | None = None,
    *,
    phone: PhoneModel = IPHONE_XR_SCREEN,
    background_palette: str = "office",
    corner_jitter_px: float = 0.0,
    skin_shift: tuple[float, float, float] = (1.0, 1.0, 1.0),
    include_thumb: bool = True,
):
    """Render one labeled capture; returns (frame, true screen corners).

    A pure function of its arguments: all randomness is drawn from named
    child streams of params.seed (and the defense's own seed).
    """
    rng = Rng(params.seed)
    screen = render_screen(layout, pressed, defense)
    if include_thumb:
        cx, cy = layout.slot_rect(pressed.letter).center()
        jx, jy = params.thumb_jitter_px
        skin = clamp01(SKIN_PALETTE[params.skin_tone] * np.asarray(skin_shift))
        screen = draw_thumb(screen, (cx + jx, cy + jy), skin, rng.child("thumb"))

    frame, corners = composite_scene(
        screen,
        params.pose,
        params.intr,
        phone,
        rng.child("background"),
        palette=background_palette,
        corner_jitter_px=corner_jitter_px,
        rng_jitter=rng.child("cornerjitter"),
    )

    frame = clamp01(frame * params.illumination)
    frame = gaussian_blur(frame, params.blur_sigma)
    frame = adjust_brightness_contrast(frame, params.brightness, params.contrast)
    frame = add_gaussian_noise(frame, params.noise_sigma, rng.child("noise"))
    return frame, corners
