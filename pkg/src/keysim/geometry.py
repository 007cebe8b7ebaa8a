"""Planar projective geometry for the capture/alignment pipeline.

Coordinate conventions
----------------------
Phone (world) frame: origin at the screen center, x right, y down, z into
the screen, units meters.  The attacker camera sits in the z < 0 half
space and looks at the origin.  A frontal pose therefore projects the
screen to an upright, axis-aligned rectangle whose orientation matches
the template image.

Image frames: pixel (col, row) = (x, y), with integer coordinates at
pixel centers.  Template corner mapping: template pixel (0, 0) is the
screen's physical top-left corner and (w-1, h-1) the bottom-right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BehindCamera,
    DegenerateConfiguration,
    DegenerateProjection,
    InvalidParameter,
    PointAtInfinity,
    WarpFailure,
)


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParameter(f"non-finite point ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=np.float64)


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics; square pixels, no distortion."""

    focal_px: float
    principal_point: Point2
    sensor_resolution: tuple[int, int]  # (width_px, height_px)

    def __post_init__(self):
        w, h = self.sensor_resolution
        if self.focal_px <= 0 or not math.isfinite(self.focal_px):
            raise InvalidParameter("focal_px must be a positive finite number")
        if int(w) <= 0 or int(h) <= 0:
            raise InvalidParameter("sensor resolution must be positive")
        pp = self.principal_point
        if not (0 <= pp.x < w and 0 <= pp.y < h):
            raise InvalidParameter("principal point must lie inside the sensor")


@dataclass(frozen=True)
class CameraPose:
    """Attacker viewpoint: orbit position around the phone plus roll.

    The camera is placed at `distance_m` from the screen center along the
    direction given by yaw (about the vertical axis) and pitch (about the
    horizontal axis), always looking at the center; roll spins it about
    the optical axis.
    """

    distance_m: float
    yaw_deg: float = 0.0
    pitch_deg: float = 0.0
    roll_deg: float = 0.0

    def __post_init__(self):
        vals = (self.distance_m, self.yaw_deg, self.pitch_deg, self.roll_deg)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameter("pose fields must be finite")
        if self.distance_m <= 0:
            raise InvalidParameter("distance_m must be > 0")


@dataclass(frozen=True)
class PhoneModel:
    """Physical screen dimensions plus their template-image pixel positions."""

    width_m: float
    height_m: float
    template_corners: tuple[Point2, Point2, Point2, Point2]  # TL, TR, BR, BL

    def __post_init__(self):
        if self.width_m <= 0 or self.height_m <= 0:
            raise InvalidParameter("phone dimensions must be positive")
        pts = np.array([c.as_array() for c in self.template_corners])
        if abs(_polygon_area(pts)) < 1e-9 or not _is_convex(pts):
            raise InvalidParameter("template corners must form a convex quadrilateral")

    def plane_corners_m(self) -> np.ndarray:
        """Screen corners in the phone frame, ordered TL, TR, BR, BL."""
        hw, hh = self.width_m / 2.0, self.height_m / 2.0
        return np.array(
            [[-hw, -hh, 0.0], [hw, -hh, 0.0], [hw, hh, 0.0], [-hw, hh, 0.0]]
        )


class Homography:
    """Invertible 3x3 projective map, stored with m[2][2] normalized to 1."""

    def __init__(self, m):
        m = np.asarray(m, dtype=np.float64).reshape(3, 3).copy()
        if not np.isfinite(m).all():
            raise InvalidParameter("homography entries must be finite")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise InvalidParameter("homography must be invertible (|det| > 1e-12)")
        if abs(m[2, 2]) > 1e-12:
            m /= m[2, 2]
        self.m = m

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def inverse(self) -> "Homography":
        return Homography(np.linalg.inv(self.m))

    def compose(self, other: "Homography") -> "Homography":
        """self after other: (self.compose(other))(p) = self(other(p))."""
        return Homography(self.m @ other.m)

    def to_text(self) -> str:
        """9 row-major decimal values on one line (manifest embedding form)."""
        return " ".join(repr(float(v)) for v in self.m.ravel())

    @classmethod
    def from_text(cls, text: str) -> "Homography":
        vals = [float(t) for t in text.split()]
        if len(vals) != 9:
            raise InvalidParameter("homography text must hold 9 values")
        return cls(np.array(vals).reshape(3, 3))

    def __repr__(self) -> str:  # pragma: no cover
        return f"Homography({self.m.tolist()})"


def _polygon_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _is_convex(pts: np.ndarray) -> bool:
    crosses = []
    for i in range(4):
        a, b, c = pts[i], pts[(i + 1) % 4], pts[(i + 2) % 4]
        ab, bc = b - a, c - b
        crosses.append(ab[0] * bc[1] - ab[1] * bc[0])
    crosses = np.array(crosses)
    return bool(np.all(crosses > 0) or np.all(crosses < 0))


def _rotation_y(deg: float) -> np.ndarray:
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rotation_x(deg: float) -> np.ndarray:
    c, s = math.cos(math.radians(deg)), math.sin(math.radians(deg))
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def camera_frame(pose: CameraPose) -> tuple[np.ndarray, np.ndarray]:
    """Camera center C (world) and world->camera rotation R for a pose.

    Look-at construction: forward axis points from C to the origin, the
    vertical hint is world +y (down), then roll is applied about forward.
    """
    center = _rotation_y(pose.yaw_deg) @ _rotation_x(pose.pitch_deg) @ np.array([0.0, 0.0, -pose.distance_m])
    fwd = -center / np.linalg.norm(center)
    y_hint = np.array([0.0, 1.0, 0.0])
    right = np.cross(y_hint, fwd)
    n = np.linalg.norm(right)
    if n < 1e-12:
        raise InvalidParameter("pose looks along the vertical axis; pitch too extreme")
    right /= n
    down = np.cross(fwd, right)
    cr, sr = math.cos(math.radians(pose.roll_deg)), math.sin(math.radians(pose.roll_deg))
    right_r = cr * right + sr * down
    down_r = -sr * right + cr * down
    rot = np.stack([right_r, down_r, fwd])  # rows: camera x, y, z in world coords
    return center, rot


def project_points(points_world: np.ndarray, pose: CameraPose, intr: CameraIntrinsics) -> np.ndarray:
    """Project Nx3 world points to Nx2 pixel positions; raises BehindCamera."""
    center, rot = camera_frame(pose)
    cam = (np.asarray(points_world, dtype=np.float64) - center) @ rot.T
    if np.any(cam[:, 2] <= 0):
        raise BehindCamera("point projects to non-positive depth")
    pp = intr.principal_point
    u = intr.focal_px * cam[:, 0] / cam[:, 2] + pp.x
    v = intr.focal_px * cam[:, 1] / cam[:, 2] + pp.y
    return np.stack([u, v], axis=1)


def project_phone_corners(
    pose: CameraPose, intr: CameraIntrinsics, phone: PhoneModel
) -> tuple[Point2, Point2, Point2, Point2]:
    """Pixel positions of the four screen corners, ordered TL, TR, BR, BL."""
    px = project_points(phone.plane_corners_m(), pose, intr)
    if abs(_polygon_area(px)) < 4.0:
        raise DegenerateProjection("projected quad area below 4 px^2")
    return tuple(Point2(float(u), float(v)) for u, v in px)


def _collinear_triple_exists(pts: np.ndarray, tol: float) -> bool:
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                a, b, c = pts[i], pts[j], pts[k]
                cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
                if abs(cross) < tol:
                    return True
    return False


def _normalizing_transform(pts: np.ndarray) -> np.ndarray:
    """Hartley conditioning: centroid to origin, mean distance to sqrt(2)."""
    centroid = pts.mean(axis=0)
    d = np.linalg.norm(pts - centroid, axis=1).mean()
    if d < 1e-12:
        raise DegenerateConfiguration("coincident points")
    s = math.sqrt(2.0) / d
    return np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])


def compute_homography_dlt(src, dst) -> Homography:
    """Exact 4-point homography via the direct linear transform.

    Both point sets are Hartley-normalized, the 8x9 homogeneous system is
    solved by SVD null-space extraction, and the result is denormalized.
    Raises DegenerateConfiguration when either quad has three collinear
    points (detected geometrically and via the conditioning of the
    normalized system).
    """
    src = np.array([[p.x, p.y] if isinstance(p, Point2) else p for p in src], dtype=np.float64)
    dst = np.array([[p.x, p.y] if isinstance(p, Point2) else p for p in dst], dtype=np.float64)
    if src.shape != (4, 2) or dst.shape != (4, 2):
        raise InvalidParameter("expected 4 source and 4 destination points")

    t_src = _normalizing_transform(src)
    t_dst = _normalizing_transform(dst)
    sn = _to_homogeneous(src) @ t_src.T
    dn = _to_homogeneous(dst) @ t_dst.T
    # Normalized coordinates have unit scale, so a fixed tolerance is meaningful.
    if _collinear_triple_exists(sn[:, :2], 1e-8) or _collinear_triple_exists(dn[:, :2], 1e-8):
        raise DegenerateConfiguration("three collinear points in a quad")

    a = np.zeros((8, 9))
    for i in range(4):
        x, y, _ = sn[i]
        u, v, _ = dn[i]
        a[2 * i] = [-x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u]
        a[2 * i + 1] = [0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v]
    _, sv, vt = np.linalg.svd(a)
    # Rank < 8 means the correspondence does not pin down a unique map.
    if sv[7] < 1e-10 * sv[0]:
        raise DegenerateConfiguration("correspondences do not determine a unique homography")
    h_norm = vt[-1].reshape(3, 3)
    h = np.linalg.inv(t_dst) @ h_norm @ t_src
    return Homography(h)


def _to_homogeneous(pts: np.ndarray) -> np.ndarray:
    return np.hstack([pts, np.ones((pts.shape[0], 1))])


def apply_homography(h: Homography, p: Point2) -> Point2:
    """Perspective-divided image of p under h."""
    v = h.m @ np.array([p.x, p.y, 1.0])
    if abs(v[2]) <= 1e-12:
        raise PointAtInfinity(f"point ({p.x}, {p.y}) maps to infinity")
    return Point2(float(v[0] / v[2]), float(v[1] / v[2]))


def apply_homography_array(h: Homography, pts: np.ndarray) -> np.ndarray:
    """Vectorized apply_homography over an (N, 2) array."""
    v = _to_homogeneous(np.asarray(pts, dtype=np.float64)) @ h.m.T
    w = v[:, 2]
    if np.any(np.abs(w) <= 1e-12):
        raise PointAtInfinity("a point maps to infinity")
    return v[:, :2] / w[:, None]


def bilinear_sample(img: np.ndarray, xs: np.ndarray, ys: np.ndarray, fill: float = 0.0):
    """Sample img at continuous (xs, ys); out-of-bounds points get `fill`.

    Returns (values, inside_mask).  Integer coordinates address pixel
    centers, so sampling at the integer grid reproduces the image exactly.
    """
    h, w = img.shape[:2]
    inside = (xs >= 0) & (xs <= w - 1) & (ys >= 0) & (ys <= h - 1)
    xc = np.clip(xs, 0.0, w - 1.0)
    yc = np.clip(ys, 0.0, h - 1.0)
    x0 = np.clip(np.floor(xc).astype(int), 0, w - 1)
    y0 = np.clip(np.floor(yc).astype(int), 0, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = xc - x0
    fy = yc - y0
    if img.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]
    val = (
        img[y0, x0] * (1 - fx) * (1 - fy)
        + img[y0, x1] * fx * (1 - fy)
        + img[y1, x0] * (1 - fx) * fy
        + img[y1, x1] * fx * fy
    )
    mask = inside if img.ndim == 2 else inside[..., None]
    val = np.where(mask, val, fill)
    return val, inside


def warp_to_template(
    frame: np.ndarray, h: Homography, template_size: tuple[int, int], fill: float = 0.0
) -> np.ndarray:
    """Warp a captured frame onto the template grid.

    `h` maps frame coordinates to template coordinates; each output pixel
    is a bilinear sample of the frame at the inverse-mapped location, with
    out-of-bounds samples set to `fill`.
    """
    w, ht = int(template_size[0]), int(template_size[1])
    frame = np.asarray(frame, dtype=np.float64)
    hinv = h.inverse().m
    gx, gy = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(ht, dtype=np.float64))
    denom = hinv[2, 0] * gx + hinv[2, 1] * gy + hinv[2, 2]
    if np.any(np.abs(denom) <= 1e-12):
        raise WarpFailure("template grid crosses the line at infinity")
    xs = (hinv[0, 0] * gx + hinv[0, 1] * gy + hinv[0, 2]) / denom
    ys = (hinv[1, 0] * gx + hinv[1, 1] * gy + hinv[1, 2]) / denom
    val, _ = bilinear_sample(frame, xs, ys, fill)
    return val
