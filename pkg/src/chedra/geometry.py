"""Exact-formula geometric primitives.

Profile-point coordinates in a meridian plane, rotations about the vertical
axis, and the three families of axial maps (central scaling, perspective
collineation, central perspectivity) together with their limit forms when a
tip moves to infinity (translation, reflection).

All coordinates use the frame with the axis as z-axis; the middle cone tip
sits at the origin unless a map is built around a different center height.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .config import ABS_TOLERANCE, base_tolerance
from .errors import (
    DegenerateTip,
    DiscriminantNegative,
    IdealImage,
    InvalidTipConfiguration,
    InvariantError,
)


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise InvariantError(f"point component is not finite: {c!r}")

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "Point3":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class AxisTip:
    """A cone tip on the axis: either the finite point (0, 0, z) or the ideal point."""

    z: Optional[float] = None

    @classmethod
    def finite(cls, z: float) -> "AxisTip":
        if not math.isfinite(z):
            raise InvariantError("finite tip requires a finite height")
        return cls(float(z))

    @classmethod
    def ideal(cls) -> "AxisTip":
        return cls(None)

    @property
    def is_ideal(self) -> bool:
        return self.z is None


class MapKind(Enum):
    CENTRAL_SCALING = "CentralScaling"
    PERSPECTIVE_COLLINEATION = "PerspectiveCollineation"
    CENTRAL_PERSPECTIVITY = "CentralPerspectivity"
    TRANSLATION = "Translation"
    REFLECTION = "Reflection"


@dataclass(frozen=True)
class ProfilePoint:
    """Distance from the axis and height of a profile point; d >= 0 by convention."""

    d: float
    z: float
    boundary: bool = False


@dataclass(frozen=True)
class AxialMap:
    """A projective transformation of 3-space that maps the axis to itself."""

    kind: MapKind
    matrix: np.ndarray  # 4x4 homogeneous, last-row normalization deferred to apply_map
    center: AxisTip
    source: Optional[AxisTip] = None
    target: Optional[AxisTip] = None
    axis_height: Optional[float] = None  # pointwise-fixed plane of a collineation
    plane_source: Optional[float] = None  # source plane height of a perspectivity
    plane_target: Optional[float] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise InvariantError("axial map matrix must be 4x4")
        if abs(np.linalg.det(m)) < ABS_TOLERANCE:
            raise InvariantError("axial map matrix must be invertible")
        object.__setattr__(self, "matrix", m)


def profile_point(a: float, s: float, t: float) -> ProfilePoint:
    """Coordinates (d, z) of the profile point with bar lengths s, t at tip distance a.

    d and z satisfy d^2 + z^2 = s^2 and d^2 + (z - a)^2 = t^2 with d >= 0.
    The driving parameter may be negative (axis-reversed local frames of
    chained strips); a = 0 is rejected.
    """
    if a == 0:
        raise InvariantError("tip distance a must be nonzero")
    if s <= 0 or t <= 0:
        raise InvariantError("bar lengths s, t must be positive")
    a2, s2, t2 = a * a, s * s, t * t
    disc = 2 * a2 * s2 + 2 * a2 * t2 + 2 * s2 * t2 - a2 * a2 - s2 * s2 - t2 * t2
    eps = 1e-12 * (a2 * a2 + s2 * s2 + t2 * t2)
    if disc < -eps:
        raise DiscriminantNegative(
            f"triangle inequality fails for (a={a}, s={s}, t={t}): discriminant {disc}"
        )
    z = (a2 + s2 - t2) / (2 * a)
    d = math.sqrt(max(disc, 0.0)) / (2 * abs(a))
    return ProfilePoint(d=d, z=z, boundary=disc <= eps)


def rotate_about_axis(p: Point3, phi: float) -> Point3:
    """Rotate a point about the z-axis by phi radians."""
    c, s = math.cos(phi), math.sin(phi)
    return Point3(c * p.x - s * p.y, s * p.x + c * p.y, p.z)


def _scaling_matrix(center_z: float, factor: float) -> np.ndarray:
    m = np.eye(4)
    m[0, 0] = m[1, 1] = m[2, 2] = factor
    m[2, 3] = center_z * (1.0 - factor)
    return m


def _translation_matrix(dz: float) -> np.ndarray:
    m = np.eye(4)
    m[2, 3] = dz
    return m


def _reflection_matrix(plane_z: float) -> np.ndarray:
    m = np.eye(4)
    m[2, 2] = -1.0
    m[2, 3] = 2.0 * plane_z
    return m


def _collineation_matrix(center_z: float, source_z: float, target_z: float,
                         axis_height: float) -> np.ndarray:
    # homology with center (0,0,c), fixed plane z = M, mapping (0,0,a) to (0,0,b):
    # I + kappa * C * pi^T with pi = (0, 0, 1, -M)
    denom = (source_z - axis_height) * (target_z - center_z)
    if abs(denom) < ABS_TOLERANCE:
        raise InvalidTipConfiguration(
            "collineation is degenerate: source on the axis plane or target at the center"
        )
    kappa = (source_z - target_z) / denom
    m = np.eye(4)
    m[2, 2] += kappa * center_z
    m[2, 3] += -kappa * center_z * axis_height
    m[3, 2] += kappa
    m[3, 3] += -kappa * axis_height
    return m


def make_axial_map(kind: MapKind,
                   center: AxisTip,
                   source: Optional[AxisTip] = None,
                   target: Optional[AxisTip] = None,
                   ratio: Optional[float] = None,
                   axis_height: Optional[float] = None,
                   plane_source: Optional[float] = None,
                   plane_target: Optional[float] = None) -> AxialMap:
    """Build the axial map of the requested kind, degenerating to the limit forms.

    An ideal center turns a scaling into a translation and a collineation into
    a reflection.  A scaling whose source and target tips are both ideal is
    defined by the explicit ratio (the ideal tip stays fixed).  A perspectivity
    needs the two plane heights instead of source/target tips.
    """
    if kind in (MapKind.CENTRAL_SCALING, MapKind.TRANSLATION):
        return _make_scaling(center, source, target, ratio)
    if kind in (MapKind.PERSPECTIVE_COLLINEATION, MapKind.REFLECTION):
        return _make_collineation(center, source, target, axis_height, ratio)
    if kind is MapKind.CENTRAL_PERSPECTIVITY:
        return _make_perspectivity(center, plane_source, plane_target)
    raise InvariantError(f"unknown map kind: {kind!r}")


def _require_tips(source, target):
    if source is None or target is None:
        raise InvalidTipConfiguration("source and target tips are required")


def _make_scaling(center, source, target, ratio):
    _require_tips(source, target)
    if center.is_ideal:
        if source.is_ideal or target.is_ideal:
            raise InvalidTipConfiguration(
                "two adjacent cone tips at infinity: adjacent cones coincide"
            )
        return AxialMap(MapKind.TRANSLATION, _translation_matrix(target.z - source.z),
                        center, source, target)
    if source.is_ideal != target.is_ideal:
        raise InvalidTipConfiguration(
            "a scaling with exactly one ideal outer tip has no realizable cone strip"
        )
    if source.is_ideal and target.is_ideal:
        if ratio is None or ratio == 0:
            raise InvariantError("ideal outer tips require a nonzero ratio")
        factor = float(ratio)
    else:
        if abs(source.z - center.z) < ABS_TOLERANCE:
            raise InvalidTipConfiguration("source tip coincides with the center")
        if abs(source.z - target.z) < ABS_TOLERANCE:
            raise InvalidTipConfiguration(
                "source and target tips may coincide only at infinity"
            )
        factor = (target.z - center.z) / (source.z - center.z)
        if abs(factor) < ABS_TOLERANCE:
            raise DegenerateTip("target tip coincides with the center")
    return AxialMap(MapKind.CENTRAL_SCALING, _scaling_matrix(center.z, factor),
                    center, source, target)


def _make_collineation(center, source, target, axis_height, ratio):
    _require_tips(source, target)
    if center.is_ideal:
        if source.is_ideal or target.is_ideal:
            raise InvalidTipConfiguration(
                "two adjacent cone tips at infinity: adjacent cones coincide"
            )
        plane = 0.5 * (source.z + target.z) if axis_height is None else axis_height
        return AxialMap(MapKind.REFLECTION, _reflection_matrix(plane),
                        center, source, target, axis_height=plane)
    if source.is_ideal and target.is_ideal:
        # both outer tips at infinity: same construction as the scaling case
        return _make_scaling(center, source, target, ratio)
    if source.is_ideal or target.is_ideal:
        raise InvalidTipConfiguration(
            "a collineation with exactly one ideal outer tip has no realizable strip"
        )
    plane = 0.5 * (source.z + target.z) if axis_height is None else axis_height
    if abs(source.z - target.z) < ABS_TOLERANCE:
        return AxialMap(MapKind.PERSPECTIVE_COLLINEATION, np.eye(4),
                        center, source, target, axis_height=plane)
    return AxialMap(MapKind.PERSPECTIVE_COLLINEATION,
                    _collineation_matrix(center.z, source.z, target.z, plane),
                    center, source, target, axis_height=plane)


def _make_perspectivity(center, plane_source, plane_target):
    if plane_source is None or plane_target is None:
        raise InvariantError("a perspectivity requires the two plane heights")
    if center.is_ideal:
        # parallel projection along the axis direction
        return AxialMap(MapKind.CENTRAL_PERSPECTIVITY,
                        _translation_matrix(plane_target - plane_source),
                        center, plane_source=plane_source, plane_target=plane_target)
    if abs(plane_source - center.z) < ABS_TOLERANCE:
        raise InvalidTipConfiguration("source plane passes through the projection center")
    factor = (plane_target - center.z) / (plane_source - center.z)
    return AxialMap(MapKind.CENTRAL_PERSPECTIVITY, _scaling_matrix(center.z, factor),
                    center, plane_source=plane_source, plane_target=plane_target)


def apply_map(m: AxialMap, p: Point3) -> Point3:
    """Projective action of an axial map on an affine point."""
    h = m.matrix @ np.array([p.x, p.y, p.z, 1.0])
    scale = max(1.0, float(np.max(np.abs(h[:3]))))
    if abs(h[3]) <= ABS_TOLERANCE * scale:
        raise IdealImage(f"point {p} maps to infinity")
    return Point3(float(h[0] / h[3]), float(h[1] / h[3]), float(h[2] / h[3]))


def map_meridian(m: AxialMap, d: float, z: float) -> tuple:
    """Action of an axial map inside a meridian half-plane, as (d, z) coordinates."""
    image = apply_map(m, Point3(d, 0.0, z))
    return image.x, image.z


def verify_profile_identities(a: float, s: float, t: float,
                              point: ProfilePoint,
                              rel_tol: Optional[float] = None) -> bool:
    """Check both distance identities of a profile point to relative tolerance."""
    rel = base_tolerance() * 1e-3 if rel_tol is None else rel_tol
    lhs1 = point.d * point.d + point.z * point.z
    lhs2 = point.d * point.d + (point.z - a) * (point.z - a)
    return (abs(lhs1 - s * s) <= rel * max(s * s, 1.0)
            and abs(lhs2 - t * t) <= rel * max(t * t, 1.0))
