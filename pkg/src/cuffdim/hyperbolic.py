"""Moebius algebra and hyperbolic geometry in the Poincare disk.

Transforms are unit-determinant disk automorphisms stored as a coefficient
pair (u, v) acting on the closed disk by

    z  ->  (u*z + v) / (conj(v)*z + conj(u)),      |u|^2 - |v|^2 = 1.

The pair is renormalized after every construction and composition, and the
overall sign is fixed (Re u >= 0, breaking ties by Im u > 0) so equal maps
compare equal.

Incidence computations run in the hyperboloid model of the hyperbolic
plane: a geodesic is the trace of a plane through the origin of R^{2,1}
with unit spacelike normal, points lift to unit timelike vectors, and all
predicates (sides, crossings, perpendiculars, feet) become Minkowski inner
products.  The disk model is kept for storage and for the boundary circle,
where arcs are finite angular intervals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Raised when inputs violate a geometric precondition."""


# ---------------------------------------------------------------------------
# Moebius transforms


@dataclass(frozen=True)
class MoebiusTransform:
    """Disk automorphism z -> (u z + v)/(conj(v) z + conj(u))."""

    u: complex
    v: complex

    def __post_init__(self):
        u, v = complex(self.u), complex(self.v)
        det = abs(u) ** 2 - abs(v) ** 2
        if det <= 0.0 or not math.isfinite(det):
            raise GeometryError(
                "coefficients do not define a disk automorphism "
                f"(|u|^2-|v|^2 = {det!r})"
            )
        scale = 1.0 / math.sqrt(det)
        if u.real < 0.0 or (u.real == 0.0 and u.imag < 0.0):
            scale = -scale
        object.__setattr__(self, "u", u * scale)
        object.__setattr__(self, "v", v * scale)

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls) -> "MoebiusTransform":
        return cls(1.0 + 0.0j, 0.0j)

    @classmethod
    def rotation(cls, psi: float) -> "MoebiusTransform":
        """Rotation of the disk by angle psi about the origin."""
        return cls(cmath.exp(0.5j * psi), 0.0j)

    @classmethod
    def real_translation(cls, length: float) -> "MoebiusTransform":
        """Hyperbolic translation along the horizontal diameter.

        Translation length ``length``; the attracting fixed point is +1
        when ``length`` > 0.
        """
        return cls(math.cosh(0.5 * length), math.sinh(0.5 * length))

    @classmethod
    def from_sl2r(cls, a: float, b: float, c: float, d: float) -> "MoebiusTransform":
        """Conjugate a real SL(2,R) matrix (upper half-plane) to the disk."""
        u = complex(0.5 * (a + d), 0.5 * (b - c))
        v = complex(0.5 * (a - d), -0.5 * (b + c))
        return cls(u, v)

    # -- group operations ----------------------------------------------------

    def compose(self, other: "MoebiusTransform") -> "MoebiusTransform":
        """self after other (matrix product)."""
        u = self.u * other.u + self.v * other.v.conjugate()
        v = self.u * other.v + self.v * other.u.conjugate()
        return MoebiusTransform(u, v)

    __matmul__ = compose

    def inverse(self) -> "MoebiusTransform":
        return MoebiusTransform(self.u.conjugate(), -self.v)

    def power(self, k: int) -> "MoebiusTransform":
        m = self if k >= 0 else self.inverse()
        out = MoebiusTransform.identity()
        for _ in range(abs(k)):
            out = out.compose(m)
        return out

    # -- action --------------------------------------------------------------

    def apply(self, z: complex) -> complex:
        return (self.u * z + self.v) / (self.v.conjugate() * z + self.u.conjugate())

    __call__ = apply

    def apply_angle(self, theta: float) -> tuple[float, float]:
        """Image angle and angular derivative at a boundary angle."""
        z = cmath.exp(1j * theta)
        den = self.v.conjugate() * z + self.u.conjugate()
        w = (self.u * z + self.v) / den
        return math.atan2(w.imag, w.real) % TWO_PI, 1.0 / abs(den) ** 2

    @property
    def trace(self) -> float:
        return 2.0 * self.u.real

    def is_identity(self, tol: float = 1e-12) -> bool:
        return abs(self.u - 1.0) <= tol and abs(self.v) <= tol

    def almost_equal(self, other: "MoebiusTransform", tol: float = 1e-12) -> bool:
        same = abs(self.u - other.u) <= tol and abs(self.v - other.v) <= tol
        flip = abs(self.u + other.u) <= tol and abs(self.v + other.v) <= tol
        return same or flip


def mobius_compose(m: MoebiusTransform, n: MoebiusTransform) -> MoebiusTransform:
    return m.compose(n)


def mobius_inverse(m: MoebiusTransform) -> MoebiusTransform:
    return m.inverse()


# ---------------------------------------------------------------------------
# Points


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the circle at infinity, stored as an angle in [0, 2*pi)."""

    theta: float

    def __post_init__(self):
        t = float(self.theta) % TWO_PI
        if t == TWO_PI:  # guard the representable 2*pi rounding case
            t = 0.0
        object.__setattr__(self, "theta", t)

    @classmethod
    def from_complex(cls, w: complex) -> "BoundaryPoint":
        return cls(math.atan2(w.imag, w.real))

    @property
    def point(self) -> complex:
        return cmath.exp(1j * self.theta)


@dataclass(frozen=True)
class DiskPoint:
    """Point of the open unit disk."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if abs(z) >= 1.0 - 1e-12:
            raise GeometryError(f"point is not strictly inside the disk: |z| = {abs(z)}")
        object.__setattr__(self, "z", z)


def _angle(t) -> float:
    if isinstance(t, BoundaryPoint):
        return t.theta
    return float(t) % TWO_PI


def _zval(p) -> complex:
    if isinstance(p, DiskPoint):
        return p.z
    z = complex(p)
    if abs(z) >= 1.0 - 1e-12:
        raise GeometryError(f"point is not strictly inside the disk: |z| = {abs(z)}")
    return z


# ---------------------------------------------------------------------------
# Hyperboloid helpers (model R^{2,1}, form x^2 + y^2 - t^2)


def _mink(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


def _mcross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    c = np.cross(a, b)
    c[2] = -c[2]
    return c


def _lift(z: complex) -> np.ndarray:
    s = 1.0 - abs(z) ** 2
    return np.array([2.0 * z.real / s, 2.0 * z.imag / s, (1.0 + abs(z) ** 2) / s])


def _light(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), math.sin(theta), 1.0])


def _drop(w: np.ndarray) -> complex:
    return complex(w[0], w[1]) / (1.0 + w[2])


# ---------------------------------------------------------------------------
# Geodesics


@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic with ideal endpoints p and q.

    The realized arc is the circle orthogonal to the unit circle through
    the endpoints (a diameter when they are antipodal).  ``normal`` is the
    unit spacelike normal of the corresponding plane in the hyperboloid
    model, oriented by the (p, q) order.
    """

    p: BoundaryPoint
    q: BoundaryPoint
    is_diameter: bool = field(init=False)
    center: complex | None = field(init=False)
    radius: float | None = field(init=False)
    normal: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tp, tq = self.p.theta, self.q.theta
        gap = min((tp - tq) % TWO_PI, (tq - tp) % TWO_PI)
        if gap <= DEFAULT.endpoint_gap:
            raise GeometryError("geodesic endpoints coincide")
        n = _mcross(_light(tp), _light(tq))
        nn = _mink(n, n)
        n = n / math.sqrt(nn)
        object.__setattr__(self, "normal", n)

        zp, zq = self.p.point, self.q.point
        den = zp.real * zq.imag - zp.imag * zq.real
        if abs(den) < 1e-12:
            object.__setattr__(self, "is_diameter", True)
            object.__setattr__(self, "center", None)
            object.__setattr__(self, "radius", None)
        else:
            cx = (zq.imag - zp.imag) / den
            cy = (zp.real - zq.real) / den
            c = complex(cx, cy)
            object.__setattr__(self, "is_diameter", False)
            object.__setattr__(self, "center", c)
            object.__setattr__(self, "radius", math.sqrt(max(abs(c) ** 2 - 1.0, 0.0)))

    def endpoint_angles(self) -> tuple[float, float]:
        return self.p.theta, self.q.theta

    def transform(self, m: MoebiusTransform) -> "Geodesic":
        return Geodesic(
            BoundaryPoint.from_complex(m.apply(self.p.point)),
            BoundaryPoint.from_complex(m.apply(self.q.point)),
        )


def geodesic_from_endpoints(p, q) -> Geodesic:
    return Geodesic(BoundaryPoint(_angle(p)), BoundaryPoint(_angle(q)))


def _geodesic_from_normal(n: np.ndarray) -> Geodesic:
    r = math.hypot(float(n[0]), float(n[1]))
    if r <= abs(float(n[2])):
        raise GeometryError("normal vector is not spacelike enough for a geodesic")
    phi = math.atan2(float(n[1]), float(n[0]))
    half = math.acos(float(n[2]) / r)
    return Geodesic(BoundaryPoint(phi - half), BoundaryPoint(phi + half))


def signed_side(g: Geodesic, z, tol: Tolerances = DEFAULT) -> int:
    """Side of ``g`` on which the disk point ``z`` lies.

    Returns +1 on the side containing the disk center; when ``g`` passes
    through the center the +1 side is the one containing the boundary
    point in the middle of the counterclockwise arc from the smaller
    endpoint angle to the larger one.  Returns 0 within ``tol.on_geodesic``
    of the geodesic (hyperbolic distance scale).
    """
    zz = _zval(z)
    n = g.normal
    if abs(n[2]) > 1e-12:
        orient = -1.0 if n[2] > 0 else 1.0
    else:
        lo, hi = sorted((g.p.theta, g.q.theta))
        ref = _mink(_light(0.5 * (lo + hi)), n)
        orient = 1.0 if ref > 0 else -1.0
    s = orient * _mink(_lift(zz), n)  # equals sinh(signed distance)
    if abs(s) <= tol.on_geodesic:
        return 0
    return 1 if s > 0 else -1


def hyp_distance(z1, z2) -> float:
    """Poincare distance between two disk points."""
    a, b = _zval(z1), _zval(z2)
    num = abs(a - b)
    den = math.sqrt((1.0 - abs(a) ** 2) * (1.0 - abs(b) ** 2))
    return 2.0 * math.asinh(num / den)


@dataclass(frozen=True)
class CommonPerpendicular:
    geodesic: Geodesic
    foot1: DiskPoint
    foot2: DiskPoint
    distance: float


def _foot(n_perp: np.ndarray, n_line: np.ndarray) -> DiskPoint:
    t = _mcross(n_perp, n_line)
    tt = _mink(t, t)
    w = t / math.sqrt(-tt)
    if w[2] < 0:
        w = -w
    return DiskPoint(_drop(w))


def common_perpendicular(g1: Geodesic, g2: Geodesic) -> CommonPerpendicular:
    """Unique geodesic orthogonal to two disjoint geodesics.

    Raises GeometryError when the inputs cross or are asymptotic.
    """
    kappa = _mink(g1.normal, g2.normal)
    if abs(kappa) <= 1.0 + 1e-12:
        raise GeometryError("geodesics intersect or are asymptotic: no common perpendicular")
    n = _mcross(g1.normal, g2.normal)
    n = n / math.sqrt(kappa * kappa - 1.0)
    perp = _geodesic_from_normal(n)
    return CommonPerpendicular(
        geodesic=perp,
        foot1=_foot(n, g1.normal),
        foot2=_foot(n, g2.normal),
        distance=math.acosh(abs(kappa)),
    )


def ray_crossing(start, target, g: Geodesic, tol: Tolerances = DEFAULT):
    """First crossing of the ray from ``start`` toward ``target`` with ``g``.

    Returns (arclength, DiskPoint) or None.  A start point on ``g`` gives
    arclength 0.
    """
    w = _lift(_zval(start))
    ell = _light(_angle(target))
    c = -1.0 / _mink(ell, w)
    u = c * ell - w
    a = _mink(w, g.normal)
    b = _mink(u, g.normal)
    if abs(a) <= tol.on_geodesic:
        return 0.0, DiskPoint(_drop(w))
    if abs(b) <= abs(a):
        return None
    t = math.atanh(-a / b)
    if t < 0.0:
        return None
    pt = w * math.cosh(t) + u * math.sinh(t)
    return t, DiskPoint(_drop(pt))


# ---------------------------------------------------------------------------
# Isometry classification


@dataclass(frozen=True)
class IsometryInfo:
    kind: str  # identity | elliptic | parabolic | hyperbolic
    translation_length: float
    axis: Geodesic | None
    fixed_points: tuple[complex, ...]


def classify_isometry(m: MoebiusTransform, tol: Tolerances = DEFAULT) -> IsometryInfo:
    """Classify by trace; hyperbolic maps carry their axis.

    The axis endpoints are the boundary fixed points with the attracting
    one listed first.  Translation length is 2*arccosh(|tr|/2).
    """
    if m.is_identity(tol.unit_det):
        return IsometryInfo("identity", 0.0, None, ())
    tr = abs(m.trace)
    if abs(tr - 2.0) <= tol.parabolic_trace:
        fix = ()
        if abs(m.v) > 0:
            fix = ((1j * m.u.imag) / m.v.conjugate(),)
        return IsometryInfo("parabolic", 0.0, None, fix)
    if tr < 2.0:
        return IsometryInfo("elliptic", 0.0, None, ())
    s = math.sqrt(m.u.real ** 2 - 1.0)
    att = (1j * m.u.imag + s) / m.v.conjugate()
    rep = (1j * m.u.imag - s) / m.v.conjugate()
    axis = Geodesic(BoundaryPoint.from_complex(att), BoundaryPoint.from_complex(rep))
    return IsometryInfo("hyperbolic", 2.0 * math.acosh(0.5 * tr), axis, (att, rep))


def boundary_action(m: MoebiusTransform, t) -> tuple[BoundaryPoint, float]:
    """Image of a boundary point and the angular derivative there."""
    theta, deriv = m.apply_angle(_angle(t))
    return BoundaryPoint(theta), deriv


# ---------------------------------------------------------------------------
# Vectorized kernels shared by the dynamical modules


def apply_many(u: complex, v: complex, z: np.ndarray) -> np.ndarray:
    """Moebius action on an array of complex points."""
    return (u * z + v) / (np.conj(v) * z + np.conj(u))


def deriv_many(u: complex, v: complex, z: np.ndarray) -> np.ndarray:
    """Angular derivative modulus on an array of boundary points."""
    return 1.0 / np.abs(np.conj(v) * z + np.conj(u)) ** 2


def lift_light(z: np.ndarray) -> np.ndarray:
    """Lightlike lifts of an array of boundary complex points, shape (N, 3)."""
    out = np.empty(z.shape + (3,))
    out[..., 0] = z.real
    out[..., 1] = z.imag
    out[..., 2] = 1.0
    return out


CLIP_EPS = 1e-13


def clip_chord(l_back: np.ndarray, l_fwd: np.ndarray, normals: np.ndarray):
    """Clip unit-speed geodesics against oriented half-planes.

    ``l_back``/``l_fwd`` are (..., 3) lightlike endpoint lifts of the
    backward and forward ideal endpoints; ``normals`` is (k, 3) with the
    allowed region {x : <x, n_i> >= 0}.  The chord is parametrized as
    gamma(t) = (l_back e^{-t} + l_fwd e^{t}) / sqrt(-2 <l_fwd, l_back>),
    which has unit speed.  Returns (t_in, t_out, side_in, side_out); a
    miss is reported as t_in > t_out (sides are then meaningless).

    Endpoint products within CLIP_EPS of zero are treated as lying on the
    bounding plane, so a geodesic running along a side counts as inside.
    """
    J = np.array([1.0, 1.0, -1.0])
    a = (l_back * J) @ normals.T  # (..., k)
    b = (l_fwd * J) @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = -a / b
        t_cross = 0.5 * np.log(ratio)

    apos, aneg = a > CLIP_EPS, a < -CLIP_EPS
    bpos, bneg = b > CLIP_EPS, b < -CLIP_EPS
    azero, bzero = ~(apos | aneg), ~(bpos | bneg)

    lower = np.where(aneg & bpos, t_cross, -np.inf)
    upper = np.where(apos & bneg, t_cross, np.inf)
    # sides violated for every t
    dead = (aneg & (bneg | bzero)) | (azero & bneg)
    lower = np.where(dead, np.inf, lower)

    t_in = np.max(lower, axis=-1)
    t_out = np.min(upper, axis=-1)
    side_in = np.argmax(lower, axis=-1)
    side_out = np.argmin(upper, axis=-1)
    return t_in, t_out, side_in, side_out


def chord_point(l_back: np.ndarray, l_fwd: np.ndarray, t) -> np.ndarray:
    """Disk point at parameter t of the unit-speed chord, vectorized."""
    J = np.array([1.0, 1.0, -1.0])
    dot = np.sum(l_fwd * J * l_back, axis=-1)
    scale = 1.0 / np.sqrt(-2.0 * dot)
    t = np.asarray(t)
    w = (
        l_back * np.exp(-t)[..., None] + l_fwd * np.exp(t)[..., None]
    ) * scale[..., None]
    return (w[..., 0] + 1j * w[..., 1]) / (1.0 + w[..., 2])
