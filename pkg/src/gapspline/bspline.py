"""Clamped B-spline curves on [0, 1] via the textbook basis recursion.

The basis is evaluated by the two-term recursion directly (no de Boor
pyramid); 0/0 terms are dropped, and the final non-empty span is treated as
closed so a curve interpolates its last control point at t = 1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument


def make_knot_vector(degree: int, pieces: int) -> "KnotVector":
    """Uniform clamped knot vector: 0 and 1 with multiplicity degree+1,
    interior knots j/pieces for j = 1..pieces-1.

    make_knot_vector(3, 2) -> {0,0,0,0,1/2,1,1,1,1}
    """
    if degree < 1:
        raise InvalidArgument(f"degree must be >= 1, got {degree}")
    if pieces < 1:
        raise InvalidArgument(f"pieces must be >= 1, got {pieces}")
    interior = [j / pieces for j in range(1, pieces)]
    return KnotVector(tuple([0.0] * (degree + 1) + interior + [1.0] * (degree + 1)), degree)


@dataclass(frozen=True)
class KnotVector:
    """Clamped knot vector on [0, 1] with strictly increasing interior knots."""

    knots: tuple[float, ...]
    degree: int

    def __post_init__(self):
        k = self.degree
        kn = tuple(float(t) for t in self.knots)
        object.__setattr__(self, "knots", kn)
        if k < 1:
            raise InvalidArgument(f"degree must be >= 1, got {k}")
        if len(kn) < 2 * (k + 1):
            raise InvalidArgument(
                f"need at least {2 * (k + 1)} knots for degree {k}, got {len(kn)}"
            )
        if kn[0] != 0.0 or kn[-1] != 1.0:
            raise InvalidArgument("knot vector must span [0, 1]")
        if any(a > b for a, b in zip(kn, kn[1:])):
            raise InvalidArgument("knots must be non-decreasing")
        if kn[k] != 0.0 or kn[-k - 1] != 1.0:
            raise InvalidArgument(
                f"end knots must repeat degree+1 = {k + 1} times (clamped)"
            )
        interior = kn[k + 1 : -k - 1]
        if any(a >= b for a, b in zip(interior, interior[1:])):
            raise InvalidArgument("interior knots must be strictly increasing")
        if any(t <= 0.0 or t >= 1.0 for t in interior):
            raise InvalidArgument("interior knots must lie strictly inside (0, 1)")

    @property
    def point_count(self) -> int:
        """Number of control points a curve on this vector must have."""
        return len(self.knots) - self.degree - 1

    @property
    def pieces(self) -> int:
        return len(self.knots) - 2 * self.degree - 1


def _basis(knots: tuple[float, ...], i: int, r: int, t: float) -> float:
    if r == 0:
        if knots[i] <= t < knots[i + 1]:
            return 1.0
        # final non-empty span is closed so that f(1) hits the last point
        if t == knots[-1] and knots[i + 1] == knots[-1] and knots[i] < knots[i + 1]:
            return 1.0
        return 0.0
    value = 0.0
    den = knots[i + r] - knots[i]
    if den > 0.0:
        value += (t - knots[i]) / den * _basis(knots, i, r - 1, t)
    den = knots[i + r + 1] - knots[i + 1]
    if den > 0.0:
        value += (knots[i + r + 1] - t) / den * _basis(knots, i + 1, r - 1, t)
    return value


def _basis_derivative(knots: tuple[float, ...], i: int, r: int, t: float, order: int) -> float:
    if order == 0:
        return _basis(knots, i, r, t)
    if r == 0:
        return 0.0
    value = 0.0
    den = knots[i + r] - knots[i]
    if den > 0.0:
        value += r / den * _basis_derivative(knots, i, r - 1, t, order - 1)
    den = knots[i + r + 1] - knots[i + 1]
    if den > 0.0:
        value -= r / den * _basis_derivative(knots, i + 1, r - 1, t, order - 1)
    return value


def basis(kv: KnotVector, i: int, t: float) -> float:
    """Value of the i-th (0-based) degree-kv.degree basis function at t."""
    if not 0 <= i < kv.point_count:
        raise InvalidArgument(f"basis index {i} out of range [0, {kv.point_count})")
    if not 0.0 <= t <= 1.0:
        raise InvalidArgument(f"parameter {t} outside [0, 1]")
    return _basis(kv.knots, i, kv.degree, t)


def basis_derivative(kv: KnotVector, i: int, t: float, order: int = 1) -> float:
    """order-th derivative of the i-th basis function at t (left limit at t=1)."""
    if not 0 <= i < kv.point_count:
        raise InvalidArgument(f"basis index {i} out of range [0, {kv.point_count})")
    if not 0.0 <= t <= 1.0:
        raise InvalidArgument(f"parameter {t} outside [0, 1]")
    if order < 0:
        raise InvalidArgument("derivative order must be >= 0")
    return _basis_derivative(kv.knots, i, kv.degree, t, order)


@dataclass(frozen=True, eq=False)
class BSplineCurve:
    """Control points over a clamped knot vector; 2D or 3D."""

    knots: KnotVector
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise InvalidArgument(f"points must be (n, 2) or (n, 3), got {pts.shape}")
        if pts.shape[0] != self.knots.point_count:
            raise InvalidArgument(
                f"knot vector wants {self.knots.point_count} control points, "
                f"got {pts.shape[0]}"
            )
        if not np.isfinite(pts).all():
            raise InvalidArgument("control points must be finite")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def degree(self) -> int:
        return self.knots.degree

    def point(self, t: float) -> np.ndarray:
        """Curve position at t in [0, 1]."""
        if not 0.0 <= t <= 1.0:
            raise InvalidArgument(f"parameter {t} outside [0, 1]")
        kn = self.knots.knots
        k = self.knots.degree
        weights = [_basis(kn, i, k, t) for i in range(len(self.points))]
        return np.asarray(weights) @ self.points

    def derivative(self, t: float, order: int = 1) -> np.ndarray:
        """order-th parametric derivative at t (left limit at t = 1)."""
        if not 0.0 <= t <= 1.0:
            raise InvalidArgument(f"parameter {t} outside [0, 1]")
        kn = self.knots.knots
        k = self.knots.degree
        weights = [_basis_derivative(kn, i, k, t, order) for i in range(len(self.points))]
        return np.asarray(weights) @ self.points

    def end_tangents(self) -> tuple[np.ndarray, np.ndarray]:
        """Control-polygon legs (p1 - p0, p_last - p_second_last).

        For a clamped curve these are parallel to the true end derivatives.
        """
        p = self.points
        return p[1] - p[0], p[-1] - p[-2]

    def sample(self, count: int) -> np.ndarray:
        """(count, dim) polyline at uniform parameters including both ends."""
        if count < 2:
            raise InvalidArgument(f"sample count must be >= 2, got {count}")
        return np.vstack([self.point(t) for t in np.linspace(0.0, 1.0, count)])

    def transformed(self, points: np.ndarray) -> "BSplineCurve":
        """Same knots, new control points."""
        return BSplineCurve(self.knots, points)
