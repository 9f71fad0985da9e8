"""Scene model and the reduced stationarity system.

A scene is two fixed B-spline curves with a gap between them.  The connecting
curve shares its first control point with the left curve's last point and its
last with the right curve's first point; the neighbouring control points are
tied to the data tangents through scalars alpha and beta:

    q_2     = q_1 + alpha * (q_1 - p_left_second_last)
    q_(n-1) = q_n + beta  * (q_n - p_right_second)

so the control polygon continues each data polygon's end leg.  Remaining
interior points are free coordinates, optionally reduced further by linear
coordinate ties.  The residual of the reduced system is the exact gradient of
the Lagrangian with respect to the reduced unknowns u = (alpha, beta, free
coordinates); the map u -> control points is affine, so the chain-rule factor
is a constant matrix built once per layout.
"""

from dataclasses import dataclass

import numpy as np

from .bspline import BSplineCurve, make_knot_vector
from .errors import BalanceError, DegenerateScene, InvalidArgument
from .lagrangian import (
    Expr,
    build_difference_table,
    eval_lagrangian,
    grad_lagrangian,
    lagrangian_leaves,
    leaf_point_span,
    validate_lagrangian,
)
from .rigid import RigidTransform, normalize_2d, normalize_3d


@dataclass(frozen=True, eq=False)
class Scene:
    """Two input curves plus the requested connecting-curve topology."""

    left: BSplineCurve
    right: BSplineCurve
    solution_degree: int = 3
    solution_pieces: int = 1

    def __post_init__(self):
        if self.left.dim != self.right.dim:
            raise InvalidArgument(
                f"input curves must share a dimension, got {self.left.dim} and {self.right.dim}"
            )
        if len(self.left.points) < 2 or len(self.right.points) < 2:
            raise InvalidArgument("each input curve needs at least 2 control points")
        if np.array_equal(self.left.points[-1], self.right.points[0]):
            raise DegenerateScene("no gap: left curve already ends where the right begins")
        # validates degree/pieces
        make_knot_vector(self.solution_degree, self.solution_pieces)

    @property
    def dim(self) -> int:
        return self.left.dim

    @property
    def solution_point_count(self) -> int:
        return self.solution_degree + self.solution_pieces

    @property
    def gap(self) -> float:
        return float(np.linalg.norm(self.right.points[0] - self.left.points[-1]))

    def with_topology(self, degree: int, pieces: int) -> "Scene":
        return Scene(self.left, self.right, degree, pieces)


@dataclass(frozen=True, eq=False)
class NormalizedScene:
    """Scene moved so the gap runs from the origin along the positive x-axis."""

    original: Scene
    left: BSplineCurve
    right: BSplineCurve
    transform: RigidTransform

    @property
    def dim(self) -> int:
        return self.left.dim

    @property
    def gap(self) -> float:
        return float(self.right.points[0, 0])


def normalize_scene(scene: Scene) -> NormalizedScene:
    """Rigidly move the scene into the canonical solving frame.

    Left's last control point lands on the origin and right's first on the
    positive x-axis; in 3D the leftover roll is fixed by turning the left
    curve's second-to-last point into the upper xy half-plane.
    """
    p_left = scene.left.points[-1]
    p_right = scene.right.points[0]
    if scene.dim == 2:
        transform = normalize_2d(p_left, p_right)
    else:
        transform = normalize_3d(p_left, p_right, scene.left.points[-2])
    left = scene.left.transformed(transform.apply(scene.left.points))
    right = scene.right.transformed(transform.apply(scene.right.points))
    return NormalizedScene(scene, left, right, transform)


@dataclass(frozen=True)
class CoordinateTie:
    """One coordinate pinned to a scaled sum of other points' coordinates.

    point/coord identify the target; the tied value is
    scale * sum(coordinate ``c`` of point ``p`` for (p, c) in sources).
    Indices use the connecting curve's 1-based positions.
    """

    point: int
    coord: int
    sources: tuple[tuple[int, int], ...]
    scale: float


def case1_tie(point_count: int = 5) -> CoordinateTie:
    """Middle x pinned to the mean of its neighbours' x (same-sign slopes)."""
    mid = _middle_point(point_count)
    return CoordinateTie(mid, 0, ((mid - 1, 0), (mid + 1, 0)), 0.5)


def case2_tie(point_count: int = 5) -> CoordinateTie:
    """Middle y pinned to minus the mean of its neighbours' y (opposite slopes)."""
    mid = _middle_point(point_count)
    return CoordinateTie(mid, 1, ((mid - 1, 1), (mid + 1, 1)), -0.5)


def _middle_point(point_count: int) -> int:
    if point_count != 5:
        raise InvalidArgument(
            f"case tie constraints are defined for 5-point solutions, got {point_count}"
        )
    return 3


@dataclass(frozen=True, eq=False)
class UnknownLayout:
    """Reduced unknowns and the affine map back to control points."""

    normalized: NormalizedScene
    point_count: int
    ties: tuple[CoordinateTie, ...]
    free_coords: tuple[tuple[int, int], ...]
    literal_beta_tie: bool
    # constant directions multiplying alpha / beta
    alpha_direction: np.ndarray
    beta_direction: np.ndarray

    @property
    def dim(self) -> int:
        return self.normalized.dim

    @property
    def unknown_count(self) -> int:
        return 2 + len(self.free_coords)

    @property
    def names(self) -> tuple[str, ...]:
        axes = "xyz"
        return ("alpha", "beta") + tuple(
            f"p{pt}.{axes[c]}" for pt, c in self.free_coords
        )

    @property
    def first_index(self) -> int:
        return 2 - len(self.normalized.left.points)

    @property
    def interior_indices(self) -> range:
        return range(2, self.point_count)

    def solution_points(self, u: np.ndarray) -> np.ndarray:
        """All connecting-curve control points for unknowns u, (n, dim)."""
        u = np.asarray(u, dtype=float)
        if u.shape != (self.unknown_count,):
            raise InvalidArgument(
                f"expected {self.unknown_count} unknowns, got shape {u.shape}"
            )
        n = self.point_count
        left = self.normalized.left.points
        right = self.normalized.right.points
        q1 = left[-1]
        qn = right[0]
        pts = np.zeros((n, self.dim))
        pts[0] = q1
        pts[-1] = qn
        pts[1] = q1 + u[0] * self.alpha_direction
        tail = qn if not self.literal_beta_tie else 0.0
        pts[n - 2] = tail + u[1] * self.beta_direction
        for k, (pt, c) in enumerate(self.free_coords):
            pts[pt - 1, c] = u[2 + k]
        for tie in self.ties:
            pts[tie.point - 1, tie.coord] = tie.scale * sum(
                pts[p - 1, c] for p, c in tie.sources
            )
        return pts

    def full_sequence(self, u: np.ndarray) -> np.ndarray:
        """Left data, connecting interior, right data, concatenated."""
        pts = self.solution_points(u)
        return np.vstack(
            [self.normalized.left.points, pts[1:-1], self.normalized.right.points]
        )

    def solution_curve(self, u: np.ndarray) -> BSplineCurve:
        scene = self.normalized.original
        knots = make_knot_vector(scene.solution_degree, scene.solution_pieces)
        return BSplineCurve(knots, self.solution_points(u))

    def interior_jacobian(self) -> np.ndarray:
        """d(interior points)/d(unknowns): (unknown_count, n-2, dim), constant."""
        n = self.point_count
        J = np.zeros((self.unknown_count, n - 2, self.dim))
        J[0, 0] = self.alpha_direction
        J[1, n - 3] = self.beta_direction
        for k, (pt, c) in enumerate(self.free_coords):
            J[2 + k, pt - 2, c] = 1.0
        for tie in self.ties:
            for p, c in tie.sources:
                if 2 <= p <= n - 1:
                    J[:, tie.point - 2, tie.coord] += tie.scale * J[:, p - 2, c]
        return J


def build_layout(
    normalized: NormalizedScene,
    constraints: "tuple[CoordinateTie, ...] | list[CoordinateTie]" = (),
    literal_beta_tie: bool = False,
) -> UnknownLayout:
    """Reduce the connecting curve's unknowns to (alpha, beta, free coords).

    The two tangency ties consume the second and second-to-last points; every
    remaining interior coordinate is free unless a constraint ties it.
    """
    scene = normalized.original
    n = scene.solution_point_count
    if n < 4:
        raise InvalidArgument(
            "connecting curve needs at least 4 control points "
            f"(degree + pieces >= 4), got {n}"
        )
    left = normalized.left.points
    right = normalized.right.points
    alpha_dir = left[-1] - left[-2]
    beta_dir = right[0] - right[1]
    if np.linalg.norm(alpha_dir) == 0.0:
        raise DegenerateScene("left curve's end tangent vanishes")
    if np.linalg.norm(beta_dir) == 0.0:
        raise DegenerateScene("right curve's start tangent vanishes")

    dim = normalized.dim
    ties = tuple(constraints)
    tied = {}
    for tie in ties:
        if not 2 <= tie.point <= n - 1:
            raise InvalidArgument(f"tie target p{tie.point} is not an interior point")
        if tie.point in (2, n - 1):
            raise InvalidArgument(
                f"tie target p{tie.point} is already fixed by a tangency tie"
            )
        if not 0 <= tie.coord < dim:
            raise InvalidArgument(f"tie coordinate {tie.coord} outside dimension {dim}")
        key = (tie.point, tie.coord)
        if key in tied:
            raise InvalidArgument(f"coordinate p{tie.point}[{tie.coord}] tied twice")
        tied[key] = tie
    for tie in ties:
        for p, c in tie.sources:
            if (p, c) in tied:
                raise InvalidArgument("chained coordinate ties are not supported")
            if not 1 <= p <= n:
                raise InvalidArgument(f"tie source p{p} outside the connecting curve")

    free = tuple(
        (pt, c)
        for pt in range(3, n - 1)
        for c in range(dim)
        if (pt, c) not in tied
    )
    return UnknownLayout(
        normalized=normalized,
        point_count=n,
        ties=ties,
        free_coords=free,
        literal_beta_tie=literal_beta_tie,
        alpha_direction=alpha_dir,
        beta_direction=beta_dir,
    )


class ResidualSystem:
    """Stationarity residual of the Lagrangian in the reduced unknowns.

    residual(u) is the exact gradient of eval_lagrangian at the reconstructed
    control sequence, pulled back through the constant interior Jacobian; the
    Newton matrix is a central finite difference of that exact residual.
    """

    def __init__(self, layout: UnknownLayout, lagrangian: Expr):
        validate_lagrangian(lagrangian, layout.dim)
        self.layout = layout
        self.lagrangian = lagrangian
        self.max_order = max(leaf.order for leaf in lagrangian_leaves(lagrangian))
        self._J = layout.interior_jacobian()

        first = layout.first_index
        total = len(layout.normalized.left.points) + (layout.point_count - 2) + len(
            layout.normalized.right.points
        )
        lo, hi = leaf_point_span(lagrangian)
        if lo < first or hi > first + total - 1:
            raise InvalidArgument(
                f"Lagrangian reads points {lo}..{hi}, but the scene only provides "
                f"{first}..{first + total - 1}"
            )
        if self.max_order >= total:
            raise InvalidArgument("difference order exceeds the point sequence")
        self._check_balance()

    @property
    def unknown_count(self) -> int:
        return self.layout.unknown_count

    def _check_balance(self):
        # structural influence: an unknown nothing in L depends on makes its
        # stationarity equation 0 = 0 and Newton singular
        spans = set()
        for leaf in lagrangian_leaves(self.lagrangian):
            spans.update(range(leaf.index, leaf.index + leaf.order + 1))
        layout = self.layout
        seen = {i for i in layout.interior_indices if i in spans}
        dead = []
        for k in range(layout.unknown_count):
            moved = {
                pos + 2
                for pos in range(layout.point_count - 2)
                if np.any(self._J[k, pos] != 0.0)
            }
            if not moved & seen:
                dead.append(layout.names[k])
        effective = layout.unknown_count - len(dead)
        if dead:
            raise BalanceError(
                layout.unknown_count,
                effective,
                f"the Lagrangian never sees unknown(s) {', '.join(dead)}",
            )

    def _table(self, u: np.ndarray):
        seq = self.layout.full_sequence(u)
        return build_difference_table(seq, self.max_order, self.layout.first_index)

    def action(self, u: np.ndarray) -> float:
        """Lagrangian value at the reconstruction."""
        return eval_lagrangian(self.lagrangian, self._table(u))

    def residual(self, u: np.ndarray) -> np.ndarray:
        table = self._table(u)
        interior = list(self.layout.interior_indices)
        g = grad_lagrangian(self.lagrangian, table, interior)
        return np.einsum("kid,id->k", self._J, g)

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        m = self.unknown_count
        out = np.zeros((m, m))
        for i in range(m):
            h = 1e-7 * (abs(u[i]) + 1.0)
            up = u.copy()
            up[i] += h
            down = u.copy()
            down[i] -= h
            out[:, i] = (self.residual(up) - self.residual(down)) / (2.0 * h)
        return out

    def bending_energy(self, u: np.ndarray) -> float:
        """Total squared second difference of the solution control polygon."""
        pts = self.layout.solution_points(u)
        dd = pts[2:] - 2.0 * pts[1:-1] + pts[:-2]
        return float(np.sum(dd * dd))
