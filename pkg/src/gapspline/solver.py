"""Damped Newton with a deterministic multistart grid.

The reduced stationarity systems are tiny (2 to ~9 unknowns) but polynomial,
so several real roots can coexist.  Newton runs from a small deterministic
grid of starts; converged roots are deduplicated, filtered by the orientation
requirement alpha > 0 and beta > 0 (the connecting curve must leave and enter
along the data's travel direction), and ranked by the smallest total squared
second difference of the control polygon — an explicit smoothness tie-break,
chosen here, not prescribed by the underlying theory.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, InvalidArgument, OrientationFailure
from .system import ResidualSystem, UnknownLayout


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10
    max_iters: int = 100
    damping: float = 0.5
    min_step: float = 2.0**-30
    start_scales: tuple[float, ...] = (0.5, 1.0, 2.0)
    seed: "int | None" = None

    def __post_init__(self):
        if not self.tol > 0.0:
            raise InvalidArgument(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise InvalidArgument(f"max_iters must be >= 1, got {self.max_iters}")
        if not 0.0 < self.damping < 1.0:
            raise InvalidArgument("damping factor must be in (0, 1)")


@dataclass(frozen=True, eq=False)
class Solution:
    unknowns: np.ndarray
    control_points: np.ndarray
    residual_norm: float
    iterations: int
    start_used: int

    @property
    def alpha(self) -> float:
        return float(self.unknowns[0])

    @property
    def beta(self) -> float:
        return float(self.unknowns[1])


def default_initial_guess(layout: UnknownLayout) -> np.ndarray:
    """Start near the one-third rule: interior points at thirds of the chord.

    alpha0 = d / (3 |left tangent|), beta0 = d / (3 |right tangent|); free
    interior coordinates start on the chord itself (the x-axis).
    """
    d = layout.normalized.gap
    u = np.zeros(layout.unknown_count)
    u[0] = d / (3.0 * np.linalg.norm(layout.alpha_direction))
    u[1] = d / (3.0 * np.linalg.norm(layout.beta_direction))
    n = layout.point_count
    for k, (pt, c) in enumerate(layout.free_coords):
        u[2 + k] = d * (pt - 1) / (n - 1) if c == 0 else 0.0
    return u


def start_grid(layout: UnknownLayout, config: SolverConfig) -> list[np.ndarray]:
    """Deterministic multistart points, in ranking order.

    (alpha0, beta0) each scaled by the configured factors; when an
    opposite-slope tie is active (negative tie scale) the same grid is
    appended with the interior coordinates' signs flipped, since that case
    bends the curve across the chord.
    """
    base = default_initial_guess(layout)
    starts = []
    for sa in config.start_scales:
        for sb in config.start_scales:
            u = base.copy()
            u[0] *= sa
            u[1] *= sb
            starts.append(u)
    if any(tie.scale < 0.0 for tie in layout.ties):
        for u in list(starts):
            flipped = u.copy()
            flipped[2:] = -flipped[2:]
            starts.append(flipped)
    if config.seed is not None:
        rng = np.random.default_rng(config.seed)
        starts = [
            u + 0.01 * (np.abs(u) + 1.0) * rng.standard_normal(u.shape) for u in starts
        ]
    return starts


def newton(system: ResidualSystem, u0: np.ndarray, config: SolverConfig):
    """Damped Newton iteration from one start.

    Returns (u, iterations, converged, residual_max_norm).  Each step
    backtracks by the damping factor until the residual max-norm decreases;
    no decreasing step above min_step means the start failed.
    """
    u = np.asarray(u0, dtype=float).copy()
    r = system.residual(u)
    norm = float(np.max(np.abs(r)))
    for iteration in range(config.max_iters):
        if norm <= config.tol:
            return u, iteration, True, norm
        jac = system.jacobian(u)
        try:
            delta = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return u, iteration, False, norm
        if not np.isfinite(delta).all():
            return u, iteration, False, norm
        step = 1.0
        while step >= config.min_step:
            candidate = u + step * delta
            r_new = system.residual(candidate)
            norm_new = float(np.max(np.abs(r_new)))
            if norm_new < norm:
                u, r, norm = candidate, r_new, norm_new
                break
            step *= config.damping
        else:
            return u, iteration, False, norm
    return u, config.max_iters, norm <= config.tol, norm


def solve(system: ResidualSystem, config: SolverConfig = SolverConfig()) -> Solution:
    """Multistart Newton; returns the best orientation-valid root.

    Converged roots are deduplicated (earliest start wins), filtered to
    alpha > 0 and beta > 0, ranked by bending energy with grid order as the
    tie-break.  No convergence at all raises ConvergenceFailure with the best
    residual seen; converged but misoriented roots raise OrientationFailure
    carrying the first such root.
    """
    starts = start_grid(system.layout, config)
    roots = []
    best_norm = np.inf
    best_point = starts[0]
    for idx, u0 in enumerate(starts):
        u, iterations, ok, norm = newton(system, u0, config)
        if ok:
            roots.append((idx, u, iterations))
        elif norm < best_norm:
            best_norm = norm
            best_point = u
    if not roots:
        raise ConvergenceFailure(best_norm, best_point)

    unique = []
    for idx, u, iterations in roots:
        if any(
            np.max(np.abs(u - v)) <= 1e-8 * (1.0 + np.max(np.abs(v)))
            for _, v, _ in unique
        ):
            continue
        unique.append((idx, u, iterations))

    valid = [(idx, u, it) for idx, u, it in unique if u[0] > 0.0 and u[1] > 0.0]
    if not valid:
        idx, u, _ = unique[0]
        norm = float(np.max(np.abs(system.residual(u))))
        raise OrientationFailure(u, float(u[0]), float(u[1]), norm)

    ranked = sorted(valid, key=lambda item: (system.bending_energy(item[1]), item[0]))
    idx, u, iterations = ranked[0]
    # fresh certificate evaluation
    norm = float(np.max(np.abs(system.residual(u))))
    if norm > config.tol:
        raise ConvergenceFailure(norm, u)
    return Solution(
        unknowns=u,
        control_points=system.layout.solution_points(u),
        residual_norm=norm,
        iterations=iterations,
        start_used=idx,
    )
