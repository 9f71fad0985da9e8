from pathlib import Path

import numpy as np
import pytest

from gapspline.bspline import BSplineCurve, KnotVector, make_knot_vector
from gapspline.system import Scene

SCENES_DIR = Path(__file__).resolve().parent.parent / "scenes"

CUBIC = make_knot_vector(3, 1)

LEFT_2D = [(0.0, 0.0), (1.0, 4.0), (2.0, 1.0), (4.0, 3.0)]
RIGHT_2D = [(7.0, 2.0), (8.0, 3.0), (9.0, 1.0), (10.0, 2.0)]

LEFT_3D = [(0.0, 0.0, -2.0), (1.0, 4.0, -1.5), (2.0, 1.0, -1.0), (4.0, 3.0, -0.5)]
RIGHT_3D = [(7.0, 2.0, 0.0), (8.0, 3.0, 0.5), (9.0, 1.0, 1.0), (10.0, 2.0, 1.5)]

# wiggly left + arch right: the same-slope-signs planner scene
WIGGLE_LEFT = [(-6.0, 0.0), (-5.0, -1.0), (-4.0, 0.0), (-3.0, 1.0),
               (-2.0, 0.0), (-1.0, -1.0), (0.0, 0.0)]
WIGGLE_RIGHT = [(3.0, 0.0), (4.0, 2.0), (5.0, 2.0), (6.0, 0.0)]

# opposite-slope-signs planner scene
MIXED_LEFT = [(-2.0, 6.0), (-1.0, 3.0), (0.0, 6.0), (1.0, 4.0), (2.0, 3.0), (4.0, 3.0)]
MIXED_RIGHT = [(7.0, 2.0), (8.0, 1.0), (9.0, 3.0), (10.0, 2.0)]

L_EX1 = "dot(D2(1),D2(2))"
L_EX2 = "dot(D1(1),D1(3))"
L_EX3 = "trip(D2(1),D2(2),D2(3)) + dot(D3(1),D3(2))"
L_PLANNER = "dot(D2(1),D2(2))*dot(D2(2),D2(3))"


@pytest.fixture
def scene_2d() -> Scene:
    left = BSplineCurve(CUBIC, LEFT_2D)
    right = BSplineCurve(CUBIC, RIGHT_2D)
    return Scene(left, right, 3, 1)


@pytest.fixture
def scene_3d() -> Scene:
    left = BSplineCurve(CUBIC, LEFT_3D)
    right = BSplineCurve(CUBIC, RIGHT_3D)
    return Scene(left, right, 3, 2)


@pytest.fixture
def wiggle_scene() -> Scene:
    left = BSplineCurve(KnotVector((0, 0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1, 1), 3), WIGGLE_LEFT)
    right = BSplineCurve(CUBIC, WIGGLE_RIGHT)
    return Scene(left, right, 3, 2)


@pytest.fixture
def mixed_scene() -> Scene:
    left = BSplineCurve(KnotVector((0, 0, 0, 0, 1 / 3, 2 / 3, 1, 1, 1, 1), 3), MIXED_LEFT)
    right = BSplineCurve(CUBIC, MIXED_RIGHT)
    return Scene(left, right, 3, 2)


@pytest.fixture
def straight_scene() -> Scene:
    """Both tangents along the chord: the obvious-straight-line scene."""
    left = BSplineCurve(CUBIC, [(-3.0, 0.0), (-2.0, 0.0), (-1.0, 0.0), (0.0, 0.0)])
    right = BSplineCurve(CUBIC, [(4.0, 0.0), (5.0, 0.0), (6.0, 0.0), (7.0, 0.0)])
    return Scene(left, right, 3, 1)


def random_rotation(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish random proper rotation via QR."""
    m = rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(m)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
