import numpy as np
import pytest

from conftest import L_EX1, L_EX2, L_EX3, L_PLANNER, random_rotation
from gapspline.errors import DslSyntaxError, DslTypeError, InvalidArgument
from gapspline.lagrangian import (
    Diff,
    Dot,
    Number,
    Product,
    Sum,
    Trip,
    build_difference_table,
    eval_lagrangian,
    format_lagrangian,
    grad_lagrangian,
    leaf_point_span,
    parse_lagrangian,
    validate_lagrangian,
)

EX1_LEFT = np.array([(0.0, 0.0), (1.0, 4.0), (2.0, 1.0), (4.0, 3.0)])


# ---------------------------------------------------------------- table


def test_difference_table_levels():
    t = build_difference_table(EX1_LEFT, 2, first_index=1)
    np.testing.assert_allclose(t.invariant(1, 1), (1, 4))
    np.testing.assert_allclose(t.invariant(1, 2), (0, -7))
    np.testing.assert_allclose(t.invariant(2, 2), (1, 5))


def test_difference_table_first_index_offsets():
    t = build_difference_table(EX1_LEFT, 2, first_index=-2)
    np.testing.assert_allclose(t.invariant(-2, 2), (0, -7))
    assert t.index_range(0) == (-2, 1)
    assert t.index_range(2) == (-2, -1)
    with pytest.raises(InvalidArgument):
        t.invariant(0, 2)


def test_difference_table_linearity():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(6, 3))
    b = rng.normal(size=(6, 3))
    ta = build_difference_table(a, 3)
    tb = build_difference_table(b, 3)
    tab = build_difference_table(a + b, 3)
    for lvl in range(4):
        np.testing.assert_allclose(tab.levels[lvl], ta.levels[lvl] + tb.levels[lvl], atol=1e-12)


def test_table_rejects_excess_order():
    with pytest.raises(InvalidArgument):
        build_difference_table(EX1_LEFT, 4)


def test_collinear_equispaced_second_differences_vanish():
    pts = np.array([(i, 2.0 * i) for i in range(5)], dtype=float)
    t = build_difference_table(pts, 2)
    np.testing.assert_allclose(t.levels[2], 0.0, atol=1e-15)


# ---------------------------------------------------------------- parser


def test_parse_example_lagrangians():
    assert parse_lagrangian(L_EX1) == Dot(Diff(2, 1), Diff(2, 2))
    assert parse_lagrangian(L_EX3) == Sum(
        (Trip(Diff(2, 1), Diff(2, 2), Diff(2, 3)), Dot(Diff(3, 1), Diff(3, 2)))
    )
    assert parse_lagrangian(L_PLANNER) == Product(
        (Dot(Diff(2, 1), Diff(2, 2)), Dot(Diff(2, 2), Diff(2, 3)))
    )


def test_parse_numbers_whitespace_negative_indices():
    e = parse_lagrangian(" 2.5 * dot( D1(-2) , D1(0) ) + 1e-3 ")
    assert e == Sum((Product((Number(2.5), Dot(Diff(1, -2), Diff(1, 0)))), Number(0.001)))


def test_syntax_errors_carry_byte_offsets():
    with pytest.raises(DslSyntaxError) as err:
        parse_lagrangian("dot(D2(1),D2(2)")
    assert err.value.offset == len("dot(D2(1),D2(2)")
    with pytest.raises(DslSyntaxError) as err:
        parse_lagrangian("dot(D2(1)  D2(2))")
    assert err.value.offset == 11
    with pytest.raises(DslSyntaxError):
        parse_lagrangian("")
    with pytest.raises(DslSyntaxError) as err:
        parse_lagrangian("dot(D2(1),D2(2)))")
    assert err.value.offset == 16


def test_difference_order_limited_to_three():
    with pytest.raises(DslSyntaxError) as err:
        parse_lagrangian("dot(D4(1),D1(2))")
    assert err.value.offset == 4
    with pytest.raises(DslSyntaxError):
        parse_lagrangian("dot(D0(1),D1(2))")


def test_printer_round_trip():
    for text in [L_EX1, L_EX2, L_EX3, L_PLANNER,
                 "2.0*(dot(D1(1),D1(1)) + 3.5)*dot(D2(0),D2(0))"]:
        e = parse_lagrangian(text)
        assert parse_lagrangian(format_lagrangian(e)) == e


def test_trip_requires_3d():
    e = parse_lagrangian(L_EX3)
    with pytest.raises(DslTypeError):
        validate_lagrangian(e, 2)
    validate_lagrangian(e, 3)


def test_leaf_point_span():
    assert leaf_point_span(parse_lagrangian(L_EX1)) == (1, 4)
    assert leaf_point_span(parse_lagrangian(L_EX2)) == (1, 4)
    assert leaf_point_span(parse_lagrangian("dot(D3(-1),D2(5))")) == (-1, 7)
    with pytest.raises(DslTypeError):
        leaf_point_span(Number(3.0))


# ---------------------------------------------------------------- eval


def test_eval_example1_oracle():
    # p1^2 = (0,-7), p2^2 = (1,5) -> dot = -35
    t = build_difference_table(EX1_LEFT, 2)
    assert eval_lagrangian(parse_lagrangian(L_EX1), t) == pytest.approx(-35.0)


def test_eval_zero_on_collinear_for_order2_leaves():
    pts = np.array([(i, 3.0 * i) for i in range(5)], dtype=float)
    t = build_difference_table(pts, 2)
    assert eval_lagrangian(parse_lagrangian(L_EX1), t) == pytest.approx(0.0, abs=1e-14)


def test_degenerate_triple_product_is_zero():
    rng = np.random.default_rng(4)
    pts = rng.normal(size=(6, 3))
    t = build_difference_table(pts, 2)
    e = parse_lagrangian("trip(D2(1),D2(1),D2(3))")
    assert eval_lagrangian(e, t) == pytest.approx(0.0, abs=1e-12)


def test_translation_and_rotation_invariance():
    rng = np.random.default_rng(9)
    for text, dim in [(L_EX1, 2), (L_EX2, 2), (L_PLANNER, 2), (L_EX3, 3), (L_EX1, 3)]:
        e = parse_lagrangian(text)
        pts = rng.normal(size=(7, dim))
        t = build_difference_table(pts, 3)
        base = eval_lagrangian(e, t)
        shifted = build_difference_table(pts + rng.normal(size=dim), 3)
        assert eval_lagrangian(e, shifted) == pytest.approx(base, abs=1e-12 * max(1, abs(base)))
        rot = random_rotation(rng, dim)
        rotated = build_difference_table(pts @ rot.T, 3)
        assert eval_lagrangian(e, rotated) == pytest.approx(base, abs=1e-10 * max(1, abs(base)))


# ---------------------------------------------------------------- gradient


def _fd_gradient(e, pts, first_index, free, h=1e-6):
    rows = []
    for idx in free:
        pos = idx - first_index
        row = []
        for c in range(pts.shape[1]):
            up = pts.copy()
            up[pos, c] += h
            down = pts.copy()
            down[pos, c] -= h
            lo = eval_lagrangian(e, build_difference_table(down, 3, first_index))
            hi = eval_lagrangian(e, build_difference_table(up, 3, first_index))
            row.append((hi - lo) / (2 * h))
        rows.append(row)
    return np.array(rows)


def test_simple_quadratic_gradient():
    # L = |p2 - p1|^2, gradient at p2 is 2(p2 - p1)
    pts = np.array([(1.0, 2.0), (4.0, -1.0)])
    t = build_difference_table(pts, 1)
    e = parse_lagrangian("dot(D1(1),D1(1))")
    g = grad_lagrangian(e, t, [2])
    np.testing.assert_allclose(g[0], 2 * (pts[1] - pts[0]), atol=1e-14)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(17)
    cases = [(L_EX1, 2), (L_EX2, 2), (L_PLANNER, 2), (L_EX3, 3)]
    for text, dim in cases:
        e = parse_lagrangian(text)
        for _ in range(25):
            pts = rng.normal(size=(8, dim))
            first = -2
            t = build_difference_table(pts, 3, first)
            free = list(range(first, first + 8))
            exact = grad_lagrangian(e, t, free)
            approx = _fd_gradient(e, pts, first, free)
            scale = max(1.0, np.abs(exact).max())
            assert np.abs(exact - approx).max() / scale < 1e-6


def test_constant_lagrangian_has_zero_gradient():
    t = build_difference_table(EX1_LEFT, 2)
    g = grad_lagrangian(parse_lagrangian("3.0"), t, [2, 3])
    np.testing.assert_allclose(g, 0.0, atol=1e-15)
    g = grad_lagrangian(parse_lagrangian("3.0 + 2.0*dot(D2(1),D2(1))*0.0"), t, [2, 3])
    np.testing.assert_allclose(g, 0.0, atol=1e-15)


def test_gradient_rejects_empty_free_set():
    t = build_difference_table(EX1_LEFT, 2)
    with pytest.raises(InvalidArgument):
        grad_lagrangian(parse_lagrangian(L_EX1), t, [])
