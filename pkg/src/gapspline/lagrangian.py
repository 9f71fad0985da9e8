"""Forward-difference invariants and the Lagrangian expression language.

A Lagrangian is a scalar expression over vector leaves ``D<order>(<index>)``,
the order-th forward difference of the control sequence starting at the named
point.  Grammar (whitespace between tokens is ignored)::

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := number | 'dot(' vec ',' vec ')' | 'trip(' vec ',' vec ',' vec ')'
            | '(' expr ')'
    vec    := 'D' order '(' index ')'

Orders are limited to 1..3; ``trip`` (the scalar triple product) only type
checks against 3D scenes.  Leaf indices follow the convention that index 1 is
the first control point of the connecting curve; smaller indices reach into
the fixed left data, larger ones into the right.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import DslSyntaxError, DslTypeError, InvalidArgument

MAX_ORDER = 3


# ---------------------------------------------------------------------------
# difference table
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DifferenceTable:
    """Forward differences of a point sequence, levels 0..max_order.

    ``levels[l][j]`` is the order-l difference starting at base point j;
    base point j carries external index ``first_index + j``.
    """

    levels: tuple[np.ndarray, ...]
    first_index: int

    @property
    def base(self) -> np.ndarray:
        return self.levels[0]

    @property
    def dim(self) -> int:
        return self.levels[0].shape[1]

    @property
    def max_order(self) -> int:
        return len(self.levels) - 1

    def index_range(self, order: int) -> tuple[int, int]:
        """Inclusive external index range valid for the given order."""
        if not 0 <= order <= self.max_order:
            raise InvalidArgument(f"difference order {order} not in table (max {self.max_order})")
        lo = self.first_index
        return lo, lo + self.levels[order].shape[0] - 1

    def invariant(self, index: int, order: int) -> np.ndarray:
        """The difference vector I_{index, order}."""
        lo, hi = self.index_range(order)
        if not lo <= index <= hi:
            raise InvalidArgument(
                f"difference D{order}({index}) needs base points outside the "
                f"sequence (valid start indices {lo}..{hi})"
            )
        return self.levels[order][index - self.first_index]


def build_difference_table(
    points: np.ndarray, max_order: int, first_index: int = 1
) -> DifferenceTable:
    """Forward-difference table p_i^l = p_{i+1}^{l-1} - p_i^{l-1} up to max_order."""
    base = np.asarray(points, dtype=float)
    if base.ndim != 2 or base.shape[1] not in (2, 3):
        raise InvalidArgument(f"points must be (n, 2) or (n, 3), got {base.shape}")
    if not 0 <= max_order < base.shape[0]:
        raise InvalidArgument(
            f"max_order must be in [0, {base.shape[0] - 1}] for {base.shape[0]} points"
        )
    levels = [base]
    for _ in range(max_order):
        prev = levels[-1]
        levels.append(prev[1:] - prev[:-1])
    for lvl in levels:
        lvl.flags.writeable = False
    return DifferenceTable(tuple(levels), first_index)


# ---------------------------------------------------------------------------
# expression nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Diff:
    """Vector leaf D<order>(<index>)."""

    order: int
    index: int


@dataclass(frozen=True)
class Dot:
    left: Diff
    right: Diff


@dataclass(frozen=True)
class Trip:
    """Scalar triple product (left x middle) . right — 3D only."""

    left: Diff
    middle: Diff
    right: Diff


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


Expr = Number | Dot | Trip | Sum | Product


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_NUMBER = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_INT = re.compile(r"-?\d+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, at: int | None = None):
        raise DslSyntaxError(message, self.pos if at is None else at)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.fail(f"expected '{ch}'")
        self.pos += 1

    def parse(self) -> Expr:
        expr = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("unexpected trailing input")
        return expr

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> Expr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if self.text.startswith("dot", self.pos):
            self.pos += 3
            self.expect("(")
            a = self.vec()
            self.expect(",")
            b = self.vec()
            self.expect(")")
            return Dot(a, b)
        if self.text.startswith("trip", self.pos):
            self.pos += 4
            self.expect("(")
            a = self.vec()
            self.expect(",")
            b = self.vec()
            self.expect(",")
            c = self.vec()
            self.expect(")")
            return Trip(a, b, c)
        m = _NUMBER.match(self.text, self.pos)
        if m and (ch.isdigit() or ch == "-" or ch == "."):
            self.pos = m.end()
            return Number(float(m.group()))
        self.fail("expected number, dot(...), trip(...), or '('")

    def vec(self) -> Diff:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != "D":
            self.fail("expected difference leaf 'D<order>(<index>)'")
        start = self.pos
        self.pos += 1
        m = _INT.match(self.text, self.pos)
        if not m or m.group().startswith("-"):
            self.fail("expected difference order after 'D'")
        order = int(m.group())
        self.pos = m.end()
        if not 1 <= order <= MAX_ORDER:
            self.fail(f"difference order must be 1..{MAX_ORDER}", at=start)
        self.expect("(")
        self.skip_ws()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.fail("expected integer leaf index")
        index = int(m.group())
        self.pos = m.end()
        self.expect(")")
        return Diff(order, index)


def parse_lagrangian(text: str) -> Expr:
    """Parse Lagrangian text; syntax errors carry the byte offset."""
    return _Parser(text).parse()


def format_lagrangian(expr: Expr) -> str:
    """Canonical text form; parse(format(e)) is structurally equal to e."""
    return _fmt(expr, top=True)


def _fmt(node: Expr, top: bool = False) -> str:
    if isinstance(node, Number):
        return repr(node.value)
    if isinstance(node, Diff):
        return f"D{node.order}({node.index})"
    if isinstance(node, Dot):
        return f"dot({_fmt(node.left)},{_fmt(node.right)})"
    if isinstance(node, Trip):
        return f"trip({_fmt(node.left)},{_fmt(node.middle)},{_fmt(node.right)})"
    if isinstance(node, Sum):
        body = " + ".join(_fmt(t) for t in node.terms)
        return body if top else f"({body})"
    if isinstance(node, Product):
        return "*".join(_fmt(f) for f in node.factors)
    raise InvalidArgument(f"unknown expression node {node!r}")


def lagrangian_leaves(expr: Expr) -> list[Diff]:
    """All difference leaves, in syntactic order (duplicates kept)."""
    out: list[Diff] = []
    _collect(expr, out)
    return out


def _collect(node: Expr, out: list[Diff]):
    if isinstance(node, Diff):
        out.append(node)
    elif isinstance(node, Dot):
        out += [node.left, node.right]
    elif isinstance(node, Trip):
        out += [node.left, node.middle, node.right]
    elif isinstance(node, Sum):
        for t in node.terms:
            _collect(t, out)
    elif isinstance(node, Product):
        for f in node.factors:
            _collect(f, out)


def leaf_point_span(expr: Expr) -> tuple[int, int]:
    """Inclusive range of base-point indices any leaf touches.

    D<l>(i) reads base points i .. i+l.
    """
    leaves = lagrangian_leaves(expr)
    if not leaves:
        raise DslTypeError("Lagrangian has no difference leaves")
    lo = min(leaf.index for leaf in leaves)
    hi = max(leaf.index + leaf.order for leaf in leaves)
    return lo, hi


def validate_lagrangian(expr: Expr, dim: int, table: DifferenceTable | None = None):
    """Dimension/type checks; with a table, also range-check every leaf."""
    if dim not in (2, 3):
        raise InvalidArgument(f"dim must be 2 or 3, got {dim}")
    if dim == 2 and _contains_trip(expr):
        raise DslTypeError("trip() is a triple product and needs a 3D scene")
    leaf_point_span(expr)  # raises on leaf-free expressions
    if table is not None:
        for leaf in lagrangian_leaves(expr):
            table.invariant(leaf.index, leaf.order)


def _contains_trip(node: Expr) -> bool:
    if isinstance(node, Trip):
        return True
    if isinstance(node, Sum):
        return any(_contains_trip(t) for t in node.terms)
    if isinstance(node, Product):
        return any(_contains_trip(f) for f in node.factors)
    return False


# ---------------------------------------------------------------------------
# evaluation and exact gradients
# ---------------------------------------------------------------------------


def eval_lagrangian(expr: Expr, table: DifferenceTable) -> float:
    """Scalar value of the Lagrangian on the given difference table."""
    return _eval(expr, table)


def _eval(node: Expr, table: DifferenceTable) -> float:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Dot):
        a = table.invariant(node.left.index, node.left.order)
        b = table.invariant(node.right.index, node.right.order)
        return float(a @ b)
    if isinstance(node, Trip):
        a = table.invariant(node.left.index, node.left.order)
        b = table.invariant(node.middle.index, node.middle.order)
        c = table.invariant(node.right.index, node.right.order)
        if table.dim != 3:
            raise DslTypeError("trip() needs a 3D table")
        return float(np.cross(a, b) @ c)
    if isinstance(node, Sum):
        return sum(_eval(t, table) for t in node.terms)
    if isinstance(node, Product):
        out = 1.0
        for f in node.factors:
            out *= _eval(f, table)
        return out
    raise InvalidArgument(f"cannot evaluate node {node!r}")


def leaf_partials(expr: Expr, table: DifferenceTable) -> dict[tuple[int, int], np.ndarray]:
    """dL/dI_{index,order} accumulated per (order, index) leaf, as vectors."""
    out: dict[tuple[int, int], np.ndarray] = {}
    _backprop(expr, 1.0, table, out)
    return out


def _accumulate(out, leaf: Diff, vec: np.ndarray):
    key = (leaf.order, leaf.index)
    if key in out:
        out[key] = out[key] + vec
    else:
        out[key] = vec


def _backprop(node: Expr, cot: float, table: DifferenceTable, out: dict):
    if isinstance(node, Number):
        return
    if isinstance(node, Dot):
        a = table.invariant(node.left.index, node.left.order)
        b = table.invariant(node.right.index, node.right.order)
        _accumulate(out, node.left, cot * b)
        _accumulate(out, node.right, cot * a)
        return
    if isinstance(node, Trip):
        a = table.invariant(node.left.index, node.left.order)
        b = table.invariant(node.middle.index, node.middle.order)
        c = table.invariant(node.right.index, node.right.order)
        _accumulate(out, node.left, cot * np.cross(b, c))
        _accumulate(out, node.middle, cot * np.cross(c, a))
        _accumulate(out, node.right, cot * np.cross(a, b))
        return
    if isinstance(node, Sum):
        for t in node.terms:
            _backprop(t, cot, table, out)
        return
    if isinstance(node, Product):
        vals = [_eval(f, table) for f in node.factors]
        for j, f in enumerate(node.factors):
            partial = cot
            for k, v in enumerate(vals):
                if k != j:
                    partial *= v
            _backprop(f, partial, table, out)
        return
    raise InvalidArgument(f"cannot differentiate node {node!r}")


def grad_lagrangian(
    expr: Expr, table: DifferenceTable, free: "list[int] | tuple[int, ...]"
) -> np.ndarray:
    """Exact gradient of the Lagrangian w.r.t. the named base points.

    Backpropagates the leaf partials through the difference recursion
    p_i^l = p_{i+1}^{l-1} - p_i^{l-1}.  Returns shape (len(free), dim), rows
    in the order given.
    """
    free = list(free)
    if not free:
        raise InvalidArgument("free index set must not be empty")
    bars = leaf_partials(expr, table)
    n = table.base.shape[0]
    dim = table.dim
    max_order = max((order for order, _ in bars), default=0)
    adjoint = [np.zeros((n - l, dim)) for l in range(max_order + 1)]
    for (order, index), bar in bars.items():
        lo, hi = table.index_range(order)
        if not lo <= index <= hi:
            raise InvalidArgument(f"leaf D{order}({index}) outside the table")
        adjoint[order][index - table.first_index] += bar
    for l in range(max_order, 0, -1):
        adjoint[l - 1][1:] += adjoint[l]
        adjoint[l - 1][:-1] -= adjoint[l]
    full = adjoint[0]
    rows = []
    for index in free:
        pos = index - table.first_index
        if not 0 <= pos < n:
            raise InvalidArgument(f"free index {index} outside the table")
        rows.append(full[pos])
    return np.array(rows)
