"""Square-lattice geometry: points, boxes, walks, polygons and walk classes.

Walks are undirected. Every walk is stored in a canonical orientation (first
vertex lexicographically no greater than the last) so that each geometric walk
has exactly one representation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class Point(NamedTuple):
    x: int
    y: int


UNIT_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))
MAX_SIDE = 64


class ContainmentError(ValueError):
    """A walk has a vertex outside the box it is classified against."""


class InvalidWalkError(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    """Axis-aligned box of ``width`` x ``height`` lattice edges, anchored at the origin."""

    width: int
    height: int

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError(f"box dimensions must be nonnegative, got {self.width}x{self.height}")
        if max(self.width, self.height) > MAX_SIDE:
            raise ValueError(f"box side exceeds {MAX_SIDE}")

    @classmethod
    def square(cls, side: int) -> "Box":
        return cls(side, side)

    @property
    def num_vertices(self) -> int:
        return (self.width + 1) * (self.height + 1)

    def contains(self, p: Point) -> bool:
        return 0 <= p[0] <= self.width and 0 <= p[1] <= self.height


class SpanVariant(enum.Enum):
    """Two readings of "spans the square of side L".

    EXACT: bounding box is exactly L x L.
    MAX_SIDE: bounding box has its larger side equal to L.
    """

    EXACT = "exact"
    MAX_SIDE = "max-side"


DEFAULT_SPAN = SpanVariant.MAX_SIDE


class WalkClass(enum.Enum):
    OPPOSITE_CORNERS = "opposite-corners"
    OPPOSITE_SIDES = "opposite-sides"
    SPAN_SQUARE = "span-square"
    SPAN_UP_TO = "span-up-to"
    ANYWHERE = "anywhere"
    EXACT_BBOX = "exact-bbox"
    CYCLE = "cycle"


def _check_adjacent(a: Point, b: Point) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


@dataclass(frozen=True)
class Walk:
    """Self-avoiding walk, canonically oriented.

    ``Walk(vertices)`` validates and canonicalizes; use ``Walk.empty_at`` for the
    zero-step walk, which only exists for the ``M_0 = 1`` convention.
    """

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[Sequence[int]], *, allow_empty: bool = False):
        vs = tuple(Point(int(v[0]), int(v[1])) for v in vertices)
        if not vs:
            raise InvalidWalkError("walk has no vertices")
        if len(vs) == 1 and not allow_empty:
            raise InvalidWalkError("a walk needs at least one step")
        for a, b in zip(vs, vs[1:]):
            if not _check_adjacent(a, b):
                raise InvalidWalkError(f"{a} and {b} are not lattice neighbours")
        if len(set(vs)) != len(vs):
            raise InvalidWalkError("walk revisits a vertex")
        if vs[-1] < vs[0]:
            vs = vs[::-1]
        object.__setattr__(self, "vertices", vs)

    @classmethod
    def empty_at(cls, p: Sequence[int] = (0, 0)) -> "Walk":
        return cls([p], allow_empty=True)

    def __len__(self) -> int:
        return len(self.vertices) - 1

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return self.vertices[0], self.vertices[-1]

    def reversed(self) -> "Walk":
        # Canonicalization makes this the identity; kept for symmetry checks.
        return Walk(self.vertices[::-1], allow_empty=True)

    def translated(self, dx: int, dy: int) -> "Walk":
        return Walk(((x + dx, y + dy) for x, y in self.vertices), allow_empty=True)

    def edges(self) -> set[frozenset[Point]]:
        return {frozenset(e) for e in zip(self.vertices, self.vertices[1:])}

    def __str__(self) -> str:
        return "-".join(f"({x},{y})" for x, y in self.vertices)


@dataclass(frozen=True)
class Polygon:
    """Self-avoiding polygon (cycle) in canonical form.

    The least vertex comes first, followed by its lesser cycle neighbour.
    """

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[Sequence[int]]):
        vs = [Point(int(v[0]), int(v[1])) for v in vertices]
        if len(vs) > 1 and vs[0] == vs[-1]:
            vs.pop()
        n = len(vs)
        if n < 4 or n % 2:
            raise InvalidWalkError("a polygon needs an even number (>= 4) of vertices")
        if len(set(vs)) != n:
            raise InvalidWalkError("polygon revisits a vertex")
        for i in range(n):
            if not _check_adjacent(vs[i], vs[(i + 1) % n]):
                raise InvalidWalkError(f"{vs[i]} and {vs[(i + 1) % n]} are not lattice neighbours")
        k = vs.index(min(vs))
        vs = vs[k:] + vs[:k]
        if vs[-1] < vs[1]:
            vs = [vs[0]] + vs[:0:-1]
        object.__setattr__(self, "vertices", tuple(vs))

    @property
    def length(self) -> int:
        return len(self.vertices)


def bounding_box(w: Walk | Polygon) -> tuple[Box, Point]:
    """Smallest box containing ``w`` and its lower-left corner."""
    xs = [v[0] for v in w.vertices]
    ys = [v[1] for v in w.vertices]
    x0, y0 = min(xs), min(ys)
    return Box(max(xs) - x0, max(ys) - y0), Point(x0, y0)


def on_opposite_sides(p: Point, q: Point, side: tuple[int, int]) -> bool:
    """True if one of ``p``, ``q`` lies on x=0 and the other on x=W, or likewise in y."""
    w, h = side
    if (p[0] == 0 and q[0] == w) or (q[0] == 0 and p[0] == w):
        return True
    return (p[1] == 0 and q[1] == h) or (q[1] == 0 and p[1] == h)


def summary_in_class(
    bbox: tuple[int, int, int, int],
    ends: tuple[Point, Point],
    box: Box,
    tag: WalkClass,
    span: SpanVariant = DEFAULT_SPAN,
) -> bool:
    """Class membership from a walk's summary (bbox = x0, y0, x1, y1; endpoints).

    Every walk class except CYCLE depends on the walk only through these, which
    lets the oracle tally summaries instead of walks.
    """
    x0, y0, x1, y1 = bbox
    if x0 < 0 or y0 < 0 or x1 > box.width or y1 > box.height:
        return False
    w, h = x1 - x0, y1 - y0
    if tag is WalkClass.ANYWHERE:
        return True
    if tag is WalkClass.EXACT_BBOX:
        return (x0, y0, x1, y1) == (0, 0, box.width, box.height)
    if tag is WalkClass.OPPOSITE_CORNERS:
        return set(ends) == {(0, 0), (box.width, box.height)}
    if tag is WalkClass.OPPOSITE_SIDES:
        return on_opposite_sides(ends[0], ends[1], (box.width, box.height))
    side = max(box.width, box.height)
    if tag is WalkClass.SPAN_SQUARE:
        if span is SpanVariant.EXACT:
            return w == h == side
        return max(w, h) == side
    if tag is WalkClass.SPAN_UP_TO:
        # Members of M_l for some l <= side, sitting in the l x l square at the origin.
        ell = max(w, h)
        if span is SpanVariant.EXACT and w != h:
            return False
        return x1 <= ell and y1 <= ell
    raise ValueError(f"{tag} is not a walk class")


def classify(
    w: Walk | Polygon,
    box: Box,
    tag: WalkClass,
    span: SpanVariant = DEFAULT_SPAN,
) -> bool:
    """Whether ``w`` (already inside ``box``) belongs to the class ``tag``."""
    for v in w.vertices:
        if not box.contains(v):
            raise ContainmentError(f"vertex {tuple(v)} lies outside {box.width}x{box.height} box")
    if tag is WalkClass.CYCLE:
        return isinstance(w, Polygon)
    if isinstance(w, Polygon):
        return False
    b, anchor = bounding_box(w)
    bbox = (anchor.x, anchor.y, anchor.x + b.width, anchor.y + b.height)
    return summary_in_class(bbox, w.endpoints, box, tag, span)


def neighbours(p: Point) -> list[Point]:
    return [Point(p[0] + dx, p[1] + dy) for dx, dy in UNIT_STEPS]
