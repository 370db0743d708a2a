"""Constructions on spanning walks: the one-size-up extension map and the
endpoint-relocation moves that push a spanning walk's ends onto opposite sides.

All moves push an endpoint towards the right side x = L of an L x L box. The
left endpoint and bottom-top spanning walks are handled by reflecting or
transposing the walk, moving right, and mapping back.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .lattice import Box, Point, Walk, bounding_box


class MoveKind(enum.Enum):
    LENGTHEN = "lengthen"
    SHORTEN = "shorten"
    END_ATTACK = "end-attack"
    BACKBITE_UP = "backbite-up"
    BACKBITE_DOWN = "backbite-down"


# Order in which candidate moves are considered.
MOVE_PRIORITY = (
    MoveKind.SHORTEN,
    MoveKind.LENGTHEN,
    MoveKind.END_ATTACK,
    MoveKind.BACKBITE_UP,
    MoveKind.BACKBITE_DOWN,
)


class PreconditionError(ValueError):
    pass


class NoMove(PreconditionError):
    """The endpoint already sits on the target side."""


@dataclass
class MoveTrace:
    steps: list = field(default_factory=list)  # (MoveKind, "right" | "left", column delta)

    def __len__(self):
        return len(self.steps)


# --- extension map -----------------------------------------------------------


def _span_direction(w: Walk, side: int) -> str:
    b, anchor = bounding_box(w)
    if anchor.x == 0 and b.width == side:
        return "lr"
    if anchor.y == 0 and b.height == side:
        return "bt"
    raise PreconditionError(f"walk {w} does not span the {side} x {side} square")


def extend_spanning_walk(w: Walk, side: int) -> Walk:
    """Map a walk spanning the side-``side`` square to one spanning the next size up.

    Left-right spanners grow on the left, bottom-top spanners on the bottom:
    the first boundary vertex met going clockwise from the relevant corner
    either gets an outward step (if it is an endpoint) or has its boundary step
    replaced by the three steps around the outside plaquette.
    """
    for v in w.vertices:
        if not (0 <= v.x <= side and 0 <= v.y <= side):
            raise PreconditionError(f"walk leaves the {side} x {side} square")
    vs = list(w.vertices)
    if _span_direction(w, side) == "lr":
        site = min((v for v in vs if v.x == 0), key=lambda v: v.y)
        i = vs.index(site)
        if i in (0, len(vs) - 1):
            out = Point(-1, site.y)
            vs = [out] + vs if i == 0 else vs + [out]
        else:
            above = Point(0, site.y + 1)
            j = vs.index(above)
            detour = [site, Point(-1, site.y), Point(-1, site.y + 1), above]
            if j == i + 1:
                vs = vs[:i] + detour + vs[j + 1:]
            else:
                vs = vs[:j] + detour[::-1] + vs[i + 1:]
        return Walk((x + 1, y) for x, y in vs)
    site = max((v for v in vs if v.y == 0), key=lambda v: v.x)
    i = vs.index(site)
    if i in (0, len(vs) - 1):
        out = Point(site.x, -1)
        vs = [out] + vs if i == 0 else vs + [out]
    else:
        left = Point(site.x - 1, 0)
        j = vs.index(left)
        detour = [site, Point(site.x, -1), Point(site.x - 1, -1), left]
        if j == i + 1:
            vs = vs[:i] + detour + vs[j + 1:]
        else:
            vs = vs[:j] + detour[::-1] + vs[i + 1:]
    return Walk((x, y + 1) for x, y in vs)


# --- single moves towards x = side --------------------------------------------


def _oriented(w: Walk | Sequence[Point], endpoint: Point) -> list[Point]:
    vs = list(w.vertices if isinstance(w, Walk) else w)
    endpoint = Point(*endpoint)
    if vs[-1] == endpoint:
        return vs
    if vs[0] == endpoint:
        return vs[::-1]
    raise PreconditionError(f"{tuple(endpoint)} is not an endpoint of the walk")


def _select(path: list[Point], side: int) -> tuple[MoveKind, int]:
    """Move kind and, for backbite-type moves, the index of the attacked site."""
    e = path[-1]
    if e.x >= side:
        raise NoMove(f"endpoint {tuple(e)} is already on the side x={side}")
    s = Point(e.x + 1, e.y)
    if len(path) > 1 and path[-2] == s:
        if len(path) == 2:
            raise PreconditionError("shortening would leave a single vertex; the moving end is not rightmost")
        return MoveKind.SHORTEN, -1
    try:
        k = path.index(s)
    except ValueError:
        return MoveKind.LENGTHEN, -1
    if k == 0:
        raise PreconditionError("the site to the right is the other endpoint; the moving end is not rightmost")
    # s is interior and not joined to e, so its two walk edges go up/down/right
    nb = {path[k - 1], path[k + 1]}
    up, down = Point(s.x, s.y + 1), Point(s.x, s.y - 1)
    if nb == {up, down}:
        return (MoveKind.BACKBITE_UP if path[k + 1] == up else MoveKind.BACKBITE_DOWN), k
    return MoveKind.END_ATTACK, k


def select_move(w: Walk, endpoint: Point, box: Box) -> MoveKind:
    """Which move pushes ``endpoint`` one or two columns towards x = box.width."""
    return _select(_oriented(w, endpoint), box.width)[0]


def _apply(path: list[Point], side: int, kind: MoveKind | None = None) -> tuple[list[Point], MoveKind, int]:
    chosen, k = _select(path, side)
    if kind is not None and kind is not chosen:
        raise PreconditionError(f"{kind.value} is not the move selected here ({chosen.value})")
    e = path[-1]
    if chosen is MoveKind.LENGTHEN:
        new = path + [Point(e.x + 1, e.y)]
    elif chosen is MoveKind.SHORTEN:
        new = path[:-1]
    else:
        # join e to the attacked site and cut that site's edge towards e
        new = path[: k + 1] + path[: k : -1]
    return new, chosen, new[-1].x - e.x


def apply_move(w: Walk, endpoint: Point, box: Box, kind: MoveKind | None = None) -> tuple[Walk, Point]:
    """Apply the selected move; returns the new walk and the moved endpoint's new position."""
    new, _, _ = _apply(_oriented(w, endpoint), box.width, kind)
    return Walk(new), new[-1]


# --- relocation of both endpoints ---------------------------------------------


def _to_working_frame(direction: str) -> Callable[[Point], Point]:
    # transposition is its own inverse
    if direction == "lr":
        return lambda p: Point(*p)
    return lambda p: Point(p[1], p[0])


def _push(path: list[Point], side: int, label: str, trace: MoveTrace, check: Callable | None) -> list[Point]:
    while path[-1].x < side:
        path, kind, delta = _apply(path, side)
        if delta not in (1, 2):
            raise AssertionError(f"{kind.value} moved the endpoint by {delta} columns")
        trace.steps.append((kind, label, delta))
        if check is not None:
            check(path)
    return path


def push_to_sides(w: Walk, box: Box, check: Callable | None = None) -> tuple[Walk, MoveTrace]:
    """Move the ends of a spanning walk onto opposite sides of ``box``.

    ``check`` is called on every intermediate vertex list (in the working frame).
    """
    side = box.width
    if box.height != side:
        raise PreconditionError("push_to_sides needs a square box")
    direction = _span_direction(w, side)
    frame = _to_working_frame(direction)
    path = [frame(v) for v in w.vertices]
    a, b = path[0], path[-1]
    # the rightmost end moves first; ties go to the upper end
    if (a.x, a.y) > (b.x, b.y):
        path.reverse()
    trace = MoveTrace()
    path = _push(path, side, "right", trace, check)
    # the other end: reflect x, push right, reflect back
    mirror = lambda p: Point(side - p.x, p.y)  # noqa: E731
    path = [mirror(p) for p in reversed(path)]
    path = _push(path, side, "left", trace, check)
    path = [frame(mirror(p)) for p in path]
    return Walk(path), trace


def antecedents(w: Walk, endpoint: Point, box: Box) -> set[Walk]:
    """Every walk in ``box`` whose selected move at one end produces ``w`` with that end at ``endpoint``."""
    side = box.width
    path = _oriented(w, endpoint)
    t = path[-1]
    candidates = []
    if len(path) >= 3 and path[-2] == Point(t.x - 1, t.y):
        candidates.append(path[:-1])
    left = Point(t.x - 1, t.y)
    if t.x >= 1 and left not in path:
        candidates.append(path + [left])
    for j in range(len(path) - 2):
        s, e = path[j], path[j + 1]
        if e == Point(s.x - 1, s.y) and abs(t.x - s.x) + abs(t.y - s.y) == 1:
            candidates.append(path[: j + 1] + path[: j : -1])
    found = set()
    for v in candidates:
        if not all(box.contains(p) for p in v) or len(set(v)) != len(v):
            continue
        try:
            new, _, _ = _apply(list(v), side)
        except PreconditionError:
            continue
        if new == path:
            found.add(Walk(v))
    return found
