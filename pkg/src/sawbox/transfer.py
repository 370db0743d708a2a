"""Transfer-matrix enumeration of walks and cycles inside an h x l rectangle.

The sweep runs over vertex columns left to right and, within a column, over
vertices bottom to top. The boundary is a tuple of ``h + 2`` cells: for rows
below the current vertex the horizontal edge leaving to the right, then the
vertical "kink" edge entering the current vertex from below, then for the
remaining rows the horizontal edge entering from the left. Processing the
vertex in row ``r`` reads cells ``r`` (below) and ``r + 1`` (left) and writes
cells ``r`` (right) and ``r + 1`` (up), so no reshuffling is needed inside a
column.

Cell values::

    0  empty
    1  lower end of an arc (both ends of the arc are on the boundary)
    2  upper end of an arc
    3  free end: the strand is attached to a walk endpoint already placed

Arcs nest like parentheses; free ends are transparent to the matching. The
number of free ends equals the number of endpoints placed so far, so no
separate counter is carried. A walk is complete when its two ends meet in a
free-free strand with the rest of the boundary empty; completed walks drop
out of the sweep into a running total, which makes one sweep of width ``h``
yield the in-box counts for every length at once.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

log = logging.getLogger(__name__)

EMPTY, LOWER, UPPER, FREE = 0, 1, 2, 3
MAX_WIDTH = 16
MAX_LENGTH = 64


class InvariantViolation(AssertionError):
    """A sweep or table reached a state that a correct build cannot produce."""


class IncompleteTableError(KeyError):
    pass


def _partner(state, i: int) -> int:
    """Index of the arc end matching the one at ``i``."""
    depth = 0
    if state[i] == LOWER:
        for j in range(i + 1, len(state)):
            c = state[j]
            if c == LOWER:
                depth += 1
            elif c == UPPER:
                if depth == 0:
                    return j
                depth -= 1
    else:
        for j in range(i - 1, -1, -1):
            c = state[j]
            if c == UPPER:
                depth += 1
            elif c == LOWER:
                if depth == 0:
                    return j
                depth -= 1
    raise InvariantViolation(f"unbalanced boundary {state}")


def signature_is_valid(state) -> bool:
    """Arcs balanced and at most two free ends."""
    depth = 0
    for c in state:
        if c == LOWER:
            depth += 1
        elif c == UPPER:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0 and sum(1 for c in state if c == FREE) <= 2


def _check_dims(h: int, l: int):
    if h < 0 or l < 0:
        raise ValueError("rectangle dimensions must be nonnegative")
    if h > MAX_WIDTH:
        raise MemoryError(f"sweep width {h} exceeds the cap of {MAX_WIDTH}")
    if l > MAX_LENGTH:
        raise MemoryError(f"sweep length {l} exceeds the cap of {MAX_LENGTH}")


def _walk_vertex(states, r: int, top: bool, new, done: list, check: bool):
    for st, cnt in states.items():
        a, b = st[r], st[r + 1]
        if a == EMPTY and b == EMPTY:
            new[st] += cnt
            if not top:
                s = list(st)
                s[r], s[r + 1] = LOWER, UPPER
                new[tuple(s)] += cnt
            if st.count(FREE) < 2:
                s = list(st)
                s[r] = FREE
                new[tuple(s)] += cnt
                if not top:
                    s[r], s[r + 1] = EMPTY, FREE
                    new[tuple(s)] += cnt
        elif a == EMPTY or b == EMPTY:
            x = a or b
            s = list(st)
            s[r], s[r + 1] = x, EMPTY
            new[tuple(s)] += cnt
            if not top:
                s[r], s[r + 1] = EMPTY, x
                new[tuple(s)] += cnt
            # the vertex is a walk endpoint
            if x == FREE:
                if not any(st[:r]) and not any(st[r + 2:]):
                    done[0] += cnt
            elif st.count(FREE) < 2:
                s = list(st)
                s[r] = s[r + 1] = EMPTY
                s[_partner(st, r if a else r + 1)] = FREE
                new[tuple(s)] += cnt
        else:
            if a == LOWER and b == UPPER:
                continue  # would close a loop
            s = list(st)
            s[r] = s[r + 1] = EMPTY
            if a == FREE and b == FREE:
                if not any(s):
                    done[0] += cnt
                continue
            if a == FREE:
                s[_partner(st, r + 1)] = FREE
            elif b == FREE:
                s[_partner(st, r)] = FREE
            elif a == LOWER:  # and b == LOWER
                s[_partner(st, r + 1)] = LOWER
            elif b == UPPER:  # and a == UPPER
                s[_partner(st, r)] = UPPER
            # a == UPPER, b == LOWER: the outer ends already pair correctly
            t = tuple(s)
            if check and not signature_is_valid(t):
                raise InvariantViolation(f"invalid signature {t} from {st}")
            new[t] += cnt


def _polygon_vertex(states, r: int, top: bool, new, done: list, check: bool):
    for st, cnt in states.items():
        a, b = st[r], st[r + 1]
        if a == EMPTY and b == EMPTY:
            new[st] += cnt
            if not top:
                s = list(st)
                s[r], s[r + 1] = LOWER, UPPER
                new[tuple(s)] += cnt
        elif a == EMPTY or b == EMPTY:
            x = a or b
            s = list(st)
            s[r], s[r + 1] = x, EMPTY
            new[tuple(s)] += cnt
            if not top:
                s[r], s[r + 1] = EMPTY, x
                new[tuple(s)] += cnt
        else:
            s = list(st)
            s[r] = s[r + 1] = EMPTY
            if a == LOWER and b == UPPER:
                if not any(s):
                    done[0] += cnt
                continue
            if a == LOWER:
                s[_partner(st, r + 1)] = LOWER
            elif b == UPPER:
                s[_partner(st, r)] = UPPER
            t = tuple(s)
            if check and not signature_is_valid(t):
                raise InvariantViolation(f"invalid signature {t} from {st}")
            new[t] += cnt


def sweep(h: int, lmax: int, polygons: bool = False, check: bool = False) -> list[int]:
    """In-box counts for a strip of height ``h``: element ``l`` is the count for the h x l box.

    Walks have at least one step; for ``polygons=True`` the objects are cycles.
    """
    _check_dims(h, lmax)
    step = _polygon_vertex if polygons else _walk_vertex
    width = h + 2
    states: dict = {(EMPTY,) * width: 1}
    done = [0]
    out = []
    for c in range(lmax + 1):
        for r in range(h + 1):
            new: dict = defaultdict(int)
            step(states, r, r == h, new, done, check)
            states = new
        out.append(done[0])
        # shift: right edges become next column's left edges, empty kink below row 0
        nxt: dict = defaultdict(int)
        for st, cnt in states.items():
            if st[h + 1] != EMPTY:
                raise InvariantViolation(f"edge leaves the top of the strip in {st}")
            nxt[(EMPTY,) + st[: h + 1]] += cnt
        states = nxt
        log.debug("h=%d column %d: %d states", h, c, len(states))
    return out


def tm_inbox_count(h: int, l: int) -> int:
    """Number of walks (length >= 1) with every vertex in the h x l box."""
    return sweep(h, l)[l]


def tm_polygon_inbox_count(h: int, l: int) -> int:
    return sweep(h, l, polygons=True)[l]


def second_difference_2d(N: Mapping, h: int, l: int) -> int:
    """Invert N[h,l] = sum_{a<=h, b<=l} (h-a+1)(l-b+1) X[a,b] for X[h,l]."""
    total = 0
    for dh, wh in ((0, 1), (1, -2), (2, 1)):
        for dl, wl in ((0, 1), (1, -2), (2, 1)):
            hh, ll = h - dh, l - dl
            if hh < 0 or ll < 0:
                continue
            key = (hh, ll) if (hh, ll) in N else (ll, hh)
            if key not in N:
                raise IncompleteTableError(f"N[{hh},{ll}] is needed for the ({h},{l}) entry")
            total += wh * wl * N[key]
    return total


@dataclass
class RectTable:
    """In-box counts ``n`` and exact-bounding-box counts ``a_exact``, keyed by (h, l) with h <= l."""

    n: dict = field(default_factory=dict)
    a_exact: dict = field(default_factory=dict)
    polygons: bool = False

    @property
    def side(self) -> int:
        """Largest L such that every (h, l) with h <= l <= L is present."""
        L = -1
        while all((h, L + 1) in self.a_exact for h in range(L + 2)):
            L += 1
        return L

    def exact(self, h: int, l: int) -> int:
        return self.a_exact[(min(h, l), max(h, l))]

    def inbox(self, h: int, l: int) -> int:
        return self.n[(min(h, l), max(h, l))]


def exact_bbox_count(N: Mapping, h: int, l: int) -> int:
    """Ahat[h,l] from the in-box table by double second differences."""
    value = second_difference_2d(N, h, l)
    if value < 0:
        raise InvariantViolation(f"negative exact-bbox count {value} at ({h},{l})")
    return value


def build_rect_table(L: int, polygons: bool = False, table: RectTable | None = None) -> RectTable:
    """All N and Ahat for 0 <= h <= l <= L; extends ``table`` instead of recomputing it."""
    if table is None:
        table = RectTable(polygons=polygons)
    if table.polygons != polygons:
        raise ValueError("cannot extend a walk table with cycle counts or vice versa")
    for h in range(L + 1):
        if all((h, l) in table.n for l in range(h, L + 1)):
            continue
        counts = sweep(h, L, polygons=polygons)
        for l in range(h, L + 1):
            table.n[(h, l)] = counts[l]
        log.info("swept width %d to length %d", h, L)
    for l in range(L + 1):
        for h in range(l + 1):
            if (h, l) not in table.a_exact:
                table.a_exact[(h, l)] = exact_bbox_count(table.n, h, l)
    return table


def assemble_A(L: int, table: RectTable) -> int:
    """Count in the L x L square by summing exact-bbox counts over all placements."""
    try:
        total = sum((L - l + 1) ** 2 * table.exact(l, l) for l in range(1, L + 1))
        total += 2 * sum(
            (L - l + 1) * (L - h + 1) * table.exact(h, l)
            for h in range(0, L)
            for l in range(h + 1, L + 1)
        )
    except KeyError as exc:
        raise IncompleteTableError(f"rect table lacks entry {exc.args[0]} for L={L}") from None
    return total


def reconstruct_inbox(table: RectTable, h: int, l: int) -> int:
    """Rebuild N[h,l] from exact-bbox counts (the identity the second differences invert)."""
    return sum(
        (h - a + 1) * (l - b + 1) * table.exact(a, b)
        for a in range(h + 1)
        for b in range(l + 1)
    )


def series_A(L: int, polygons: bool = False, table: RectTable | None = None) -> tuple[list[int], list[int], RectTable]:
    """([A_1..A_L], [Ahat_11..Ahat_LL], table); with polygons=True, cycle counts P_L instead."""
    table = build_rect_table(L, polygons=polygons, table=table)
    a = [assemble_A(k, table) for k in range(1, L + 1)]
    diag = [table.exact(k, k) for k in range(1, L + 1)]
    return a, diag, table
