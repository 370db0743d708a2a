"""Brute-force depth-first enumeration: the ground truth for every other engine.

The DFS never looks at anything but box containment. Each directed path with
start < end (lexicographic) is one undirected walk; its bounding box and
endpoints are tallied, and class counts are read off the tally afterwards.
"""

from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .lattice import (
    Box,
    DEFAULT_SPAN,
    Point,
    Polygon,
    SpanVariant,
    Walk,
    WalkClass,
    summary_in_class,
)

DEFAULT_BUDGET = 10**9


class ResourceLimitError(RuntimeError):
    pass


Summary = tuple  # (x0, y0, x1, y1, start, end)


def _grid(box: Box):
    W, H = box.width + 1, box.height + 1
    coords = [Point(i % W, i // W) for i in range(W * H)]
    nbrs = []
    for x, y in coords:
        nb = []
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            if 0 <= x + dx < W and 0 <= y + dy < H:
                nb.append((y + dy) * W + x + dx)
        nbrs.append(tuple(nb))
    return coords, nbrs


def walk_tally(box: Box, budget: int = DEFAULT_BUDGET) -> Counter:
    """Counter of walk summaries over all walks (length >= 1) inside ``box``."""
    coords, nbrs = _grid(box)
    n = len(coords)
    tally: Counter = Counter()
    visited = [False] * n
    nodes = 0
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 100))

    def dfs(v, start, x0, y0, x1, y1):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError(
                f"oracle exceeded its budget of {budget} visited walks in a "
                f"{box.width}x{box.height} box"
            )
        visited[v] = True
        for u in nbrs[v]:
            if visited[u]:
                continue
            x, y = coords[u]
            a0, b0 = (x if x < x0 else x0), (y if y < y0 else y0)
            a1, b1 = (x if x > x1 else x1), (y if y > y1 else y1)
            if start < u:
                tally[(a0, b0, a1, b1, start, u)] += 1
            dfs(u, start, a0, b0, a1, b1)
        visited[v] = False

    for s in range(n):
        x, y = coords[s]
        dfs(s, s, x, y, x, y)
    return Counter(
        {(k[0], k[1], k[2], k[3], coords[k[4]], coords[k[5]]): c for k, c in tally.items()}
    )


def polygon_tally(box: Box, budget: int = DEFAULT_BUDGET) -> Counter:
    """Counter of (x0, y0, x1, y1) over all cycles inside ``box``."""
    coords, nbrs = _grid(box)
    n = len(coords)
    tally: Counter = Counter()
    visited = [False] * n
    nodes = 0

    def dfs(v, root, second, length, x0, y0, x1, y1):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimitError(f"oracle exceeded its budget of {budget} visited paths")
        visited[v] = True
        for u in nbrs[v]:
            if u == root:
                # each cycle is traced twice; keep the direction whose second vertex is smaller
                if length >= 3 and second < v:
                    tally[(x0, y0, x1, y1)] += 1
                continue
            if visited[u] or u < root:
                continue
            x, y = coords[u]
            dfs(
                u, root, second if second >= 0 else u, length + 1,
                min(x, x0), min(y, y0), max(x, x1), max(y, y1),
            )
        visited[v] = False

    for r in range(n):
        x, y = coords[r]
        dfs(r, r, -1, 0, x, y, x, y)
    return tally


@dataclass
class CountTable:
    """Exact counts keyed by (class tag, width, height)."""

    entries: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.entries[key]

    def __setitem__(self, key, value):
        self.entries[key] = value

    def __eq__(self, other):
        return isinstance(other, CountTable) and self.entries == other.entries


def count_from_tally(tally: Counter, box: Box, tag: WalkClass, span: SpanVariant = DEFAULT_SPAN) -> int:
    if tag is WalkClass.CYCLE:
        return sum(
            c for (x0, y0, x1, y1), c in tally.items()
            if x0 >= 0 and y0 >= 0 and x1 <= box.width and y1 <= box.height
        )
    return sum(
        c for (x0, y0, x1, y1, s, e), c in tally.items()
        if summary_in_class((x0, y0, x1, y1), (s, e), box, tag, span)
    )


def oracle_count(
    tag: WalkClass,
    box: Box,
    span: SpanVariant = DEFAULT_SPAN,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Exact number of walks (or cycles, for CYCLE) in ``box`` belonging to ``tag``."""
    if tag is WalkClass.CYCLE:
        return oracle_count_polygons(box, budget)
    return count_from_tally(walk_tally(box, budget), box, tag, span)


def oracle_count_polygons(box: Box, budget: int = DEFAULT_BUDGET) -> int:
    return sum(polygon_tally(box, budget).values())


def oracle_class_table(L: int, span: SpanVariant = DEFAULT_SPAN, budget: int = DEFAULT_BUDGET) -> CountTable:
    """R, S, M, A counts for the L x L square from a single enumeration."""
    box = Box.square(L)
    tally = walk_tally(box, budget)
    table = CountTable()
    for tag in (
        WalkClass.OPPOSITE_CORNERS,
        WalkClass.OPPOSITE_SIDES,
        WalkClass.SPAN_SQUARE,
        WalkClass.SPAN_UP_TO,
        WalkClass.ANYWHERE,
        WalkClass.EXACT_BBOX,
    ):
        table[(tag, L, L)] = count_from_tally(tally, box, tag, span)
    return table


def oracle_spanning_counts(L: int, span: SpanVariant = DEFAULT_SPAN, budget: int = DEFAULT_BUDGET):
    """Return ([M_0, ..., M_L], Mhat_L) with the convention M_0 = 1."""
    if L > 4:
        raise ResourceLimitError("spanning counts are limited to L <= 4")
    ms = [1]
    for ell in range(1, L + 1):
        ms.append(oracle_count(WalkClass.SPAN_SQUARE, Box.square(ell), span, budget))
    return ms, sum(ms)


def oracle_rect_counts(L: int, budget: int = DEFAULT_BUDGET) -> tuple[dict, dict]:
    """(N, Ahat) for every 0 <= h, l <= L from one enumeration of the L x L square.

    N[h, l] counts walks inside [0, l] x [0, h]; Ahat[h, l] counts walks whose
    bounding box is exactly that rectangle. Keys are (height, length).
    """
    tally = walk_tally(Box.square(L), budget)
    N = {(h, l): 0 for h in range(L + 1) for l in range(L + 1)}
    Ahat = dict(N)
    for (x0, y0, x1, y1, _s, _e), c in tally.items():
        if x0 == 0 and y0 == 0:
            Ahat[(y1, x1)] += c
        for h in range(y1, L + 1):
            for l in range(x1, L + 1):
                N[(h, l)] += c
    return N, Ahat


def iter_walks(box: Box) -> Iterator[Walk]:
    """Every walk (length >= 1) in ``box``, each once, canonically oriented."""
    coords, nbrs = _grid(box)
    n = len(coords)
    visited = [False] * n
    path: list[int] = []

    def dfs(v):
        visited[v] = True
        path.append(v)
        if len(path) > 1 and path[0] < v:
            yield Walk([coords[i] for i in path])
        for u in nbrs[v]:
            if not visited[u]:
                yield from dfs(u)
        path.pop()
        visited[v] = False

    for s in range(n):
        yield from dfs(s)


def iter_polygons(box: Box) -> Iterator[Polygon]:
    coords, nbrs = _grid(box)
    n = len(coords)
    visited = [False] * n
    path: list[int] = []

    def dfs(v, root):
        visited[v] = True
        path.append(v)
        for u in nbrs[v]:
            if u == root and len(path) >= 4 and path[1] < v:
                yield Polygon([coords[i] for i in path])
            elif not visited[u] and u > root:
                yield from dfs(u, root)
        path.pop()
        visited[v] = False

    for r in range(n):
        yield from dfs(r, r)
