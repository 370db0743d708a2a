import pytest
from hypothesis import given, strategies as st

from sawbox.lattice import (
    Box,
    ContainmentError,
    InvalidWalkError,
    Point,
    Polygon,
    SpanVariant,
    Walk,
    WalkClass,
    bounding_box,
    classify,
)


def test_walk_canonical_orientation():
    a = Walk([(1, 0), (0, 0)])
    b = Walk([(0, 0), (1, 0)])
    assert a == b
    assert a.vertices[0] == Point(0, 0)
    assert len({a, b}) == 1


@pytest.mark.parametrize(
    "vs",
    [
        [(0, 0)],
        [(0, 0), (1, 1)],
        [(0, 0), (1, 0), (0, 0)],
        [],
    ],
)
def test_invalid_walks(vs):
    with pytest.raises(InvalidWalkError):
        Walk(vs)


def test_empty_walk_only_on_request():
    w = Walk.empty_at((2, 3))
    assert w.length == 0


def test_polygon_canonical_form():
    p = Polygon([(1, 1), (1, 0), (0, 0), (0, 1)])
    q = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert p == q
    assert p.vertices[:2] == ((0, 0), (0, 1))
    with pytest.raises(InvalidWalkError):
        Polygon([(0, 0), (1, 0), (2, 0)])


def test_box_limits():
    assert Box.square(2).num_vertices == 9
    with pytest.raises(ValueError):
        Box(-1, 2)


def test_bounding_box():
    b, anchor = bounding_box(Walk([(1, 1), (1, 2), (2, 2)]))
    assert (b.width, b.height, anchor) == (1, 1, Point(1, 1))


@pytest.mark.parametrize(
    "vs, tag, expected",
    [
        ([(0, 0), (1, 0), (1, 1)], WalkClass.OPPOSITE_CORNERS, True),
        ([(0, 0), (1, 0)], WalkClass.OPPOSITE_CORNERS, False),
        ([(0, 0), (1, 0)], WalkClass.OPPOSITE_SIDES, True),
        ([(0, 0), (1, 0), (1, 1)], WalkClass.EXACT_BBOX, True),
        ([(0, 0), (1, 0)], WalkClass.EXACT_BBOX, False),
        ([(0, 0), (1, 0)], WalkClass.ANYWHERE, True),
    ],
)
def test_classify_unit_box(vs, tag, expected):
    assert classify(Walk(vs), Box.square(1), tag) is expected


def test_span_variants_differ_on_thin_walks():
    w = Walk([(0, 0), (1, 0)])
    assert classify(w, Box.square(1), WalkClass.SPAN_SQUARE, SpanVariant.MAX_SIDE)
    assert not classify(w, Box.square(1), WalkClass.SPAN_SQUARE, SpanVariant.EXACT)


def test_classify_rejects_outside_walks():
    with pytest.raises(ContainmentError):
        classify(Walk([(1, 0), (2, 0)]), Box.square(1), WalkClass.ANYWHERE)


@given(st.lists(st.sampled_from([(1, 0), (-1, 0), (0, 1), (0, -1)]), min_size=1, max_size=12))
def test_translation_and_reversal_invariance(steps):
    vs = [(0, 0)]
    for dx, dy in steps:
        nxt = (vs[-1][0] + dx, vs[-1][1] + dy)
        if nxt in vs:
            break
        vs.append(nxt)
    if len(vs) < 2:
        return
    w = Walk(vs)
    assert Walk(vs[::-1]) == w
    t = w.translated(5, -3)
    assert bounding_box(t)[0] == bounding_box(w)[0]
    assert t.length == w.length
