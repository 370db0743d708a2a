import pytest

from sawbox import oracle
from sawbox.lattice import Box, SpanVariant, WalkClass


@pytest.mark.parametrize(
    "tag, box, expected",
    [
        (WalkClass.ANYWHERE, Box(1, 1), 12),
        (WalkClass.ANYWHERE, Box(2, 2), 322),
        (WalkClass.EXACT_BBOX, Box(1, 1), 8),
        (WalkClass.OPPOSITE_CORNERS, Box(1, 1), 2),
        (WalkClass.EXACT_BBOX, Box(3, 0), 1),
        (WalkClass.EXACT_BBOX, Box(0, 3), 1),
        (WalkClass.OPPOSITE_CORNERS, Box(2, 2), 12),
        (WalkClass.OPPOSITE_CORNERS, Box(3, 3), 184),
    ],
)
def test_known_counts(tag, box, expected):
    assert oracle.oracle_count(tag, box) == expected


@pytest.mark.parametrize("box, expected", [(Box(1, 1), 1), (Box(2, 2), 13), (Box(3, 3), 213), (Box(0, 4), 0), (Box(2, 1), 3)])
def test_polygon_counts(box, expected):
    assert oracle.oracle_count_polygons(box) == expected


def test_iterators_agree_with_tallies():
    box = Box(2, 1)
    walks = list(oracle.iter_walks(box))
    assert len(walks) == len(set(walks)) == oracle.oracle_count(WalkClass.ANYWHERE, box)
    polys = list(oracle.iter_polygons(Box(2, 2)))
    assert len(polys) == len(set(polys)) == 13


def test_spanning_counts_convention():
    ms, mhat = oracle.oracle_spanning_counts(0)
    assert (ms, mhat) == ([1], 1)
    ms, mhat = oracle.oracle_spanning_counts(2)
    assert ms[0] == 1 and mhat == sum(ms)
    assert ms[1] == oracle.oracle_count(WalkClass.SPAN_SQUARE, Box.square(1))
    with pytest.raises(oracle.ResourceLimitError):
        oracle.oracle_spanning_counts(5)


def test_exact_bbox_table_is_symmetric():
    _, A = oracle.oracle_rect_counts(3)
    for (h, l), v in A.items():
        assert A[(l, h)] == v


def test_budget_guard():
    with pytest.raises(oracle.ResourceLimitError):
        oracle.oracle_count(WalkClass.ANYWHERE, Box.square(3), budget=1000)


def test_determinism():
    assert oracle.oracle_class_table(2) == oracle.oracle_class_table(2)


@pytest.mark.parametrize("L", [1, 2, 3])
@pytest.mark.parametrize("span", list(SpanVariant))
def test_translation_bound_and_monotonicity(L, span):
    t = oracle.oracle_class_table(L, span)
    ms, mhat = oracle.oracle_spanning_counts(L, span)
    A = t[(WalkClass.ANYWHERE, L, L)]
    assert A <= (L + 1) ** 2 * mhat
    assert all(ms[k] <= ms[L] for k in range(1, L))
    assert ms[L] < mhat < (L + 1) * ms[L]


@pytest.mark.parametrize("L", [2, 3])
@pytest.mark.parametrize("span", list(SpanVariant))
def test_inequality_chain_beyond_unit_box(L, span):
    t = oracle.oracle_class_table(L, span)
    _, mhat = oracle.oracle_spanning_counts(L, span)
    R, S, M, A = (t[(tag, L, L)] for tag in (WalkClass.OPPOSITE_CORNERS, WalkClass.OPPOSITE_SIDES, WalkClass.SPAN_SQUARE, WalkClass.ANYWHERE))
    assert R <= S <= M <= mhat <= A


def test_unit_box_chain_breaks_on_convention():
    # with M_0 = 1 counted and A_1 excluding the zero-step walk, Mhat_1 = 13 > A_1 = 12
    _, mhat = oracle.oracle_spanning_counts(1, SpanVariant.MAX_SIDE)
    assert mhat == 13 and oracle.oracle_count(WalkClass.ANYWHERE, Box.square(1)) == 12


def test_decomposition_into_exact_boxes():
    N, A = oracle.oracle_rect_counts(3)
    for L in range(4):
        total = sum((L - l + 1) * (L - h + 1) * A[(h, l)] for h in range(L + 1) for l in range(L + 1))
        assert total == N[(L, L)]
