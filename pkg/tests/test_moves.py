import pytest

from sawbox import oracle
from sawbox.lattice import Box, Point, Walk, WalkClass, classify
from sawbox.moves import (
    MoveKind,
    NoMove,
    PreconditionError,
    antecedents,
    apply_move,
    extend_spanning_walk,
    push_to_sides,
    select_move,
)
from sawbox.verify import spanning_walks


def test_extension_endpoint_case():
    w = Walk([(0, 0), (1, 0)])
    assert extend_spanning_walk(w, 1) == Walk([(0, 0), (1, 0), (2, 0)])


def test_extension_plaquette_case():
    w = Walk([(1, 0), (0, 0), (0, 1), (1, 1)])
    img = extend_spanning_walk(w, 1)
    assert img == Walk([(2, 0), (1, 0), (0, 0), (0, 1), (1, 1), (2, 1)])


def test_extension_rejects_non_spanning():
    with pytest.raises(PreconditionError):
        extend_spanning_walk(Walk([(0, 0), (1, 0)]), 2)


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_extension_injective(ell):
    ws = spanning_walks(ell)
    imgs = {extend_spanning_walk(w, ell) for w in ws}
    assert len(imgs) == len(ws)
    big = Box.square(ell + 1)
    assert all(classify(v, big, WalkClass.SPAN_SQUARE) for v in imgs)


def test_select_lengthen_and_shorten():
    box = Box.square(2)
    w = Walk([(0, 0), (1, 0)])
    assert select_move(w, Point(1, 0), box) is MoveKind.LENGTHEN
    new, end = apply_move(w, Point(1, 0), box)
    assert new == Walk([(0, 0), (1, 0), (2, 0)]) and end == Point(2, 0)
    # the left end of a walk whose first step goes right
    w = Walk([(0, 1), (1, 1), (1, 0)])
    assert select_move(w, Point(0, 1), box) is MoveKind.SHORTEN


def test_select_backbite_and_end_attack():
    box = Box.square(2)
    # end at (0,1), right site (1,1) has vertical edges up and down
    w = Walk([(0, 1), (0, 2), (1, 2), (1, 1), (1, 0)])
    assert select_move(w, Point(0, 1), box) in (MoveKind.BACKBITE_UP, MoveKind.BACKBITE_DOWN)
    w = Walk([(0, 1), (0, 2), (1, 2), (1, 1), (2, 1)])
    assert select_move(w, Point(0, 1), box) is MoveKind.END_ATTACK


def test_no_move_on_boundary():
    with pytest.raises(NoMove):
        select_move(Walk([(0, 0), (1, 0)]), Point(1, 0), Box.square(1))


def test_wrong_move_kind():
    with pytest.raises(PreconditionError):
        apply_move(Walk([(0, 0), (1, 0)]), Point(1, 0), Box.square(2), MoveKind.SHORTEN)


def test_shorten_inverts_lengthen():
    box = Box.square(3)
    w = Walk([(1, 1), (1, 2), (2, 2)])
    longer, end = apply_move(w, Point(2, 2), box, MoveKind.LENGTHEN)
    assert w in antecedents(longer, end, box)


@pytest.mark.parametrize("L", [1, 2])
def test_every_move_output_is_valid(L):
    box = Box.square(L)
    for w in oracle.iter_walks(box):
        for e in set(w.endpoints):
            try:
                new, end = apply_move(w, e, box)
            except NoMove:
                continue
            except PreconditionError:
                continue
            assert all(box.contains(p) for p in new.vertices)
            assert end.x - e.x in (1, 2)


def test_push_fixed_point():
    box = Box.square(2)
    w = Walk([(0, 0), (1, 0), (2, 0)])
    out, trace = push_to_sides(w, box)
    assert out == w and len(trace) == 0


@pytest.mark.parametrize("L", [1, 2, 3])
def test_push_lands_in_opposite_sides(L):
    box = Box.square(L)
    kinds = set()

    def check(path):
        Walk(path)  # raises on an invalid intermediate walk
        assert all(box.contains(p) for p in path)

    for w in spanning_walks(L):
        out, trace = push_to_sides(w, box, check=check)
        assert classify(out, box, WalkClass.OPPOSITE_SIDES)
        assert len(trace) <= L
        kinds |= {k for k, _, _ in trace.steps}
    if L == 3:
        assert kinds == set(MoveKind)


@pytest.mark.parametrize("L, largest", [(2, 2), (3, 3)])
def test_antecedent_sets(L, largest):
    box = Box.square(L)
    worst = max(len(antecedents(w, e, box)) for w in oracle.iter_walks(box) for e in set(w.endpoints))
    assert worst == largest
