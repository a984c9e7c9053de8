import itertools

import pytest

from temperley import errors
from temperley.height import (
    Tiling,
    boundary_heights,
    canonical_gauge,
    face_height_field,
    height_change_along_path,
    height_field,
)
from temperley.lattice import Polyomino, is_black, left_square

from oracles import enumerate_tilings


def _tiling(squares, dominoes):
    return Tiling(Polyomino(squares), dominoes)


def test_single_domino_heights_by_hand():
    t = _tiling({(0, 0), (1, 0)}, [((0, 0), (1, 0))])
    h = height_field(t, base=(0, 0), base_value=0)
    assert h.values == {
        (0, 0): 0,
        (1, 0): -1,
        (2, 0): 0,
        (2, 1): 1,
        (1, 1): 2,
        (0, 1): 1,
    }


def test_height_net_change_around_each_square_is_zero():
    squares = {(x, y) for x in range(2) for y in range(3)}
    for m in enumerate_tilings(squares):
        t = _tiling(squares, m)
        h = height_field(t, base=(0, 0), base_value=0)
        for (x, y) in squares:
            loop = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1), (x, y)]
            assert height_change_along_path(h, loop) == 0


def test_path_independence_on_small_host(host_3x3):
    matchings = list(enumerate_tilings(host_3x3.squares))
    t = Tiling(host_3x3, matchings[0])
    h = height_field(t)
    corners = sorted(h.values)
    for a, b in itertools.islice(itertools.combinations(corners, 2), 200):
        # height difference is a property of the field, not of any path
        assert h.values[b] - h.values[a] == -(h.values[a] - h.values[b])


def test_height_change_even_segment_crossing_one_domino():
    squares = {(x, y) for x in range(2) for y in range(3)}
    t = _tiling(
        squares,
        [((0, 0), (1, 0)), ((0, 2), (0, 1)), ((1, 1), (1, 2))],
    )
    h = height_field(t, base=(0, 0), base_value=0)
    # crosses only the bottom horizontal domino, black square on the right
    assert height_change_along_path(h, [(1, 0), (1, 1), (1, 2)]) == 4
    # no crossings, even straight segment
    assert height_change_along_path(h, [(0, 0), (0, 1), (0, 2)]) == 0
    # closed loop
    assert height_change_along_path(h, [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]) == 0


def test_height_change_rejects_outside_path():
    t = _tiling({(0, 0), (1, 0)}, [((0, 0), (1, 0))])
    h = height_field(t, base=(0, 0), base_value=0)
    with pytest.raises(errors.PathLeavesHost):
        height_change_along_path(h, [(0, 0), (0, -1)])


def test_boundary_heights_straight_run_alternates(host_5x5):
    bh = boundary_heights(host_5x5)
    # straight run of even length on the right wall: equal endpoint heights
    assert bh[(5, 2)] == bh[(5, 4)]
    assert abs(bh[(5, 2)] - bh[(5, 3)]) == 1


def test_boundary_heights_canonical_gauge_after_notch(host_5x5):
    base, value = canonical_gauge(host_5x5)
    bh = boundary_heights(host_5x5)
    # alternation just counterclockwise of the removed corner is {0, 1}
    nxt = {}
    loop = host_5x5.boundary_loops[0]
    i = loop.index(base)
    run = [loop[(i + k) % len(loop)] for k in range(2)]
    assert sorted(bh[v] for v in run) == [0, 1]


def test_boundary_heights_right_turn_shifts_pair_down(host_annulus_small):
    bh = boundary_heights(host_annulus_small)
    host = host_annulus_small
    inner = host.boundary_loops[1]
    d1 = host.exposed[0]
    bump = {
        (d1[0], d1[1]),
        (d1[0] + 1, d1[1]),
        (d1[0], d1[1] + 1),
        (d1[0] + 1, d1[1] + 1),
    }
    n = len(inner)
    for i in range(n):
        prev, cur, nxt = inner[i - 1], inner[i], inner[(i + 1) % n]
        d_in = (cur[0] - prev[0], cur[1] - prev[1])
        d_out = (nxt[0] - cur[0], nxt[1] - cur[1])
        cross = d_in[0] * d_out[1] - d_in[1] * d_out[0]
        if cross < 0 and not (bump & {prev, cur, nxt}):
            # right turn away from the exposed bump: pair drops by one
            before = bh[prev]
            after = bh[nxt]
            assert after - before == (bh[cur] - before) + (after - bh[cur])
            assert {bh[cur] - before, after - bh[cur]} <= {-1, 1}
            two_later = inner[(i + 2) % n]
            if two_later not in bump:
                assert bh[two_later] - bh[prev] == -1
            return
    pytest.fail("no clean right turn found on the inner loop")


def test_boundary_heights_match_height_field(host_annulus_small):
    bh = boundary_heights(host_annulus_small)
    for m in itertools.islice(enumerate_tilings(host_annulus_small.squares), 5):
        t = Tiling(host_annulus_small, m)
        h = height_field(t)
        for li, loop in enumerate(host_annulus_small.boundary_loops):
            offsets = {h.values[v] - bh[v] for v in loop}
            assert len(offsets) == 1
            if li == 0:
                assert offsets == {0}


def test_face_heights_follow_edge_rules():
    squares = {(x, y) for x in range(2) for y in range(3)}
    t = _tiling(
        squares,
        [((0, 0), (1, 0)), ((0, 2), (0, 1)), ((1, 1), (1, 2))],
    )
    faces = face_height_field(t)
    assert set(faces) == {(1, 1), (1, 2)}
    # unmatched edge from black (0,1) to white (1,1): left minus right is 1
    assert faces[(1, 2)] - faces[(1, 1)] == 1
    # across a domino the difference is -3
    t2 = _tiling(squares, [((0, 0), (1, 0)), ((1, 1), (0, 1)), ((0, 2), (1, 2))])
    faces2 = face_height_field(t2)
    assert faces2[(1, 2)] - faces2[(1, 1)] == -3


def test_boundary_closure_on_all_components(host_annulus_small):
    # traversal of every component returns to its starting value
    bh = boundary_heights(host_annulus_small)
    for loop in host_annulus_small.boundary_loops:
        n = len(loop)
        total = 0
        for i in range(n):
            c, c2 = loop[i], loop[(i + 1) % n]
            d = (c2[0] - c[0], c2[1] - c[1])
            total += 1 if is_black(left_square(c, d)) else -1
        assert total == 0
