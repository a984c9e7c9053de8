"""Thurston height functions on tilings, boundary heights, and face heights."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from . import errors
from .lattice import (
    TemperleyanPolyomino,
    _SIDES,
    _host_corners,
    is_black,
    is_white,
    left_square,
    right_square,
)


class Tiling:
    """Perfect matching of a host's interior dual graph, stored as
    (white square, black square) pairs."""

    def __init__(self, host, dominoes):
        self.host = host
        norm = []
        for a, b in dominoes:
            a, b = tuple(a), tuple(b)
            if is_white(a):
                norm.append((a, b))
            else:
                norm.append((b, a))
        self.dominoes = frozenset(norm)
        self._validate()

    def _validate(self):
        squares = self.host.squares
        covered = set()
        for w, b in self.dominoes:
            if not (is_white(w) and is_black(b)):
                raise ValueError(f"domino {(w, b)} is not a white/black pair")
            if abs(w[0] - b[0]) + abs(w[1] - b[1]) != 1:
                raise ValueError(f"domino {(w, b)} squares are not adjacent")
            if w not in squares or b not in squares:
                raise ValueError(f"domino {(w, b)} leaves the host")
            covered.update((w, b))
        if len(covered) != 2 * len(self.dominoes) or covered != squares:
            raise ValueError("dominoes do not form a perfect matching of the host")

    @cached_property
    def partner(self):
        out = {}
        for w, b in self.dominoes:
            out[w] = b
            out[b] = w
        return out

    def crosses(self, corner, d):
        """True if the lattice edge from `corner` in direction `d` is crossed
        by a domino."""
        lsq = left_square(corner, d)
        rsq = right_square(corner, d)
        return self.partner.get(lsq) == rsq


@dataclass(frozen=True)
class HeightField:
    values: dict
    base_vertex: tuple
    base_value: int

    def __getitem__(self, v):
        return self.values[tuple(v)]


def edge_increment(tiling, corner, d):
    """Height change along the edge corner -> corner + d: +1 with a black
    square on the left, -1 with white; -3/+3 instead across a domino."""
    inc = 1 if is_black(left_square(corner, d)) else -1
    if tiling is not None and tiling.crosses(corner, d):
        inc = -3 * inc
    return inc


def canonical_gauge(tp: TemperleyanPolyomino):
    """Base vertex and value making the boundary heights just after the d0
    notch (counterclockwise) alternate between 0 and 1."""
    loop = tp.boundary_loops[0]
    d0 = tp.d0
    notch = {
        (d0[0], d0[1]),
        (d0[0] + 1, d0[1]),
        (d0[0], d0[1] + 1),
        (d0[0] + 1, d0[1] + 1),
    }
    n = len(loop)
    in_notch = [v in notch for v in loop]
    if not any(in_notch):
        raise errors.BadRemovalClass("d0 corners not found on the outer boundary")
    # last index of the (cyclic) run of notch corners
    exit_idx = None
    for i in range(n):
        if in_notch[i] and not in_notch[(i + 1) % n]:
            exit_idx = i
            break
    v_exit = loop[exit_idx]
    v_next = loop[(exit_idx + 1) % n]
    d = (v_next[0] - v_exit[0], v_next[1] - v_exit[1])
    step = 1 if is_black(left_square(v_exit, d)) else -1
    return v_exit, (0 if step > 0 else 1)


def boundary_heights(tp, base=None, base_value=None):
    """Tiling-independent heights on all boundary vertices.

    The outer component is anchored at `base`; every other component carries
    its own free integer and is anchored at its first traversal vertex = 0.
    """
    host = tp.region if isinstance(tp, TemperleyanPolyomino) else tp
    if base is None:
        base, base_value = canonical_gauge(tp)
    base = tuple(base)
    out = {}
    for li, loop in enumerate(host.boundary_loops):
        n = len(loop)
        rel = [0] * n
        for i in range(n - 1):
            c, c2 = loop[i], loop[i + 1]
            d = (c2[0] - c[0], c2[1] - c[1])
            rel[i + 1] = rel[i] + (1 if is_black(left_square(c, d)) else -1)
        # closure: each component encloses balanced colors
        c, c2 = loop[-1], loop[0]
        d = (c2[0] - c[0], c2[1] - c[1])
        closure = rel[-1] + (1 if is_black(left_square(c, d)) else -1)
        if closure != 0:
            raise ValueError(f"boundary loop {li} does not close (net {closure})")
        if li == 0:
            if base not in loop:
                raise ValueError("base vertex must lie on the outer boundary")
            shift = base_value - rel[loop.index(base)]
        else:
            shift = 0
        for v, r in zip(loop, rel):
            out[v] = r + shift
    return out


def height_field(t: Tiling, base=None, base_value=None) -> HeightField:
    """Heights on every vertex of the host, from the edge rules."""
    host = t.host.region if isinstance(t.host, TemperleyanPolyomino) else t.host
    if base is None:
        if isinstance(t.host, TemperleyanPolyomino):
            base, base_value = canonical_gauge(t.host)
        else:
            base, base_value = host.boundary_loops[0][0], 0
    base = tuple(base)
    squares = host.squares
    corners = _host_corners(squares)
    if base not in corners:
        raise ValueError(f"base {base} is not a vertex of the host")
    values = {base: int(base_value)}
    queue = deque([base])
    while queue:
        c = queue.popleft()
        for d in _SIDES:
            c2 = (c[0] + d[0], c[1] + d[1])
            if c2 in values or c2 not in corners:
                continue
            if left_square(c, d) not in squares and right_square(c, d) not in squares:
                continue
            values[c2] = values[c] + edge_increment(t, c, d)
            queue.append(c2)
    if len(values) != len(corners):
        raise errors.DisconnectedHost(
            f"{len(corners) - len(values)} vertices unreachable from base"
        )
    return HeightField(values, base, int(base_value))


def height_change_along_path(h: HeightField, path) -> int:
    """h(end) - h(start) along a lattice path inside the host."""
    path = [tuple(v) for v in path]
    for v, v2 in zip(path, path[1:]):
        d = (v2[0] - v[0], v2[1] - v[1])
        if d not in _SIDES or v not in h.values or v2 not in h.values:
            raise errors.PathLeavesHost(f"step {v} -> {v2}")
    return h.values[path[-1]] - h.values[path[0]]


def face_height_field(t: Tiling):
    """Heights on the faces of the interior dual graph (interior vertices)."""
    host = t.host.region if isinstance(t.host, TemperleyanPolyomino) else t.host
    squares = host.squares
    hf = height_field(t)
    faces = {}
    for c, v in hf.values.items():
        quad = [(c[0] - 1, c[1] - 1), (c[0], c[1] - 1), (c[0] - 1, c[1]), (c[0], c[1])]
        if all(q in squares for q in quad):
            faces[c] = v
    return faces
