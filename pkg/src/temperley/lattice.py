"""Polyominoes on the unit checkerboard, Temperleyan hosts, and derived site graphs.

Squares are unit lattice squares identified by their integer center (x, y);
the square at the origin is white.  Tiling vertices (square corners) also get
integer coordinates: corner (a, b) is the lower-left corner of square (a, b),
i.e. the geometric point (a - 1/2, b - 1/2).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from . import errors


class SquareClass(Enum):
    W0 = "W0"
    W1 = "W1"
    B0 = "B0"
    B1 = "B1"


def classify_square(x: int, y: int) -> SquareClass:
    """Class of the unit square centered at (x, y), by coordinate parity."""
    if x % 2 == 0:
        return SquareClass.W0 if y % 2 == 0 else SquareClass.B1
    return SquareClass.B0 if y % 2 == 0 else SquareClass.W1


def is_white(pos) -> bool:
    return (pos[0] + pos[1]) % 2 == 0


def is_black(pos) -> bool:
    return (pos[0] + pos[1]) % 2 == 1


# Directed lattice edge from corner c to corner c+d; the square on its left.
_LEFT_OFFSET = {(1, 0): (0, 0), (-1, 0): (-1, -1), (0, 1): (-1, 0), (0, -1): (0, -1)}


def left_square(c, d):
    ox, oy = _LEFT_OFFSET[d]
    return (c[0] + ox, c[1] + oy)


def right_square(c, d):
    return left_square((c[0] + d[0], c[1] + d[1]), (-d[0], -d[1]))


_SIDES = ((1, 0), (-1, 0), (0, 1), (0, -1))


class Polyomino:
    """Finite union of unit squares bounded by disjoint simple closed lattice paths.

    `boundary_loops` are directed corner sequences with the interior on the
    left: the outer loop (index 0) runs counterclockwise, holes clockwise.
    """

    def __init__(self, squares, lattice_spacing: float = 1.0, origin=(0.0, 0.0)):
        self.squares = frozenset(tuple(s) for s in squares)
        if not self.squares:
            raise ValueError("empty polyomino")
        self.lattice_spacing = float(lattice_spacing)
        self.origin = (float(origin[0]), float(origin[1]))
        self._validate_connected()
        self._validate_no_pinch()

    def _validate_connected(self):
        start = next(iter(self.squares))
        seen = {start}
        queue = deque([start])
        while queue:
            x, y = queue.popleft()
            for dx, dy in _SIDES:
                nb = (x + dx, y + dy)
                if nb in self.squares and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        if len(seen) != len(self.squares):
            raise errors.DisconnectedHost(
                f"{len(self.squares) - len(seen)} squares unreachable"
            )

    def _validate_no_pinch(self):
        # A corner where exactly two diagonal squares meet makes the boundary
        # non-simple.
        corners = set()
        for (x, y) in self.squares:
            corners.update([(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
        for (a, b) in corners:
            quad = [(a - 1, b - 1), (a, b - 1), (a - 1, b), (a, b)]
            inside = [q in self.squares for q in quad]
            if sum(inside) == 2 and inside[0] == inside[3]:
                raise ValueError(f"pinched boundary at corner {(a, b)}")

    @cached_property
    def boundary_loops(self):
        # Directed boundary edges, interior on the left.
        nxt = {}
        for (x, y) in self.squares:
            if (x, y - 1) not in self.squares:
                nxt[(x, y)] = (1, 0)
            if (x + 1, y) not in self.squares:
                nxt[(x + 1, y)] = (0, 1)
            if (x, y + 1) not in self.squares:
                nxt[(x + 1, y + 1)] = (-1, 0)
            if (x - 1, y) not in self.squares:
                nxt[(x, y + 1)] = (0, -1)
        loops = []
        seen = set()
        for start in sorted(nxt):
            if start in seen:
                continue
            loop = []
            c = start
            while True:
                loop.append(c)
                seen.add(c)
                d = nxt[c]
                c = (c[0] + d[0], c[1] + d[1])
                if c == start:
                    break
            loops.append(loop)
        # signed area > 0 <=> counterclockwise <=> outer loop
        def area(loop):
            s = 0
            for i, (x, y) in enumerate(loop):
                x2, y2 = loop[(i + 1) % len(loop)]
                s += x * y2 - x2 * y
            return s / 2.0

        outer = [i for i, lp in enumerate(loops) if area(lp) > 0]
        if len(outer) != 1:
            raise ValueError("boundary tracing found no unique outer loop")
        loops.insert(0, loops.pop(outer[0]))
        return loops

    @cached_property
    def black_count(self):
        return sum(1 for s in self.squares if is_black(s))

    @cached_property
    def white_count(self):
        return len(self.squares) - self.black_count

    def corners(self, loop_index: int):
        """Corner points of one boundary loop: (corner, turn, corner_square).

        turn is +1 for a left turn (convex corner of the region) and -1 for a
        right turn (concave corner).
        """
        loop = self.boundary_loops[loop_index]
        n = len(loop)
        out = []
        for i in range(n):
            prev, cur, nxt = loop[i - 1], loop[i], loop[(i + 1) % n]
            d_in = (cur[0] - prev[0], cur[1] - prev[1])
            d_out = (nxt[0] - cur[0], nxt[1] - cur[1])
            if d_in == d_out:
                continue
            cross = d_in[0] * d_out[1] - d_in[1] * d_out[0]
            if cross > 0:  # left turn: corner square is on the left of both edges
                sq = left_square(cur, d_out)
            else:  # right turn: diagonal of the shared right-hand square
                miss = right_square(cur, d_out)
                sq = (2 * cur[0] - 1 - miss[0], 2 * cur[1] - 1 - miss[1])
            out.append((cur, 1 if cross > 0 else -1, sq))
        return out

    def to_continuum(self, lattice_point):
        """Map a lattice square center to continuum coordinates."""
        return (
            self.origin[0] + self.lattice_spacing * lattice_point[0],
            self.origin[1] + self.lattice_spacing * lattice_point[1],
        )


def validate_even(p: Polyomino) -> bool:
    """True iff every boundary corner square of p has class B1."""
    for li in range(len(p.boundary_loops)):
        for _, _, sq in p.corners(li):
            if classify_square(*sq) is not SquareClass.B1:
                return False
    return True


class TemperleyanPolyomino:
    """Even polyomino with one B1 square removed (d0) and one exposed B0
    square added per hole."""

    def __init__(self, base: Polyomino, d0, exposed, marked_flat_radius=0.0):
        self.base = base
        self.d0 = tuple(d0)
        self.exposed = tuple(tuple(s) for s in exposed)
        self.marked_flat_radius = float(marked_flat_radius)
        squares = set(base.squares)
        squares.discard(self.d0)
        squares.update(self.exposed)
        self.region = Polyomino(
            squares, lattice_spacing=base.lattice_spacing, origin=base.origin
        )

    @property
    def squares(self):
        return self.region.squares

    @property
    def lattice_spacing(self):
        return self.region.lattice_spacing

    @property
    def boundary_loops(self):
        return self.region.boundary_loops

    @cached_property
    def black_count(self):
        return self.region.black_count

    @cached_property
    def white_count(self):
        return self.region.white_count

    @cached_property
    def interior_dual(self) -> "SiteGraph":
        return interior_dual(self)

    @cached_property
    def b0_prime(self) -> "SiteGraph":
        return b0_prime_graph(self)

    @cached_property
    def exposed_loop(self):
        """Map exposed square -> index of the hole loop it sits on."""
        edge_loop = _boundary_edge_loops(self.region)
        out = {}
        for d in self.exposed:
            loops = set()
            for dx, dy in _SIDES:
                nb = (d[0] + dx, d[1] + dy)
                if nb not in self.squares and (d, nb) in edge_loop:
                    loops.add(edge_loop[(d, nb)])
            if len(loops) != 1:
                raise errors.BadExposedPlacement(f"exposed {d} touches loops {loops}")
            out[d] = loops.pop()
        return out


def _boundary_edge_loops(p: Polyomino):
    """Map (inside_square, outside_square) -> boundary loop index."""
    out = {}
    for li, loop in enumerate(p.boundary_loops):
        n = len(loop)
        for i in range(n):
            c, c2 = loop[i], loop[(i + 1) % n]
            d = (c2[0] - c[0], c2[1] - c[1])
            out[(left_square(c, d), right_square(c, d))] = li
    return out


def make_temperleyan(p: Polyomino, d0, inner_sites, marked_flat_radius=0.0) -> TemperleyanPolyomino:
    """Remove a boundary B1 square and expose one B0 square per hole."""
    if not validate_even(p):
        raise errors.NotEven("corner squares are not all of class B1")
    d0 = tuple(d0)
    if d0 not in p.squares or classify_square(*d0) is not SquareClass.B1:
        raise errors.BadRemovalClass(f"d0 {d0} must be a B1 square of the host")
    edge_loop = _boundary_edge_loops(p)
    if not any(
        (d0, (d0[0] + dx, d0[1] + dy)) in edge_loop
        and edge_loop[(d0, (d0[0] + dx, d0[1] + dy))] == 0
        for dx, dy in _SIDES
    ):
        raise errors.BadRemovalClass(f"d0 {d0} is not adjacent to the outer boundary")
    n_holes = len(p.boundary_loops) - 1
    inner_sites = [tuple(s) for s in inner_sites]
    if len(inner_sites) != n_holes:
        raise errors.BadExposedPlacement(
            f"need one exposed square per hole ({n_holes}), got {len(inner_sites)}"
        )
    hole_seen = set()
    for s in inner_sites:
        if classify_square(*s) is not SquareClass.B0:
            raise errors.BadExposedPlacement(f"exposed {s} must be in B0")
        if s in p.squares:
            raise errors.BadExposedPlacement(f"exposed {s} lies inside the host")
        touching = [
            (s[0] + dx, s[1] + dy)
            for dx, dy in _SIDES
            if (s[0] + dx, s[1] + dy) in p.squares
        ]
        if len(touching) != 1:
            raise errors.BadExposedPlacement(
                f"exposed {s} borders {len(touching)} squares, need exactly 1"
            )
        li = edge_loop.get((touching[0], s))
        if li is None or li == 0:
            raise errors.BadExposedPlacement(f"exposed {s} is not on a hole boundary")
        if li in hole_seen:
            raise errors.BadExposedPlacement(f"hole {li} has two exposed squares")
        hole_seen.add(li)
    tp = TemperleyanPolyomino(p, d0, inner_sites, marked_flat_radius=marked_flat_radius)
    if tp.black_count != tp.white_count:
        raise errors.UnbalancedColors(
            f"{tp.black_count} black vs {tp.white_count} white"
        )
    return tp


class SiteGraph:
    """Graph on lattice sites: either the interior dual M of a host, or the
    B0' graph whose boundary is the layer Y plus the exposed set V."""

    def __init__(self, positions, edges, boundary_set=(), exposed_set=(), kind="",
                 boundary_loop=None, host=None):
        self.positions = [tuple(p) for p in positions]
        self.index = {p: i for i, p in enumerate(self.positions)}
        self.edges = [tuple(e) for e in edges]
        self.boundary_set = frozenset(boundary_set)
        self.exposed_set = frozenset(exposed_set)
        self.kind = kind
        self.boundary_loop = dict(boundary_loop or {})
        self.host = host

    def __len__(self):
        return len(self.positions)

    @cached_property
    def classes(self):
        return np.array(
            [
                {"W0": 0, "W1": 1, "B0": 2, "B1": 3}[classify_square(*p).value]
                for p in self.positions
            ],
            dtype=np.int8,
        )

    @cached_property
    def csr(self):
        """(indptr, indices) adjacency in compressed sparse row form."""
        n = len(self.positions)
        deg = np.zeros(n, dtype=np.int64)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.zeros(indptr[-1], dtype=np.int64)
        fill = indptr[:-1].copy()
        for a, b in self.edges:
            indices[fill[a]] = b
            fill[a] += 1
            indices[fill[b]] = a
            fill[b] += 1
        return indptr, indices

    def neighbors(self, i):
        indptr, indices = self.csr
        return indices[indptr[i]:indptr[i + 1]]


def interior_dual(tp) -> SiteGraph:
    """Vertices are the host's squares; edges join squares at distance 1."""
    squares = sorted(tp.squares) if hasattr(tp, "squares") else sorted(tp)
    index = {s: i for i, s in enumerate(squares)}
    edges = []
    for s in squares:
        for d in ((1, 0), (0, 1)):
            nb = (s[0] + d[0], s[1] + d[1])
            if nb in index:
                edges.append((index[s], index[nb]))
    exposed = [index[e] for e in getattr(tp, "exposed", ())]
    return SiteGraph(squares, edges, exposed_set=exposed, kind="interior_dual",
                     host=tp)


def b0_prime_graph(tp: TemperleyanPolyomino) -> SiteGraph:
    """B0 squares of the host plus the outside layer Y, joined across whites of M."""
    squares = tp.squares
    b0_in = sorted(s for s in squares if classify_square(*s) is SquareClass.B0)
    whites = [s for s in squares if is_white(s)]
    verts = list(b0_in)
    index = {p: i for i, p in enumerate(verts)}
    y_adjacent_white = {}
    edges = []
    for w in whites:
        if classify_square(*w) is SquareClass.W0:
            a = (w[0] - 1, w[1])
            b = (w[0] + 1, w[1])
        else:
            a = (w[0], w[1] - 1)
            b = (w[0], w[1] + 1)
        for p in (a, b):
            if p not in index:
                index[p] = len(verts)
                verts.append(p)
            if p not in squares:
                y_adjacent_white.setdefault(p, []).append(w)
        edges.append((index[a], index[b]))
    y_set = {index[p] for p in verts if p not in squares}
    exposed = {index[d] for d in tp.exposed}
    # attach each Y vertex (and each exposed vertex) to its boundary loop
    edge_loop = _boundary_edge_loops(tp.region)
    loop_of = {}
    for p, ws in y_adjacent_white.items():
        loops = {edge_loop[(w, p)] for w in ws if (w, p) in edge_loop}
        if len(loops) != 1:
            raise ValueError(f"Y vertex {p} touches boundary loops {loops}")
        loop_of[index[p]] = loops.pop()
    for d, li in tp.exposed_loop.items():
        loop_of[index[d]] = li
    return SiteGraph(
        verts,
        edges,
        boundary_set=y_set | exposed,
        exposed_set=exposed,
        kind="b0_prime",
        boundary_loop=loop_of,
        host=tp,
    )


def fournier_check(tp) -> bool:
    """Tilability screen on boundary heights.

    Along an edge with a black square on its left the height rises by at most
    one, so in any tiling h(y) - h(x) <= d+(x, y), the length of the shortest
    black-on-left directed path.  Returns False when some boundary pair
    violates this (untilable: excessive winding for the available distance).
    """
    from .height import boundary_heights, canonical_gauge

    host = tp.region if isinstance(tp, TemperleyanPolyomino) else tp
    squares = host.squares
    base, value = canonical_gauge(tp) if isinstance(tp, TemperleyanPolyomino) else (
        host.boundary_loops[0][0], 0)
    bh = boundary_heights(tp, base, value)
    corners = _host_corners(squares)
    adj = {}
    for c in corners:
        nbrs = []
        for d in _SIDES:
            c2 = (c[0] + d[0], c[1] + d[1])
            if c2 not in corners:
                continue
            if left_square(c, d) not in squares and right_square(c, d) not in squares:
                continue
            if is_black(left_square(c, d)):
                nbrs.append(c2)
        adj[c] = nbrs
    bverts = sorted(bh)
    for src in bverts:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            c = queue.popleft()
            for c2 in adj[c]:
                if c2 not in dist:
                    dist[c2] = dist[c] + 1
                    queue.append(c2)
        for v in bverts:
            if bh[v] - bh[src] > dist.get(v, math.inf):
                return False
    return True


def _host_corners(squares):
    corners = set()
    for (x, y) in squares:
        corners.update([(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
    return corners


# ---------------------------------------------------------------------------
# Continuous region specifications and their discretization.

@dataclass(frozen=True)
class Polyline:
    """Closed piecewise-linear curve, vertices in traversal order."""

    points: tuple

    def contains(self, p):
        x, y = p
        inside = False
        pts = self.points
        n = len(pts)
        for i in range(n):
            (x1, y1), (x2, y2) = pts[i], pts[(i + 1) % n]
            if (y1 > y) != (y2 > y):
                xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
                if xi > x:
                    inside = not inside
        return inside

    def nearest(self, p):
        """(distance, point, unit tangent) of the closest boundary point."""
        best = None
        pts = self.points
        n = len(pts)
        for i in range(n):
            a, b = np.array(pts[i], float), np.array(pts[(i + 1) % n], float)
            ab = b - a
            t = np.clip(np.dot(np.array(p) - a, ab) / max(np.dot(ab, ab), 1e-300), 0, 1)
            q = a + t * ab
            d = math.hypot(p[0] - q[0], p[1] - q[1])
            if best is None or d < best[0]:
                tan = ab / max(np.linalg.norm(ab), 1e-300)
                best = (d, tuple(q), tuple(tan))
        return best


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float

    def contains(self, p):
        return math.hypot(p[0] - self.center[0], p[1] - self.center[1]) < self.radius

    def nearest(self, p):
        dx, dy = p[0] - self.center[0], p[1] - self.center[1]
        r = math.hypot(dx, dy)
        if r < 1e-12:
            return (self.radius, (self.center[0] + self.radius, self.center[1]), (0.0, 1.0))
        q = (self.center[0] + dx / r * self.radius, self.center[1] + dy / r * self.radius)
        # counterclockwise tangent
        tan = (-dy / r, dx / r)
        return (abs(r - self.radius), q, tan)


@dataclass(frozen=True)
class RegionSpec:
    """Continuum region: boundary curves (outer first), one marked point per
    component, and named probe points."""

    boundary_components: tuple
    marked_points: tuple
    probe_points: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.marked_points) != len(self.boundary_components):
            raise errors.RegionParse("need one marked point per boundary component")

    def contains(self, p):
        if not self.boundary_components[0].contains(p):
            return False
        return all(not c.contains(p) for c in self.boundary_components[1:])


def rectangle_region(width=1.0, height=1.0, d0=None, probe_points=None) -> RegionSpec:
    """Axis-aligned rectangle [0,width] x [0,height]; d0 defaults to bottom center."""
    pts = ((0.0, 0.0), (width, 0.0), (width, height), (0.0, height))
    if d0 is None:
        d0 = (width / 2.0, 0.0)
    return RegionSpec((Polyline(pts),), (tuple(d0),), dict(probe_points or {}))


def annulus_region(outer=1.0, inner=0.4, d0=None, d1=None) -> RegionSpec:
    """Square annulus: outer square [0,s]^2 with centered square hole."""
    s, h = float(outer), float(inner)
    m = (s - h) / 2.0
    out = Polyline(((0.0, 0.0), (s, 0.0), (s, s), (0.0, s)))
    hole = Polyline(((m, m), (m + h, m), (m + h, m + h), (m, m + h)))
    if d0 is None:
        d0 = (s / 2.0, 0.0)
    if d1 is None:
        d1 = (s / 2.0, m)
    return RegionSpec((out, hole), (tuple(d0), tuple(d1)))


def region_from_json(doc) -> tuple:
    """Parse a region document; returns (RegionSpec, eps or None, delta or None)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise errors.RegionParse(str(e)) from e
    try:
        comps = []
        for c in doc["boundary"]:
            if "vertices" in c:
                comps.append(Polyline(tuple(tuple(map(float, p)) for p in c["vertices"])))
            elif "circle" in c:
                comps.append(Circle(tuple(map(float, c["circle"]["center"])),
                                    float(c["circle"]["radius"])))
            else:
                raise errors.RegionParse(f"unknown boundary component {c}")
        marked = tuple(tuple(map(float, p)) for p in doc["marked_points"])
        probes = {k: tuple(map(float, v)) for k, v in doc.get("probe_points", {}).items()}
        spec = RegionSpec(tuple(comps), marked, probes)
        return spec, doc.get("eps"), doc.get("delta")
    except errors.RegionParse:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise errors.RegionParse(f"bad region document: {e}") from e


def region_to_json(spec: RegionSpec, eps=None, delta=None) -> dict:
    comps = []
    for c in spec.boundary_components:
        if isinstance(c, Polyline):
            comps.append({"vertices": [list(p) for p in c.points]})
        else:
            comps.append({"circle": {"center": list(c.center), "radius": c.radius}})
    doc = {
        "boundary": comps,
        "marked_points": [list(p) for p in spec.marked_points],
        "probe_points": {k: list(v) for k, v in spec.probe_points.items()},
    }
    if eps is not None:
        doc["eps"] = eps
    if delta is not None:
        doc["delta"] = delta
    return doc


def default_delta(eps: float) -> float:
    """Flat-window radius near marked points; capped so windows stay local."""
    return min(8.0 * eps * math.ceil(1.0 / math.sqrt(eps)), 0.25)


def discretize_region(spec: RegionSpec, eps: float, delta=None) -> TemperleyanPolyomino:
    """Temperleyan polyomino within O(eps) of the region's boundary.

    The even polyomino is a union of 3x3 square blocks centered on B0 sites
    (holes: blocks centered on B1 sites, subtracted), which keeps every corner
    square of class B1 by construction.  Near each marked point the boundary
    is straightened over a window of radius delta.
    """
    if delta is None:
        delta = default_delta(eps)
    scale = 1.0 / eps
    outer, holes = spec.boundary_components[0], spec.boundary_components[1:]

    def block_fits(cx, cy, curve, inside):
        for ox, oy in ((-1.5, -1.5), (1.5, -1.5), (-1.5, 1.5), (1.5, 1.5)):
            p = ((cx + ox) * eps, (cy + oy) * eps)
            if curve.contains(p) != inside:
                return False
        return True

    # B0 block centers for the solid outer region
    lo = [math.floor(min(pt[0] for pt in _curve_samples(outer)) * scale) - 2,
          math.floor(min(pt[1] for pt in _curve_samples(outer)) * scale) - 2]
    hi = [math.ceil(max(pt[0] for pt in _curve_samples(outer)) * scale) + 2,
          math.ceil(max(pt[1] for pt in _curve_samples(outer)) * scale) + 2]
    b0_centers = {
        (x, y)
        for x in range(lo[0] | 1, hi[0] + 1, 2)
        for y in range(lo[1] + (lo[1] % 2), hi[1] + 1, 2)
        if block_fits(x, y, outer, True)
    }
    if not b0_centers:
        raise errors.ResolutionTooCoarse(f"eps={eps} too coarse for the outer curve")
    b0_centers = _snap_flat(b0_centers, outer, spec.marked_points[0], eps, delta)
    squares = set()
    for (cx, cy) in b0_centers:
        squares.update((cx + ox, cy + oy) for ox in (-1, 0, 1) for oy in (-1, 0, 1))

    hole_square_sets = []
    for hcurve, mark in zip(holes, spec.marked_points[1:]):
        b1_centers = {
            (x, y)
            for x in range(lo[0] + (lo[0] % 2), hi[0] + 1, 2)
            for y in range(lo[1] | 1, hi[1] + 1, 2)
            if block_fits(x, y, hcurve, True)
        }
        if not b1_centers:
            raise errors.ResolutionTooCoarse(f"eps={eps} too coarse for a hole")
        b1_centers = _snap_flat(b1_centers, hcurve, mark, eps, delta)
        hole_sq = set()
        for (cx, cy) in b1_centers:
            hole_sq.update((cx + ox, cy + oy) for ox in (-1, 0, 1) for oy in (-1, 0, 1))
        if not hole_sq <= squares:
            raise errors.ResolutionTooCoarse("hole blocks leak outside the region")
        hole_square_sets.append(hole_sq)
        squares -= hole_sq

    try:
        poly = Polyomino(squares, lattice_spacing=eps)
    except (ValueError, errors.DisconnectedHost) as e:
        raise errors.ResolutionTooCoarse(str(e)) from e
    if len(poly.boundary_loops) != 1 + len(holes):
        raise errors.ResolutionTooCoarse(
            f"expected {len(holes)} holes, traced {len(poly.boundary_loops) - 1}"
        )
    if not validate_even(poly):
        raise errors.ResolutionTooCoarse("discretization broke evenness")

    edge_loop = _boundary_edge_loops(poly)
    d0 = _pick_removal(poly, edge_loop, spec.marked_points[0], eps)
    sites = [
        _pick_exposed(poly, hole_sq, mark, eps)
        for hole_sq, mark in zip(hole_square_sets, spec.marked_points[1:])
    ]
    return make_temperleyan(poly, d0, sites, marked_flat_radius=delta)


def _curve_samples(curve, n=256):
    if isinstance(curve, Polyline):
        return curve.points
    return [
        (curve.center[0] + curve.radius * math.cos(2 * math.pi * k / n),
         curve.center[1] + curve.radius * math.sin(2 * math.pi * k / n))
        for k in range(n)
    ]


def _snap_flat(centers, curve, mark, eps, delta):
    """Straighten the rastered boundary within `delta` of the marked point."""
    _, q, tan = curve.nearest(mark)
    horizontal = abs(tan[0]) >= abs(tan[1])
    win = max(delta / eps, 3.0)
    key, perp = (0, (0, 1)) if horizontal else (1, (1, 0))
    interior_pos = _interior_side(curve, q, perp, eps)
    mk = mark[key] / eps
    groups = {}
    for c in centers:
        if abs(c[key] - mk) <= win:
            groups.setdefault(c[key], []).append(c[1 - key])
    if not groups:
        return set(centers)
    ref = min(groups, key=lambda k: abs(k - mk))
    level = min(groups[ref]) if interior_pos else max(groups[ref])
    out = set(centers)

    def mk(k, v):
        return (k, v) if key == 0 else (v, k)

    for k, vs in groups.items():
        if interior_pos:
            for v in vs:
                if v < level:
                    out.discard(mk(k, v))
            for v in range(level, min(vs), 2):
                out.add(mk(k, v))
        else:
            for v in vs:
                if v > level:
                    out.discard(mk(k, v))
            for v in range(max(vs) + 2, level + 2, 2):
                out.add(mk(k, v))
    return out


def _interior_side(curve, q, axis, eps):
    """True if the curve interior lies on the positive `axis` side of boundary
    point q (so the near-boundary raster level is the minimum coordinate)."""
    probe = (q[0] + 3 * eps * axis[0], q[1] + 3 * eps * axis[1])
    return curve.contains(probe)


def _pick_removal(poly, edge_loop, mark, eps):
    mx, my = mark[0] / eps, mark[1] / eps
    best = None
    for s in poly.squares:
        if classify_square(*s) is not SquareClass.B1:
            continue
        sides = [
            (s[0] + dx, s[1] + dy)
            for dx, dy in _SIDES
            if (s[0] + dx, s[1] + dy) not in poly.squares
        ]
        on_outer = [t for t in sides if edge_loop.get((s, t)) == 0]
        if len(on_outer) != 1 or len(sides) != 1:
            continue
        d = (s[0] - mx) ** 2 + (s[1] - my) ** 2
        if best is None or d < best[0]:
            best = (d, s)
    if best is None:
        raise errors.ResolutionTooCoarse("no valid d0 near the outer marked point")
    return best[1]


def _pick_exposed(poly, hole_squares, mark, eps):
    mx, my = mark[0] / eps, mark[1] / eps
    best = None
    for s in hole_squares:
        if s in poly.squares or classify_square(*s) is not SquareClass.B0:
            continue
        touching = [
            (s[0] + dx, s[1] + dy)
            for dx, dy in _SIDES
            if (s[0] + dx, s[1] + dy) in poly.squares
        ]
        if len(touching) != 1:
            continue
        d = (s[0] - mx) ** 2 + (s[1] - my) ** 2
        if best is None or d < best[0]:
            best = (d, s)
    if best is None:
        raise errors.ResolutionTooCoarse("no valid exposed site near a hole mark")
    return best[1]


# ---------------------------------------------------------------------------
# Hand-built hosts used throughout the tests and experiments.

def rectangle_polyomino(width: int, height: int, eps=1.0) -> Polyomino:
    """Even rectangle of width x height squares (both odd), lower-left at (0, 1)."""
    if width % 2 == 0 or height % 2 == 0:
        raise ValueError("even rectangle needs odd side lengths")
    return Polyomino(
        {(x, y) for x in range(width) for y in range(1, height + 1)},
        lattice_spacing=eps,
    )


def rectangle_host(width: int, height: int, d0_edge="bottom", eps=1.0) -> TemperleyanPolyomino:
    """Temperleyan rectangle with d0 at the middle of the chosen edge."""
    p = rectangle_polyomino(width, height, eps=eps)
    if d0_edge == "bottom":
        x = width // 2
        d0 = (x if x % 2 == 0 else x - 1, 1)
    elif d0_edge == "top":
        x = width // 2
        d0 = (x if x % 2 == 0 else x - 1, height)
    elif d0_edge == "corner":
        d0 = (0, 1)
    else:
        raise ValueError(f"unknown d0 edge {d0_edge!r}")
    return make_temperleyan(p, d0, [])


def square_annulus_host(outer: int, hole: int, eps=1.0, exposed_offset=2) -> TemperleyanPolyomino:
    """Square annulus: odd outer side, odd hole side, hole centered with B0 corners.

    The hole must be at least 5 wide: every B0 square in a 3x3 hole sits at a
    hole corner and would border two squares of the host.
    """
    if outer % 2 == 0 or hole % 2 == 0:
        raise ValueError("annulus needs odd side lengths")
    if hole < 5:
        raise ValueError("hole must be at least 5 squares wide")
    squares = {(x, y) for x in range(outer) for y in range(1, outer + 1)}
    m = (outer - hole) // 2
    hx0 = m if m % 2 == 1 else m + 1
    hy0 = m + 1 if (m + 1) % 2 == 0 else m + 2
    hole_sq = {(x, y) for x in range(hx0, hx0 + hole) for y in range(hy0, hy0 + hole)}
    p = Polyomino(squares - hole_sq, lattice_spacing=eps)
    x = outer // 2
    d0 = (x if x % 2 == 0 else x - 1, 1)
    ex = hx0 + exposed_offset
    if ex % 2 == 0:
        ex += 1
    d1 = (ex, hy0)
    return make_temperleyan(p, d0, [d1])
