"""Exact uniform tiling sampling via the Temperley bijection: uniform
directed essential spanning forests on B0' mapped to perfect matchings."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import errors
from ._fastcore import forest_to_partner, wilson
from .height import Tiling
from .lattice import SiteGraph, TemperleyanPolyomino, is_white


@dataclass(frozen=True)
class SpanningForest:
    """Directed essential spanning forest on the B0' graph: one outgoing edge
    per non-boundary vertex, rooted at the boundary set Y."""

    graph: SiteGraph
    outgoing: dict

    def __post_init__(self):
        g = self.graph
        roots = g.boundary_set - g.exposed_set  # the set Y; exposed are ordinary
        interior = {g.positions[i] for i in range(len(g)) if i not in roots}
        if set(self.outgoing) != interior:
            raise ValueError("forest must assign exactly the non-root vertices")

    def path_to_root(self, start):
        v = tuple(start)
        out = [v]
        seen = {v}
        while v in self.outgoing:
            v = self.outgoing[v]
            if v in seen:
                raise ValueError(f"directed cycle through {v}")
            seen.add(v)
            out.append(v)
        return out

    def is_valid(self):
        try:
            for v in self.outgoing:
                self.path_to_root(v)
        except ValueError:
            return False
        return True


class _SamplerArrays:
    """Flat array bundle for the numba kernels, built once per host."""

    def __init__(self, tp: TemperleyanPolyomino):
        g = tp.b0_prime
        m = tp.interior_dual
        self.g = g
        self.m = m
        self.indptr, self.indices = g.csr
        self.m_indptr, self.m_indices = m.csr
        n = len(g)
        self.is_root = np.zeros(n, dtype=np.bool_)
        for i in g.boundary_set:
            if i not in g.exposed_set:
                self.is_root[i] = True
        # exposed vertices are ordinary forest vertices, so the roots are Y only
        interior = [i for i in range(n) if not self.is_root[i]]
        interior.sort(key=lambda i: (g.positions[i][1], g.positions[i][0]))
        self.order = np.array(interior, dtype=np.int64)
        self.b0_m_index = np.array(
            [m.index.get(g.positions[i], -1) for i in range(n)], dtype=np.int64
        )
        white = np.full(len(self.indices), -1, dtype=np.int64)
        for v in range(n):
            pv = g.positions[v]
            for slot in range(self.indptr[v], self.indptr[v + 1]):
                pu = g.positions[self.indices[slot]]
                mid = ((pv[0] + pu[0]) // 2, (pv[1] + pu[1]) // 2)
                white[slot] = m.index.get(mid, -1)
        self.white_of_edge = white
        # every interior vertex must reach a root
        reach = self.is_root.copy()
        queue = deque(np.nonzero(self.is_root)[0].tolist())
        while queue:
            i = queue.popleft()
            for j in g.neighbors(i):
                if not reach[j]:
                    reach[j] = True
                    queue.append(int(j))
        if not reach.all():
            raise errors.UnreachableBoundary(
                f"{int((~reach).sum())} vertices cannot reach the boundary"
            )


def _arrays(tp) -> _SamplerArrays:
    cache = getattr(tp, "_sampler_arrays", None)
    if cache is None:
        cache = _SamplerArrays(tp)
        tp._sampler_arrays = cache
    return cache


def wilson_forest(g: SiteGraph, seed: int, index: int = 0) -> SpanningForest:
    """Exactly uniform essential spanning forest rooted at the boundary set."""
    indptr, indices = g.csr
    n = len(g)
    is_root = np.zeros(n, dtype=np.bool_)
    for i in g.boundary_set:
        if i not in g.exposed_set:
            is_root[i] = True
    reach = is_root.copy()
    queue = deque(np.nonzero(is_root)[0].tolist())
    while queue:
        i = queue.popleft()
        for j in g.neighbors(i):
            if not reach[j]:
                reach[j] = True
                queue.append(int(j))
    if not reach.all():
        raise errors.UnreachableBoundary("graph has vertices cut off from Y")
    interior = [i for i in range(n) if not is_root[i]]
    interior.sort(key=lambda i: (g.positions[i][1], g.positions[i][0]))
    order = np.array(interior, dtype=np.int64)
    out = wilson(indptr, indices, is_root, order, np.uint64(seed), np.uint64(index))
    outgoing = {
        g.positions[v]: g.positions[out[v]] for v in range(n) if out[v] >= 0
    }
    return SpanningForest(g, outgoing)


def forest_to_tiling(f: SpanningForest, tp: TemperleyanPolyomino) -> Tiling:
    """Each B0 square is matched with the white square under its outgoing
    edge; the rest completes uniquely (the dual tree is rooted at d0)."""
    if f.graph is not tp.b0_prime and set(f.graph.positions) != set(
        tp.b0_prime.positions
    ):
        raise errors.ForestHostMismatch("forest does not live on the host's B0' graph")
    arr = _arrays(tp)
    g, m = arr.g, arr.m
    out = np.full(len(g), -1, dtype=np.int64)
    for v, u in f.outgoing.items():
        out[g.index[v]] = g.index[u]
    partner, flag = forest_to_partner(
        out, arr.b0_m_index, arr.indptr, arr.indices, arr.white_of_edge,
        arr.m_indptr, arr.m_indices, len(m.positions),
    )
    if flag != 0:
        raise errors.ForestHostMismatch("forest does not induce a perfect matching")
    return _tiling_from_partner(tp, partner)


def _tiling_from_partner(tp, partner) -> Tiling:
    m = tp.interior_dual
    dominoes = []
    for i, j in enumerate(partner):
        if i < j:
            dominoes.append((m.positions[i], m.positions[int(j)]))
    return Tiling(tp, dominoes)


def tiling_to_forest(t: Tiling) -> SpanningForest:
    """Inverse bijection: the outgoing edge of a B0 square passes over the
    white square of its domino."""
    tp = t.host
    g = tp.b0_prime
    outgoing = {}
    for i in range(len(g)):
        if i in g.boundary_set and i not in g.exposed_set:
            continue
        v = g.positions[i]
        if v in t.partner:
            w = t.partner[v]
        else:
            raise errors.ForestHostMismatch(f"B0 square {v} is not covered")
        u = (2 * w[0] - v[0], 2 * w[1] - v[1])
        outgoing[v] = u
    return SpanningForest(g, outgoing)


def sample_partner(tp: TemperleyanPolyomino, seed: int, index: int = 0):
    """One uniform tiling as a partner-index array over the interior dual."""
    arr = _arrays(tp)
    out = wilson(
        arr.indptr, arr.indices, arr.is_root, arr.order,
        np.uint64(seed), np.uint64(index),
    )
    partner, flag = forest_to_partner(
        out, arr.b0_m_index, arr.indptr, arr.indices, arr.white_of_edge,
        arr.m_indptr, arr.m_indices, len(arr.m.positions),
    )
    if flag != 0:
        raise errors.Untilable("forest did not induce a perfect matching")
    return partner


def iter_sample_partners(tp, n: int, seed: int, start_index: int = 0):
    """Yield (index, partner array) for n independent samples; the partner
    array is freshly allocated per sample."""
    for i in range(start_index, start_index + n):
        yield i, sample_partner(tp, seed, i)


def sample_tiling(tp: TemperleyanPolyomino, seed: int, index: int = 0) -> Tiling:
    """Exactly uniform tiling of the host, reproducible by (seed, index)."""
    if not isinstance(tp, TemperleyanPolyomino):
        raise errors.Untilable("sampling requires a Temperleyan host")
    return _tiling_from_partner(tp, sample_partner(tp, seed, index))


def path_turning(f: SpanningForest, start):
    """Cumulative net turning (right minus left) along the directed path from
    `start` to the root; step k reports the turning after k+1 interior
    vertices of the path."""
    path = f.path_to_root(start)
    if len(path) < 2:
        return []
    dirs = [
        (b[0] - a[0], b[1] - a[1]) for a, b in zip(path, path[1:])
    ]
    total = 0
    out = []
    for d1, d2 in zip(dirs, dirs[1:]):
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if cross < 0:
            total += 1
        elif cross > 0:
            total -= 1
        out.append(total)
    return out
