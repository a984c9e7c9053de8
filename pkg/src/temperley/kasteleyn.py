"""Weighted Kasteleyn operator: tiling counts, coupling columns, and local
configuration probabilities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from . import errors
from .lattice import SiteGraph, classify_square, interior_dual, is_black, is_white

# Edge weights at a white vertex, counterclockwise from the right-going edge.
WEIGHTS = {(1, 0): 1.0 + 0j, (0, 1): 1j, (-1, 0): -1.0 + 0j, (0, -1): -1j}


def edge_weight(w, b) -> complex:
    """Kasteleyn weight of the edge between white square w and black square b."""
    return WEIGHTS[(b[0] - w[0], b[1] - w[1])]


@dataclass(frozen=True)
class CouplingColumn:
    """One column C(v1, .) of the inverse Kasteleyn operator."""

    source: tuple
    values: dict

    def __getitem__(self, b):
        return self.values[tuple(b)]


class KasteleynSystem:
    """Sparse bipartite Kasteleyn block (rows: whites, columns: blacks) with a
    reusable factorization."""

    def __init__(self, graph: SiteGraph):
        self.graph = graph
        self.whites = [p for p in graph.positions if is_white(p)]
        self.blacks = [p for p in graph.positions if is_black(p)]
        if len(self.whites) != len(self.blacks):
            raise errors.UnbalancedColors(
                f"{len(self.whites)} white vs {len(self.blacks)} black squares"
            )
        self.white_index = {p: i for i, p in enumerate(self.whites)}
        self.black_index = {p: i for i, p in enumerate(self.blacks)}
        rows, cols, vals = [], [], []
        pos = set(graph.positions)
        for w in self.whites:
            wi = self.white_index[w]
            for d, wt in WEIGHTS.items():
                b = (w[0] + d[0], w[1] + d[1])
                if b in pos:
                    rows.append(wi)
                    cols.append(self.black_index[b])
                    vals.append(wt)
        n = len(self.whites)
        self.matrix = sparse.coo_matrix(
            (vals, (rows, cols)), shape=(n, n), dtype=complex
        ).tocsc()

    @cached_property
    def _lu(self):
        try:
            return splu(self.matrix)
        except RuntimeError as e:
            raise errors.SingularSystem(str(e)) from e

    @cached_property
    def _sign_constant(self):
        # Global ordering sign, calibrated on one single-edge probability.
        w, b = next(
            ((w, (w[0] + d[0], w[1] + d[1])) for w in self.whites
             for d in WEIGHTS if (w[0] + d[0], w[1] + d[1]) in self.black_index),
        )
        col = self.solve_coupling(w)
        s = edge_weight(w, b) * col[b]
        if abs(s.imag) > 1e-9 * max(1.0, abs(s)):
            raise AssertionError(f"single-edge product not real: {s}")
        return 1.0 if s.real >= 0 else -1.0

    def solve_columns(self, whites):
        """Coupling columns for several white sources with one factorization."""
        rhs = np.zeros((len(self.whites), len(whites)), dtype=complex)
        for j, w in enumerate(whites):
            rhs[self.white_index[tuple(w)], j] = 1.0
        sol = self._lu.solve(rhs)
        return [
            CouplingColumn(tuple(w), dict(zip(self.blacks, sol[:, j])))
            for j, w in enumerate(whites)
        ]

    def solve_coupling(self, v1) -> CouplingColumn:
        return self.solve_columns([v1])[0]


def build_kasteleyn(m) -> KasteleynSystem:
    """Assemble the Kasteleyn system of an interior dual graph (or a host)."""
    if not isinstance(m, SiteGraph):
        m = interior_dual(m)
    return KasteleynSystem(m)


def log_abs_det(ks: KasteleynSystem) -> float:
    """log |det| of the white-by-black Kasteleyn block (= log of the count)."""
    try:
        diag = ks._lu.U.diagonal()
    except errors.SingularSystem:
        return -math.inf
    mags = np.abs(diag)
    if np.any(mags == 0):
        return -math.inf
    return float(np.sum(np.log(mags)))


def count_tilings(ks: KasteleynSystem) -> int:
    """Exact number of tilings; DeterminantOverflow carries log10 for huge counts."""
    ld = log_abs_det(ks)
    if ld == -math.inf:
        return 0
    log10 = ld / math.log(10.0)
    if log10 > 15:
        raise errors.DeterminantOverflow(log10)
    return round(math.exp(ld))


def log10_count_tilings(ks: KasteleynSystem) -> float:
    ld = log_abs_det(ks)
    return -math.inf if ld == -math.inf else ld / math.log(10.0)


def solve_coupling(ks: KasteleynSystem, v1) -> CouplingColumn:
    """Column C(v1, .) with K C = delta_v1; real on B0, imaginary on B1 for
    v1 in W0 (parities swap for v1 in W1)."""
    v1 = tuple(v1)
    if v1 not in ks.white_index:
        raise ValueError(f"{v1} is not a white vertex of the system")
    return ks.solve_coupling(v1)


def edge_set_probability(ks: KasteleynSystem, edges) -> float:
    """Probability that all given disjoint dominoes occur in a uniform tiling."""
    norm = []
    for a, b in edges:
        a, b = tuple(a), tuple(b)
        if is_black(a):
            a, b = b, a
        if a not in ks.white_index or b not in ks.black_index:
            raise ValueError(f"edge {(a, b)} is not in the graph")
        if edge_weight(a, b) is None:
            raise ValueError(f"{(a, b)} not adjacent")
        norm.append((a, b))
    seen = set()
    for a, b in norm:
        if a in seen or b in seen:
            raise errors.OverlappingEdges(f"vertex reused in {norm}")
        seen.update((a, b))
    if not norm:
        return 1.0
    cols = {c.source: c for c in ks.solve_columns([w for w, _ in norm])}
    k = len(norm)
    mat = np.empty((k, k), dtype=complex)
    for i, (_, bi) in enumerate(norm):
        for j, (wj, _) in enumerate(norm):
            mat[i, j] = cols[wj][bi]
    det = np.linalg.det(mat)
    a_e = np.prod([edge_weight(w, b) for w, b in norm])
    signed = ks._sign_constant * a_e * det
    p = abs(det)
    if abs(signed - p) > 1e-10 * max(1.0, p):
        raise AssertionError(
            f"ordering sign convention violated: {signed} vs |det| {p}"
        )
    return float(min(max(signed.real, 0.0), 1.0))


def dbar_apply(f, m: SiteGraph):
    """Discrete d/dzbar of a function on black vertices, at white vertices of m."""
    pos = set(m.positions)
    out = {}
    for w in m.positions:
        if not is_white(w):
            continue
        val = 0j
        for d, wt in WEIGHTS.items():
            b = (w[0] + d[0], w[1] + d[1])
            if b in pos:
                val += wt * complex(f.get(b, 0.0))
        out[w] = val
    return out


def check_discrete_analytic(f, m: SiteGraph, tol=1e-9):
    """White vertices where the discrete CR equations fail (the poles of f)."""
    scale = max((abs(complex(v)) for v in f.values()), default=1.0)
    for b, v in f.items():
        c = classify_square(*b).value
        v = complex(v)
        if c == "B0" and abs(v.imag) > tol * max(1.0, scale):
            raise errors.WrongValueParity(f"value at B0 {b} is not real: {v}")
        if c == "B1" and abs(v.real) > tol * max(1.0, scale):
            raise errors.WrongValueParity(f"value at B1 {b} is not imaginary: {v}")
        if c in ("W0", "W1") and abs(v) > tol * max(1.0, scale):
            raise errors.WrongValueParity(f"value on white {b} must vanish: {v}")
    res = dbar_apply(f, m)
    return sorted(w for w, v in res.items() if abs(v) > tol * max(1.0, scale))


def laplacian_apply(f, g: SiteGraph):
    """Graph Laplacian (positive-semidefinite sign) of f on a sublattice graph;
    equals 4f(v) - sum of the four distance-2 neighbors at interior vertices."""
    vals = np.array([float(f.get(p, 0.0)) for p in g.positions])
    indptr, indices = g.csr
    out = {}
    for i, p in enumerate(g.positions):
        nbrs = indices[indptr[i]:indptr[i + 1]]
        out[p] = float(len(nbrs)) * vals[i] - float(np.sum(vals[nbrs]))
    return out
