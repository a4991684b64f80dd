"""Gauge-invariant fingerprints and the equivalence decision for cell systems.

A gauge acts on each ordered vertex pair by a unitary on its parallel edges. For
a closed vertex cycle (a, b, c) the cells on all triangles a -> b -> c -> a form
a tensor T[i, j, k] over the parallel edges of the three sides, and a gauge acts
on it by one unitary per index. Singular values of the three flattenings are
therefore invariant, and on simple graphs they reduce to |W| per triangle.
On a parallel class the Gram matrices G = F F^H of these flattenings transform
as u G u^H, so normalised traces of their products are invariant as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from .cells import CellSystem, GaugeFamily, gauge_transform
from .config import TOLERANCES
from .graphs import Graph, Triangle

Status = Literal["equivalent", "inequivalent", "inconclusive"]


# ---------------------------------------------------------------------------
# cycle shapes


@dataclass(frozen=True)
class Shape:
    """Closed vertex cycle a -> b -> c -> a with its triangle-index tensor."""

    vertices: tuple[int, int, int]
    pairs: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    index: np.ndarray  # (m1, m2, m3) triangle positions


def _min_rotation(cyc: tuple[int, int, int]) -> tuple[int, int, int]:
    return min(cyc[i:] + cyc[:i] for i in range(3))


_SHAPES: dict[int, tuple[Graph, list[Shape]]] = {}


def shapes(g: Graph) -> list[Shape]:
    hit = _SHAPES.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    from .graphs import triangles

    index = {t: k for k, t in enumerate(triangles(g))}
    cycles = sorted({_min_rotation(g.triangle_vertices(t)) for t in index})
    out = []
    for a, b, c in cycles:
        pairs = ((a, b), (b, c), (c, a))
        sides = [g.edges_between(*p) for p in pairs]
        idx = np.empty(tuple(len(s) for s in sides), dtype=np.intp)
        for i, e1 in enumerate(sides[0]):
            for j, e2 in enumerate(sides[1]):
                for k, e3 in enumerate(sides[2]):
                    idx[i, j, k] = index[Triangle.canonical(e1, e2, e3)]
        out.append(Shape((a, b, c), pairs, idx))
    _SHAPES[id(g)] = (g, out)
    return out


def apply_gauge(g: Graph, W: np.ndarray, blocks: dict[tuple[int, int], np.ndarray]) -> np.ndarray:
    """Vectorised gauge action; agrees with cells.gauge_transform."""
    out = np.array(W, dtype=complex, copy=True)
    for sh in shapes(g):
        u1, u2, u3 = (blocks[p] for p in sh.pairs)
        out[sh.index] = np.einsum("ia,jb,kc,abc->ijk", u1, u2, u3, W[sh.index])
    return out


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    """Rounded invariants; equality of two fingerprints compares the rounded data."""

    graph: str
    magnitudes: tuple[float, ...]
    phases: tuple[float, ...]
    traces: tuple[float, ...]
    tol: float

    @property
    def data(self) -> tuple[float, ...]:
        return self.magnitudes + self.phases + self.traces

    def distance(self, other: "Fingerprint") -> float:
        shape = lambda f: (f.graph, len(f.magnitudes), len(f.phases), len(f.traces))
        if shape(self) != shape(other):
            return math.inf
        return float(np.abs(np.array(self.data) - np.array(other.data)).max(initial=0.0))

    def matches(self, other: "Fingerprint", tol: float = TOLERANCES.classify) -> bool:
        return self.distance(other) <= tol

    def to_dict(self) -> dict:
        return {"graph": self.graph, "tol": self.tol,
                "magnitudes": [float(x).hex() for x in self.magnitudes],
                "phases": [float(x).hex() for x in self.phases],
                "traces": [float(x).hex() for x in self.traces]}


def _simple_triangles(g: Graph) -> np.ndarray:
    """Mask of triangles all of whose edges have no parallel partner."""
    from .graphs import triangles

    simple = [all(len(g.edges_between(g.edges[e].source, g.edges[e].target)) == 1 for e in t)
              for t in triangles(g)]
    return np.array(simple, dtype=bool)


def _phase_invariants(cs: CellSystem, floor: float) -> np.ndarray:
    """Relative phases P_k conj(P_j)/|..| of the terms of each type II frame.

    Each term picks up the holonomy of the frame boundary under a phase gauge,
    so term ratios inside one frame are invariant. Frames touching parallel
    edges are skipped. Zero terms contribute (0, 0).
    """
    eq = cs.equations
    if eq.n_ii == 0:
        return np.zeros(0)
    simple = _simple_triangles(cs.graph)
    P = eq.type_ii_terms(cs.W)
    P = np.where(np.abs(P) > floor, P, 0)
    ok = simple[eq.ii_t].all(axis=1)
    out = []
    order = np.argsort(eq.ii_frame, kind="stable")
    frames, starts = np.unique(eq.ii_frame[order], return_index=True)
    bounds = list(starts) + [len(order)]
    for f in range(len(frames)):
        terms = order[bounds[f]:bounds[f + 1]]
        if len(terms) < 2 or not ok[terms].all():
            continue
        p = P[terms]
        rel = np.outer(p, np.conj(p))[np.triu_indices(len(p), 1)]
        mag = np.abs(rel)
        unit = np.divide(rel, mag, out=np.zeros_like(rel), where=mag > 0)
        out.append(np.stack([unit.real, unit.imag], axis=1).ravel())
    return np.concatenate(out) if out else np.zeros(0)


def _magnitude_invariants(cs: CellSystem) -> np.ndarray:
    vals = []
    for sh in shapes(cs.graph):
        T = cs.W[sh.index]
        m = T.shape
        if T.size == 1:
            vals.append(np.abs(T).ravel())
            continue
        for axis in range(3):
            flat = np.moveaxis(T, axis, 0).reshape(m[axis], -1)
            vals.append(np.linalg.svd(flat, compute_uv=False))
    return np.concatenate(vals) if vals else np.zeros(0)


def _trace_invariants(cs: CellSystem, floor: float) -> np.ndarray:
    """Normalised tr(Ga Gb) and tr(Ga Gb Gc) of Gram matrices on each parallel class."""
    grams: dict[tuple[int, int], list[np.ndarray]] = {}
    for sh in shapes(cs.graph):
        T = cs.W[sh.index]
        for axis, pair in enumerate(sh.pairs):
            if T.shape[axis] > 1:
                F = np.moveaxis(T, axis, 0).reshape(T.shape[axis], -1)
                grams.setdefault(pair, []).append(F @ F.conj().T)
    out = []
    for pair in sorted(grams):
        G = grams[pair]
        tr = np.array([np.trace(a).real for a in G])
        scale = np.where(tr > floor, tr, np.inf)
        r = len(G)
        for a in range(r):
            for b in range(a, r):
                out.append(np.trace(G[a] @ G[b]) / (scale[a] * scale[b]))
                for c in range(b, r):
                    out.append(np.trace(G[a] @ G[b] @ G[c]) / (scale[a] * scale[b] * scale[c]))
    z = np.array(out, dtype=complex)
    return np.stack([z.real, z.imag], axis=1).ravel() if len(z) else np.zeros(0)


def fingerprint(cs: CellSystem, tol: float = TOLERANCES.fingerprint) -> Fingerprint:
    decimals = max(0, int(round(-math.log10(tol))))
    mags = np.round(_magnitude_invariants(cs), decimals) + 0.0
    # scale-aware floor so that numerically zero terms do not carry a phase
    floor = max(tol, tol * float(np.abs(cs.W).max(initial=0.0)) ** 4)
    ph = np.round(_phase_invariants(cs, floor), decimals) + 0.0
    tr = np.round(_trace_invariants(cs, tol), decimals) + 0.0
    return Fingerprint(cs.graph.name, tuple(mags.tolist()), tuple(ph.tolist()),
                       tuple(tr.tolist()), tol)


# ---------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class Equivalence:
    status: Status
    witness: GaugeFamily | None = None
    obstruction: str = ""
    objective: float = 0.0

    def __bool__(self) -> bool:
        return self.status == "equivalent"


def gauge_objective(cs1: CellSystem, cs2: CellSystem, gauge: GaugeFamily) -> float:
    """sum |W1 - gauge(W2)|^2."""
    return float(np.sum(np.abs(cs1.W - apply_gauge(cs2.graph, cs2.W, gauge.blocks)) ** 2))


@dataclass(frozen=True)
class _Incidence:
    B: np.ndarray  # triangles x edges, integer multiplicities

    @cached_property
    def snf(self):
        from sympy import Matrix, ZZ
        from sympy.matrices.normalforms import smith_normal_decomp

        D, S, T = smith_normal_decomp(Matrix(self.B.tolist()), domain=ZZ)
        # D = S B T
        diag = [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]
        return (np.array(S.tolist(), dtype=float), np.array(T.tolist(), dtype=float),
                np.array(diag, dtype=float))


def incidence(g: Graph, rows) -> np.ndarray:
    B = np.zeros((len(rows), g.n_edges), dtype=np.int64)
    for r, t in enumerate(rows):
        for e in t:
            B[r, e] += 1
    return B


def solve_phases(B: np.ndarray, delta: np.ndarray, tol: float = TOLERANCES.fingerprint):
    """Real theta with B theta = delta mod 2 pi, or (None, defect) if inconsistent.

    With the Smith form D = S B T the system becomes D y = S delta mod 2 pi for
    y = T^{-1} theta; rows beyond the rank are the cycle conditions.
    """
    S, T, d = _Incidence(B).snf
    r = len(d)
    rhs = S @ delta
    tail = rhs[r:]
    defect = float(np.abs(np.angle(np.exp(1j * tail))).max(initial=0.0))
    if defect > tol:
        return None, defect
    y = np.zeros(B.shape[1])
    y[:r] = rhs[:r] / d
    return T @ y, defect


def equivalent(cs1: CellSystem, cs2: CellSystem, tol: float = TOLERANCES.fingerprint,
               seed: int = 0, restarts: int = 20, iterations: int = 500) -> Equivalence:
    """Decide whether cs1 = gauge(cs2) for some GaugeFamily.

    The returned witness satisfies gauge_transform(cs2, witness) ~ cs1.
    """
    g = cs1.graph
    if cs2.graph.name != g.name or len(cs1.W) != len(cs2.W):
        raise ValueError("cell systems live on different graphs")
    if g.is_simple:
        return _equivalent_simple(cs1, cs2, tol)
    f1, f2 = fingerprint(cs1, tol), fingerprint(cs2, tol)
    if f1.distance(f2) > 10 * tol:
        return Equivalence("inequivalent", obstruction=_describe_gap(f1, f2))
    return _search(cs1, cs2, tol, seed, restarts, iterations)


def _describe_gap(f1: Fingerprint, f2: Fingerprint) -> str:
    m = np.abs(np.array(f1.magnitudes) - np.array(f2.magnitudes))
    if m.size and m.max() > 10 * f1.tol:
        return f"gauge-invariant magnitudes differ by {m.max():.3g}"
    p = np.abs(np.array(f1.phases) - np.array(f2.phases))
    if p.size and p.max() > 10 * f1.tol:
        return "type II frame phase invariants differ"
    return "Gram-matrix trace invariants on a parallel class differ"


def _equivalent_simple(cs1: CellSystem, cs2: CellSystem, tol: float) -> Equivalence:
    g = cs1.graph
    a1, a2 = np.abs(cs1.W), np.abs(cs2.W)
    gap = np.abs(a1 - a2)
    if gap.max(initial=0.0) > tol * max(1.0, a1.max(initial=0.0)):
        k = int(gap.argmax())
        return Equivalence("inequivalent",
                           obstruction=f"|W| differs on triangle {g.describe_triangle(cs1.triangles[k])}"
                                       f" ({a1[k]:.12g} vs {a2[k]:.12g})")
    live = np.nonzero(a1 > tol)[0]
    rows = [cs1.triangles[k] for k in live]
    delta = np.angle(cs1.W[live] / cs2.W[live])
    theta, defect = solve_phases(incidence(g, rows), delta, tol)
    if theta is None:
        return Equivalence("inequivalent",
                           obstruction=f"phase system inconsistent on a cycle (defect {defect:.3g} rad)")
    witness = GaugeFamily.from_edge_phases(g, theta)
    obj = float(np.sum(np.abs(cs1.W - gauge_transform(cs2, witness).W) ** 2))
    if obj > tol ** 2 * max(1, len(cs1.W)):
        return Equivalence("inconclusive", obstruction="phase witness failed re-check", objective=obj)
    return Equivalence("equivalent", witness=witness, objective=obj)


def _search(cs1: CellSystem, cs2: CellSystem, tol: float, seed: int, restarts: int,
            iterations: int) -> Equivalence:
    """Least-squares search over unitaries exp(iH), one Hermitian H per vertex pair."""
    from scipy.linalg import expm
    from scipy.optimize import least_squares

    g = cs1.graph
    keys = sorted(g._between)
    dims = [len(g._between[k]) for k in keys]
    sizes = [m * m for m in dims]
    offs = np.concatenate([[0], np.cumsum(sizes)])

    def unpack(x):
        blocks = {}
        for key, m, o in zip(keys, dims, offs):
            A = x[o:o + m * m].reshape(m, m)
            H = (A + A.T) / 2 + 0.5j * (A - A.T)
            blocks[key] = expm(1j * H)
        return blocks

    def resid(x):
        d = cs1.W - apply_gauge(g, cs2.W, unpack(x))
        return np.concatenate([d.real, d.imag])

    rng = np.random.default_rng(seed)
    best, best_x = math.inf, None
    for _ in range(restarts):
        x0 = rng.uniform(-math.pi, math.pi, offs[-1])
        sol = least_squares(resid, x0, method="lm", max_nfev=iterations * (offs[-1] + 1))
        obj = float(np.sum(sol.fun ** 2))
        if obj < best:
            best, best_x = obj, sol.x
        if best <= tol ** 2:
            break
    if best <= tol ** 2:
        return Equivalence("equivalent", witness=GaugeFamily(g, unpack(best_x)), objective=best)
    return Equivalence("inconclusive", obstruction="no gauge found by numerical search", objective=best)


__all__ = ["Shape", "shapes", "apply_gauge", "Fingerprint", "fingerprint", "Equivalence",
           "equivalent", "gauge_objective", "incidence", "solve_phases"]
