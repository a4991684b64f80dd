"""Hecke operators U, the connection X, unitarity and Yang-Baxter checks.

Conventions. A length-2 path x -> i -> y is an edge pair (e1, e2); paths of a
block are ordered by (intermediate vertex id, e1, e2). For a closing edge
lam: y -> x the cell W(lam, e1, e2) lives on the triangle y -> x -> i -> y, and

    U[(e1,e2), (f1,f2)] = sum_lam W(lam, f1, f2) conj(W(lam, e1, e2)) / (phi_x phi_y)

so U = M^H M / (phi_x phi_y) with M[lam, path] = W(lam, path). The connection is
X = q^(2/3) I - q^(-1/3) U with the principal roots exp(2 pi i/3n), exp(-pi i/3n).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable

import numpy as np

from .cells import CellSystem
from .graphs import Graph, Triangle

Path = tuple[int, int]


@dataclass(frozen=True)
class HeckeOperator:
    graph: Graph
    x: int
    y: int
    paths: tuple[Path, ...]
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.paths)

    def path_label(self, p: Path) -> str:
        g = self.graph
        e1, e2 = (g.edges[e] for e in p)
        mid = str(g.label(e1.target))
        tags = [t for t in (e1.tag, e2.tag) if t is not None]
        return f"{mid}({','.join(tags)})" if tags else mid

    @property
    def labels(self) -> list[str]:
        return [self.path_label(p) for p in self.paths]

    def selfadjoint_defect(self) -> float:
        U = self.matrix
        return float(np.abs(U - U.conj().T).max(initial=0.0))

    def hecke_defect(self) -> float:
        U = self.matrix
        q2 = self.graph.q(2)
        return float(np.abs(U @ U - q2 * U).max(initial=0.0))


def length2_paths(g: Graph, x: int, y: int) -> tuple[Path, ...]:
    out = []
    for e1 in g.out_edges(x):
        for e2 in g.edges_between(g.edges[e1].target, y):
            out.append((e1, e2))
    return tuple(sorted(out, key=lambda p: (g.edges[p[0]].target, p)))


def path_blocks(g: Graph) -> list[tuple[int, int]]:
    """All (x, y) joined by a length-2 path, sorted."""
    keys = set()
    for e1 in g.edges:
        for e2 in g.out_edges(e1.target):
            keys.add((e1.source, g.edges[e2].target))
    return sorted(keys)


def _closing_matrix(cs: CellSystem, x: int, y: int, paths) -> np.ndarray:
    g = cs.graph
    lams = g.edges_between(y, x)
    M = np.zeros((len(lams), len(paths)), dtype=complex)
    idx = cs.index
    for a, lam in enumerate(lams):
        for b, (e1, e2) in enumerate(paths):
            M[a, b] = cs.W[idx[Triangle.canonical(lam, e1, e2)]]
    return M


def hecke_operator(cs: CellSystem, x: Hashable, y: Hashable, by_label: bool = False) -> HeckeOperator:
    g = cs.graph
    if by_label:
        x, y = g.vid(x), g.vid(y)
    paths = length2_paths(g, x, y)
    if not paths:
        raise ValueError(f"no length-2 path from {g.label(x)} to {g.label(y)}")
    M = _closing_matrix(cs, x, y, paths)
    phi = g.pf_weights
    U = M.conj().T @ M / (phi[x] * phi[y])
    return HeckeOperator(g, x, y, paths, U)


def hecke_operators(cs: CellSystem) -> dict[tuple[int, int], HeckeOperator]:
    return {(x, y): hecke_operator(cs, x, y) for x, y in path_blocks(cs.graph)}


@dataclass(frozen=True)
class HeckeReport:
    selfadjoint: float
    quadratic: float

    def ok(self, tol_selfadjoint: float = 1e-12, tol_quadratic: float = 1e-9) -> bool:
        return self.selfadjoint <= tol_selfadjoint and self.quadratic <= tol_quadratic


def check_hecke(cs: CellSystem) -> HeckeReport:
    ops = hecke_operators(cs).values()
    return HeckeReport(max((u.selfadjoint_defect() for u in ops), default=0.0),
                       max((u.hecke_defect() for u in ops), default=0.0))


# ---------------------------------------------------------------------------
# connection

def cube_roots(n: int) -> tuple[complex, complex]:
    """(q^(2/3), q^(-1/3)) on the principal branch of q = exp(i pi/n)."""
    return cmath.exp(2j * math.pi / (3 * n)), cmath.exp(-1j * math.pi / (3 * n))


@dataclass
class Connection:
    """X restricted to each (x, y) block of length-2 paths."""

    graph: Graph
    blocks: dict[tuple[int, int], np.ndarray]
    paths: dict[tuple[int, int], tuple[Path, ...]]
    meta: dict = field(default_factory=dict, repr=False)

    def entry(self, rho1: int, rho2: int, rho3: int, rho4: int) -> complex:
        """X^{rho1,rho2}_{rho3,rho4}; zero unless both paths share endpoints."""
        g = self.graph
        key = (g.edges[rho1].source, g.edges[rho2].target)
        if key != (g.edges[rho3].source, g.edges[rho4].target):
            return 0j
        pos = self._positions[key]
        i, j = pos.get((rho1, rho2)), pos.get((rho3, rho4))
        if i is None or j is None:
            return 0j
        return complex(self.blocks[key][i, j])

    @cached_property
    def _positions(self) -> dict:
        return {k: {p: i for i, p in enumerate(ps)} for k, ps in self.paths.items()}


def connection(cs: CellSystem, zero_u: bool = False) -> Connection:
    """Assemble X; zero_u drops the U term, leaving only the delta part."""
    g = cs.graph
    a, b = cube_roots(g.coxeter_n)
    blocks, paths = {}, {}
    for (x, y), op in hecke_operators(cs).items():
        U = np.zeros_like(op.matrix) if zero_u else op.matrix
        blocks[(x, y)] = a * np.eye(op.dim) - b * U
        paths[(x, y)] = op.paths
    return Connection(g, blocks, paths)


def check_unitarity(conn: Connection) -> float:
    """max |sum_{rho3,rho4} X^{p}_{r} conj(X^{p'}_{r}) - delta_{p,p'}|."""
    worst = 0.0
    for X in conn.blocks.values():
        worst = max(worst, float(np.abs(X @ X.conj().T - np.eye(len(X))).max(initial=0.0)))
    return float(worst)


def _braid_generators(conn: Connection, x: int, y: int):
    """Matrices of X acting on edges (1,2) and on edges (2,3) of length-3 paths x -> y.

    T1[(e1,e2,e3), (f1,f2,e3)] = X^{e1,e2}_{f1,f2} and likewise for T2 on the
    last two edges. The Yang-Baxter equation of the connection is then the
    braid relation T1 T2 T1 = T2 T1 T2 on every block.
    """
    g = conn.graph
    paths3 = []
    for e1 in g.out_edges(x):
        for e2 in g.out_edges(g.edges[e1].target):
            for e3 in g.edges_between(g.edges[e2].target, y):
                paths3.append((e1, e2, e3))
    pos = {p: i for i, p in enumerate(paths3)}
    d = len(paths3)
    T1 = np.zeros((d, d), dtype=complex)
    T2 = np.zeros((d, d), dtype=complex)
    ppos = conn._positions
    for i, (e1, e2, e3) in enumerate(paths3):
        k1 = (x, g.edges[e2].target)
        blk = conn.blocks[k1]
        r = ppos[k1][(e1, e2)]
        for c, (f1, f2) in enumerate(conn.paths[k1]):
            T1[i, pos[(f1, f2, e3)]] = blk[r, c]
        k2 = (g.edges[e2].source, y)
        blk = conn.blocks[k2]
        r = ppos[k2][(e2, e3)]
        for c, (f2, f3) in enumerate(conn.paths[k2]):
            T2[i, pos[(e1, f2, f3)]] = blk[r, c]
    return paths3, T1, T2


def check_yang_baxter(conn: Connection) -> float:
    g = conn.graph
    worst = 0.0
    for x in range(g.n_vertices):
        for y in range(g.n_vertices):
            paths3, T1, T2 = _braid_generators(conn, x, y)
            if not paths3:
                continue
            lhs = T1 @ T2 @ T1
            rhs = T2 @ T1 @ T2
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return float(worst)


# ---------------------------------------------------------------------------
# sine-formula oracle for A(n)

_E = np.eye(3)


def _dot(u: np.ndarray, v: np.ndarray) -> float:
    # e_j . e_k = delta_jk - 1/3
    return float(u @ v - u.sum() * v.sum() / 3.0)


def _weight_vector(lam: tuple[int, int]) -> np.ndarray:
    # lambda = lambda1 e1 - lambda2 e3
    return np.array([lam[0], 0.0, -lam[1]])


def wenzl_weight(n: int, lam: tuple[int, int], j: int, l: int, k: int) -> float:
    """Sine-formula weight of the square lam -> lam+e_k -> lam+e_j+e_l.

    Equals the U^{(lam, lam+e_j+e_l)} entry between the path through lam+e_j and
    the path through lam+e_k (k in {j, l}); zero when j == l.
    """
    from .catalog import A_STEPS, a_vertices

    if not all(d in (1, 2, 3) for d in (j, l, k)):
        raise ValueError("directions are 1, 2, 3")
    vs = set(a_vertices(n))
    step = lambda v, d: (v[0] + A_STEPS[d - 1][0], v[1] + A_STEPS[d - 1][1])
    corners = [lam, step(lam, j), step(lam, k), step(step(lam, j), l)]
    if any(c not in vs for c in corners) or k not in (j, l):
        raise ValueError(f"square off the A({n}) lattice: {lam}, j={j}, l={l}, k={k}")
    if j == l:
        return 0.0
    diff = _E[j - 1] - _E[l - 1]
    base = _weight_vector((lam[0] + 1, lam[1] + 1))
    s = lambda v: math.sin(math.pi / n * _dot(diff, v))
    # the ratios are positive on the lattice; taking the root of their product
    # fixes the overall sign that the bare quotient leaves branch-dependent
    ratio = (s(base + _E[j - 1]) / s(base)) * (s(base + _E[k - 1]) / s(base))
    return math.sqrt(max(ratio, 0.0))


def wenzl_deviation(cs: CellSystem) -> float:
    """Largest |U entry - sine-formula weight| over every square of A(n)."""
    from .catalog import A_STEPS

    g = cs.graph
    n = g.coxeter_n
    step = lambda v, d: (v[0] + A_STEPS[d - 1][0], v[1] + A_STEPS[d - 1][1])
    worst = 0.0
    for (x, y), op in hecke_operators(cs).items():
        lam = g.label(x)
        dirs = {}
        for i, (e1, _) in enumerate(op.paths):
            mid = g.label(g.edges[e1].target)
            dirs[i] = next(d for d in (1, 2, 3) if step(lam, d) == mid)
        for r, jr in dirs.items():
            for c, kc in dirs.items():
                l = next(d for d in (1, 2, 3) if step(step(lam, jr), d) == g.label(y))
                w = wenzl_weight(n, lam, jr, l, kc)
                worst = max(worst, abs(op.matrix[r, c] - w))
    return float(worst)


__all__ = [
    "HeckeOperator", "HeckeReport", "Connection", "length2_paths", "path_blocks",
    "hecke_operator", "hecke_operators", "check_hecke", "cube_roots", "connection",
    "check_unitarity", "check_yang_baxter", "wenzl_weight", "wenzl_deviation",
]
