"""Cell systems and the type I / type II frame axioms."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .graphs import Graph, Triangle, triangles, type_i_frames, type_ii_frames

VARIANTS = ("default", "conjugate", "plus", "minus")


@dataclass(frozen=True)
class FrameEquations:
    """Frame axioms compiled to monomial term lists.

    Type I term k contributes coef[k] * W[t1[k]] * conj(W[t2[k]]) to frame
    frame[k]; type II terms are W[t1] conj(W[t2]) W[t3] conj(W[t4]) times
    coef. Each frame residual is the term sum minus rhs.
    """

    n_tri: int
    i_frames: list
    i_frame: np.ndarray
    i_t: np.ndarray  # (k, 2)
    i_rhs: np.ndarray
    ii_frames: list
    ii_frame: np.ndarray
    ii_t: np.ndarray  # (k, 4)
    ii_coef: np.ndarray
    ii_rhs: np.ndarray

    @property
    def n_i(self) -> int:
        return len(self.i_frames)

    @property
    def n_ii(self) -> int:
        return len(self.ii_frames)

    def type_i_terms(self, W: np.ndarray) -> np.ndarray:
        return W[self.i_t[:, 0]] * np.conj(W[self.i_t[:, 1]])

    def type_ii_terms(self, W: np.ndarray) -> np.ndarray:
        t = self.ii_t
        return self.ii_coef * W[t[:, 0]] * np.conj(W[t[:, 1]]) * W[t[:, 2]] * np.conj(W[t[:, 3]])

    def residuals(self, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        r1 = _csum(self.i_frame, self.type_i_terms(W), self.n_i) - self.i_rhs
        r2 = _csum(self.ii_frame, self.type_ii_terms(W), self.n_ii) - self.ii_rhs
        return r1, r2


def _csum(idx: np.ndarray, vals: np.ndarray, n: int) -> np.ndarray:
    return (np.bincount(idx, vals.real, minlength=n)
            + 1j * np.bincount(idx, vals.imag, minlength=n))


_EQ_CACHE: dict[int, tuple[Graph, FrameEquations]] = {}


def frame_equations(g: Graph) -> FrameEquations:
    hit = _EQ_CACHE.get(id(g))
    if hit is not None and hit[0] is g:
        return hit[1]
    eq = _compile(g)
    _EQ_CACHE[id(g)] = (g, eq)
    return eq


def _compile(g: Graph) -> FrameEquations:
    tris = triangles(g)
    index = {t: k for k, t in enumerate(tris)}
    phi = g.pf_weights
    q2 = g.q(2)
    E = g.edges

    def tri(a, b, c):
        return index[Triangle.canonical(a, b, c)]

    i_frames = type_i_frames(g)
    fi, ti, rhs1 = [], [], []
    for f, (al, alp) in enumerate(i_frames):
        a, b = E[al].source, E[al].target
        for beta in g.out_edges(b):
            c = E[beta].target
            for gam in g.edges_between(c, a):
                fi.append(f)
                ti.append((tri(al, beta, gam), tri(alp, beta, gam)))
        rhs1.append(q2 * phi[a] * phi[b] if al == alp else 0.0)

    ii_frames = type_ii_frames(g)
    fii, tii, coef, rhs2 = [], [], [], []
    for f, (a1, a2, a3, a4) in enumerate(ii_frames):
        a, b = E[a1].source, E[a1].target
        c, d = E[a3].source, E[a3].target
        for beta in g.out_edges(b):
            x = E[beta].target
            for delta in g.edges_between(d, x):
                for g1 in g.edges_between(x, a):
                    for g2 in g.edges_between(x, c):
                        fii.append(f)
                        tii.append((tri(a1, beta, g1), tri(a2, beta, g2),
                                    tri(a3, delta, g2), tri(a4, delta, g1)))
                        coef.append(1.0 / phi[x])
        r = 0.0
        if a1 == a2 and a3 == a4:
            r += phi[a] * phi[b] * phi[d]
        if a1 == a4 and a2 == a3:
            r += phi[a] * phi[b] * phi[c]
        rhs2.append(r)

    return FrameEquations(
        n_tri=len(tris),
        i_frames=i_frames, i_frame=np.array(fi, dtype=np.intp),
        i_t=np.array(ti, dtype=np.intp).reshape(-1, 2), i_rhs=np.array(rhs1, dtype=float),
        ii_frames=ii_frames, ii_frame=np.array(fii, dtype=np.intp),
        ii_t=np.array(tii, dtype=np.intp).reshape(-1, 4), ii_coef=np.array(coef, dtype=float),
        ii_rhs=np.array(rhs2, dtype=float),
    )


@dataclass
class CellSystem:
    """Complex cell values, one per triangle of the graph, in triangles(graph) order."""

    graph: Graph
    W: np.ndarray
    variant: str = "default"
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=complex)
        if self.W.shape != (len(self.triangles),):
            raise ValueError(f"expected {len(self.triangles)} cells, got {self.W.shape}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    @cached_property
    def triangles(self) -> list[Triangle]:
        return triangles(self.graph)

    @cached_property
    def index(self) -> dict[Triangle, int]:
        return {t: k for k, t in enumerate(self.triangles)}

    @classmethod
    def from_mapping(cls, g: Graph, cells: Mapping[Triangle, complex], variant: str = "default",
                     strict: bool = True) -> "CellSystem":
        tris = triangles(g)
        missing = [t for t in tris if t not in cells]
        if strict and missing:
            names = ", ".join(g.describe_triangle(t) for t in missing[:5])
            raise ValueError(f"cells missing for {len(missing)} triangles: {names}")
        extra = set(cells) - set(tris)
        if extra:
            raise ValueError(f"{len(extra)} keys are not triangles of {g.name}")
        W = np.array([cells.get(t, 0.0) for t in tris], dtype=complex)
        return cls(g, W, variant)

    def __getitem__(self, t: Triangle) -> complex:
        return self.W[self.index[Triangle.canonical(*t)]]

    def items(self) -> Iterable[tuple[Triangle, complex]]:
        return zip(self.triangles, self.W)

    def conj(self) -> "CellSystem":
        flip = {"plus": "minus", "minus": "plus", "default": "conjugate", "conjugate": "default"}
        return replace(self, W=np.conj(self.W), variant=flip[self.variant], meta={})

    def with_cells(self, W: np.ndarray, variant: str | None = None) -> "CellSystem":
        return replace(self, W=np.asarray(W, dtype=complex), variant=variant or self.variant, meta={})

    @property
    def equations(self) -> FrameEquations:
        return frame_equations(self.graph)

    def residuals(self) -> tuple[np.ndarray, np.ndarray]:
        return self.equations.residuals(self.W)


def verify_type_I(cs: CellSystem) -> float:
    r1, _ = cs.residuals()
    return float(np.abs(r1).max(initial=0.0))


def verify_type_II(cs: CellSystem) -> float:
    _, r2 = cs.residuals()
    return float(np.abs(r2).max(initial=0.0))


@dataclass(frozen=True)
class VerifyReport:
    type_i: float
    type_ii: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.type_i <= self.tol and self.type_ii <= self.tol


def verify(cs: CellSystem, tol: float = 1e-9) -> VerifyReport:
    r1, r2 = cs.residuals()
    return VerifyReport(float(np.abs(r1).max(initial=0.0)), float(np.abs(r2).max(initial=0.0)), tol)


# ---------------------------------------------------------------------------
# gauge transformations


@dataclass
class GaugeFamily:
    """One unitary per ordered vertex pair with edges, indexed by edges_between order."""

    graph: Graph
    blocks: dict[tuple[int, int], np.ndarray]

    @classmethod
    def identity(cls, g: Graph) -> "GaugeFamily":
        return cls(g, {k: np.eye(len(v), dtype=complex) for k, v in g._between.items()})

    @classmethod
    def from_edge_phases(cls, g: Graph, theta: np.ndarray) -> "GaugeFamily":
        """Scalar phases exp(i theta_e) on a graph without parallel edges."""
        if not g.is_simple:
            raise ValueError("edge phases define a gauge only on simple graphs")
        return cls(g, {(g.edges[e].source, g.edges[e].target): np.array([[np.exp(1j * theta[e])]])
                       for e in range(g.n_edges)})

    @classmethod
    def random(cls, g: Graph, rng: np.random.Generator) -> "GaugeFamily":
        from scipy.stats import unitary_group

        blocks = {}
        for key, ids in sorted(g._between.items()):
            m = len(ids)
            if m == 1:
                blocks[key] = np.array([[np.exp(2j * np.pi * rng.random())]])
            else:
                blocks[key] = unitary_group.rvs(m, random_state=rng)
        return cls(g, blocks)

    def unitarity_defect(self) -> float:
        return max((float(np.abs(u @ u.conj().T - np.eye(len(u))).max()) for u in self.blocks.values()),
                   default=0.0)

    def edge_matrix(self) -> np.ndarray:
        """Block-diagonal unitary on the edge space."""
        U = np.zeros((self.graph.n_edges, self.graph.n_edges), dtype=complex)
        for key, ids in self.graph._between.items():
            U[np.ix_(ids, ids)] = self.blocks[key]
        return U


def gauge_transform(cs: CellSystem, gauge: GaugeFamily, tol: float = 1e-9) -> CellSystem:
    """W'(e1,e2,e3) = sum u(e1,f1) u(e2,f2) u(e3,f3) W(f1,f2,f3) over parallel f."""
    if gauge.unitarity_defect() > tol:
        raise ValueError("gauge family is not unitary")
    g = cs.graph
    U = gauge.edge_matrix()
    cls = {}
    for ids in g._between.values():
        for e in ids:
            cls[e] = ids
    out = np.zeros_like(cs.W)
    idx = cs.index
    for k, (e1, e2, e3) in enumerate(cs.triangles):
        acc = 0j
        for f1 in cls[e1]:
            for f2 in cls[e2]:
                for f3 in cls[e3]:
                    coef = U[e1, f1] * U[e2, f2] * U[e3, f3]
                    if coef != 0:
                        acc += coef * cs.W[idx[Triangle.canonical(f1, f2, f3)]]
        out[k] = acc
    return cs.with_cells(out)


def relabel(cs: CellSystem, target: Graph, vertex_map: Mapping, edge_map: Mapping[int, int]) -> CellSystem:
    """Transport cells along a graph isomorphism given on edge ids."""
    cells = {}
    for t, w in cs.items():
        cells[Triangle.canonical(*(edge_map[e] for e in t))] = w
    return CellSystem.from_mapping(target, cells, cs.variant)


# ---------------------------------------------------------------------------
# serialisation


def cells_to_dict(cs: CellSystem) -> dict:
    g = cs.graph
    return {
        "graph": {"name": g.name, "family": g.meta.get("family"), "n": g.coxeter_n},
        "variant": cs.variant,
        "cells": [{"triangle": list(t), "re": float(w.real).hex(), "im": float(w.imag).hex()}
                  for t, w in cs.items()],
    }


def cells_to_json(cs: CellSystem) -> str:
    return json.dumps(cells_to_dict(cs), indent=2, ensure_ascii=False) + "\n"


def cells_from_dict(d: dict, g: Graph | None = None) -> CellSystem:
    if g is None:
        from .catalog import build_graph

        meta = d["graph"]
        g = build_graph(meta["family"], meta["n"])
    cells = {Triangle(*c["triangle"]): complex(float.fromhex(c["re"]), float.fromhex(c["im"]))
             for c in d["cells"]}
    return CellSystem.from_mapping(g, cells, d["variant"])


def cells_from_json(text: str, g: Graph | None = None) -> CellSystem:
    return cells_from_dict(json.loads(text), g)
