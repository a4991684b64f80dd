"""Directed multigraphs, triangles, frames, Perron-Frobenius data and Z3 orbifolds."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, NamedTuple, Sequence

import numpy as np

from .config import TOLERANCES
from .qnum import QContext, qint


class GraphError(ValueError):
    pass


class UnsupportedGraphError(GraphError):
    """Raised for catalog entries whose data is not determined."""


@dataclass(frozen=True)
class Vertex:
    id: int
    label: Hashable


@dataclass(frozen=True)
class Edge:
    id: int
    source: int
    target: int
    tag: str | None = None


class Triangle(NamedTuple):
    """Closed path of three edge ids, stored as its smallest rotation."""

    e1: int
    e2: int
    e3: int

    @classmethod
    def canonical(cls, e1: int, e2: int, e3: int) -> "Triangle":
        rots = [(e1, e2, e3), (e2, e3, e1), (e3, e1, e2)]
        return cls(*min(rots))


class TypeIFrame(NamedTuple):
    alpha: int
    alpha_prime: int


class TypeIIFrame(NamedTuple):
    a1: int  # a -> b
    a2: int  # c -> b
    a3: int  # c -> d
    a4: int  # a -> d


@dataclass
class Graph:
    name: str
    coxeter_n: int | None
    vertices: list[Vertex]
    edges: list[Edge]
    pf_weights: np.ndarray
    distinguished: int = 0
    meta: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._by_label = {v.label: v.id for v in self.vertices}
        if len(self._by_label) != len(self.vertices):
            raise GraphError("vertex labels must be unique")
        keys = {(e.source, e.target, e.tag) for e in self.edges}
        if len(keys) != len(self.edges):
            raise GraphError("(source, target, tag) must be unique")
        self._out = defaultdict(list)
        self._in = defaultdict(list)
        self._between = defaultdict(list)
        for e in self.edges:
            self._out[e.source].append(e.id)
            self._in[e.target].append(e.id)
            self._between[e.source, e.target].append(e.id)

    @classmethod
    def from_labels(cls, name: str, coxeter_n: int | None, labels: Sequence[Hashable],
                    edges: Sequence[tuple], pf: Sequence[float] | None = None,
                    distinguished: Hashable | None = None,
                    meta: dict | None = None) -> "Graph":
        """Build from vertex labels and (source label, target label[, tag]) triples.

        Edge ids follow sorted (source id, target id, tag) order.
        """
        idx = {lab: i for i, lab in enumerate(labels)}
        raw = []
        for item in edges:
            s, t = item[0], item[1]
            tag = item[2] if len(item) > 2 else None
            raw.append((idx[s], idx[t], tag))
        raw.sort(key=lambda x: (x[0], x[1], "" if x[2] is None else x[2]))
        es = [Edge(i, s, t, tag) for i, (s, t, tag) in enumerate(raw)]
        vs = [Vertex(i, lab) for i, lab in enumerate(labels)]
        d = 0 if distinguished is None else idx[distinguished]
        g = cls(name, coxeter_n, vs, es, np.zeros(len(vs)), d, dict(meta or {}))
        if pf is None:
            g.pf_weights = pf_data(g)[1]
        else:
            g.pf_weights = np.asarray(pf, dtype=float)
        return g

    # lookups
    def vid(self, label: Hashable) -> int:
        return self._by_label[label]

    def label(self, vid: int) -> Hashable:
        return self.vertices[vid].label

    def out_edges(self, v: int) -> list[int]:
        return self._out.get(v, [])

    def in_edges(self, v: int) -> list[int]:
        return self._in.get(v, [])

    def edges_between(self, s: int, t: int) -> list[int]:
        return self._between.get((s, t), [])

    def edge(self, s: Hashable, t: Hashable, tag: str | None = None) -> int:
        """Edge id from labels; tag may be omitted for a simple pair."""
        ids = self.edges_between(self.vid(s), self.vid(t))
        if tag is not None:
            ids = [e for e in ids if self.edges[e].tag == tag]
        if len(ids) != 1:
            raise GraphError(f"no unique edge {s!r}->{t!r} tag={tag!r}")
        return ids[0]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n_vertices, self.n_vertices))
        for e in self.edges:
            A[e.source, e.target] += 1
        return A

    def parallel_classes(self) -> list[list[int]]:
        """Edge ids grouped by ordered (source, target) pair."""
        return [ids for _, ids in sorted(self._between.items())]

    @property
    def is_simple(self) -> bool:
        return all(len(c) == 1 for c in self._between.values())

    def qctx(self) -> QContext:
        return QContext(n=self.coxeter_n)

    def q(self, m: int) -> float:
        return qint(self.qctx(), m)

    def triangle(self, *labels_or_edges, tags: Sequence[str | None] | None = None) -> Triangle:
        """Triangle from three vertex labels in path order (optional edge tags)."""
        labs = labels_or_edges
        tags = tags or (None, None, None)
        es = [self.edge(labs[i], labs[(i + 1) % 3], tags[i]) for i in range(3)]
        return Triangle.canonical(*es)

    def triangle_vertices(self, t: Triangle) -> tuple[int, int, int]:
        return tuple(self.edges[e].source for e in t)

    def describe_triangle(self, t: Triangle) -> str:
        parts = []
        for e in t:
            ed = self.edges[e]
            lab = _fmt_label(self.label(ed.source))
            parts.append(lab if ed.tag is None else f"{lab}[{ed.tag}]")
        return ",".join(parts)

    def __hash__(self):
        return id(self)


def _fmt_label(lab: Hashable) -> str:
    if isinstance(lab, tuple):
        return "(" + ",".join(_fmt_label(x) for x in lab) + ")"
    return str(lab)


def triangles(g: Graph) -> list[Triangle]:
    """Every closed path of length three, once per cyclic class, sorted."""
    found = set()
    for e1 in g.edges:
        for e2 in g.out_edges(e1.target):
            for e3 in g.out_edges(g.edges[e2].target):
                if g.edges[e3].target == e1.source:
                    found.add(Triangle.canonical(e1.id, e2, e3))
    return sorted(found)


def type_i_frames(g: Graph) -> list[TypeIFrame]:
    out = []
    for ids in g.parallel_classes():
        for a in ids:
            for b in ids:
                out.append(TypeIFrame(a, b))
    return out


def type_ii_frames(g: Graph) -> list[TypeIIFrame]:
    """All (a1: a->b, a2: c->b, a3: c->d, a4: a->d), degenerate ones included."""
    out = []
    for a in range(g.n_vertices):
        for a1 in g.out_edges(a):
            b = g.edges[a1].target
            for a4 in g.out_edges(a):
                d = g.edges[a4].target
                for a2 in g.in_edges(b):
                    c = g.edges[a2].source
                    for a3 in g.edges_between(c, d):
                        out.append(TypeIIFrame(a1, a2, a3, a4))
    return out


def pf_data(g: Graph, max_doublings: int = 200, tol: float = 1e-15) -> tuple[float, np.ndarray]:
    """Perron-Frobenius eigenvalue and eigenvector by power iteration.

    Iterates on A + I, since three-colourable graphs have period three and
    the plain adjacency matrix has several eigenvalues of maximal modulus.
    The iteration repeatedly squares the shifted matrix, so k steps apply
    (A + I)^(2^k). The vector is normalised to 1 at the distinguished vertex.
    """
    A = g.adjacency()
    if A.shape[0] == 0:
        raise GraphError("empty graph has no Perron-Frobenius data")
    M = A + np.eye(A.shape[0])
    M /= np.abs(M).max()
    v = np.ones(A.shape[0]) / A.shape[0]
    for _ in range(max_doublings):
        w = M @ v
        w /= w.sum()
        M = M @ M
        M /= np.abs(M).max()
        if np.abs(w - v).max() < tol:
            v = w
            break
        v = w
    else:
        raise GraphError(f"power iteration did not converge on {g.name}")
    if v[g.distinguished] <= 0:
        raise GraphError(f"{g.name} is not strongly connected")
    v = v / v[g.distinguished]
    lam = float((A @ v).sum() / v.sum())
    return lam, v


# ---------------------------------------------------------------------------
# Z3 orbifold


def _edge_map(g: Graph, rot: dict[int, int]) -> dict[int, int]:
    emap = {}
    for e in g.edges:
        cands = [f for f in g.edges_between(rot[e.source], rot[e.target])
                 if g.edges[f].tag == e.tag]
        if len(cands) != 1:
            raise GraphError("rotation is not a graph automorphism")
        emap[e.id] = cands[0]
    return emap


def z3_orbifold(
    g: Graph,
    rotation: Callable[[Hashable], Hashable] | dict,
    *,
    name: str | None = None,
    orbit_label: Callable[[Hashable], Hashable] | None = None,
    fixed_label: Callable[[Hashable, int], Hashable] | None = None,
    edge_tag: Callable[[Graph, list[int]], str | None] | None = None,
    distinguished: Hashable | None = None,
) -> Graph:
    """Z3 orbifold of g under an order-three vertex automorphism.

    Free orbits collapse to one vertex labelled by orbit_label(min label).
    Fixed vertices triplicate into copies labelled fixed_label(label, c),
    c = 1, 2, 3, each carrying a third of the weight. Edge orbits collapse:
    orbit -> fixed and fixed -> orbit give one edge per copy, fixed -> fixed
    gives the diagonal c -> c edges. Parallel quotient edges are tagged by
    edge_tag(parent graph, edge orbit).

    The result's meta records, per quotient vertex and edge, the parent
    orbit and copy index so cells can be lifted.
    """
    rot_fn = rotation.__getitem__ if isinstance(rotation, dict) else rotation
    rot = {}
    for v in g.vertices:
        img = rot_fn(v.label)
        if img not in g._by_label:
            raise GraphError(f"rotation image {img!r} is not a vertex")
        rot[v.id] = g.vid(img)
    if sorted(rot.values()) != list(range(g.n_vertices)):
        raise GraphError("rotation is not a bijection")
    if any(rot[rot[rot[v]]] != v for v in rot) or all(rot[v] == v for v in rot):
        raise GraphError("rotation does not have order three")
    emap = _edge_map(g, rot)
    orbit_label = orbit_label or (lambda lab: lab)
    fixed_label = fixed_label or (lambda lab, c: (lab, c))

    # vertex orbits, ordered by their smallest member id
    vorbit = {}
    orbits = []
    for v in range(g.n_vertices):
        if v in vorbit:
            continue
        orb = sorted({v, rot[v], rot[rot[v]]})
        for w in orb:
            vorbit[w] = len(orbits)
        orbits.append(orb)

    labels, vinfo = [], []
    copies: dict[int, list[Hashable]] = {}
    for k, orb in enumerate(orbits):
        if len(orb) == 1:
            lab = g.label(orb[0])
            copies[k] = [fixed_label(lab, c) for c in (1, 2, 3)]
            for c, cl in enumerate(copies[k], start=1):
                labels.append(cl)
                vinfo.append((orb, c))
        else:
            rep = min((g.label(w) for w in orb), key=_sort_key)
            copies[k] = [orbit_label(rep)]
            labels.append(copies[k][0])
            vinfo.append((orb, None))

    # edge orbits
    seen, eorbits = set(), []
    for e in g.edges:
        if e.id in seen:
            continue
        orb = sorted({e.id, emap[e.id], emap[emap[e.id]]})
        seen.update(orb)
        eorbits.append(orb)

    quotient = []  # (src label, tgt label, edge orbit)
    for orb in eorbits:
        e = g.edges[orb[0]]
        so, to = vorbit[e.source], vorbit[e.target]
        sf, tf = len(orbits[so]) == 1, len(orbits[to]) == 1
        if sf and tf:
            if len(orb) != 1:
                raise NotImplementedError("free edge orbit between fixed points")
            for c in range(3):
                quotient.append((copies[so][c], copies[to][c], orb))
        elif sf:
            for c in range(3):
                quotient.append((copies[so][c], copies[to][0], orb))
        elif tf:
            for c in range(3):
                quotient.append((copies[so][0], copies[to][c], orb))
        else:
            quotient.append((copies[so][0], copies[to][0], orb))

    groups = defaultdict(list)
    for item in quotient:
        groups[item[0], item[1]].append(item)
    edges, einfo = [], {}
    for (s, t), items in groups.items():
        for j, (_, _, orb) in enumerate(items):
            tag = None
            if len(items) > 1:
                tag = edge_tag(g, orb) if edge_tag else f"e{j + 1}"
            edges.append((s, t, tag))
            einfo[s, t, tag] = orb

    pf = []
    for orb, c in vinfo:
        w = g.pf_weights[orb[0]]
        pf.append(w / 3 if c is not None else w)
    pf = np.array(pf)
    out = Graph.from_labels(
        name or f"Z3({g.name})", g.coxeter_n, labels, edges, pf=pf,
        distinguished=distinguished if distinguished is not None else labels[0],
    )
    out.pf_weights = out.pf_weights / out.pf_weights[out.distinguished]
    out.meta["orbifold"] = {
        "parent": g,
        "rotation": rot,
        "vertex": {i: vinfo[i] for i in range(len(labels))},
        "edge": {e.id: einfo[out.label(e.source), out.label(e.target), e.tag]
                 for e in out.edges},
        "scale": float(pf[out.distinguished]) ** -1 if pf[out.distinguished] else 1.0,
    }
    return out


def _sort_key(lab):
    return (str(type(lab)), lab) if not isinstance(lab, tuple) else ("tuple", lab)


# ---------------------------------------------------------------------------
# serialisation


def _label_to_json(lab):
    if isinstance(lab, tuple):
        return [_label_to_json(x) for x in lab]
    return lab


def _label_from_json(obj):
    if isinstance(obj, list):
        return tuple(_label_from_json(x) for x in obj)
    return obj


def graph_to_dict(g: Graph) -> dict:
    return {
        "name": g.name,
        "coxeter_n": g.coxeter_n,
        "distinguished": g.distinguished,
        "vertices": [{"id": v.id, "label": _label_to_json(v.label)} for v in g.vertices],
        "edges": [{"id": e.id, "source": e.source, "target": e.target, "tag": e.tag}
                  for e in g.edges],
        "pf_weights": {str(v.id): float(g.pf_weights[v.id]).hex() for v in g.vertices},
    }


def graph_from_dict(d: dict) -> Graph:
    vs = [Vertex(v["id"], _label_from_json(v["label"])) for v in d["vertices"]]
    es = [Edge(e["id"], e["source"], e["target"], e["tag"]) for e in d["edges"]]
    pf = np.array([float.fromhex(d["pf_weights"][str(v.id)]) for v in vs])
    return Graph(d["name"], d["coxeter_n"], vs, es, pf, d.get("distinguished", 0))


def graph_to_json(g: Graph) -> str:
    return json.dumps(graph_to_dict(g), indent=2, ensure_ascii=False) + "\n"


def graph_from_json(text: str) -> Graph:
    return graph_from_dict(json.loads(text))


def check_pf(g: Graph, tol: float = TOLERANCES.residual) -> dict[str, float]:
    """Residuals of the two-sided eigen-equation and the eigenvalue match."""
    A = g.adjacency()
    lam3 = g.q(3)
    phi = g.pf_weights
    lam, vec = pf_data(g)
    return {
        "eigenvalue": abs(lam - lam3),
        "right": float(np.abs(A @ phi - lam3 * phi).max()),
        "left": float(np.abs(A.T @ phi - lam3 * phi).max()),
        "stored_vs_iterated": float(np.abs(vec - phi).max()),
    }
