"""Catalog of the SU(3) ADE graphs with closed-form Perron-Frobenius weights."""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, GraphError, UnsupportedGraphError, z3_orbifold
from .qnum import QContext, qint

FAMILIES = ("A", "D", "Astar", "Dstar", "E8", "E8star", "E1_12", "E2_12", "E5_12", "E24")
FIXED_N = {"E8": 8, "E8star": 8, "E1_12": 12, "E2_12": 12, "E5_12": 12, "E24": 24}
MIN_N = {"A": 4, "D": 5, "Astar": 5, "Dstar": 6}
UNSUPPORTED_MESSAGE = "not determined in source paper"

_ALIASES = {
    "a": "A", "d": "D", "astar": "Astar", "a*": "Astar", "dstar": "Dstar", "d*": "Dstar",
    "e8": "E8", "e8star": "E8star", "e8*": "E8star",
    "e1": "E1_12", "e1_12": "E1_12", "e2": "E2_12", "e2_12": "E2_12",
    "e5": "E5_12", "e5_12": "E5_12", "e24": "E24",
    "e4": "E4_12", "e4_12": "E4_12",
}


@dataclass(frozen=True)
class GraphSpec:
    family: str
    n: int

    @property
    def key(self) -> str:
        return self.family if self.family in FIXED_N else f"{self.family}:{self.n}"


def parse_selector(text: str) -> GraphSpec:
    """Parse FAMILY[:n] (e.g. A:6, Astar:7, D:9, E1:12, E24)."""
    m = re.fullmatch(r"\s*([A-Za-z0-9_*]+?)(?:[:(](\d+)\)?)?\s*", text)
    if not m:
        raise GraphError(f"cannot parse graph selector {text!r}")
    fam = _ALIASES.get(m.group(1).lower())
    if fam is None:
        raise GraphError(f"unknown family {m.group(1)!r}")
    n = int(m.group(2)) if m.group(2) else None
    if fam == "E4_12":
        raise UnsupportedGraphError(f"E4(12): {UNSUPPORTED_MESSAGE}")
    if fam in FIXED_N:
        if n is not None and n != FIXED_N[fam]:
            raise GraphError(f"{fam} has Coxeter number {FIXED_N[fam]}, got {n}")
        return GraphSpec(fam, FIXED_N[fam])
    if n is None:
        raise GraphError(f"{fam} needs a Coxeter number, e.g. {fam}:{MIN_N[fam] + 1}")
    return GraphSpec(fam, n)


def build_graph(family: str, n: int | None = None) -> Graph:
    if family == "E4_12":
        raise UnsupportedGraphError(f"E4(12): {UNSUPPORTED_MESSAGE}")
    if family not in FAMILIES:
        raise GraphError(f"unknown family {family!r}")
    if family in FIXED_N:
        if n is not None and n != FIXED_N[family]:
            raise GraphError(f"{family} has Coxeter number {FIXED_N[family]}")
        return _BUILDERS[family]()
    if n is None or n < MIN_N[family]:
        raise GraphError(f"{family} needs n >= {MIN_N[family]}, got {n}")
    return _BUILDERS[family](n)


def catalog(max_n: int = 12) -> list[GraphSpec]:
    """Every catalog entry up to the given Coxeter number for parametric families."""
    out = []
    for fam in ("A", "D", "Astar", "Dstar"):
        out += [GraphSpec(fam, n) for n in range(MIN_N[fam], max_n + 1)]
    out += [GraphSpec(f, FIXED_N[f]) for f in ("E8", "E8star", "E1_12", "E2_12", "E5_12", "E24")]
    return out


# ---------------------------------------------------------------------------
# A(n) and D(n)

def a_vertices(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n - 2) for b in range(n - 2 - a)]


A_STEPS = ((1, 0), (-1, 1), (0, -1))


def build_A(n: int) -> Graph:
    vs = a_vertices(n)
    vset = set(vs)
    edges = []
    for (a, b) in vs:
        for da, db in A_STEPS:
            t = (a + da, b + db)
            if t in vset:
                edges.append(((a, b), t))
    Q = QContext(n=n)
    pf = [qint(Q, a + 1) * qint(Q, b + 1) * qint(Q, a + b + 2) / qint(Q, 2) for a, b in vs]
    return Graph.from_labels(f"A({n})", n, vs, edges, pf=pf, distinguished=(0, 0),
                             meta={"family": "A", "n": n})


def a_rotation(n: int):
    return lambda lab: (n - 3 - lab[0] - lab[1], lab[0])


def build_D(n: int) -> Graph:
    g = build_A(n)
    k = (n - 3) // 3

    def tag(parent: Graph, orb: list[int]) -> str:
        labs = {(parent.label(parent.edges[e].source), parent.label(parent.edges[e].target))
                for e in orb}
        if ((k, k - 1), (k - 1, k)) in labs:
            return "gamma"
        if ((k, k - 1), (k + 1, k - 1)) in labs:
            return "gamma'"
        return f"e{min(orb)}"

    out = z3_orbifold(g, a_rotation(n), name=f"D({n})", edge_tag=tag, distinguished=(0, 0))
    out.meta.update(family="D", n=n)
    return out


# ---------------------------------------------------------------------------
# A(n)* and D(n)*

def astar_size(n: int) -> int:
    return (n - 1) // 2 if n % 2 else n // 2 - 1


def astar_edges(n: int) -> list[tuple[int, int]]:
    m = astar_size(n)
    first_loop = 2 if n % 2 else 1
    edges = [(i, i) for i in range(first_loop, m + 1)]
    for i in range(1, m):
        edges += [(i, i + 1), (i + 1, i)]
    return edges


def astar_pf(n: int) -> list[float]:
    Q = QContext(n=n)
    m = astar_size(n)
    if n % 2:
        return [qint(Q, 2 * i - 1) for i in range(1, m + 1)]
    return [qint(Q, 2 * i) / qint(Q, 2) for i in range(1, m + 1)]


def build_Astar(n: int) -> Graph:
    m = astar_size(n)
    return Graph.from_labels(f"A({n})*", n, list(range(1, m + 1)), astar_edges(n),
                             pf=astar_pf(n), distinguished=1,
                             meta={"family": "Astar", "n": n})


DSTAR_COLOURS = ("i", "j", "k")


def dstar_label(colour: str, p: int) -> str:
    return f"{colour}_{p}"


def build_Dstar(n: int) -> Graph:
    m = astar_size(n)
    labels = [dstar_label(c, p) for c in DSTAR_COLOURS for p in range(1, m + 1)]
    nxt = {"i": "j", "j": "k", "k": "i"}
    edges = [(dstar_label(c, p), dstar_label(nxt[c], q))
             for p, q in astar_edges(n) for c in DSTAR_COLOURS]
    pf = astar_pf(n) * 3
    return Graph.from_labels(f"D({n})*", n, labels, edges, pf=pf,
                             distinguished=dstar_label("i", 1),
                             meta={"family": "Dstar", "n": n})


# ---------------------------------------------------------------------------
# exceptional graphs

def _l(prefix: str, l: int, mod: int = 6) -> str:
    return f"{prefix}_{(l - 1) % mod + 1}"


def build_E8() -> Graph:
    labels = [f"i_{l}" for l in range(1, 7)] + [f"j_{l}" for l in range(1, 7)]
    edges = []
    for l in range(1, 7):
        edges += [(_l("i", l), _l("j", l)), (_l("j", l), _l("j", l - 1)),
                  (_l("j", l), _l("j", l + 2)), (_l("j", l - 1), _l("i", l))]
    Q = QContext(n=8)
    pf = [1.0] * 6 + [qint(Q, 3)] * 6
    return Graph.from_labels("E(8)", 8, labels, edges, pf=pf, distinguished="i_1",
                             meta={"family": "E8", "n": 8})


def build_E8star() -> Graph:
    edges = [(1, 2), (2, 3), (3, 1), (2, 4), (4, 3), (2, 2), (3, 3), (3, 2)]
    q3 = qint(QContext(n=8), 3)
    return Graph.from_labels("E(8)*", 8, [1, 2, 3, 4], edges, pf=[1.0, q3, q3, 1.0],
                             distinguished=1, meta={"family": "E8star", "n": 8})


def e2_labels() -> list[str]:
    return ["i", "j", "k"] + [f"{c}_{l}" for c in "pqr" for l in (1, 2, 3)]


def build_E2() -> Graph:
    L = lambda c, l: _l(c, l, 3)
    edges = [("i", "j"), ("j", "k"), ("k", "i")]
    for l in (1, 2, 3):
        edges += [
            (L("p", l), "j"), (L("p", l), L("q", l)), (L("p", l), L("q", l - 1)),
            ("j", L("r", l)), (L("q", l), "k"), (L("q", l), L("r", l + 1)),
            ("k", L("p", l)), (L("r", l), L("p", l)), (L("r", l), L("p", l - 1)),
        ]
    Q = QContext(n=12)
    q = lambda m: qint(Q, m)
    pf = [1.0, q(3), q(3)] + [q(2) ** 3 / q(4)] * 3 + [q(2) * q(3) / q(4)] * 6
    return Graph.from_labels("E2(12)", 12, e2_labels(), edges, pf=pf, distinguished="i",
                             meta={"family": "E2_12", "n": 12})


def e2_rotation(lab: str) -> str:
    if "_" not in lab:
        return lab
    c, l = lab.split("_")
    return _l(c, int(l) + 1, 3)


E1_TAGS = {
    ("r_1", "p_1"): "alpha", ("r_2", "p_1"): "alpha'",
    ("p_1", "q_1"): "beta", ("p_1", "q_3"): "beta'",
}


def build_E1() -> Graph:
    parent = build_E2()

    def tag(g: Graph, orb: list[int]) -> str:
        for e in orb:
            key = (g.label(g.edges[e].source), g.label(g.edges[e].target))
            if key in E1_TAGS:
                return E1_TAGS[key]
        raise GraphError("unexpected parallel edge orbit")

    out = z3_orbifold(parent, e2_rotation, name="E1(12)",
                      orbit_label=lambda lab: lab.split("_")[0],
                      fixed_label=lambda lab, c: f"{lab}_{c}",
                      edge_tag=tag, distinguished="i_1")
    Q = QContext(n=12)
    q = lambda m: qint(Q, m)
    closed = {"i": 1.0, "j": q(3), "k": q(3), "p": q(2) * q(4), "q": q(3) * q(4) / q(2),
              "r": q(3) * q(4) / q(2)}
    out.pf_weights = np.array([closed[v.label.split("_")[0]] for v in out.vertices])
    out.meta.update(family="E1_12", n=12)
    return out


E5_TRIANGLES = [
    (1, 6, 12), (4, 10, 15), (5, 9, 16), (1, 6, 13), (1, 7, 12), (1, 7, 13), (3, 7, 14),
    (3, 8, 13), (3, 8, 17), (3, 11, 14), (2, 7, 15), (2, 9, 13), (4, 7, 14), (5, 8, 13),
    (1, 8, 14), (1, 7, 14), (1, 8, 13), (2, 6, 12), (2, 6, 13), (2, 7, 12), (2, 7, 13),
    (3, 7, 13), (3, 8, 14), (4, 7, 15), (5, 9, 13),
]

E24_TRIANGLES = [
    (1, 9, 17), (8, 16, 24), (2, 9, 17), (7, 16, 24), (2, 9, 18), (2, 10, 17), (7, 15, 24),
    (7, 16, 23), (2, 10, 19), (2, 11, 18), (7, 14, 23), (7, 15, 22), (2, 11, 19),
    (7, 14, 22), (3, 10, 19), (3, 14, 23), (6, 11, 18), (6, 15, 22), (4, 11, 19),
    (4, 14, 22), (5, 11, 19), (5, 14, 22), (4, 12, 19), (4, 14, 21), (5, 11, 20),
    (5, 13, 22), (3, 12, 19), (3, 14, 21), (6, 11, 20), (6, 13, 22), (3, 14, 19),
    (6, 11, 22), (4, 14, 19), (5, 11, 22), (5, 14, 19), (4, 11, 22), (3, 12, 21),
    (6, 13, 20), (4, 12, 21), (5, 13, 20),
]


def _edges_from_triangles(tris) -> list[tuple[int, int]]:
    es = set()
    for a, b, c in tris:
        es |= {(a, b), (b, c), (c, a)}
    return sorted(es)


def build_E5() -> Graph:
    Q = QContext(n=12)
    q = lambda m: qint(Q, m)
    w = {1: q(3) * q(6) / q(2), 6: q(2) ** 2, 7: q(2) * q(4), 10: 1.0, 11: q(4) / q(2)}
    for v in (2, 3, 8, 14):
        w[v] = q(3) * q(4) / q(2)
    for v in (4, 5, 9, 15):
        w[v] = q(3)
    w[12], w[13], w[16], w[17] = w[6], w[7], w[10], w[11]
    return Graph.from_labels("E5(12)", 12, list(range(1, 18)), _edges_from_triangles(E5_TRIANGLES),
                             pf=[w[v] for v in range(1, 18)], distinguished=10,
                             meta={"family": "E5_12", "n": 12})


def build_E24() -> Graph:
    Q = QContext(n=24)
    q = lambda m: qint(Q, m)
    groups = [
        ((1, 8), 1.0), ((2, 7), q(2) * q(4)), ((3, 6), q(4) * q(5) / q(2)),
        ((4, 5), q(4) * q(7) / q(2)), ((9, 16, 17, 24), q(3)),
        ((10, 15, 18, 23), q(3) * q(4) / q(2)), ((11, 14, 19, 22), q(3) * q(5)),
        ((12, 13, 20, 21), q(9)),
    ]
    w = {v: val for vs, val in groups for v in vs}
    return Graph.from_labels("E(24)", 24, list(range(1, 25)), _edges_from_triangles(E24_TRIANGLES),
                             pf=[w[v] for v in range(1, 25)], distinguished=1,
                             meta={"family": "E24", "n": 24})


_BUILDERS = {
    "A": build_A, "D": build_D, "Astar": build_Astar, "Dstar": build_Dstar,
    "E8": build_E8, "E8star": build_E8star, "E1_12": build_E1, "E2_12": build_E2,
    "E5_12": build_E5, "E24": build_E24,
}
