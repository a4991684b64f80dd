"""Printed Hecke matrices as symbolic quantum-number expressions.

An expression is a Python expression in which [m] denotes the quantum integer
[m]_q of the graph. Also available: sqrt, conj, eps(l), I (imaginary unit) and
the per-fixture parameters. Rows are keyed by the intermediate vertex of the
length-2 path plus the tags of any parallel edges it uses; "*" in a lower
triangle means the conjugate of the mirrored entry. Rows naming vertices or
paths absent from a small graph are dropped before evaluation.

Printed layout: a printed block [U]_{a,b} is compared with the computed
operator at (path via b, path via a), i.e. with the transpose of
hecke_operator(...).matrix. Since U is self-adjoint this is the entrywise
conjugate; it only matters for blocks with complex entries. Where a printed
entry is contradicted by the algebra (U^2 = [2]U, trace [2] on rank-one blocks)
the fixture stores the corrected expression and keeps the printed text in
`printed`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator

import numpy as np

from .cells import CellSystem
from .closed_forms import eps
from .graphs import Graph
from .hecke import HeckeOperator, hecke_operator, length2_paths


@dataclass(frozen=True)
class Row:
    label: Hashable
    tags: tuple[str, ...] = ()


def R(label: Hashable, *tags: str) -> Row:
    return Row(label, tags)


@dataclass(frozen=True)
class Fixture:
    x: Hashable
    y: Hashable
    rows: tuple[Row, ...] | None  # None: the whole operator, which must be 1x1
    entries: tuple[tuple[str, ...], ...]
    params: dict = field(default_factory=dict)
    printed: dict = field(default_factory=dict)  # (r, c) -> printed text, for corrected entries
    name: str = ""
    conjugate: bool = False  # printed as equal to another block, holds only after conj


def _matrix(*rows: str) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(c.strip() for c in r.split(";")) for r in rows)


_BRACKET = re.compile(r"\[([^\[\]]+)\]")


def _compile_expr(expr: str) -> str:
    return _BRACKET.sub(r"Q(\1)", expr)


def _rsqrt(x):
    if isinstance(x, complex) or x < 0:
        if abs(complex(x).imag) > 1e-12 or complex(x).real < -1e-12:
            raise ValueError(f"sqrt of {x}")
        x = max(complex(x).real, 0.0)
    return math.sqrt(x)


def evaluate(expr: str, g: Graph, params: dict | None = None) -> complex:
    env = {"Q": g.q, "sqrt": _rsqrt, "conj": lambda z: complex(z).conjugate(), "eps": eps,
           "I": 1j, "__builtins__": {}}
    env.update(params or {})
    return complex(eval(_compile_expr(expr), env))


# ---------------------------------------------------------------------------
# resolving rows against computed operators

def _resolver(g: Graph) -> Callable[[Hashable], int | None]:
    if g.meta.get("family") == "D":
        return _d_resolver(g)
    return g._by_label.get


def _d_resolver(g: Graph) -> Callable[[Hashable], int | None]:
    """D(n) vertices are addressed by A(n) labels; fixed copies as ((k,k), c)."""
    orb = g.meta["orbifold"]
    parent: Graph = orb["parent"]
    table = {}
    for qid, (ids, copy) in orb["vertex"].items():
        for pid in ids:
            lab = parent.label(pid)
            table[lab if copy is None else (lab, copy)] = qid

    def resolve(label):
        return table.get(label)

    return resolve


def _row_index(op: HeckeOperator, g: Graph, row: Row, vertex) -> int | None:
    mid = vertex(row.label)
    if mid is None:
        return None
    hits = [k for k, (e1, e2) in enumerate(op.paths)
            if g.edges[e1].target == mid
            and all(t in (g.edges[e1].tag, g.edges[e2].tag) for t in row.tags)]
    if len(hits) > 1:
        raise ValueError(f"row {row} is ambiguous in U^({g.label(op.x)},{g.label(op.y)})")
    return hits[0] if hits else None


@dataclass(frozen=True)
class FixtureResult:
    fixture: Fixture
    deviation: float  # against the corrected expressions, printed layout
    deviation_direct: float  # same, without the layout transpose
    printed_deviation: float  # against the printed text
    size: int


@dataclass(frozen=True)
class FixtureReport:
    results: tuple[FixtureResult, ...]

    @property
    def max_deviation(self) -> float:
        return max((r.deviation for r in self.results), default=0.0)

    @property
    def n_checked(self) -> int:
        return len(self.results)

    @property
    def errata(self) -> list[FixtureResult]:
        return [r for r in self.results if r.fixture.printed]

    def worst(self, k: int = 5) -> list[FixtureResult]:
        return sorted(self.results, key=lambda r: -r.deviation)[:k]


def compare(cs: CellSystem, fx: Fixture, vertex=None) -> FixtureResult | None:
    """Deviation of the computed operator from one fixture, None if not on this graph."""
    g = cs.graph
    vertex = vertex or _resolver(g)
    x, y = vertex(fx.x), vertex(fx.y)
    if x is None or y is None or not length2_paths(g, x, y):
        return None
    op = hecke_operator(cs, x, y)
    if fx.rows is None:
        if op.dim != 1:
            raise ValueError(f"fixture {fx.name} expects a 1x1 operator, got {op.dim}")
        keep, idx = [0], [0]
    else:
        keep, idx = [], []
        for r, row in enumerate(fx.rows):
            k = _row_index(op, g, row, vertex)
            if k is not None:
                keep.append(r)
                idx.append(k)
    if not keep:
        return None
    m = len(keep)
    F = np.zeros((m, m), dtype=complex)
    P = np.zeros((m, m), dtype=complex)
    for a, r in enumerate(keep):
        for b, c in enumerate(keep):
            if fx.entries[r][c] == "*":
                continue
            F[a, b] = evaluate(fx.entries[r][c], g, fx.params)
            P[a, b] = evaluate(fx.printed[(r, c)], g, fx.params) if (r, c) in fx.printed else F[a, b]
    for a, r in enumerate(keep):
        for b, c in enumerate(keep):
            if fx.entries[r][c] == "*":
                F[a, b] = np.conj(F[b, a])
                P[a, b] = np.conj(P[b, a])
    U = op.matrix[np.ix_(idx, idx)]
    V = U if fx.conjugate else U.T
    return FixtureResult(fx, float(np.abs(V - F).max()), float(np.abs(V.T - F).max()),
                         float(np.abs(V - P).max()), m)


def fixture_check(cs: CellSystem) -> FixtureReport:
    g = cs.graph
    family = g.meta.get("family")
    builder = _BUILDERS.get(family)
    if builder is None:
        raise KeyError(f"no stored fixtures for family {family!r}")
    fixtures = list(builder(g, cs.variant))
    if not fixtures:
        raise KeyError(f"no stored fixtures for {g.name} ({cs.variant})")
    vertex = _resolver(g)
    out = []
    for fx in fixtures:
        res = compare(cs, fx, vertex)
        if res is not None:
            out.append(res)
    return FixtureReport(tuple(out))


def has_fixtures(family: str, n: int | None, variant: str) -> bool:
    if family == "D":
        return n is not None and n % 3 == 0 and variant == "default"
    if family in ("Astar", "Dstar"):
        return variant in ("default", "plus")
    if family in ("E1_12", "E2_12"):
        return variant == "plus"
    return family in _BUILDERS


# ---------------------------------------------------------------------------
# A(n)

def _fixtures_A(g: Graph, variant: str) -> Iterator[Fixture]:
    for lam in [v.label for v in g.vertices]:
        l1, l2 = lam
        p = {"l1": l1, "l2": l2}
        yield Fixture(lam, (l1, l2 + 1), (R((l1 + 1, l2)), R((l1 - 1, l2 + 1))), _matrix(
            "[l1+2]/[l1+1]; sqrt([l1]*[l1+2])/[l1+1]",
            "*; [l1]/[l1+1]"), p, name=f"A U^({lam},(l1,l2+1))")
        yield Fixture(lam, (l1 - 1, l2), (R((l1 - 1, l2 + 1)), R((l1, l2 - 1))), _matrix(
            "[l2+2]/[l2+1]; sqrt([l2]*[l2+2])/[l2+1]",
            "*; [l2]/[l2+1]"), p, name=f"A U^({lam},(l1-1,l2))")
        yield Fixture(lam, (l1 + 1, l2 - 1), (R((l1 + 1, l2)), R((l1, l2 - 1))), _matrix(
            "[l1+l2+3]/[l1+l2+2]; sqrt([l1+l2+1]*[l1+l2+3])/[l1+l2+2]",
            "*; [l1+l2+1]/[l1+l2+2]"), p, name=f"A U^({lam},(l1+1,l2-1))")


# ---------------------------------------------------------------------------
# D(3k+3), rows in A(n) labels

def _fixtures_D(g: Graph, variant: str) -> Iterator[Fixture]:
    n = g.coxeter_n
    if n % 3 or variant != "default":
        return
    k = (n - 3) // 3
    p = {"k": k, "E": eps(2) * g.q(k) + np.conj(eps(2)) * g.q(k + 2),
         "a": g.q(k + 1) / (3 * g.q(k) * g.q(k + 2)),
         "b": math.sqrt(g.q(k + 1) * g.q(k + 3)) / (math.sqrt(3) * g.q(k + 2)),
         "c": math.sqrt(g.q(k - 1) * g.q(k + 1)) / (math.sqrt(3) * g.q(k)) if k > 1 else 0.0}
    A = lambda a, b: (a, b)
    kk = A(k, k)
    blk1 = _matrix("[k+1]/[k]; 0; sqrt([k-1]*[k+1])/[k]",
                   "0; 0; 0",
                   "sqrt([k-1]*[k+1])/[k]; 0; [k-1]/[k]")
    yield Fixture(A(k - 1, k - 1), A(k - 1, k),
                  (R(A(k, k - 1), "gamma"), R(A(k, k - 1), "gamma'"), R(A(k - 2, k))), blk1, p,
                  name="D U^((k-1,k-1),(k-1,k))")
    yield Fixture(A(k, k - 1), A(k - 1, k - 1),
                  (R(A(k - 1, k), "gamma"), R(A(k - 1, k), "gamma'"), R(A(k - 1, k - 2))), blk1, p,
                  name="D U^((k,k-1),(k-1,k-1))")
    blk2 = _matrix("0; 0; 0",
                   "0; [k+1]/[k+2]; sqrt([k+1]*[k+3])/[k+2]",
                   "0; sqrt([k+1]*[k+3])/[k+2]; [k+3]/[k+2]")
    yield Fixture(A(k + 1, k - 2), A(k - 1, k),
                  (R(A(k, k - 1), "gamma"), R(A(k, k - 1), "gamma'"), R(A(k - 2, k))), blk2, p,
                  name="D U^((k+1,k-2),(k-1,k))")
    yield Fixture(A(k, k - 1), A(k + 1, k - 2),
                  (R(A(k - 1, k), "gamma"), R(A(k - 1, k), "gamma'"), R(A(k, k - 2))), blk2, p,
                  name="D U^((k,k-1),(k+1,k-2))")
    for i in (1, 2, 3):
        pi = dict(p, i=i)
        blk = _matrix("[k]/[k+1]; conj(eps(i))*sqrt([k]*[k+2])/[k+1]",
                      "*; [k+2]/[k+1]")
        yield Fixture(A(k, k - 1), (kk, i), (R(A(k - 1, k), "gamma"), R(A(k - 1, k), "gamma'")),
                      blk, pi, name=f"D U^((k,k-1),(k,k)_{i})")
        yield Fixture((kk, i), A(k - 1, k), (R(A(k, k - 1), "gamma"), R(A(k, k - 1), "gamma'")),
                      blk, pi, name=f"D U^((k,k)_{i},(k-1,k))")
    yield Fixture(A(k - 1, k), A(k, k - 1),
                  (R((kk, 1)), R((kk, 2)), R((kk, 3)), R(A(k - 1, k - 1)), R(A(k + 1, k - 2))),
                  _matrix("[2]*[k+1]*a; conj(E)*a; E*a; b; c",
                          "*; [2]*[k+1]*a; conj(E)*a; eps(2)*b; conj(eps(2))*c",
                          "*; *; [2]*[k+1]*a; conj(eps(2))*b; eps(2)*c",
                          "*; *; *; [k+3]/[k+2]; 0",
                          "*; *; *; *; [k-1]/[k]"), p, name="D U^((k-1,k),(k,k-1))")


# ---------------------------------------------------------------------------
# A(n)* and D(n)*

def _astar_blocks(g: Graph) -> Iterator[tuple[int, int, tuple[int, ...], tuple, dict, dict]]:
    """(l, r, row vertices, entries, params, printed) for every printed A* block."""
    n = g.coxeter_n
    m = (n - 1) // 2 if n % 2 else n // 2 - 1
    for i in range(1, m + 1):
        p = {"i": i, "s": (-1) ** (i + 1)}
        printed = {}
        if n % 2:
            up = _matrix("[i-1]/[i]; sqrt([i-1]*[i+1])/[i]", "*; [i+1]/[i]")
            down = _matrix("[i-2]/[i-1]; sqrt([i-2]*[i])/[i-1]", "*; [i]/[i-1]")
            mid = _matrix(
                "[i]*[2*i-3]/([i-1]*[2*i-1]); s*sqrt([2*i-3])/([i-1]*sqrt([2*i-1])); "
                "sqrt([2*i-3]*[2*i+1])/[2*i-1]",
                "*; 1/([i-1]*[i]); s*sqrt([2*i+1])/([i]*sqrt([2*i-1]))",
                "*; *; [i-1]*[2*i+1]/([i]*[2*i-1])")
        else:
            h = n // 2
            mm = h // 2
            if h % 2 == 0:
                if i < mm:
                    x = "([2]*[2*i]+[4*i])/([2*i-1]*[2*i]*[2*i+1])"
                elif i == mm:
                    x = "[2]/[2*mm-1]**2"
                else:
                    x = "([2]*[2*i]-[4*h-4*i])/([2*i-1]*[2*i]*[2*i+1])"
            else:
                x = ("([2]*[2*i]+[4*i])/([2*i-1]*[2*i]*[2*i+1])" if i <= mm
                     else "([2]*[2*i]-[4*h-4*i])/([2*i-1]*[2*i]*[2*i+1])")
            p.update(h=h, mm=mm)
            p["x"] = evaluate(x, g, p).real
            # printed with denominator [2i][2i+1]; the trace of a rank-one block
            # forces [2i][2i-1] (the two agree only when 4i = n)
            p["ap"] = evaluate("[2*i-2]*([2*i]+[1])/([2*i]*[2*i-1])", g, p).real
            p["ap_printed"] = evaluate("[2*i-2]*([2*i]+[1])/([2*i]*[2*i+1])", g, p).real
            p["am"] = evaluate("[2*i+2]*([2*i]-[1])/([2*i]*[2*i+1])", g, p).real
            up = _matrix("([2*i]-[1])/[2*i+1]; sqrt(([2*i]-[1])*([2*i+2]+[1]))/[2*i+1]",
                         "*; ([2*i+2]+[1])/[2*i+1]")
            down = _matrix("([2*i-2]-[1])/[2*i-1]; sqrt(([2*i-2]-[1])*([2*i]+[1]))/[2*i-1]",
                           "*; ([2*i]+[1])/[2*i-1]")
            mid = _matrix(
                "ap; s*sqrt(x*ap); sqrt([2*i-2]*[2*i+2])/[2*i]",
                "*; x; s*sqrt(x*am)",
                "*; *; [2*i+2]*([2*i]-[1])/([2*i]*[2*i+1])")
            printed = {(0, 0): "[2*i-2]*([2*i]+[1])/([2*i]*[2*i+1])", (0, 1): "s*sqrt(x*ap_printed)",
                       (0, 2): "sqrt([2*i-2]*[2*i-1]*[2*i+2])/([2*i]*sqrt([2*i+1]))"}
        yield i, i + 1, (i, i + 1), up, p, {}
        yield i, i - 1, (i - 1, i), down, p, {}
        yield i, i, (i - 1, i, i + 1), mid, p, printed


def _fixtures_Astar(g: Graph, variant: str) -> Iterator[Fixture]:
    if variant not in ("default", "plus"):
        return
    for l, r, rows, entries, p, printed in _astar_blocks(g):
        yield Fixture(l, r, tuple(R(v) for v in rows), entries, p, printed, name=f"A* U^({l},{r})")


def _fixtures_Dstar(g: Graph, variant: str) -> Iterator[Fixture]:
    if variant not in ("default", "plus"):
        return
    for l, r, rows, entries, p, printed in _astar_blocks(g):
        for a, b, c in (("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")):
            yield Fixture(f"{a}_{l}", f"{c}_{r}", tuple(R(f"{b}_{v}") for v in rows), entries, p,
                          printed, name=f"D* U^({a}_{l},{c}_{r})")


# ---------------------------------------------------------------------------
# exceptional graphs

def _m6(l: int) -> int:
    return (l - 1) % 6 + 1


def _fixtures_E8(g: Graph, variant: str) -> Iterator[Fixture]:
    two = _matrix("[2]")
    for l in range(1, 7):
        j = lambda d: f"j_{_m6(l + d)}"
        yield Fixture(f"i_{l}", j(-1), None, two, name=f"E8 U^(i_{l},j_l-1)")
        yield Fixture(j(0), f"i_{l}", None, two, name=f"E8 U^(j_{l},i_l)")
        yield Fixture(j(0), j(-2), (R(j(-1)), R(j(2))), _matrix(
            "1/[2]; s*sqrt([3])/[2]", "*; [3]/[2]"), {"s": (-1) ** (l + 1)},
            name=f"E8 U^(j_{l},j_l-2)")
        yield Fixture(j(0), j(1), (R(j(-1)), R(j(2)), R(f"i_{_m6(l + 1)}")), _matrix(
            "1/[2]; 1/[2]; 1/sqrt([3])", "*; 1/[2]; 1/sqrt([3])", "*; *; [2]/[3]"),
            name=f"E8 U^(j_{l},j_l+1)")


def _fixtures_E8star(g: Graph, variant: str) -> Iterator[Fixture]:
    two = _matrix("[2]")
    for x, y in ((1, 3), (2, 1), (3, 4), (4, 2)):
        yield Fixture(x, y, None, two, name=f"E8* U^({x},{y})")
    yield Fixture(2, 2, (R(3), R(2)), _matrix("1/[2]; sqrt([3])/[2]", "*; [3]/[2]"), name="E8* U^(2,2)")
    yield Fixture(3, 3, (R(2), R(3)), _matrix("1/[2]; -sqrt([3])/[2]", "*; [3]/[2]"), name="E8* U^(3,3)")
    blk = _matrix("1/[2]; 1/[2]; 1/sqrt([3])", "*; 1/[2]; 1/sqrt([3])", "*; *; [2]/[3]")
    yield Fixture(2, 3, (R(2), R(3), R(4)), blk, name="E8* U^(2,3)")
    yield Fixture(3, 2, (R(2), R(3), R(1)), blk, name="E8* U^(3,2)")


def _m3(c: str, l: int) -> str:
    return f"{c}_{(l - 1) % 3 + 1}"


def _fixtures_E2(g: Graph, variant: str) -> Iterator[Fixture]:
    if variant != "plus":
        return
    s = {"s": math.sqrt(g.q(2) * g.q(4))}
    two = _matrix("[2]")
    yield Fixture("i", "k", None, two, name="E2 U^(i,k)")
    yield Fixture("j", "i", None, two, name="E2 U^(j,i)")
    for l in (1, 2, 3):
        p, q, r = (lambda d, c=c: _m3(c, l + d) for c in "pqr")
        yield Fixture("k", "j", (R("i"), R(p(0))), _matrix(
            "[2]/[3]; sqrt([2]**3)/([3]*sqrt([4]))", "*; [2]**2/([3]*[4])"), s, name="E2 U^(k,j)")
        blk = _matrix("[2]**2*([2]*[4]+s)/([3]**2*[4]); sqrt([2]**3)/sqrt([3]*[4])",
                      "*; [2]**2*([2]*[4]-s)/([3]**2*[4])")
        yield Fixture(r(0), "j", (R(p(-1)), R(p(0))), blk, s, name=f"E2 U^(r_{l},j)")
        yield Fixture("k", q(0), (R(p(0)), R(p(1))), blk, s, name=f"E2 U^(k,q_{l})")
        blk = _matrix("([2]*[4]+s)/([2]*[3]); -sqrt([2]*[4]-s)/([2]*sqrt([3]))",
                      "*; ([2]**2-s)/([2]*[3])")
        yield Fixture(q(0), p(0), (R("k"), R(r(1))), blk, s, name=f"E2 U^(q_{l},p_{l})")
        yield Fixture(p(0), r(1), (R("j"), R(q(0))), blk, s, name=f"E2 U^(p_{l},r_l+1)")
        # off-diagonal printed as in U^(q_l,p_l); its square must be the
        # product of the diagonal entries
        blk = _matrix("([2]*[4]-s)/([2]*[3]); sqrt(([2]*[4]-s)*([2]**2+s))/([2]*[3])",
                      "*; ([2]**2+s)/([2]*[3])")
        pr = {(0, 1): "sqrt([2]*[4]-s)/([2]*sqrt([3]))"}
        yield Fixture(p(0), r(0), (R("j"), R(q(-1))), blk, s, pr, name=f"E2 U^(p_{l},r_{l})")
        yield Fixture(q(-1), p(0), (R("k"), R(r(0))), blk, s, pr, name=f"E2 U^(q_l-1,p_{l})")
        yield Fixture(r(1), q(0), (R(p(0)), R(p(1))), _matrix(
            "[2]*([2]**2-s)/[3]**2; -sqrt([2])/sqrt([6])", "*; [2]*([2]**2+s)/[3]**2"), s,
            {(0, 1): "-[2]/sqrt([6])"}, name=f"E2 U^(r_l+1,q_{l})")
        yield Fixture(p(0), "k", (R("j"), R(q(-1)), R(q(0))), _matrix(
            "1/[2]; sqrt([2]*[4]-s)/sqrt([2]*[3]*[4]); sqrt([2]*[4]+s)/sqrt([2]*[3]*[4])",
            "*; ([2]*[4]-s)/([3]*[4]); sqrt([6])/sqrt([3]*[4])",
            "*; *; ([2]*[4]+s)/([3]*[4])"), s, name=f"E2 U^(p_{l},k)")


def _fixtures_E1(g: Graph, variant: str) -> Iterator[Fixture]:
    if variant != "plus":
        return
    s = math.sqrt(g.q(2) * g.q(4))
    two = _matrix("[2]")
    for l in (1, 2, 3):
        p = {"s": s, "l": l}
        yield Fixture(f"i_{l}", f"k_{l}", None, two, name="E1 U^(i_l,k_l)")
        yield Fixture(f"j_{l}", f"i_{l}", None, two, name="E1 U^(j_l,i_l)")
        yield Fixture(f"k_{l}", f"j_{l}", (R(f"i_{l}"), R("p")), _matrix(
            "[2]/[3]; sqrt([2]*[4])/[3]", "*; [4]/[3]"), p, name="E1 U^(k_l,j_l)")
        blk = _matrix("[2]**2*([2]*[4]+s)/([3]**2*[4]); conj(eps(l))*sqrt([2]**3)/sqrt([3]*[4])",
                      "*; [2]**2*([2]*[4]-s)/([3]**2*[4])")
        yield Fixture("r", f"j_{l}", (R("p", "alpha"), R("p", "alpha'")), blk, p, name=f"E1 U^(r,j_{l})")
        yield Fixture(f"k_{l}", "q", (R("p", "beta'"), R("p", "beta")), blk, p,
                      name=f"E1 U^(k_{l},q)", conjugate=True)
        blk = _matrix(
            "1/[2]; conj(eps(l))*sqrt([2]*[4]+s)/sqrt([2]*[3]*[4]); eps(l)*sqrt([2]*[4]-s)/sqrt([2]*[3]*[4])",
            "*; ([2]*[4]+s)/([3]*[4]); conj(eps(l))*sqrt([6])/sqrt([3]*[4])",
            "*; *; ([2]*[4]-s)/([3]*[4])")
        yield Fixture(f"j_{l}", "p", (R(f"k_{l}"), R("r", "alpha"), R("r", "alpha'")), blk, p,
                      name=f"E1 U^(j_{l},p)")
        yield Fixture("p", f"k_{l}", (R(f"j_{l}"), R("q", "beta'"), R("q", "beta")), blk, p,
                      name=f"E1 U^(p,k_{l})", conjugate=True)
    p = {"s": s}
    yield Fixture("r", "q", (R("p", "alpha", "beta"), R("p", "alpha", "beta'"),
                             R("p", "alpha'", "beta"), R("p", "alpha'", "beta'")), _matrix(
        "0; 0; 0; 0",
        "0; [2]*([2]**2-s)/[3]**2; -sqrt([2])/sqrt([6]); 0",
        "0; -sqrt([2])/sqrt([6]); [2]*([2]**2+s)/[3]**2; 0",
        "0; 0; 0; 0"), p, name="E1 U^(r,q)")
    p = {"s": s, "ap": (-g.q(2) ** 2 + 1j * s) / (g.q(3) * g.q(4)),
         "am": (-g.q(2) ** 2 - 1j * s) / (g.q(3) * g.q(4)),
         "bp": (g.q(2) * g.q(4) + s) / (g.q(3) * g.q(4) ** 2),
         "bm": (g.q(2) * g.q(4) - s) / (g.q(3) * g.q(4) ** 2)}
    blk = _matrix(
        "[3]/[4]; am; ap; -sqrt(bp); sqrt(bm)",
        "ap; [3]/[4]; am; -conj(eps(2))*sqrt(bp); eps(2)*sqrt(bm)",
        "am; ap; [3]/[4]; -eps(2)*sqrt(bp); conj(eps(2))*sqrt(bm)",
        "-sqrt(bp); -eps(2)*sqrt(bp); -conj(eps(2))*sqrt(bp); ([2]**2+s)/([2]*[3]); 0",
        "sqrt(bm); conj(eps(2))*sqrt(bm); eps(2)*sqrt(bm); 0; ([2]**2-s)/([2]*[3])")
    yield Fixture("p", "r", (R("j_1"), R("j_2"), R("j_3"), R("q", "beta"), R("q", "beta'")), blk, p,
                  name="E1 U^(p,r)")
    yield Fixture("q", "p", (R("k_1"), R("k_3"), R("k_2"), R("r", "alpha'"), R("r", "alpha")), blk, p,
                  name="E1 U^(q,p)")


def _sym(*upper: str) -> tuple[tuple[str, ...], ...]:
    """Symmetric matrix from its upper-triangular rows."""
    rows = [r.split(";") for r in upper]
    d = len(rows)
    return tuple(tuple("*" if c < r else rows[r][c - r].strip() for c in range(d)) for r in range(d))


def _fixtures_E5(g: Graph, variant: str) -> Iterator[Fixture]:
    two = _matrix("[2]")
    for x, y in ((5, 16), (16, 9), (10, 4), (15, 10)):
        yield Fixture(x, y, None, two, name=f"E5 U^({x},{y})")
    # printed as [2]/[4] and [4]/[3]; a nonzero 1x1 block of U obeys U^2 = [2]U
    for x, y in ((3, 17), (17, 8), (11, 3), (14, 11)):
        yield Fixture(x, y, None, two, printed={(0, 0): "[2]/[4]"}, name=f"E5 U^({x},{y})")
    for x, y in ((2, 15), (4, 14), (8, 5), (9, 2)):
        yield Fixture(x, y, None, two, printed={(0, 0): "[4]/[3]"}, name=f"E5 U^({x},{y})")
    # rank-one blocks have trace [2]; the entries below marked in `printed`
    # follow from the printed cells on the triangles (2,7,15), (2,9,13),
    # (4,7,14), (5,8,13), (1,8,14), which fail the type I frame equations
    yield Fixture(14, 8, (R(3), R(1)), _sym("1/[2]; sqrt([3])/[2]", "[3]/[2]"),
                  printed={(0, 1): "sqrt([3])/sqrt([2])", (1, 1): "[3]"}, name="E5 U^(14,8)")
    blk = _sym("1/[2]; sqrt([3])/[2]", "[3]/[2]")
    yield Fixture(12, 7, (R(2), R(1)), blk, name="E5 U^(12,7)")
    yield Fixture(13, 6, (R(2), R(1)), blk, name="E5 U^(13,6)")
    blk = _sym("1/[2]; -sqrt([3])/[2]", "[3]/[2]")
    yield Fixture(3, 13, (R(8), R(7)), blk, name="E5 U^(3,13)")
    yield Fixture(7, 3, (R(14), R(13)), blk, name="E5 U^(7,3)")
    blk = _sym("1/[2]; sqrt([3])/[2]", "[3]/[2]")
    pr = {(0, 1): "sqrt([4])/sqrt([2]**3)", (1, 1): "[4]/[2]**2"}
    for x, y, rows in ((5, 13, (9, 8)), (13, 9, (5, 2)), (7, 4, (15, 14)), (15, 7, (4, 2))):
        yield Fixture(x, y, tuple(R(v) for v in rows), blk, printed=pr, name=f"E5 U^({x},{y})")
    blk = _sym("[2]/[3]; sqrt([2]*[4])/[3]", "[4]/[3]")
    for x, y, rows in ((2, 12, (7, 6)), (6, 2, (13, 12)), (4, 15, (10, 7)), (9, 5, (16, 13))):
        yield Fixture(x, y, tuple(R(v) for v in rows), blk, name=f"E5 U^({x},{y})")
    blk = _sym("[2]/[3]; sqrt([2]*[4])/[3]", "[4]/[3]")
    pr = {(0, 1): "[2]*sqrt([4])/[3]", (1, 1): "[2]*[4]/[3]"}
    yield Fixture(1, 14, (R(7), R(8)), blk, printed=pr, name="E5 U^(1,14)")
    yield Fixture(8, 1, (R(13), R(14)), blk, printed=pr, name="E5 U^(8,1)")
    yield Fixture(12, 6, (R(1), R(2)), _sym("[3]/[2]**3; [4]*sqrt([3])/[2]**3", "[4]**2/[2]**3"),
                  name="E5 U^(12,6)")
    blk = _sym("1/[6]; sqrt([2]*[4])/[6]", "[2]*[4]/[6]")
    yield Fixture(1, 12, (R(6), R(7)), blk, name="E5 U^(1,12)")
    yield Fixture(6, 1, (R(12), R(13)), blk, name="E5 U^(6,1)")
    blk = _sym("[3]/[4]; sqrt([3])/sqrt([2]*[4]); sqrt([3]*[6])/(sqrt([2])*[4])",
               "1/[2]; sqrt([6])/([2]*sqrt([4]))", "[6]/([2]*[4])")
    pr = {(0, 0): "1/[2]", (0, 1): "1/[2]", (0, 2): "sqrt([6])/([2]*sqrt([4]))"}
    yield Fixture(13, 8, (R(5), R(3), R(1)), blk, printed=pr, name="E5 U^(13,8)")
    yield Fixture(14, 7, (R(4), R(3), R(1)), blk, printed=pr, name="E5 U^(14,7)")
    blk = _sym("1/[2]; 1/sqrt([3]); 1/sqrt([3])", "[2]/[3]; [2]/[3]", "[2]/[3]")
    yield Fixture(3, 14, (R(8), R(7), R(11)), blk, name="E5 U^(3,14)")
    yield Fixture(8, 3, (R(14), R(13), R(17)), blk, name="E5 U^(8,3)")
    blk = _sym("[3]/[4]; -sqrt([2])/sqrt([4]); [2]/[4]",
               "[2]/[3]; -sqrt([2]**3)/([3]*sqrt([4]))", "[2]**2/([3]*[4])")
    pr = {(0, 0): "1/[2]", (0, 1): "-1/sqrt([3])", (0, 2): "sqrt([2])/sqrt([3]*[4])"}
    yield Fixture(2, 13, (R(9), R(7), R(6)), blk, printed=pr, name="E5 U^(2,13)")
    yield Fixture(7, 2, (R(15), R(13), R(12)), blk, printed=pr, name="E5 U^(7,2)")
    blk = _sym("1/[2]; sqrt([4])/([2]*sqrt([6])); sqrt([2])/sqrt([6])",
               "[4]/([2]*[6]); sqrt([2]*[4])/[6]", "[2]**2/[6]")
    pr = {(0, 2): "sqrt([2]**3)/sqrt([6])", (1, 2): "sqrt([2]**3*[4])/[6]"}
    yield Fixture(1, 13, (R(8), R(7), R(6)), blk, printed=pr, name="E5 U^(1,13)")
    yield Fixture(7, 1, (R(14), R(13), R(12)), blk, printed=pr, name="E5 U^(7,1)")
    yield Fixture(13, 7, (R(2), R(3), R(1)), _sym(
        "1/[2]; sqrt([6])/sqrt([2]**3); -sqrt([3])/[2]**2",
        "[6]/[2]**2; -sqrt([3]*[6])/sqrt([2]**5)", "[3]/[2]**3"), name="E5 U^(13,7)")


def _fixtures_E24(g: Graph, variant: str) -> Iterator[Fixture]:
    def many(blk, specs, tag):
        for x, y, rows in specs:
            yield Fixture(x, y, tuple(R(v) for v in rows), blk, name=f"E24 U^({x},{y}) {tag}")

    yield from many(_sym("[5]/[4]; -sqrt([3]*[5])/[4]", "[3]/[4]"),
                    ((3, 21, (12, 14)), (12, 3, (21, 19)), (6, 20, (13, 11)), (13, 6, (20, 22))), "a")
    yield from many(_sym("1/[2]; sqrt([3])/[2]", "[3]/[2]"),
                    ((19, 12, (3, 4)), (21, 14, (3, 4)), (20, 11, (6, 5)), (22, 13, (6, 5))), "b")
    yield from many(_sym("[2]/[3]; sqrt([2]*[4])/[3]", "[4]/[3]"),
                    ((5, 19, (11, 14)), (14, 5, (22, 19))), "c")
    yield from many(_sym("[2]/[3]; -sqrt([2]*[4])/[3]", "[4]/[3]"),
                    ((4, 22, (14, 11)), (11, 4, (19, 22))), "d")
    yield from many(_sym("[5]**2/([2]*[9]); -[5]*sqrt([7])/([2]*[9])", "[7]/([2]*[9])"),
                    ((20, 13, (6, 5)), (21, 12, (3, 4))), "e")
    yield from many(_sym("1/[4]; [3]*sqrt([5])/([4]*sqrt([7]))", "[3]**2*[5]/([4]*[7])"),
                    ((4, 21, (12, 14)), (12, 4, (21, 19)), (5, 20, (13, 11)), (13, 5, (20, 22))), "f")
    row = ("1/[2]; sqrt([7])/([2]*[3]); {s}sqrt([7]*[10])/([3]*sqrt([2]*[5]))",
           "[7]/([2]*[3]**2); {s}[7]*sqrt([10])/([3]**2*sqrt([2]*[5]))",
           "[7]*[10]/([3]**2*[5])")
    yield from many(_sym(*(r.format(s="") for r in row)), ((19, 14, (3, 4, 5)),), "g")
    yield from many(_sym(*(r.format(s="-") for r in row)), ((22, 11, (6, 5, 4)),), "h")
    yield from many(_sym("[4]/[5]; [4]*sqrt([7])/([3]*[5]); [4]*sqrt([7])/([3]*[5])",
                         "[4]*[7]/([3]**2*[5]); [4]*[7]/([3]**2*[5])", "[4]*[7]/([3]**2*[5])"),
                    ((19, 11, (2, 4, 5)), (22, 14, (7, 4, 5))), "i")
    yield from many(_sym("[4]/[5]; sqrt([3])/sqrt([5]); sqrt([9])/[5]",
                         "[3]/[4]; sqrt([3]*[9])/([4]*sqrt([5]))", "[9]/([4]*[5])"),
                    ((3, 19, (10, 14, 12)), (14, 3, (23, 19, 21)), (6, 22, (15, 11, 13)),
                     (11, 6, (18, 22, 20))), "j")
    yield from many(_sym("[2]/[3]; sqrt([2]*[5])/([3]*sqrt([4])); sqrt([2]*[9])/sqrt([4]*[7])",
                         "[5]/([3]*[4]); sqrt([5]*[9])/([4]*sqrt([7]))", "[3]*[9]/([4]*[7])"),
                    ((4, 19, (11, 14, 12)), (14, 4, (22, 19, 21)), (5, 22, (14, 11, 13)),
                     (11, 5, (19, 22, 20))), "k")


_BUILDERS: dict[str, Callable[[Graph, str], Iterator[Fixture]]] = {
    "A": _fixtures_A, "D": _fixtures_D, "Astar": _fixtures_Astar, "Dstar": _fixtures_Dstar,
    "E8": _fixtures_E8, "E8star": _fixtures_E8star, "E2_12": _fixtures_E2, "E1_12": _fixtures_E1,
    "E5_12": _fixtures_E5, "E24": _fixtures_E24,
}
