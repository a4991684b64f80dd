"""Least-squares discovery of cell systems from the frame axioms.

Each cell is a pair of real variables (re, im); every frame residual is then a
polynomial of degree 2 (type I) or 4 (type II) with a cheap exact Jacobian.
Gauge fixing uses the diagonal phase gauge, which exists on every graph: a
triangle's phase shifts by the sum of its three edge phases, so the imaginary
parts of any set of triangles with independent edge-incidence rows can be set
to zero without losing solutions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import qr
from scipy.optimize import least_squares

from .cells import CellSystem, FrameEquations, cells_to_dict, frame_equations
from .config import TOLERANCES
from .equivalence import Fingerprint, fingerprint, incidence
from .graphs import Graph, triangles


@dataclass(frozen=True)
class SolveOptions:
    restarts: int = 20
    max_iterations: int = 500
    residual_tol: float = 1e-8
    seed: int = 0
    gauge_fixing: Literal["spanning", "none"] = "spanning"

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.gauge_fixing not in ("spanning", "none"):
            raise ValueError(f"unknown gauge fixing {self.gauge_fixing!r}")


@dataclass
class SolveOutcome:
    status: Literal["solved", "failed"]
    cells: CellSystem | None
    objective: float
    iterations: int
    fingerprint: Fingerprint | None = None
    restarts_used: int = 0

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    def to_dict(self, with_cells: bool = True) -> dict:
        d = {"status": self.status, "objective": float(self.objective).hex(),
             "iterations": self.iterations,
             "fingerprint": self.fingerprint.to_dict() if self.fingerprint else None}
        if with_cells and self.cells is not None:
            d["cells"] = cells_to_dict(self.cells)
        return d


# ---------------------------------------------------------------------------
# residuals


def _split(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])


def _csum(idx: np.ndarray, vals: np.ndarray, n: int) -> np.ndarray:
    return (np.bincount(idx, vals.real, minlength=n)
            + 1j * np.bincount(idx, vals.imag, minlength=n))


class _Problem:
    """Residual vector and Jacobian in the variables (re W, im W[free])."""

    def __init__(self, eq: FrameEquations, free_im: np.ndarray):
        self.eq = eq
        self.n = eq.n_tri
        self.free_im = free_im
        self.n_vars = self.n + int(free_im.sum())

    def cells(self, v: np.ndarray) -> np.ndarray:
        W = v[:self.n].astype(complex)
        W[self.free_im] += 1j * v[self.n:]
        return W

    def residual(self, v: np.ndarray) -> np.ndarray:
        r1, r2 = self.eq.residuals(self.cells(v))
        return np.concatenate([_split(r1), _split(r2)])

    def objective(self, v: np.ndarray) -> float:
        return float(np.sum(self.residual(v) ** 2))

    def jacobian(self, v: np.ndarray) -> np.ndarray:
        eq, n = self.eq, self.n
        W = self.cells(v)
        # complex derivatives d(residual)/d(re W_t) and d/d(im W_t)
        Jr1 = np.zeros((eq.n_i, n), dtype=complex)
        Ji1 = np.zeros((eq.n_i, n), dtype=complex)
        a, b = eq.i_t[:, 0], eq.i_t[:, 1]
        f = eq.i_frame
        np.add.at(Jr1, (f, a), np.conj(W[b]))
        np.add.at(Ji1, (f, a), 1j * np.conj(W[b]))
        np.add.at(Jr1, (f, b), W[a])
        np.add.at(Ji1, (f, b), -1j * W[a])

        Jr2 = np.zeros((eq.n_ii, n), dtype=complex)
        Ji2 = np.zeros((eq.n_ii, n), dtype=complex)
        t, c, f = eq.ii_t, eq.ii_coef, eq.ii_frame
        w = [W[t[:, k]] for k in range(4)]
        cw = [np.conj(x) for x in w]
        d = [c * cw[1] * w[2] * cw[3],   # d/d W1
             c * w[0] * w[2] * cw[3],    # d/d conj W2
             c * w[0] * cw[1] * cw[3],   # d/d W3
             c * w[0] * cw[1] * w[2]]    # d/d conj W4
        for k in range(4):
            holo = k % 2 == 0
            np.add.at(Jr2, (f, t[:, k]), d[k])
            np.add.at(Ji2, (f, t[:, k]), (1j if holo else -1j) * d[k])

        J = np.zeros((2 * (eq.n_i + eq.n_ii), self.n_vars))
        for rows, (Jr, Ji) in ((slice(0, 2 * eq.n_i), (Jr1, Ji1)),
                               (slice(2 * eq.n_i, None), (Jr2, Ji2))):
            J[rows, :n] = np.vstack([Jr.real, Jr.imag])
            J[rows, n:] = np.vstack([Ji.real, Ji.imag])[:, self.free_im]
        return J


def objective(cs: CellSystem) -> float:
    """Sum of squared type I and type II residuals."""
    r1, r2 = cs.residuals()
    return float(np.sum(np.abs(r1) ** 2) + np.sum(np.abs(r2) ** 2))


def gauge_pins(g: Graph) -> np.ndarray:
    """Triangles whose edge-incidence rows are independent (greedy in triangle order)."""
    tris = triangles(g)
    mask = np.zeros(len(tris), dtype=bool)
    if not tris:
        return mask
    B = incidence(g, tris).astype(float)
    _, R, piv = qr(B.T, pivoting=True, mode="economic")
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > 1e-9 * diag.max(initial=1.0)))
    # pivoted QR picks a well-conditioned independent subset of rows of B
    mask[piv[:rank]] = True
    return mask


def _initial(g: Graph, rng: np.random.Generator) -> np.ndarray:
    """Random start with |W|^2 inside the type I budget [2] phi_s phi_t of each side."""
    tris = triangles(g)
    phi = g.pf_weights
    q2 = g.q(2)
    uses = np.zeros(g.n_edges)
    for t in tris:
        for e in t:
            uses[e] += 1
    out = np.empty(len(tris), dtype=complex)
    for k, t in enumerate(tris):
        budget = min(q2 * phi[g.edges[e].source] * phi[g.edges[e].target] / uses[e] for e in t)
        mag = math.sqrt(rng.uniform(0.25, 1.0) * budget)
        out[k] = mag * np.exp(2j * math.pi * rng.random())
    return out


def solve_cells(g: Graph, opts: SolveOptions = SolveOptions()) -> SolveOutcome:
    eq = frame_equations(g)
    n = eq.n_tri
    if n == 0:
        obj = float(np.sum(eq.i_rhs ** 2) + np.sum(eq.ii_rhs ** 2))
        return SolveOutcome("failed", None, obj, 0)
    pins = gauge_pins(g) if opts.gauge_fixing == "spanning" else np.zeros(n, dtype=bool)
    prob = _Problem(eq, ~pins)
    target = opts.residual_tol ** 2
    streams = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    best = (math.inf, None, 0)
    total = 0
    for k, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        W0 = _initial(g, rng)
        v0 = np.concatenate([W0.real, W0.imag[~pins]])
        sol = least_squares(prob.residual, v0, jac=prob.jacobian, method="lm",
                            max_nfev=opts.max_iterations, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        obj = float(np.sum(sol.fun ** 2))
        total += sol.nfev
        if obj < best[0]:
            best = (obj, sol.x, k + 1)
        if obj <= target:
            break
    obj, v, used = best
    cs = CellSystem(g, prob.cells(v))
    if obj <= target:
        return SolveOutcome("solved", cs, obj, total, fingerprint(cs), used)
    return SolveOutcome("failed", cs, obj, total, None, used)


@dataclass
class SolutionClass:
    fingerprint: Fingerprint
    count: int
    representative: CellSystem = field(repr=False)


def classify_solutions(g: Graph, trials: int, opts: SolveOptions = SolveOptions(),
                       tol: float = TOLERANCES.classify) -> list[SolutionClass]:
    """Bucket the solved outcomes of independent trials by fingerprint."""
    classes: list[SolutionClass] = []
    seeds = np.random.SeedSequence(opts.seed).generate_state(trials)
    for s in seeds:
        out = solve_cells(g, SolveOptions(opts.restarts, opts.max_iterations, opts.residual_tol,
                                          int(s), opts.gauge_fixing))
        if not out.solved:
            continue
        for c in classes:
            if c.fingerprint.matches(out.fingerprint, tol):
                c.count += 1
                break
        else:
            classes.append(SolutionClass(out.fingerprint, 1, out.cells))
    return classes


__all__ = ["SolveOptions", "SolveOutcome", "SolutionClass", "solve_cells", "classify_solutions",
           "objective", "gauge_pins"]
