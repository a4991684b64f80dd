import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cellforge.catalog import build_graph
from cellforge.cells import GaugeFamily, frame_equations, gauge_transform
from cellforge.closed_forms import construct_cells
from cellforge.equivalence import fingerprint
from cellforge.graphs import Graph
from cellforge.qnum import QContext, qint
from cellforge.solver import (SolveOptions, _Problem, classify_solutions, gauge_pins, objective,
                              solve_cells)


@pytest.fixture(scope="module")
def a5_outcome():
    return solve_cells(build_graph("A", 5), SolveOptions(seed=0))


def test_a5_solves_to_the_closed_form_class(a5_outcome):
    assert a5_outcome.solved
    assert a5_outcome.objective <= 1e-16
    ref = fingerprint(construct_cells("A", 5))
    assert ref.distance(a5_outcome.fingerprint) <= 1e-6


def test_e8star_loop_cell_modulus():
    out = solve_cells(build_graph("E8star"), SolveOptions(seed=0))
    assert out.solved
    g = out.cells.graph
    Q = QContext(n=8)
    expected = math.sqrt(qint(Q, 3) ** 3 / qint(Q, 2))
    assert expected == pytest.approx(2.7595664559264153, rel=1e-14)
    assert abs(out.cells[g.triangle(2, 2, 2)]) == pytest.approx(expected, rel=1e-7)


def test_graph_without_triangles_fails():
    g = Graph.from_labels("C2", 6, ["a", "b"], [("a", "b"), ("b", "a")], pf=[1.0, 1.0])
    out = solve_cells(g)
    assert out.status == "failed" and out.cells is None
    assert out.objective > 0


def test_solver_is_deterministic():
    g = build_graph("A", 6)
    a = solve_cells(g, SolveOptions(seed=5))
    b = solve_cells(g, SolveOptions(seed=5))
    assert np.array_equal(a.cells.W, b.cells.W)
    assert a.to_dict() == b.to_dict()


def test_options_are_validated():
    with pytest.raises(ValueError):
        SolveOptions(restarts=0)
    with pytest.raises(ValueError):
        SolveOptions(residual_tol=0.0)
    with pytest.raises(ValueError):
        SolveOptions(gauge_fixing="tree")


def test_iteration_cap_reports_failure():
    out = solve_cells(build_graph("A", 6), SolveOptions(restarts=1, max_iterations=2, seed=0))
    assert out.status == "failed"
    assert out.to_dict()["fingerprint"] is None


@pytest.mark.parametrize("key", [("A", 6, None), ("E1_12", 12, "plus")])
@given(seed=st.integers(0, 2**32 - 1), scale=st.floats(0.5, 1.5))
@settings(max_examples=20)
def test_objective_is_gauge_invariant(key, seed, scale, system_cache):
    cs = system_cache(*key)
    bent = cs.with_cells(cs.W * scale)
    G = GaugeFamily.random(cs.graph, np.random.default_rng(seed))
    assert objective(gauge_transform(bent, G)) == pytest.approx(objective(bent), rel=1e-9, abs=1e-20)


@pytest.mark.parametrize("family,n", [("A", 6), ("D", 9), ("E1_12", 12)])
def test_jacobian_matches_finite_differences(family, n):
    g = build_graph(family, n)
    prob = _Problem(frame_equations(g), ~gauge_pins(g))
    rng = np.random.default_rng(0)
    v = rng.normal(size=prob.n_vars)
    J = prob.jacobian(v)
    h = 1e-6
    num = np.empty_like(J)
    for k in range(prob.n_vars):
        e = np.zeros(prob.n_vars)
        e[k] = h
        num[:, k] = (prob.residual(v + e) - prob.residual(v - e)) / (2 * h)
    assert np.abs(J - num).max() <= 1e-6 * max(1.0, np.abs(J).max())


def test_gauge_pins_are_independent():
    g = build_graph("A", 7)
    from cellforge.equivalence import incidence
    from cellforge.graphs import triangles

    tris = triangles(g)
    mask = gauge_pins(g)
    B = incidence(g, tris).astype(float)
    assert np.linalg.matrix_rank(B[mask]) == mask.sum() == np.linalg.matrix_rank(B)


def test_classify_a6_single_class():
    classes = classify_solutions(build_graph("A", 6), 8, SolveOptions(seed=2))
    assert len(classes) == 1
    assert classes[0].count == 8


def test_solution_serialises():
    out = solve_cells(build_graph("A", 4))
    d = out.to_dict()
    assert d["status"] == "solved"
    assert float.fromhex(d["objective"]) == out.objective
    assert "cells" in d and "cells" not in out.to_dict(with_cells=False)
