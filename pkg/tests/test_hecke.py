import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cellforge.catalog import build_A
from cellforge.closed_forms import construct_cells
from cellforge.hecke import (check_hecke, check_unitarity, check_yang_baxter, connection, cube_roots,
                             hecke_operator, hecke_operators, wenzl_deviation, wenzl_weight)
from cellforge.qnum import QContext, qint

from conftest import SYSTEM_KEYS, key_id


def dense_operators(cs):
    """U and X on the space of all length-2 paths, and braid generators on length-3 paths."""
    g = cs.graph
    E = g.edges
    phi = g.pf_weights
    p2 = [(e1, e2) for e1 in range(g.n_edges) for e2 in g.out_edges(E[e1].target)]
    ix = {p: i for i, p in enumerate(p2)}
    U = np.zeros((len(p2), len(p2)), dtype=complex)
    for (e1, e2) in p2:
        x, y = E[e1].source, E[e2].target
        for (f1, f2) in p2:
            if (E[f1].source, E[f2].target) != (x, y):
                continue
            s = sum(cs[(lam, f1, f2)] * np.conj(cs[(lam, e1, e2)]) for lam in g.edges_between(y, x))
            U[ix[(e1, e2)], ix[(f1, f2)]] = s / (phi[x] * phi[y])
    a, b = cube_roots(g.coxeter_n)
    X = a * np.eye(len(p2)) - b * U
    p3 = [(e1, e2, e3) for (e1, e2) in p2 for e3 in g.out_edges(E[e2].target)]
    jx = {p: i for i, p in enumerate(p3)}
    T1 = np.zeros((len(p3), len(p3)), dtype=complex)
    T2 = np.zeros_like(T1)
    for (e1, e2, e3) in p3:
        i = jx[(e1, e2, e3)]
        for (f1, f2) in p2:
            if (f1, f2, e3) in jx:
                T1[i, jx[(f1, f2, e3)]] = X[ix[(e1, e2)], ix[(f1, f2)]]
            if (e1, f1, f2) in jx:
                T2[i, jx[(e1, f1, f2)]] = X[ix[(e2, e3)], ix[(f1, f2)]]
    return p2, U, X, T1, T2


@pytest.mark.parametrize("key", [("A", 4, None), ("A", 6, None), ("E8star", 8, None),
                                 ("E1_12", 12, "plus")], ids=key_id)
def test_blocks_match_dense_assembly(key, system_cache):
    cs = system_cache(*key)
    p2, U, X, T1, T2 = dense_operators(cs)
    ix = {p: i for i, p in enumerate(p2)}
    for (x, y), op in hecke_operators(cs).items():
        sel = [ix[p] for p in op.paths]
        assert np.allclose(op.matrix, U[np.ix_(sel, sel)], atol=1e-13)
    assert np.abs(X @ X.conj().T - np.eye(len(X))).max() < 1e-10
    dense_ybe = np.abs(T1 @ T2 @ T1 - T2 @ T1 @ T2).max()
    assert dense_ybe < 1e-9
    conn = connection(cs)
    assert check_yang_baxter(conn) < 1e-9
    assert check_unitarity(conn) < 1e-10


@pytest.mark.parametrize("key", SYSTEM_KEYS, ids=key_id)
def test_hecke_relation(key, system_cache):
    cs = system_cache(*key)
    rep = check_hecke(cs)
    assert rep.ok(1e-12, 1e-9), rep


@pytest.mark.parametrize("key", [("A", 7, None), ("D", 9, "conjugate"), ("E24", 24, None)], ids=key_id)
def test_trace_counts_closing_edges(key, system_cache):
    # U = [2] times an orthogonal projection whose rank is the number of closing edges
    cs = system_cache(*key)
    g = cs.graph
    for (x, y), op in hecke_operators(cs).items():
        m = len(g.edges_between(y, x))
        assert np.trace(op.matrix).real == pytest.approx(g.q(2) * m, abs=1e-9)
        assert np.linalg.matrix_rank(op.matrix, tol=1e-8) == m


def test_hecke_by_label_and_missing_block(system_cache):
    cs = system_cache("E8star", 8, None)
    g = cs.graph
    x, y = next(iter(hecke_operators(cs)))
    assert hecke_operator(cs, g.label(x), g.label(y), by_label=True).dim >= 1
    with pytest.raises(ValueError):
        hecke_operator(construct_cells("A", 4), 0, 0)


@given(st.integers(4, 64))
def test_cube_roots(n):
    a, b = cube_roots(n)
    q = cmath.exp(1j * math.pi / n)
    assert a ** 3 == pytest.approx(q ** 2, abs=1e-14)
    assert b ** 3 == pytest.approx(1 / q, abs=1e-14)
    assert abs(a) == pytest.approx(1.0) and abs(b) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_connection_without_u_is_exactly_unitary(n):
    conn = connection(construct_cells("A", n), zero_u=True)
    assert check_unitarity(conn) <= 1e-15


def test_connection_entry_lookup(system_cache):
    cs = system_cache("A", 5, None)
    conn = connection(cs)
    (x, y), blk = next(iter(conn.blocks.items()))
    p, r = conn.paths[(x, y)][0], conn.paths[(x, y)][-1]
    assert conn.entry(*p, *r) == blk[0, -1]
    e = cs.graph.out_edges(0)[0]
    f = cs.graph.out_edges(cs.graph.edges[e].target)[0]
    assert conn.entry(e, f, f, e) == 0


@pytest.mark.parametrize("n", range(4, 13))
def test_wenzl_formula(n):
    assert wenzl_deviation(construct_cells("A", n)) < 1e-12


def test_wenzl_weight_values():
    assert wenzl_weight(6, (0, 0), 1, 1, 1) == 0.0
    with pytest.raises(ValueError):
        wenzl_weight(6, (5, 5), 1, 2, 1)
    with pytest.raises(ValueError):
        wenzl_weight(6, (1, 1), 1, 2, 3)


@given(st.integers(5, 20), st.data())
def test_wenzl_blocks_are_rank_one_hecke(n, data):
    # each 2x2 square block is [2] times a rank-one projection
    from cellforge.catalog import a_vertices

    lam = data.draw(st.sampled_from(list(a_vertices(n))))
    j, l = data.draw(st.sampled_from([(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)]))
    try:
        d1 = wenzl_weight(n, lam, j, l, j)
        d2 = wenzl_weight(n, lam, l, j, l)
        off = wenzl_weight(n, lam, j, l, l)
    except ValueError:
        return
    assert d1 + d2 == pytest.approx(qint(QContext(n=n), 2), abs=1e-12)
    assert off ** 2 == pytest.approx(d1 * d2, abs=1e-12)
