import numpy as np
import pytest
from hypothesis import given, strategies as st

from bnorder.errors import CyclicGraphError, ValidationError
from bnorder.model import (Dag, Dataset, Order, PriorMatrix, RunConfig, consistent, is_acyclic,
                           pset_mask, pset_members, topological_order)

from conftest import A, B, C, D, E


def test_empty_graph_is_acyclic():
    assert is_acyclic(Dag.empty(4))


def test_two_cycle_is_cyclic():
    assert not is_acyclic(Dag((0b10, 0b01)))


def test_five_node_graph_acyclic(five_node_dag):
    assert is_acyclic(five_node_dag)


def test_consistent_examples():
    order = Order((A, B, C, D, E))
    assert consistent(0, 3, Order((2, 0, 3, 1)))
    assert consistent(pset_mask([A, C]), E, order)
    assert not consistent(pset_mask([B]), A, Order((A, B)))


def test_topological_order_examples(five_node_dag):
    assert topological_order(Dag.empty(3)).perm == (0, 1, 2)
    assert topological_order(five_node_dag).perm == (A, B, C, D, E)
    chain = Dag.from_edges(3, [(2, 1), (1, 0)])
    assert topological_order(chain).perm == (2, 1, 0)


def test_topological_order_rejects_cycle():
    with pytest.raises(CyclicGraphError):
        topological_order(Dag.from_edges(3, [(0, 1), (1, 2), (2, 0)]))


def test_self_loop_rejected():
    with pytest.raises(ValidationError):
        Dag((0b1, 0))


def test_parent_out_of_range_rejected():
    with pytest.raises(ValidationError):
        Dag((0b100, 0))


@st.composite
def dags(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    perm = draw(st.permutations(range(n)))
    parents = [0] * n
    for pos in range(n):
        for q in range(pos):
            if draw(st.booleans()):
                parents[perm[pos]] |= 1 << perm[q]
    return Dag(tuple(parents))


@given(dags())
def test_topological_order_is_consistent(dag):
    assert is_acyclic(dag)
    order = topological_order(dag)
    assert sorted(order.perm) == list(range(dag.n))
    assert all(consistent(dag.parents[i], i, order) for i in range(dag.n))


@given(st.permutations(range(7)), st.integers(0, 6), st.integers(0, 127), st.integers(0, 127))
def test_consistent_is_monotone(perm, node, big, small):
    order = Order(tuple(perm))
    big &= ~(1 << node)
    sub = big & small
    if consistent(big, node, order):
        assert consistent(sub, node, order)


def test_order_validation():
    with pytest.raises(ValidationError):
        Order((0, 0, 1))
    assert Order((2, 0, 1)).position == (1, 2, 0)


def test_pset_roundtrip():
    assert pset_members(pset_mask([5, 0, 63])) == (0, 5, 63)


def test_dataset_validation():
    with pytest.raises(ValidationError):
        Dataset(np.array([[0, 2]]), (2, 2))
    with pytest.raises(ValidationError):
        Dataset(np.array([[0, 1]]), (2, 1))
    ds = Dataset.from_rows([[0, 2], [1, 0]])
    assert ds.cardinalities == (2, 3) and ds.m == 2 and ds.n == 2


def test_prior_matrix_defaults_and_range():
    p = PriorMatrix.neutral(3)
    assert p.is_neutral()
    with pytest.raises(ValidationError):
        PriorMatrix(np.full((2, 2), 1.5))
    # diagonal is ignored
    assert PriorMatrix(np.full((2, 2), 0.5) + 0.5 * np.eye(2)).is_neutral()


@pytest.mark.parametrize("kwargs", [dict(s=9), dict(iterations=0), dict(workers=0),
                                    dict(gamma=0.0), dict(strategy="bits")])
def test_run_config_rejects(kwargs):
    with pytest.raises(ValidationError):
        RunConfig(**kwargs)
