"""
Test Rewrite
Cost-preserving sequence rewrites on CMS-0 networks.
"""

import pytest

from basics.errors import NetworkError, SequenceError
from basics.scenarios import Scenarios
from ordering.rewrite import GroupTriple, chain_sequence, isolate_step, make_vertex_last, step_triple
from TN.costmodel import ContractionSequence, ContractionStep, Objective, evaluate_sequence
from TN.generators import complete_network, make_rng, random_network, random_sequence


def _pt(net, seq):
    return evaluate_sequence(net, seq, Objective.PT).pt


@pytest.fixture
def seven():
    return Scenarios("seven_vertex_zero").network


def test_chain_sequence_on_complete_networks():
    """K_5 and K_7 chains: step costs i + (2n - i) + i (2n - i)."""
    for n, expected in [(2, [7, 8, 7, 4]), (3, [11, 14, 15, 14, 11, 6])]:
        net = complete_network(2 * n + 1)
        seq = chain_sequence(net)
        assert [c.pt for c in evaluate_sequence(net, seq, Objective.PT).per_step] == expected


def test_chain_sequence_with_explicit_order(seven):
    order = ["v6", "v0", "v3", "v1", "v2", "v4", "v5"]
    seq = chain_sequence(seven, order)
    assert seq[0].left == frozenset({"v6"}) and seq[0].right == frozenset({"v0"})
    assert seq.is_full(seven)
    with pytest.raises(NetworkError):
        chain_sequence(seven, order[:-1])
    with pytest.raises(NetworkError):
        chain_sequence(seven, order[:-1] + ["v6"])
    with pytest.raises(NetworkError):
        chain_sequence(random_network(1), None)


def test_step_triple(seven):
    seq = chain_sequence(seven)
    triple = step_triple(seq, 2)
    assert triple.p == frozenset({"v0", "v1", "v2"})
    assert triple.q == frozenset({"v3"})
    assert triple.r == frozenset({"v4", "v5", "v6"})
    assert triple.sizes == (1, 3, 3)
    with pytest.raises(SequenceError):
        GroupTriple(frozenset({"a"}), frozenset({"a"}), frozenset())


def test_make_vertex_last_on_fixture(seven):
    seq = chain_sequence(seven)
    before = _pt(seven, seq)
    for v in seven.vertices:
        moved = make_vertex_last(seven, seq, v)
        assert moved.is_full(seven)
        assert v in (moved[-1].left, moved[-1].right)
        assert _pt(seven, moved) == before


def test_make_vertex_last_accepts_ids_and_keeps_finished_sequences(seven):
    seq = chain_sequence(seven)
    assert make_vertex_last(seven, seq, "v6") == seq
    moved = make_vertex_last(seven, seq, "v0")
    assert frozenset({"v0"}) in (moved[-1].left, moved[-1].right)


def test_make_vertex_last_random():
    """100 random CMS-0 networks, every vertex, P_T unchanged."""
    rng = make_rng(5)
    for case in range(100):
        net = random_network(int(rng.integers(2, 7)), rng, zero_vertices=True, denominator=2)
        seq = random_sequence(net, rng)
        before = _pt(net, seq)
        for v in net.vertices:
            moved = make_vertex_last(net, seq, v)
            assert moved.is_full(net), f"case {case}"
            assert v in (moved[-1].left, moved[-1].right), f"case {case}"
            assert _pt(net, moved) == before, f"case {case}"


def test_isolate_step_random():
    """100 random CMS-0 networks, every step, P_T unchanged and the isolated step in place."""
    rng = make_rng(6)
    for case in range(100):
        net = random_network(int(rng.integers(3, 7)), rng, zero_vertices=True)
        seq = random_sequence(net, rng)
        before = _pt(net, seq)
        for index in range(len(seq)):
            rewritten = isolate_step(net, seq, index)
            assert rewritten.is_full(net), f"case {case}, step {index}"
            assert _pt(net, rewritten) == before, f"case {case}, step {index}"
            assert rewritten[-2] == seq[index] or index == len(seq) - 1
            if index < len(seq) - 1:
                merged = seq[index].union
                assert rewritten[-1].same_pair(ContractionStep(merged, net.members - merged))


def test_isolate_step_structure(seven):
    """Steps inside the isolated union come first and keep their order."""
    seq = chain_sequence(seven)
    rewritten = isolate_step(seven, seq, 2)
    merged = seq[2].union
    assert list(rewritten[:2]) == list(seq[:2])
    assert rewritten[-2] == seq[2]
    assert all(not s.union & merged for s in rewritten[2:-2])
    assert _pt(seven, rewritten) == _pt(seven, seq)


def test_isolate_final_step_is_identity(seven):
    seq = chain_sequence(seven)
    assert isolate_step(seven, seq, len(seq) - 1) == seq
    with pytest.raises(SequenceError):
        isolate_step(seven, seq, len(seq))


def test_rewrites_need_cms0_and_full_sequences(seven):
    weighted = Scenarios("four_tensor_add")
    with pytest.raises(NetworkError):
        make_vertex_last(weighted.network, weighted.sequence, "A")
    with pytest.raises(NetworkError):
        isolate_step(weighted.network, weighted.sequence, 0)
    partial = ContractionSequence(chain_sequence(seven).steps[:3])
    with pytest.raises(SequenceError):
        make_vertex_last(seven, partial, "v0")
