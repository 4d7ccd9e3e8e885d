"""
Test Reduction
Gadget construction, deciding through targets, witness back-mapping and the
end-to-end decision chains, always against the brute-force deciders.
"""

import math
from fractions import Fraction

import pytest

from basics.config import RunConfig
from basics.errors import InfeasibleParametersError, InstanceError, ParseError, SizeLimitError
from basics.scenarios import Scenarios
from ordering.solver import iter_optima, solve_dp
from reduction.gadgets import (backmap, cms_to_cms0, cms_to_oms, decide, exact_to_cms0, make_certificate,
                               partition_to_exact, ppf_to_sppf, solve_through, sp_to_ppf, sppf_to_oms_star)
from reduction.pipeline import run_pipeline
from reduction.problems import (Instance, Problem, brute_decide, check_witness, exact_partition, partition, ppf,
                                sppf, subset_product)
from TN.costmodel import Objective, evaluate_sequence, step_opn, step_time_power
from TN.generators import complete_network, make_rng, random_network
from TN.netcore import TensorNetwork


def _random_items(rng, most=6, largest=9):
    return [int(x) for x in rng.integers(1, largest + 1, size=int(rng.integers(1, most + 1)))]


# ----------------------------------------------------------------------
# Source problems

def test_instances_validate_items():
    with pytest.raises(InstanceError):
        partition([])
    with pytest.raises(InstanceError):
        partition([1, 0])
    with pytest.raises(InstanceError):
        exact_partition([1, 2, 3])
    with pytest.raises(InstanceError):
        subset_product([2, 3], 1)
    with pytest.raises(InstanceError):
        Instance("partition", (1, 2), 4)
    assert len(sppf([1, 2, 3])) == 3


def test_instance_from_dict():
    assert Instance.from_dict({"problem": "sp", "items": [3, 5], "k": 15}) == subset_product([3, 5], 15)
    with pytest.raises(ParseError):
        Instance.from_dict({"items": [1]})
    with pytest.raises(ParseError):
        Instance.from_dict({"problem": "knapsack", "items": [1]})


@pytest.mark.parametrize("instance, answer, witness", [
    (partition([1, 2, 3]), True, (2,)),
    (partition([1, 2, 4]), False, None),
    (exact_partition([1, 2, 3, 4]), True, (0, 3)),
    (exact_partition([1, 1, 1, 3]), False, None),
    (subset_product([3, 5, 7], 35), True, (1, 2)),
    (subset_product([3, 5, 7], 9), False, None),
    (ppf([2, 3, 6]), True, (2,)),
    (sppf([2, 3, 6, 1]), True, (0, 1)),
    (sppf([2, 2, 3, 1]), False, None),
])
def test_brute_decide(instance, answer, witness):
    decision = brute_decide(instance)
    assert decision.answer is answer
    assert decision.witness == witness
    if answer:
        assert check_witness(instance, witness)


def test_brute_decide_limits_and_odd_totals():
    assert brute_decide(partition([1, 2])).reason == "odd total"
    with pytest.raises(SizeLimitError):
        brute_decide(partition([1] * 5), limit=4)


def test_check_witness_rejects_malformed_sides():
    instance = exact_partition([1, 2, 3, 4])
    assert not check_witness(instance, (0, 0))
    assert not check_witness(instance, (0, 7))
    assert not check_witness(instance, (0,))


# ----------------------------------------------------------------------
# Network reductions

def test_hub_reduction_on_fixture():
    source = Scenarios("hub_source").network
    cert = cms_to_cms0(source)
    hub = cert.constants["hub"]
    assert hub == "V0"
    assert cert.target.is_cms0()
    assert len(cert.target) == len(source) + 1
    assert cert.target.edge_weight("B", hub) == 2
    assert cert.target.edge_weight("D", hub) == Fraction(1, 2)
    assert cert.target.edge_weight("C", hub) == 0

    result = solve_through(cert, "dp")
    assert result.optimum == solve_dp(source, Objective.PT).optimum
    assert evaluate_sequence(source, result.sequence, Objective.PT).pt == result.optimum


def test_hub_on_zero_weight_network_is_isolated():
    net = complete_network(4)
    cert = cms_to_cms0(net)
    assert cert.target.graph.degree(frozenset({"V0"})) == 0


def test_hub_name_avoids_existing_ids():
    net = TensorNetwork.from_weights({"V0": 1, "V0_1": 2}, {("V0", "V0_1"): 1})
    assert cms_to_cms0(net).constants["hub"] == "V0_2"


def test_hub_reduction_keeps_optimum_on_random_networks():
    """100 random additive networks with 2 to 6 vertices."""
    rng = make_rng(8)
    for case in range(100):
        net = random_network(int(rng.integers(2, 7)), rng, denominator=2)
        cert = cms_to_cms0(net)
        source = solve_dp(net, Objective.PT).optimum
        assert solve_dp(cert.target, Objective.PT).optimum == source, f"case {case}"
        lifted = backmap(cert, solve_dp(cert.target, Objective.PT).sequence)
        assert lifted.is_full(net)
        assert evaluate_sequence(net, lifted, Objective.PT).pt == source, f"case {case}"


def test_exponent_lift_on_random_networks():
    """50 integer networks: OMS optima of the target are CMS optima of the source, OPN = N^P_T per step."""
    rng = make_rng(9)
    for case in range(50):
        net = random_network(int(rng.integers(2, 6)), rng, max_weight=2)
        cert = cms_to_oms(net)
        base = cert.constants["N"]
        assert base == max(len(net) ** 2, 2)
        source = solve_dp(net, Objective.PT).optimum
        for seq in iter_optima(cert.target, Objective.OPN):
            assert evaluate_sequence(net, seq, Objective.PT).pt == source, f"case {case}"
            for step in seq:
                assert step_opn(cert.target, step) == base ** int(step_time_power(net, step))


def test_exponent_lift_weights():
    net = TensorNetwork.from_weights({"A": 1, "B": 0}, {("A", "B"): 2})
    cert = cms_to_oms(net)
    assert cert.constants["N"] == 4
    assert cert.target.weight("A") == 4
    assert cert.target.weight("B") == 1
    assert cert.target.edge_weight("A", "B") == 16


def test_exponent_lift_general_mode_for_rationals():
    net = TensorNetwork.from_weights({"A": "1/2", "B": 0, "C": "1"}, {("A", "B"): "3/2", ("B", "C"): 1})
    with pytest.raises(InfeasibleParametersError):
        cms_to_oms(net)
    cert = cms_to_oms(net, general=True)
    assert cert.constants["scale"] == 2
    assert cert.constants["delta"] == Fraction(1, 2)
    # gap 1 in scaled units: the base itself must reach n^2 = 9
    assert cert.constants["N"] == 9
    assert cert.target.weight("A") == 9
    result = solve_through(cert)
    assert evaluate_sequence(net, result.sequence, Objective.PT).pt == solve_dp(net, Objective.PT).optimum


def test_network_reductions_need_additive_networks():
    mult = Scenarios("four_tensor_mult").network
    with pytest.raises(InfeasibleParametersError):
        cms_to_cms0(mult)
    with pytest.raises(InfeasibleParametersError):
        decide(cms_to_cms0(Scenarios("hub_source").network))


# ----------------------------------------------------------------------
# Partition chain

def test_partition_padding():
    cert = partition_to_exact(partition([1, 2, 3]))
    assert cert.target.items == (7, 8, 9, 6, 6, 6)
    assert cert.constants == {"S": 6, "n": 3}
    assert backmap(cert, (2, 3, 4)) == (2,)


def test_exact_gadget_constants_for_four_ones():
    cert = exact_to_cms0(exact_partition([1, 1, 1, 1]))
    assert cert.constants["x"] == 126
    assert cert.constants["a0"] == 2
    assert cert.threshold == 996
    assert cert.target.edge_weight("v0", "v1") == 124
    assert cert.target.edge_weight("v1", "v2") == 125
    assert solve_dp(cert.target, Objective.PT).optimum == 996
    decision = decide(cert, RunConfig(decide_method="dp"))
    assert decision.answer
    assert check_witness(cert.source, decision.witness)


def test_exact_gadget_no_instance():
    cert = exact_to_cms0(exact_partition([1, 1, 1, 3]))
    decision = decide(cert)
    assert not decision.answer
    assert decision.details["optimum"] > cert.threshold


def test_exact_gadget_odd_sum_short_circuits():
    cert = exact_to_cms0(exact_partition([1, 2]))
    assert cert.target is None
    assert not decide(cert).answer
    assert "odd" in decide(cert).reason


def test_exact_gadget_single_pair():
    assert decide(exact_to_cms0(exact_partition([3, 3]))).witness in ((0,), (1,))
    assert not decide(exact_to_cms0(exact_partition([2, 4]))).answer


@pytest.mark.parametrize("method", ["dp", "twins"])
def test_exact_gadget_agrees_with_brute_force(method):
    rng = make_rng(12)
    config = RunConfig(decide_method=method)
    for case in range(40):
        items = [int(x) for x in rng.integers(1, 6, size=2 * int(rng.integers(1, 4)))]
        instance = exact_partition(items)
        decision = decide(exact_to_cms0(instance), config)
        assert decision.answer == brute_decide(instance).answer, f"case {case}: {items}"
        if decision.answer:
            assert check_witness(instance, decision.witness)


def test_partition_pipeline_agrees_with_brute_force():
    """100 partition instances with up to 6 items of at most 9."""
    rng = make_rng(13)
    for case in range(100):
        instance = partition(_random_items(rng))
        result = run_pipeline(instance)
        assert result.answer == brute_decide(instance).answer, f"case {case}: {instance.items}"
        assert [c.kind for c in result.stages][0] == "partition-to-exact"
        if result.answer:
            assert check_witness(instance, result.witness), f"case {case}: {result.witness}"


def test_partition_fixture_through_pipeline():
    scenario = Scenarios("partition_123")
    result = run_pipeline(scenario.instance)
    assert result.answer is scenario.expected["answer"]
    payload = result.to_dict()
    assert payload["answer"] == "YES"
    assert sorted(map(sum, payload["sides"])) == [3, 3]
    assert payload["stages"] == ["partition-to-exact", "exact-to-cms0"]


# ----------------------------------------------------------------------
# Product chain

def test_subset_product_padding():
    cert = sp_to_ppf(subset_product([3, 5, 7], 35))
    assert cert.target.items == (3, 5, 7, 105, 1225)
    # the side holding N = 105 carries the subset
    assert backmap(cert, (0, 3)) == (0,)
    assert backmap(cert, (1, 2, 4)) == (0,)


def test_product_padding_with_ones():
    cert = ppf_to_sppf(ppf([2, 3, 6]))
    assert cert.target.items == (2, 3, 6, 1, 1, 1)
    assert backmap(cert, (2, 3, 4)) == (2,)


def test_star_gadget_constants():
    cert = sppf_to_oms_star(sppf([1, 1]))
    assert cert.constants["M"] == 4
    assert cert.constants["b"] == [4, 4]
    assert cert.constants["a"] == 64
    assert cert.target.weight("v0") == 64
    assert cert.target.edge_weight("v0", "v1") == 4
    assert cert.target.weight("v2") == 1


def test_star_gadget_odd_count_short_circuits():
    cert = sppf_to_oms_star(sppf([1, 2, 2]))
    assert cert.target is None
    assert not decide(cert).answer


def test_star_gadget_bit_budget():
    with pytest.raises(InfeasibleParametersError):
        sppf_to_oms_star(sppf([7, 7, 7, 7]), max_bits=32)


@pytest.mark.parametrize("items, answer", [
    ([2, 3, 6, 1], True),
    ([2, 2, 3, 1], False),
    ([4, 9, 6, 6], True),
    ([1, 1], True),
])
def test_star_gadget_decisions(items, answer):
    instance = sppf(items)
    decision = decide(sppf_to_oms_star(instance))
    assert decision.answer is answer
    if answer:
        assert check_witness(instance, decision.witness)


def test_subset_product_pipeline_agrees_with_brute_force():
    """50 subset product instances with up to 5 items of at most 7."""
    rng = make_rng(14)
    for case in range(50):
        items = _random_items(rng, most=5, largest=7)
        k = math.prod(x for x in items if rng.random() < 0.5)
        instance = subset_product(items, k if k > 1 else int(rng.integers(2, 50)))
        result = run_pipeline(instance)
        assert result.answer == brute_decide(instance).answer, f"case {case}: {instance.to_dict()}"
        if result.answer:
            assert check_witness(instance, result.witness)


def test_subset_product_fixture():
    scenario = Scenarios("sp_357")
    result = run_pipeline(scenario.instance)
    assert result.answer
    assert math.prod(scenario.instance.items[i] for i in result.witness) == 35
    assert [c.kind for c in result.stages] == ["sp-to-ppf", "ppf-to-sppf", "sppf-to-oms"]


def test_set_reductions_decide_by_brute_force_on_target():
    rng = make_rng(15)
    for _ in range(30):
        items = _random_items(rng)
        for cert in (partition_to_exact(partition(items)), ppf_to_sppf(ppf(items))):
            decision = decide(cert)
            assert decision.answer == brute_decide(cert.source).answer
            if decision.answer:
                assert check_witness(cert.source, decision.witness)


def test_make_certificate_checks_kinds():
    with pytest.raises(InfeasibleParametersError):
        make_certificate("sp-to-ppf", partition([1, 1]))
    with pytest.raises(InfeasibleParametersError):
        make_certificate("three-sat", partition([1, 1]))
    cert = make_certificate("exact-to-cms0", exact_partition([1, 1]))
    payload = cert.to_dict()
    assert payload["threshold"] == str(cert.threshold)
    assert payload["source"] == {"problem": Problem.EXACT_PARTITION.value, "items": [1, 1]}
    assert payload["constants"]["x"] == "28"


def test_rejected_back_mapped_witness_is_not_reported(monkeypatch):
    """A witness that fails the source check never leaves the pipeline."""
    monkeypatch.setattr("reduction.pipeline.backmap", lambda cert, witness: (0,))
    result = run_pipeline(partition([1, 2, 3]))
    assert result.answer
    assert result.witness is None
    assert result.decision.reason == "back-mapped witness rejected"
    assert "witness" not in result.to_dict()


@pytest.mark.parametrize("k", [35.5, "35.5", True, 1])
def test_subset_product_target_must_be_an_integer_above_one(k):
    with pytest.raises(InstanceError):
        subset_product([5, 7], k)
    with pytest.raises(InstanceError):
        Instance.from_dict({"problem": "sp", "items": [5, 7], "k": k})
