"""
gadgets.py

Constructive reductions as instance transformers. Every reduction returns a
ReductionCertificate holding the source, the constructed target, the gadget
constants and (for decision reductions) the threshold; `decide` settles the
source question through the target and `backmap` carries a target solution
back to a source solution.

    cms-to-cms0         additive network -> zero-vertex-weight network with a hub vertex
    cms-to-oms          integer additive network -> multiplicative network, weights N^w
    partition-to-exact  partition -> exact partition
    exact-to-cms0       exact partition -> complete CMS-0 network, w_ij = x - a_i a_j
    sp-to-ppf           subset product -> partition in product form
    ppf-to-sppf         ppf -> strict ppf (padding with ones)
    sppf-to-oms         strict ppf -> multiplicative star network

Functions:
    - cms_to_cms0, cms_to_oms, partition_to_exact, exact_to_cms0, sp_to_ppf,
      ppf_to_sppf, sppf_to_oms_star: Build certificates.
    - make_certificate: Builds the certificate of a reduction kind.
    - backmap: Target solution to source solution.
    - decide: Source answer and witness through the target.
    - solve_through: Source-optimal sequence of a network reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from basics.config import RunConfig
from basics.errors import InfeasibleParametersError, SizeLimitError
from basics.logger import get_logger
from ordering.rewrite import make_vertex_last
from ordering.solver import SolveResult, co_optimal_splits, solve, structured_steps
from TN.costmodel import ContractionSequence, Objective
from TN.generators import star_network, vertex_ids
from TN.netcore import Representation, TensorNetwork, make_group
from TN.serialization import format_number, network_to_dict
from .problems import Decision, Instance, Problem, brute_decide, check_witness, exact_partition, ppf, sppf

log = get_logger("reduction")

KINDS = ("cms-to-cms0", "cms-to-oms", "partition-to-exact", "exact-to-cms0",
         "sp-to-ppf", "ppf-to-sppf", "sppf-to-oms")
NETWORK_KINDS = ("cms-to-cms0", "cms-to-oms")
SOURCE_PROBLEM = {
    "partition-to-exact": Problem.PARTITION,
    "exact-to-cms0": Problem.EXACT_PARTITION,
    "sp-to-ppf": Problem.SP,
    "ppf-to-sppf": Problem.PPF,
    "sppf-to-oms": Problem.SPPF,
}


@dataclass(frozen=True)
class ReductionCertificate:
    """
    Attributes:
        kind (str): One of KINDS.
        source (TensorNetwork or Instance): The reduced object.
        target (TensorNetwork or Instance, optional): The constructed object,
                None when the answer follows from the parameters alone.
        threshold (int or Fraction, optional): Target optimum that means YES.
        constants (dict): Gadget constants and back-mapping data.
        shortcut (Decision, optional): The answer when no target was built.
    """
    kind: str
    source: object
    target: object = None
    threshold: object = None
    constants: dict = field(default_factory=dict)
    shortcut: Decision | None = None

    def to_dict(self):
        def encode(obj):
            if obj is None:
                return None
            return network_to_dict(obj) if isinstance(obj, TensorNetwork) else obj.to_dict()

        def constant(value):
            if isinstance(value, (list, tuple)):
                return [constant(v) for v in value]
            return value if isinstance(value, str) else format_number(value)

        payload = {
            "kind": self.kind,
            "source": encode(self.source),
            "target": encode(self.target),
            "threshold": format_number(self.threshold),
            "constants": {k: constant(v) for k, v in self.constants.items()},
        }
        if self.shortcut is not None:
            payload["shortcut"] = self.shortcut.to_dict()
        return payload


def _require_problem(kind, instance):
    expected = SOURCE_PROBLEM[kind]
    if not isinstance(instance, Instance) or instance.problem is not expected:
        got = instance.problem.value if isinstance(instance, Instance) else type(instance).__name__
        raise InfeasibleParametersError(f"{kind} reduces {expected.value} instances, got {got}")


def _require_additive(kind, net):
    if not isinstance(net, TensorNetwork) or not net.is_additive:
        raise InfeasibleParametersError(f"{kind} needs an additive network")


def _fresh_id(net, stem):
    candidate, suffix = stem, 0
    while candidate in net.members:
        suffix += 1
        candidate = f"{stem}_{suffix}"
    return candidate


# ----------------------------------------------------------------------
# Network reductions

def cms_to_cms0(net):
    """
    Moves every vertex weight onto an edge to a new hub vertex: all vertex
    weights become zero, and vertex v gets an edge to the hub weighing the old
    W(v) (none when W(v) = 0). A sequence of the target, reordered so the hub
    comes last and stripped of its final step, is a sequence of the source
    with the same P_T.
    """
    _require_additive("cms-to-cms0", net)
    hub = make_group(_fresh_id(net, "V0"))
    graph = nx.Graph()
    for node in net.vertices:
        graph.add_node(node, weight=Fraction(0))
    graph.add_node(hub, weight=Fraction(0))
    for u, v, data in net.graph.edges(data=True):
        graph.add_edge(u, v, weight=data["weight"])
    for node, weight in net.vertex_weights().items():
        if weight:
            graph.add_edge(node, hub, weight=weight)
    target = TensorNetwork(graph, Representation.ADDITIVE)
    log.info(f"cms-to-cms0: hub {next(iter(hub))} joined to {target.graph.degree(hub)} vertices")
    return ReductionCertificate("cms-to-cms0", net, target, constants={"hub": next(iter(hub))})


def _gap(weights, max_terms):
    """Smallest positive difference between two subset sums of `weights` (all ints)."""
    if len(weights) > max_terms:
        raise SizeLimitError(f"The general gap mode enumerates at most {max_terms} weights, got {len(weights)}")
    sums = {0}
    for w in weights:
        sums |= {s + w for s in sums}
    ordered = sorted(sums)
    return min((b - a for a, b in zip(ordered, ordered[1:])), default=1)


def cms_to_oms(net, general=False, max_terms=20):
    """
    Exponentiates an additive network: every weight w becomes N^w with
    N = max{n^2, 2}, which requires integer weights. In general mode the
    weights are scaled to integers by their common denominator D, the smallest
    gap between two subset sums is found by enumeration, and the smallest base
    whose gap-th power reaches n^2 is used; weights become base^(D w).

    OMS-optimal sequences of the target are CMS-optimal for the source, and
    every step satisfies OPN = N^(D P_T).

    Raises:
        InfeasibleParametersError: On a non-additive network, or on fractional
                                   weights outside general mode.
        SizeLimitError: If general mode would enumerate more than max_terms weights.
    """
    _require_additive("cms-to-oms", net)
    n = len(net)
    weights = list(net.vertex_weights().values()) + list(net.edge_weights().values())
    if general:
        scale = math.lcm(*(w.denominator for w in weights)) if weights else 1
        gap = _gap([int(w * scale) for w in weights], max_terms)
        base = 2
        while base ** gap < n * n:
            base += 1
        delta = Fraction(gap, scale)
    else:
        if any(w.denominator != 1 for w in weights):
            raise InfeasibleParametersError("cms-to-oms needs integer weights; use the general gap mode for rationals")
        scale, delta, base = 1, Fraction(1), max(n * n, 2)

    graph = nx.Graph()
    for node, weight in net.vertex_weights().items():
        graph.add_node(node, weight=base ** int(weight * scale))
    for u, v, data in net.graph.edges(data=True):
        graph.add_edge(u, v, weight=base ** int(data["weight"] * scale))
    target = TensorNetwork(graph, Representation.MULTIPLICATIVE)
    log.info(f"cms-to-oms: N = {base}, scale {scale}, gap {delta}")
    return ReductionCertificate("cms-to-oms", net, target, constants={"N": base, "scale": scale, "delta": delta})


# ----------------------------------------------------------------------
# Partition chain

def partition_to_exact(instance):
    """A = {a_i} with sum S becomes B = {a_i + S} plus n copies of S."""
    _require_problem("partition-to-exact", instance)
    total, n = instance.total, len(instance)
    target = exact_partition([a + total for a in instance.items] + [total] * n)
    return ReductionCertificate("partition-to-exact", instance, target, constants={"S": total, "n": n})


def exact_to_cms0(instance):
    """
    Complete CMS-0 network on v0..v2n with a_0 = s/2, a_i the items and edge
    weights x - a_i a_j, x = (s + 1)^3 + 1. The CMS-0 optimum equals
    x (n^2 + 2n) - 3 s^2 / 4 exactly when an exact partition exists; an odd
    sum answers NO without building the network.
    """
    _require_problem("exact-to-cms0", instance)
    s, n = instance.total, len(instance) // 2
    if s % 2:
        return ReductionCertificate("exact-to-cms0", instance, constants={"s": s, "n": n},
                                    shortcut=Decision(False, reason="odd total, a_0 = s/2 is not an integer"))

    a = [s // 2] + list(instance.items)
    x = (s + 1) ** 3 + 1
    ids = vertex_ids(2 * n + 1)
    edges = {}
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            weight = x - a[i] * a[j]
            if weight <= 0:
                raise InfeasibleParametersError(f"Gadget edge {ids[i]}-{ids[j]} has non-positive weight {weight}")
            edges[(ids[i], ids[j])] = weight
    target = TensorNetwork.from_weights({v: 0 for v in ids}, edges, Representation.ADDITIVE)
    threshold = x * (n * n + 2 * n) - 3 * s * s // 4
    log.info(f"exact-to-cms0: s = {s}, a_0 = {s // 2}, x = {x}, threshold {threshold}")
    return ReductionCertificate("exact-to-cms0", instance, target, threshold,
                                constants={"s": s, "a0": s // 2, "x": x, "n": n})


# ----------------------------------------------------------------------
# Product chain

def sp_to_ppf(instance):
    """S with target K becomes S + {N, K^2}, N the product of S."""
    _require_problem("sp-to-ppf", instance)
    product = instance.product
    target = ppf(list(instance.items) + [product, instance.k ** 2])
    return ReductionCertificate("sp-to-ppf", instance, target,
                                constants={"N": product, "K2": instance.k ** 2, "n": len(instance)})


def ppf_to_sppf(instance):
    """Pads n ones, so any equal-product split can be balanced to n items per side."""
    _require_problem("ppf-to-sppf", instance)
    target = sppf(list(instance.items) + [1] * len(instance))
    return ReductionCertificate("ppf-to-sppf", instance, target, constants={"n": len(instance)})


def sppf_to_oms_star(instance, max_bits=1_000_000):
    """
    Multiplicative star: center v0 of weight a = 2n prod(b_i), leaves v1..vn of
    weight 1, edge i of weight b_i = M b'_i with M = 2n prod(b'_i). An optimal
    sequence contracts all leaves before the center, and its split of the
    leaves is balanced with equal b' products exactly when the source is a YES.

    Raises:
        InfeasibleParametersError: If a weight needs more than max_bits bits.
    """
    _require_problem("sppf-to-oms", instance)
    n = len(instance)
    if n % 2:
        return ReductionCertificate("sppf-to-oms", instance, constants={"n": n},
                                    shortcut=Decision(False, reason="odd item count, no side holds n/2 items"))
    m = 2 * n * instance.product
    b = [m * item for item in instance.items]
    a = 2 * n * math.prod(b)
    if a.bit_length() > max_bits:
        raise InfeasibleParametersError(f"Star center weight needs {a.bit_length()} bits, above the budget of {max_bits}")
    target = star_network(a, b, leaf_weight=1)
    log.info(f"sppf-to-oms: n = {n}, M = {m}, center weight of {a.bit_length()} bits")
    return ReductionCertificate("sppf-to-oms", instance, target, constants={"n": n, "M": m, "a": a, "b": b})


REDUCTIONS = {
    "cms-to-cms0": cms_to_cms0,
    "cms-to-oms": cms_to_oms,
    "partition-to-exact": partition_to_exact,
    "exact-to-cms0": exact_to_cms0,
    "sp-to-ppf": sp_to_ppf,
    "ppf-to-sppf": ppf_to_sppf,
    "sppf-to-oms": sppf_to_oms_star,
}


def make_certificate(kind, source, config=None, general=False):
    """Builds the certificate of reduction `kind` for `source`."""
    config = config or RunConfig()
    if kind not in REDUCTIONS:
        raise InfeasibleParametersError(f"Unknown reduction {kind!r}; expected one of {KINDS}")
    if kind == "cms-to-oms":
        return cms_to_oms(source, general=general, max_terms=config.general_delta_max_terms)
    if kind == "sppf-to-oms":
        return sppf_to_oms_star(source, max_bits=config.max_weight_bits)
    return REDUCTIONS[kind](source)


# ----------------------------------------------------------------------
# Back-mapping

def _complement(n, side):
    return tuple(i for i in range(n) if i not in side)


def _exact_witness(cert, seq):
    """Source witness from the (1, n, n) step of an optimal gadget sequence whose singleton has a_0."""
    n, a0 = cert.constants["n"], cert.constants["a0"]
    ids = vertex_ids(2 * n + 1)
    value = {v: a for v, a in zip(ids, [a0] + list(cert.source.items))}
    hub = ids[0]
    for _, triple in structured_steps(seq, (1, n, n), cert.target.members):
        groups = [triple.p, triple.q, triple.r]
        singles = [g for g in groups if len(g) == 1]
        single = next((g for g in singles if hub in g), singles[0])
        (center,) = single
        if value[center] != a0:
            continue
        sides = [g for g in groups if g is not single]
        if center != hub:
            # center is a twin of v0; swapping their labels keeps every cost
            sides = [(g - {hub}) | {center} if hub in g else g for g in sides]
        witness = tuple(sorted(ids.index(v) - 1 for v in sides[0]))
        if check_witness(cert.source, witness):
            return witness
    return None


def backmap(cert, solution):
    """
    Carries a target solution back to the source.

    Parameters:
        cert (ReductionCertificate): The reduction.
        solution: cms-to-cms0 / cms-to-oms / exact-to-cms0 take a contraction
                  sequence of the target; sppf-to-oms takes the (P, Q) leaf
                  groups of the top leaf split; the set reductions take a witness
                  (item indices of one side) of the target.

    Returns:
        ContractionSequence for the network reductions, a witness tuple (or None) otherwise.
    """
    kind = cert.kind
    if kind == "cms-to-cms0":
        lifted = make_vertex_last(cert.target, solution, cert.constants["hub"])
        return ContractionSequence(lifted.steps[:-1])
    if kind == "cms-to-oms":
        return solution
    if kind == "exact-to-cms0":
        return _exact_witness(cert, solution)
    if kind == "sppf-to-oms":
        leaf_index = {v: i - 1 for i, v in enumerate(vertex_ids(len(cert.source) + 1))}
        return tuple(sorted(leaf_index[v] for v in solution[0]))

    side = tuple(solution)
    if kind == "sp-to-ppf":
        n = cert.constants["n"]
        if n not in side:
            side = _complement(n + 2, side)
        return tuple(i for i in side if i < n)
    # partition-to-exact and ppf-to-sppf keep the original items in front
    n = len(cert.source)
    return tuple(i for i in side if i < n)


# ----------------------------------------------------------------------
# Deciding and solving through targets

def _balanced(cert, group):
    witness = backmap(cert, (group, None))
    rest = _complement(len(cert.source), witness)
    items = cert.source.items
    return (len(witness) == len(rest)
            and math.prod(items[i] for i in witness) == math.prod(items[i] for i in rest))


def _decide_star(cert, config):
    n = len(cert.source)
    leaves = frozenset(vertex_ids(n + 1)[1:])
    result = solve(cert.target, Objective.OPN, config.decide_method, config)
    details = {"optimum_bits": result.optimum.bit_length()}
    top = next((s for s in result.sequence if s.union == leaves), None)
    if top is not None and _balanced(cert, top.left):
        return Decision(True, backmap(cert, (top.left, top.right)), details=details)
    if top is None:
        log.warning("optimal star sequence has no leaf-only top split; inspecting co-optimal splits")

    _, pairs = co_optimal_splits(cert.target, Objective.OPN, leaves, config.decide_method, config)
    details["co_optimal_splits"] = len(pairs)
    for left, right in pairs:
        if _balanced(cert, left):
            return Decision(True, backmap(cert, (left, right)), details=details)
    return Decision(False, details=details)


def _decide_exact(cert, config):
    result = solve(cert.target, Objective.PT, config.decide_method, config)
    details = {"optimum": result.optimum, "threshold": cert.threshold}
    if result.optimum != cert.threshold:
        return Decision(False, details=details)
    witness = _exact_witness(cert, result.sequence)
    if witness is None:
        log.warning("optimum meets the threshold but no balanced (1, n, n) step was found")
        return Decision(True, reason="threshold met, witness not extracted", details=details)
    return Decision(True, witness, details=details)


def decide(cert, config=None):
    """
    Answers the certificate's source question through its target: the gadget
    networks are solved exactly (config.decide_method), set targets are
    decided by brute_decide. YES answers carry a source witness.

    Raises:
        InfeasibleParametersError: For the network reductions, which have no decision.
    """
    config = config or RunConfig()
    if cert.shortcut is not None:
        return cert.shortcut
    if cert.kind in NETWORK_KINDS:
        raise InfeasibleParametersError(f"{cert.kind} is an optimization reduction; use solve_through")
    if cert.kind == "exact-to-cms0":
        return _decide_exact(cert, config)
    if cert.kind == "sppf-to-oms":
        return _decide_star(cert, config)

    target = brute_decide(cert.target, config.subset_limit)
    if not target.answer:
        return Decision(False, reason=target.reason)
    return Decision(True, backmap(cert, target.witness))


def solve_through(cert, method="dp", config=None):
    """
    Optimal sequence of a network reduction's source, obtained by solving the
    target and mapping the sequence back.

    Returns:
        SolveResult: The back-mapped sequence with the target optimum
                     (the CMS optimum for cms-to-cms0, the OMS optimum for cms-to-oms).
    """
    if cert.kind not in NETWORK_KINDS:
        raise InfeasibleParametersError(f"{cert.kind} is a decision reduction; use decide")
    objective = Objective.PT if cert.kind == "cms-to-cms0" else Objective.OPN
    result = solve(cert.target, objective, method, config)
    return SolveResult(backmap(cert, result.sequence), result.optimum, result.objective, result.method)
