"""
rewrite.py

Constructive sequence rewrites on zero-vertex-weight additive networks
(CMS-0). On such networks the time power of a step depends only on its two
operands P and Q and the complement R of their union,

    P_T(P, Q) = W_{P-Q} + W_{P-R} + W_{Q-R},

so reordering steps never changes their cost and the three orders of any
three-group state cost the same. Both rewrites below use only these two facts
and therefore preserve the sequence's P_T exactly.

Classes:
    - GroupTriple: The (P, Q, R) decomposition of one step.

Functions:
    - step_triple: GroupTriple of a step of a sequence.
    - make_vertex_last: Reorders a sequence so one vertex is contracted last.
    - isolate_step: Contracts everything outside one step's union into a single group first.
    - chain_sequence: Left-deep chain over a vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass

from basics.errors import NetworkError, SequenceError
from basics.logger import get_logger
from TN.costmodel import ContractionSequence, ContractionStep
from TN.netcore import contract_group, group_label, make_group, natural_key

log = get_logger("rewrite")


@dataclass(frozen=True)
class GroupTriple:
    """The two operands of a step and the complement of their union."""
    p: frozenset
    q: frozenset
    r: frozenset

    def __post_init__(self):
        if self.p & self.q or self.q & self.r or self.p & self.r:
            raise SequenceError("Groups of a triple must be pairwise disjoint")

    @property
    def sizes(self):
        """Sorted group sizes, e.g. (1, 2, 2)."""
        return tuple(sorted((len(self.p), len(self.q), len(self.r))))

    def __str__(self):
        return "(" + ", ".join(group_label(g) if g else "-" for g in (self.p, self.q, self.r)) + ")"


def step_triple(seq, index, vertices=None):
    """GroupTriple of step `index`; the complement is taken in `vertices` (default: everything seq contracts)."""
    step = seq[index]
    universe = frozenset(vertices) if vertices is not None else seq.vertices
    return GroupTriple(step.left, step.right, universe - step.union)


def _require_cms0(net):
    if not net.is_cms0():
        raise NetworkError("Sequence rewrites are only defined on additive networks with all vertex weights zero")


def _require_full(net, seq):
    if len(seq.validate(net)) != 1:
        raise SequenceError("Sequence rewrites need a full contraction sequence")


def make_vertex_last(net, seq, v):
    """
    Reorders a full sequence so that vertex `v` takes part only in the final step.

    Works on the state with three live groups V1, V2, V3 (v in V1) before the
    last two steps. If V1 is just v, the tail becomes (V2, V3) followed by
    (V2 + V3, v). Otherwise the earlier step V1 = V10 + V11 is moved behind
    the contraction of V2 with V3, which leaves a three-group state
    (V10, V11, V2 + V3) whose group holding v is strictly smaller, and the
    procedure repeats.

    Parameters:
        net (TensorNetwork): CMS-0 network.
        seq (ContractionSequence): Full contraction sequence of net.
        v (str or frozenset): A live vertex of net.

    Returns:
        ContractionSequence: A sequence with the same P_T whose final step has v as an operand.

    Raises:
        NetworkError: If net is not CMS-0 or v is unknown.
        SequenceError: If seq is not a full contraction of net.
    """
    _require_cms0(net)
    _require_full(net, seq)
    target = net.resolve(v)
    steps = list(seq)
    rounds = 0

    while len(steps) > 1 and target not in (steps[-1].left, steps[-1].right):
        last = steps[-1]
        previous = steps[-2]
        other = last.right if previous.union == last.left else last.left
        three = (previous.left, previous.right, other)
        enclosing = next(g for g in three if target <= g)
        v2, v3 = (g for g in three if g != enclosing)
        prefix = steps[:-2]

        if enclosing == target:
            steps = prefix + [ContractionStep(v2, v3), ContractionStep(v2 | v3, target)]
        else:
            j = next(i for i, s in enumerate(prefix) if s.union == enclosing)
            split = prefix.pop(j)
            steps = prefix + [ContractionStep(v2, v3), split, ContractionStep(enclosing, v2 | v3)]
        rounds += 1

    log.debug(f"vertex {group_label(target)} moved last after {rounds} rounds")
    return ContractionSequence(tuple(steps))


def isolate_step(net, seq, step_index):
    """
    Rewrites a sequence so that step `step_index`, contracting V1 with V2, is
    preceded only by the steps building V1 and V2 and by steps contracting all
    remaining vertices into one group V3, and followed only by the contraction
    of V1 + V2 with V3.

    The steps building V1 and V2 keep their relative order; the steps over V3
    come from moving V1 + V2 last in the network where V1 + V2 is already a
    single vertex.

    Raises:
        NetworkError: If net is not CMS-0.
        SequenceError: If seq is not full or the index is out of range.
    """
    _require_cms0(net)
    _require_full(net, seq)
    if not 0 <= step_index < len(seq):
        raise SequenceError(f"Step index {step_index} out of range for a sequence of {len(seq)} steps")
    if step_index == len(seq) - 1:
        return seq

    isolated = seq[step_index]
    merged = isolated.union
    inside = [s for i, s in enumerate(seq) if s.union <= merged and i != step_index]
    outside = ContractionSequence(tuple(s for s in seq if not s.union <= merged))

    quotient, merged = contract_group(net, merged)
    outside = make_vertex_last(quotient, outside, merged)
    rest = merged ^ seq.vertices
    final = ContractionStep(merged, rest)
    if seq[-1].same_pair(final):
        final = seq[-1]

    steps = inside + list(outside[:-1]) + [isolated, final]
    return ContractionSequence(tuple(steps))


def chain_sequence(net, order=None):
    """
    Left-deep chain: contracts the first two vertices of `order`, then the
    growing group with each following vertex in turn.

    Parameters:
        net (TensorNetwork): The network.
        order (list, optional): Live vertices in contraction order; defaults to
                                the vertices sorted by id.

    Raises:
        NetworkError: If fewer than two vertices are given or order is not a
                      permutation of the live vertices.
    """
    if order is None:
        order = sorted(net.vertices, key=lambda g: natural_key(group_label(g)))
    order = [net.resolve(v) for v in order]
    if len(order) < 2:
        raise NetworkError("A chain needs at least two vertices")
    if len(set(order)) != len(order) or len(order) != len(net):
        raise NetworkError("The chain order must list every live vertex exactly once")
    steps, acc = [], order[0]
    for v in order[1:]:
        steps.append(ContractionStep(acc, make_group(v)))
        acc = acc | v
    return ContractionSequence(tuple(steps))
