"""
costmodel.py

Cost of single contraction steps and of whole contraction sequences under the
three objectives:

    OPN  operation number, multiplicative networks, summed over the steps.
    PT   time power WD(A) + WD(B) - W_{A-B}, additive networks, max over the steps.
    PS   space power max{WD(A), WD(B), WD(AB)}, additive networks, max over the steps.

A step names its two operands by groups of original vertex ids; each operand
must be a union of live vertices of the network the step is evaluated on, so
the same functions price a step on the original network or on any partially
contracted state.

Classes:
    - Objective: OPN, PT or PS.
    - ContractionStep: The two groups contracted in one step.
    - ContractionSequence: Ordered steps forming a binary contraction tree.
    - StepCost / CostReport: Per-step and aggregate costs.

Functions:
    - step_time_power, step_space_power, step_opn: Cost of one step.
    - evaluate_sequence: Replays a sequence and reports its costs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from basics.errors import NetworkError, ObjectiveError, SequenceError
from .netcore import Representation, between, contract_pair, group_label, make_group, wd


class Objective(str, Enum):
    OPN = "opn"
    PT = "pt"
    PS = "ps"

    @property
    def representation(self):
        return Representation.MULTIPLICATIVE if self is Objective.OPN else Representation.ADDITIVE

    def aggregate(self, values):
        """Sum for OPN, max for PT and PS."""
        values = list(values)
        return sum(values) if self is Objective.OPN else max(values)


def check_objective(net, objective):
    """
    Raises:
        ObjectiveError: If the objective is not defined on the network's representation.
    """
    objective = Objective(objective)
    if net.representation is not objective.representation:
        raise ObjectiveError(
            f"Objective {objective.value} needs a {objective.representation.value} network, "
            f"got a {net.representation.value} one; convert it first")
    return objective


@dataclass(frozen=True)
class ContractionStep:
    left: frozenset
    right: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left", make_group(self.left))
        object.__setattr__(self, "right", make_group(self.right))
        if self.left & self.right:
            raise SequenceError(f"Step operands {group_label(self.left)} and {group_label(self.right)} overlap")

    @property
    def union(self):
        return self.left | self.right

    def same_pair(self, other):
        return {self.left, self.right} == {other.left, other.right}

    def __str__(self):
        return f"({group_label(self.left)}, {group_label(self.right)})"


@dataclass(frozen=True)
class ContractionSequence:
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(
            s if isinstance(s, ContractionStep) else ContractionStep(*s) for s in self.steps))

    @classmethod
    def from_pairs(cls, pairs):
        """Builds a sequence from (left ids, right ids) pairs."""
        return cls(tuple(ContractionStep(make_group(l), make_group(r)) for l, r in pairs))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, index):
        return self.steps[index]

    @property
    def vertices(self):
        """Union of the final step, i.e. everything a full sequence contracts."""
        return self.steps[-1].union if self.steps else frozenset()

    def validate(self, net):
        """
        Checks that the steps form a binary contraction tree over the live
        vertices of `net`: every operand is a live vertex or the union produced
        by exactly one earlier step, and is consumed at most once.

        Returns:
            set: The live groups remaining after the last step.

        Raises:
            SequenceError: On the first violating step.
        """
        live = set(net.vertices)
        for index, step in enumerate(self.steps):
            for operand in (step.left, step.right):
                if operand not in live:
                    raise SequenceError(
                        f"Step {index} operand {group_label(operand)} is neither an original vertex "
                        f"nor a live group produced by an earlier step")
            live -= {step.left, step.right}
            live.add(step.union)
        return live

    def is_full(self, net):
        return len(self.validate(net)) == 1

    def __str__(self):
        return " ".join(str(s) for s in self.steps)


@dataclass(frozen=True)
class StepCost:
    step: ContractionStep
    opn: int | None = None
    pt: object = None
    ps: object = None


@dataclass(frozen=True)
class CostReport:
    objective: Objective
    per_step: tuple = field(default_factory=tuple)
    total_opn: int | None = None
    pt: object = None
    ps: object = None

    @property
    def value(self):
        """Aggregate value of the report's objective."""
        return getattr(self, "total_opn" if self.objective is Objective.OPN else self.objective.value)


def _operands(net, step):
    if step.left & step.right:
        raise SequenceError(f"Step operands {group_label(step.left)} and {group_label(step.right)} overlap")
    try:
        return wd(net, step.left), wd(net, step.right), between(net, step.left, step.right)
    except NetworkError as e:
        raise SequenceError(f"Step {step} is not valid on this network: {e}") from e


def step_time_power(net, step):
    """
    P_T of a step on an additive network: WD(left) + WD(right) - W_{left-right},
    where W_{left-right} totals every edge between the two groups.

    Raises:
        ObjectiveError: If the network is not additive.
        SequenceError: If the groups overlap or are not unions of live vertices.
    """
    check_objective(net, Objective.PT)
    wd_left, wd_right, shared = _operands(net, step)
    return wd_left + wd_right - shared


def step_space_power(net, step):
    """P_S of a step on an additive network: max{WD(left), WD(right), WD(left + right)}."""
    check_objective(net, Objective.PS)
    wd_left, wd_right, _ = _operands(net, step)
    return max(wd_left, wd_right, wd(net, step.union))


def step_opn(net, step):
    """
    Operation number of a step on a multiplicative network: the product of both
    group weights and every edge touching either group, the shared edges once.
    """
    check_objective(net, Objective.OPN)
    wd_left, wd_right, shared = _operands(net, step)
    return wd_left * wd_right // shared


def step_cost(net, step):
    """All costs defined on the network's representation for one step."""
    if net.is_additive:
        return StepCost(step, pt=step_time_power(net, step), ps=step_space_power(net, step))
    return StepCost(step, opn=step_opn(net, step))


def evaluate_sequence(net, seq, objective):
    """
    Replays a full or partial sequence with contract_pair and prices every step
    on the state it is applied to.

    Parameters:
        net (TensorNetwork): The network.
        seq (ContractionSequence): The steps.
        objective (Objective or str): OPN for multiplicative networks, PT or PS for additive ones.

    Returns:
        CostReport: per-step costs plus the sum of OPN or the maxima of P_T and P_S.

    Raises:
        ObjectiveError: If the objective does not match the representation.
        SequenceError: If the steps do not form a contraction tree over the network.
    """
    objective = check_objective(net, objective)
    seq.validate(net)
    state, per_step = net, []
    for step in seq:
        per_step.append(step_cost(state, step))
        state, _ = contract_pair(state, step.left, step.right)

    if objective is Objective.OPN:
        return CostReport(objective, tuple(per_step), total_opn=sum(c.opn for c in per_step))
    if not per_step:
        return CostReport(objective, ())
    return CostReport(objective, tuple(per_step),
                      pt=max(c.pt for c in per_step), ps=max(c.ps for c in per_step))
