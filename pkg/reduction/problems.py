"""
problems.py

Source decision problems of the hardness reductions, their instances, exact
witness checks and brute-force deciders.

    partition        split the items into two sides of equal sum.
    exact_partition  2n items, n per side, equal sums.
    sp               subset product: some subset multiplies to K.
    ppf              partition in product form: two sides of equal product.
    sppf             strict ppf: n items, n/2 per side, equal products.

A witness is the tuple of item indices forming one side (for sp, the subset).

Instance JSON format:
    {"problem": "partition"|"exact_partition"|"sp"|"ppf"|"sppf", "items": [...], "k": optional}
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from basics.errors import InstanceError, ParseError, SizeLimitError
from basics.logger import get_logger

log = get_logger("problems")


class Problem(str, Enum):
    PARTITION = "partition"
    EXACT_PARTITION = "exact_partition"
    SP = "sp"
    PPF = "ppf"
    SPPF = "sppf"


def _positive_ints(items, minimum=1):
    values = []
    for item in items:
        if isinstance(item, bool) or not isinstance(item, int):
            try:
                value = int(str(item))
            except ValueError as e:
                raise InstanceError(f"Item {item!r} is not an integer") from e
        else:
            value = item
        if value < minimum:
            raise InstanceError(f"Item {value} is below the minimum of {minimum}")
        values.append(value)
    return tuple(values)


@dataclass(frozen=True)
class Instance:
    """
    Attributes:
        problem (Problem): Which source problem.
        items (tuple[int]): Positive integers.
        k (int, optional): Target product, subset product only.
    """
    problem: Problem
    items: tuple
    k: int | None = None

    def __post_init__(self):
        problem = Problem(self.problem)
        object.__setattr__(self, "problem", problem)
        object.__setattr__(self, "items", _positive_ints(self.items))
        if not self.items:
            raise InstanceError("An instance needs at least one item")
        # an odd sppf instance is valid and simply has no solution
        if problem is Problem.EXACT_PARTITION and len(self.items) % 2:
            raise InstanceError(f"An exact partition instance needs an even number of items, got {len(self.items)}")
        if problem is Problem.SP:
            if self.k is None:
                raise InstanceError("Subset product needs an integer K > 1")
            (k,) = _positive_ints([self.k], minimum=2)
            object.__setattr__(self, "k", k)
        elif self.k is not None:
            raise InstanceError("Only subset product instances take K")

    @property
    def total(self):
        return sum(self.items)

    @property
    def product(self):
        return math.prod(self.items)

    def __len__(self):
        return len(self.items)

    def to_dict(self):
        payload = {"problem": self.problem.value, "items": list(self.items)}
        if self.k is not None:
            payload["k"] = self.k
        return payload

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(payload["problem"], tuple(payload["items"]), payload.get("k"))
        except (KeyError, TypeError) as e:
            raise ParseError(f"Malformed instance description: missing or invalid field {e}") from e
        except ValueError as e:
            if isinstance(e, InstanceError):
                raise
            raise ParseError(f"Unknown problem {payload.get('problem')!r}") from e


def partition(items):
    return Instance(Problem.PARTITION, tuple(items))


def exact_partition(items):
    return Instance(Problem.EXACT_PARTITION, tuple(items))


def subset_product(items, k):
    return Instance(Problem.SP, tuple(items), k)


def ppf(items):
    return Instance(Problem.PPF, tuple(items))


def sppf(items):
    return Instance(Problem.SPPF, tuple(items))


@dataclass(frozen=True)
class Decision:
    """
    Attributes:
        answer (bool): YES or NO.
        witness (tuple[int], optional): Item indices of one side, on YES.
        reason (str, optional): Why the answer was reached without solving.
        details (dict): Extra values such as the solver optimum and the threshold.
    """
    answer: bool
    witness: tuple | None = None
    reason: str | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self, instance=None):
        payload = {"answer": "YES" if self.answer else "NO"}
        if self.witness is not None:
            payload["witness"] = list(self.witness)
            if instance is not None:
                other = [i for i in range(len(instance)) if i not in self.witness]
                payload["sides"] = [[instance.items[i] for i in self.witness], [instance.items[i] for i in other]]
        if self.reason:
            payload["reason"] = self.reason
        if self.details:
            payload["details"] = {k: str(v) for k, v in self.details.items()}
        return payload


def check_witness(instance, witness):
    """True iff `witness` (indices of one side or of the subset) solves the instance exactly."""
    side = set(witness)
    if not side <= set(range(len(instance))) or len(side) != len(witness):
        return False
    inside = [instance.items[i] for i in sorted(side)]
    outside = [instance.items[i] for i in range(len(instance)) if i not in side]
    problem = instance.problem
    if problem is Problem.PARTITION:
        return sum(inside) == sum(outside)
    if problem is Problem.EXACT_PARTITION:
        return len(inside) == len(outside) and sum(inside) == sum(outside)
    if problem is Problem.SP:
        return bool(inside) and math.prod(inside) == instance.k
    if problem is Problem.PPF:
        return math.prod(inside) == math.prod(outside)
    return len(inside) == len(outside) and math.prod(inside) == math.prod(outside)


def _side_sizes(instance):
    n = len(instance)
    if instance.problem in (Problem.EXACT_PARTITION, Problem.SPPF):
        return [n // 2]
    if instance.problem is Problem.SP:
        return range(1, n + 1)
    return range(0, n + 1)


def brute_decide(instance, limit=20):
    """
    Decides an instance by enumerating subsets, smallest sides first and
    lexicographic within a size; the first solving side is the witness.

    Raises:
        SizeLimitError: If the instance has more than `limit` items.
    """
    if len(instance) > limit:
        raise SizeLimitError(f"brute_decide enumerates at most {limit} items, got {len(instance)}")
    if instance.problem in (Problem.PARTITION, Problem.EXACT_PARTITION) and instance.total % 2:
        return Decision(False, reason="odd total")

    for size in _side_sizes(instance):
        for side in combinations(range(len(instance)), size):
            if check_witness(instance, side):
                log.debug(f"{instance.problem.value}: witness {side}")
                return Decision(True, side)
    return Decision(False)
