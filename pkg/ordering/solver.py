"""
solver.py

Exact optimal contraction sequences.

    OMS   minimize the total operation number (OPN) of a multiplicative network.
    CMS   minimize the time power (PT) of an additive network.
    CMS-0 CMS on a network whose vertex weights are all zero.

Two exact dynamic programs share one recurrence over sets of vertices,

    best(S) = min over splits S = P + Q of combine(best(P), best(Q), cost(P, Q)),

with combine = sum for OPN and max for PT, and the step cost taken against the
original network:

    PT(P, Q)  = (WD(P) + WD(Q) + WD(P + Q)) / 2
    OPN(P, Q) = WD(P) * WD(Q) * I(P) * I(Q) / I(P + Q)

where I(X) combines every edge inside X. Additive weights are scaled to
integers first, so every comparison is exact.

    - solve_dp runs over all subsets as bitmasks (3^n splits).
    - solve_twins runs over count vectors of twin classes (vertices with equal
      weight and equal edges to everything else), which makes highly symmetric
      networks such as complete graphs and stars cheap.

brute_force enumerates every binary contraction tree without any memo on
subproblems and prices steps through the costmodel functions; it is the
independent oracle for both programs and the only PS optimizer.

Classes:
    - SolveResult: Optimal sequence and its value.

Functions:
    - solve_dp, solve_twins, brute_force, solve: Exact solvers.
    - count_optima, iter_optima, all_optima_contain, co_optimal_splits: Optimal-tree enumeration.
    - find_structured_step, structured_steps: Steps with a given (P, Q, R) size pattern.
    - twin_classes: Twin partition of the live vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from basics.config import RunConfig
from basics.errors import NetworkError, ObjectiveError, SizeLimitError
from basics.logger import get_logger
from TN.costmodel import (ContractionSequence, ContractionStep, Objective, check_objective,
                          step_opn, step_space_power, step_time_power)
from TN.netcore import group_label, natural_key, wd
from .rewrite import step_triple

log = get_logger("solver")

METHODS = ("dp", "twins", "brute")


@dataclass(frozen=True)
class SolveResult:
    """
    Attributes:
        sequence (ContractionSequence): An optimal full contraction sequence.
        optimum (int or Fraction): Its total OPN, or its PT / PS.
        objective (Objective): The minimized objective.
        method (str): "dp", "twins" or "brute".
    """
    sequence: ContractionSequence
    optimum: object
    objective: Objective
    method: str = "dp"


def _sorted_vertices(net):
    return sorted(net.vertices, key=lambda g: natural_key(group_label(g)))


def _check_solvable(net, objective, dp_only=True):
    objective = check_objective(net, objective)
    if dp_only and objective is Objective.PS:
        raise ObjectiveError("PS is only optimized by brute_force")
    if len(net) < 2:
        raise NetworkError("Solving needs a network with at least two vertices")
    return objective


def _scale(net):
    """Common denominator of every weight (1 for multiplicative networks)."""
    if not net.is_additive:
        return 1
    weights = list(net.vertex_weights().values()) + list(net.edge_weights().values())
    return math.lcm(*(w.denominator for w in weights)) if weights else 1


def _scaled(weight, scale):
    return int(weight * scale)


class _SubsetSpace:
    """Every set of live vertices as a bitmask; bit i is the i-th vertex by id."""

    def __init__(self, net):
        self.net = net
        self.additive = net.is_additive
        self.scale = _scale(net)
        self.groups = _sorted_vertices(net)
        n = len(self.groups)
        index = {g: i for i, g in enumerate(self.groups)}
        unit = 0 if self.additive else 1

        adjacency = [[] for _ in range(n)]
        for pair, weight in net.edge_weights().items():
            u, v = (index[g] for g in pair)
            w = _scaled(weight, self.scale) if self.additive else weight
            adjacency[u].append((v, w))
            adjacency[v].append((u, w))
        single = [_scaled(wd(net, g), self.scale) if self.additive else wd(net, g) for g in self.groups]

        self.full = (1 << n) - 1
        self.size = [0] * (self.full + 1)
        self.wd = [unit] * (self.full + 1)
        self.internal = [unit] * (self.full + 1)
        for mask in range(1, self.full + 1):
            low = mask & -mask
            i = low.bit_length() - 1
            rest = mask ^ low
            self.size[mask] = self.size[rest] + 1
            if self.additive:
                conn = sum(w for j, w in adjacency[i] if rest >> j & 1)
                self.internal[mask] = self.internal[rest] + conn
                self.wd[mask] = self.wd[rest] + single[i] - 2 * conn
            else:
                conn = math.prod(w for j, w in adjacency[i] if rest >> j & 1)
                self.internal[mask] = self.internal[rest] * conn
                self.wd[mask] = self.wd[rest] * single[i] // (conn * conn)

    def states(self):
        return range(1, self.full + 1)

    def splits(self, mask):
        """Ordered by increasing P; P always holds the lowest vertex of the set."""
        low = mask & -mask
        rest = mask ^ low
        sub = 0
        while sub != rest:
            p = low | sub
            yield p, mask ^ p
            sub = (sub - rest) & rest

    def group(self, mask):
        return frozenset().union(*(g for i, g in enumerate(self.groups) if mask >> i & 1))

    def state_of(self, group):
        cover = self.net.live_cover(group)
        return sum(1 << i for i, g in enumerate(self.groups) if g in cover)

    def split_groups(self, group, p, q):
        return self.group(p), self.group(q)

    def label(self, tree):
        steps = []

        def walk(node):
            state, left, right = node
            if left is None:
                return self.group(state)
            a, b = walk(left), walk(right)
            steps.append(ContractionStep(a, b))
            return a | b

        walk(tree)
        return ContractionSequence(tuple(steps))


def _are_twins(net, u, v):
    if net.weight(u) != net.weight(v):
        return False
    return all(net.edge_weight(u, w) == net.edge_weight(v, w) for w in net.vertices if w not in (u, v))


def twin_classes(net):
    """
    Partitions the live vertices into twin classes: u and v are twins when
    W(u) = W(v) and W_{u-w} = W_{v-w} for every other vertex w. The relation
    is an equivalence, and the edges inside one class all share a weight.

    Returns:
        list[list[frozenset]]: Classes in order of their first vertex id.
    """
    classes = []
    for v in _sorted_vertices(net):
        for members in classes:
            if _are_twins(net, members[0], v):
                members.append(v)
                break
        else:
            classes.append([v])
    return classes


class _TwinSpace:
    """Count vectors over twin classes, indexed in mixed radix (first class most significant)."""

    def __init__(self, net, max_states):
        self.net = net
        self.additive = net.is_additive
        self.scale = _scale(net)
        self.classes = twin_classes(net)
        sizes = [len(c) for c in self.classes]
        count = math.prod(s + 1 for s in sizes)
        if count > max_states:
            raise SizeLimitError(f"Twin classes {sizes} need {count} states, above the limit of {max_states}")

        def scaled(weight):
            return _scaled(weight, self.scale) if self.additive else weight

        reps = [c[0] for c in self.classes]
        k_count = len(reps)
        unit = 0 if self.additive else 1
        single = [scaled(wd(net, r)) for r in reps]
        within = [scaled(net.edge_weight(c[0], c[1])) if len(c) > 1 else unit for c in self.classes]
        across = [[scaled(net.edge_weight(reps[k], reps[l])) if k != l else within[k] for l in range(k_count)]
                  for k in range(k_count)]

        self.strides = [math.prod(s + 1 for s in sizes[k + 1:]) for k in range(k_count)]
        self.vectors = [tuple(int(x) for x in m) for m in np.ndindex(*(s + 1 for s in sizes))]
        self.full = count - 1
        self.size = [sum(m) for m in self.vectors]
        self.wd = [unit] * count
        self.internal = [unit] * count
        for idx in range(1, count):
            m = self.vectors[idx]
            k = next(i for i, c in enumerate(m) if c)
            rest = idx - self.strides[k]
            rest_vector = self.vectors[rest]
            if self.additive:
                conn = sum(c * across[k][l] for l, c in enumerate(rest_vector) if c)
                self.internal[idx] = self.internal[rest] + conn
                self.wd[idx] = self.wd[rest] + single[k] - 2 * conn
            else:
                conn = math.prod(across[k][l] ** c for l, c in enumerate(rest_vector) if c)
                self.internal[idx] = self.internal[rest] * conn
                self.wd[idx] = self.wd[rest] * single[k] // (conn * conn)

    def index(self, vector):
        return sum(c * s for c, s in zip(vector, self.strides))

    def states(self):
        return range(1, self.full + 1)

    def splits(self, idx):
        """Unordered splits: each pair {P, Q} once, with index(P) <= index(Q)."""
        for p in np.ndindex(*(c + 1 for c in self.vectors[idx])):
            p_idx = self.index(p)
            q_idx = idx - p_idx
            if p_idx == 0 or q_idx == 0:
                continue
            if p_idx > q_idx:
                break
            yield p_idx, q_idx

    def state_of(self, group):
        cover = self.net.live_cover(group)
        return self.index(tuple(sum(1 for g in c if g in cover) for c in self.classes))

    def split_groups(self, group, p, q):
        cover = self.net.live_cover(group)
        left, right = [], []
        for members, take in zip(self.classes, self.vectors[p]):
            inside = [g for g in members if g in cover]
            left += inside[:take]
            right += inside[take:]
        return frozenset().union(*left), frozenset().union(*right)

    def label(self, tree):
        steps = []

        def walk(node, pools):
            state, left, right = node
            if left is None:
                return next(pool[0] for pool in pools if pool)
            taken = self.vectors[left[0]]
            a = walk(left, [pool[:t] for pool, t in zip(pools, taken)])
            b = walk(right, [pool[t:] for pool, t in zip(pools, taken)])
            steps.append(ContractionStep(a, b))
            return a | b

        walk(tree, [list(c) for c in self.classes])
        return ContractionSequence(tuple(steps))


def _step_value(space, objective, p, q, s):
    """Scaled step cost; PT comes out doubled."""
    if objective is Objective.PT:
        return space.wd[p] + space.wd[q] + space.wd[s]
    return space.wd[p] * space.wd[q] * space.internal[p] * space.internal[q] // space.internal[s]


def _unscale(space, objective, value):
    if objective is Objective.PT:
        return Fraction(value, 2 * space.scale)
    return value


def _optimize(space, objective):
    """Fills best[] and choice[] over every state; the first optimal split wins ties."""
    best = [None] * (space.full + 1)
    choice = [None] * (space.full + 1)
    is_max = objective is Objective.PT
    for s in space.states():
        if space.size[s] == 1:
            best[s] = 0
            continue
        for p, q in space.splits(s):
            step = _step_value(space, objective, p, q, s)
            value = max(best[p], best[q], step) if is_max else best[p] + best[q] + step
            if best[s] is None or value < best[s]:
                best[s] = value
                choice[s] = (p, q)
    return best, choice


def _tree(choice, s):
    if choice[s] is None:
        return (s, None, None)
    p, q = choice[s]
    return (s, _tree(choice, p), _tree(choice, q))


def _space(net, method, config):
    if method == "dp":
        if len(net) > config.dp_max_vertices:
            raise SizeLimitError(f"solve_dp accepts at most {config.dp_max_vertices} vertices, got {len(net)}")
        return _SubsetSpace(net)
    if method == "twins":
        return _TwinSpace(net, config.twin_max_states)
    raise ValueError(f"Unknown exact method {method!r}; expected 'dp' or 'twins'")


def _solved(net, objective, method, config):
    objective = _check_solvable(net, objective)
    space = _space(net, method, config or RunConfig())
    best, choice = _optimize(space, objective)
    log.debug(f"{method}: {space.full} states, optimum {_unscale(space, objective, best[space.full])}")
    return objective, space, best, choice


def solve_dp(net, objective, config=None):
    """
    Optimal OPN (multiplicative) or PT (additive) sequence by subset dynamic
    programming. Among optimal splits of a set the one whose first part has
    the smallest bitmask (vertices ordered by id) is kept.

    Parameters:
        net (TensorNetwork): Network with 2 <= |V| <= config.dp_max_vertices.
        objective (Objective or str): OPN or PT, matching the representation.
        config (RunConfig, optional): Size limits.

    Returns:
        SolveResult: sequence, optimum and objective.

    Raises:
        ObjectiveError: On a representation mismatch or PS.
        SizeLimitError: Above the vertex limit.
    """
    objective, space, best, choice = _solved(net, objective, "dp", config)
    return SolveResult(space.label(_tree(choice, space.full)),
                       _unscale(space, objective, best[space.full]), objective, "dp")


def solve_twins(net, objective, config=None):
    """
    Same optimum as solve_dp, computed over count vectors of twin classes.
    The returned sequence assigns class members in id order.

    Raises:
        SizeLimitError: If the count-vector table exceeds config.twin_max_states.
    """
    objective, space, best, choice = _solved(net, objective, "twins", config)
    return SolveResult(space.label(_tree(choice, space.full)),
                       _unscale(space, objective, best[space.full]), objective, "twins")


def _trees(items):
    """Every unordered binary tree over the tuple `items`, each exactly once."""
    if len(items) == 1:
        yield items[0]
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest)):
        for chosen in combinations(range(len(rest)), k):
            left = (first,) + tuple(rest[i] for i in chosen)
            right = tuple(r for i, r in enumerate(rest) if i not in chosen)
            for left_tree in _trees(left):
                for right_tree in _trees(right):
                    yield (left_tree, right_tree)


def brute_force(net, objective, config=None):
    """
    Exhaustive oracle: enumerates all (2n-3)!! binary contraction trees and
    prices each step on the original network with the costmodel step functions.
    Step prices are cached per operand pair; optima of subtrees are never
    stored, so every tree is scored on its own.

    Parameters:
        net (TensorNetwork): Network with 2 <= |V| <= config.brute_max_vertices.
        objective (Objective or str): OPN, PT or PS.

    Raises:
        SizeLimitError: Above the vertex limit.
    """
    config = config or RunConfig()
    objective = _check_solvable(net, objective, dp_only=False)
    if len(net) > config.brute_max_vertices:
        raise SizeLimitError(f"brute_force accepts at most {config.brute_max_vertices} vertices, got {len(net)}")
    price = {Objective.OPN: step_opn, Objective.PT: step_time_power, Objective.PS: step_space_power}[objective]
    costs = {}

    def evaluate(tree):
        if isinstance(tree, frozenset):
            return tree, []
        left, left_costs = evaluate(tree[0])
        right, right_costs = evaluate(tree[1])
        key = frozenset((left, right))
        if key not in costs:
            costs[key] = price(net, ContractionStep(left, right))
        return left | right, left_costs + right_costs + [costs[key]]

    best_tree, best_value, count = None, None, 0
    for tree in _trees(tuple(_sorted_vertices(net))):
        count += 1
        value = objective.aggregate(evaluate(tree)[1])
        if best_value is None or value < best_value:
            best_tree, best_value = tree, value
    log.debug(f"brute_force: {count} trees, optimum {best_value}")

    steps = []

    def emit(tree):
        if isinstance(tree, frozenset):
            return tree
        a, b = emit(tree[0]), emit(tree[1])
        steps.append(ContractionStep(a, b))
        return a | b

    emit(best_tree)
    return SolveResult(ContractionSequence(tuple(steps)), best_value, objective, "brute")


def solve(net, objective, method="dp", config=None):
    """Dispatches to solve_dp, solve_twins or brute_force."""
    solvers = {"dp": solve_dp, "twins": solve_twins, "brute": brute_force}
    if method not in solvers:
        raise ValueError(f"Unknown method {method!r}; expected one of {METHODS}")
    return solvers[method](net, objective, config)


def _allowed(space, objective, best, s, p, q):
    """Whether split (p, q) of s can appear in an optimal tree of the whole network."""
    step = _step_value(space, objective, p, q, s)
    if objective is Objective.PT:
        return step <= best[space.full]
    return best[p] + best[q] + step == best[s]


def count_optima(net, objective, config=None):
    """
    Number of distinct optimal contraction trees. A PT tree is optimal iff
    every step is at most the optimum; an OPN tree iff every subtree is optimal.
    """
    objective, space, best, _ = _solved(net, objective, "dp", config)
    counts = [0] * (space.full + 1)
    for s in space.states():
        if space.size[s] == 1:
            counts[s] = 1
        else:
            counts[s] = sum(counts[p] * counts[q] for p, q in space.splits(s)
                            if _allowed(space, objective, best, s, p, q))
    return counts[space.full]


def iter_optima(net, objective, config=None):
    """Yields every optimal contraction sequence, one per contraction tree."""
    objective, space, best, _ = _solved(net, objective, "dp", config)
    allowed = {}

    def trees(s):
        if space.size[s] == 1:
            yield (s, None, None)
            return
        if s not in allowed:
            allowed[s] = [(p, q) for p, q in space.splits(s) if _allowed(space, objective, best, s, p, q)]
        for p, q in allowed[s]:
            for left in trees(p):
                for right in trees(q):
                    yield (s, left, right)

    for tree in trees(space.full):
        yield space.label(tree)


def all_optima_contain(net, objective, sizes, method="dp", config=None):
    """
    True iff every optimal contraction tree has a step whose (P, Q, R) sizes
    equal `sizes` as a multiset. Decided by searching for an optimal tree that
    avoids such steps, so no tree is enumerated.
    """
    objective, space, best, _ = _solved(net, objective, method, config)
    target = tuple(sorted(sizes))
    n = space.size[space.full]
    avoids = [False] * (space.full + 1)
    for s in space.states():
        if space.size[s] == 1:
            avoids[s] = True
            continue
        rest = n - space.size[s]
        for p, q in space.splits(s):
            if (avoids[p] and avoids[q]
                    and tuple(sorted((space.size[p], space.size[q], rest))) != target
                    and _allowed(space, objective, best, s, p, q)):
                avoids[s] = True
                break
    return not avoids[space.full]


def co_optimal_splits(net, objective, group, method="twins", config=None):
    """
    Splits P + Q = group whose step completes an optimal contraction of the
    group's subtree (OPN), or stays within the optimum (PT). For twin spaces
    one labelled representative is returned per count-vector split.

    Returns:
        tuple: (optimum, list of (P, Q) group pairs)
    """
    objective, space, best, _ = _solved(net, objective, method, config)
    s = space.state_of(group)
    pairs = [space.split_groups(group, p, q) for p, q in space.splits(s)
             if _allowed(space, objective, best, s, p, q)]
    return _unscale(space, objective, best[space.full]), pairs


def structured_steps(seq, sizes, vertices=None):
    """Yields (index, GroupTriple) for every step whose sorted sizes equal sorted `sizes`."""
    target = tuple(sorted(sizes))
    for index in range(len(seq)):
        triple = step_triple(seq, index, vertices)
        if triple.sizes == target:
            yield index, triple


def find_structured_step(seq, sizes, vertices=None):
    """First step with the (P, Q, R) size pattern `sizes`, as a GroupTriple, or None."""
    return next((triple for _, triple in structured_steps(seq, sizes, vertices)), None)
