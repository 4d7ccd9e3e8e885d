"""
netcore.py

Tensor networks as weighted undirected simple graphs, the pairwise contraction
rule, and conversion between the additive and multiplicative representations.

Every vertex of a network is keyed by its group: the frozenset of original
vertex ids merged into it. An original vertex "A" is the group {"A"}; the
vertex produced by contracting "A" with "B" is {"A", "B"}. Sequences can
therefore always refer to stable original ids.

Additive weights are exact `Fraction`s (index counts or logarithms of
dimensions), multiplicative weights are Python ints (dimension products).
An absent edge carries the identity weight: 0 additive, 1 multiplicative.

Classes:
    - Representation: additive or multiplicative weights.
    - TensorNetwork: immutable weighted graph over groups of original vertex ids.

Functions:
    - contract_pair: Contracts two live vertices into one.
    - contract_group: Contracts every live vertex inside a group.
    - wd: Weight plus degree of a group.
    - between: Combined weight of the edges joining two disjoint groups.
    - convert: Exact change of representation.
"""

from __future__ import annotations

import re
from enum import Enum
from fractions import Fraction
from functools import cached_property

import networkx as nx

from basics.errors import ConversionError, NetworkError


class Representation(str, Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


def natural_key(vertex_id):
    """Sort key ordering "v2" before "v10"."""
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", str(vertex_id))]


def make_group(ids):
    """
    Builds a group (frozenset of original vertex ids) from an id or an iterable of ids.

    Raises:
        NetworkError: If the group is empty.
    """
    if isinstance(ids, str):
        ids = (ids,)
    group = frozenset(ids)
    if not group:
        raise NetworkError("A group needs at least one member")
    return group


def group_label(group):
    """Readable name of a group, e.g. "A+B"."""
    return "+".join(sorted(group, key=natural_key))


def coerce_weight(value, representation):
    """
    Converts a user supplied weight to the exact type of the representation.

    Parameters:
        value (int, Fraction or str): The weight; strings may be "3", "1.5" or "3/2".
        representation (Representation): Target representation.

    Returns:
        Fraction (additive) or int (multiplicative).

    Raises:
        NetworkError: If the value is a float, malformed, negative, or not a
                      positive integer in the multiplicative representation.
    """
    representation = Representation(representation)
    if isinstance(value, (bool, float)):
        raise NetworkError(f"Weight {value!r} must be an exact integer, rational or decimal string")
    if representation is Representation.ADDITIVE:
        try:
            weight = Fraction(value)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise NetworkError(f"Invalid additive weight {value!r}") from e
        if weight < 0:
            raise NetworkError(f"Additive weight {value!r} is negative")
        return weight

    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise NetworkError(f"Multiplicative weight {value} is not an integer")
        value = value.numerator
    try:
        weight = int(value)
    except (TypeError, ValueError) as e:
        raise NetworkError(f"Invalid multiplicative weight {value!r}") from e
    if weight < 1:
        raise NetworkError(f"Multiplicative weight {value!r} must be at least 1")
    return weight


class TensorNetwork:
    """
    An immutable tensor network G(V, E, W_v, W_e) under one representation.

    Attributes:
        graph (networkx.Graph): Frozen graph; nodes are groups, node and edge
                                attribute "weight" holds the weight.
        representation (Representation): Additive or multiplicative.
    """

    def __init__(self, graph, representation):
        self.representation = Representation(representation)
        if nx.number_of_selfloops(graph):
            raise NetworkError("Self-loops are not allowed")
        clean = nx.Graph()
        seen = set()
        for node, data in graph.nodes(data=True):
            group = make_group(node)
            if seen & group:
                raise NetworkError(f"Vertex {group_label(group)} overlaps another vertex")
            seen |= group
            if "weight" not in data:
                raise NetworkError(f"Vertex {group_label(group)} has no weight")
            clean.add_node(group, weight=coerce_weight(data["weight"], self.representation))
        for u, v, data in graph.edges(data=True):
            if "weight" not in data:
                raise NetworkError(f"Edge {group_label(make_group(u))}-{group_label(make_group(v))} has no weight")
            clean.add_edge(make_group(u), make_group(v), weight=coerce_weight(data["weight"], self.representation))
        self.graph = nx.freeze(clean)

    @classmethod
    def _trusted(cls, graph, representation):
        """Wraps an already validated graph without copying it."""
        net = cls.__new__(cls)
        net.representation = representation
        net.graph = nx.freeze(graph)
        return net

    @classmethod
    def from_weights(cls, vertices, edges=(), representation=Representation.ADDITIVE):
        """
        Builds a network from plain id/weight data.

        Parameters:
            vertices (dict): Maps vertex id (str) to weight.
            edges (dict or iterable): Maps (u, v) to weight, or yields (u, v, weight).
            representation (Representation or str): Weight representation.

        Raises:
            NetworkError: On self-loops, repeated unordered pairs, unknown endpoints
                          or invalid weights.
        """
        representation = Representation(representation)
        graph = nx.Graph()
        for vertex_id, weight in vertices.items():
            graph.add_node(make_group(str(vertex_id)), weight=coerce_weight(weight, representation))
        items = edges.items() if isinstance(edges, dict) else ((u, v, w) for u, v, w in edges)
        for item in items:
            if isinstance(edges, dict):
                (u, v), weight = item
            else:
                u, v, weight = item
            gu, gv = make_group(str(u)), make_group(str(v))
            if gu == gv:
                raise NetworkError(f"Self-loop on vertex {u}")
            for g, name in ((gu, u), (gv, v)):
                if g not in graph:
                    raise NetworkError(f"Edge endpoint {name} is not a vertex")
            if graph.has_edge(gu, gv):
                raise NetworkError(f"Edge {u}-{v} appears twice")
            graph.add_edge(gu, gv, weight=coerce_weight(weight, representation))
        return cls._trusted(graph, representation)

    # ------------------------------------------------------------------
    # Weight algebra

    @property
    def identity(self):
        return Fraction(0) if self.representation is Representation.ADDITIVE else 1

    def combine(self, a, b):
        """The contraction of two weights: + additive, x multiplicative."""
        return a + b if self.representation is Representation.ADDITIVE else a * b

    @property
    def is_additive(self):
        return self.representation is Representation.ADDITIVE

    # ------------------------------------------------------------------
    # Vertices and edges

    @property
    def vertices(self):
        """Live vertices (groups) in insertion order."""
        return list(self.graph.nodes)

    @cached_property
    def owner(self):
        """Maps every original vertex id to the live vertex containing it."""
        return {member: node for node in self.graph.nodes for member in node}

    @property
    def members(self):
        return frozenset(self.owner)

    def __len__(self):
        return self.graph.number_of_nodes()

    def __contains__(self, vertex):
        try:
            self.resolve(vertex)
        except NetworkError:
            return False
        return True

    def resolve(self, vertex):
        """
        Returns the live vertex named by an original id or a group.

        Raises:
            NetworkError: If no live vertex equals the given id or group.
        """
        group = make_group(vertex)
        if group not in self.graph:
            raise NetworkError(f"Unknown vertex {group_label(group)}")
        return group

    def live_cover(self, group):
        """
        Returns the live vertices whose union is exactly `group`.

        Raises:
            NetworkError: If a member is unknown or the group splits a live vertex.
        """
        group = make_group(group)
        cover = set()
        for member in group:
            if member not in self.owner:
                raise NetworkError(f"Unknown vertex {member}")
            cover.add(self.owner[member])
        if sum(len(node) for node in cover) != len(group):
            raise NetworkError(f"Group {group_label(group)} splits a live vertex")
        return cover

    def weight(self, vertex):
        return self.graph.nodes[self.resolve(vertex)]["weight"]

    def edge_weight(self, u, v):
        gu, gv = self.resolve(u), self.resolve(v)
        data = self.graph.get_edge_data(gu, gv)
        return self.identity if data is None else data["weight"]

    def vertex_weights(self):
        return {node: data["weight"] for node, data in self.graph.nodes(data=True)}

    def edge_weights(self):
        """Maps frozenset({u, v}) of live vertices to the edge weight."""
        return {frozenset((u, v)): data["weight"] for u, v, data in self.graph.edges(data=True)}

    def is_cms0(self):
        """True for additive networks whose vertex weights are all zero."""
        return self.is_additive and all(w == 0 for w in self.vertex_weights().values())

    def __eq__(self, other):
        if not isinstance(other, TensorNetwork):
            return NotImplemented
        return (self.representation is other.representation
                and self.vertex_weights() == other.vertex_weights()
                and self.edge_weights() == other.edge_weights())

    __hash__ = None

    def __repr__(self):
        return (f"TensorNetwork({self.representation.value}, "
                f"{len(self)} vertices, {self.graph.number_of_edges()} edges)")


def contract_pair(net, u, v):
    """
    Contracts two live vertices into one.

    The new vertex weight is W(u) (+) W(v); for every other vertex w the edge
    to the new vertex weighs W_{u-w} (+) W_{v-w}, absent edges counting as the
    identity; the edge u-v disappears. The vertices need not be adjacent.

    Parameters:
        net (TensorNetwork): The network.
        u, v (str or frozenset): Original ids or live groups.

    Returns:
        tuple: (contracted network, id of the new vertex, i.e. the union group)

    Raises:
        NetworkError: If a vertex is unknown or u == v.
    """
    gu, gv = net.resolve(u), net.resolve(v)
    if gu == gv:
        raise NetworkError(f"Cannot contract vertex {group_label(gu)} with itself")
    merged = gu | gv
    graph = nx.Graph()
    for node, data in net.graph.nodes(data=True):
        if node not in (gu, gv):
            graph.add_node(node, weight=data["weight"])
    graph.add_node(merged, weight=net.combine(net.graph.nodes[gu]["weight"], net.graph.nodes[gv]["weight"]))
    for a, b, data in net.graph.edges(data=True):
        ends = {a, b}
        if ends == {gu, gv}:
            continue
        if ends & {gu, gv}:
            other = b if a in (gu, gv) else a
            previous = graph.get_edge_data(merged, other)
            weight = data["weight"] if previous is None else net.combine(previous["weight"], data["weight"])
            graph.add_edge(merged, other, weight=weight)
        else:
            graph.add_edge(a, b, weight=data["weight"])
    return TensorNetwork._trusted(graph, net.representation), merged


def contract_group(net, group):
    """
    Contracts all live vertices inside `group` into a single vertex.

    Returns:
        tuple: (contracted network, the group)
    """
    cover = sorted(net.live_cover(group), key=lambda g: natural_key(group_label(g)))
    current, acc = net, cover[0]
    for node in cover[1:]:
        current, acc = contract_pair(current, acc, node)
    return current, acc


def wd(net, group):
    """
    Weight plus degree of a group: the weight the vertex resulting from
    contracting the group internally would have, combined with the weights of
    all edges leaving the group.

    Parameters:
        net (TensorNetwork): The network.
        group (str or iterable): Original ids forming a union of live vertices.

    Raises:
        NetworkError: If the group is empty, has unknown members or splits a live vertex.
    """
    cover = net.live_cover(group)
    total = net.identity
    for node in cover:
        total = net.combine(total, net.graph.nodes[node]["weight"])
        for nbr, data in net.graph.adj[node].items():
            if nbr not in cover:
                total = net.combine(total, data["weight"])
    return total


def between(net, p, q):
    """
    Combined weight W_{P-Q} of all edges joining two disjoint groups.

    Raises:
        NetworkError: If the groups overlap or are not unions of live vertices.
    """
    cover_p, cover_q = net.live_cover(p), net.live_cover(q)
    if cover_p & cover_q:
        raise NetworkError(f"Groups {group_label(make_group(p))} and {group_label(make_group(q))} overlap")
    total = net.identity
    for node in cover_p:
        for nbr, data in net.graph.adj[node].items():
            if nbr in cover_q:
                total = net.combine(total, data["weight"])
    return total


def exact_log(value, base):
    """Exponent k with base**k == value, or None when value is not a power of base."""
    exponent = 0
    while value % base == 0:
        value //= base
        exponent += 1
    return exponent if value == 1 else None


def convert(net, target, base):
    """
    Converts a network to the other representation, exactly.

    Multiplicative -> additive takes log_base of every weight, which must be an
    exact power of the base. Additive -> multiplicative raises the base to every
    weight, which must be a non-negative integer. Converting to the current
    representation returns the network unchanged.

    Parameters:
        net (TensorNetwork): The network.
        target (Representation or str): Target representation.
        base (int): Logarithm base, at least 2.

    Raises:
        ConversionError: On a non-power weight, a non-integer exponent, or base < 2.
    """
    target = Representation(target)
    if isinstance(base, bool) or not isinstance(base, int) or base < 2:
        raise ConversionError(f"Base must be an integer of at least 2, got {base!r}")
    if target is net.representation:
        return net

    def mapped(weight, what):
        if target is Representation.ADDITIVE:
            exponent = exact_log(weight, base)
            if exponent is None:
                raise ConversionError(f"{what} weight {weight} is not a power of {base}")
            return Fraction(exponent)
        if weight.denominator != 1:
            raise ConversionError(f"{what} weight {weight} is not an integer exponent")
        return base ** weight.numerator

    graph = nx.Graph()
    for node, data in net.graph.nodes(data=True):
        graph.add_node(node, weight=mapped(data["weight"], f"Vertex {group_label(node)}"))
    for u, v, data in net.graph.edges(data=True):
        graph.add_edge(u, v, weight=mapped(data["weight"], f"Edge {group_label(u)}-{group_label(v)}"))
    return TensorNetwork._trusted(graph, target)
