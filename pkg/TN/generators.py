"""
generators.py

Seeded network and sequence generators for fixtures and property suites.

Vertex ids are "v0", "v1", ... in every generated network. All randomness
flows through a numpy Generator, so equal seeds give identical networks.

Functions:
    - make_rng: Generator from a seed or an existing Generator.
    - random_network: Erdos-Renyi style graph with random exact weights.
    - twin_network: Random network whose vertices fall into given twin classes.
    - complete_network: K_n with uniform vertex and edge weights.
    - star_network: Center joined to leaves, with explicit weights.
    - tree_network: Random labelled tree from a Pruefer sequence.
    - random_sequence: Random full contraction tree of a network.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np

from basics.errors import NetworkError
from .costmodel import ContractionSequence, ContractionStep
from .netcore import Representation, TensorNetwork, make_group


def make_rng(seed=None):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def vertex_ids(n):
    return [f"v{i}" for i in range(n)]


def _check_size(n, minimum=2):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < minimum:
        raise NetworkError(f"Network size must be an integer of at least {minimum}, got {n!r}")


def _random_weight(rng, representation, max_weight, denominator, allow_zero=True):
    if representation is Representation.MULTIPLICATIVE:
        return int(rng.integers(1, max_weight + 1))
    low = 0 if allow_zero else 1
    return Fraction(int(rng.integers(low, max_weight * denominator + 1)), denominator)


def random_network(n, rng=None, edge_prob=0.6, max_weight=4, representation=Representation.ADDITIVE,
                   zero_vertices=False, denominator=1):
    """
    Random network on n vertices; every pair is an edge with probability `edge_prob`.

    Parameters:
        n (int): Number of vertices, at least 1.
        rng (numpy.random.Generator or int, optional): Randomness source or seed.
        edge_prob (float): Edge probability.
        max_weight (int): Upper bound of the weights. Additive weights are
                          multiples of 1/denominator in [0, max_weight]; edges are
                          at least 1/denominator. Multiplicative weights are in [1, max_weight].
        representation (Representation or str): Weight representation.
        zero_vertices (bool): Give every vertex weight zero (additive only), i.e. a CMS-0 network.
        denominator (int): Denominator of additive weights.

    Returns:
        TensorNetwork: The network.
    """
    _check_size(n, minimum=1)
    rng = make_rng(rng)
    representation = Representation(representation)
    if max_weight < 1 or denominator < 1 or not 0 <= edge_prob <= 1:
        raise NetworkError("max_weight and denominator must be positive and edge_prob in [0, 1]")
    if zero_vertices and representation is Representation.MULTIPLICATIVE:
        raise NetworkError("Zero vertex weights only exist in the additive representation")

    ids = vertex_ids(n)
    vertices = {v: (Fraction(0) if zero_vertices else _random_weight(rng, representation, max_weight, denominator))
                for v in ids}
    edges = {}
    for u, v in combinations(ids, 2):
        if rng.random() < edge_prob:
            edges[(u, v)] = _random_weight(rng, representation, max_weight, denominator, allow_zero=False)
    return TensorNetwork.from_weights(vertices, edges, representation)


def twin_network(class_sizes, rng=None, max_weight=4, representation=Representation.ADDITIVE, zero_vertices=False):
    """
    Random network whose vertices split into twin classes of the given sizes:
    all members of a class share their vertex weight and their edge weight to
    every other vertex, and edges inside a class share one weight.
    """
    rng = make_rng(rng)
    representation = Representation(representation)
    _check_size(sum(class_sizes), minimum=1)
    ids = vertex_ids(sum(class_sizes))
    classes, start = [], 0
    for size in class_sizes:
        classes.append(ids[start:start + size])
        start += size

    def edge_weight():
        # absent edges count as the identity, so zero (or one) is allowed here
        if representation is Representation.MULTIPLICATIVE:
            return int(rng.integers(1, max_weight + 1))
        return Fraction(int(rng.integers(0, max_weight + 1)))

    vertices, edges = {}, {}
    for k, members in enumerate(classes):
        weight = Fraction(0) if zero_vertices else _random_weight(rng, representation, max_weight, 1)
        vertices.update({v: weight for v in members})
        for l in range(k, len(classes)):
            w = edge_weight()
            if w == (0 if representation is Representation.ADDITIVE else 1):
                continue
            pairs = combinations(members, 2) if l == k else ((u, v) for u in members for v in classes[l])
            edges.update({pair: w for pair in pairs})
    return TensorNetwork.from_weights(vertices, edges, representation)


def complete_network(n, edge_weight=1, vertex_weight=0, representation=Representation.ADDITIVE):
    """K_n with every edge weighing `edge_weight` and every vertex `vertex_weight`."""
    _check_size(n)
    ids = vertex_ids(n)
    return TensorNetwork.from_weights({v: vertex_weight for v in ids},
                                      {pair: edge_weight for pair in combinations(ids, 2)},
                                      representation)


def star_network(center_weight, edge_weights, leaf_weight=1, representation=Representation.MULTIPLICATIVE):
    """
    Star with center "v0" of weight `center_weight` and leaves "v1".."vn"; the
    edge to leaf i weighs edge_weights[i - 1].
    """
    _check_size(len(edge_weights), minimum=1)
    ids = vertex_ids(len(edge_weights) + 1)
    vertices = {ids[0]: center_weight, **{v: leaf_weight for v in ids[1:]}}
    edges = {(ids[0], v): w for v, w in zip(ids[1:], edge_weights)}
    return TensorNetwork.from_weights(vertices, edges, representation)


def tree_network(n, rng=None, max_weight=4, representation=Representation.ADDITIVE, zero_vertices=False):
    """Random labelled tree on n vertices, drawn uniformly through a Pruefer sequence."""
    _check_size(n)
    rng = make_rng(rng)
    representation = Representation(representation)
    if n == 2:
        tree = nx.path_graph(2)
    else:
        tree = nx.from_prufer_sequence([int(i) for i in rng.integers(0, n, size=n - 2)])
    ids = vertex_ids(n)
    vertices = {v: (Fraction(0) if zero_vertices else _random_weight(rng, representation, max_weight, 1))
                for v in ids}
    edges = {(ids[u], ids[v]): _random_weight(rng, representation, max_weight, 1, allow_zero=False)
             for u, v in sorted(tree.edges)}
    return TensorNetwork.from_weights(vertices, edges, representation)


def random_sequence(net, rng=None):
    """
    A random full contraction sequence: repeatedly merges two live groups
    picked uniformly at random.
    """
    rng = make_rng(rng)
    live = list(net.vertices)
    if len(live) < 2:
        raise NetworkError("A contraction sequence needs at least two vertices")
    steps = []
    while len(live) > 1:
        i, j = sorted(int(k) for k in rng.choice(len(live), size=2, replace=False))
        left, right = live[i], live[j]
        steps.append(ContractionStep(make_group(left), make_group(right)))
        del live[j], live[i]
        live.append(left | right)
    return ContractionSequence(tuple(steps))
