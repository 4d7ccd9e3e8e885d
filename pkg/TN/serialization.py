"""
serialization.py

JSON codecs for networks, sequences, cost reports and solve results.

All numbers are written as decimal strings ("3", "96875") or rationals ("3/2")
so that no value ever passes through a float.

Network format:
    {"representation": "additive"|"multiplicative",
     "vertices": [{"id": str, "weight": str}],
     "edges": [{"u": str, "v": str, "weight": str}]}

Sequence format:
    {"steps": [{"left": [ids], "right": [ids]}]}
"""

from __future__ import annotations

import json
from fractions import Fraction

from basics.errors import NetworkError, ParseError
from .costmodel import ContractionSequence, ContractionStep
from .netcore import TensorNetwork, group_label, natural_key


def format_number(value):
    """Exact decimal-string form of an int or Fraction."""
    if value is None:
        return None
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return str(value)


def read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}") from e


def write_json(payload, path=None):
    """Writes a payload to `path`, or returns it as a string when no path is given."""
    text = json.dumps(payload, indent=2)
    if path is None:
        return text
    with open(path, "w") as f:
        f.write(text + "\n")
    return text


def _label(vertex):
    return vertex if isinstance(vertex, str) else group_label(vertex)


def network_to_dict(net):
    return {
        "representation": net.representation.value,
        "vertices": [{"id": _label(v), "weight": format_number(w)} for v, w in net.vertex_weights().items()],
        "edges": [{"u": _label(u), "v": _label(v), "weight": format_number(data["weight"])}
                  for u, v, data in net.graph.edges(data=True)],
    }


def network_from_dict(payload):
    """
    Raises:
        ParseError: If the payload does not follow the network format.
        NetworkError: If the described graph or its weights are invalid.
    """
    try:
        representation = payload["representation"]
        vertices = {str(v["id"]): str(v["weight"]) for v in payload["vertices"]}
        if len(vertices) != len(payload["vertices"]):
            raise NetworkError("Vertex ids must be unique")
        edges = [(str(e["u"]), str(e["v"]), str(e["weight"])) for e in payload.get("edges", [])]
    except (KeyError, TypeError) as e:
        raise ParseError(f"Malformed network description: missing or invalid field {e}") from e
    try:
        return TensorNetwork.from_weights(vertices, edges, representation)
    except ValueError as e:
        if isinstance(e, NetworkError):
            raise
        raise ParseError(f"Invalid representation {representation!r}") from e


def load_network(path):
    return network_from_dict(read_json(path))


def _ids(group):
    return sorted(group, key=natural_key)


def sequence_to_dict(seq):
    return {"steps": [{"left": _ids(s.left), "right": _ids(s.right)} for s in seq]}


def sequence_from_dict(payload):
    try:
        steps = [ContractionStep(frozenset(map(str, s["left"])), frozenset(map(str, s["right"])))
                 for s in payload["steps"]]
    except (KeyError, TypeError) as e:
        raise ParseError(f"Malformed sequence description: missing or invalid field {e}") from e
    return ContractionSequence(tuple(steps))


def load_sequence(path):
    return sequence_from_dict(read_json(path))


def report_to_dict(report):
    return {
        "objective": report.objective.value,
        "per_step": [{"left": _ids(c.step.left), "right": _ids(c.step.right),
                      "opn": format_number(c.opn), "pt": format_number(c.pt), "ps": format_number(c.ps)}
                     for c in report.per_step],
        "total_opn": format_number(report.total_opn),
        "pt": format_number(report.pt),
        "ps": format_number(report.ps),
    }


def solve_result_to_dict(result):
    return {
        "objective": result.objective.value,
        "optimum": format_number(result.optimum),
        "method": result.method,
        "sequence": sequence_to_dict(result.sequence)["steps"],
    }
