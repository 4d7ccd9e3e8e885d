"""
scenarios.py

Named golden scenarios: a fixture network from `fixtures/`, optionally a
contraction sequence or a source instance, and the values the toolkit must
reproduce on them exactly.

Classes:
    - Scenarios: Loads one scenario by name.
"""

import os
from fractions import Fraction

from reduction.problems import Instance
from TN.serialization import load_network, load_sequence, read_json
from .errors import ConfigError

FIXTURES_DIRECTORY = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

SCENARIOS = {
    "four_tensor_mult": {
        "network": "four_tensor_mult.json",
        "sequence": "four_tensor_chain.json",
        "expected": {"per_step_opn": [3125, 78125, 15625], "total_opn": 96875},
    },
    "four_tensor_add": {
        "network": "four_tensor_add.json",
        "sequence": "four_tensor_chain.json",
        "expected": {"per_step_pt": [5, 7, 6], "pt": 7, "per_step_ps": [4, 6, 5], "ps": 6},
    },
    "three_way_mult": {
        "network": "three_way_mult.json",
        "expected": {"optimum": 100009900000000, "first_step": ("B", "C"), "other_orders": 198000000000000},
    },
    "three_way_add": {
        "network": "three_way_add.json",
        "expected": {"optimum": 12 + Fraction("1.995635194598"), "first_step_options": [("A", "B"), ("A", "C")],
                     "bc_first": 14},
    },
    "hub_source": {"network": "hub_source.json", "expected": {}},
    "seven_vertex_zero": {"network": "seven_vertex_zero.json", "expected": {}},
    "complete_5": {"network": "complete_5.json", "expected": {"optimum": 8}},
    "two_isolated": {
        "network": "two_isolated.json",
        "sequence": "two_isolated_step.json",
        "expected": {"pt": 5, "ps": 5},
    },
    "partition_123": {"instance": "partition_123.json", "expected": {"answer": True, "witness": (2,)}},
    "exact_1113": {"instance": "exact_1113.json", "expected": {"answer": False}},
    "sp_357": {"instance": "sp_357.json", "expected": {"answer": True, "witness": (1, 2)}},
}


class Scenarios:
    """
    A golden scenario with its fixture objects and expected values.

    Attributes:
        scenario_name (str): Key of SCENARIOS, e.g. "four_tensor_mult".
        network (TensorNetwork or None): The fixture network.
        sequence (ContractionSequence or None): The fixture sequence.
        instance (Instance or None): The fixture source instance.
        expected (dict): Values the scenario must reproduce.
    """
    def __init__(self, scenario_name):
        if scenario_name not in SCENARIOS:
            raise ConfigError(f"Unknown scenario {scenario_name!r}; expected one of {sorted(SCENARIOS)}")
        self.scenario_name = scenario_name
        self.entry = SCENARIOS[scenario_name]
        self.network = self.get_network()
        self.sequence = self.get_sequence()
        self.instance = self.get_instance()
        self.expected = dict(self.entry["expected"])

    def path(self, kind):
        """Absolute path of the scenario's `kind` fixture ("network", "sequence" or "instance"), or None."""
        name = self.entry.get(kind)
        return os.path.join(FIXTURES_DIRECTORY, name) if name else None

    def get_network(self):
        path = self.path("network")
        return load_network(path) if path else None

    def get_sequence(self):
        path = self.path("sequence")
        return load_sequence(path) if path else None

    def get_instance(self):
        path = self.path("instance")
        return Instance.from_dict(read_json(path)) if path else None
