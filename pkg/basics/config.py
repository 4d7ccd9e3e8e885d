"""
config.py

Defines the configurable parameters of a toolkit run: solver size limits,
random seed and case counts of the property suites, output location and the
exact method used by reduction deciders.

Parameters are read, lowest to highest precedence, from the defaults below,
from a JSON file named by the environment variable TN_ORDER_CONFIG, and from
explicit overrides (the command line flags).

Classes:
    - RunConfig: Configuration for evaluation, solving, reductions and checks.
"""

import json
import os

from .errors import ConfigError

CONFIG_ENV_VAR = "TN_ORDER_CONFIG"
DECIDE_METHODS = ("dp", "twins")


class RunConfig:
    def __init__(self, **overrides):
        # Solver limits
        self.dp_max_vertices = 20                   # largest network solve_dp accepts
        self.brute_max_vertices = 8                 # largest network brute_force accepts
        self.twin_max_states = 200000               # largest count-vector table solve_twins builds

        # Property suites
        self.seed = 0                               # seed of every randomized suite
        self.cases = 100                            # random cases per suite
        self.max_suite_vertices = 6                 # largest random network in the suites
        self.complete_sizes = (2, 3, 4)             # n values of the K_{2n+1} suites

        # Reductions
        self.decide_method = "twins"                # exact solver behind gadget decisions: "dp" or "twins"
        self.max_weight_bits = 1_000_000            # bit budget of gadget weights
        self.subset_limit = 20                      # largest instance brute_decide enumerates
        self.general_delta_max_terms = 20           # largest weight list the general gap mode enumerates

        # Output
        self.out = None                             # path of the JSON report, None for stdout only

        self.update(**overrides)

    def update(self, **overrides):
        """
        Overrides parameters by name, ignoring None values.

        Raises:
            ConfigError: If a name is not a known parameter or a value is invalid.
        """
        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(self, key):
                raise ConfigError(f"Unknown configuration parameter '{key}'")
            if key == "complete_sizes":
                value = tuple(int(n) for n in value)
            setattr(self, key, value)
        self.validate()
        return self

    def validate(self):
        for key in ("dp_max_vertices", "brute_max_vertices", "max_suite_vertices"):
            if int(getattr(self, key)) < 2:
                raise ConfigError(f"'{key}' must be at least 2, got {getattr(self, key)}")
        if int(self.cases) < 1:
            raise ConfigError(f"'cases' must be positive, got {self.cases}")
        if self.decide_method not in DECIDE_METHODS:
            raise ConfigError(f"'decide_method' must be one of {DECIDE_METHODS}, got {self.decide_method!r}")
        if any(n < 1 for n in self.complete_sizes):
            raise ConfigError(f"'complete_sizes' must be positive, got {self.complete_sizes}")

    @classmethod
    def from_file(cls, path, **overrides):
        try:
            with open(path) as f:
                values = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read configuration file {path}: {e}") from e
        if not isinstance(values, dict):
            raise ConfigError(f"Configuration file {path} must hold a JSON object")
        config = cls(**values)
        return config.update(**overrides)

    @classmethod
    def from_env(cls, **overrides):
        """Builds the configuration from TN_ORDER_CONFIG (if set) and the overrides."""
        path = os.getenv(CONFIG_ENV_VAR)
        if path:
            return cls.from_file(path, **overrides)
        return cls(**overrides)

    def to_dict(self):
        values = dict(vars(self))
        values["complete_sizes"] = list(self.complete_sizes)
        return values
