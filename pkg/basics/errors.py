"""
errors.py

Exception hierarchy shared by every package of the toolkit. The command line
front end maps these classes onto its documented exit codes.

Classes:
    - TensorOrderError: root of all toolkit errors.
    - NetworkError: malformed networks, unknown vertices, invalid weights.
    - ConversionError: representation conversion outside its exact domain.
    - SequenceError: contraction sequences that do not form a valid tree.
    - ObjectiveError: objective used with an incompatible representation.
    - SizeLimitError: exact solvers or deciders asked to exceed their limits.
    - InstanceError: invalid source-problem instances.
    - InfeasibleParametersError: reductions whose parameters cannot be honoured.
    - ParseError: unreadable JSON input.
    - ConfigError: invalid run configuration.
"""


class TensorOrderError(Exception):
    """Base class for all errors raised by the toolkit."""


class NetworkError(TensorOrderError, ValueError):
    pass


class ConversionError(NetworkError):
    pass


class SequenceError(TensorOrderError, ValueError):
    pass


class ObjectiveError(TensorOrderError, ValueError):
    pass


class SizeLimitError(TensorOrderError, RuntimeError):
    pass


class InstanceError(TensorOrderError, ValueError):
    pass


class InfeasibleParametersError(TensorOrderError, ValueError):
    pass


class ParseError(TensorOrderError, ValueError):
    pass


class ConfigError(TensorOrderError, ValueError):
    pass
