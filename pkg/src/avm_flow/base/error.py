# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.base.error** declares the exceptions raised by the library and
the warning categories used for recoverable conditions.

Every exception carries a human-readable ``message`` and a stable ``code``,
which the command line prints as ``avm-flow: error: <code>: <message>``.
"""

from typing import Optional


class AvmError(Exception):
    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InputError(AvmError):
    code = "input"


class SchemaError(AvmError):
    code = "schema"


class NoUsableRecordsError(AvmError):
    code = "no-records"

    def __init__(self, message: str = "no usable records"):
        super().__init__(message)


class ConfigError(AvmError):
    code = "config"


class ParameterError(AvmError):
    code = "parameter"


class ProjectionError(AvmError):
    code = "projection"

    def __init__(self, distance_km: float, limit_km: float):
        super().__init__(
            f"point is {distance_km:.1f} km from the projection origin, "
            f"more than {limit_km:.0f} km allowed"
        )
        self.distance_km = distance_km


class SpecError(AvmError):
    code = "spec"


class UnseenLevelError(AvmError):
    code = "unseen-level"

    def __init__(self, variable: str, level: str):
        super().__init__(f"{variable}: level '{level}' was not seen in training")
        self.variable = variable
        self.level = level


class NoComparablesError(AvmError):
    code = "no-comparables"

    def __init__(self, record_id: int, property_type: str):
        super().__init__(
            f"record {record_id}: no other '{property_type}' records in the pool"
        )
        self.record_id = record_id
        self.property_type = property_type


class ModelFormatError(AvmError):
    code = "model-format"

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{path}: {message}" if path else message)


class AvmWarning(UserWarning):
    pass


class KnotCountWarning(AvmWarning):
    pass


class EmptyLevelWarning(AvmWarning):
    pass


class ConvergenceWarning(AvmWarning):
    pass


class DegradedEstimateWarning(AvmWarning):
    pass


class SweepSkipWarning(AvmWarning):
    pass
