from .check import CheckAbs, CheckResult, can_run, default_checks, run
from .counterexample import (
    ClosedFormCheck,
    ContinuityCheck,
    EndpointCheck,
    ForcingCheck,
    GammaOneOracleCheck,
    ImageStructureCheck,
    SmoothnessCheck,
)
from .generic import ContractivityCheck, DynamicalMapCheck

__all__ = [
    "CheckAbs",
    "CheckResult",
    "run",
    "can_run",
    "default_checks",
    "DynamicalMapCheck",
    "ContractivityCheck",
    "ContinuityCheck",
    "SmoothnessCheck",
    "EndpointCheck",
    "ForcingCheck",
    "ClosedFormCheck",
    "GammaOneOracleCheck",
    "ImageStructureCheck",
]
