"""Schemas for input/output data models."""

from .input import FUZZ_FAMILIES, Block, FuzzOptions, RunOptions, ScenarioConfig
from .output import ERROR, FAIL, PASS, CheckOutcome, FuzzReport, RunReport, to_machine_json

__all__ = [
    "Block",
    "ScenarioConfig",
    "RunOptions",
    "FuzzOptions",
    "FUZZ_FAMILIES",
    "CheckOutcome",
    "RunReport",
    "FuzzReport",
    "to_machine_json",
    "PASS",
    "FAIL",
    "ERROR",
]
