"""Compression-based statistical tests for random number generators."""

__version__ = "0.1.0"

from .core import (
    BitParseError,
    BitSequence,
    ContextCounts,
    ContractError,
    ResourceError,
    count_occurrences,
    empirical_entropy,
    gather_counts,
    parse_bits,
)
from .testkit import (
    BatteryConfig,
    BatteryReport,
    TestDecision,
    TestSpec,
    default_battery,
    run_battery,
    run_test,
)

__all__ = [
    "BatteryConfig",
    "BatteryReport",
    "BitParseError",
    "BitSequence",
    "ContextCounts",
    "ContractError",
    "ResourceError",
    "TestDecision",
    "TestSpec",
    "count_occurrences",
    "default_battery",
    "empirical_entropy",
    "gather_counts",
    "parse_bits",
    "run_battery",
    "run_test",
]
