"""Attenuated Doppler and X-ray tomography on the unit disk."""

from ._core import (
    ConfigError,
    DomainError,
    FormatError,
    check_range,
    config_text,
    confusion_gap,
    default_config,
    reconstruct,
    scenario_names,
    simulate,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "FormatError",
    "check_range",
    "config_text",
    "confusion_gap",
    "default_config",
    "reconstruct",
    "scenario_names",
    "simulate",
]
