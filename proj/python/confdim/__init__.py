"""Dimension estimates and separation diagnostics for conformal interval IFS."""

from ._core import (
    ConfdimError,
    DimensionEstimate,
    System,
    assouad_estimate,
    bowen_dimension,
    box_dimension,
    report,
    separation,
    tangent,
)

__all__ = [
    "ConfdimError",
    "DimensionEstimate",
    "System",
    "assouad_estimate",
    "bowen_dimension",
    "box_dimension",
    "report",
    "separation",
    "tangent",
]
