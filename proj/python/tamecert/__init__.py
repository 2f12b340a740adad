"""Composition operators on C-infinity([0, 1]) with tameness certificates."""

from ._tamecert import (
    BivarFn,
    ColoReport,
    CompOp,
    Error,
    GeneratorFamily,
    Grading,
    Grid,
    GridConfig,
    InversionResult,
    Kernel2,
    SmoothFn,
    build_generator,
    colo_check,
    contraction_ratio,
    gauge_norm,
    jet_derivative,
    newton_invert,
    selftest,
)

__all__ = [
    "BivarFn",
    "ColoReport",
    "CompOp",
    "Error",
    "GeneratorFamily",
    "Grading",
    "Grid",
    "GridConfig",
    "InversionResult",
    "Kernel2",
    "SmoothFn",
    "build_generator",
    "colo_check",
    "contraction_ratio",
    "gauge_norm",
    "jet_derivative",
    "newton_invert",
    "selftest",
]
