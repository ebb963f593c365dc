"""Mixed-norm alpha-modulation spaces on sampled periodic grids."""

from ._amod import (
    ConfigError,
    Grid,
    GuardViolation,
    ResourceGuard,
    apply,
    band_profile,
    bessel_lift,
    calibration,
    desk_grid,
    forward_transform,
    inverse_transform,
    iterated_maximal,
    lifting_experiment,
    mixed_norm,
    modulation_norm,
    partition_deviation,
    plan,
    read_field,
    symbols,
    write_field,
)

__all__ = [
    "ConfigError",
    "Grid",
    "GuardViolation",
    "ResourceGuard",
    "apply",
    "band_profile",
    "bessel_lift",
    "calibration",
    "desk_grid",
    "forward_transform",
    "inverse_transform",
    "iterated_maximal",
    "lifting_experiment",
    "mixed_norm",
    "modulation_norm",
    "partition_deviation",
    "plan",
    "read_field",
    "symbols",
    "write_field",
]
