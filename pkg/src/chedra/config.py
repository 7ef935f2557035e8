"""Numeric tolerance policy.

All closed-form identities in this package are exact up to floating-point
rounding, so the default tolerances only have to absorb rounding noise.
The base relative tolerance can be overridden with the CHEDRA_TOLERANCE
environment variable.
"""
import os

DEFAULT_TOLERANCE = 1e-9

# absolute floor used when quantities are compared near zero
ABS_TOLERANCE = 1e-12

# thresholds of the independent numerical certificates
PLANARITY_TOLERANCE = 1e-10
ISOMETRY_TOLERANCE = 1e-8
COLLINEARITY_TOLERANCE = 1e-10

# rigid-foldability oracle: normalized closure residual and the minimum
# driving-angle interval that counts as a finite (not infinitesimal) motion
ORACLE_RESIDUAL_TOLERANCE = 1e-8
ORACLE_WITNESS_INTERVAL = 1e-2

# flexion-range endpoint refinement
RANGE_GRID_SAMPLES = 256
RANGE_BISECTION_TOLERANCE = 1e-9


def base_tolerance() -> float:
    """Relative tolerance for geometric identity checks."""
    raw = os.environ.get("CHEDRA_TOLERANCE")
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"CHEDRA_TOLERANCE is not a number: {raw!r}") from exc
    if value <= 0:
        raise ValueError("CHEDRA_TOLERANCE must be positive")
    return value
