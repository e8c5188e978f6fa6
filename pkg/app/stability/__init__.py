from app.stability.functions import (
    RationalFit,
    imex_stability_value,
    mass_column_defect,
    pade_check,
    pade_coefficients,
    rational_fit,
    stability_value,
    zero_det_check,
)
from app.stability.regions import (
    StabilityGrid,
    d0_region,
    d1_region,
    default_d0_samples,
    default_d1_samples,
    imaginary_axis_excess,
    left_half_plane_max,
    minion_region,
    negative_real_border,
    scan_region,
    wedge_angle,
)

__all__ = [
    "RationalFit",
    "StabilityGrid",
    "d0_region",
    "d1_region",
    "default_d0_samples",
    "default_d1_samples",
    "imaginary_axis_excess",
    "imex_stability_value",
    "left_half_plane_max",
    "mass_column_defect",
    "minion_region",
    "negative_real_border",
    "pade_check",
    "pade_coefficients",
    "rational_fit",
    "scan_region",
    "stability_value",
    "wedge_angle",
]
