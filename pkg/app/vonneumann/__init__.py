from app.vonneumann.amplification import (
    Coefficients,
    amplification_ad,
    amplification_disp,
    max_amplification,
    wavenumber_angles,
)
from app.vonneumann.scan import Border, Plane, ScanSpec, VonNeumannMap, extract_borders, scan

__all__ = [
    "Border",
    "Coefficients",
    "Plane",
    "ScanSpec",
    "VonNeumannMap",
    "amplification_ad",
    "amplification_disp",
    "extract_borders",
    "max_amplification",
    "scan",
    "wavenumber_angles",
]
