from app.tableaux.ader import ader_block_tableau, ader_tableau
from app.tableaux.builder import build_method
from app.tableaux.butcher import (
    ButcherTableau,
    IMEXTableau,
    Structure,
    Tableau,
    classify,
    explicit_euler,
    implicit_euler,
    stage_blocks,
)
from app.tableaux.dec import correction_operators, dec_tableau, sdec_tableau
from app.tableaux.method import Family, MethodSpec, Mode
from app.tableaux.reduction import reduce_tableau
from app.tableaux.resolvent import StageResolvent, stability_values

__all__ = [
    "ButcherTableau",
    "Family",
    "IMEXTableau",
    "MethodSpec",
    "Mode",
    "StageResolvent",
    "Structure",
    "Tableau",
    "ader_block_tableau",
    "ader_tableau",
    "build_method",
    "classify",
    "correction_operators",
    "dec_tableau",
    "explicit_euler",
    "implicit_euler",
    "reduce_tableau",
    "sdec_tableau",
    "stability_values",
    "stage_blocks",
]
