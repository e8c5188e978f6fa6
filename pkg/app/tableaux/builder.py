from __future__ import annotations

from app.quadrature import ader_operators, dec_coefficients, make_nodes
from app.tableaux.ader import ader_tableau
from app.tableaux.butcher import ButcherTableau, IMEXTableau
from app.tableaux.dec import dec_tableau, sdec_tableau
from app.tableaux.method import Family, MethodSpec
from app.tableaux.reduction import reduce_tableau


def build_method(spec: MethodSpec, reduce: bool = False) -> ButcherTableau | IMEXTableau:
    nodes = make_nodes(spec.kind, spec.M)
    match spec.family:
        case Family.DEC:
            tableau = dec_tableau(dec_coefficients(nodes), spec)
        case Family.SDEC:
            tableau = sdec_tableau(dec_coefficients(nodes), spec)
        case Family.ADER:
            tableau = ader_tableau(ader_operators(nodes, spec.quadrature), spec)
    return reduce_tableau(tableau) if reduce else tableau
