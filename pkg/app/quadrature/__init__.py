from app.quadrature.coefficients import (
    ADEROperators,
    AderQuadrature,
    DeCCoefficients,
    ader_operators,
    basis_integrals,
    dec_coefficients,
)
from app.quadrature.lagrange import lagrange_derivative_matrix, lagrange_eval, lagrange_matrix
from app.quadrature.nodes import (
    NodeKind,
    NodeSet,
    gauss_legendre_rule,
    gauss_lobatto_rule,
    make_nodes,
    node_residual,
)

__all__ = [
    "ADEROperators",
    "AderQuadrature",
    "DeCCoefficients",
    "NodeKind",
    "NodeSet",
    "ader_operators",
    "basis_integrals",
    "dec_coefficients",
    "gauss_legendre_rule",
    "gauss_lobatto_rule",
    "lagrange_derivative_matrix",
    "lagrange_eval",
    "lagrange_matrix",
    "make_nodes",
    "node_residual",
]
