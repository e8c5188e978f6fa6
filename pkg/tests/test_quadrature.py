import numpy as np
import pytest

from app.core.errors import ConfigurationError
from app.quadrature import (
    AderQuadrature,
    NodeKind,
    ader_operators,
    dec_coefficients,
    gauss_legendre_rule,
    gauss_lobatto_rule,
    lagrange_derivative_matrix,
    lagrange_eval,
    lagrange_matrix,
    make_nodes,
    node_residual,
)

KINDS = ["eq", "glb", "glg"]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 12])
def test_gauss_legendre_exact_up_to_degree_2n_minus_1(n):
    points, weights = gauss_legendre_rule(n)
    assert np.all((points > 0) & (points < 1))
    for degree in range(2 * n):
        assert weights @ points**degree == pytest.approx(1.0 / (degree + 1), abs=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 9])
def test_gauss_lobatto_contains_endpoints_and_is_exact(n):
    points, weights = gauss_lobatto_rule(n)
    assert points[0] == 0.0 and points[-1] == 1.0
    assert np.all(np.diff(points) > 0)
    for degree in range(2 * n - 2):
        assert weights @ points**degree == pytest.approx(1.0 / (degree + 1), abs=1e-14)


def test_known_lobatto_nodes():
    points, _ = gauss_lobatto_rule(3)
    np.testing.assert_allclose(points, [0.0, 0.5, 1.0], atol=1e-15)
    points, _ = gauss_lobatto_rule(4)
    np.testing.assert_allclose(points, 0.5 + 0.5 * np.array([-1, -np.sqrt(0.2), np.sqrt(0.2), 1]), atol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("M", [1, 4, 10])
def test_nodes_are_increasing_and_symmetric(kind, M):
    nodes = make_nodes(kind, M)
    assert nodes.size == M + 1
    assert np.all(np.diff(nodes.nodes) > 0)
    np.testing.assert_allclose(nodes.nodes + nodes.nodes[::-1], 1.0, atol=1e-15)
    assert node_residual(nodes) < 1e-13


def test_node_kind_aliases():
    assert NodeKind.parse("gll") is NodeKind.GAUSS_LOBATTO
    assert NodeKind.parse("Legendre") is NodeKind.GAUSS_LEGENDRE
    assert NodeKind.GAUSS_LOBATTO.short == "glb"
    with pytest.raises(ConfigurationError):
        NodeKind.parse("chebyshev")


def test_make_nodes_rejects_degenerate_degrees():
    with pytest.raises(ConfigurationError):
        make_nodes("glb", 0)
    with pytest.raises(ConfigurationError):
        make_nodes("eq", 31)
    assert make_nodes("glg", 0).nodes.tolist() == [0.5]


@pytest.mark.parametrize("kind", KINDS)
def test_lagrange_basis_is_cardinal(kind):
    nodes = make_nodes(kind, 5)
    np.testing.assert_allclose(lagrange_matrix(nodes, nodes.nodes), np.eye(6), atol=1e-13)
    t = np.linspace(0, 1, 17)
    np.testing.assert_allclose(lagrange_matrix(nodes, t).sum(axis=1), 1.0, atol=1e-13)
    np.testing.assert_allclose(lagrange_derivative_matrix(nodes, t).sum(axis=1), 0.0, atol=1e-10)


def test_lagrange_derivative_reproduces_polynomials():
    nodes = make_nodes("glb", 4)
    t = np.linspace(0, 1, 9)
    values = nodes.nodes**3
    np.testing.assert_allclose(lagrange_derivative_matrix(nodes, t) @ values, 3 * t**2, atol=1e-12)


@pytest.mark.parametrize("kind", ["eq", "glb"])
@pytest.mark.parametrize("M", range(1, 11))
def test_dec_integrals_of_one(kind, M):
    coeffs = dec_coefficients(make_nodes(kind, M))
    np.testing.assert_allclose(coeffs.theta.sum(axis=1), coeffs.beta, atol=1e-12)
    np.testing.assert_allclose(coeffs.delta[1:].sum(axis=1), np.diff(coeffs.beta), atol=1e-12)
    np.testing.assert_allclose(coeffs.theta[0], 0.0, atol=1e-15)


def test_dec_integrals_for_two_nodes():
    coeffs = dec_coefficients(make_nodes("eq", 1))
    np.testing.assert_allclose(coeffs.theta, [[0, 0], [0.5, 0.5]], atol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("M", range(1, 11))
def test_ader_mass_matrix_maps_ones_to_left_values(kind, M):
    ops = ader_operators(make_nodes(kind, M))
    np.testing.assert_allclose(np.linalg.solve(ops.massM, ops.phi0), 1.0, atol=1e-10)
    np.testing.assert_allclose(ops.b.sum(), 1.0, atol=1e-13)


@pytest.mark.parametrize("kind", ["glb", "glg"])
def test_ader_quadrature_variants(kind):
    nodal = ader_operators(make_nodes(kind, 3), "newton-cotes")
    exact = ader_operators(make_nodes(kind, 3), AderQuadrature.EXACT)
    assert nodal.quadrature is AderQuadrature.NODAL
    assert exact.quadrature is AderQuadrature.EXACT
    # the mass matrix is integrated exactly by either rule
    np.testing.assert_allclose(nodal.massM, exact.massM, atol=1e-12)
    with pytest.raises(ConfigurationError):
        ader_operators(make_nodes(kind, 3), "simpson")


def test_equispaced_ader_defaults_to_exact_quadrature():
    nodes = make_nodes("eq", 2)
    ops = ader_operators(nodes)
    assert ops.quadrature is AderQuadrature.EXACT
    # Simpson weights on the three nodes
    np.testing.assert_allclose(ops.b, [1 / 6, 2 / 3, 1 / 6], atol=1e-14)
    newton_cotes = ader_operators(nodes, "newton-cotes")
    np.testing.assert_allclose(newton_cotes.R, np.diag([1 / 6, 2 / 3, 1 / 6]), atol=1e-14)
    assert ader_operators(make_nodes("glb", 2)).quadrature is AderQuadrature.NODAL


@pytest.mark.parametrize("order", [7, 8])
def test_high_order_newton_cotes_ader_is_ill_conditioned(order):
    newton_cotes = ader_operators(make_nodes("eq", order - 1), "nodal")
    lobatto = ader_operators(make_nodes("glb", -(-order // 2)))
    assert newton_cotes.condition_number > lobatto.condition_number


def test_lagrange_eval_on_three_equispaced_nodes():
    nodes = make_nodes("eq", 2)
    assert lagrange_eval(nodes, 1, 0.25) == pytest.approx(0.75, abs=1e-15)
    assert lagrange_eval(nodes, 0, 0.0) == pytest.approx(1.0)
    assert lagrange_eval(nodes, 2, 0.5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(IndexError):
        lagrange_eval(nodes, 3, 0.5)


def test_theta_row_of_the_middle_node():
    coeffs = dec_coefficients(make_nodes("eq", 2))
    np.testing.assert_allclose(coeffs.theta[1], [5 / 24, 1 / 3, -1 / 24], atol=1e-14)
