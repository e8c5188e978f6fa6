import numpy as np
import pytest

from app.quadrature import ader_operators, make_nodes
from app.stability import (
    d0_region,
    d1_region,
    default_d0_samples,
    default_d1_samples,
    imaginary_axis_excess,
    imex_stability_value,
    left_half_plane_max,
    mass_column_defect,
    minion_region,
    negative_real_border,
    pade_check,
    pade_coefficients,
    rational_fit,
    scan_region,
    stability_value,
    wedge_angle,
    zero_det_check,
)
from app.tableaux import MethodSpec, StageResolvent, ader_block_tableau, build_method, explicit_euler, implicit_euler


def test_euler_stability_functions():
    assert stability_value(explicit_euler(), 0.3 - 2j) == pytest.approx(1.3 - 2j)
    assert stability_value(implicit_euler(), -1.0) == pytest.approx(0.5)
    assert np.isinf(stability_value(implicit_euler(), 1.0))


def test_ader_lobatto_block_with_two_nodes():
    block = ader_block_tableau(ader_operators(make_nodes("glb", 1)))
    np.testing.assert_allclose(ader_operators(make_nodes("glb", 1)).R, np.diag([0.5, 0.5]), atol=1e-15)
    for z in [-1.0, 0.5j, -3 + 2j]:
        assert stability_value(block, z) == pytest.approx(1 / (1 - z + z**2 / 2), rel=1e-12)
    assert pade_check(block, 0, 2) <= 1e-10


def test_pade_coefficients():
    np.testing.assert_allclose(pade_coefficients(0, 1).denominator, [1, -1])
    fit = pade_coefficients(1, 1)
    np.testing.assert_allclose(fit.numerator, [1, 0.5])
    np.testing.assert_allclose(fit.denominator, [1, -0.5])
    np.testing.assert_allclose(pade_coefficients(0, 2).denominator, [1, -1, 0.5])
    assert pade_coefficients(2, 3).degrees == (2, 3)


@pytest.mark.parametrize("M", range(1, 6))
def test_ader_blocks_are_pade_approximants(M):
    lobatto = ader_block_tableau(ader_operators(make_nodes("glb", M)))
    legendre = ader_block_tableau(ader_operators(make_nodes("glg", M)))
    assert pade_check(lobatto, M - 1, M + 1) <= 1e-8
    assert pade_check(legendre, M, M + 1) <= 1e-8


@pytest.mark.parametrize("kind", ["glb", "glg"])
@pytest.mark.parametrize("M", range(1, 7))
def test_ader_zero_determinant(kind, M):
    ops = ader_operators(make_nodes(kind, M))
    assert zero_det_check(ops) <= 1e-10
    assert mass_column_defect(ops) <= 1e-12


def test_rational_fit_reproduces_resolvent(rng):
    tableau = build_method(MethodSpec("sdec", "glb", 3, "implicit"), reduce=True)
    fit = rational_fit(tableau)
    assert fit.residual < 1e-9
    z = 2 * (rng.random(20) - 0.5) + 1j * (rng.random(20) - 0.5)
    np.testing.assert_allclose(fit(z), StageResolvent(tableau)(z), rtol=1e-9)


def test_imex_value_reduces_to_parts():
    tableau = build_method(MethodSpec("dec", "glb", 3, "imex"))
    z = -0.7 + 0.4j
    assert imex_stability_value(tableau, z, 0.0) == pytest.approx(stability_value(tableau.implicit, z))
    assert imex_stability_value(tableau, 0.0, z) == pytest.approx(stability_value(tableau.explicit, z))


def test_imex_dec2_damps_very_stiff_modes():
    tableau = build_method(MethodSpec("dec", "glb", 2, "imex"), reduce=True)
    assert abs(imex_stability_value(tableau, -1e6, 0.0)) <= 1.0


def test_implicit_euler_region_covers_left_half():
    resolvent = StageResolvent(implicit_euler())
    grid = scan_region(resolvent, resolution=21, threads=2)
    left = grid.x_axis < 0
    assert grid.stable[:, left].all()
    assert grid.values.shape == (21, 21)
    header, rows = grid.to_csv_rows()
    assert header == ["re", "im", "absR"] and len(rows) == 21 * 21


def test_heun_negative_real_border():
    heun = build_method(MethodSpec("dec", "eq", 2, "explicit"), reduce=True)
    assert negative_real_border(heun, lower=-10.0, points=1001) == pytest.approx(-2.0, abs=0.011)


def test_implicit_euler_stability_checks():
    assert left_half_plane_max(implicit_euler()) <= 1.0
    assert imaginary_axis_excess(implicit_euler()) <= 0.0
    assert imaginary_axis_excess(explicit_euler(), y_max=1.0) > 0.0


def test_sample_sets():
    d0 = default_d0_samples()
    assert np.all(d0.real <= 1e-12)
    d1 = default_d1_samples()
    assert np.all(np.abs(1 + d1) <= 1 + 1e-12)
    assert np.unique(d1).size == d1.size


def test_minion_zero_explicit_row_follows_implicit_part():
    tableau = build_method(MethodSpec("dec", "glb", 2, "imex"), reduce=True)
    grid = minion_region(tableau, bounds=(-50.0, 0.0, -1.0, 1.0), resolution=11, offset=0.0)
    assert grid.kind == "minion"
    assert "alpha_degrees" in grid.extras
    middle = grid.values[5]
    np.testing.assert_allclose(middle, np.abs(StageResolvent(tableau.implicit)(grid.x_axis)), rtol=1e-12)


def test_wedge_angle_of_fully_stable_grid():
    grid = scan_region(lambda z: np.zeros_like(z), bounds=(-10.0, 0.0, -10.0, 10.0), resolution=11)
    assert wedge_angle(grid) == 89


@pytest.mark.slow
@pytest.mark.parametrize("order", [3, 5, 8])
def test_minion_angle_of_imex_dec(order):
    tableau = build_method(MethodSpec("dec", "glb", order, "imex"), reduce=True)
    assert minion_region(tableau).extras["alpha_degrees"] == pytest.approx(35, abs=5)


@pytest.mark.slow
@pytest.mark.parametrize("order", [4, 6])
def test_minion_angle_of_imex_sdec(order):
    tableau = build_method(MethodSpec("sdec", "glb", order, "imex"), reduce=True)
    assert minion_region(tableau).extras["alpha_degrees"] == pytest.approx(18, abs=4)


@pytest.mark.slow
@pytest.mark.parametrize("family", ["dec", "sdec"])
@pytest.mark.parametrize("order", [2, 3, 4, 5, 6])
def test_d0_region_of_deferred_correction_is_empty(family, order):
    tableau = build_method(MethodSpec(family, "glb", order, "imex"), reduce=True)
    assert not d0_region(tableau, resolution=40).stable.any()


@pytest.mark.slow
def test_d0_region_of_ader2_is_not_empty():
    ader = build_method(MethodSpec("ader", "glb", 2, "imex"), reduce=True)
    assert d0_region(ader, resolution=60).stable.any()


@pytest.mark.slow
def test_d1_region_of_imex_dec_is_bounded():
    tableau = build_method(MethodSpec("dec", "eq", 3, "imex"), reduce=True)
    grid = d1_region(tableau, resolution=60)
    assert grid.stable.any()
    assert not grid.stable.all()


@pytest.mark.slow
def test_d1_region_of_imex_sdec7_is_empty():
    tableau = build_method(MethodSpec("sdec", "eq", 7, "imex"), reduce=True)
    assert not d1_region(tableau, resolution=60).stable.any()


@pytest.mark.slow
def test_implicit_sdec11_real_axis_border():
    tableau = build_method(MethodSpec("sdec", "glb", 11, "implicit"), reduce=True)
    assert -1035 <= negative_real_border(tableau) <= -765
