from sympy import Rational

import numpy as np
import pytest

from app.core.errors import ConfigurationError
from app.stencils import (
    advection_closed_form,
    advection_stencil,
    advection_stencil_for_order,
    diffusion_stencil,
    dispersion_stencil,
    moment_stencil,
    symbol_eval,
)


def _rationals(stencil):
    return list(stencil.rationals)


def test_upwind_and_central_advection():
    upwind = advection_stencil(1, 0)
    assert upwind.offsets.tolist() == [-1, 0]
    assert _rationals(upwind) == [-1, 1]
    assert _rationals(advection_stencil(1, 1)) == [Rational(-1, 2), 0, Rational(1, 2)]


def test_third_order_advection():
    stencil = advection_stencil_for_order(3)
    assert (stencil.r, stencil.s) == (2, 1)
    assert _rationals(stencil) == [Rational(1, 6), -1, Rational(1, 2), Rational(1, 3)]
    np.testing.assert_allclose(advection_closed_form(2, 1), stencil.coefficients, atol=1e-15)


def test_second_order_upwind_advection():
    stencil = advection_stencil_for_order(2)
    assert stencil.offsets.tolist() == [-2, -1, 0]
    assert _rationals(stencil) == [Rational(1, 2), -2, Rational(3, 2)]


@pytest.mark.parametrize("q", range(1, 8))
def test_advection_stencils_are_dissipative(q):
    stencil = advection_stencil_for_order(q)
    assert stencil.q == q
    theta = np.linspace(0, np.pi, 201)
    assert np.all(stencil.symbol(theta).real >= -1e-13)
    assert stencil.moment_residual() < 1e-12


@pytest.mark.parametrize("r,s", [(2, 1), (3, 1), (3, 2), (4, 3)])
def test_closed_form_matches_moment_solve(r, s):
    np.testing.assert_allclose(advection_closed_form(r, s), advection_stencil(r, s).coefficients, atol=1e-13)


def test_diffusion_stencils():
    assert _rationals(diffusion_stencil(2)) == [1, -2, 1]
    assert _rationals(diffusion_stencil(4)) == [
        Rational(-1, 12), Rational(4, 3), Rational(-5, 2), Rational(4, 3), Rational(-1, 12)
    ]
    assert _rationals(diffusion_stencil(6)) == [
        Rational(1, 90), Rational(-3, 20), Rational(3, 2), Rational(-49, 18),
        Rational(3, 2), Rational(-3, 20), Rational(1, 90),
    ]
    assert diffusion_stencil(8).width == 9
    with pytest.raises(ConfigurationError):
        diffusion_stencil(3)


@pytest.mark.parametrize("q", [2, 4, 6, 8])
def test_diffusion_symbols_are_nonpositive_real(q):
    theta = np.linspace(0, np.pi, 101)
    symbol = diffusion_stencil(q).symbol(theta)
    np.testing.assert_allclose(symbol.imag, 0.0, atol=1e-13)
    assert np.all(symbol.real <= 1e-13)


def test_third_order_dispersion():
    stencil = dispersion_stencil(3)
    assert stencil.offsets.tolist() == [-2, -1, 0, 1, 2, 3]
    assert _rationals(stencil) == [Rational(v, 4) for v in (-1, -1, 10, -14, 7, -1)]
    assert sum(_rationals(stencil)) == 0
    assert symbol_eval(stencil, np.pi) == pytest.approx(8.0)


def test_fifth_order_dispersion():
    stencil = dispersion_stencil(5)
    assert stencil.offsets.tolist() == list(range(-3, 5))
    k = stencil.offsets.astype(float)
    assert stencil.coefficients @ k**3 / 6 == pytest.approx(1.0, abs=1e-12)
    for m in (0, 1, 2, 4, 5, 6, 7):
        assert abs(stencil.coefficients @ k**m) < 1e-9
    with pytest.raises(ConfigurationError):
        dispersion_stencil(4)


def test_symbols():
    theta = 0.7
    assert symbol_eval(diffusion_stencil(2), theta) == pytest.approx(2 * np.cos(theta) - 2)
    assert symbol_eval(advection_stencil(1, 0), theta) == pytest.approx(1 - np.exp(-1j * theta))
    stencil = advection_stencil_for_order(3)
    np.testing.assert_allclose(stencil.symbol([0.0, theta]), [0.0, symbol_eval(stencil, theta)], atol=1e-15)
    np.testing.assert_allclose(stencil.symbol(-theta), np.conj(stencil.symbol(theta)), atol=1e-15)


def test_moment_stencil_rejects_too_few_points():
    with pytest.raises(ConfigurationError):
        moment_stencil(1, 0, 2)
