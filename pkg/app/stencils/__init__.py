from app.stencils.stencil import (
    Stencil,
    advection_closed_form,
    advection_stencil,
    advection_stencil_for_order,
    diffusion_stencil,
    dispersion_stencil,
    moment_stencil,
    symbol_eval,
)

__all__ = [
    "Stencil",
    "advection_closed_form",
    "advection_stencil",
    "advection_stencil_for_order",
    "diffusion_stencil",
    "dispersion_stencil",
    "moment_stencil",
    "symbol_eval",
]
