"""Harmonic analysis and Gegenbauer-kernel filtration on the unit hypersphere."""

from .errors import (
    CapabilityError,
    ContractError,
    DomainError,
    HyperfiltError,
    IntegrityError,
    QuadratureError,
)
from .geometry import (
    SpherePoint,
    angles_to_cartesian,
    apply_rotation,
    cartesian_to_angles,
    gamma_fn,
    lift_point,
    surface_area,
    surface_area_recursive,
)
from .polynomials import (
    dim_harmonics,
    eval_gegenbauer,
    eval_legendre,
    eval_legendre_integral,
    eval_legendre_n2,
    eval_legendre_recurrence,
    eval_legendre_rodrigues,
    legendre_coefficients,
    ode_residual,
    poisson_generating_sum,
    sph2_harmonic,
)
from .quadrature import (
    QuadratureRule1D,
    SampledFunction,
    SphereGrid,
    gauss_gegenbauer_rule,
    inner_product,
    integrate_sphere,
    sphere_grid,
)
from .filtration import (
    FilterConfig,
    Spectrum,
    ZonalProfile,
    convolution_spectrum,
    decompose,
    filtrate,
    gegenbauer_kernel,
    kernel_limit_check,
    project_component,
    zonal_convolve,
)

__version__ = "0.1.0"
