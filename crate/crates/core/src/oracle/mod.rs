//! Independent evaluators: sphere quadrature of the defining integrals, the
//! `I_m(s)` integrals on `[0, 1]`, and a finite-difference hyperbolic
//! Laplacian.

mod gauss_jacobi;
mod harmonicity;
mod harmonics;
mod integrals;
mod sphere;

pub use gauss_jacobi::{gauss_jacobi, gauss_jacobi_unit, GaussRule};
pub use harmonicity::{
    hharmonicity_residual, residual_decay_order, validated_coefficient, LaplacianCoefficient, DECAY_STEPS,
};
pub use harmonics::{harmonic_basis_3d, zonal_reproducing_check, Part, SolidHarmonic3};
pub use integrals::{i_m_quadrature, pair_integral_estimate, pair_integral_quadrature, szego_quadrature};
pub use sphere::{sphere_quadrature, Dependency, QuadratureEstimate, QuadratureSpec, Scheme, SphereFunction};
