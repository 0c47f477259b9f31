//! Dense complex linear algebra, Hermitian eigenvalues and the closed-form /
//! adaptive integrals used by the boundary curves.

mod eigen;
mod integrals;
mod lanczos;
mod matrix;
mod quadrature;

pub use eigen::{eigvalsh, eigvalsh_with, tridiagonal_eigen, EigenMethod, JACOBI_MAX_DIM};
pub use integrals::{closed_form_integral, table_coefficient, IntegralKind};
pub use lanczos::{lanczos_ground, LanczosOptions};
pub use matrix::{ComplexMatrix, C64};
pub use quadrature::{quadrature, quadrature_detailed, QuadratureEstimate};
