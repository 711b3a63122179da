//! Quadrature, finite differences, root finding and the parabolic cylinder function.

pub mod differentiate;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use differentiate::{derivative, second_derivative};
pub use quadrature::{
    integrate, integrate_decaying, integrate_line, simpson_weights, trapezoid_weights,
    QuadratureSpec, TailMap,
};
pub use roots::{find_root, minimize_golden, RootBracket};
pub use special::{parabolic_cylinder_d, parabolic_cylinder_d_prime, parabolic_cylinder_d_with};
