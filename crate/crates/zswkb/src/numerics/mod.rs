//! Numerical infrastructure: quadrature, root finding, ODE integration,
//! log-gamma and Taylor stepping for quadratic-coefficient equations.

pub mod gamma;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod taylor;
