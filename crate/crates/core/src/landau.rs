//! Front-fixing change of variables.
//!
//! The crumb `[0, e(t)]` is mapped onto the reference interval `[0, 1]` by
//! `x = y·e` and the crust `[e(t), 1]` onto `[1, 2]` by `x = e + (y−1)(1−e)`.
//! The front becomes the fixed reference node `y = 1`, and its motion shows
//! up as mesh-advection terms in the transformed equations: on the crumb,
//!
//! ```text
//! c_l ∂ū/∂t = (k_l/e²) ∂²ū/∂y² + c_l·(y·e′/e) ∂ū/∂y
//! ```
//!
//! and on the crust the stretching `x = e + (y−1)(1−e)` gives advection
//! coefficient `(2−y)·e′/(1−e)` with diffusion `k_a/(c_a(1−e)²)`. The crust
//! term vanishes at `y = 2` (the oven face stays fixed), just as the crumb
//! term vanishes at `y = 0`. Both coefficients are cross-checked against a
//! physical-coordinate reference solver in `verify::physical`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problem::PhysicalParams;

#[derive(Debug, Error, PartialEq)]
pub enum LandauError {
    #[error("front position e = {0} outside (0, 1)")]
    FrontOutOfDomain(f64),
    #[error("coordinate {name} = {value} outside {range}")]
    CoordinateOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("phase needs at least 3 nodes for one-sided stencils, got {0}")]
    InsufficientStencil(usize),
    #[error("field length {got} does not match grid ({want} nodes)")]
    LengthMismatch { got: usize, want: usize },
}

/// Which side of the front a node or coefficient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Crumb,
    Crust,
}

/// Node classification on the union grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Crumb,
    /// The single node at `y = 1` shared by both phases (the front image).
    Shared,
    Crust,
}

/// Uniform reference grid: `n_l` nodes on `[0,1]`, `n_a` nodes on `[1,2]`,
/// the node `y = 1` stored once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandauGrid {
    n_l: usize,
    n_a: usize,
}

impl LandauGrid {
    pub fn new(n_l: usize, n_a: usize) -> Result<Self, LandauError> {
        if n_l < 3 {
            return Err(LandauError::InsufficientStencil(n_l));
        }
        if n_a < 3 {
            return Err(LandauError::InsufficientStencil(n_a));
        }
        Ok(LandauGrid { n_l, n_a })
    }

    pub fn n_l(&self) -> usize {
        self.n_l
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    /// Total node count; `y = 1` is stored once.
    pub fn n_total(&self) -> usize {
        self.n_l + self.n_a - 1
    }

    /// Index of the shared node `y = 1`.
    pub fn shared(&self) -> usize {
        self.n_l - 1
    }

    /// Reference spacing on the crumb image `[0,1]`.
    pub fn dy_l(&self) -> f64 {
        1.0 / (self.n_l - 1) as f64
    }

    /// Reference spacing on the crust image `[1,2]`.
    pub fn dy_a(&self) -> f64 {
        1.0 / (self.n_a - 1) as f64
    }

    /// Reference coordinate of node `i`.
    pub fn y(&self, i: usize) -> f64 {
        let s = self.shared();
        if i <= s {
            i as f64 * self.dy_l()
        } else {
            1.0 + (i - s) as f64 * self.dy_a()
        }
    }

    pub fn phase(&self, i: usize) -> Phase {
        match i.cmp(&self.shared()) {
            std::cmp::Ordering::Less => Phase::Crumb,
            std::cmp::Ordering::Equal => Phase::Shared,
            std::cmp::Ordering::Greater => Phase::Crust,
        }
    }

    /// Physical position of node `i` for front position `e`.
    pub fn physical_x(&self, i: usize, e: f64) -> f64 {
        from_reference(self.y(i), e).expect("grid coordinates are in range")
    }
}

/// A scalar field on the union grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOnGrid {
    pub grid: LandauGrid,
    pub values: Vec<f64>,
}

impl FieldOnGrid {
    pub fn zeros(grid: LandauGrid) -> Self {
        FieldOnGrid {
            grid,
            values: vec![0.0; grid.n_total()],
        }
    }

    /// Samples `f(y)` at every node.
    pub fn from_fn(grid: LandauGrid, f: impl Fn(f64) -> f64) -> Self {
        FieldOnGrid {
            grid,
            values: (0..grid.n_total()).map(|i| f(grid.y(i))).collect(),
        }
    }

    /// Samples a physical-coordinate function `f(x)` for front position `e`.
    pub fn from_physical_fn(grid: LandauGrid, e: f64, f: impl Fn(f64) -> f64) -> Self {
        FieldOnGrid {
            grid,
            values: (0..grid.n_total())
                .map(|i| f(grid.physical_x(i, e)))
                .collect(),
        }
    }

    pub fn shared_value(&self) -> f64 {
        self.values[self.grid.shared()]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Linear interpolation at reference coordinate `y ∈ [0, 2]`.
    pub fn interp(&self, y: f64) -> f64 {
        let g = &self.grid;
        let y = y.clamp(0.0, 2.0);
        if y <= 1.0 {
            let pos = y / g.dy_l();
            let k = (pos.floor() as usize).min(g.n_l - 2);
            let frac = pos - k as f64;
            self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
        } else {
            let pos = (y - 1.0) / g.dy_a();
            let k = (pos.floor() as usize).min(g.n_a - 2);
            let frac = pos - k as f64;
            let base = g.shared();
            self.values[base + k] * (1.0 - frac) + self.values[base + k + 1] * frac
        }
    }

    pub fn assert_matches(&self, grid: &LandauGrid) -> Result<(), LandauError> {
        if self.values.len() != grid.n_total() {
            return Err(LandauError::LengthMismatch {
                got: self.values.len(),
                want: grid.n_total(),
            });
        }
        Ok(())
    }
}

fn check_front(e: f64) -> Result<(), LandauError> {
    if !(0.0 < e && e < 1.0) || !e.is_finite() {
        return Err(LandauError::FrontOutOfDomain(e));
    }
    Ok(())
}

/// Physical `x ∈ [0,1]` to reference `y ∈ [0,2]`:
/// `y = x/e` on the crumb, `y = 1 + (x−e)/(1−e)` on the crust.
pub fn to_reference(x: f64, e: f64) -> Result<f64, LandauError> {
    check_front(e)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(LandauError::CoordinateOutOfRange {
            name: "x",
            value: x,
            range: "[0, 1]",
        });
    }
    Ok(if x <= e { x / e } else { 1.0 + (x - e) / (1.0 - e) })
}

/// Inverse of [`to_reference`]: `x = y·e` on `[0,1]`, `x = e + (y−1)(1−e)`
/// on `[1,2]`.
pub fn from_reference(y: f64, e: f64) -> Result<f64, LandauError> {
    check_front(e)?;
    if !(0.0..=2.0).contains(&y) {
        return Err(LandauError::CoordinateOutOfRange {
            name: "y",
            value: y,
            range: "[0, 2]",
        });
    }
    Ok(if y <= 1.0 { y * e } else { e + (y - 1.0) * (1.0 - e) })
}

/// Which field the transformed coefficients are for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Temperature,
    Moisture,
}

/// Diffusion and advection coefficients of the transformed equation
/// `∂ū/∂t = D ∂²ū/∂y² + A(y) ∂ū/∂y` at reference coordinate `y`:
///
/// * crumb: `D = κ_l/e²`, `A = y·e′/e`
/// * crust: `D = κ_a/(1−e)²`, `A = (2−y)·e′/(1−e)`
///
/// where `κ` is `k/c` for temperature and `d` for moisture.
pub fn transformed_coefficients(
    kind: FieldKind,
    side: Side,
    y: f64,
    e: f64,
    e_prime: f64,
    params: &PhysicalParams,
) -> Result<(f64, f64), LandauError> {
    check_front(e)?;
    let kappa = match (kind, side) {
        (FieldKind::Temperature, Side::Crumb) => params.k_l / params.c_l,
        (FieldKind::Temperature, Side::Crust) => params.k_a / params.c_a,
        (FieldKind::Moisture, Side::Crumb) => params.d_l,
        (FieldKind::Moisture, Side::Crust) => params.d_a,
    };
    Ok(match side {
        Side::Crumb => (kappa / (e * e), y * e_prime / e),
        Side::Crust => (kappa / ((1.0 - e) * (1.0 - e)), (2.0 - y) * e_prime / (1.0 - e)),
    })
}

/// One-sided physical gradients at the front, `(u_x(e−), u_x(e+))`, from
/// second-order three-point stencils in `y` at the shared node, rescaled by
/// the phase stretchings `1/e` and `1/(1−e)`.
pub fn one_sided_gradients(field: &FieldOnGrid, e: f64) -> Result<(f64, f64), LandauError> {
    check_front(e)?;
    let g = &field.grid;
    if g.n_l < 3 {
        return Err(LandauError::InsufficientStencil(g.n_l));
    }
    if g.n_a < 3 {
        return Err(LandauError::InsufficientStencil(g.n_a));
    }
    let s = g.shared();
    let v = &field.values;
    let left_y = (3.0 * v[s] - 4.0 * v[s - 1] + v[s - 2]) / (2.0 * g.dy_l());
    let right_y = (-3.0 * v[s] + 4.0 * v[s + 1] - v[s + 2]) / (2.0 * g.dy_a());
    Ok((left_y / e, right_y / (1.0 - e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::PhysicalParams;

    fn params() -> PhysicalParams {
        PhysicalParams {
            c_l: 2.0,
            c_a: 3.0,
            k_l: 1.0,
            k_a: 0.5,
            d_l: 0.1,
            d_a: 0.2,
            h: 1.0,
            sigma: 1.0,
            b1: 1.0,
            b2: 1.0,
            latent: 1.0,
            theta_c: 1.0,
        }
    }

    #[test]
    fn reference_map_endpoints_and_front() {
        assert_eq!(to_reference(0.0, 0.3).unwrap(), 0.0);
        assert_eq!(to_reference(0.3, 0.3).unwrap(), 1.0);
        assert_eq!(to_reference(1.0, 0.3).unwrap(), 2.0);
        assert_eq!(from_reference(1.0, 0.7).unwrap(), 0.7);
        assert!((from_reference(0.5, 0.4).unwrap() - 0.2).abs() < 1e-16);
        assert!((from_reference(1.5, 0.4).unwrap() - 0.7).abs() < 1e-16);
    }

    #[test]
    fn reference_map_rejects_bad_front() {
        assert!(to_reference(0.5, 0.0).is_err());
        assert!(to_reference(0.5, 1.0).is_err());
        assert!(from_reference(0.5, -0.1).is_err());
    }

    #[test]
    fn transformed_coefficients_match_chain_rule() {
        let p = params();
        // Stationary front: no advection either side.
        let (_, a) =
            transformed_coefficients(FieldKind::Temperature, Side::Crumb, 0.7, 0.4, 0.0, &p).unwrap();
        assert_eq!(a, 0.0);
        let (_, a) =
            transformed_coefficients(FieldKind::Temperature, Side::Crust, 1.3, 0.4, 0.0, &p).unwrap();
        assert_eq!(a, 0.0);
        // y factor kills crumb advection at the symmetry axis.
        let (_, a) =
            transformed_coefficients(FieldKind::Temperature, Side::Crumb, 0.0, 0.4, 0.7, &p).unwrap();
        assert_eq!(a, 0.0);
        // Crumb at e = 0.5, e' = 0.1, y = 1: advection 0.2, diffusion 4 k_l/c_l.
        let (d, a) =
            transformed_coefficients(FieldKind::Temperature, Side::Crumb, 1.0, 0.5, 0.1, &p).unwrap();
        assert!((a - 0.2).abs() < 1e-15);
        assert!((d - 4.0 * p.k_l / p.c_l).abs() < 1e-15);
        // Crust advection vanishes at the fixed oven face y = 2.
        let (_, a) =
            transformed_coefficients(FieldKind::Temperature, Side::Crust, 2.0, 0.5, 3.0, &p).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn one_sided_gradients_trivial_cases() {
        let grid = LandauGrid::new(9, 7).unwrap();
        let zero = FieldOnGrid::zeros(grid);
        assert_eq!(one_sided_gradients(&zero, 0.5).unwrap(), (0.0, 0.0));

        // Linear in y on both phases: u = y - 1 with e = 0.5 gives physical
        // slope (1/e, 1/(1-e)) = (2, 2).
        let lin = FieldOnGrid::from_fn(grid, |y| y - 1.0);
        let (gl, gr) = one_sided_gradients(&lin, 0.5).unwrap();
        assert!((gl - 2.0).abs() < 1e-12, "left {gl}");
        assert!((gr - 2.0).abs() < 1e-12, "right {gr}");

        // Quadratic with vanishing first derivative at y = 1: exact zeros
        // because the stencil is second order.
        let quad = FieldOnGrid::from_fn(grid, |y| (y - 1.0) * (y - 1.0));
        let (gl, gr) = one_sided_gradients(&quad, 0.5).unwrap();
        assert!(gl.abs() < 1e-12 && gr.abs() < 1e-12, "({gl}, {gr})");
    }

    #[test]
    fn gradient_stencil_exact_on_quadratics() {
        // Second-order stencils are exact for any quadratic in y.
        let grid = LandauGrid::new(6, 11).unwrap();
        let e = 0.37;
        let f = |y: f64| 1.4 + 0.3 * y - 0.8 * y * y;
        let fp = |y: f64| 0.3 - 1.6 * y;
        let field = FieldOnGrid::from_fn(grid, f);
        let (gl, gr) = one_sided_gradients(&field, e).unwrap();
        assert!((gl - fp(1.0) / e).abs() < 1e-10);
        assert!((gr - fp(1.0) / (1.0 - e)).abs() < 1e-10);
    }

    #[test]
    fn grid_geometry() {
        let grid = LandauGrid::new(5, 4).unwrap();
        assert_eq!(grid.n_total(), 8);
        assert_eq!(grid.shared(), 4);
        assert_eq!(grid.y(0), 0.0);
        assert_eq!(grid.y(4), 1.0);
        assert_eq!(grid.y(7), 2.0);
        assert!(LandauGrid::new(2, 5).is_err());
    }
}
