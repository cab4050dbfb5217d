//! Implicit time step of the temperature subproblem on the reference grid.
//!
//! One backward-Euler step of the transformed heat equations per phase:
//! homogeneous Neumann at `y = 0` (ghost node), Dirichlet `u = 0` at the
//! front image `y = 1`, and the nonlinear convective–radiative balance
//! `−k_a u_x(1) = g(t, u(t,1))` at `y = 2`, solved by Newton on the boundary
//! unknown coupled with the tridiagonal interior solve. Mesh advection from
//! the moving front is discretized with first-order upwinding on the sign of
//! the advection coefficient, which keeps every row an M-matrix row for any
//! `dt > 0`; combined with backward Euler this preserves the discrete
//! maximum principle that the sign certificate relies on.

use crate::error::StepError;
use crate::landau::{
    one_sided_gradients, transformed_coefficients, FieldKind, FieldOnGrid, Side,
};
use crate::problem::{boundary_heat_flux, boundary_heat_flux_deriv, OvenSchedule, PhysicalParams};
use crate::tridiag;

/// The implicit upwind scheme is unconditionally monotone: its system matrix
/// is an M-matrix for every positive time step, so no `dt` restriction is
/// needed for the discrete maximum principle (the front-coupling iteration,
/// not monotonicity, is what limits `dt`).
pub const MONOTONE_DT_BOUND: f64 = f64::INFINITY;

/// Inputs of one temperature step. `e` and `e_prime` are taken at the new
/// time level; `u` at the old one.
pub struct HeatStepInput<'a> {
    pub u: &'a FieldOnGrid,
    /// Front position at the new time level.
    pub e: f64,
    /// Front velocity at the new time level.
    pub e_prime: f64,
    /// New time level.
    pub t_new: f64,
    pub dt: f64,
    pub params: &'a PhysicalParams,
    pub oven: &'a OvenSchedule,
    /// Clip the shifted boundary temperature at zero inside the flux law.
    pub radiative_guard: bool,
    /// Absolute tolerance on the boundary-row residual, in flux units
    /// relative to `max(1, |g|)`.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Manufactured volumetric source `s(t, x)` (physical coordinates),
    /// verification only.
    pub source: Option<&'a dyn Fn(f64, f64) -> f64>,
    /// Manufactured additive correction to the boundary flux law,
    /// verification only.
    pub robin_correction: Option<&'a dyn Fn(f64) -> f64>,
}

/// Result of one temperature step.
pub struct HeatStepOutput {
    pub u: FieldOnGrid,
    /// `u(t_new, 1)`, the oven-face value.
    pub boundary_value: f64,
    /// One-sided physical gradient `u_x(e−)`.
    pub grad_left: f64,
    /// One-sided physical gradient `u_x(e+)`.
    pub grad_right: f64,
    /// Newton iterations spent on the radiative boundary row.
    pub newton_iters: usize,
}

struct Tridiagonal {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
}

impl Tridiagonal {
    fn new(n: usize) -> Self {
        Tridiagonal {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
            rhs: vec![0.0; n],
        }
    }

    fn solve(mut self) -> Option<Vec<f64>> {
        tridiag::solve(&self.lower, &self.diag, &self.upper, &mut self.rhs)?;
        Some(self.rhs)
    }
}

/// Upwind split of the advection term `A ∂u/∂y`: returns the contributions
/// `(to lower, to diag, to upper)` of `-A ∂u/∂y` moved to the left-hand side.
fn upwind(a: f64, dy: f64) -> (f64, f64, f64) {
    let ap = a.max(0.0);
    let am = a.min(0.0);
    // -A u_y with u_y ~ ap*(u[i+1]-u[i])/dy + am*(u[i]-u[i-1])/dy
    (am / dy, (ap - am) / dy, -ap / dy)
}

/// One backward-Euler step of the temperature field.
pub fn heat_step(input: &HeatStepInput) -> Result<HeatStepOutput, StepError> {
    let grid = input.u.grid;
    input.u.assert_matches(&grid)?;
    let e = input.e;
    let ep = input.e_prime;
    let dt = input.dt;
    let p = input.params;
    let s = grid.shared();
    let n = grid.n_total();
    let source_at = |x: f64, c: f64| input.source.map_or(0.0, |f| f(input.t_new, x) / c);

    // Crumb block: unknowns 0..s, Dirichlet 0 at the shared node.
    let dy = grid.dy_l();
    let mut crumb = Tridiagonal::new(s);
    for i in 0..s {
        let y = grid.y(i);
        let (d, a) =
            transformed_coefficients(FieldKind::Temperature, Side::Crumb, y, e, ep, p)?;
        let diffusion = d / (dy * dy);
        let row_rhs =
            input.u.values[i] / dt + source_at(grid.physical_x(i, e), p.c_l);
        if i == 0 {
            // Symmetry: ghost u[-1] = u[1]; advection vanishes at y = 0.
            crumb.diag[0] = 1.0 / dt + 2.0 * diffusion;
            crumb.upper[0] = -2.0 * diffusion;
            crumb.rhs[0] = row_rhs;
        } else {
            let (lo, di, up) = upwind(a, dy);
            crumb.lower[i] = -diffusion + lo;
            crumb.diag[i] = 1.0 / dt + 2.0 * diffusion + di;
            crumb.upper[i] = -diffusion + up;
            crumb.rhs[i] = row_rhs;
            if i == s - 1 {
                // Neighbor is the front node with u = 0: drop the column.
                crumb.upper[i] = 0.0;
            }
        }
    }
    let crumb_sol = crumb.solve().ok_or(StepError::Singular("heat/crumb"))?;

    // Crust block: unknowns s+1..n, Dirichlet 0 at the shared node and the
    // Newton-linearized flux row at y = 2.
    let dy = grid.dy_a();
    let m = n - s - 1;
    let one_m_e = 1.0 - e;
    let g_corr = |t: f64| input.robin_correction.map_or(0.0, |f| f(t));
    let g_total = |r: f64| {
        boundary_heat_flux(input.t_new, r, input.oven, p, input.radiative_guard)
            + g_corr(input.t_new)
    };
    let beta = 2.0 / (p.c_a * one_m_e * dy);

    let mut r_k = input.u.values[n - 1];
    let mut crust_sol = Vec::new();
    let mut iters = 0;
    let mut converged = false;
    while iters < input.newton_max_iter.max(1) {
        iters += 1;
        let g_k = g_total(r_k);
        let dg_k = boundary_heat_flux_deriv(r_k, p, input.radiative_guard);
        let mut crust = Tridiagonal::new(m);
        for j in 0..m {
            let gi = s + 1 + j; // global index
            let y = grid.y(gi);
            let (d, a) =
                transformed_coefficients(FieldKind::Temperature, Side::Crust, y, e, ep, p)?;
            let diffusion = d / (dy * dy);
            let row_rhs =
                input.u.values[gi] / dt + source_at(grid.physical_x(gi, e), p.c_a);
            if j == m - 1 {
                // Ghost elimination of the flux condition
                // u_y(2) = -(1-e) g(t, r)/k_a.
                crust.lower[j] = -2.0 * diffusion;
                crust.diag[j] = 1.0 / dt + 2.0 * diffusion + beta * dg_k;
                crust.rhs[j] = row_rhs - beta * (g_k - dg_k * r_k);
            } else {
                let (lo, di, up) = upwind(a, dy);
                crust.lower[j] = -diffusion + lo;
                crust.diag[j] = 1.0 / dt + 2.0 * diffusion + di;
                crust.upper[j] = -diffusion + up;
                crust.rhs[j] = row_rhs;
                if j == 0 {
                    crust.lower[j] = 0.0;
                }
            }
        }
        crust_sol = crust.solve().ok_or(StepError::Singular("heat/crust"))?;
        let r_new = crust_sol[m - 1];
        // Residual of the true (nonlinear) boundary row equals the
        // linearization defect at the solved value.
        let defect = (g_total(r_new) - (g_k + dg_k * (r_new - r_k))).abs();
        let scale = 1.0_f64.max(g_total(r_new).abs());
        r_k = r_new;
        if defect <= input.newton_tol * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(StepError::NewtonDiverged {
            iters,
            residual: (g_total(r_k)).abs(),
        });
    }

    let mut values = vec![0.0; n];
    values[..s].copy_from_slice(&crumb_sol);
    values[s] = 0.0;
    values[s + 1..].copy_from_slice(&crust_sol);
    let u_new = FieldOnGrid { grid, values };
    let (grad_left, grad_right) = one_sided_gradients(&u_new, e)?;

    Ok(HeatStepOutput {
        boundary_value: u_new.values[n - 1],
        u: u_new,
        grad_left,
        grad_right,
        newton_iters: iters,
    })
}

/// Sign certificate: the discrete analogue of "u ≤ 0 on the crumb, u ≥ 0 on
/// the crust".
#[derive(Debug, Clone, Copy)]
pub struct SignReport {
    pub pass: bool,
    /// Largest crumb value and its node (worst violation of `u ≤ tol`).
    pub max_crumb: f64,
    pub max_crumb_index: usize,
    /// Smallest crust value and its node (worst violation of `u ≥ −tol`).
    pub min_crust: f64,
    pub min_crust_index: usize,
}

/// Checks `u ≤ tol` on crumb nodes and `u ≥ −tol` on crust nodes.
pub fn certify_sign(u: &FieldOnGrid, tol: f64) -> SignReport {
    let s = u.grid.shared();
    let mut max_crumb = f64::NEG_INFINITY;
    let mut max_crumb_index = 0;
    for (i, &v) in u.values[..=s].iter().enumerate() {
        if v > max_crumb {
            max_crumb = v;
            max_crumb_index = i;
        }
    }
    let mut min_crust = f64::INFINITY;
    let mut min_crust_index = s;
    for (k, &v) in u.values[s..].iter().enumerate() {
        if v < min_crust {
            min_crust = v;
            min_crust_index = s + k;
        }
    }
    SignReport {
        pass: max_crumb <= tol && min_crust >= -tol,
        max_crumb,
        max_crumb_index,
        min_crust,
        min_crust_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landau::LandauGrid;
    use crate::problem::{OvenSchedule, PhysicalParams};

    fn params() -> PhysicalParams {
        PhysicalParams {
            c_l: 1.0,
            c_a: 1.0,
            k_l: 1.0,
            k_a: 1.0,
            d_l: 1.0,
            d_a: 1.0,
            h: 1.0,
            sigma: 1.0,
            b1: 1.0,
            b2: 1.0,
            latent: 1.0,
            theta_c: 1.0,
        }
    }

    fn step(
        u: &FieldOnGrid,
        e: f64,
        ep: f64,
        dt: f64,
        p: &PhysicalParams,
        oven: &OvenSchedule,
    ) -> HeatStepOutput {
        heat_step(&HeatStepInput {
            u,
            e,
            e_prime: ep,
            t_new: dt,
            dt,
            params: p,
            oven,
            radiative_guard: false,
            newton_tol: 1e-12,
            newton_max_iter: 50,
            source: None,
            robin_correction: None,
        })
        .unwrap()
    }

    #[test]
    fn zero_field_at_oven_equilibrium_is_fixed_point() {
        let p = params();
        let oven = OvenSchedule::constant_at(p.theta_c);
        let grid = LandauGrid::new(17, 13).unwrap();
        let u0 = FieldOnGrid::zeros(grid);
        for &dt in &[1e-6, 1e-3, 0.5, 10.0] {
            let out = step(&u0, 0.4, 0.0, dt, &p, &oven);
            for (i, v) in out.u.values.iter().enumerate() {
                assert!(v.abs() < 1e-13, "node {i}: {v} at dt {dt}");
            }
            assert_eq!(out.newton_iters, 1, "fixed point should converge immediately");
        }
    }

    #[test]
    fn frozen_front_reaches_linear_steady_state() {
        // sigma -> 0 (linear Robin), e frozen: the steady state is u = 0 on
        // the crumb and u = A (x - e) on the crust with
        // A = h (u_b - theta_c) / (k_a + h (1 - e)).
        let mut p = params();
        p.sigma = 1e-300;
        p.h = 2.0;
        p.k_a = 0.7;
        let ub = 3.0;
        let oven = OvenSchedule::constant_at(ub);
        let e = 0.4;
        let grid = LandauGrid::new(41, 41).unwrap();
        let mut u = FieldOnGrid::zeros(grid);
        let dt = 0.05;
        let mut out = step(&u, e, 0.0, dt, &p, &oven);
        for _ in 0..4000 {
            u = out.u;
            out = step(&u, e, 0.0, dt, &p, &oven);
            let diff: f64 = out
                .u
                .values
                .iter()
                .zip(&u.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if diff < 1e-14 {
                break;
            }
        }
        let a = p.h * (ub - p.theta_c) / (p.k_a + p.h * (1.0 - e));
        for i in 0..grid.n_total() {
            let x = grid.physical_x(i, e);
            let exact = if x <= e { 0.0 } else { a * (x - e) };
            assert!(
                (out.u.values[i] - exact).abs() < 1e-6,
                "node {i} (x = {x}): {} vs {exact}",
                out.u.values[i]
            );
        }
    }

    #[test]
    fn newton_failure_reports_step_error() {
        let p = params();
        let oven = OvenSchedule::constant_at(2.0);
        let grid = LandauGrid::new(9, 9).unwrap();
        let u = FieldOnGrid::zeros(grid);
        let res = heat_step(&HeatStepInput {
            u: &u,
            e: 0.5,
            e_prime: 0.0,
            t_new: 1.0,
            dt: 1.0,
            params: &p,
            oven: &oven,
            radiative_guard: false,
            newton_tol: 0.0, // unreachable tolerance
            newton_max_iter: 2,
            source: None,
            robin_correction: None,
        });
        assert!(matches!(res, Err(StepError::NewtonDiverged { .. })));
    }

    #[test]
    fn sign_certificate_detects_violations() {
        let grid = LandauGrid::new(5, 5).unwrap();
        let zero = FieldOnGrid::zeros(grid);
        assert!(certify_sign(&zero, 1e-12).pass);

        let mut bad = FieldOnGrid::zeros(grid);
        bad.values[1] = 1e-3; // crumb node above zero
        let rep = certify_sign(&bad, 1e-4);
        assert!(!rep.pass);
        assert_eq!(rep.max_crumb_index, 1);
        assert!((rep.max_crumb - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn sign_preserved_from_admissible_data() {
        // Discrete maximum principle: start from sign-correct data under an
        // admissible oven and check the certificate after many steps with a
        // moving-mesh advection term switched on.
        let p = params();
        let oven = OvenSchedule::constant_at(1.5);
        let grid = LandauGrid::new(33, 33).unwrap();
        let e0 = 0.55;
        let mut u = FieldOnGrid::from_physical_fn(grid, e0, |x| {
            if x <= e0 {
                -0.3 * (std::f64::consts::FRAC_PI_2 * x / e0).cos()
            } else {
                0.2 * (x - e0) / (1.0 - e0)
            }
        });
        let dt = 1e-3;
        let mut e = e0;
        for k in 0..200 {
            let ep = 0.05 * ((k as f64) * 0.1).sin();
            let e_new = (e + dt * ep).clamp(0.2, 0.8);
            let out = step(&u, e_new, ep, dt, &p, &oven);
            e = e_new;
            u = out.u;
            let rep = certify_sign(&u, 1e-12);
            assert!(
                rep.pass,
                "sign violated at step {k}: crumb {} crust {}",
                rep.max_crumb, rep.min_crust
            );
        }
    }
}
