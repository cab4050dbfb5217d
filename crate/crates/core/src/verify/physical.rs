//! Brute-force reference solvers in physical coordinates.
//!
//! These never use the front-fixing change of variables: the grid is a fixed
//! uniform partition of `[0, 1]` and the moving front is handled with
//! Shortley–Weller stencils against the interface point (temperature) or a
//! node-aligned interface (moisture, frozen front). They exist to validate
//! the transformed-equation coefficients of the reference-grid solver — in
//! particular the crust advection term, which is derived by the chain rule
//! and confirmed here rather than taken on trust.

use crate::problem::{
    boundary_heat_flux, boundary_heat_flux_deriv, OvenSchedule, PhysicalParams,
};
use crate::tridiag;

/// A field sampled on the fixed physical grid.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl PhysicalField {
    /// Linear interpolation on the uniform grid.
    pub fn interp(&self, x: f64) -> f64 {
        let n = self.x.len();
        let dx = 1.0 / (n - 1) as f64;
        let x = x.clamp(0.0, 1.0);
        let k = ((x / dx).floor() as usize).min(n - 2);
        let frac = (x - self.x[k]) / dx;
        self.values[k] * (1.0 - frac) + self.values[k + 1] * frac
    }
}

/// Quadratic extrapolation through the front zero and two same-side nodes,
/// used to refresh a node that just changed sides.
fn refresh_value(front: f64, x1: f64, v1: f64, x2: f64, v2: f64, x: f64) -> f64 {
    // Lagrange basis through (front, 0), (x1, v1), (x2, v2).
    let l1 = (x - front) * (x - x2) / ((x1 - front) * (x1 - x2));
    let l2 = (x - front) * (x - x1) / ((x2 - front) * (x2 - x1));
    v1 * l1 + v2 * l2
}

/// Backward-Euler heat solve on the fixed grid with a prescribed front path.
///
/// `front(t)` must stay in (0, 1) with some margin from both ends of the
/// grid. `u0` supplies the initial profile (zero at `front(0)`), `source` an
/// optional volumetric term. Returns the field at `t_end = steps·dt`.
#[allow(clippy::too_many_arguments)]
pub fn heat_reference(
    params: &PhysicalParams,
    oven: &OvenSchedule,
    guard: bool,
    nx: usize,
    dt: f64,
    steps: usize,
    u0: &dyn Fn(f64) -> f64,
    front: &dyn Fn(f64) -> f64,
    source: Option<&dyn Fn(f64, f64) -> f64>,
    newton_tol: f64,
    newton_max_iter: usize,
) -> PhysicalField {
    assert!(nx >= 8, "reference grid too coarse");
    let dx = 1.0 / (nx - 1) as f64;
    let xs: Vec<f64> = (0..nx).map(|i| i as f64 * dx).collect();
    let mut u: Vec<f64> = xs.iter().map(|&x| u0(x)).collect();
    let snap = 1e-9 * dx;

    // Index of the last node strictly left of the front.
    let left_of = |e: f64| -> usize {
        let mut m = ((e / dx).ceil() as usize).min(nx - 1);
        while m > 0 && xs[m] >= e - snap {
            m -= 1;
        }
        m
    };

    let mut e_old = front(0.0);
    for step in 1..=steps {
        let t_new = step as f64 * dt;
        let e = front(t_new);
        assert!(
            e > 2.0 * dx && e < 1.0 - 2.0 * dx,
            "front too close to the domain ends for the reference grid"
        );
        let m_new = left_of(e);
        let m_old = left_of(e_old);
        // Refresh values of nodes that changed sides since the last level.
        if m_new < m_old {
            // Front moved left: nodes m_new+1..=m_old joined the crust.
            for j in (m_new + 1..=m_old).rev() {
                let (x1, x2) = (xs[m_old + 1], xs[m_old + 2]);
                u[j] = refresh_value(e, x1, u[m_old + 1], x2, u[m_old + 2], xs[j]);
            }
        } else if m_new > m_old {
            // Front moved right: nodes m_old+1..=m_new joined the crumb.
            for j in m_old + 1..=m_new {
                let (x1, x2) = (xs[m_old], xs[m_old - 1]);
                u[j] = refresh_value(e, x1, u[m_old], x2, u[m_old - 1], xs[j]);
            }
        }
        e_old = e;
        let m = m_new;

        let src = |x: f64, c: f64| source.map_or(0.0, |f| f(t_new, x) / c);

        // Crumb block: nodes 0..=m, Shortley-Weller against (e, 0) at node m.
        let alpha_l = params.k_l / params.c_l;
        let nl = m + 1;
        let mut lower = vec![0.0; nl];
        let mut diag = vec![0.0; nl];
        let mut upper = vec![0.0; nl];
        let mut rhs = vec![0.0; nl];
        for i in 0..nl {
            rhs[i] = u[i] / dt + src(xs[i], params.c_l);
            if i == 0 {
                diag[0] = 1.0 / dt + 2.0 * alpha_l / (dx * dx);
                upper[0] = -2.0 * alpha_l / (dx * dx);
            } else if i == m {
                let rho = (e - xs[m]).max(snap);
                let a = 2.0 * alpha_l / (dx * (dx + rho));
                let b = 2.0 * alpha_l / (rho * (dx + rho));
                lower[i] = -a;
                diag[i] = 1.0 / dt + a + b; // front value is 0
            } else {
                let a = alpha_l / (dx * dx);
                lower[i] = -a;
                diag[i] = 1.0 / dt + 2.0 * a;
                upper[i] = -a;
            }
        }
        tridiag::solve(&lower, &diag, &upper, &mut rhs).expect("crumb reference solve");
        let crumb = rhs;

        // Crust block: nodes m+1..nx-1, Shortley-Weller at node m+1 and the
        // Newton-linearized flux row at the oven face.
        let alpha_a = params.k_a / params.c_a;
        let na = nx - (m + 1);
        let mut r_k = u[nx - 1];
        let mut crust = vec![0.0; na];
        for _ in 0..newton_max_iter.max(1) {
            let g_k = boundary_heat_flux(t_new, r_k, oven, params, guard);
            let dg_k = boundary_heat_flux_deriv(r_k, params, guard);
            let mut lower = vec![0.0; na];
            let mut diag = vec![0.0; na];
            let mut upper = vec![0.0; na];
            let mut rhs = vec![0.0; na];
            for j in 0..na {
                let gi = m + 1 + j;
                rhs[j] = u[gi] / dt + src(xs[gi], params.c_a);
                if j == 0 {
                    let rho = (xs[gi] - e).max(snap);
                    let a = 2.0 * alpha_a / (dx * (dx + rho));
                    let b = 2.0 * alpha_a / (rho * (dx + rho));
                    diag[j] = 1.0 / dt + a + b;
                    upper[j] = -a;
                } else if j == na - 1 {
                    let a = alpha_a / (dx * dx);
                    let beta = 2.0 / (params.c_a * dx);
                    lower[j] = -2.0 * a;
                    diag[j] = 1.0 / dt + 2.0 * a + beta * dg_k;
                    rhs[j] -= beta * (g_k - dg_k * r_k);
                } else {
                    let a = alpha_a / (dx * dx);
                    lower[j] = -a;
                    diag[j] = 1.0 / dt + 2.0 * a;
                    upper[j] = -a;
                }
            }
            tridiag::solve(&lower, &diag, &upper, &mut rhs).expect("crust reference solve");
            let r_new = rhs[na - 1];
            let defect = (boundary_heat_flux(t_new, r_new, oven, params, guard)
                - (g_k + dg_k * (r_new - r_k)))
                .abs();
            let scale = 1.0_f64.max(g_k.abs());
            crust = rhs;
            r_k = r_new;
            if defect <= newton_tol * scale {
                break;
            }
        }

        u[..nl].copy_from_slice(&crumb);
        u[m + 1..].copy_from_slice(&crust);
    }

    PhysicalField {
        x: xs,
        values: u,
        t: steps as f64 * dt,
    }
}

/// Backward-Euler finite-volume moisture solve on the fixed grid with a
/// frozen, node-aligned front.
///
/// `front_index` is the node where the diffusivity switches from `d_l` to
/// `d_a`; the flux entering at `x = 1` is the prescribed `q(t)` with the
/// convention `−d_a w_x(1) = q`.
pub fn moisture_reference(
    params: &PhysicalParams,
    nx: usize,
    front_index: usize,
    dt: f64,
    steps: usize,
    w0: &dyn Fn(f64) -> f64,
    q: &dyn Fn(f64) -> f64,
    source: Option<&dyn Fn(f64, f64) -> f64>,
) -> PhysicalField {
    assert!(nx >= 5 && front_index > 0 && front_index < nx - 1);
    let dx = 1.0 / (nx - 1) as f64;
    let xs: Vec<f64> = (0..nx).map(|i| i as f64 * dx).collect();
    let mut w: Vec<f64> = xs.iter().map(|&x| w0(x)).collect();

    let volume = |i: usize| if i == 0 || i == nx - 1 { 0.5 * dx } else { dx };
    let face_d = |i: usize| if i < front_index { params.d_l } else { params.d_a };

    for step in 1..=steps {
        let t_new = step as f64 * dt;
        let mut lower = vec![0.0; nx];
        let mut diag = vec![0.0; nx];
        let mut upper = vec![0.0; nx];
        let mut rhs = vec![0.0; nx];
        for i in 0..nx {
            diag[i] = volume(i);
            rhs[i] = volume(i) * w[i];
            if let Some(f) = source {
                rhs[i] += dt * volume(i) * f(t_new, xs[i]);
            }
        }
        rhs[nx - 1] -= dt * q(t_new);
        for i in 0..nx - 1 {
            let a = dt * face_d(i) / dx;
            diag[i] += a;
            upper[i] -= a;
            lower[i + 1] -= a;
            diag[i + 1] += a;
        }
        tridiag::solve(&lower, &diag, &upper, &mut rhs).expect("moisture reference solve");
        w = rhs;
    }

    PhysicalField {
        x: xs,
        values: w,
        t: steps as f64 * dt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::OvenSchedule;

    fn params() -> PhysicalParams {
        PhysicalParams {
            c_l: 1.0,
            c_a: 1.0,
            k_l: 1.0,
            k_a: 1.0,
            d_l: 0.3,
            d_a: 0.08,
            h: 1.0,
            sigma: 1e-300,
            b1: 1.0,
            b2: 1.0,
            latent: 1.0,
            theta_c: 1.0,
        }
    }

    #[test]
    fn equilibrium_is_a_fixed_point_with_moving_front() {
        // u = 0 with oven at theta_c stays zero regardless of the prescribed
        // front motion.
        let p = params();
        let oven = OvenSchedule::constant_at(p.theta_c);
        let field = heat_reference(
            &p,
            &oven,
            false,
            101,
            1e-3,
            200,
            &|_| 0.0,
            &|t| 0.5 + 0.2 * (8.0 * t).sin(),
            None,
            1e-12,
            30,
        );
        for (i, v) in field.values.iter().enumerate() {
            assert!(v.abs() < 1e-12, "node {i}: {v}");
        }
    }

    #[test]
    fn frozen_front_steady_state_matches_closed_form() {
        let p = params();
        let ub = 3.0;
        let oven = OvenSchedule::constant_at(ub);
        let e = 0.5;
        let field = heat_reference(
            &p,
            &oven,
            false,
            201,
            0.05,
            4000,
            &|_| 0.0,
            &|_| e,
            None,
            1e-12,
            30,
        );
        let a = p.h * (ub - p.theta_c) / (p.k_a + p.h * (1.0 - e));
        for (i, &x) in field.x.iter().enumerate() {
            let exact = if x <= e { 0.0 } else { a * (x - e) };
            assert!(
                (field.values[i] - exact).abs() < 2e-4,
                "x = {x}: {} vs {exact}",
                field.values[i]
            );
        }
    }

    #[test]
    fn moisture_reference_conserves_mass_without_flux() {
        let p = params();
        let nx = 81;
        let field = moisture_reference(
            &p,
            nx,
            40,
            1e-3,
            500,
            &|x| 1.0 + 0.3 * (6.0 * x).cos(),
            &|_| 0.0,
            None,
        );
        let dx = 1.0 / (nx - 1) as f64;
        let mass: f64 = field
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 || i == nx - 1 { 0.5 * dx * v } else { dx * v })
            .sum();
        let mass0 = {
            let w0 = |x: f64| 1.0 + 0.3 * (6.0 * x).cos();
            (0..nx)
                .map(|i| {
                    let x = i as f64 * dx;
                    let v = if i == 0 || i == nx - 1 { 0.5 * dx } else { dx };
                    v * w0(x)
                })
                .sum::<f64>()
        };
        assert!((mass - mass0).abs() < 1e-10, "drift {}", mass - mass0);
    }
}
