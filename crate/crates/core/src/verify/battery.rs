//! Seeded battery of random admissible setups.
//!
//! Every generated case satisfies the admissibility checks (A1)–(A5) by
//! construction and also the hypotheses of the qualitative bounds the
//! certificate suite asserts: constant oven at or above the initial shifted
//! temperature, `b1 ≤ b2`, strictly positive initial moisture. The crust
//! initial profile is quadratic with its wall slope chosen by bisection so
//! the boundary compatibility holds exactly (the second-order one-sided
//! stencil is exact on quadratics, so the discrete check passes too).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::front::CouplingConfig;
use crate::landau::LandauGrid;
use crate::problem::{
    boundary_heat_flux, InitialData, ModelFlags, OvenSchedule, PhysicalParams, ProblemSetup,
    SorptionFunction,
};

/// One random admissible case.
#[derive(Debug, Clone)]
pub struct BatteryCase {
    pub name: String,
    pub seed: u64,
    pub setup: ProblemSetup,
    pub grid: LandauGrid,
    pub config: CouplingConfig,
}

/// Wall slope of the quadratic crust profile `B·((x−e0)/(1−e0))²` making
/// `−k_a·u0_x(1) = g(0, B)` exact: bisection of the monotone residual on
/// `[0, u_b − θ_c]` (the bracket is guaranteed since `g(0, ·)` is increasing
/// with `g(0, u_b − θ_c) = 0`).
fn crust_amplitude(params: &PhysicalParams, oven: &OvenSchedule, e0: f64) -> f64 {
    let residual = |b: f64| {
        2.0 * params.k_a * b / (1.0 - e0) + boundary_heat_flux(0.0, b, oven, params, false)
    };
    let (mut lo, mut hi) = (0.0, oven.eval(0.0) - params.theta_c);
    if hi <= 0.0 || residual(hi) <= 0.0 {
        return hi.max(0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Random nondecreasing sorption function within the (A1) bounds.
fn random_sorption(rng: &mut ChaCha8Rng, arg_lo: f64, arg_hi: f64) -> SorptionFunction {
    let cap = 1.0;
    let pieces = rng.gen_range(2..=4);
    let mut args: Vec<f64> = (0..=pieces)
        .map(|_| rng.gen_range(arg_lo..arg_hi))
        .collect();
    args.sort_by(|a, b| a.partial_cmp(b).unwrap());
    args.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    if args.len() < 2 {
        args = vec![arg_lo, arg_hi];
    }
    let mut value = rng.gen_range(0.0..0.3);
    let mut breakpoints = vec![(args[0], value)];
    for w in args.windows(2) {
        let gap = w[1] - w[0];
        let max_step = (gap * cap).min(cap - value);
        value += rng.gen_range(0.0..=max_step.max(0.0));
        breakpoints.push((w[1], value));
    }
    SorptionFunction {
        breakpoints,
        smoothing_halfwidth: 0.0,
        cap,
    }
}

/// Generates `count` seeded admissible setups. Deterministic in `seed`.
pub fn seeded_battery(count: usize, seed: u64) -> Vec<BatteryCase> {
    let mut cases = Vec::with_capacity(count);
    for k in 0..count {
        let case_seed = seed.wrapping_add(k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed);

        let theta_c = rng.gen_range(0.5..1.5);
        let heating = rng.gen_range(0.0..1.2);
        let b1 = rng.gen_range(0.2..1.0);
        let params = PhysicalParams {
            c_l: rng.gen_range(0.5..2.0),
            c_a: rng.gen_range(0.5..2.0),
            k_l: rng.gen_range(0.5..2.0),
            k_a: rng.gen_range(0.5..2.0),
            d_l: rng.gen_range(0.05..0.5),
            d_a: rng.gen_range(0.05..0.5),
            h: rng.gen_range(0.5..3.0),
            sigma: rng.gen_range(1e-4..0.05),
            b1,
            b2: b1 * rng.gen_range(1.0..2.5),
            latent: rng.gen_range(0.5..2.0),
            theta_c,
        };
        let ub = theta_c + heating;
        let oven = OvenSchedule::constant_at(ub);

        // The initial profile has a slope kink at the front, so e0 must sit
        // on a sample node for u0(e0) = 0 to hold under linear interpolation.
        let n_init = 801;
        let e0 = (rng.gen_range(0.3..0.7) * (n_init - 1) as f64).round() / (n_init - 1) as f64;
        let amp_crumb = rng.gen_range(0.0..1.0);
        let amp_crust = crust_amplitude(&params, &oven, e0);
        let u0: Vec<f64> = (0..n_init)
            .map(|i| {
                let x = i as f64 / (n_init - 1) as f64;
                if x <= e0 {
                    -amp_crumb * (std::f64::consts::FRAC_PI_2 * x / e0).cos()
                } else {
                    amp_crust * ((x - e0) / (1.0 - e0)).powi(2)
                }
            })
            .collect();
        let w_base = rng.gen_range(0.5..1.5);
        let w_mod = rng.gen_range(0.0..0.4) * w_base;
        let w0: Vec<f64> = (0..n_init)
            .map(|i| {
                let x = i as f64 / (n_init - 1) as f64;
                w_base + w_mod * (2.0 * std::f64::consts::PI * x).cos()
            })
            .collect();

        let sorption = random_sorption(&mut rng, theta_c - 1.0, ub + 2.0);
        let n = 2 * rng.gen_range(16..=40) + 1;
        let dt = rng.gen_range(1e-4..4e-4);
        let horizon = rng.gen_range(0.02..0.08);

        cases.push(BatteryCase {
            name: format!("battery-{k:02}"),
            seed: case_seed,
            setup: ProblemSetup {
                params,
                sorption,
                oven,
                init: InitialData { e0, u0, w0 },
                horizon,
                flags: ModelFlags::default(),
            },
            grid: LandauGrid::new(n, n).unwrap(),
            config: CouplingConfig {
                dt,
                ..CouplingConfig::default()
            },
        });
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::validate_setup;

    #[test]
    fn battery_cases_are_admissible() {
        for case in seeded_battery(20, 42) {
            let report = validate_setup(&case.setup, 1e-6)
                .unwrap_or_else(|e| panic!("{}: malformed: {e}", case.name));
            assert!(report.runnable(), "{}: {}", case.name, report.summary());
            assert!(report.b1_le_b2, "{}", case.name);
            assert!(report.w0_positive_everywhere, "{}", case.name);
            // Comparison-bound precondition: u0 + theta_c <= u_b everywhere.
            let ub = case.setup.oven.eval(0.0);
            let max_u0 = case
                .setup
                .init
                .u0
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                max_u0 + case.setup.params.theta_c <= ub + 1e-12,
                "{}: comparison precondition broken",
                case.name
            );
        }
    }

    #[test]
    fn battery_is_deterministic() {
        let a = seeded_battery(3, 7);
        let b = seeded_battery(3, 7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.setup.params, y.setup.params);
            assert_eq!(x.setup.init.u0, y.setup.init.u0);
            assert_eq!(x.config.dt, y.config.dt);
        }
    }
}
