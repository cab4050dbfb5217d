//! Physical data of the baking model and validation of its standing
//! assumptions.
//!
//! A [`ProblemSetup`] bundles the material constants, the sorption isotherm
//! `p`, the oven schedule `u_b`, the initial data `(e0, u0, w0)` and the time
//! horizon. [`validate_setup`] checks the model's admissibility conditions
//! (A1)–(A5) and reports each one as pass/fail; a setup is runnable only when
//! all pass. Temperatures are shifted so that `u = 0` is the phase-transition
//! level: the physical temperature is `u + theta_c`.

use serde::{Deserialize, Serialize};

use crate::error::ProblemError;

/// Material and boundary constants, all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Volumetric heat capacity of the crumb (J·m⁻³·K⁻¹).
    pub c_l: f64,
    /// Volumetric heat capacity of the crust.
    pub c_a: f64,
    /// Thermal conductivity of the crumb (W·m⁻¹·K⁻¹).
    pub k_l: f64,
    /// Thermal conductivity of the crust.
    pub k_a: f64,
    /// Moisture diffusivity of the crumb (m²·s⁻¹).
    pub d_l: f64,
    /// Moisture diffusivity of the crust.
    pub d_a: f64,
    /// Convective transfer coefficient at the oven face.
    pub h: f64,
    /// Radiative constant at the oven face.
    pub sigma: f64,
    /// Sorption flux coefficient on the bread side.
    pub b1: f64,
    /// Sorption flux coefficient on the oven side.
    pub b2: f64,
    /// Latent heat of evaporation (J·m⁻³).
    pub latent: f64,
    /// Phase-transition temperature offset θ_c (K).
    pub theta_c: f64,
}

impl PhysicalParams {
    /// Checks strict positivity of every constant.
    pub fn validate(&self) -> Result<(), ProblemError> {
        let fields = [
            ("c_l", self.c_l),
            ("c_a", self.c_a),
            ("k_l", self.k_l),
            ("k_a", self.k_a),
            ("d_l", self.d_l),
            ("d_a", self.d_a),
            ("h", self.h),
            ("sigma", self.sigma),
            ("b1", self.b1),
            ("b2", self.b2),
            ("latent", self.latent),
            ("theta_c", self.theta_c),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ProblemError::NonPositive {
                    what: name,
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// True when `b1 <= b2`, the hypothesis of the moisture-floor bound.
    /// Informational only; the solver does not require it.
    pub fn b1_le_b2(&self) -> bool {
        self.b1 <= self.b2
    }
}

/// Argument convention for the sorption flux at the oven face.
///
/// The boundary condition applies `p` either to the shifted temperature
/// `u(t,1) + theta_c` (the convention the qualitative moisture bound relies
/// on; default) or to the raw field value `u(t,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SorptionArg {
    #[default]
    Shifted,
    Literal,
}

/// Solver-level modelling switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModelFlags {
    /// Argument convention for the sorption flux.
    #[serde(default)]
    pub sorption_arg: SorptionArg,
    /// When set, the radiative boundary uses the positive part
    /// `[u(t,1)+theta_c]⁺` instead of the raw shifted temperature.
    #[serde(default)]
    pub radiative_guard: bool,
}

/// Piecewise-linear, nondecreasing sorption function with constant extension
/// outside the breakpoint range and optional C¹ corner rounding.
///
/// The representation keeps the admissibility bounds `0 <= p, p' <= cap`
/// machine-checkable: values are checked at breakpoints, slopes per piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SorptionFunction {
    /// Ordered `(argument, value)` pairs.
    pub breakpoints: Vec<(f64, f64)>,
    /// Halfwidth of the quadratic blend applied at interior corners; 0
    /// disables smoothing.
    #[serde(default)]
    pub smoothing_halfwidth: f64,
    /// Upper bound M_p for both the values and the slopes.
    pub cap: f64,
}

impl SorptionFunction {
    /// A constant sorption function (zero flux difference when `b1 = b2`).
    pub fn constant(value: f64) -> Self {
        SorptionFunction {
            breakpoints: vec![(0.0, value)],
            smoothing_halfwidth: 0.0,
            cap: value.max(1.0),
        }
    }

    /// Structural checks: nonempty, finite, strictly increasing arguments,
    /// positive cap, smoothing windows disjoint.
    pub fn validate_shape(&self) -> Result<(), ProblemError> {
        if self.breakpoints.is_empty() {
            return Err(ProblemError::Empty("sorption breakpoints"));
        }
        for (i, (x, v)) in self.breakpoints.iter().enumerate() {
            if !x.is_finite() || !v.is_finite() {
                return Err(ProblemError::NonFinite {
                    what: "sorption breakpoints",
                    index: i,
                });
            }
        }
        let mut min_gap = f64::INFINITY;
        for i in 1..self.breakpoints.len() {
            let gap = self.breakpoints[i].0 - self.breakpoints[i - 1].0;
            if gap <= 0.0 {
                return Err(ProblemError::NonMonotone {
                    what: "sorption breakpoint arguments",
                    index: i,
                });
            }
            min_gap = min_gap.min(gap);
        }
        if !(self.cap > 0.0) {
            return Err(ProblemError::NonPositive {
                what: "sorption cap",
                value: self.cap,
            });
        }
        if self.smoothing_halfwidth < 0.0 {
            return Err(ProblemError::NonPositive {
                what: "sorption smoothing halfwidth",
                value: self.smoothing_halfwidth,
            });
        }
        if self.breakpoints.len() > 1 && self.smoothing_halfwidth > 0.5 * min_gap {
            return Err(ProblemError::SmoothingTooWide {
                halfwidth: self.smoothing_halfwidth,
                max: 0.5 * min_gap,
            });
        }
        Ok(())
    }

    fn piecewise_linear(&self, r: f64) -> f64 {
        let bp = &self.breakpoints;
        if r <= bp[0].0 {
            return bp[0].1;
        }
        if r >= bp[bp.len() - 1].0 {
            return bp[bp.len() - 1].1;
        }
        let k = bp.partition_point(|&(x, _)| x <= r) - 1;
        let (x0, v0) = bp[k];
        let (x1, v1) = bp[k + 1];
        v0 + (v1 - v0) * (r - x0) / (x1 - x0)
    }

    /// Slope of the unsmoothed function on the piece containing `r`
    /// (constant extensions have slope 0).
    fn slope_at(&self, r: f64) -> f64 {
        let bp = &self.breakpoints;
        if r < bp[0].0 || r > bp[bp.len() - 1].0 || bp.len() == 1 {
            return 0.0;
        }
        let k = bp.partition_point(|&(x, _)| x <= r).clamp(1, bp.len() - 1) - 1;
        let (x0, v0) = bp[k];
        let (x1, v1) = bp[k + 1];
        (v1 - v0) / (x1 - x0)
    }

    /// Evaluates `p(r)`, applying the C¹ quadratic blend near corners when
    /// smoothing is enabled. The blend interpolates between the two adjacent
    /// line segments, so it preserves monotonicity and the `[0, cap]` range.
    pub fn eval(&self, r: f64) -> f64 {
        let rad = self.smoothing_halfwidth;
        if rad > 0.0 && self.breakpoints.len() > 1 {
            // Corners: every breakpoint, including the two ends where the
            // constant extension meets the first/last segment.
            for k in 0..self.breakpoints.len() {
                let xk = self.breakpoints[k].0;
                if (r - xk).abs() < rad {
                    let s_left = self.slope_at(xk - rad);
                    let s_right = self.slope_at(xk + rad);
                    let base = self.piecewise_linear(xk - rad) + s_left * (r - (xk - rad));
                    let q = (r - (xk - rad)).powi(2) * (s_right - s_left) / (4.0 * rad);
                    return base + q;
                }
            }
        }
        self.piecewise_linear(r)
    }

    /// Per-piece slopes, for the (A1) Lipschitz/monotonicity check.
    pub fn slopes(&self) -> Vec<f64> {
        (1..self.breakpoints.len())
            .map(|i| {
                let (x0, v0) = self.breakpoints[i - 1];
                let (x1, v1) = self.breakpoints[i];
                (v1 - v0) / (x1 - x0)
            })
            .collect()
    }
}

/// Oven temperature schedule, piecewise linear in time with clamped
/// extension, optionally flagged constant for the trichotomy regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvenSchedule {
    /// Ordered `(time, temperature)` samples.
    pub samples: Vec<(f64, f64)>,
    /// Declares the schedule constant in time; enables the certificates that
    /// require a fixed oven temperature.
    #[serde(default)]
    pub constant: bool,
}

impl OvenSchedule {
    /// A constant schedule at `level`.
    pub fn constant_at(level: f64) -> Self {
        OvenSchedule {
            samples: vec![(0.0, level)],
            constant: true,
        }
    }

    pub fn validate_shape(&self) -> Result<(), ProblemError> {
        if self.samples.is_empty() {
            return Err(ProblemError::Empty("oven samples"));
        }
        for (i, (t, v)) in self.samples.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() {
                return Err(ProblemError::NonFinite {
                    what: "oven samples",
                    index: i,
                });
            }
        }
        for i in 1..self.samples.len() {
            if self.samples[i].0 <= self.samples[i - 1].0 {
                return Err(ProblemError::NonMonotone {
                    what: "oven sample times",
                    index: i,
                });
            }
        }
        if self.constant {
            let v0 = self.samples[0].1;
            for (i, &(_, v)) in self.samples.iter().enumerate() {
                if v != v0 {
                    return Err(ProblemError::NotConstant { index: i });
                }
            }
        }
        Ok(())
    }

    /// `u_b(t)`: linear interpolation, clamped to the nearest sample outside
    /// the sampled range.
    pub fn eval(&self, t: f64) -> f64 {
        let s = &self.samples;
        if self.constant || t <= s[0].0 {
            return s[0].1;
        }
        if t >= s[s.len() - 1].0 {
            return s[s.len() - 1].1;
        }
        let k = s.partition_point(|&(ts, _)| ts <= t) - 1;
        let (t0, v0) = s[k];
        let (t1, v1) = s[k + 1];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Minimum sampled temperature (for the (A4) check).
    pub fn min_level(&self) -> f64 {
        self.samples.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min)
    }
}

/// Initial front position and fields, sampled on a uniform physical grid of
/// `[0, 1]` (both endpoints included) and linearly interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    /// Initial front position, strictly inside `(0, 1)`.
    pub e0: f64,
    /// Initial temperature field samples.
    pub u0: Vec<f64>,
    /// Initial water content samples (same grid as `u0`).
    pub w0: Vec<f64>,
}

impl InitialData {
    pub fn validate_shape(&self) -> Result<(), ProblemError> {
        if self.u0.is_empty() {
            return Err(ProblemError::Empty("u0"));
        }
        if self.w0.is_empty() {
            return Err(ProblemError::Empty("w0"));
        }
        if self.u0.len() != self.w0.len() {
            return Err(ProblemError::GridMismatch("initial", self.u0.len(), self.w0.len()));
        }
        if self.u0.len() < 3 {
            return Err(ProblemError::TooFew {
                what: "initial field grid",
                min: 3,
                got: self.u0.len(),
            });
        }
        for (i, v) in self.u0.iter().enumerate() {
            if !v.is_finite() {
                return Err(ProblemError::NonFinite { what: "u0", index: i });
            }
        }
        for (i, v) in self.w0.iter().enumerate() {
            if !v.is_finite() {
                return Err(ProblemError::NonFinite { what: "w0", index: i });
            }
        }
        if !self.e0.is_finite() {
            return Err(ProblemError::NonFinite { what: "e0", index: 0 });
        }
        Ok(())
    }

    /// Grid spacing of the sample grid.
    pub fn dx(&self) -> f64 {
        1.0 / (self.u0.len() - 1) as f64
    }

    fn interp(field: &[f64], x: f64) -> f64 {
        let n = field.len();
        let dx = 1.0 / (n - 1) as f64;
        let x = x.clamp(0.0, 1.0);
        let k = ((x / dx).floor() as usize).min(n - 2);
        let frac = (x - k as f64 * dx) / dx;
        field[k] * (1.0 - frac) + field[k + 1] * frac
    }

    pub fn eval_u0(&self, x: f64) -> f64 {
        Self::interp(&self.u0, x)
    }

    pub fn eval_w0(&self, x: f64) -> f64 {
        Self::interp(&self.w0, x)
    }

    /// Second-order one-sided derivative of `u0` at `x = 0`.
    pub fn u0_deriv_at_0(&self) -> f64 {
        let dx = self.dx();
        (-3.0 * self.u0[0] + 4.0 * self.u0[1] - self.u0[2]) / (2.0 * dx)
    }

    /// Second-order one-sided derivative of `u0` at `x = 1`.
    pub fn u0_deriv_at_1(&self) -> f64 {
        let n = self.u0.len();
        let dx = self.dx();
        (3.0 * self.u0[n - 1] - 4.0 * self.u0[n - 2] + self.u0[n - 3]) / (2.0 * dx)
    }
}

/// The full problem datum: constants, sorption, oven schedule, initial data
/// and horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSetup {
    pub params: PhysicalParams,
    pub sorption: SorptionFunction,
    pub oven: OvenSchedule,
    pub init: InitialData,
    /// Final simulation time T.
    pub horizon: f64,
    #[serde(default)]
    pub flags: ModelFlags,
}

impl ProblemSetup {
    /// Structural validation of all members (malformed-input class).
    pub fn validate_shape(&self) -> Result<(), ProblemError> {
        self.params.validate()?;
        self.sorption.validate_shape()?;
        self.oven.validate_shape()?;
        self.init.validate_shape()?;
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(ProblemError::NonPositive {
                what: "horizon",
                value: self.horizon,
            });
        }
        Ok(())
    }
}

/// The admissibility conditions checked by [`validate_setup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Assumption {
    /// Sorption bounds: `0 <= p, p' <= cap`.
    A1,
    /// Front inside the domain and initial temperature sign pattern.
    A2,
    /// Strictly positive initial moisture at the front.
    A3,
    /// Oven at or above the phase-transition temperature.
    A4,
    /// Initial compatibility: flat `u0` at `x = 0`, boundary flux balance at
    /// `x = 1`.
    A5,
}

impl std::fmt::Display for Assumption {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Assumption::A1 => "A1",
            Assumption::A2 => "A2",
            Assumption::A3 => "A3",
            Assumption::A4 => "A4",
            Assumption::A5 => "A5",
        };
        f.write_str(s)
    }
}

/// Outcome of one assumption check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub assumption: Assumption,
    pub passed: bool,
    /// Offending grid index, breakpoint index or sample index, when the
    /// failure is localized.
    pub location: Option<usize>,
    pub detail: String,
}

/// Result of [`validate_setup`]: one entry per assumption, pass/fail each.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<AssumptionCheck>,
    /// Informational: `b1 <= b2` (moisture-floor hypothesis).
    pub b1_le_b2: bool,
    /// Informational: `w0 > 0` on the whole grid (trichotomy hypothesis).
    pub w0_positive_everywhere: bool,
}

impl ValidationReport {
    /// A setup is runnable iff every assumption passed.
    pub fn runnable(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{}:{}", c.assumption, if c.passed { "pass" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn pass(assumption: Assumption, detail: impl Into<String>) -> AssumptionCheck {
    AssumptionCheck {
        assumption,
        passed: true,
        location: None,
        detail: detail.into(),
    }
}

fn fail(assumption: Assumption, location: Option<usize>, detail: impl Into<String>) -> AssumptionCheck {
    AssumptionCheck {
        assumption,
        passed: false,
        location,
        detail: detail.into(),
    }
}

/// Checks the admissibility conditions (A1)–(A5) against a structurally valid
/// setup. `tol` is the discrete slack used where the conditions constrain
/// grid-sampled functions (sign patterns, compatibility residuals).
///
/// Malformed data (empty grids, non-monotone sample times, non-positive
/// constants) is reported as an error, distinct from assumption violations.
pub fn validate_setup(setup: &ProblemSetup, tol: f64) -> Result<ValidationReport, ProblemError> {
    if !(tol > 0.0) {
        return Err(ProblemError::NonPositive {
            what: "validation tolerance",
            value: tol,
        });
    }
    setup.validate_shape()?;

    let mut checks = Vec::with_capacity(5);

    // (A1): 0 <= p <= cap at breakpoints (constant extension adds no new
    // values) and 0 <= slope <= cap on every piece.
    let mut a1: Option<AssumptionCheck> = None;
    for (i, &(_, v)) in setup.sorption.breakpoints.iter().enumerate() {
        if !(0.0..=setup.sorption.cap).contains(&v) {
            a1 = Some(fail(
                Assumption::A1,
                Some(i),
                format!("p value {v} outside [0, {}] at breakpoint {i}", setup.sorption.cap),
            ));
            break;
        }
    }
    if a1.is_none() {
        for (i, s) in setup.sorption.slopes().iter().enumerate() {
            if !(0.0..=setup.sorption.cap).contains(s) {
                a1 = Some(fail(
                    Assumption::A1,
                    Some(i),
                    format!("p slope {s} outside [0, {}] on piece {i}", setup.sorption.cap),
                ));
                break;
            }
        }
    }
    checks.push(a1.unwrap_or_else(|| pass(Assumption::A1, "sorption bounds hold")));

    // (A2): 0 < e0 < 1, u0 <= 0 on [0, e0], u0 >= 0 on [e0, 1].
    let e0 = setup.init.e0;
    let a2 = if !(0.0 < e0 && e0 < 1.0) {
        fail(Assumption::A2, None, format!("e0 = {e0} outside (0, 1)"))
    } else {
        let dx = setup.init.dx();
        let mut bad: Option<(usize, f64, &str)> = None;
        for (i, &v) in setup.init.u0.iter().enumerate() {
            let x = i as f64 * dx;
            if x <= e0 && v > tol {
                bad = Some((i, v, "u0 > 0 on crumb side"));
                break;
            }
            if x >= e0 && v < -tol {
                bad = Some((i, v, "u0 < 0 on crust side"));
                break;
            }
        }
        let front_val = setup.init.eval_u0(e0);
        if let Some((i, v, what)) = bad {
            fail(Assumption::A2, Some(i), format!("{what}: u0[{i}] = {v}"))
        } else if front_val.abs() > tol {
            fail(
                Assumption::A2,
                None,
                format!("u0(e0) = {front_val} not within {tol} of 0"),
            )
        } else {
            pass(Assumption::A2, "initial temperature sign pattern holds")
        }
    };
    checks.push(a2);

    // (A3): w0(e0) > 0, strictly.
    let w_front = setup.init.eval_w0(e0);
    checks.push(if w_front > 0.0 {
        pass(Assumption::A3, format!("w0(e0) = {w_front}"))
    } else {
        let idx = ((e0 * (setup.init.w0.len() - 1) as f64).round() as usize)
            .min(setup.init.w0.len() - 1);
        fail(
            Assumption::A3,
            Some(idx),
            format!("w0(e0) = {w_front} not strictly positive"),
        )
    });

    // (A4): u_b >= theta_c at every sample.
    let mut a4: Option<AssumptionCheck> = None;
    for (i, &(_, v)) in setup.oven.samples.iter().enumerate() {
        if v < setup.params.theta_c {
            a4 = Some(fail(
                Assumption::A4,
                Some(i),
                format!("u_b sample {v} below theta_c = {} at index {i}", setup.params.theta_c),
            ));
            break;
        }
    }
    checks.push(a4.unwrap_or_else(|| pass(Assumption::A4, "oven at or above theta_c")));

    // (A5): u0_x(0) = 0 and -k_a u0_x(1) = g(0, u0(1)), to discrete tolerance.
    let scale = setup
        .init
        .u0
        .iter()
        .fold(1.0_f64, |m, &v| m.max(v.abs()));
    let d0 = setup.init.u0_deriv_at_0();
    let a5 = if d0.abs() > tol * scale {
        fail(
            Assumption::A5,
            Some(0),
            format!("u0_x(0) = {d0} exceeds tolerance {}", tol * scale),
        )
    } else {
        let d1 = setup.init.u0_deriv_at_1();
        let r1 = *setup.init.u0.last().unwrap();
        let g = boundary_heat_flux(0.0, r1, &setup.oven, &setup.params, setup.flags.radiative_guard);
        let res = -setup.params.k_a * d1 - g;
        let scale1 = 1.0_f64.max(g.abs()).max((setup.params.k_a * d1).abs());
        if res.abs() > tol * scale1 {
            fail(
                Assumption::A5,
                Some(setup.init.u0.len() - 1),
                format!("boundary compatibility residual {res} exceeds tolerance {}", tol * scale1),
            )
        } else {
            pass(Assumption::A5, "initial compatibility holds")
        }
    };
    checks.push(a5);

    Ok(ValidationReport {
        checks,
        b1_le_b2: setup.params.b1_le_b2(),
        w0_positive_everywhere: setup.init.w0.iter().all(|&v| v > 0.0),
    })
}

/// Heat flux extracted at the oven face `x = 1`:
///
/// `g(t, r) = h·(r + θ_c − u_b(t)) + σ·((r + θ_c)⁴ − u_b(t)⁴)`
///
/// where `r = u(t, 1)`. Strictly increasing in `r`. With `guard` set, the
/// shifted temperature is clipped at zero, `[r + θ_c]⁺`, in both terms.
pub fn boundary_heat_flux(
    t: f64,
    r: f64,
    oven: &OvenSchedule,
    params: &PhysicalParams,
    guard: bool,
) -> f64 {
    let ub = oven.eval(t);
    let s = if guard { (r + params.theta_c).max(0.0) } else { r + params.theta_c };
    params.h * (s - ub) + params.sigma * (s.powi(4) - ub.powi(4))
}

/// Newton linearization slope for [`boundary_heat_flux`]: `h + 4σ(r + θ_c)³`.
///
/// Below the phase-transition temperature (`r + θ_c < 0`, outside the
/// physical range of the crust field) the quartic contribution is dropped so
/// the iteration slope stays positive; the converged root is still checked
/// against the exact flux.
pub fn boundary_heat_flux_deriv(r: f64, params: &PhysicalParams, guard: bool) -> f64 {
    let s = r + params.theta_c;
    let s = if guard || s < 0.0 { s.max(0.0) } else { s };
    params.h + 4.0 * params.sigma * s.powi(3)
}

/// Moisture flux extracted at the oven face `x = 1`:
///
/// `b1·p(arg) − b2·p(u_b(t))`
///
/// with `arg = u(t,1) + θ_c` under the default convention, or `arg = u(t,1)`
/// under [`SorptionArg::Literal`].
pub fn boundary_moisture_flux(
    t: f64,
    r: f64,
    sorption: &SorptionFunction,
    oven: &OvenSchedule,
    params: &PhysicalParams,
    arg: SorptionArg,
) -> f64 {
    let a = match arg {
        SorptionArg::Shifted => r + params.theta_c,
        SorptionArg::Literal => r,
    };
    params.b1 * sorption.eval(a) - params.b2 * sorption.eval(oven.eval(t))
}
