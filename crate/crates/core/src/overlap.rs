//! Regularized overlaps of continuum states and the orthogonality condition
//! that fixes the phase family.
//!
//! For two states with `k != l`, the overlap `int_0^inf psi_k psi_l r^(D-1) dr`
//! is evaluated through boundary terms. Writing the antiderivative as `B(Z)`:
//!
//! - 3D: products of `sin`/`cos` are integrated exactly; `B(Z)` is a finite
//!   sum of oscillations at frequencies `k - l` and `k + l`.
//! - 2D: for each pair of cylinder functions `C, D` in `{J, N}`,
//!   `int t C0(kt) D0(lt) dt = t [k C1(kt) D0(lt) - l C0(kt) D1(lt)] / (k^2 - l^2)`.
//!
//! The lower limit is taken analytically from the small-argument forms in
//! [`specfun::small_arg`]. The upper boundary oscillates without decaying; its
//! Abel mean `lambda int_Zc^inf exp(-lambda (Z - Zc)) B(Z) dZ` is evaluated in
//! closed form on the large-argument representation of `B` for each damping
//! value and extrapolated to `lambda = 0`.
//!
//! With unit phase pairs `(c, s)` the non-delta part of the overlap is
//!
//! - 3D: `c_k c_l [-tan(eta_k) l + tan(eta_l) k] / (l^2 - k^2)`,
//! - 2D: `c_k c_l [(2/pi)(tan eta_k - tan eta_l) + (4/pi^2) tan eta_k tan eta_l ln(k/l)] / (l^2 - k^2)`.
//!
//! The bracketed expressions are [`residual_3d`] and [`residual_2d`].
//! [`OverlapBreakdown::finite_part`] divides the raw overlap by the prefactor
//! so it is directly comparable with them.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use crate::error::{domain, require_finite, require_positive, Error, Result};
use crate::quad;
use crate::roots;
use crate::specfun::{self, small_arg, CylValues};
use crate::states::{BoundState, Coupling, Dimension, Phase, ScatteringState};

/// Knobs of the regularized overlap evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Lower cutoff at which the exact boundary term is compared with its
    /// analytic `eps -> 0` limit.
    pub lower_eps: f64,
    /// Ascending start radii of the Abel-averaged tail.
    pub upper_cutoffs: Vec<f64>,
    /// Strictly decreasing damping values, extrapolated to zero.
    pub abel_damping: Vec<f64>,
    pub tolerance: f64,
}

pub const DEFAULT_TOLERANCE_2D: f64 = 1e-6;
pub const DEFAULT_TOLERANCE_3D: f64 = 1e-8;

/// The 3D integrand is O(1) at the origin, so cutting at `eps` costs about
/// `eps`; 2D costs `eps^2 ln^2(eps)`.
fn lower_eps_for(tolerance: f64, k_max: f64) -> f64 {
    1e-3 * tolerance.min(1.0) / k_max.max(1.0)
}

impl QuadratureConfig {
    /// Schedule suited to a pair of wavenumbers: cutoffs at `50, 100, 200`
    /// wavelengths of the smaller one, and eight damping values halving from
    /// `1e-2` of `min(k, l, |k - l|)`.
    pub fn for_pair(dim: Dimension, k: f64, l: f64) -> Self {
        let k_min = k.min(l);
        let gap = (k - l).abs();
        let scale = if gap > 0.0 { k_min.min(gap) } else { k_min };
        let tolerance = match dim {
            Dimension::Two => DEFAULT_TOLERANCE_2D,
            Dimension::Three => DEFAULT_TOLERANCE_3D,
        };
        QuadratureConfig {
            lower_eps: lower_eps_for(tolerance, k.max(l)),
            upper_cutoffs: vec![50.0 / k_min, 100.0 / k_min, 200.0 / k_min],
            abel_damping: (0..8).map(|j| 1e-2 * scale * 0.5f64.powi(j)).collect(),
            tolerance,
        }
    }

    /// Replaces the tolerance and rescales `lower_eps` to match it.
    pub fn with_tolerance(mut self, tolerance: f64, k_max: f64) -> Self {
        self.tolerance = tolerance;
        self.lower_eps = lower_eps_for(tolerance, k_max);
        self
    }

    /// Checks the structural invariants; `k_min` is the smallest wavenumber
    /// the config will be used with.
    pub fn validate(&self, k_min: f64) -> Result<()> {
        require_positive("lower_eps", self.lower_eps)?;
        require_positive("tolerance", self.tolerance)?;
        if self.upper_cutoffs.is_empty() {
            return Err(domain("upper_cutoffs must not be empty"));
        }
        for z in &self.upper_cutoffs {
            require_positive("upper cutoff", *z)?;
        }
        if self.upper_cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("upper_cutoffs must be strictly ascending"));
        }
        if self.lower_eps >= self.upper_cutoffs[0] {
            return Err(domain("lower_eps must be below the smallest upper cutoff"));
        }
        if self.abel_damping.len() < 2 {
            return Err(domain("abel_damping needs at least two values"));
        }
        if self.abel_damping.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(domain("abel_damping values must be nonnegative and finite"));
        }
        if self.abel_damping.windows(2).any(|w| w[1] >= w[0]) {
            return Err(domain("abel_damping must be strictly decreasing"));
        }
        let last = *self.abel_damping.last().unwrap();
        if last > 1e-4 * k_min {
            return Err(domain(format!(
                "final damping {last:e} exceeds 1e-4 * k_min = {:e}",
                1e-4 * k_min
            )));
        }
        Ok(())
    }
}

/// Result of [`overlap_numeric`].
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapBreakdown {
    /// Non-delta overlap in the normalization of [`residual_2d`]/[`residual_3d`].
    /// Not finite when either state sits at a phase pole; use `raw_overlap`.
    pub finite_part: f64,
    /// Non-delta overlap of the unit-phase states themselves.
    pub raw_overlap: f64,
    /// Part of `raw_overlap` from the `eps -> 0` boundary.
    pub lower_limit_contribution: f64,
    /// Part of `raw_overlap` from the extrapolated Abel mean of the upper boundary.
    pub upper_limit_contribution: f64,
    /// Magnitude of the exact upper boundary term at the last cutoff, which
    /// the Abel mean averages away.
    pub oscillatory_tail_discarded: f64,
    /// `|B(eps) - B(0+)|` with the exact kernel at `lower_eps`.
    pub lower_eps_deviation: f64,
    /// Largest extrapolation spread (damping or cutoff) encountered.
    pub extrapolation_spread: f64,
    pub config_used: QuadratureConfig,
}

/// `A cos(omega Z + phase)`.
#[derive(Debug, Clone, Copy)]
struct Wave {
    amp: f64,
    omega: f64,
    phase: f64,
}

impl Wave {
    /// `lambda int_zc^inf exp(-lambda (Z - zc)) A cos(omega Z + phase) dZ`.
    fn abel_mean(&self, lambda: f64, zc: f64) -> f64 {
        let theta = self.omega * zc + self.phase;
        let denom = lambda * lambda + self.omega * self.omega;
        if denom == 0.0 {
            return self.amp * theta.cos();
        }
        self.amp * lambda * (lambda * theta.cos() - self.omega * theta.sin()) / denom
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    Regular,
    Irregular,
}

const BASES: [Basis; 2] = [Basis::Regular, Basis::Irregular];

fn coefficient(phase: &Phase, b: Basis) -> f64 {
    match b {
        Basis::Regular => phase.cos(),
        Basis::Irregular => -phase.sin(),
    }
}

/// Boundary data of one basis pair: lower limit, upper waves and an exact
/// evaluator of the antiderivative.
struct PairBoundary {
    lower: f64,
    waves: Vec<Wave>,
}

/// 3D basis: `sin x = cos(x - pi/2)`, `cos x`.
fn offset_3d(b: Basis) -> f64 {
    match b {
        Basis::Regular => FRAC_PI_2,
        Basis::Irregular => 0.0,
    }
}

fn pair_3d(k: f64, l: f64, x: Basis, y: Basis) -> PairBoundary {
    let (px, py) = (offset_3d(x), offset_3d(y));
    let mut lower = 0.0;
    let mut waves = Vec::with_capacity(2);
    // X(kr) Y(lr) = 1/2 [cos((k-l) r - px + py) + cos((k+l) r - px - py)]
    for (omega, beta) in [(k - l, py - px), (k + l, -px - py)] {
        // antiderivative of cos(omega r + beta) is sin(omega r + beta)/omega
        lower -= 0.5 * beta.sin() / omega;
        waves.push(Wave {
            amp: 0.5 / omega,
            omega,
            phase: beta - FRAC_PI_2,
        });
    }
    PairBoundary { lower, waves }
}

/// Exact 3D antiderivative of the pair product at `z`.
fn antiderivative_3d(k: f64, l: f64, x: Basis, y: Basis, z: f64) -> f64 {
    let (px, py) = (offset_3d(x), offset_3d(y));
    [(k - l, py - px), (k + l, -px - py)]
        .iter()
        .map(|(omega, beta)| 0.5 * (omega * z + beta).sin() / omega)
        .sum()
}

/// Large-argument phase offset: `C0(x) ~ sqrt(2/(pi x)) cos(x - pi/4 - offset)`.
fn offset_2d(b: Basis) -> f64 {
    match b {
        Basis::Regular => 0.0,
        Basis::Irregular => FRAC_PI_2,
    }
}

/// `lim_{eps->0} eps [k C1(k eps) D0(l eps) - l C0(k eps) D1(l eps)]`.
fn lommel_origin(k: f64, l: f64, x: Basis, y: Basis) -> f64 {
    use Basis::*;
    match (x, y) {
        (Regular, Regular) => 0.0,
        // J1 -> x/2 kills the first term; -l * 1 * N1(l eps) eps -> -N1_POLE
        (Regular, Irregular) => -small_arg::N1_POLE,
        (Irregular, Regular) => small_arg::N1_POLE,
        // N1_POLE (N0(l eps) - N0(k eps)); the log eps parts cancel
        (Irregular, Irregular) => small_arg::N1_POLE * small_arg::N0_LOG_COEFF * (l / k).ln(),
    }
}

fn pick(v: &CylValues, b: Basis) -> (f64, f64) {
    match b {
        Basis::Regular => (v.j0, v.j1),
        Basis::Irregular => (v.n0, v.n1),
    }
}

/// Exact `t [k C1(kt) D0(lt) - l C0(kt) D1(lt)]` at `t`.
fn lommel_bracket(k: f64, l: f64, x: Basis, y: Basis, vk: &CylValues, vl: &CylValues, t: f64) -> f64 {
    let (c0, c1) = pick(vk, x);
    let (d0, d1) = pick(vl, y);
    t * (k * c1 * d0 - l * c0 * d1)
}

fn pair_2d(k: f64, l: f64, x: Basis, y: Basis) -> PairBoundary {
    let denom = k * k - l * l;
    let (fx, fy) = (offset_2d(x), offset_2d(y));
    let lower = -lommel_origin(k, l, x, y) / denom;
    let a1 = (k / l).sqrt() / PI / denom;
    let a2 = -(l / k).sqrt() / PI / denom;
    let waves = vec![
        Wave { amp: a1, omega: k - l, phase: -FRAC_PI_2 - fx + fy },
        Wave { amp: a1, omega: k + l, phase: -PI - fx - fy },
        Wave { amp: a2, omega: k - l, phase: FRAC_PI_2 - fx + fy },
        Wave { amp: a2, omega: k + l, phase: -PI - fx - fy },
    ];
    PairBoundary { lower, waves }
}

fn check_pair(a: &ScatteringState, b: &ScatteringState) -> Result<()> {
    if a.dimension != b.dimension {
        return Err(domain("states of different dimensions"));
    }
    if a.k == b.k {
        return Err(Error::DegenerateWavenumbers { k: a.k });
    }
    Ok(())
}

/// Regularized non-delta overlap of two continuum states.
pub fn overlap_numeric(
    a: &ScatteringState,
    b: &ScatteringState,
    config: &QuadratureConfig,
) -> Result<OverlapBreakdown> {
    check_pair(a, b)?;
    let (k, l) = (a.k, b.k);
    config.validate(k.min(l))?;
    let dim = a.dimension;

    let mut lower = 0.0;
    let mut waves = Vec::new();
    for x in BASES {
        for y in BASES {
            let w = coefficient(&a.phase, x) * coefficient(&b.phase, y);
            if w == 0.0 {
                continue;
            }
            let pb = match dim {
                Dimension::Two => pair_2d(k, l, x, y),
                Dimension::Three => pair_3d(k, l, x, y),
            };
            lower += w * pb.lower;
            waves.extend(pb.waves.into_iter().map(|wv| Wave { amp: w * wv.amp, ..wv }));
        }
    }

    let eps = config.lower_eps;
    let z_last = *config.upper_cutoffs.last().unwrap();
    let (exact_at_eps, exact_at_z) = exact_boundaries(dim, a, b, eps, z_last);
    // The integral from 0 is B(Z) - B(0+) with B(0+) = -lower.
    let lower_eps_deviation = (exact_at_eps + lower).abs();
    if lower_eps_deviation > config.tolerance {
        return Err(Error::ConvergenceFailure {
            stage: "lower-limit expansion",
            spread: lower_eps_deviation,
            tolerance: config.tolerance,
        });
    }

    let mut spread: f64 = 0.0;
    let mut tails = Vec::with_capacity(config.upper_cutoffs.len());
    for &zc in &config.upper_cutoffs {
        let means: Vec<f64> = config
            .abel_damping
            .iter()
            .map(|&lam| waves.iter().map(|w| w.abel_mean(lam, zc)).sum())
            .collect();
        let (tail, s) = quad::richardson(&config.abel_damping, &means);
        if s > config.tolerance {
            return Err(Error::ConvergenceFailure {
                stage: "Abel damping extrapolation",
                spread: s,
                tolerance: config.tolerance,
            });
        }
        spread = spread.max(s);
        tails.push(tail);
    }
    let (tmin, tmax) = tails
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(*t), hi.max(*t)));
    if tmax - tmin > config.tolerance {
        return Err(Error::ConvergenceFailure {
            stage: "upper cutoff schedule",
            spread: tmax - tmin,
            tolerance: config.tolerance,
        });
    }
    spread = spread.max(tmax - tmin);
    let upper = *tails.last().unwrap();
    let raw = lower + upper;

    Ok(OverlapBreakdown {
        finite_part: raw / residual_prefactor(dim, a, b),
        raw_overlap: raw,
        lower_limit_contribution: lower,
        upper_limit_contribution: upper,
        oscillatory_tail_discarded: exact_at_z.abs(),
        lower_eps_deviation,
        extrapolation_spread: spread,
        config_used: config.clone(),
    })
}

/// Factor relating the raw overlap to the closed-form residual.
fn residual_prefactor(dim: Dimension, a: &ScatteringState, b: &ScatteringState) -> f64 {
    let cc = a.phase.cos() * b.phase.cos();
    match dim {
        Dimension::Three => cc,
        Dimension::Two => cc / (b.k * b.k - a.k * a.k),
    }
}

/// Exact antiderivative (summed over basis pairs) at `eps` and at `z`.
fn exact_boundaries(dim: Dimension, a: &ScatteringState, b: &ScatteringState, eps: f64, z: f64) -> (f64, f64) {
    let (k, l) = (a.k, b.k);
    let mut at_eps = 0.0;
    let mut at_z = 0.0;
    match dim {
        Dimension::Three => {
            for x in BASES {
                for y in BASES {
                    let w = coefficient(&a.phase, x) * coefficient(&b.phase, y);
                    at_eps += w * antiderivative_3d(k, l, x, y, eps);
                    at_z += w * antiderivative_3d(k, l, x, y, z);
                }
            }
        }
        Dimension::Two => {
            let denom = k * k - l * l;
            let (ke, le) = (specfun::cylinder(k * eps), specfun::cylinder(l * eps));
            let (kz, lz) = (specfun::cylinder(k * z), specfun::cylinder(l * z));
            for x in BASES {
                for y in BASES {
                    let w = coefficient(&a.phase, x) * coefficient(&b.phase, y);
                    at_eps += w * lommel_bracket(k, l, x, y, &ke, &le, eps) / denom;
                    at_z += w * lommel_bracket(k, l, x, y, &kz, &lz, z) / denom;
                }
            }
        }
    }
    (at_eps, at_z)
}

fn check_residual_args(k: f64, l: f64, tk: f64, tl: f64) -> Result<()> {
    require_positive("k", k)?;
    require_positive("l", l)?;
    require_finite("tan eta(k)", tk)?;
    require_finite("tan eta(l)", tl)
}

/// `(2/pi)(tan eta_k - tan eta_l) + (4/pi^2) tan eta_k tan eta_l ln(k/l)`.
pub fn residual_2d(k: f64, l: f64, tan_eta_k: f64, tan_eta_l: f64) -> Result<f64> {
    check_residual_args(k, l, tan_eta_k, tan_eta_l)?;
    Ok(FRAC_2_PI * (tan_eta_k - tan_eta_l)
        + FRAC_2_PI * FRAC_2_PI * tan_eta_k * tan_eta_l * (k / l).ln())
}

/// `[-tan eta_k l + tan eta_l k] / (l^2 - k^2)`, evaluated as
/// `k l (tan eta_l / l - tan eta_k / k) / (l^2 - k^2)` so that a 3D family
/// (constant `tan eta / k`) cancels without rounding.
pub fn residual_3d(k: f64, l: f64, tan_eta_k: f64, tan_eta_l: f64) -> Result<f64> {
    check_residual_args(k, l, tan_eta_k, tan_eta_l)?;
    if k == l {
        return Err(Error::DegenerateWavenumbers { k });
    }
    Ok(k * l * (tan_eta_l / l - tan_eta_k / k) / ((l - k) * (l + k)))
}

pub fn residual(dim: Dimension, k: f64, l: f64, tan_eta_k: f64, tan_eta_l: f64) -> Result<f64> {
    match dim {
        Dimension::Two => residual_2d(k, l, tan_eta_k, tan_eta_l),
        Dimension::Three => residual_3d(k, l, tan_eta_k, tan_eta_l),
    }
}

/// Outcome of [`solve_phase`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSolution {
    Tan(f64),
    /// The cancelling phase is `eta = ±pi/2`.
    Pole,
}

impl PhaseSolution {
    pub fn tan(&self) -> f64 {
        match self {
            PhaseSolution::Tan(t) => *t,
            PhaseSolution::Pole => f64::INFINITY,
        }
    }
}

/// Largest |tan eta(l)| the bracket search explores before declaring a pole.
const POLE_LIMIT: f64 = 1e15;

/// Closed forms used as the cross-check of [`solve_phase`].
pub fn phase_family_closed_form(dim: Dimension, l: f64, reference_k: f64, reference_tan_eta: f64) -> PhaseSolution {
    let (k, t) = (reference_k, reference_tan_eta);
    match dim {
        Dimension::Three => PhaseSolution::Tan(l / k * t),
        Dimension::Two => {
            let denom = 1.0 - FRAC_2_PI * t * (k / l).ln();
            if denom == 0.0 || (t / denom).abs() > POLE_LIMIT {
                PhaseSolution::Pole
            } else {
                PhaseSolution::Tan(t / denom)
            }
        }
    }
}

/// Finds `tan eta(l)` that cancels the non-delta overlap with the reference
/// state, by bracketing the residual as a function of `tan eta(l)`.
pub fn solve_phase(l: f64, reference_k: f64, reference_tan_eta: f64, dim: Dimension) -> Result<PhaseSolution> {
    require_positive("l", l)?;
    require_positive("reference k", reference_k)?;
    require_finite("reference tan eta", reference_tan_eta)?;
    if l == reference_k {
        return Err(Error::DegenerateWavenumbers { k: l });
    }
    let k = reference_k;
    let t = reference_tan_eta;
    let f = |x: f64| residual(dim, k, l, t, x).unwrap_or(f64::NAN);
    let seed = t.abs().max(1.0) * (l / k).max(1.0);
    let solved = match roots::expand_bracket(f, -seed, seed, POLE_LIMIT) {
        None => PhaseSolution::Pole,
        Some((lo, hi)) => PhaseSolution::Tan(roots::secant_bisection(f, lo, hi, 0.0)?),
    };
    let closed = phase_family_closed_form(dim, l, k, t);
    match (solved, closed) {
        (PhaseSolution::Tan(x), PhaseSolution::Tan(y)) => {
            if (x - y).abs() > 1e-9 * y.abs().max(1e-300) && (x - y).abs() > 1e-12 {
                return Err(Error::CrossCheck {
                    bracketed: x,
                    closed_form: y,
                });
            }
        }
        (PhaseSolution::Pole, PhaseSolution::Pole) => {}
        (s, c) => {
            return Err(Error::CrossCheck {
                bracketed: s.tan(),
                closed_form: c.tan(),
            })
        }
    }
    Ok(solved)
}

/// Relative agreement required of per-sample coupling estimates.
pub const INFER_TOLERANCE: f64 = 1e-8;

/// Recovers the coupling from `(k, tan eta)` samples.
pub fn infer_coupling(samples: &[(f64, f64)], dim: Dimension) -> Result<Coupling> {
    if samples.is_empty() {
        return Err(domain("infer_coupling needs at least one sample"));
    }
    let mut estimates = Vec::with_capacity(samples.len());
    for &(k, t) in samples {
        require_positive("sample k", k)?;
        if t.is_nan() {
            return Err(domain("sample tan eta is NaN"));
        }
        if t == 0.0 {
            return Err(Error::ZeroPhase { k });
        }
        let value = match dim {
            // tan eta = (pi/2) / ln(k / k_b)
            Dimension::Two => k * (-FRAC_PI_2 / t).exp(),
            // tan eta = -k / k_b'; a pole sample means the unitary limit
            Dimension::Three => {
                if t.is_infinite() {
                    0.0
                } else {
                    -k / t
                }
            }
        };
        estimates.push(value);
    }
    let first = estimates[0];
    for (i, v) in estimates.iter().enumerate().skip(1) {
        let scale = first.abs().max(v.abs());
        if (v - first).abs() > INFER_TOLERANCE * scale {
            return Err(Error::InconsistentFamily(format!(
                "sample 0 gives {first}, sample {i} gives {v}"
            )));
        }
    }
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    match dim {
        Dimension::Two => Coupling::two_d(mean),
        Dimension::Three => Coupling::three_d(mean),
    }
}

/// The delta coefficient of the unit-phase continuum states: `pi/2` in 3D,
/// `1/k` in 2D.
pub fn expected_delta_coefficient(dim: Dimension, k: f64) -> f64 {
    match dim {
        Dimension::Three => FRAC_PI_2,
        Dimension::Two => 1.0 / k,
    }
}

/// Relative spread allowed between the two cutoff estimates of [`delta_coefficient`].
pub const DELTA_SPREAD: f64 = 1e-3;

/// Estimates the coefficient of `delta(k - l)` for a coupling family.
pub fn delta_coefficient(
    dim: Dimension,
    coupling: &Coupling,
    k: f64,
    window: f64,
    config: &QuadratureConfig,
) -> Result<f64> {
    if coupling.dimension() != dim {
        return Err(domain("coupling dimension does not match"));
    }
    delta_coefficient_with(dim, k, window, config, |l| coupling.phase(l))
}

/// [`delta_coefficient`] for an arbitrary continuous phase family.
///
/// Computes `D(Z) = int_{k-w}^{k+w} dl int_0^Z psi_k psi_l r^(D-1) dr`, with
/// the inner integral in closed form, Cesàro-averages `D` over one period
/// `2 pi / w` of the window-edge oscillation starting at `Z0` and at `2 Z0`,
/// and extrapolates the `1/Z0^2` remainder.
pub fn delta_coefficient_with<F>(dim: Dimension, k: f64, window: f64, config: &QuadratureConfig, phase_of: F) -> Result<f64>
where
    F: Fn(f64) -> Result<Phase>,
{
    require_positive("k", k)?;
    require_positive("window", window)?;
    require_positive("tolerance", config.tolerance)?;
    if window > 0.25 * k {
        return Err(domain(format!("window {window} must be much smaller than k = {k}")));
    }
    let z0 = config
        .upper_cutoffs
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(100.0 / window);
    let period = 2.0 * PI / window;
    let z_max = 2.0 * z0 + period;

    // l grid: one 16-point panel per oscillation 2 pi / z_max, no node at l = k.
    let g16 = quad::GaussLegendre::new(16);
    let panels = ((2.0 * window * z_max) / (2.0 * PI)).ceil().max(2.0) as usize;
    let panels = panels + panels % 2;
    let width = 2.0 * window / panels as f64;
    let pk = phase_of(k)?;
    let mut nodes = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        let lo = k - window + p as f64 * width;
        for (l, w) in g16.mapped(lo, lo + width) {
            let pl = phase_of(l)?;
            let lower = delta_lower(dim, k, l, &pk, &pl);
            nodes.push((l, w, pl, lower));
        }
    }

    let d_of_z = |z: f64| -> f64 {
        match dim {
            Dimension::Three => {
                let (sk, ck) = (k * z).sin_cos();
                let u_k = pk.cos() * sk - pk.sin() * ck;
                let du_k = k * (pk.cos() * ck + pk.sin() * sk);
                nodes
                    .iter()
                    .map(|(l, w, pl, lower)| {
                        let (sl, cl) = (l * z).sin_cos();
                        let u_l = pl.cos() * sl - pl.sin() * cl;
                        let du_l = l * (pl.cos() * cl + pl.sin() * sl);
                        w * (lower + (du_k * u_l - u_k * du_l) / (l * l - k * k))
                    })
                    .sum()
            }
            Dimension::Two => {
                let vk = specfun::cylinder(k * z);
                let psi_k = pk.cos() * vk.j0 - pk.sin() * vk.n0;
                let psi1_k = pk.cos() * vk.j1 - pk.sin() * vk.n1;
                nodes
                    .iter()
                    .map(|(l, w, pl, lower)| {
                        let vl = specfun::cylinder(l * z);
                        let psi_l = pl.cos() * vl.j0 - pl.sin() * vl.n0;
                        let psi1_l = pl.cos() * vl.j1 - pl.sin() * vl.n1;
                        w * (lower + z * (k * psi1_k * psi_l - l * psi_k * psi1_l) / (k * k - l * l))
                    })
                    .sum()
            }
        }
    };

    let cesaro = |start: f64| -> f64 {
        let zpanels = ((period * (2.0 * k + window)) / (2.0 * PI)).ceil().max(4.0) as usize;
        let zw = period / zpanels as f64;
        (0..zpanels)
            .map(|p| {
                let lo = start + p as f64 * zw;
                g16.integrate(d_of_z, lo, lo + zw)
            })
            .sum::<f64>()
            / period
    };

    let e1 = cesaro(z0);
    let e2 = cesaro(2.0 * z0);
    let value = (4.0 * e2 - e1) / 3.0;
    let spread = (e2 - e1).abs();
    let allowed = DELTA_SPREAD * value.abs() + config.tolerance;
    if !value.is_finite() || spread > allowed {
        return Err(Error::ConvergenceFailure {
            stage: "delta coefficient cutoff extrapolation",
            spread,
            tolerance: allowed,
        });
    }
    Ok(value)
}

/// Lower-limit (non-delta) part of `int_0^Z psi_k psi_l r^(D-1) dr`.
fn delta_lower(dim: Dimension, k: f64, l: f64, pk: &Phase, pl: &Phase) -> f64 {
    let mut lower = 0.0;
    for x in BASES {
        for y in BASES {
            let w = coefficient(pk, x) * coefficient(pl, y);
            if w == 0.0 {
                continue;
            }
            lower += w * match dim {
                Dimension::Two => pair_2d(k, l, x, y).lower,
                Dimension::Three => pair_3d(k, l, x, y).lower,
            };
        }
    }
    lower
}

/// `int_0^inf psi_b psi_k r^(D-1) dr` for a bound and a continuum state.
///
/// The integrand decays like `exp(-kappa r)`, so plain adaptive quadrature
/// converges; the 2D logarithmic endpoint is handled by geometric panels.
pub fn bound_scattering_overlap(bs: &BoundState, s: &ScatteringState, config: &QuadratureConfig) -> Result<f64> {
    if bs.dimension != s.dimension {
        return Err(domain("bound and scattering states have different dimensions"));
    }
    require_positive("tolerance", config.tolerance)?;
    let kappa = bs.kappa;
    let k = s.k;
    let (c, sn) = (s.phase.cos(), s.phase.sin());
    let abs_tol = 1e-3 * config.tolerance;
    let value = match s.dimension {
        Dimension::Three => {
            let r_max = 60.0 / kappa;
            let breaks = uniform_breaks(0.0, r_max, (r_max * k.max(kappa)).ceil() as usize + 1);
            quad::adaptive_panels(
                |r| {
                    let (sk, ck) = (k * r).sin_cos();
                    (-kappa * r).exp() * (c * sk - sn * ck)
                },
                &breaks,
                abs_tol,
                1e-14,
            )
        }
        Dimension::Two => {
            let r_max = 45.0 / kappa;
            let r_split = (1.0 / kappa).min(1.0 / k);
            let mut breaks: Vec<f64> = vec![0.0];
            let mut r = r_split;
            let mut geometric = Vec::new();
            while r > 1e-15 * r_split {
                geometric.push(r);
                r *= 0.25;
            }
            breaks.extend(geometric.into_iter().rev());
            let n = (r_max * k.max(kappa)).ceil() as usize + 1;
            breaks.extend(uniform_breaks(r_split, r_max, n).into_iter().skip(1));
            quad::adaptive_panels(
                |r| {
                    if r == 0.0 {
                        return 0.0;
                    }
                    let (kb, _) = specfun::mod_bessel_k_scaled(kappa * r);
                    let v = specfun::cylinder(k * r);
                    kb * (-kappa * r).exp() * (c * v.j0 - sn * v.n0) * r
                },
                &breaks,
                abs_tol,
                1e-14,
            )
        }
    };
    Ok(value)
}

fn uniform_breaks(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}
