//! Finite-range oracle: attractive square (3D) and circular (2D) wells whose
//! depth is tuned to a target coupling while the radius shrinks to zero.
//!
//! Phase shifts use the conventional exterior forms `sin(kr + delta0)/r` (3D)
//! and `cos(delta0) J0(kr) + sin(delta0) N0(kr)` (2D); they relate to the
//! family's mixing angle by `eta = -delta0`.

use rayon::prelude::*;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, require_positive, Error, Result};
use crate::roots;
use crate::specfun;
use crate::states::{Coupling, Dimension};

/// First zero of `J0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Relative size below which a matching denominator counts as vanishing.
const POLE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWell {
    pub dimension: Dimension,
    pub radius: f64,
    /// `V0`: the potential is `-V0` inside the radius.
    pub depth: f64,
}

impl SquareWell {
    pub fn new(dimension: Dimension, radius: f64, depth: f64) -> Result<Self> {
        require_positive("radius", radius)?;
        require_positive("depth", depth)?;
        Ok(SquareWell {
            dimension,
            radius,
            depth,
        })
    }

    /// `sqrt(V0) R`.
    pub fn strength(&self) -> f64 {
        self.depth.sqrt() * self.radius
    }
}

/// s-wave phase shift `delta0(k)`.
///
/// 3D: `kR + delta0 = arg(q cos qR + i k sin qR)` with `q = sqrt(k^2 + V0)`,
/// the argument tracked continuously from `k = 0+` (where it is 0 or pi by
/// the sign of `cos(sqrt(V0) R)`, or pi/2 at a zero-energy resonance). 2D: logarithmic-derivative matching,
/// returned in `(-pi/2, pi/2]`.
pub fn phase_shift(k: f64, well: &SquareWell) -> Result<f64> {
    require_positive("k", k)?;
    SquareWell::new(well.dimension, well.radius, well.depth)?;
    match well.dimension {
        Dimension::Three => phase_shift_3d(k, well),
        Dimension::Two => phase_shift_2d(k, well),
    }
}

fn phase_shift_3d(k: f64, well: &SquareWell) -> Result<f64> {
    let r = well.radius;
    let v0 = well.depth;
    let z = |kk: f64| {
        let q = (kk * kk + v0).sqrt();
        let (s, c) = (q * r).sin_cos();
        (q * c, kk * s, q)
    };
    let (re0, _, q0) = z(0.0);
    // A zero-energy resonance starts the argument at +-pi/2, on the side
    // that k sin(qR) approaches.
    let mut theta = if re0.abs() < POLE_GUARD * q0 {
        FRAC_PI_2.copysign((q0 * r).sin())
    } else if re0 >= 0.0 {
        0.0
    } else {
        PI
    };
    let q_max = (k * k + v0).sqrt();
    let step = PI / (20.0 * r * q_max);
    let n = (k / step).ceil().max(1.0) as usize;
    for i in 1..=n {
        let kk = k * i as f64 / n as f64;
        let (re, im, q) = z(kk);
        if re.hypot(im) < POLE_GUARD * q {
            return Err(Error::ResonancePole { k: kk });
        }
        let mut d = im.atan2(re) - theta;
        d -= 2.0 * PI * (d / (2.0 * PI)).round();
        theta += d;
    }
    Ok(theta - k * r)
}

fn phase_shift_2d(k: f64, well: &SquareWell) -> Result<f64> {
    let r = well.radius;
    let q = (k * k + well.depth).sqrt();
    let inner = specfun::cylinder(q * r);
    let outer = specfun::cylinder(k * r);
    let num = q * inner.j1 * outer.j0 - k * outer.j1 * inner.j0;
    let den = -q * inner.j1 * outer.n0 + k * outer.n1 * inner.j0;
    if den.abs() < POLE_GUARD * num.abs() {
        return Err(Error::ResonancePole { k });
    }
    Ok((num / den).atan())
}

/// 3D scattering length `a = R (1 - tan(x)/x)`, `x = sqrt(V0) R`.
pub fn scattering_length(well: &SquareWell) -> Result<f64> {
    if well.dimension != Dimension::Three {
        return Err(domain("scattering length is defined here for 3D wells"));
    }
    let x = well.strength();
    let t = x.tan();
    if !t.is_finite() || (x - FRAC_PI_2).abs() < 1e-15 {
        return Err(Error::ResonancePole { k: 0.0 });
    }
    Ok(well.radius * (1.0 - t / x))
}

/// Depth at which the well reproduces the target coupling.
///
/// 3D targets the scattering length `a = -1/k_b'`; 2D targets the bound-state
/// decay constant `k_b`. Only the first branch (at most one bound state) is
/// searched.
pub fn tune_depth(dim: Dimension, radius: f64, target: &Coupling) -> Result<SquareWell> {
    require_positive("radius", radius)?;
    if target.dimension() != dim {
        return Err(domain("target coupling does not match the dimension"));
    }
    let x = match *target {
        Coupling::UnitaryLimit => FRAC_PI_2,
        Coupling::ThreeD { kb_prime } => {
            let a = -1.0 / kb_prime;
            let rho = 1.0 - a / radius;
            // tan(x)/x = rho  <=>  rho x cos x - sin x = 0
            let h = |x: f64| rho * x * x.cos() - x.sin();
            let (lo, hi) = if rho > 1.0 {
                (1e-200, FRAC_PI_2)
            } else if rho < 0.0 {
                (FRAC_PI_2, PI)
            } else {
                return Err(Error::NoSolutionInBracket(format!(
                    "scattering length {a} with radius {radius} needs sqrt(V0) R beyond pi"
                )));
            };
            roots::secant_bisection(h, lo, hi, 0.0)?
        }
        Coupling::TwoD { kb } => {
            let kr = kb * radius;
            let (k0, k1) = specfun::mod_bessel_k_scaled(kr);
            let rho = kr * k1 / k0;
            let h = |x: f64| x * specfun::j1(x) - rho * specfun::j0(x);
            let inner = roots::secant_bisection(h, 0.0, J0_FIRST_ZERO, 0.0)?;
            return SquareWell::new(dim, radius, (inner / radius).powi(2) + kb * kb);
        }
    };
    SquareWell::new(dim, radius, (x / radius).powi(2))
}

/// Decay constant of the deepest bound state of the well.
pub fn bound_state_kappa(well: &SquareWell) -> Result<f64> {
    SquareWell::new(well.dimension, well.radius, well.depth)?;
    let r = well.radius;
    let v0 = well.depth;
    let top = v0.sqrt();
    let q_of = |kappa: f64| (v0 - kappa * kappa).max(0.0).sqrt();
    // Both matching functions are scaled so they stay finite as q -> 0.
    let g: Box<dyn Fn(f64) -> f64> = match well.dimension {
        Dimension::Three => Box::new(move |kappa: f64| {
            let q = q_of(kappa);
            let sinc = if q * r == 0.0 { 1.0 } else { (q * r).sin() / (q * r) };
            (q * r).cos() + kappa * r * sinc
        }),
        Dimension::Two => Box::new(move |kappa: f64| {
            let q = q_of(kappa);
            let (k0, k1) = specfun::mod_bessel_k_scaled(kappa * r);
            q * specfun::j1(q * r) - kappa * k1 / k0 * specfun::j0(q * r)
        }),
    };
    // Scan down from the well bottom; the first sign change is the ground state.
    let n = 400 * (1 + (well.strength() / PI) as usize);
    let lowest = top * 1e-12;
    let mut prev_x = top * (1.0 - 1e-12);
    let mut prev = g(prev_x);
    for i in 1..=n {
        let x = lowest + (top - lowest) * (1.0 - i as f64 / n as f64);
        let v = g(x);
        if v == 0.0 {
            return Ok(x);
        }
        if v.signum() != prev.signum() {
            return roots::secant_bisection(&g, x, prev_x, 0.0);
        }
        prev = v;
        prev_x = x;
    }
    Err(Error::NoBoundState(format!(
        "well with sqrt(V0) R = {} has no bound state",
        well.strength()
    )))
}

/// One radius of a zero-range limit study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub radius: f64,
    pub depth: f64,
    pub delta0: f64,
    /// `-tan(delta0)` of the well.
    pub tan_eta_well: f64,
    /// `tan(eta)` of the point-interaction family.
    pub tan_eta_target: f64,
    /// `|tan_eta_well - tan_eta_target|`, or `|cot eta_well|` when the target
    /// sits at a pole (unitary limit, 2D `k = k_b`).
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub dimension: Dimension,
    pub target: Coupling,
    pub k: f64,
    pub rows: Vec<LimitRow>,
    /// Errors strictly decrease over the last three radii.
    pub monotone_tail: bool,
    /// `d ln(error) / d ln(R)` over the last two radii.
    pub observed_rate: Option<f64>,
}

impl ConvergenceTable {
    pub fn final_error(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.error)
    }
}

/// Largest `k R` the study must reach.
pub const SMALL_KR: f64 = 1e-2;

/// Tunes a well at each radius and compares its phase with the family's.
pub fn zero_range_limit_study(dim: Dimension, target: &Coupling, k: f64, radii: &[f64]) -> Result<ConvergenceTable> {
    require_positive("k", k)?;
    if target.dimension() != dim {
        return Err(domain("target coupling does not match the dimension"));
    }
    if radii.is_empty() {
        return Err(domain("radii must not be empty"));
    }
    for r in radii {
        require_positive("radius", *r)?;
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain("radii must be strictly descending"));
    }
    if k * radii[radii.len() - 1] > SMALL_KR {
        return Err(domain(format!(
            "smallest radius must satisfy k R <= {SMALL_KR}, got {}",
            k * radii[radii.len() - 1]
        )));
    }
    let tan_target = target.phase(k)?.tan();
    let rows = radii
        .par_iter()
        .map(|&radius| {
            let well = tune_depth(dim, radius, target)?;
            let delta0 = phase_shift(k, &well)?;
            let tan_well = -delta0.tan();
            Ok(LimitRow {
                radius,
                depth: well.depth,
                delta0,
                tan_eta_well: tan_well,
                tan_eta_target: tan_target,
                error: if tan_target.is_infinite() {
                    (1.0 / tan_well).abs()
                } else {
                    (tan_well - tan_target).abs()
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &rows[rows.len().saturating_sub(3)..];
    let monotone_tail = tail.windows(2).all(|w| w[1].error < w[0].error);
    let observed_rate = match rows.as_slice() {
        [.., a, b] if a.error > 0.0 && b.error > 0.0 => {
            Some((a.error / b.error).ln() / (a.radius / b.radius).ln())
        }
        _ => None,
    };
    Ok(ConvergenceTable {
        dimension: dim,
        target: *target,
        k,
        rows,
        monotone_tail,
        observed_rate,
    })
}
