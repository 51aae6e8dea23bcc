//! Continuum and bound eigenstates of the point-interaction family.
//!
//! A continuum state is `cos(eta) R(kr) - sin(eta) I(kr)` with the regular and
//! irregular free solutions `R = J0, I = N0` in two dimensions and
//! `R = sin(kr)/r, I = cos(kr)/r` in three. The mixing angle `eta(k)` is fixed
//! by the coupling:
//!
//! - 2D: `tan eta = -(pi/2) / ln(k_b / k)`, with `k_b > 0`;
//! - 3D: `tan eta = -k / k_b'`, with `k_b'` of either sign, and the unitary
//!   limit `k_b' = 0` giving `eta = pi/2`.
//!
//! With `eta = -delta0` the 3D state reads `sin(kr + delta0)/r`, so `delta0` is
//! the conventional s-wave phase shift and `k_b' = -1/a` for scattering
//! length `a`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, require_finite, require_positive, Error, Result};
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn from_int(d: u32) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            _ => Err(domain(format!("dimension must be 2 or 3, got {d}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Exponent of the radial measure `r^(D-1)`.
    pub fn radial_power(self) -> i32 {
        self.as_int() as i32 - 1
    }
}

/// The mixing angle stored as the unit pair `(cos eta, sin eta)`.
///
/// Pole states (`tan eta` infinite) are ordinary values. The pair is kept
/// continuous along a coupling family rather than reduced to a branch, so a
/// family's wave functions vary continuously with `k`; [`Phase::eta`] reports
/// the angle folded into `[-pi/2, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    c: f64,
    s: f64,
}

impl Phase {
    pub const FREE: Phase = Phase { c: 1.0, s: 0.0 };

    /// Normalizes `(c, s)`; fails on a zero or non-finite pair.
    pub fn from_components(c: f64, s: f64) -> Result<Self> {
        let norm = c.hypot(s);
        if !norm.is_finite() || norm == 0.0 {
            return Err(domain(format!("phase components ({c}, {s}) cannot be normalized")));
        }
        Ok(Phase::normalized(c / norm, s / norm))
    }

    fn normalized(c: f64, s: f64) -> Self {
        // Keep +0.0 so that tan() at a pole carries the sign of s.
        let c = if c == 0.0 { 0.0 } else { c };
        Phase { c, s }
    }

    /// Phase with the given tangent; `±inf` gives the pole `(0, ±1)`.
    pub fn from_tan(t: f64) -> Result<Self> {
        if t.is_nan() {
            return Err(domain("tan(eta) is NaN"));
        }
        if t.is_infinite() {
            return Ok(Phase::normalized(0.0, t.signum()));
        }
        Phase::from_components(1.0, t)
    }

    pub fn from_angle(eta: f64) -> Result<Self> {
        require_finite("eta", eta)?;
        let (s, c) = eta.sin_cos();
        Ok(Phase::normalized(c, s))
    }

    pub fn cos(&self) -> f64 {
        self.c
    }

    pub fn sin(&self) -> f64 {
        self.s
    }

    /// `tan eta`, infinite at a pole.
    pub fn tan(&self) -> f64 {
        self.s / self.c
    }

    pub fn is_pole(&self) -> bool {
        self.c == 0.0
    }

    /// The angle folded into `[-pi/2, pi/2]`.
    pub fn eta(&self) -> f64 {
        let raw = self.s.atan2(self.c);
        if raw < -FRAC_PI_2 {
            raw + PI
        } else if raw > FRAC_PI_2 {
            raw - PI
        } else {
            raw
        }
    }
}

/// The parameter labelling one member of the point-interaction family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// 2D, `k_b > 0` (inverse length): the bound-state decay constant.
    TwoD { kb: f64 },
    /// 3D, `k_b'` (inverse length, either sign, nonzero).
    ThreeD { kb_prime: f64 },
    /// 3D with `k_b' = 0`: infinite scattering length.
    UnitaryLimit,
}

impl Coupling {
    pub fn two_d(kb: f64) -> Result<Self> {
        require_positive("k_b", kb)?;
        Ok(Coupling::TwoD { kb })
    }

    /// `k_b' = 0` maps to [`Coupling::UnitaryLimit`].
    pub fn three_d(kb_prime: f64) -> Result<Self> {
        require_finite("k_b'", kb_prime)?;
        if kb_prime == 0.0 {
            Ok(Coupling::UnitaryLimit)
        } else {
            Ok(Coupling::ThreeD { kb_prime })
        }
    }

    pub fn dimension(&self) -> Dimension {
        match self {
            Coupling::TwoD { .. } => Dimension::Two,
            Coupling::ThreeD { .. } | Coupling::UnitaryLimit => Dimension::Three,
        }
    }

    /// The family's phase at wavenumber `k`.
    pub fn phase(&self, k: f64) -> Result<Phase> {
        match *self {
            Coupling::TwoD { .. } => phase_2d(k, self),
            Coupling::ThreeD { .. } | Coupling::UnitaryLimit => phase_3d(k, self),
        }
    }

    /// `tan eta(k)` straight from the family formula, without going through
    /// the stored unit pair. Infinite at the 2D pole and in the unitary limit.
    pub fn tan_eta(&self, k: f64) -> Result<f64> {
        require_positive("k", k)?;
        Ok(match *self {
            Coupling::TwoD { kb } => FRAC_PI_2 / (k / kb).ln(),
            Coupling::ThreeD { kb_prime } => -k / kb_prime,
            Coupling::UnitaryLimit => f64::INFINITY,
        })
    }

    pub fn state(&self, k: f64) -> Result<ScatteringState> {
        ScatteringState::new(self.dimension(), k, self.phase(k)?)
    }

    /// The numeric coupling value: `k_b`, `k_b'`, or 0 for the unitary limit.
    pub fn value(&self) -> f64 {
        match *self {
            Coupling::TwoD { kb } => kb,
            Coupling::ThreeD { kb_prime } => kb_prime,
            Coupling::UnitaryLimit => 0.0,
        }
    }
}

/// `tan eta = -(pi/2) / ln(k_b/k) = (pi/2) / ln(k/k_b)`.
///
/// The returned pair is `-(ln(k/k_b), pi/2)` normalized: continuous in `k`,
/// in the fourth quadrant for `k < k_b`, and exactly `(0, -1)` at `k = k_b`.
pub fn phase_2d(k: f64, coupling: &Coupling) -> Result<Phase> {
    require_positive("k", k)?;
    let kb = match *coupling {
        Coupling::TwoD { kb } => kb,
        _ => return Err(domain("phase_2d needs a two-dimensional coupling")),
    };
    require_positive("k_b", kb)?;
    let log_ratio = (k / kb).ln();
    Phase::from_components(-log_ratio, -FRAC_PI_2)
}

/// `tan eta = -k / k_b'`; the unitary limit gives `eta = pi/2`.
pub fn phase_3d(k: f64, coupling: &Coupling) -> Result<Phase> {
    require_positive("k", k)?;
    match *coupling {
        Coupling::UnitaryLimit => Ok(Phase::normalized(0.0, 1.0)),
        Coupling::ThreeD { kb_prime } => {
            require_finite("k_b'", kb_prime)?;
            if kb_prime == 0.0 {
                return Ok(Phase::normalized(0.0, 1.0));
            }
            // sign(k_b') (k_b', -k) keeps eta in (-pi/2, pi/2).
            Phase::from_components(kb_prime.abs(), -kb_prime.signum() * k)
        }
        Coupling::TwoD { .. } => Err(domain("phase_3d needs a three-dimensional coupling")),
    }
}

/// A single continuum eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringState {
    pub dimension: Dimension,
    pub k: f64,
    pub phase: Phase,
}

impl ScatteringState {
    pub fn new(dimension: Dimension, k: f64, phase: Phase) -> Result<Self> {
        require_positive("k", k)?;
        Ok(ScatteringState {
            dimension,
            k,
            phase,
        })
    }

    /// Radial wave function at `r > 0`.
    pub fn psi(&self, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        Ok(self.psi_unchecked(r))
    }

    pub(crate) fn psi_unchecked(&self, r: f64) -> f64 {
        let (c, s) = (self.phase.cos(), self.phase.sin());
        let x = self.k * r;
        match self.dimension {
            Dimension::Two => {
                let v = specfun::cylinder(x);
                c * v.j0 - s * v.n0
            }
            Dimension::Three => {
                let (sn, cs) = x.sin_cos();
                (c * sn - s * cs) / r
            }
        }
    }
}

/// Free-function form of [`ScatteringState::psi`].
pub fn psi(state: &ScatteringState, r: f64) -> Result<f64> {
    state.psi(r)
}

/// The unique bound state of a coupling, when it exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub dimension: Dimension,
    pub kappa: f64,
    pub energy: f64,
}

impl BoundState {
    pub fn new(dimension: Dimension, kappa: f64) -> Result<Self> {
        require_positive("kappa", kappa)?;
        Ok(BoundState {
            dimension,
            kappa,
            energy: -kappa * kappa,
        })
    }

    /// Unnormalized profile: `K0(kappa r)` in 2D, `exp(-kappa r)/r` in 3D.
    /// Values past the K0 underflow threshold are returned as 0.
    pub fn psi(&self, r: f64) -> Result<f64> {
        require_positive("r", r)?;
        let x = self.kappa * r;
        match self.dimension {
            Dimension::Two => match specfun::mod_bessel_k0(x) {
                Ok(v) => Ok(v),
                Err(Error::UnderflowToZero { .. }) => Ok(0.0),
                Err(e) => Err(e),
            },
            Dimension::Three => Ok((-x).exp() / r),
        }
    }
}

/// Bound state of the family: `kappa = k_b` in 2D (always), `kappa = -k_b'`
/// in 3D (only for `k_b' < 0`).
///
/// The 3D sign follows from orthogonality: the boundary term at the origin
/// between `exp(-kappa r)/r` and a continuum state vanishes iff
/// `k cot(eta) = kappa`, and the family has `k cot(eta) = -k_b'`.
pub fn bound_state(coupling: &Coupling) -> Result<BoundState> {
    match *coupling {
        Coupling::TwoD { kb } => BoundState::new(Dimension::Two, kb),
        Coupling::ThreeD { kb_prime } if kb_prime < 0.0 => {
            BoundState::new(Dimension::Three, -kb_prime)
        }
        Coupling::ThreeD { kb_prime } => Err(Error::NoBoundState(format!(
            "k_b' = {kb_prime} > 0 has negative scattering length"
        ))),
        Coupling::UnitaryLimit => Err(Error::NoBoundState(
            "unitary limit: the bound state sits at the zero-energy threshold".into(),
        )),
    }
}

/// Free-function form of [`BoundState::psi`].
pub fn bound_psi(bs: &BoundState, r: f64) -> Result<f64> {
    bs.psi(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_4};

    #[test]
    fn phase_2d_pole_and_substitutions() {
        let c = Coupling::two_d(1.3).unwrap();
        let p = phase_2d(1.3, &c).unwrap();
        assert_eq!((p.cos(), p.sin()), (0.0, -1.0));
        assert_eq!(p.eta(), -FRAC_PI_2);
        assert_eq!(p.tan(), f64::NEG_INFINITY);

        let p = phase_2d(1.3 * E, &c).unwrap();
        assert!((p.tan() - FRAC_PI_2).abs() < 1e-14);

        let p = phase_2d(1.3 * (-FRAC_PI_2).exp(), &c).unwrap();
        assert!((p.tan() + 1.0).abs() < 1e-14);
        assert!((p.eta() + FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn phase_2d_pole_safety() {
        let c = Coupling::two_d(1.0).unwrap();
        for k in [1.0 - 1e-15, 1.0 + 1e-15, 1.0 + f64::EPSILON] {
            let p = phase_2d(k, &c).unwrap();
            assert!(p.cos().is_finite() && p.sin().is_finite());
            assert!((p.cos().powi(2) + p.sin().powi(2) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn phase_3d_cases() {
        let p = phase_3d(2.0, &Coupling::three_d(2.0).unwrap()).unwrap();
        assert!((p.tan() + 1.0).abs() < 1e-15);
        assert!((p.eta() + FRAC_PI_4).abs() < 1e-15);

        let p = phase_3d(2.0, &Coupling::UnitaryLimit).unwrap();
        assert_eq!(p.eta(), FRAC_PI_2);
        let s = ScatteringState::new(Dimension::Three, 2.0, p).unwrap();
        let r = 0.37;
        assert!((s.psi(r).unwrap() + (2.0 * r).cos() / r).abs() < 1e-15);

        let p = phase_3d(2.0, &Coupling::three_d(1e12).unwrap()).unwrap();
        assert!(p.eta().abs() < 1e-11);
        let p = phase_3d(2.0, &Coupling::three_d(-1e12).unwrap()).unwrap();
        assert!(p.eta().abs() < 1e-11);
    }

    #[test]
    fn dimension_mismatch_is_domain_error() {
        assert!(phase_2d(1.0, &Coupling::UnitaryLimit).is_err());
        assert!(phase_3d(1.0, &Coupling::two_d(1.0).unwrap()).is_err());
        assert!(Coupling::two_d(0.0).is_err());
        assert!(Coupling::two_d(-1.0).is_err());
        assert_eq!(Coupling::three_d(0.0).unwrap(), Coupling::UnitaryLimit);
    }

    #[test]
    fn psi_limits_and_nodes() {
        let free3 = ScatteringState::new(Dimension::Three, 1.7, Phase::FREE).unwrap();
        assert!((free3.psi(1e-9).unwrap() - 1.7).abs() < 1e-9);
        let free2 = ScatteringState::new(Dimension::Two, 1.7, Phase::FREE).unwrap();
        assert!((free2.psi(1e-9).unwrap() - 1.0).abs() < 1e-12);

        let eta = 0.4;
        let s = ScatteringState::new(Dimension::Three, 2.5, Phase::from_angle(eta).unwrap()).unwrap();
        for n in 0..5 {
            let r = (eta + n as f64 * PI) / 2.5;
            assert!(s.psi(r).unwrap().abs() < 1e-14, "node {n}");
        }
        assert!(s.psi(0.0).is_err());
        assert!(s.psi(-1.0).is_err());
    }

    #[test]
    fn bound_states() {
        let b = bound_state(&Coupling::two_d(1.0).unwrap()).unwrap();
        assert_eq!(b.kappa, 1.0);
        assert_eq!(b.energy, -1.0);
        assert!((b.psi(1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-14);

        let b = bound_state(&Coupling::three_d(-2.0).unwrap()).unwrap();
        assert_eq!(b.kappa, 2.0);
        assert_eq!(b.energy, -4.0);
        assert!((b.psi(1.0).unwrap() - 0.135_335_283_236_612_7).abs() < 1e-15);

        assert!(matches!(
            bound_state(&Coupling::three_d(1.0).unwrap()),
            Err(Error::NoBoundState(_))
        ));
        assert!(matches!(
            bound_state(&Coupling::UnitaryLimit),
            Err(Error::NoBoundState(_))
        ));
    }

    #[test]
    fn bound_psi_2d_small_r_diverges_logarithmically() {
        let b = BoundState::new(Dimension::Two, 1.0).unwrap();
        let r: f64 = 1e-7;
        let lead = -(0.5 * r).ln() - specfun::EULER_GAMMA;
        assert!((b.psi(r).unwrap() - lead).abs() < 1e-10);
        assert_eq!(b.psi(1e4).unwrap(), 0.0);
    }

    #[test]
    fn direct_tangent_matches_pair() {
        for c in [Coupling::two_d(0.4).unwrap(), Coupling::three_d(-1.5).unwrap(), Coupling::three_d(2.0).unwrap()] {
            for k in [0.1, 0.9, 3.0] {
                let (t, p) = (c.tan_eta(k).unwrap(), c.phase(k).unwrap().tan());
                assert!((t - p).abs() <= 1e-14 * t.abs());
            }
        }
        assert_eq!(Coupling::two_d(1.0).unwrap().tan_eta(1.0).unwrap().abs(), f64::INFINITY);
        assert_eq!(Coupling::UnitaryLimit.tan_eta(2.0).unwrap(), f64::INFINITY);
        assert!(Coupling::UnitaryLimit.tan_eta(0.0).is_err());
    }
}
