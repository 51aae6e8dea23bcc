//! Cylinder functions of order 0 and 1 (J, N) and the modified Bessel
//! functions K0, K1 for real arguments.
//!
//! J and N are evaluated in three regions:
//!
//! - `x <= SERIES_MAX`: ascending power series. The Neumann series keeps the
//!   `ln(x/2)` term separate from the regular remainder; [`small_arg`] exposes
//!   the leading coefficients so lower-limit expansions elsewhere use exactly
//!   the same numbers.
//! - `SERIES_MAX < x < ASYMPTOTIC_MIN`: Miller backward recurrence for J_n,
//!   normalized by `J0 + 2 sum J_2k = 1`, with the Neumann series
//!   `N0 = (2/pi)(ln(x/2) + gamma) J0 - (4/pi) sum (-1)^k J_2k / k` and its
//!   order-one companion.
//! - `x >= ASYMPTOTIC_MIN`: Hankel asymptotic expansion, truncated at the
//!   smallest term.
//!
//! Adjacent regions agree to better than 1e-13 (absolute, in units of the
//! modulus `sqrt(J^2 + N^2)`) on both sides of each switchover.

use std::f64::consts::{FRAC_2_PI, LN_2, PI};

use crate::error::{domain, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper end of the power-series region.
pub const SERIES_MAX: f64 = 4.0;
/// Lower end of the Hankel asymptotic region.
pub const ASYMPTOTIC_MIN: f64 = 25.0;
/// Largest argument accepted by [`cyl_bessel`].
pub const MAX_ARG: f64 = 1.0e8;
/// Smallest argument accepted for the Neumann kinds (N1 ~ -2/(pi x) overflows below).
pub const NEUMANN_MIN_ARG: f64 = 1.0e-300;
/// Largest argument for which `K0`, `K1` are returned as normal floats.
pub const K_MAX_ARG: f64 = 700.0;

/// Switchover between the K series and the Steed continued fraction.
const K_SERIES_MAX: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CylFamily {
    BesselJ,
    NeumannN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CylOrder {
    Zero,
    One,
}

/// Which cylinder function to evaluate. Only orders 0 and 1 exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CylKind {
    pub family: CylFamily,
    pub order: CylOrder,
}

impl CylKind {
    pub const J0: CylKind = CylKind::new(CylFamily::BesselJ, CylOrder::Zero);
    pub const J1: CylKind = CylKind::new(CylFamily::BesselJ, CylOrder::One);
    pub const N0: CylKind = CylKind::new(CylFamily::NeumannN, CylOrder::Zero);
    pub const N1: CylKind = CylKind::new(CylFamily::NeumannN, CylOrder::One);

    pub const fn new(family: CylFamily, order: CylOrder) -> Self {
        CylKind { family, order }
    }
}

/// The four cylinder functions at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylValues {
    pub j0: f64,
    pub j1: f64,
    pub n0: f64,
    pub n1: f64,
}

impl CylValues {
    pub fn get(&self, kind: CylKind) -> f64 {
        match (kind.family, kind.order) {
            (CylFamily::BesselJ, CylOrder::Zero) => self.j0,
            (CylFamily::BesselJ, CylOrder::One) => self.j1,
            (CylFamily::NeumannN, CylOrder::Zero) => self.n0,
            (CylFamily::NeumannN, CylOrder::One) => self.n1,
        }
    }

    /// `sqrt(J^2 + N^2)` for the given order; the natural error scale near zeros.
    pub fn modulus(&self, order: CylOrder) -> f64 {
        match order {
            CylOrder::Zero => self.j0.hypot(self.n0),
            CylOrder::One => self.j1.hypot(self.n1),
        }
    }
}

/// Leading small-argument forms.
///
/// `N0(x) = N0_LOG_COEFF * ln(x) + N0_CONST + O(x^2 ln x)`,
/// `x N1(x) = N1_POLE + O(x^2 ln x)`, `J0(x) = 1 + O(x^2)`, `J1(x)/x = 1/2 + O(x^2)`.
pub mod small_arg {
    use super::{EULER_GAMMA, FRAC_2_PI, LN_2};

    pub const N0_LOG_COEFF: f64 = FRAC_2_PI;
    pub const N0_CONST: f64 = FRAC_2_PI * (EULER_GAMMA - LN_2);
    pub const N1_POLE: f64 = -FRAC_2_PI;
    pub const J1_SLOPE: f64 = 0.5;

    pub fn n0_leading(x: f64) -> f64 {
        N0_LOG_COEFF * x.ln() + N0_CONST
    }

    pub fn n1_leading(x: f64) -> f64 {
        N1_POLE / x
    }

    /// `K0(x) = -ln(x/2) - gamma + O(x^2 ln x)`.
    pub fn k0_leading(x: f64) -> f64 {
        -(0.5 * x).ln() - EULER_GAMMA
    }
}

/// Evaluates one cylinder function with domain checks.
pub fn cyl_bessel(kind: CylKind, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("cylinder function argument is NaN"));
    }
    match kind.family {
        CylFamily::BesselJ if x < 0.0 => {
            return Err(domain(format!("Bessel J requires x >= 0, got {x}")))
        }
        CylFamily::NeumannN if x <= 0.0 => {
            return Err(domain(format!("Neumann N requires x > 0, got {x}")))
        }
        CylFamily::NeumannN if x < NEUMANN_MIN_ARG => {
            return Err(Error::OverflowGuard {
                function: "N",
                x,
            })
        }
        _ => {}
    }
    if x > MAX_ARG {
        return Err(Error::OverflowGuard {
            function: "cylinder function",
            x,
        });
    }
    if kind.family == CylFamily::BesselJ && x == 0.0 {
        return Ok(match kind.order {
            CylOrder::Zero => 1.0,
            CylOrder::One => 0.0,
        });
    }
    Ok(cylinder(x).get(kind))
}

/// All four cylinder functions at `x > 0`, without range checks.
pub fn cylinder(x: f64) -> CylValues {
    if x <= SERIES_MAX {
        series(x)
    } else if x < ASYMPTOTIC_MIN {
        recurrence(x)
    } else {
        hankel(x)
    }
}

pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        1.0
    } else {
        cylinder(x).j0
    }
}

pub fn j1(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * cylinder(x.abs()).j1
    }
}

pub fn n0(x: f64) -> f64 {
    if x > 0.0 {
        cylinder(x).n0
    } else {
        f64::NAN
    }
}

pub fn n1(x: f64) -> f64 {
    if x > 0.0 {
        cylinder(x).n1
    } else {
        f64::NAN
    }
}

/// Power series region. Harmonic numbers enter through `psi(k+1) = -gamma + H_k`.
fn series(x: f64) -> CylValues {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // J0 and the regular part of N0 share the (-q)^k / (k!)^2 terms.
    let mut t0 = 1.0;
    let mut j0 = 1.0;
    let mut j0_scale = 1.0;
    let mut n0_regular = 0.0;
    // J1 and the regular part of N1 share (-q)^k / (k! (k+1)!).
    let mut t1 = 1.0;
    let mut j1_sum = 1.0;
    let mut n1_digamma = 1.0 - 2.0 * EULER_GAMMA; // psi(1) + psi(2)
    let mut harmonic = 0.0;
    let mut k = 0.0_f64;
    loop {
        k += 1.0;
        harmonic += 1.0 / k;
        t0 *= -q / (k * k);
        t1 *= -q / (k * (k + 1.0));
        j0 += t0;
        j0_scale += t0.abs();
        n0_regular -= harmonic * t0;
        j1_sum += t1;
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        n1_digamma += (2.0 * harmonic + 1.0 / (k + 1.0) - 2.0 * EULER_GAMMA) * t1;
        if t0.abs() < 1e-18 * j0_scale && k > q {
            break;
        }
    }
    let j1 = 0.5 * x * j1_sum;
    let n0 = FRAC_2_PI * ((log_half + EULER_GAMMA) * j0 + n0_regular);
    let n1 = -FRAC_2_PI / x + FRAC_2_PI * log_half * j1 - 0.5 * x / PI * n1_digamma;
    CylValues { j0, j1, n0, n1 }
}

/// Miller backward recurrence region.
fn recurrence(x: f64) -> CylValues {
    // J_n(x) has decayed below 1e-17 relative well before n = x + 45 for x < 25.
    let start = 2 * ((x + 45.0) / 2.0).ceil() as usize;
    let two_over_x = 2.0 / x;

    let mut next = 0.0; // J_{m+1}
    let mut cur = 1.0e-30; // J_m
    let mut norm = 0.0;
    let mut s0 = 0.0; // sum (-1)^k J_2k / k
    let mut s1 = 0.0; // sum (-1)^k J_{2k+1} (2k+1) / (k (k+1))
    let mut j1 = 0.0;
    let mut m = start;
    loop {
        accumulate(m, cur, &mut norm, &mut s0, &mut s1, &mut j1);
        if m == 0 {
            break;
        }
        let prev = m as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        m -= 1;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            s0 *= 1e-250;
            s1 *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let j0 = cur / norm;
    let j1 = j1 / norm;
    let s0 = s0 / norm;
    let s1 = s1 / norm;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let n0 = FRAC_2_PI * log_term * j0 - 2.0 * FRAC_2_PI * s0;
    let n1 = -FRAC_2_PI / x * j0 + FRAC_2_PI * (log_term - 1.0) * j1 - FRAC_2_PI * s1;
    CylValues { j0, j1, n0, n1 }
}

fn accumulate(m: usize, value: f64, norm: &mut f64, s0: &mut f64, s1: &mut f64, j1: &mut f64) {
    match m {
        0 => *norm += value,
        1 => *j1 = value,
        _ if m.is_multiple_of(2) => {
            let k = (m / 2) as f64;
            *norm += 2.0 * value;
            let sign = if (m / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
            *s0 += sign * value / k;
        }
        _ => {
            let kk = (m - 1) / 2;
            let k = kk as f64;
            let sign = if kk.is_multiple_of(2) { 1.0 } else { -1.0 };
            *s1 += sign * value * (2.0 * k + 1.0) / (k * (k + 1.0));
        }
    }
}

/// Hankel's P and Q series for order `nu`, truncated at the smallest term.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..200u32 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (kf * 8.0 * x);
        if a.abs() >= last || a.abs() < 1e-18 {
            break;
        }
        last = a.abs();
        // Q collects odd k with sign (-1)^((k-1)/2), P even k with (-1)^(k/2).
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * a;
        } else {
            p += sign * a;
        }
    }
    (p, q)
}

fn hankel(x: f64) -> CylValues {
    let amp = (FRAC_2_PI / x).sqrt();
    let (s, c) = x.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // chi0 = x - pi/4, chi1 = x - 3pi/4
    let (cos0, sin0) = (r * (c + s), r * (s - c));
    let (cos1, sin1) = (r * (s - c), -r * (s + c));
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    CylValues {
        j0: amp * (p0 * cos0 - q0 * sin0),
        n0: amp * (p0 * sin0 + q0 * cos0),
        j1: amp * (p1 * cos1 - q1 * sin1),
        n1: amp * (p1 * sin1 + q1 * cos1),
    }
}

/// Exponentially scaled `(e^x K0(x), e^x K1(x))` for `x > 0`.
pub fn mod_bessel_k_scaled(x: f64) -> (f64, f64) {
    if x <= K_SERIES_MAX {
        let (k0, k1) = k_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k_steed(x)
    }
}

fn k_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();
    let mut t0 = 1.0;
    let mut i0 = 1.0;
    let mut k0_regular = 0.0;
    let mut t1 = 1.0;
    let mut i1_sum = 1.0;
    let mut k1_digamma = 1.0 - 2.0 * EULER_GAMMA;
    let mut harmonic = 0.0;
    let mut k = 0.0_f64;
    loop {
        k += 1.0;
        harmonic += 1.0 / k;
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        i0 += t0;
        k0_regular += harmonic * t0;
        i1_sum += t1;
        k1_digamma += (2.0 * harmonic + 1.0 / (k + 1.0) - 2.0 * EULER_GAMMA) * t1;
        if t0 < 1e-18 * i0 {
            break;
        }
    }
    let i1 = 0.5 * x * i1_sum;
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_regular;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_digamma;
    (k0, k1)
}

/// Steed's continued fraction (Temme's CF2) for order zero, x > 2.
fn k_steed(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn check_k_arg(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(domain(format!("modified Bessel K requires x > 0, got {x}")));
    }
    if x > K_MAX_ARG {
        return Err(Error::UnderflowToZero { x });
    }
    Ok(())
}

/// `K0(x)`. Arguments beyond [`K_MAX_ARG`] report [`Error::UnderflowToZero`];
/// callers that can tolerate it treat the value as 0.
pub fn mod_bessel_k0(x: f64) -> Result<f64> {
    check_k_arg(x)?;
    if x <= K_SERIES_MAX {
        Ok(k_series(x).0)
    } else {
        Ok(k_steed(x).0 * (-x).exp())
    }
}

/// `K1(x)`, same conventions as [`mod_bessel_k0`].
pub fn mod_bessel_k1(x: f64) -> Result<f64> {
    check_k_arg(x)?;
    if x <= K_SERIES_MAX {
        Ok(k_series(x).1)
    } else {
        Ok(k_steed(x).1 * (-x).exp())
    }
}
