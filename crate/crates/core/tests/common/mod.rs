//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use point_interaction::specfun::CylKind;
use point_interaction::{Dimension, Phase};

const RM: RoundingMode = RoundingMode::ToEven;
const GAMMA_DIGITS: &str = "0.5772156649015328606065120900824024310421593359399235988057672348848677267776646709369470632917467495";

/// Precision (bits) that absorbs the cancellation of the power series at `x`.
fn bits_for(x: f64) -> usize {
    256 + (x * std::f64::consts::LOG2_E * 1.1) as usize
}

fn to_f64(v: &BigFloat) -> f64 {
    v.to_string().parse().expect("BigFloat renders as a decimal number")
}

/// `J0, J1, Y0, Y1` at `x > 0` summed from their power series in
/// extended precision.
pub struct SeriesOracle {
    cc: Consts,
}

impl SeriesOracle {
    pub fn new() -> Self {
        SeriesOracle {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn eval(&mut self, kind: CylKind, x: f64) -> f64 {
        let [j0, j1, y0, y1] = self.all(x);
        match (kind.family, kind.order) {
            (point_interaction::CylFamily::BesselJ, point_interaction::CylOrder::Zero) => j0,
            (point_interaction::CylFamily::BesselJ, point_interaction::CylOrder::One) => j1,
            (point_interaction::CylFamily::NeumannN, point_interaction::CylOrder::Zero) => y0,
            (point_interaction::CylFamily::NeumannN, point_interaction::CylOrder::One) => y1,
        }
    }

    /// `[J0, J1, Y0, Y1]`.
    pub fn all(&mut self, x: f64) -> [f64; 4] {
        let p = bits_for(x);
        let cc = &mut self.cc;
        let one = BigFloat::from_f64(1.0, p);
        let two = BigFloat::from_f64(2.0, p);
        let xb = BigFloat::from_f64(x, p);
        let half_x = xb.div(&two, p, RM);
        let z = half_x.mul(&half_x, p, RM);
        let gamma = BigFloat::parse(GAMMA_DIGITS, Radix::Dec, p, RM, cc);
        let pi = cc.pi(p, RM);

        // a_k = (-z)^k / (k!)^2, b_k = (-z)^k / (k! (k+1)!)
        let mut a = one.clone();
        let mut b = one.clone();
        let mut h = BigFloat::from_f64(0.0, p); // H_k
        let mut s_j0 = a.clone();
        let mut s_j1 = b.clone();
        let mut s_y0 = BigFloat::from_f64(0.0, p);
        // k = 0 term of the Y1 sum: (psi(1) + psi(2)) b_0 = (1 - 2 gamma)
        let mut s_y1 = one.sub(&gamma.mul(&two, p, RM), p, RM);
        let terms = (3.0 * x) as usize + 120;
        for k in 1..terms {
            let kb = BigFloat::from_f64(k as f64, p);
            let k1 = BigFloat::from_f64((k + 1) as f64, p);
            a = a.mul(&z, p, RM).div(&kb.mul(&kb, p, RM), p, RM).neg();
            b = b.mul(&z, p, RM).div(&kb.mul(&k1, p, RM), p, RM).neg();
            h = h.add(&one.div(&kb, p, RM), p, RM);
            let h_next = h.add(&one.div(&k1, p, RM), p, RM);
            s_j0 = s_j0.add(&a, p, RM);
            s_j1 = s_j1.add(&b, p, RM);
            // sum_{k>=1} (-1)^(k+1) H_k z^k/(k!)^2 = -sum H_k a_k
            s_y0 = s_y0.sub(&h.mul(&a, p, RM), p, RM);
            let psi_sum = h.add(&h_next, p, RM).sub(&gamma.mul(&two, p, RM), p, RM);
            s_y1 = s_y1.add(&psi_sum.mul(&b, p, RM), p, RM);
        }
        let j0 = s_j0;
        let j1 = half_x.mul(&s_j1, p, RM);
        let log_term = half_x.ln(p, RM, cc).add(&gamma, p, RM);
        let two_over_pi = two.div(&pi, p, RM);
        let y0 = two_over_pi.mul(&log_term.mul(&j0, p, RM).add(&s_y0, p, RM), p, RM);
        // Y1 = -2/(pi x) + (2/pi) ln(x/2) J1 - (1/pi)(x/2) sum (psi(k+1)+psi(k+2)) b_k
        let ln_half = half_x.ln(p, RM, cc);
        let y1 = two_over_pi
            .div(&xb, p, RM)
            .neg()
            .add(&two_over_pi.mul(&ln_half, p, RM).mul(&j1, p, RM), p, RM)
            .sub(&half_x.mul(&s_y1, p, RM).div(&pi, p, RM), p, RM);
        [to_f64(&j0), to_f64(&j1), to_f64(&y0), to_f64(&y1)]
    }
}

/// `exp(x) K0(x)` and `exp(x) K1(x)` from `int_0^inf exp(-x (cosh t - 1)) {1, cosh t} dt`
/// by the trapezoid rule, which converges geometrically for this integrand.
pub fn k_scaled_oracle(x: f64) -> (f64, f64) {
    let h = 1.0 / 64.0;
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    let mut j = 1;
    loop {
        let t = j as f64 * h;
        let c = t.cosh();
        let e = (-x * (c - 1.0)).exp();
        s0 += e;
        s1 += e * c;
        if e * c < 1e-20 {
            break;
        }
        j += 1;
    }
    (s0 * h, s1 * h)
}

/// Radial wave function of a continuum state, evaluated directly.
pub fn psi(dim: Dimension, k: f64, phase: &Phase, r: f64) -> f64 {
    point_interaction::ScatteringState::new(dim, k, *phase)
        .unwrap()
        .psi(r)
        .unwrap()
}

/// Brute-force regularized overlap: `int_0^inf exp(-lambda r) psi_a psi_b r^(D-1) dr`
/// on fixed Gauss panels for a geometric damping schedule, extrapolated to
/// `lambda = 0` by Neville's algorithm on the damping values.
pub fn damped_overlap(dim: Dimension, k: f64, pa: &Phase, l: f64, pb: &Phase) -> f64 {
    let gap = (k - l).abs();
    let lambdas: Vec<f64> = (0..9).map(|j| 0.25 * gap.min(k + l) * 0.5f64.powi(j)).collect();
    let lam_min = *lambdas.last().unwrap();
    let r_max = 45.0 / lam_min;
    let kmax = k.max(l);
    let (nodes, weights) = gauss(16);
    // Geometric panels resolve the 2D logarithmic endpoint, then panels of
    // a quarter wavelength of the faster oscillation.
    let first = 0.25 / kmax;
    let mut breaks = vec![0.0];
    let mut r = first * 1e-14;
    while r < first {
        breaks.push(r);
        r *= 4.0;
    }
    let width = std::f64::consts::PI / (2.0 * kmax);
    let mut r = first;
    while r < r_max {
        breaks.push(r);
        r += width;
    }
    breaks.push(r_max);
    let mut sums = vec![0.0; lambdas.len()];
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wt) in nodes.iter().zip(&weights) {
            let r = mid + half * x;
            let f = psi(dim, k, pa, r) * psi(dim, l, pb, r) * r.powi(dim_power(dim)) * wt * half;
            for (s, lam) in sums.iter_mut().zip(&lambdas) {
                *s += f * (-lam * r).exp();
            }
        }
    }
    neville_at_zero(&lambdas, &sums)
}

fn dim_power(dim: Dimension) -> i32 {
    match dim {
        Dimension::Two => 1,
        Dimension::Three => 2,
    }
}

pub fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Gauss–Legendre nodes and weights by Newton iteration on `P_n`.
pub fn gauss(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// `-f'' - ((D-1)/r) f'` by fourth-order central differences with step `h`.
pub fn radial_operator<F: Fn(f64) -> f64>(f: F, dim_minus_one: f64, r: f64, h: f64) -> f64 {
    let (fm2, fm1, f0, fp1, fp2) = (f(r - 2.0 * h), f(r - h), f(r), f(r + h), f(r + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    -d2 - dim_minus_one / r * d1
}

/// Log-spaced grid including both ends.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

pub struct CliRun {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

/// Runs the built binary with `args`.
pub fn run_cli(args: &[&str]) -> CliRun {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_point-interaction"))
        .args(args)
        .output()
        .expect("binary runs");
    CliRun {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// One invocation per command from the documented interface.
pub const COMMAND_SAMPLES: &[&[&str]] = &[
    &["eta-table", "--dim", "2", "--kb", "1", "--k-min", "0.1", "--k-max", "10", "--n", "25", "--log"],
    &["eta-table", "--dim", "3", "--kbprime", "1", "--k-min", "1", "--k-max", "2", "--n", "2", "--format", "json"],
    &["residual", "--dim", "2", "--k", "2", "--l", "1", "--tan-k", "1", "--tan-l", "1"],
    &["overlap", "--dim", "3", "--kbprime=-0.5", "--k", "0.7", "--l", "1.9"],
    &["overlap", "--dim", "2", "--k", "2", "--l", "1", "--tan-k", "1", "--tan-l", "1", "--format", "json"],
    &["solve-phase", "--dim", "2", "--kb", "1", "--k", "2.718281828459045", "--l", "0.5,1,7.38905609893065"],
    &["infer", "--dim", "3", "--sample", "2:-2,4:-4"],
    &["bound-state", "--dim", "2", "--kb", "1", "--r-min", "0.01", "--r-max", "5", "--n", "20", "--log"],
    &["delta-norm", "--dim", "3", "--kbprime", "1", "--k", "0.5,1"],
    &["well-limit", "--dim", "3", "--kbprime", "1", "--k", "0.5", "--radii", "0.2,0.1,0.05,0.025,0.0125"],
];

/// One invocation per documented exit code, with the code it must produce.
pub const EXIT_CASES: &[(&[&str], i32)] = &[
    (&["eta-table", "--dim", "3", "--kbprime", "1", "--k-min", "1", "--k-max", "2", "--n", "2"], 0),
    (&["infer", "--dim", "2", "--samples", "/nonexistent/samples.txt"], 1),
    (&["eta-table", "--dim", "3", "--kbprime", "1", "--k-min", "1", "--k-max", "2", "--n", "1"], 2),
    (&["eta-table", "--dim", "4", "--kb", "1", "--k-min", "1", "--k-max", "2"], 2),
    (&["frobnicate"], 2),
    (&["overlap", "--dim", "3", "--kbprime", "1", "--k", "1", "--l", "1"], 3),
    (&["overlap", "--dim", "3", "--kbprime", "1", "--k", "1", "--l", "1.5", "--damping", "0.4,0.0001"], 4),
    (&["bound-state", "--dim", "3", "--kbprime", "1"], 5),
    (&["infer", "--dim", "3", "--sample", "1:-1,2:-1"], 6),
];
