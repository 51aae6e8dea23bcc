//! Gauss–Legendre quadrature, adaptive panel integration and polynomial
//! extrapolation to zero of a control parameter.

use std::sync::OnceLock;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (p, p_prev) = legendre(n, x);
            dp = if p.is_finite() { nf * (x * p - p_prev) / (x * x - 1.0) } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Nodes mapped onto [a, b] with their weights.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

fn rule(n: usize) -> &'static GaussLegendre {
    static G10: OnceLock<GaussLegendre> = OnceLock::new();
    static G21: OnceLock<GaussLegendre> = OnceLock::new();
    static G32: OnceLock<GaussLegendre> = OnceLock::new();
    match n {
        10 => G10.get_or_init(|| GaussLegendre::new(10)),
        21 => G21.get_or_init(|| GaussLegendre::new(21)),
        _ => G32.get_or_init(|| GaussLegendre::new(32)),
    }
}

/// Shared 32-point rule.
pub fn gauss32() -> &'static GaussLegendre {
    rule(32)
}

/// Adaptive bisection: a panel is accepted when the 10- and 21-point rules
/// agree within `max(abs_tol * width / total_width, rel_tol * |estimate|)`.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let coarse = rule(10);
    let fine = rule(21);
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, 0u32)];
    let mut sum = 0.0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let g = coarse.integrate(&mut f, lo, hi);
        let h = fine.integrate(&mut f, lo, hi);
        let allowed = (abs_tol * (hi - lo).abs() / total).max(rel_tol * h.abs());
        if (g - h).abs() <= allowed || depth >= 48 {
            sum += h;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    sum
}

/// Adaptive integration over consecutive panels `[p_i, p_{i+1}]`.
pub fn adaptive_panels<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64) -> f64 {
    let n = breaks.len().saturating_sub(1).max(1) as f64;
    breaks
        .windows(2)
        .map(|w| adaptive(&mut f, w[0], w[1], abs_tol / n, rel_tol))
        .sum()
}

/// Neville's algorithm: value at 0 of the interpolating polynomial through
/// `(xs[i], ys[i])`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    p[0]
}

/// Extrapolation to zero with all points and with the last point dropped.
/// Returns `(estimate, |difference|)`; the difference is the convergence
/// indicator compared against a tolerance by callers.
pub fn richardson(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let full = extrapolate_to_zero(xs, ys);
    if xs.len() < 2 {
        return (full, f64::INFINITY);
    }
    let m = xs.len() - 1;
    let partial = extrapolate_to_zero(&xs[..m], &ys[..m]);
    (full, (full - partial).abs())
}
