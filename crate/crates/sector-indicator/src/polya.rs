//! One-variable Borel transform, support function and circle
//! reconstruction: the classical baseline the sectorial machinery
//! generalizes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_segments, QuadResult, QuadratureConfig};

/// Truncated power series `f = sum a_k z^k / k!` of an entire function of
/// exponential type, with an upper bound on `limsup |a_k|^{1/k}`.
#[derive(Debug, Clone)]
pub struct PowerSeriesET {
    coefficients: Vec<Complex64>,
    type_radius: f64,
}

impl PowerSeriesET {
    pub fn new(coefficients: Vec<Complex64>, type_radius: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptySamples);
        }
        for (k, a) in coefficients.iter().enumerate().skip(1) {
            let root = a.norm().powf(1.0 / k as f64);
            if root > type_radius * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "type radius {type_radius} below |a_{k}|^(1/{k}) = {root}"
                )));
            }
        }
        Ok(Self { coefficients, type_radius })
    }

    /// Series of `exp(a z)`: coefficients `a^k`, truncated after `order`.
    pub fn exponential(a: Complex64, order: usize) -> Self {
        let mut coefficients = Vec::with_capacity(order + 1);
        let mut c = Complex64::new(1.0, 0.0);
        for _ in 0..=order {
            coefficients.push(c);
            c *= a;
        }
        Self { coefficients, type_radius: a.norm() }
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn type_radius(&self) -> f64 {
        self.type_radius
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }
}

/// Borel transform value with its reported truncation-tail estimate.
#[derive(Debug, Clone, Copy)]
pub struct BorelEval {
    pub value: Complex64,
    pub tail_estimate: f64,
}

/// Laurent sum `sum_k a_k omega^{-k-1}`, convergent for
/// `|omega| > type_radius`.
pub fn borel_eval(series: &PowerSeriesET, omega: Complex64) -> Result<BorelEval> {
    let r = omega.norm();
    let sigma = series.type_radius;
    if r <= sigma {
        return Err(Error::ConvergenceRadius { omega_abs: r, radius: sigma });
    }
    let inv = Complex64::new(1.0, 0.0) / omega;
    // Horner form in 1/omega
    let mut acc = Complex64::default();
    for a in series.coefficients.iter().rev() {
        acc = (acc + a) * inv;
    }
    let n = series.order();
    let a_last = series.coefficients[n].norm();
    let tail_estimate = a_last * (sigma / r).powi(n as i32) / (r - sigma);
    Ok(BorelEval { value: acc, tail_estimate })
}

/// Reconstruction `1/(2 pi i) oint g(omega) e^{z omega} d omega` over the
/// positively oriented circle `|omega - center| = radius`.
pub fn polya_reconstruct<G>(
    g: G,
    center: Complex64,
    radius: f64,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult>
where
    G: Fn(Complex64) -> Complex64,
{
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!("circle radius {radius} must be positive")));
    }
    let tau = std::f64::consts::TAU;
    let integrand = |phi: f64| {
        let dir = Complex64::from_polar(1.0, phi);
        let omega = center + radius * dir;
        g(omega) * (z * omega).exp() * Complex64::new(0.0, radius) * dir
    };
    let quarters: Vec<(f64, f64)> = (0..4).map(|q| (tau * q as f64 / 4.0, tau * (q as f64 + 1.0) / 4.0)).collect();
    let r = integrate_segments(&integrand, &quarters, 0.0, cfg)?;
    let inv_2pi_i = Complex64::new(0.0, -1.0 / tau);
    Ok(QuadResult { value: inv_2pi_i * r.value, err_est: r.err_est / tau })
}

/// Piecewise-linear, 2 pi - periodic support function built from indicator
/// samples via the reflection `k(-theta) = h(theta)`.
#[derive(Debug, Clone)]
pub struct SupportFunction {
    /// Sorted node angles in [0, 2 pi).
    nodes: Vec<(f64, f64)>,
}

impl SupportFunction {
    pub fn eval(&self, theta: f64) -> f64 {
        let tau = std::f64::consts::TAU;
        let t = theta.rem_euclid(tau);
        let n = self.nodes.len();
        if n == 1 {
            return self.nodes[0].1;
        }
        // find the surrounding pair, wrapping the last interval
        let idx = self.nodes.partition_point(|&(a, _)| a <= t);
        let (t0, v0) = if idx == 0 { (self.nodes[n - 1].0 - tau, self.nodes[n - 1].1) } else { self.nodes[idx - 1] };
        let (t1, v1) = if idx == n { (self.nodes[0].0 + tau, self.nodes[0].1) } else { self.nodes[idx] };
        if t1 == t0 {
            return v0;
        }
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

/// Build the support function `k` with `k(-theta) = h(theta)` from samples of
/// the indicator `h`; samples should cover a full turn.
pub fn support_function_from_indicator(h_samples: &[(f64, f64)]) -> Result<SupportFunction> {
    if h_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let tau = std::f64::consts::TAU;
    let mut nodes: Vec<(f64, f64)> =
        h_samples.iter().map(|&(theta, h)| ((-theta).rem_euclid(tau), h)).collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14);
    Ok(SupportFunction { nodes })
}

/// Parse a plain-text series file: one coefficient per line as `re im`
/// (whitespace separated); blank lines and `#` comments are skipped.
pub fn parse_series_text(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let re = parts.next();
        let im = parts.next();
        let (Some(re), Some(im)) = (re, im) else {
            return Err(Error::InvalidInput(format!(
                "line {}: expected 're im', got '{line}'",
                lineno + 1
            )));
        };
        if parts.next().is_some() {
            return Err(Error::InvalidInput(format!(
                "line {}: trailing fields in '{line}'",
                lineno + 1
            )));
        }
        let re: f64 = re
            .parse()
            .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))?;
        let im: f64 = im
            .parse()
            .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))?;
        out.push(Complex64::new(re, im));
    }
    if out.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(out)
}

/// Smallest admissible type radius of a coefficient list:
/// `max_k |a_k|^{1/k}`.
pub fn inferred_type_radius(coefficients: &[Complex64]) -> f64 {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a.norm().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
}
