//! Catalog of test functions of finite exponential type on a sector product,
//! with declared type constants, growth envelopes and overflow-safe
//! log-magnitude channels.
//!
//! Growth measurements never exponentiate: every catalog entry carries an
//! exact `ln |f|` channel so indicator tests can probe radii far beyond f64
//! exponent range.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SectorPair;
use crate::quadrature::RayDecay;

/// Largest log-magnitude the plain evaluator is allowed to produce.
const EVAL_LOG_LIMIT: f64 = 700.0;

type Evaluator = Arc<dyn Fn(Complex64, Complex64) -> Complex64 + Send + Sync>;
type LogMagnitude = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;

/// Boundary-ray growth slopes of an envelope
/// `|f| <= scale * exp((A1 + eps) r1 + (A2 + eps) r2)` on the four sign
/// patterns of boundary rays.
#[derive(Debug, Clone, Copy)]
pub struct GrowthEnvelope {
    pub a1_plus: f64,
    pub a1_minus: f64,
    pub a2_plus: f64,
    pub a2_minus: f64,
    pub scale: f64,
    pub epsilon: f64,
}

impl GrowthEnvelope {
    /// Slope of coordinate `coord` (1 or 2) on the branch of the given sign.
    pub fn slope(&self, coord: usize, plus: bool) -> f64 {
        match (coord, plus) {
            (1, true) => self.a1_plus,
            (1, false) => self.a1_minus,
            (2, true) => self.a2_plus,
            (2, false) => self.a2_minus,
            _ => panic!("coordinate must be 1 or 2"),
        }
    }
}

/// One factor of a separated (rank-one) term `u(zeta_1) v(zeta_2)`.
///
/// Factors know their own growth along rays, so transform-side quadrature can
/// derive certified truncation radii, and they expose closed-form bounds on
/// their one-variable Laplace transforms for series-tail certificates.
#[derive(Debug, Clone, Copy)]
pub enum SeparatedFactor {
    /// `coeff * exp(rate * zeta)`
    Exponential { coeff: Complex64, rate: Complex64 },
    /// `sign * exp(ln_scale) * zeta^degree`
    Monomial { degree: u32, ln_scale: f64, sign: f64 },
}

impl SeparatedFactor {
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        match *self {
            SeparatedFactor::Exponential { coeff, rate } => coeff * (rate * zeta).exp(),
            SeparatedFactor::Monomial { degree, ln_scale, sign } => {
                if degree == 0 {
                    Complex64::new(sign * ln_scale.exp(), 0.0)
                } else if zeta == Complex64::new(0.0, 0.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    (zeta.ln() * f64::from(degree) + ln_scale).exp() * sign
                }
            }
        }
    }

    /// Envelope of `u(zeta) e^{omega zeta}` on the ray `e^{i ray_angle}[0, inf)`
    /// given `w_level = Re(omega e^{i ray_angle})`.
    pub fn decay_on_ray(&self, w_level: f64, ray_angle: f64) -> Result<RayDecay> {
        match *self {
            SeparatedFactor::Exponential { coeff, rate } => {
                let growth = (rate * Complex64::from_polar(1.0, ray_angle)).re;
                let r = growth + w_level;
                if !(r < 0.0) {
                    return Err(Error::NonNegativeDecay(r));
                }
                Ok(RayDecay::with_magnitude(r, coeff.norm()))
            }
            SeparatedFactor::Monomial { degree, ln_scale, .. } => {
                if !(w_level < 0.0) {
                    return Err(Error::NonNegativeDecay(w_level));
                }
                // s^k <= (2k / (e |W|))^k e^{|W| s / 2}
                let k = f64::from(degree);
                let ln_mag = if degree == 0 {
                    ln_scale
                } else {
                    ln_scale + k * ((2.0 * k / w_level.abs()).ln() - 1.0)
                };
                Ok(RayDecay::with_magnitude(0.5 * w_level, ln_mag.exp()))
            }
        }
    }

    /// Closed-form bound on `|1/(2 pi i) int u(zeta) e^{omega zeta} d zeta|`
    /// over the ray at `ray_angle`, for any omega with
    /// `Re(omega e^{i ray_angle}) <= w_level < 0`.
    pub fn transform_abs_bound(&self, w_level: f64, ray_angle: f64) -> Result<f64> {
        let two_pi = std::f64::consts::TAU;
        match *self {
            SeparatedFactor::Exponential { coeff, rate } => {
                let growth = (rate * Complex64::from_polar(1.0, ray_angle)).re;
                let r = growth + w_level;
                if !(r < 0.0) {
                    return Err(Error::NonNegativeDecay(r));
                }
                Ok(coeff.norm() / (two_pi * r.abs()))
            }
            SeparatedFactor::Monomial { degree, ln_scale, .. } => {
                if !(w_level < 0.0) {
                    return Err(Error::NonNegativeDecay(w_level));
                }
                let k = f64::from(degree);
                let ln_bound =
                    ln_scale + ln_factorial(degree) - (k + 1.0) * w_level.abs().ln() - two_pi.ln();
                Ok(ln_bound.exp())
            }
        }
    }
}

/// Sum of natural logs `ln(k!)`.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|j| f64::from(j).ln()).sum()
}

/// Separated representation `f(z1, z2) = sum_k u_k(z1) v_k(z2)`.
#[derive(Debug, Clone, Copy)]
pub enum SeparatedForm {
    /// A single exact product term.
    Product(SeparatedFactor, SeparatedFactor),
    /// `cos sqrt(z1 z2) = sum_k (-1)^k (z1 z2)^k / (2k)!`, split evenly
    /// between the factors as `z^k / sqrt((2k)!)`.
    CosSqrtSeries,
}

impl SeparatedForm {
    /// The k-th separated term, or `None` past the end of a finite form.
    pub fn term(&self, k: usize) -> Option<(SeparatedFactor, SeparatedFactor)> {
        match *self {
            SeparatedForm::Product(u, v) => (k == 0).then_some((u, v)),
            SeparatedForm::CosSqrtSeries => {
                let degree = u32::try_from(k).ok()?;
                let ln_scale = -0.5 * ln_factorial(2 * degree);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Some((
                    SeparatedFactor::Monomial { degree, ln_scale, sign: 1.0 },
                    SeparatedFactor::Monomial { degree, ln_scale, sign },
                ))
            }
        }
    }
}

/// An evaluatable function of two complex variables on a sector product with
/// declared type constants. The object every transform and estimate consumes.
#[derive(Clone)]
pub struct AnalyticFunctionModel {
    pub label: String,
    pub sectors: SectorPair,
    pub h1: f64,
    pub h2: f64,
    evaluator: Evaluator,
    log_magnitude: Option<LogMagnitude>,
    separated: Option<SeparatedForm>,
}

impl std::fmt::Debug for AnalyticFunctionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticFunctionModel")
            .field("label", &self.label)
            .field("sectors", &self.sectors)
            .field("h1", &self.h1)
            .field("h2", &self.h2)
            .finish_non_exhaustive()
    }
}

impl AnalyticFunctionModel {
    /// Evaluate at a point of the closed sector product.
    ///
    /// Signals overflow instead of returning infinities; callers probing
    /// growth should use [`Self::log_magnitude`].
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Result<Complex64> {
        if !SectorPair::contains_closed(self.sectors.alpha1, z1) {
            return Err(Error::OutOfSector(z1));
        }
        if !SectorPair::contains_closed(self.sectors.alpha2, z2) {
            return Err(Error::OutOfSector(z2));
        }
        if let Some(lm) = &self.log_magnitude {
            let v = lm(z1.norm(), z1.arg(), z2.norm(), z2.arg());
            if v > EVAL_LOG_LIMIT {
                return Err(Error::Overflow(v));
            }
        }
        let v = (self.evaluator)(z1, z2);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(f64::INFINITY))
        }
    }

    /// Evaluation without the sector membership test, for quadrature loops
    /// whose nodes are on in-sector rays by construction.
    pub fn eval_unchecked(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        (self.evaluator)(z1, z2)
    }

    /// Exact `ln |f|` in polar coordinates, overflow-safe.
    pub fn log_magnitude(&self, r1: f64, theta1: f64, r2: f64, theta2: f64) -> Result<f64> {
        if theta1.abs() > self.sectors.alpha1 + 1e-15 {
            return Err(Error::OutOfSector(Complex64::from_polar(r1, theta1)));
        }
        if theta2.abs() > self.sectors.alpha2 + 1e-15 {
            return Err(Error::OutOfSector(Complex64::from_polar(r2, theta2)));
        }
        if let Some(lm) = &self.log_magnitude {
            return Ok(lm(r1, theta1, r2, theta2));
        }
        let v = (self.evaluator)(Complex64::from_polar(r1, theta1), Complex64::from_polar(r2, theta2));
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Overflow(f64::INFINITY));
        }
        Ok(n.ln())
    }

    /// The log-magnitude channel without sector checks, for callers working
    /// with analytic continuations beyond the sector product.
    pub fn log_magnitude_unchecked(&self, r1: f64, t1: f64, r2: f64, t2: f64) -> f64 {
        if let Some(lm) = &self.log_magnitude {
            lm(r1, t1, r2, t2)
        } else {
            self.eval_unchecked(Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2))
                .norm()
                .ln()
        }
    }

    pub fn separated(&self) -> Option<&SeparatedForm> {
        self.separated.as_ref()
    }
}

/// Evaluate a catalog model, free-function form.
pub fn evaluate(f: &AnalyticFunctionModel, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    f.evaluate(z1, z2)
}

/// The exponential family `exp(a z1 + b z2)` with its exact growth envelope.
pub fn make_exponential(
    a: Complex64,
    b: Complex64,
    sectors: SectorPair,
) -> (AnalyticFunctionModel, GrowthEnvelope) {
    let model = AnalyticFunctionModel {
        label: format!("exp:{},{},{},{}", a.re, a.im, b.re, b.im),
        sectors,
        h1: a.norm(),
        h2: b.norm(),
        evaluator: Arc::new(move |z1, z2| (a * z1 + b * z2).exp()),
        log_magnitude: Some(Arc::new(move |r1, t1, r2, t2| {
            r1 * (a * Complex64::from_polar(1.0, t1)).re + r2 * (b * Complex64::from_polar(1.0, t2)).re
        })),
        separated: Some(SeparatedForm::Product(
            SeparatedFactor::Exponential { coeff: Complex64::new(1.0, 0.0), rate: a },
            SeparatedFactor::Exponential { coeff: Complex64::new(1.0, 0.0), rate: b },
        )),
    };
    let rot = |alpha: f64| Complex64::from_polar(1.0, alpha);
    let envelope = GrowthEnvelope {
        a1_plus: (a * rot(sectors.alpha1)).re,
        a1_minus: (a * rot(-sectors.alpha1)).re,
        a2_plus: (b * rot(sectors.alpha2)).re,
        a2_minus: (b * rot(-sectors.alpha2)).re,
        scale: 1.0,
        epsilon: 0.0,
    };
    (model, envelope)
}

/// `ln |cos w|`, stable for arbitrarily large `|Im w|`.
fn ln_abs_cos(w: Complex64) -> f64 {
    let y = w.im.abs();
    if y < 20.0 {
        let c = w.cos().norm();
        if c == 0.0 {
            return f64::NEG_INFINITY;
        }
        return c.ln();
    }
    // cos w = e^{-i w'} (1 + e^{2 i w'}) / 2 with Im w' > 0
    let wp = if w.im > 0.0 { w } else { w.conj() };
    let u = (Complex64::new(0.0, 2.0) * wp).exp(); // |u| = e^{-2 Im w'} < 1
    y - std::f64::consts::LN_2 + (Complex64::new(1.0, 0.0) + u).norm().ln()
}

/// `cos sqrt(z1 z2)`; either square-root branch, cosine being even.
///
/// Declared type constants are `h1 = h2 = 1`, a safe over-estimate: inversion
/// contours built against a larger `h` simply sit deeper inside the domain.
pub fn make_cos_sqrt(sectors: SectorPair) -> AnalyticFunctionModel {
    AnalyticFunctionModel {
        label: "cossqrt".to_string(),
        sectors,
        h1: 1.0,
        h2: 1.0,
        evaluator: Arc::new(|z1, z2| (z1 * z2).sqrt().cos()),
        log_magnitude: Some(Arc::new(|r1, t1, r2, t2| {
            let w = Complex64::from_polar((r1 * r2).sqrt(), 0.5 * (t1 + t2));
            ln_abs_cos(w)
        })),
        separated: Some(SeparatedForm::CosSqrtSeries),
    }
}

/// Envelope for [`make_cos_sqrt`]: on the boundary ray pair `(l1 a1, l2 a2)`
/// the growth is `sqrt(r1 r2) |sin((l1 a1 + l2 a2)/2)|`, dominated by
/// `A (r1 + r2)` with the symmetric slope `A = sin((a1 + a2)/2) / 2`.
pub fn cos_sqrt_envelope(sectors: SectorPair) -> GrowthEnvelope {
    let a = 0.5 * (0.5 * (sectors.alpha1 + sectors.alpha2)).sin();
    GrowthEnvelope { a1_plus: a, a1_minus: a, a2_plus: a, a2_minus: a, scale: 1.0, epsilon: 0.0 }
}

/// Resolve a catalog identifier: `exp:a_re,a_im,b_re,b_im` or `cossqrt`.
pub fn catalog_lookup(
    id: &str,
    sectors: SectorPair,
) -> Result<(AnalyticFunctionModel, GrowthEnvelope)> {
    if id == "cossqrt" {
        return Ok((make_cos_sqrt(sectors), cos_sqrt_envelope(sectors)));
    }
    if let Some(rest) = id.strip_prefix("exp:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidInput(format!(
                "function id '{id}' needs four comma-separated reals after 'exp:'"
            )));
        }
        let mut vals = [0.0f64; 4];
        for (slot, raw) in vals.iter_mut().zip(&parts) {
            *slot = raw
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad number '{raw}' in '{id}': {e}")))?;
        }
        let a = Complex64::new(vals[0], vals[1]);
        let b = Complex64::new(vals[2], vals[3]);
        return Ok(make_exponential(a, b, sectors));
    }
    Err(Error::InvalidInput(format!("unknown function id '{id}'")))
}

/// One-variable model with a log-magnitude channel, for indicator estimates.
#[derive(Clone)]
pub struct OneVarModel {
    pub label: String,
    pub eval: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub log_magnitude: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl OneVarModel {
    /// `exp(a z)` in one variable.
    pub fn exponential(a: Complex64) -> Self {
        Self {
            label: format!("exp1:{},{}", a.re, a.im),
            eval: Arc::new(move |z| (a * z).exp()),
            log_magnitude: Arc::new(move |r, theta| {
                r * (a * Complex64::from_polar(1.0, theta)).re
            }),
        }
    }
}
