//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands over
//! semi-infinite rays and over the inversion contours.
//!
//! Truncation radii are derived from caller-supplied decay data (rate and
//! magnitude of an exponential envelope), never sniffed from samples, so the
//! reported error estimate covers the discarded tail. Panel errors come from
//! the embedded Gauss rule, with the usual QUADPACK rescaling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{GammaContour, LambdaContour};

/// Tolerances and budgets for one integral evaluation.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Relative tolerance on the returned value.
    pub rel_tol: f64,
    /// Absolute tolerance; also drives the truncation radius.
    pub abs_tol: f64,
    /// Nodes per panel: 15 (Gauss 7 / Kronrod 15) or 21 (Gauss 10 / Kronrod 21).
    pub panel_nodes: usize,
    /// Hard cap on the number of panels per integral.
    pub max_panels: usize,
    /// Extra e-foldings beyond the tolerance-derived truncation radius.
    pub tail_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, panel_nodes: 15, max_panels: 4096, tail_margin: 5.0 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.panel_nodes != 15 && self.panel_nodes != 21 {
            return Err(Error::InvalidInput(format!(
                "panel_nodes {} unsupported (15 or 21)",
                self.panel_nodes
            )));
        }
        if self.max_panels < 2 {
            return Err(Error::InvalidInput("max_panels must be at least 2".into()));
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }
}

/// Value and certified error estimate of one integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_est: f64,
}

/// Exponential envelope `|f(zeta)| <= magnitude * exp(rate * |zeta|)` of a
/// ray integrand. The rate must be negative.
#[derive(Debug, Clone, Copy)]
pub struct RayDecay {
    pub rate: f64,
    pub magnitude: f64,
}

impl RayDecay {
    pub fn new(rate: f64) -> Self {
        Self { rate, magnitude: 1.0 }
    }

    pub fn with_magnitude(rate: f64, magnitude: f64) -> Self {
        Self { rate, magnitude }
    }
}

/// Exponential envelope `|f(gamma(t)) gamma'(t)| <= magnitude * exp(rate * |t|)`
/// of a contour integrand along both infinite branches.
#[derive(Debug, Clone, Copy)]
pub struct ContourTail {
    pub rate: f64,
    pub magnitude: f64,
}

impl ContourTail {
    pub fn new(rate: f64, magnitude: f64) -> Self {
        Self { rate, magnitude }
    }
}

/// Contour argument accepted by [`integrate_contour`].
#[derive(Debug, Clone, Copy)]
pub enum ContourRef<'a> {
    Gamma(&'a GammaContour),
    Lambda(&'a LambdaContour),
}

impl<'a> From<&'a GammaContour> for ContourRef<'a> {
    fn from(g: &'a GammaContour) -> Self {
        ContourRef::Gamma(g)
    }
}

impl<'a> From<&'a LambdaContour> for ContourRef<'a> {
    fn from(l: &'a LambdaContour) -> Self {
        ContourRef::Lambda(l)
    }
}

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15).
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG7: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

// Gauss-Kronrod 10-21 nodes and weights (QUADPACK dqk21).
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_32,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];
const WG10: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

struct PanelEval {
    value: Complex64,
    err: f64,
    res_abs: f64,
}

fn gk_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, nodes: usize) -> PanelEval {
    let (xgk, wgk, wg): (&[f64], &[f64], &[f64]) = if nodes == 21 {
        (&XGK21, &WGK21, &WG10)
    } else {
        (&XGK15, &WGK15, &WG7)
    };
    let n = xgk.len();
    let center = 0.5 * (a + b);
    let half_len = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = vec![Complex64::default(); n - 1];
    let mut fv2 = vec![Complex64::default(); n - 1];
    let mut res_gauss = Complex64::default();
    let mut res_kronrod = f_center * wgk[n - 1];
    let mut res_abs = res_kronrod.norm();

    if n % 2 == 0 {
        res_gauss = f_center * wg[n / 2 - 1];
    }

    for (j, gw) in wg.iter().enumerate().take((n - 1) / 2) {
        let jtw = j * 2 + 1;
        let x = half_len * xgk[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += *gw * (f1 + f2);
        res_kronrod += wgk[jtw] * (f1 + f2);
        res_abs += wgk[jtw] * (f1.norm() + f2.norm());
    }
    for j in 0..(n / 2) {
        let jtwm1 = j * 2;
        let x = half_len * xgk[jtwm1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += wgk[jtwm1] * (f1 + f2);
        res_abs += wgk[jtwm1] * (f1.norm() + f2.norm());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = wgk[n - 1] * (f_center - mean).norm();
    for j in 0..(n - 1) {
        res_asc += wgk[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let err = (res_kronrod - res_gauss).norm() * half_len.abs();
    PanelEval {
        value: res_kronrod * half_len,
        err: rescale_error(err, res_abs * half_len.abs(), res_asc * half_len.abs()),
        res_abs: res_abs * half_len.abs(),
    }
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    res_abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error; ties broken by left endpoint for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Adaptive integration of `f` over the given parameter segments.
///
/// Segment boundaries are honored (a corner always starts a new panel). The
/// `tail_err` term is added to the returned estimate and to the convergence
/// target, so certified truncation tails simply ride along.
pub fn integrate_segments<F: Fn(f64) -> Complex64>(
    f: &F,
    segments: &[(f64, f64)],
    tail_err: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    let mut heap = BinaryHeap::new();
    let mut count = 0usize;
    for &(a, b) in segments {
        if !(b > a) {
            continue;
        }
        let ev = gk_panel(f, a, b, cfg.panel_nodes);
        heap.push(Panel { a, b, value: ev.value, err: ev.err, res_abs: ev.res_abs });
        count += 1;
    }
    if count == 0 {
        return Ok(QuadResult { value: Complex64::default(), err_est: tail_err });
    }

    loop {
        let total_value: Complex64 = heap.iter().map(|p| p.value).sum();
        let total_err: f64 = heap.iter().map(|p| p.err).sum::<f64>() + tail_err;
        let total_abs: f64 = heap.iter().map(|p| p.res_abs).sum();
        let target = cfg
            .abs_tol
            .max(cfg.rel_tol * total_value.norm())
            .max(100.0 * f64::EPSILON * total_abs);
        if total_err <= target {
            break;
        }
        if count >= cfg.max_panels {
            return Err(Error::BudgetExceeded { panels: count, err_est: total_err });
        }
        let worst = heap.pop().expect("heap nonempty");
        // A panel at roundoff level cannot be improved by bisection.
        if worst.err <= 100.0 * f64::EPSILON * worst.res_abs {
            heap.push(worst);
            return Err(Error::BudgetExceeded { panels: count, err_est: total_err });
        }
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let ev = gk_panel(f, a, b, cfg.panel_nodes);
            heap.push(Panel { a, b, value: ev.value, err: ev.err, res_abs: ev.res_abs });
        }
        count += 1;
    }

    // Deterministic summation order: by position.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let err_est = panels.iter().map(|p| p.err).sum::<f64>() + tail_err;
    Ok(QuadResult { value, err_est })
}

/// Truncation radius `R` with `magnitude * exp(rate * R) / |rate| <= abs_tol`,
/// padded by `tail_margin` e-foldings.
pub fn truncation_radius(rate: f64, magnitude: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(rate < 0.0) {
        return Err(Error::NonNegativeDecay(rate));
    }
    let mag = magnitude.max(f64::MIN_POSITIVE);
    let efolds = (mag / (cfg.abs_tol * rate.abs())).ln().max(1.0);
    Ok((efolds + cfg.tail_margin) / rate.abs())
}

fn geometric_boundaries(a: f64, b: f64, splits: u32) -> Vec<(f64, f64)> {
    // Panels refine toward `a`: [a, a+w/2^k], ..., [a+w/2, b].
    let w = b - a;
    let mut cuts = vec![a];
    for j in (1..=splits).rev() {
        cuts.push(a + w / f64::powi(2.0, j as i32));
    }
    cuts.push(b);
    cuts.dedup();
    cuts.windows(2).map(|p| (p[0], p[1])).collect()
}

// Same panels reflected so refinement happens toward `b`.
fn geometric_boundaries_toward_end(a: f64, b: f64, splits: u32) -> Vec<(f64, f64)> {
    let mut segs: Vec<(f64, f64)> = geometric_boundaries(0.0, b - a, splits)
        .into_iter()
        .map(|(lo, hi)| (b - hi, b - lo))
        .collect();
    segs.sort_by(|p, q| p.0.total_cmp(&q.0));
    segs
}

/// Integral of `f` over the ray `e^{i angle} [0, inf)` with `d zeta` measure.
///
/// The envelope `decay` must have a strictly negative rate; the returned
/// estimate covers both the panel errors and the discarded tail.
pub fn integrate_ray<F: Fn(Complex64) -> Complex64>(
    f: F,
    angle: f64,
    decay: RayDecay,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    let radius = truncation_radius(decay.rate, decay.magnitude, cfg)?;
    let dir = Complex64::from_polar(1.0, angle);
    let g = move |t: f64| f(dir * t) * dir;
    let tail_err = decay.magnitude * (decay.rate * radius).exp() / decay.rate.abs();
    integrate_segments(&g, &geometric_boundaries(0.0, radius, 6), tail_err, cfg)
}

fn integrate_contour_with_measure<F, M>(
    f: F,
    contour: ContourRef<'_>,
    tail: ContourTail,
    cfg: &QuadratureConfig,
    measure: M,
) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Complex64,
    M: Fn(Complex64) -> Complex64,
{
    let radius = truncation_radius(tail.rate, tail.magnitude, cfg)?;
    let tail_err = 2.0 * tail.magnitude * (tail.rate * radius).exp() / tail.rate.abs();
    match contour {
        ContourRef::Gamma(g) => {
            let gc = *g;
            let h = move |t: f64| f(gc.point(t)) * measure(gc.derivative(t));
            let mut segs = geometric_boundaries_toward_end(-radius, 0.0, 6);
            segs.extend(geometric_boundaries(0.0, radius, 6));
            integrate_segments(&h, &segs, tail_err, cfg)
        }
        ContourRef::Lambda(l) => {
            let lc = *l;
            let t_hi = (lc.t_plus + radius).max(lc.t_plus * 1.5 + 1.0);
            let t_lo = (lc.t_minus - radius).min(lc.t_minus * 1.5 - 1.0);
            let base = lc.base;
            let h = |t: f64| f(base.point(t)) * measure(base.derivative(t));
            let lower = integrate_segments(
                &h,
                &geometric_boundaries_toward_end(t_lo, lc.t_minus, 6),
                0.0,
                cfg,
            )?;
            let chord_d = measure(lc.chord_derivative());
            let ch = |u: f64| f(lc.chord_point(u)) * chord_d;
            let chord = integrate_segments(&ch, &[(0.0, 1.0)], 0.0, cfg)?;
            let upper =
                integrate_segments(&h, &geometric_boundaries(lc.t_plus, t_hi, 6), 0.0, cfg)?;
            Ok(QuadResult {
                value: lower.value + chord.value + upper.value,
                err_est: lower.err_est + chord.err_est + upper.err_est + tail_err,
            })
        }
    }
}

/// Integral of `f` along a Gamma or Lambda contour in order of increasing
/// parameter, with the chord (Lambda case) integrated as its own segment.
pub fn integrate_contour<F: Fn(Complex64) -> Complex64>(
    f: F,
    contour: ContourRef<'_>,
    tail: ContourTail,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    integrate_contour_with_measure(f, contour, tail, cfg, |d| d)
}

/// Same integral against arc length `|d omega|` instead of `d omega`.
pub fn integrate_contour_arclength<F: Fn(Complex64) -> Complex64>(
    f: F,
    contour: ContourRef<'_>,
    tail: ContourTail,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    integrate_contour_with_measure(f, contour, tail, cfg, |d| Complex64::new(d.norm(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_lambda;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn kronrod_weights_are_consistent() {
        // weights integrate the constant 1 over [-1, 1]
        for (wgk, wg) in [(&WGK15[..], &WG7[..]), (&WGK21[..], &WG10[..])] {
            let n = wgk.len();
            let mut k_sum = wgk[n - 1];
            for w in &wgk[..n - 1] {
                k_sum += 2.0 * w;
            }
            assert_abs_diff_eq!(k_sum, 2.0, epsilon = 1e-14);
            let mut g_sum = if n % 2 == 0 { wg[n / 2 - 1] } else { 0.0 };
            for w in &wg[..(n - 1) / 2] {
                g_sum += 2.0 * w;
            }
            assert_abs_diff_eq!(g_sum, 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn single_panel_is_exact_on_polynomials() {
        // K15 integrates degree <= 22 exactly
        let f = |t: f64| Complex64::new(t.powi(10), t.powi(7));
        let ev = gk_panel(&f, 0.0, 1.0, 15);
        assert_abs_diff_eq!(ev.value.re, 1.0 / 11.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev.value.im, 1.0 / 8.0, epsilon = 1e-14);
        let ev21 = gk_panel(&f, 0.0, 1.0, 21);
        assert_abs_diff_eq!(ev21.value.re, 1.0 / 11.0, epsilon = 1e-14);
    }

    #[test]
    fn ray_exponential() {
        let cfg = QuadratureConfig::default();
        let r = integrate_ray(|z| (-z).exp(), 0.0, RayDecay::new(-1.0), &cfg).unwrap();
        assert!((r.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(r.err_est < 1e-10);
    }

    #[test]
    fn ray_oscillatory_antiderivative() {
        // integral of e^{omega zeta} over the ray at pi/4 equals -1/omega
        let cfg = QuadratureConfig::default();
        let omega = Complex64::new(-2.0, 0.0);
        let rate = (omega * Complex64::from_polar(1.0, FRAC_PI_4)).re;
        let r = integrate_ray(
            move |z| (omega * z).exp(),
            FRAC_PI_4,
            RayDecay::new(rate),
            &cfg,
        )
        .unwrap();
        assert!((r.value - Complex64::new(0.5, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn nonnegative_decay_is_rejected() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            integrate_ray(|_| Complex64::new(1.0, 0.0), 0.0, RayDecay::new(0.0), &cfg),
            Err(Error::NonNegativeDecay(_))
        ));
        let g = GammaContour::with_default_vertex(FRAC_PI_4, 1.0).unwrap();
        assert!(matches!(
            integrate_contour(
                |_| Complex64::new(1.0, 0.0),
                ContourRef::Gamma(&g),
                ContourTail::new(0.5, 1.0),
                &cfg
            ),
            Err(Error::NonNegativeDecay(_))
        ));
    }

    fn residue_integrand(w: Complex64) -> Complex64 {
        // (-1 / 2 pi i) e^{-w} / (1 + w); residue calculus gives e over Gamma
        let minus_inv_2pii = Complex64::new(0.0, 1.0 / (2.0 * PI));
        minus_inv_2pii * (-w).exp() / (Complex64::new(1.0, 0.0) + w)
    }

    #[test]
    fn gamma_contour_residue() {
        let cfg = QuadratureConfig::default();
        let g = GammaContour::with_default_vertex(FRAC_PI_4, 1.0).unwrap();
        let tail = ContourTail::new(-FRAC_PI_4.sin(), 3.0);
        let r = integrate_contour(residue_integrand, ContourRef::Gamma(&g), tail, &cfg).unwrap();
        assert!(
            (r.value - Complex64::new(std::f64::consts::E, 0.0)).norm() < 1e-8,
            "got {} err {}",
            r.value,
            r.err_est
        );
    }

    #[test]
    fn lambda_contour_deformation_invariance() {
        let cfg = QuadratureConfig::default();
        let g = GammaContour::with_default_vertex(FRAC_PI_4, 1.0).unwrap();
        let lam = build_lambda(&g, 0.0, 1.0, 0.1).unwrap();
        let tail = ContourTail::new(-FRAC_PI_4.sin(), 3.0);
        let r = integrate_contour(residue_integrand, ContourRef::Lambda(&lam), tail, &cfg).unwrap();
        assert!(
            (r.value - Complex64::new(std::f64::consts::E, 0.0)).norm() < 2e-8,
            "got {} err {}",
            r.value,
            r.err_est
        );
    }

    #[test]
    fn tail_certification_margin_doubling() {
        let base = QuadratureConfig::default();
        let mut wide = base;
        wide.tail_margin = 2.0 * base.tail_margin;
        let f = |z: Complex64| (-z).exp() * (Complex64::new(0.0, 3.0) * z).exp();
        let a = integrate_ray(f, 0.0, RayDecay::new(-1.0), &base).unwrap();
        let b = integrate_ray(f, 0.0, RayDecay::new(-1.0), &wide).unwrap();
        assert!((a.value - b.value).norm() < base.abs_tol);
    }

    #[test]
    fn budget_exhaustion_reports_error() {
        let mut cfg = QuadratureConfig::default();
        cfg.max_panels = 4;
        cfg.rel_tol = 1e-14;
        cfg.abs_tol = 1e-16;
        // highly oscillatory on a long range: cannot converge with 4 panels
        let r = integrate_segments(
            &|t: f64| Complex64::new((40.0 * t).sin(), 0.0),
            &[(0.0, 30.0)],
            0.0,
            &cfg,
        );
        assert!(matches!(r, Err(Error::BudgetExceeded { .. })));
    }
}
