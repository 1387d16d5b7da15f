//! Empirical growth-set membership, one-variable indicator estimation, and
//! the trigonometric-convexity bounds in one and several variables.
//!
//! A slope vector belongs to the growth set of `f` in direction `theta` when
//! `ln |f|` minus the linear form stays bounded along the ray pair. On a
//! finite geometric grid the surrogate is the fitted trend of that residual:
//! members have trend near zero, non-members grow linearly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{AnalyticFunctionModel, GrowthEnvelope, OneVarModel};
use crate::geometry::SectorPair;

/// Geometric radius grid and ray directions for growth sampling.
#[derive(Debug, Clone)]
pub struct GrowthGrid {
    pub r0: f64,
    pub ratio: f64,
    pub count: usize,
    /// Direction angles in the open (0, pi/2) quadrant of (r1, r2) space.
    pub directions: Vec<f64>,
}

impl Default for GrowthGrid {
    fn default() -> Self {
        Self {
            r0: 0.5,
            ratio: 1.3,
            count: 20,
            directions: (1..=8).map(|d| d as f64 * std::f64::consts::PI / 18.0).collect(),
        }
    }
}

impl GrowthGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0) || !(self.ratio > 1.0) || self.count < 2 {
            return Err(Error::InvalidInput(
                "growth grid needs r0 > 0, ratio > 1 and at least two radii".into(),
            ));
        }
        if self.directions.is_empty() {
            return Err(Error::EmptySamples);
        }
        for &d in &self.directions {
            if !(d > 0.0 && d < std::f64::consts::FRAC_PI_2) {
                return Err(Error::InvalidInput(format!(
                    "direction {d} not strictly inside (0, pi/2)"
                )));
            }
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        let mut r = self.r0;
        (0..self.count)
            .map(|_| {
                let v = r;
                r *= self.ratio;
                v
            })
            .collect()
    }
}

/// One sampled point of a membership test.
#[derive(Debug, Clone, Copy)]
pub struct MembershipSample {
    pub r1: f64,
    pub r2: f64,
    pub log_magnitude: f64,
    pub residual: f64,
}

/// Outcome of a growth-set membership test, with residual diagnostics.
#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub accepted: bool,
    /// Worst fitted residual trend across directions.
    pub residual_slope: f64,
    /// Fitted intercept (the empirical bounding constant) of the worst
    /// direction.
    pub residual_offset: f64,
    pub slope_tol: f64,
    pub samples: Vec<MembershipSample>,
}

/// Acceptance tolerance for the residual trend. Scales with the sup norm of
/// the slope vector so large slopes keep a proportionate margin.
pub fn slope_tolerance(nu: (f64, f64)) -> f64 {
    1e-2 * (1.0 + nu.0.abs().max(nu.1.abs()))
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let xm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - xm).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    let slope = sxy / sxx;
    (slope, ym - slope * xm)
}

/// Does `nu` bound the growth of `f` along the ray pair `theta`?
///
/// Samples `ln |f| - nu . r` on the grid and fits its trend against the scale
/// per direction; accepted iff the worst trend is at most [`slope_tolerance`].
pub fn membership_test(
    f: &AnalyticFunctionModel,
    theta: (f64, f64),
    nu: (f64, f64),
    grid: &GrowthGrid,
) -> Result<MembershipVerdict> {
    grid.validate()?;
    if theta.0.abs() > f.sectors.alpha1 + 1e-15 {
        return Err(Error::OutOfSector(Complex64::from_polar(1.0, theta.0)));
    }
    if theta.1.abs() > f.sectors.alpha2 + 1e-15 {
        return Err(Error::OutOfSector(Complex64::from_polar(1.0, theta.1)));
    }
    let radii = grid.radii();
    let tol = slope_tolerance(nu);
    let mut samples = Vec::with_capacity(radii.len() * grid.directions.len());
    let mut worst: Option<(f64, f64)> = None;
    for &phi in &grid.directions {
        let (s, c) = phi.sin_cos();
        let mut rows = Vec::with_capacity(radii.len());
        for &r in &radii {
            let (r1, r2) = (r * c, r * s);
            let lm = f.log_magnitude(r1, theta.0, r2, theta.1)?;
            let residual = lm - nu.0 * r1 - nu.1 * r2;
            samples.push(MembershipSample { r1, r2, log_magnitude: lm, residual });
            rows.push((r, residual));
        }
        let (slope, offset) = least_squares(&rows);
        if worst.map_or(true, |(w, _)| slope > w) {
            worst = Some((slope, offset));
        }
    }
    let (residual_slope, residual_offset) = worst.expect("at least one direction");
    Ok(MembershipVerdict {
        accepted: residual_slope <= tol,
        residual_slope,
        residual_offset,
        slope_tol: tol,
        samples,
    })
}

/// Least-squares slope of `ln |f(r e^{i theta})|` against `r` on the grid -
/// the finite-grid surrogate of the directional growth rate.
pub fn estimate_indicator_1d(f: &OneVarModel, theta: f64, grid: &GrowthGrid) -> Result<f64> {
    grid.validate()?;
    let rows: Vec<(f64, f64)> =
        grid.radii().iter().map(|&r| (r, (f.log_magnitude)(r, theta))).collect();
    for &(_, v) in &rows {
        if !v.is_finite() {
            return Err(Error::Overflow(v));
        }
    }
    Ok(least_squares(&rows).0)
}

/// Componentwise convexity bound
/// `C_j = [A+_j sin(theta_j + alpha_j) + A-_j sin(alpha_j - theta_j)] / sin(2 alpha_j)`
/// for any number of variables.
pub fn convexity_bound(
    alphas: &[f64],
    thetas: &[f64],
    a_plus: &[f64],
    a_minus: &[f64],
) -> Result<Vec<f64>> {
    let n = alphas.len();
    if n == 0 || thetas.len() != n || a_plus.len() != n || a_minus.len() != n {
        return Err(Error::InvalidInput(
            "convexity bound needs four equal-length nonempty lists".into(),
        ));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let alpha = alphas[j];
        let theta = thetas[j];
        if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidSectorAngle(alpha));
        }
        if theta.abs() > alpha {
            return Err(Error::RayOutsideSector { theta, alpha });
        }
        out.push(
            (a_plus[j] * (theta + alpha).sin() + a_minus[j] * (alpha - theta).sin())
                / (2.0 * alpha).sin(),
        );
    }
    Ok(out)
}

/// Classical one-variable trigonometric-convexity value
/// `[h1 sin(alpha2 - alpha) + h2 sin(alpha - alpha1)] / sin(alpha2 - alpha1)`.
pub fn trig_convex_bound_1d(
    alpha1: f64,
    alpha2: f64,
    alpha: f64,
    h1: f64,
    h2: f64,
) -> Result<f64> {
    if !(alpha2 - alpha1 < std::f64::consts::PI) || !(alpha2 > alpha1) {
        return Err(Error::InvalidInput(format!(
            "need 0 < alpha2 - alpha1 < pi, got interval [{alpha1}, {alpha2}]"
        )));
    }
    if !(alpha > alpha1 && alpha < alpha2) {
        return Err(Error::InvalidInput(format!(
            "alpha {alpha} outside the open interval ({alpha1}, {alpha2})"
        )));
    }
    Ok((h1 * (alpha2 - alpha).sin() + h2 * (alpha - alpha1).sin()) / (alpha2 - alpha1).sin())
}

/// Report of the end-to-end bound verification for one function and
/// direction pair.
#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub c1: f64,
    pub c2: f64,
    /// `(epsilon, verdict)` rows for the inflated slope vectors tested.
    pub rows: Vec<(f64, MembershipVerdict)>,
    /// All strictly inflated rows accepted.
    pub verified: bool,
}

/// Compute the convexity bound from the envelope and test membership of the
/// (possibly inflated) bound vector in the growth set along `theta`.
pub fn verify_theorem(
    f: &AnalyticFunctionModel,
    envelope: &GrowthEnvelope,
    theta: (f64, f64),
    grid: &GrowthGrid,
) -> Result<TheoremReport> {
    let SectorPair { alpha1, alpha2 } = f.sectors;
    let c = convexity_bound(
        &[alpha1, alpha2],
        &[theta.0, theta.1],
        &[envelope.a1_plus, envelope.a2_plus],
        &[envelope.a1_minus, envelope.a2_minus],
    )?;
    let mut rows = Vec::new();
    let mut verified = true;
    for eps in [0.0, 0.05, 0.1] {
        let verdict = membership_test(f, theta, (c[0] + eps, c[1] + eps), grid)?;
        if eps > 0.0 && !verdict.accepted {
            verified = false;
        }
        rows.push((eps, verdict));
    }
    Ok(TheoremReport { c1: c[0], c2: c[1], rows, verified })
}

/// Bisect the symmetric slope `nu1 = nu2 = nu` to the acceptance threshold of
/// [`membership_test`]; `lo` must be rejected and `hi` accepted.
pub fn symmetric_membership_threshold(
    f: &AnalyticFunctionModel,
    theta: (f64, f64),
    grid: &GrowthGrid,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let accepted =
        |nu: f64| -> Result<bool> { Ok(membership_test(f, theta, (nu, nu), grid)?.accepted) };
    if accepted(lo)? || !accepted(hi)? {
        return Err(Error::InvalidInput(format!(
            "bisection bracket [{lo}, {hi}] does not straddle the acceptance threshold"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if accepted(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::make_exponential;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    const SQRT2_OVER_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn quarter_sectors() -> SectorPair {
        SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap()
    }

    fn ones() -> AnalyticFunctionModel {
        make_exponential(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), quarter_sectors()).0
    }

    #[test]
    fn membership_exponential_axis() {
        let f = ones();
        let grid = GrowthGrid::default();
        let v = membership_test(&f, (0.0, 0.0), (1.0, 1.0), &grid).unwrap();
        assert!(v.accepted);
        assert!(v.residual_slope.abs() < 1e-10, "slope {}", v.residual_slope);

        let v2 = membership_test(&f, (0.0, 0.0), (0.95, 1.0), &grid).unwrap();
        assert!(!v2.accepted);
        // deficit 0.05 shows up along the most r1-heavy direction
        assert_abs_diff_eq!(
            v2.residual_slope,
            0.05 * (std::f64::consts::PI / 18.0).cos(),
            epsilon = 1e-9
        );

        let v3 = membership_test(&f, (0.0, 0.0), (1e3, 1e3), &grid).unwrap();
        assert!(v3.accepted);
    }

    #[test]
    fn membership_errors() {
        let f = ones();
        let grid = GrowthGrid::default();
        assert!(membership_test(&f, (1.0, 0.0), (1.0, 1.0), &grid).is_err());
        let bad = GrowthGrid { directions: vec![0.0], ..GrowthGrid::default() };
        assert!(membership_test(&f, (0.0, 0.0), (1.0, 1.0), &bad).is_err());
    }

    #[test]
    fn indicator_1d_estimates() {
        let grid = GrowthGrid::default();
        let e1 = OneVarModel::exponential(Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(
            estimate_indicator_1d(&e1, FRAC_PI_3, &grid).unwrap(),
            0.5,
            epsilon = 1e-2
        );
        assert_abs_diff_eq!(
            estimate_indicator_1d(&e1, std::f64::consts::FRAC_PI_2, &grid).unwrap(),
            0.0,
            epsilon = 1e-2
        );
        let e_ai = OneVarModel::exponential(Complex64::new(1.0, 1.0));
        assert_abs_diff_eq!(estimate_indicator_1d(&e_ai, 0.0, &grid).unwrap(), 1.0, epsilon = 1e-2);
    }

    #[test]
    fn convexity_bound_values() {
        let c = convexity_bound(
            &[FRAC_PI_4, FRAC_PI_4],
            &[0.0, 0.0],
            &[SQRT2_OVER_2, SQRT2_OVER_2],
            &[SQRT2_OVER_2, SQRT2_OVER_2],
        )
        .unwrap();
        assert_abs_diff_eq!(c[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c[1], 1.0, epsilon = 1e-13);

        // theta = alpha collapses to the plus slope exactly
        let c2 = convexity_bound(&[FRAC_PI_4], &[FRAC_PI_4], &[0.3], &[7.0]).unwrap();
        assert_abs_diff_eq!(c2[0], 0.3, epsilon = 1e-14);

        let c3 = convexity_bound(&[FRAC_PI_3], &[FRAC_PI_6], &[1.0], &[2.0]).unwrap();
        assert_abs_diff_eq!(c3[0], 2.309_401_076_758_503, epsilon = 1e-12);

        assert!(convexity_bound(&[2.0], &[0.0], &[1.0], &[1.0]).is_err());
        assert!(convexity_bound(&[FRAC_PI_4], &[1.0], &[1.0], &[1.0]).is_err());
        assert!(convexity_bound(&[], &[], &[], &[]).is_err());
    }

    #[test]
    fn geometric_agreement_with_corner_point() {
        use crate::geometry::{corner_point, support_value};
        for (alpha, theta, ap, am) in [
            (FRAC_PI_4, 0.2, 0.7, 0.9),
            (FRAC_PI_3, -0.5, 1.5, 0.1),
            (0.3, 0.29, -0.4, 2.0),
        ] {
            let c = convexity_bound(&[alpha], &[theta], &[ap], &[am]).unwrap()[0];
            let q = corner_point(alpha, ap, am).unwrap();
            let s = support_value(q, theta);
            assert!((c - s).abs() <= 1e-12 * (1.0 + c.abs()), "{c} vs {s}");
        }
    }

    #[test]
    fn trig_convex_cosine_equality() {
        // the cosine is the equality case
        for (a1, a2, a) in [(-FRAC_PI_4, FRAC_PI_4, 0.0), (-0.3, 1.2, 0.4), (0.1, 2.8, 1.0)] {
            let b = trig_convex_bound_1d(a1, a2, a, a1.cos(), a2.cos()).unwrap();
            assert!((b - a.cos()).abs() < 1e-13, "{b} vs {}", a.cos());
        }
        // continuity at the left endpoint
        let b = trig_convex_bound_1d(0.2, 1.4, 0.2 + 1e-9, 3.0, 5.0).unwrap();
        assert_abs_diff_eq!(b, 3.0, epsilon = 1e-6);
        assert!(trig_convex_bound_1d(0.0, std::f64::consts::PI, 1.0, 1.0, 1.0).is_err());
        assert!(trig_convex_bound_1d(0.0, 1.0, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn theorem_verification_sharp_case() {
        let sectors = quarter_sectors();
        let (f, env) =
            make_exponential(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), sectors);
        let grid = GrowthGrid::default();
        let report = verify_theorem(&f, &env, (0.0, 0.0), &grid).unwrap();
        assert_abs_diff_eq!(report.c1, 1.0, epsilon = 1e-13);
        assert!(report.verified);
        // sharp: accepted already at epsilon = 0
        assert!(report.rows[0].1.accepted);

        // deflated constants must fail
        let v = membership_test(&f, (0.0, 0.0), (0.9, 0.9), &grid).unwrap();
        assert!(!v.accepted);
    }

    #[test]
    fn theorem_verification_skew_exponential() {
        let sectors = quarter_sectors();
        let (f, env) =
            make_exponential(Complex64::new(1.0, 1.0), Complex64::new(1.0, 0.0), sectors);
        let grid = GrowthGrid::default();
        let report = verify_theorem(&f, &env, (FRAC_PI_8, 0.0), &grid).unwrap();
        // exact growth slope along theta1 = pi/8 equals the bound: sharp again
        assert_abs_diff_eq!(report.c1, 0.541_196_100_146_197, epsilon = 1e-12);
        assert!(report.verified);
        assert!(report.rows.iter().any(|(e, v)| *e == 0.05 && v.accepted));
    }

    #[test]
    fn threshold_bisection_exponential() {
        let f = ones();
        let grid = GrowthGrid::default();
        let th = symmetric_membership_threshold(&f, (0.0, 0.0), &grid, 0.5, 1.5, 1e-6).unwrap();
        // acceptance extends below 1 by tol/(cos phi + sin phi) at the
        // steepest sampled direction phi = 40 degrees
        let steep = (4.0 * std::f64::consts::PI / 18.0).cos()
            + (4.0 * std::f64::consts::PI / 18.0).sin();
        let expect = (steep - 0.01) / (steep + 0.01);
        assert_abs_diff_eq!(th, expect, epsilon = 1e-3);
    }
}
