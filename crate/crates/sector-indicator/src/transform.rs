//! One-variable sectorial Laplace transform and the two-dimensional
//! concatenated Laplace transform with four-branch domain logic.
//!
//! Each coordinate of the transform converges on a union of two half planes;
//! which defining integral applies depends on the half plane containing the
//! argument, and the four definitions agree on overlaps (checked numerically
//! by [`ConcatenatedLaplace::branch_consistency`]).

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{AnalyticFunctionModel, GrowthEnvelope};
use crate::geometry::{HalfPlaneDomain, SectorPair};
use crate::quadrature::{integrate_ray, QuadResult, QuadratureConfig, RayDecay};

/// Branch sign of a transform coordinate: which boundary ray the defining
/// integral runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn angle(self, alpha: f64) -> f64 {
        match self {
            Sign::Plus => alpha,
            Sign::Minus => -alpha,
        }
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Sign::Plus)
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.is_plus() { "+" } else { "-" })
    }
}

const INV_2PI_I: Complex64 = Complex64::new(0.0, -1.0 / std::f64::consts::TAU);

/// The two-dimensional concatenated Laplace transform of a source function,
/// with its four convergence half planes.
#[derive(Debug, Clone)]
pub struct ConcatenatedLaplace {
    source: AnalyticFunctionModel,
    envelope: GrowthEnvelope,
    dom1_plus: HalfPlaneDomain,
    dom1_minus: HalfPlaneDomain,
    dom2_plus: HalfPlaneDomain,
    dom2_minus: HalfPlaneDomain,
    cfg: QuadratureConfig,
}

impl ConcatenatedLaplace {
    pub fn new(
        source: AnalyticFunctionModel,
        envelope: GrowthEnvelope,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let SectorPair { alpha1, alpha2 } = source.sectors;
        Ok(Self {
            dom1_plus: HalfPlaneDomain::new(alpha1, envelope.a1_plus),
            dom1_minus: HalfPlaneDomain::new(-alpha1, envelope.a1_minus),
            dom2_plus: HalfPlaneDomain::new(alpha2, envelope.a2_plus),
            dom2_minus: HalfPlaneDomain::new(-alpha2, envelope.a2_minus),
            source,
            envelope,
            cfg,
        })
    }

    pub fn source(&self) -> &AnalyticFunctionModel {
        &self.source
    }

    pub fn envelope(&self) -> &GrowthEnvelope {
        &self.envelope
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Convergence half plane of one coordinate and branch.
    pub fn domain(&self, coord: usize, sign: Sign) -> &HalfPlaneDomain {
        match (coord, sign) {
            (1, Sign::Plus) => &self.dom1_plus,
            (1, Sign::Minus) => &self.dom1_minus,
            (2, Sign::Plus) => &self.dom2_plus,
            (2, Sign::Minus) => &self.dom2_minus,
            _ => panic!("coordinate must be 1 or 2"),
        }
    }

    /// Distance of `omega` into the half plane of (`coord`, `sign`);
    /// positive means strictly inside.
    pub fn margin(&self, coord: usize, sign: Sign, omega: Complex64) -> f64 {
        self.domain(coord, sign).margin(omega)
    }

    // Points within float noise of the boundary count as outside: the
    // defining integral would need an unbounded truncation radius there.
    fn admissible(&self, coord: usize, sign: Sign, omega: Complex64) -> bool {
        self.margin(coord, sign, omega) > 1e-9 * (1.0 + omega.norm())
    }

    /// Pick an admissible sign pattern for `(omega1, omega2)`, preferring
    /// `+` when both branches contain a coordinate (the definitions agree on
    /// overlaps, so the tie-break is canonical).
    pub fn branch_select(&self, omega1: Complex64, omega2: Complex64) -> Result<(Sign, Sign)> {
        let pick = |coord: usize, omega: Complex64| -> Result<Sign> {
            for sign in Sign::BOTH {
                if self.admissible(coord, sign, omega) {
                    return Ok(sign);
                }
            }
            Err(Error::OutsideDomain { omega, coordinate: coord })
        };
        Ok((pick(1, omega1)?, pick(2, omega2)?))
    }

    /// Transform value on the automatically selected branch.
    pub fn eval(&self, omega1: Complex64, omega2: Complex64) -> Result<QuadResult> {
        let (b1, b2) = self.branch_select(omega1, omega2)?;
        self.eval_on_branch(omega1, omega2, b1, b2)
    }

    /// Transform value through the defining iterated integral of one branch
    /// pattern: outer ray in the first variable, inner ray in the second.
    pub fn eval_on_branch(
        &self,
        omega1: Complex64,
        omega2: Complex64,
        b1: Sign,
        b2: Sign,
    ) -> Result<QuadResult> {
        let d1 = self.margin(1, b1, omega1);
        let d2 = self.margin(2, b2, omega2);
        if !self.admissible(1, b1, omega1) {
            return Err(Error::OutsideDomain { omega: omega1, coordinate: 1 });
        }
        if !self.admissible(2, b2, omega2) {
            return Err(Error::OutsideDomain { omega: omega2, coordinate: 2 });
        }
        // one epsilon serves both rays; half the worst margin keeps the decay
        // rates robustly negative
        let eps = (0.5 * d1.min(d2)).min(1.0);
        let rate1 = eps - d1;
        let rate2 = eps - d2;
        let phi1 = b1.angle(self.source.sectors.alpha1);
        let phi2 = b2.angle(self.source.sectors.alpha2);
        let a1 = self.envelope.slope(1, b1.is_plus());
        let a2 = self.envelope.slope(2, b2.is_plus());
        let scale = self.envelope.scale;

        let radius1 = crate::quadrature::truncation_radius(
            rate1,
            scale / (std::f64::consts::TAU * rate2.abs()),
            &self.cfg,
        )?;
        let radius2 = crate::quadrature::truncation_radius(rate2, scale, &self.cfg)?;
        // the raw evaluator must stay within f64 exponent range on the
        // truncated ray box
        let ln_peak = scale.ln() + (a1 + eps) * radius1 + (a2 + eps).max(0.0) * radius2;
        if ln_peak > 700.0 {
            return Err(Error::Overflow(ln_peak));
        }

        let inner_err = RefCell::new(0.0f64);
        let inner_fail = RefCell::new(None::<Error>);
        let outer = integrate_ray(
            |zeta1: Complex64| {
                let s1 = zeta1.norm();
                // the whole inner integral scales with this prefactor, so the
                // inner absolute tolerance scales with it too; the truncation
                // radius then stays independent of s1
                let prefactor = scale * ((a1 + eps) * s1).exp();
                let inner_cfg =
                    self.cfg.with_tolerances(self.cfg.rel_tol, self.cfg.abs_tol * prefactor);
                let inner = integrate_ray(
                    |zeta2: Complex64| {
                        self.source.eval_unchecked(zeta1, zeta2) * (omega2 * zeta2).exp()
                    },
                    phi2,
                    RayDecay::with_magnitude(rate2, prefactor),
                    &inner_cfg,
                );
                match inner {
                    Ok(r) => {
                        let damp = (omega1 * zeta1).exp();
                        let mut e = inner_err.borrow_mut();
                        *e = e.max(r.err_est * damp.norm());
                        INV_2PI_I * r.value * damp
                    }
                    Err(err) => {
                        inner_fail.borrow_mut().get_or_insert(err);
                        Complex64::default()
                    }
                }
            },
            phi1,
            RayDecay::with_magnitude(rate1, scale / (std::f64::consts::TAU * rate2.abs())),
            &self.cfg,
        )?;
        if let Some(err) = inner_fail.into_inner() {
            return Err(err);
        }
        // damped inner errors accumulate over at most the outer truncated range
        let err_est = outer.err_est / std::f64::consts::TAU
            + inner_err.into_inner() * radius1 / std::f64::consts::TAU;
        Ok(QuadResult { value: INV_2PI_I * outer.value, err_est })
    }

    /// Maximum pairwise deviation of the admissible branch evaluations.
    ///
    /// Errors unless at least two sign patterns are admissible.
    pub fn branch_consistency(&self, omega1: Complex64, omega2: Complex64) -> Result<f64> {
        let mut values = Vec::new();
        for b1 in Sign::BOTH {
            for b2 in Sign::BOTH {
                if self.admissible(1, b1, omega1) && self.admissible(2, b2, omega2) {
                    values.push(self.eval_on_branch(omega1, omega2, b1, b2)?.value);
                }
            }
        }
        if values.len() < 2 {
            return Err(Error::OutsideDomain { omega: omega1, coordinate: 0 });
        }
        let mut dev = 0.0f64;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                dev = dev.max((values[i] - values[j]).norm());
            }
        }
        Ok(dev)
    }

    /// Analytic bound on `|m|` at a point strictly inside the branch domains,
    /// from the absolute-convergence estimate of the defining integral with
    /// the same epsilon policy as [`Self::eval_on_branch`].
    pub fn abs_bound(&self, omega1: Complex64, omega2: Complex64) -> Result<f64> {
        let (b1, b2) = self.branch_select(omega1, omega2)?;
        let d1 = self.margin(1, b1, omega1);
        let d2 = self.margin(2, b2, omega2);
        let eps = (0.5 * d1.min(d2)).min(1.0);
        let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        Ok(self.envelope.scale / (four_pi_sq * (d1 - eps) * (d2 - eps)))
    }
}

/// One-variable sectorial Laplace transform
/// `g(omega1, z2) = 1/(2 pi i) int f(zeta1, z2) e^{omega1 zeta1} d zeta1`
/// along the boundary ray selected by `branch`.
///
/// Valid for `Re(omega1 e^{i branch alpha1}) < -h1`.
pub fn laplace_1d(
    f: &AnalyticFunctionModel,
    omega1: Complex64,
    z2: Complex64,
    branch: Sign,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    if !SectorPair::contains_closed(f.sectors.alpha2, z2) {
        return Err(Error::OutOfSector(z2));
    }
    let phi = branch.angle(f.sectors.alpha1);
    let level = (omega1 * Complex64::from_polar(1.0, phi)).re;
    if !(level < -f.h1) {
        return Err(Error::PreconditionViolated { lhs: level, rhs: -f.h1 });
    }
    let d = -f.h1 - level;
    let eps = (0.5 * d).min(1.0);
    let rate = eps - d;
    let magnitude = ((f.h2 + eps) * z2.norm()).exp();
    let r = integrate_ray(
        |zeta1: Complex64| f.eval_unchecked(zeta1, z2) * (omega1 * zeta1).exp(),
        phi,
        RayDecay::with_magnitude(rate, magnitude),
        cfg,
    )?;
    Ok(QuadResult { value: INV_2PI_I * r.value, err_est: r.err_est / std::f64::consts::TAU })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{catalog_lookup, make_exponential};
    use crate::geometry::SectorPair;
    use std::f64::consts::{E, FRAC_PI_4, PI};

    fn exp_transform() -> ConcatenatedLaplace {
        let sectors = SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (m, env) =
            make_exponential(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), sectors);
        ConcatenatedLaplace::new(m, env, QuadratureConfig::default()).unwrap()
    }

    fn closed_form_m(a: Complex64, b: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
        let four_pi_sq = 4.0 * PI * PI;
        -Complex64::new(1.0, 0.0) / (four_pi_sq * (a + w1) * (b + w2))
    }

    #[test]
    fn laplace_1d_exponential_oracle() {
        let sectors = SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (f, _) = make_exponential(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), sectors);
        let cfg = QuadratureConfig::default();
        let w = Complex64::new(-3.0, 0.0);
        // closed form: -1/(2 pi i (1 + omega)) = 1/(4 pi i) at omega = -3
        let g = laplace_1d(&f, w, Complex64::default(), Sign::Plus, &cfg).unwrap();
        let expect = Complex64::new(0.0, -1.0 / (4.0 * PI));
        assert!((g.value - expect).norm() < 1e-11, "got {}", g.value);

        let g1 = laplace_1d(&f, w, Complex64::new(1.0, 0.0), Sign::Plus, &cfg).unwrap();
        assert!((g1.value - expect * E).norm() < 1e-10, "got {}", g1.value);

        // Re(-1 e^{i pi/4}) = -0.707 is not < -h1 = -1
        assert!(matches!(
            laplace_1d(&f, Complex64::new(-1.0, 0.0), Complex64::default(), Sign::Plus, &cfg),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn concatenated_laplace_closed_form() {
        let t = exp_transform();
        let w = Complex64::new(-3.0, 0.0);
        let r = t.eval(w, w).unwrap();
        let expect = -1.0 / (16.0 * PI * PI);
        assert!(
            (r.value - Complex64::new(expect, 0.0)).norm() < 1e-9 * expect.abs(),
            "got {} expected {}",
            r.value,
            expect
        );
    }

    #[test]
    fn fubini_symmetry_for_symmetric_source() {
        let t = exp_transform();
        let wa = Complex64::new(-2.5, 0.0);
        let wb = Complex64::new(-4.0, 0.0);
        let r1 = t.eval(wa, wb).unwrap();
        let r2 = t.eval(wb, wa).unwrap();
        assert!((r1.value - r2.value).norm() < 1e-10);
        let one = Complex64::new(1.0, 0.0);
        let cf = closed_form_m(one, one, wa, wb);
        assert!((r1.value - cf).norm() < 1e-10);
    }

    #[test]
    fn branch_selection() {
        let t = exp_transform();
        let w = Complex64::new(-3.0, 0.0);
        assert_eq!(t.branch_select(w, w).unwrap(), (Sign::Plus, Sign::Plus));
        // strictly below the axis: only the minus branch contains it
        let below = Complex64::from_polar(3.0, -2.0 * PI / 3.0);
        assert_eq!(t.branch_select(below, w).unwrap().0, Sign::Minus);
        assert!(matches!(
            t.branch_select(Complex64::default(), w),
            Err(Error::OutsideDomain { coordinate: 1, .. })
        ));
    }

    #[test]
    fn branch_agreement_on_overlap() {
        let t = exp_transform();
        let w = Complex64::new(-3.0, 0.0);
        let dev = t.branch_consistency(w, w).unwrap();
        assert!(dev <= 1e-9, "deviation {dev}");
        // a point where only one pattern is admissible errors out
        let above = Complex64::from_polar(3.0, 3.0 * PI / 4.0);
        assert!(t.branch_consistency(above, above).is_err());
    }

    #[test]
    fn domain_errors() {
        let t = exp_transform();
        assert!(t.eval(Complex64::default(), Complex64::default()).is_err());
        let w = Complex64::new(-3.0, 0.0);
        assert!(t.eval_on_branch(Complex64::new(-0.8, 0.0), w, Sign::Plus, Sign::Plus).is_err());
    }

    #[test]
    fn mestimate_bound_holds_on_grid() {
        let sectors = SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (mc, envc) = catalog_lookup("cossqrt", sectors).unwrap();
        let transforms = [
            exp_transform(),
            ConcatenatedLaplace::new(mc, envc, QuadratureConfig::default()).unwrap(),
        ];
        for t in &transforms {
            for x in [-2.0, -3.0, -5.0] {
                for y in [-1.0, 0.0, 2.0] {
                    let w1 = Complex64::new(x, y);
                    let w2 = Complex64::new(x, -0.5 * y);
                    if t.branch_select(w1, w2).is_err() {
                        continue;
                    }
                    let v = t.eval(w1, w2).unwrap();
                    let bound = t.abs_bound(w1, w2).unwrap();
                    assert!(
                        v.value.norm() <= bound * (1.0 + 1e-6),
                        "|m({w1},{w2})| = {} above bound {}",
                        v.value.norm(),
                        bound
                    );
                }
            }
        }
    }

    #[test]
    fn bounded_away_from_boundary_monotone() {
        let t = exp_transform();
        let alpha = FRAC_PI_4;
        let mut previous = f64::INFINITY;
        for dist in [0.3, 0.6, 1.2] {
            // real points at margin `dist` from both half-plane boundaries
            let s = (t.envelope().a1_plus + dist) / alpha.cos();
            let w = Complex64::new(-s, 0.0);
            let sup = t.eval(w, w).unwrap().value.norm();
            assert!(sup < previous, "sup {} at dist {} not decreasing", sup, dist);
            previous = sup;
        }
    }

    #[test]
    fn cos_sqrt_branch_consistency_spot() {
        let sectors = SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (m, env) = catalog_lookup("cossqrt", sectors).unwrap();
        let t = ConcatenatedLaplace::new(m, env, QuadratureConfig::default()).unwrap();
        let w = Complex64::new(-3.0, 0.0);
        let dev = t.branch_consistency(w, w).unwrap();
        assert!(dev <= 1e-7, "deviation {dev}");
    }
}
