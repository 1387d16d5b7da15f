//! Sectorial contour inversion in one and two variables, and the
//! deformed-contour evaluation that realizes the growth estimate.
//!
//! The two-variable inversion integrates the concatenated Laplace transform
//! against `e^{-omega1 z1 - omega2 z2}` over a product of contours. Sources
//! carry a separated representation `f = sum_k u_k(z1) v_k(z2)`, so the
//! double contour integral splits exactly (by linearity and Fubini) into a
//! sum of products of one-variable contour integrals, each of whose
//! integrands is the one-variable ray transform of a factor evaluated by
//! quadrature at every contour node. Series tails are certified with
//! closed-form bounds on the factor transforms.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::SeparatedFactor;
use crate::geometry::{GammaContour, LambdaContour, SectorPair};
use crate::quadrature::{
    integrate_contour, integrate_ray, ContourRef, ContourTail, QuadResult, QuadratureConfig,
};
use crate::transform::ConcatenatedLaplace;

const INV_2PI_I: Complex64 = Complex64::new(0.0, -1.0 / std::f64::consts::TAU);

/// A plain or deformed inversion contour.
#[derive(Debug, Clone, Copy)]
pub enum ContourSpec {
    Gamma(GammaContour),
    Lambda(LambdaContour),
}

impl ContourSpec {
    pub fn base(&self) -> &GammaContour {
        match self {
            ContourSpec::Gamma(g) => g,
            ContourSpec::Lambda(l) => &l.base,
        }
    }

    pub fn as_contour_ref(&self) -> ContourRef<'_> {
        match self {
            ContourSpec::Gamma(g) => ContourRef::Gamma(g),
            ContourSpec::Lambda(l) => ContourRef::Lambda(l),
        }
    }

    fn lambda(&self) -> Option<&LambdaContour> {
        match self {
            ContourSpec::Gamma(_) => None,
            ContourSpec::Lambda(l) => Some(l),
        }
    }
}

/// Contour pairing and evaluation limits for two-variable inversion.
#[derive(Debug, Clone, Copy)]
pub struct InversionPlan {
    pub contour1: ContourSpec,
    pub contour2: ContourSpec,
    /// Minimum admissible |z_j|: tail truncation needs decay proportional
    /// to |z|, so arbitrarily small moduli cannot be certified.
    pub z_min: f64,
    pub cfg: QuadratureConfig,
}

impl InversionPlan {
    /// Default plan: plain contours with the default vertex for the source's
    /// type constants.
    pub fn for_source(t: &ConcatenatedLaplace) -> Result<Self> {
        let s = t.source();
        Ok(Self {
            contour1: ContourSpec::Gamma(GammaContour::with_default_vertex(
                s.sectors.alpha1,
                s.h1,
            )?),
            contour2: ContourSpec::Gamma(GammaContour::with_default_vertex(
                s.sectors.alpha2,
                s.h2,
            )?),
            z_min: 1e-2,
            cfg: *t.config(),
        })
    }

    /// Check the contour pair against the source's sector angles and type
    /// constants.
    pub fn validate(&self, t: &ConcatenatedLaplace) -> Result<()> {
        let s = t.source();
        for (c, alpha, h) in [
            (&self.contour1, s.sectors.alpha1, s.h1),
            (&self.contour2, s.sectors.alpha2, s.h2),
        ] {
            let b = c.base();
            if (b.alpha - alpha).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "contour angle {} does not match sector angle {}",
                    b.alpha, alpha
                )));
            }
            if !(b.vertex * b.alpha.cos() < -h) {
                return Err(Error::InvalidInput(format!(
                    "contour vertex {} violates p cos(alpha) < -h for h = {}",
                    b.vertex, h
                )));
            }
        }
        Ok(())
    }
}

/// Growth data of a transform `g` along the contour tails:
/// `|g(gamma(t))| <= magnitude * exp(rate * |t|)`.
#[derive(Debug, Clone, Copy)]
pub struct ContourGrowth {
    pub rate: f64,
    pub magnitude: f64,
}

impl ContourGrowth {
    /// Bounded transforms (the uniform-estimate case).
    pub fn bounded(magnitude: f64) -> Self {
        Self { rate: 0.0, magnitude }
    }
}

/// Tail decay rate of `|e^{-omega z}|` along both contour branches, per unit
/// of the contour parameter.
fn z_decay_rate(alpha: f64, z: Complex64) -> f64 {
    let theta = z.arg();
    z.norm() * (alpha - theta).sin().min((alpha + theta).sin())
}

/// One-variable inversion `int_Gamma g(omega) e^{-omega z} d omega`.
///
/// `growth` bounds `g` along the contour tails; the integrand then decays at
/// rate `|z| min(sin(alpha -+ theta)) - growth.rate`, which must be positive.
pub fn invert_1d<G>(
    g: G,
    contour: &GammaContour,
    z: Complex64,
    growth: ContourGrowth,
    cfg: &QuadratureConfig,
) -> Result<QuadResult>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    if !SectorPair::contains_open(contour.alpha, z) {
        return Err(Error::OutOfSector(z));
    }
    let decay = z_decay_rate(contour.alpha, z) - growth.rate;
    if !(decay > 0.0) {
        return Err(Error::ZTooSmall {
            z_abs: z.norm(),
            z_min: growth.rate
                / (contour.alpha - z.arg())
                    .sin()
                    .min((contour.alpha + z.arg()).sin())
                    .max(f64::MIN_POSITIVE),
        });
    }
    let magnitude = growth.magnitude * (contour.vertex.abs() * z.norm()).exp();
    let fail = RefCell::new(None::<Error>);
    let r = integrate_contour(
        |omega| match g(omega) {
            Ok(v) => v * (-omega * z).exp(),
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                Complex64::default()
            }
        },
        ContourRef::Gamma(contour),
        ContourTail::new(-decay, magnitude),
        cfg,
    )?;
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    Ok(r)
}

/// `max over the chord of min over branches of (Re(omega e^{i b alpha}) + shift_b)`.
///
/// Both branch levels are linear along the chord, so the extremum sits at an
/// endpoint or at the branch crossing.
fn chord_best_level(lambda: &LambdaContour, shift_plus: f64, shift_minus: f64) -> f64 {
    let alpha = lambda.base.alpha;
    let rot_p = Complex64::from_polar(1.0, alpha);
    let rot_m = Complex64::from_polar(1.0, -alpha);
    let lp = |u: f64| (lambda.chord_point(u) * rot_p).re + shift_plus;
    let lm = |u: f64| (lambda.chord_point(u) * rot_m).re + shift_minus;
    let level = |u: f64| lp(u).min(lm(u));
    let (p0, p1) = (lp(0.0), lp(1.0));
    let (m0, m1) = (lm(0.0), lm(1.0));
    let denominator = (p1 - p0) - (m1 - m0);
    let mut best = level(0.0).max(level(1.0));
    if denominator.abs() > 1e-300 {
        let u_star = (m0 - p0) / denominator;
        if (0.0..=1.0).contains(&u_star) {
            best = best.max(level(u_star));
        }
    }
    best
}

/// Supremum bound for `|Lu|` (the factor's ray transform) over a contour.
fn factor_sup_on_contour(factor: &SeparatedFactor, spec: &ContourSpec) -> Result<f64> {
    let base = spec.base();
    let alpha = base.alpha;
    let level = base.branch_level();
    // tails: the matching branch holds the level p cos(alpha) exactly
    let mut bound = factor
        .transform_abs_bound(level, alpha)?
        .max(factor.transform_abs_bound(level, -alpha)?);
    if let Some(l) = spec.lambda() {
        // on the chord, take the better branch pointwise
        let b = match factor {
            SeparatedFactor::Exponential { coeff, rate } => {
                let a_p = (rate * Complex64::from_polar(1.0, alpha)).re;
                let a_m = (rate * Complex64::from_polar(1.0, -alpha)).re;
                let worst = chord_best_level(l, a_p, a_m);
                if !(worst < 0.0) {
                    return Err(Error::NonNegativeDecay(worst));
                }
                coeff.norm() / (std::f64::consts::TAU * worst.abs())
            }
            SeparatedFactor::Monomial { .. } => {
                let worst = chord_best_level(l, 0.0, 0.0);
                if !(worst < 0.0) {
                    return Err(Error::NonNegativeDecay(worst));
                }
                factor.transform_abs_bound(worst, alpha)?
            }
        };
        bound = bound.max(b);
    }
    Ok(bound)
}

/// Ray transform `1/(2 pi i) int u(zeta) e^{omega zeta} d zeta` of a factor,
/// on the branch with the larger decay margin.
fn factor_transform(
    factor: &SeparatedFactor,
    omega: Complex64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    let mut best: Option<(f64, f64)> = None; // (decay margin, ray angle)
    for angle in [alpha, -alpha] {
        let w_level = (omega * Complex64::from_polar(1.0, angle)).re;
        let margin = match factor {
            SeparatedFactor::Exponential { rate, .. } => {
                -((rate * Complex64::from_polar(1.0, angle)).re + w_level)
            }
            SeparatedFactor::Monomial { .. } => -w_level,
        };
        if best.map_or(true, |(m, _)| margin > m) {
            best = Some((margin, angle));
        }
    }
    let (margin, angle) = best.expect("two candidate branches");
    if !(margin > 0.0) {
        return Err(Error::NonNegativeDecay(-margin));
    }
    let w_level = (omega * Complex64::from_polar(1.0, angle)).re;
    let decay = factor.decay_on_ray(w_level, angle)?;
    // keep the raw factor values inside f64 exponent range on the truncated ray
    let radius = crate::quadrature::truncation_radius(decay.rate, decay.magnitude, cfg)?;
    if let SeparatedFactor::Exponential { rate, .. } = factor {
        if rate.norm() * radius > 700.0 {
            return Err(Error::Overflow(rate.norm() * radius));
        }
    }
    let f = factor;
    let r = integrate_ray(|zeta| f.eval(zeta) * (omega * zeta).exp(), angle, decay, cfg)?;
    Ok(QuadResult { value: INV_2PI_I * r.value, err_est: r.err_est / std::f64::consts::TAU })
}

/// One-variable contour integral `int Lu(omega) e^{-omega z} d omega` of a
/// factor's ray transform, with per-node tolerance weighting.
fn factor_contour_integral(
    factor: &SeparatedFactor,
    spec: &ContourSpec,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    let base = spec.base();
    let alpha = base.alpha;
    if !SectorPair::contains_open(alpha, z) {
        return Err(Error::OutOfSector(z));
    }
    let decay = z_decay_rate(alpha, z);
    if !(decay > 0.0) {
        return Err(Error::ZTooSmall { z_abs: z.norm(), z_min: 0.0 });
    }
    let sup_lu = factor_sup_on_contour(factor, spec)?;
    let peak_weight = match spec.lambda() {
        Some(l) => ((l.c_value + l.delta) * z.norm()).exp(),
        None => (base.vertex.abs() * z.norm()).exp(),
    };
    // rough contour measure for distributing the node error budget
    let measure = 2.0 * (sup_lu.max(1e-300) * peak_weight / cfg.abs_tol).ln().max(1.0) / decay
        + spec.lambda().map_or(0.0, |l| l.chord_length());

    let inner_err = RefCell::new(0.0f64);
    let fail = RefCell::new(None::<Error>);
    let r = integrate_contour(
        |omega| {
            let damp = (-omega * z).exp();
            let weight = damp.norm();
            let node_abs = (cfg.abs_tol / (weight * measure).max(1e-300)).clamp(1e-16, 1.0);
            let node_cfg = cfg.with_tolerances(cfg.rel_tol, node_abs);
            match factor_transform(factor, omega, alpha, &node_cfg) {
                Ok(v) => {
                    let mut e = inner_err.borrow_mut();
                    *e = e.max(v.err_est * weight);
                    v.value * damp
                }
                Err(e) => {
                    fail.borrow_mut().get_or_insert(e);
                    Complex64::default()
                }
            }
        },
        spec.as_contour_ref(),
        ContourTail::new(-decay, sup_lu * peak_weight),
        cfg,
    )?;
    if let Some(e) = fail.into_inner() {
        return Err(e);
    }
    Ok(QuadResult { value: r.value, err_est: r.err_est + inner_err.into_inner() * measure })
}

/// Exact bound on `int |e^{-omega z}| |d omega|` over a contour.
fn kernel_measure_bound(spec: &ContourSpec, z: Complex64) -> f64 {
    let base = spec.base();
    let r = z.norm();
    let theta = z.arg();
    let sin_m = (base.alpha - theta).sin();
    let sin_p = (base.alpha + theta).sin();
    match spec.lambda() {
        None => ((-base.vertex) * r * theta.cos()).exp() * (1.0 / (r * sin_m) + 1.0 / (r * sin_p)),
        Some(l) => {
            let e = ((l.c_value + l.delta) * r).exp();
            e * (l.chord_length() + 1.0 / (r * sin_m) + 1.0 / (r * sin_p))
        }
    }
}

fn check_z(plan: &InversionPlan, alpha: f64, z: Complex64) -> Result<()> {
    if !SectorPair::contains_open(alpha, z) {
        return Err(Error::OutOfSector(z));
    }
    if z.norm() < plan.z_min {
        return Err(Error::ZTooSmall { z_abs: z.norm(), z_min: plan.z_min });
    }
    Ok(())
}

fn invert_2d_over(
    t: &ConcatenatedLaplace,
    plan: &InversionPlan,
    spec1: &ContourSpec,
    spec2: &ContourSpec,
    z1: Complex64,
    z2: Complex64,
) -> Result<QuadResult> {
    plan.validate(t)?;
    let s = t.source();
    check_z(plan, s.sectors.alpha1, z1)?;
    check_z(plan, s.sectors.alpha2, z2)?;
    let form = s.separated().ok_or(Error::UnsupportedSource)?;

    let k1 = kernel_measure_bound(spec1, z1);
    let k2 = kernel_measure_bound(spec2, z2);

    let mut sum = Complex64::default();
    let mut err = 0.0f64;
    const MAX_TERMS: usize = 200;
    for k in 0..=MAX_TERMS {
        let Some((u, v)) = form.term(k) else {
            return Ok(QuadResult { value: sum, err_est: err });
        };
        let j1 = factor_contour_integral(&u, spec1, z1, &plan.cfg)?;
        let j2 = factor_contour_integral(&v, spec2, z2, &plan.cfg)?;
        sum += j1.value * j2.value;
        err += j1.value.norm() * j2.err_est
            + j2.value.norm() * j1.err_est
            + j1.err_est * j2.err_est;

        // certified tail of the separated series over both contours
        if let Some((u_next, v_next)) = form.term(k + 1) {
            let b1 = factor_sup_on_contour(&u_next, spec1)?;
            let b2 = factor_sup_on_contour(&v_next, spec2)?;
            let head = b1 * k1 * b2 * k2;
            let ratio = series_tail_ratio(spec1, spec2);
            if ratio < 1.0 {
                let tail = head / (1.0 - ratio);
                let target = plan.cfg.abs_tol.max(0.5 * plan.cfg.rel_tol * sum.norm());
                if tail <= target {
                    return Ok(QuadResult { value: sum, err_est: err + tail });
                }
            }
        } else {
            return Ok(QuadResult { value: sum, err_est: err });
        }
    }
    Err(Error::BudgetExceeded { panels: MAX_TERMS, err_est: err })
}

/// Limit of the term-to-term ratio of the factor-transform bounds for the
/// monomial series: `1 / (4 |W1| |W2|)` with `W_j` the least-negative
/// exponent level on contour `j`.
fn series_tail_ratio(spec1: &ContourSpec, spec2: &ContourSpec) -> f64 {
    let worst = |spec: &ContourSpec| -> f64 {
        let lvl = spec.base().branch_level();
        match spec.lambda() {
            None => lvl,
            Some(l) => lvl.max(chord_best_level(l, 0.0, 0.0)),
        }
    };
    let w1 = worst(spec1);
    let w2 = worst(spec2);
    if w1 >= 0.0 || w2 >= 0.0 {
        return f64::INFINITY;
    }
    1.0 / (4.0 * w1.abs() * w2.abs())
}

/// Two-variable inversion over the plan's contours:
/// `int int m(omega1, omega2) e^{-omega1 z1 - omega2 z2} d omega2 d omega1`.
pub fn invert_2d(
    t: &ConcatenatedLaplace,
    plan: &InversionPlan,
    z1: Complex64,
    z2: Complex64,
) -> Result<QuadResult> {
    invert_2d_over(t, plan, &plan.contour1, &plan.contour2, z1, z2)
}

/// Deformed-contour inversion result with its a-priori growth bound.
#[derive(Debug, Clone, Copy)]
pub struct DeformedInversion {
    pub value: Complex64,
    pub err_est: f64,
    /// `k_delta(m) * B1(z1) * B2(z2)` assembled from the transform-boundedness
    /// estimate and the per-contour kernel bounds; dominates `|f(z1, z2)|`.
    pub apriori_bound: f64,
}

fn check_angle(theta: f64, z: Complex64) -> Result<()> {
    if (z.arg() - theta).abs() > 1e-9 * (1.0 + theta.abs()) {
        return Err(Error::AngleMismatch { arg_z: z.arg(), theta });
    }
    Ok(())
}

/// Uniform bound on `|m|` over the product of two deformed contours, from
/// the absolute-convergence estimate at the worst margin met along them.
pub fn transform_sup_on_lambdas(
    t: &ConcatenatedLaplace,
    lambda1: &LambdaContour,
    lambda2: &LambdaContour,
) -> f64 {
    let env = t.envelope();
    let min_margin = |l: &LambdaContour, a_plus: f64, a_minus: f64| -> f64 {
        let tail_p = -a_plus - l.base.branch_level();
        let tail_m = -a_minus - l.base.branch_level();
        // chord_best_level maximizes the pointwise better (lower) shifted
        // level; its negation is the worst margin along the chord
        let chord = -chord_best_level(l, a_plus, a_minus);
        tail_p.min(tail_m).min(chord)
    };
    let d1 = min_margin(lambda1, env.a1_plus, env.a1_minus);
    let d2 = min_margin(lambda2, env.a2_plus, env.a2_minus);
    let eps = (0.5 * d1.min(d2)).min(1.0);
    let four_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    env.scale / (four_pi_sq * (d1 - eps) * (d2 - eps))
}

/// Inversion over a pair of deformed contours, which must match the
/// evaluation directions `arg z_j`. Returns the value together with the
/// a-priori bound assembled from the auxiliary tail estimate.
pub fn invert_2d_deformed(
    t: &ConcatenatedLaplace,
    plan: &InversionPlan,
    lambda1: &LambdaContour,
    lambda2: &LambdaContour,
    z1: Complex64,
    z2: Complex64,
) -> Result<DeformedInversion> {
    check_angle(lambda1.theta, z1)?;
    check_angle(lambda2.theta, z2)?;
    let spec1 = ContourSpec::Lambda(*lambda1);
    let spec2 = ContourSpec::Lambda(*lambda2);
    let r = invert_2d_over(t, plan, &spec1, &spec2, z1, z2)?;
    let k_delta = transform_sup_on_lambdas(t, lambda1, lambda2);
    let bound = k_delta * lambda_tail_bound(lambda1, z1)? * lambda_tail_bound(lambda2, z2)?;
    Ok(DeformedInversion { value: r.value, err_est: r.err_est, apriori_bound: bound })
}

/// Closed-form bound on `int_Lambda e^{-Re(omega z)} |d omega|` for
/// `arg z = theta`: the chord contributes its length at the support level
/// exactly, and each tail contributes `1/(|z| sin(alpha -+ theta))` at the
/// same level.
pub fn lambda_tail_bound(lambda: &LambdaContour, z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroModulus);
    }
    check_angle(lambda.theta, z)?;
    let r = z.norm();
    let alpha = lambda.base.alpha;
    let theta = lambda.theta;
    let level = ((lambda.c_value + lambda.delta) * r).exp();
    Ok(level
        * (lambda.chord_length()
            + 1.0 / (r * (alpha - theta).sin())
            + 1.0 / (r * (alpha + theta).sin())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{catalog_lookup, make_exponential};
    use crate::geometry::build_lambda;
    use std::f64::consts::{E, FRAC_PI_4, FRAC_PI_8, PI};

    fn exp_transform() -> ConcatenatedLaplace {
        let sectors = SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (m, env) =
            make_exponential(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), sectors);
        ConcatenatedLaplace::new(m, env, QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn invert_1d_residue_oracle() {
        let g = GammaContour::with_default_vertex(FRAC_PI_4, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let transform = |w: Complex64| -> Result<Complex64> {
            Ok(Complex64::new(0.0, 1.0 / (2.0 * PI)) / (Complex64::new(1.0, 0.0) + w))
        };
        let growth = ContourGrowth::bounded(0.2);
        let r = invert_1d(transform, &g, Complex64::new(1.0, 0.0), growth, &cfg).unwrap();
        assert!((r.value - Complex64::new(E, 0.0)).norm() < 1e-8, "got {}", r.value);

        // z = 2 e^{i pi/8}: the residue gives e^z
        let z = Complex64::from_polar(2.0, FRAC_PI_8);
        let r2 = invert_1d(transform, &g, z, growth, &cfg).unwrap();
        assert!((r2.value - z.exp()).norm() < 1e-8 * z.exp().norm());
        // |e^z| = e^{2 cos(pi/8)} = 6.3455835...
        assert!((r2.value.norm() - 6.345_583_537_499_5).abs() < 1e-7);

        // z = 0 cannot be certified
        assert!(matches!(
            invert_1d(transform, &g, Complex64::default(), growth, &cfg),
            Err(Error::OutOfSector(_) | Error::ZTooSmall { .. })
        ));
    }

    #[test]
    fn invert_2d_exponential_roundtrip_spots() {
        let t = exp_transform();
        let plan = InversionPlan::for_source(&t).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let r = invert_2d(&t, &plan, one, one).unwrap();
        assert!(
            (r.value - Complex64::new(E * E, 0.0)).norm() < 1e-7,
            "got {} err {}",
            r.value,
            r.err_est
        );

        let z1 = Complex64::from_polar(2.0, FRAC_PI_8);
        let expect = (z1 + one).exp();
        let r2 = invert_2d(&t, &plan, z1, one).unwrap();
        assert!(
            (r2.value - expect).norm() < 1e-6 * expect.norm(),
            "got {} expected {}",
            r2.value,
            expect
        );
        // |f| = e^{1 + 2 cos(pi/8)} = 17.2490844...
        assert!((expect.norm() - 17.249_084_420_953_76).abs() < 1e-9);

        assert!(matches!(
            invert_2d(&t, &plan, one, Complex64::default()),
            Err(Error::OutOfSector(_) | Error::ZTooSmall { .. })
        ));
    }

    #[test]
    fn invert_2d_vertex_independence() {
        let t = exp_transform();
        let mut plan = InversionPlan::for_source(&t).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let base = invert_2d(&t, &plan, one, one).unwrap();
        for p_level in [-2.2f64, -3.5] {
            let g = GammaContour::new(p_level / FRAC_PI_4.cos(), FRAC_PI_4, 1.0).unwrap();
            plan.contour1 = ContourSpec::Gamma(g);
            plan.contour2 = plan.contour1;
            let r = invert_2d(&t, &plan, one, one).unwrap();
            assert!(
                (r.value - base.value).norm() <= 1e-8 * base.value.norm(),
                "vertex level {} drifts: {} vs {}",
                p_level,
                r.value,
                base.value
            );
        }
    }

    #[test]
    fn deformed_inversion_matches_and_bounds() {
        let t = exp_transform();
        let plan = InversionPlan::for_source(&t).unwrap();
        let gamma = *plan.contour1.base();
        let lam = build_lambda(&gamma, 0.0, 1.0, 0.1).unwrap();
        let z = Complex64::new(2.0, 0.0);
        let d = invert_2d_deformed(&t, &plan, &lam, &lam, z, z).unwrap();
        let e4 = (4.0f64).exp();
        assert!((d.value - Complex64::new(e4, 0.0)).norm() < 1e-6 * e4, "got {}", d.value);
        assert!(d.apriori_bound >= e4, "bound {} below |f| {}", d.apriori_bound, e4);

        let plain = invert_2d(&t, &plan, z, z).unwrap();
        assert!((d.value - plain.value).norm() <= 1e-6 * plain.value.norm());

        // mismatched direction errors out
        let z_off = Complex64::from_polar(2.0, FRAC_PI_8);
        assert!(matches!(
            invert_2d_deformed(&t, &plan, &lam, &lam, z_off, z),
            Err(Error::AngleMismatch { .. })
        ));
    }

    #[test]
    fn lambda_tail_bound_assembly() {
        let gamma = GammaContour::with_default_vertex(FRAC_PI_4, 1.0).unwrap();
        let lam = build_lambda(&gamma, 0.0, 1.0, 0.1).unwrap();
        let b = lambda_tail_bound(&lam, Complex64::new(1.0, 0.0)).unwrap();
        // chord 3.4568542 plus two tails of 1/sin(pi/4), times e^{1.1}
        assert!((b - 18.882_028_755_430_86).abs() < 1e-9, "got {b}");
        assert!(matches!(
            lambda_tail_bound(&lam, Complex64::default()),
            Err(Error::ZeroModulus)
        ));
        // direct quadrature of the left side stays below (equals) the bound
        let cfg = QuadratureConfig::default();
        let z = Complex64::new(1.0, 0.0);
        let q = crate::quadrature::integrate_contour_arclength(
            |w: Complex64| Complex64::new((-(w * z).re).exp(), 0.0),
            ContourRef::Lambda(&lam),
            ContourTail::new(-FRAC_PI_4.sin(), (2.83f64).exp()),
            &cfg,
        )
        .unwrap();
        assert!(
            q.value.re <= b * (1.0 + 1e-9) && q.value.re > 0.9 * b,
            "integral {} vs bound {}",
            q.value.re,
            b
        );
    }

    #[test]
    fn cos_sqrt_roundtrip_spot() {
        let sectors = SectorPair::new(FRAC_PI_4, FRAC_PI_4).unwrap();
        let (m, env) = catalog_lookup("cossqrt", sectors).unwrap();
        let t = ConcatenatedLaplace::new(m, env, QuadratureConfig::default()).unwrap();
        let plan = InversionPlan::for_source(&t).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let r = invert_2d(&t, &plan, one, one).unwrap();
        let expect = 1.0f64.cos();
        assert!(
            (r.value - Complex64::new(expect, 0.0)).norm() <= 1e-6,
            "got {} expected {} err {}",
            r.value,
            expect,
            r.err_est
        );
    }
}
