//! Sectors, half-plane domains and the integration contours.
//!
//! A sector of half-angle `alpha` in the right half plane pairs with two
//! half-plane domains `Re(omega e^{+-i alpha}) < -A` on the transform side.
//! The inversion contour is a two-ray wedge with apex on the negative real
//! axis; its deformed variant replaces the apex region with a chord lying on
//! a support line of the evaluation direction.

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pair of sector half-angles, each in the open interval (0, pi/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPair {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl SectorPair {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for a in [alpha1, alpha2] {
            if !(a > 0.0 && a < std::f64::consts::FRAC_PI_2) || !a.is_finite() {
                return Err(Error::InvalidSectorAngle(a));
            }
        }
        Ok(Self { alpha1, alpha2 })
    }

    /// Is `z` in the closed sector of half-angle `alpha` (origin included)?
    pub fn contains_closed(alpha: f64, z: Complex64) -> bool {
        if z == Complex64::new(0.0, 0.0) {
            return true;
        }
        z.arg().abs() <= alpha + 1e-15
    }

    /// Is `z` in the open sector of half-angle `alpha` (origin excluded)?
    pub fn contains_open(alpha: f64, z: Complex64) -> bool {
        z != Complex64::new(0.0, 0.0) && z.arg().abs() < alpha
    }
}

/// Half plane `{ omega : Re(omega e^{i direction}) < -offset }`.
///
/// `direction` is the signed boundary-ray angle (`+alpha` or `-alpha`) and
/// `offset` the growth slope it guards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneDomain {
    pub direction: f64,
    pub offset: f64,
}

impl HalfPlaneDomain {
    pub fn new(direction: f64, offset: f64) -> Self {
        Self { direction, offset }
    }

    /// Strict membership test `Re(omega e^{i direction}) < -offset`.
    pub fn contains(&self, omega: Complex64) -> bool {
        (omega * Complex64::from_polar(1.0, self.direction)).re < -self.offset
    }

    /// Signed distance to the boundary: positive inside the half plane.
    pub fn margin(&self, omega: Complex64) -> f64 {
        -self.offset - (omega * Complex64::from_polar(1.0, self.direction)).re
    }
}

/// Strict membership test, free-function form.
pub fn omega_contains(domain: &HalfPlaneDomain, omega: Complex64) -> bool {
    domain.contains(omega)
}

/// Two-ray inversion contour with apex `vertex` on the real axis.
///
/// Parametrization: `gamma(t) = vertex - i e^{i alpha} |t|` for `t <= 0` and
/// `vertex + i e^{-i alpha} |t|` for `t > 0`. The apex must satisfy
/// `vertex * cos(alpha) < -type_bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaContour {
    pub vertex: f64,
    pub alpha: f64,
    pub type_bound: f64,
}

impl GammaContour {
    pub fn new(vertex: f64, alpha: f64, type_bound: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidSectorAngle(alpha));
        }
        if type_bound < 0.0 || !type_bound.is_finite() {
            return Err(Error::InvalidInput(format!(
                "type bound {type_bound} must be finite and >= 0"
            )));
        }
        if !(vertex * alpha.cos() < -type_bound) {
            return Err(Error::InvalidInput(format!(
                "vertex {vertex} violates p cos(alpha) < -h: {} >= {}",
                vertex * alpha.cos(),
                -type_bound
            )));
        }
        Ok(Self { vertex, alpha, type_bound })
    }

    /// Default apex `p = -(h + 1) / cos(alpha)`, one unit of margin.
    pub fn with_default_vertex(alpha: f64, type_bound: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidSectorAngle(alpha));
        }
        Self::new(-(type_bound + 1.0) / alpha.cos(), alpha, type_bound)
    }

    /// Contour point at parameter `t`.
    pub fn point(&self, t: f64) -> Complex64 {
        let p = Complex64::new(self.vertex, 0.0);
        if t <= 0.0 {
            p - I * Complex64::from_polar(1.0, self.alpha) * t.abs()
        } else {
            p + I * Complex64::from_polar(1.0, -self.alpha) * t.abs()
        }
    }

    /// Derivative `d gamma / dt`; unit modulus away from the apex.
    pub fn derivative(&self, t: f64) -> Complex64 {
        if t <= 0.0 {
            I * Complex64::from_polar(1.0, self.alpha)
        } else {
            I * Complex64::from_polar(1.0, -self.alpha)
        }
    }

    /// `Re(gamma(t) e^{i b alpha})` is constant along the branch matching the
    /// sign `b`; this is that constant, `p cos(alpha)`.
    pub fn branch_level(&self) -> f64 {
        self.vertex * self.alpha.cos()
    }
}

/// Contour point at parameter `t`, free-function form.
pub fn gamma_point(contour: &GammaContour, t: f64) -> Complex64 {
    contour.point(t)
}

/// Corner of the complement wedge: the unique `q = x + i y` with
/// `Re(q e^{i alpha}) = -a_plus` and `Re(q e^{-i alpha}) = -a_minus`.
pub fn corner_point(alpha: f64, a_plus: f64, a_minus: f64) -> Result<Complex64> {
    let (s, c) = alpha.sin_cos();
    if s.abs() < 1e-12 || c.abs() < 1e-12 {
        return Err(Error::DegenerateAngle(alpha));
    }
    Ok(Complex64::new(
        -(a_plus + a_minus) / (2.0 * c),
        (a_plus - a_minus) / (2.0 * s),
    ))
}

/// Support value `-Re(q e^{i theta})` of the point `q` in direction `theta`.
pub fn support_value(q: Complex64, theta: f64) -> f64 {
    -(q * Complex64::from_polar(1.0, theta)).re
}

/// Deformed contour: the two tails of `base` beyond the chord parameters,
/// joined by the straight chord on the support line
/// `Re(omega e^{i theta}) = -(c_value + delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaContour {
    pub base: GammaContour,
    pub theta: f64,
    pub c_value: f64,
    pub delta: f64,
    pub t_minus: f64,
    pub t_plus: f64,
}

impl LambdaContour {
    /// Lower chord endpoint `s_- = gamma(t_-)`.
    pub fn s_minus(&self) -> Complex64 {
        self.base.point(self.t_minus)
    }

    /// Upper chord endpoint `s_+ = gamma(t_+)`.
    pub fn s_plus(&self) -> Complex64 {
        self.base.point(self.t_plus)
    }

    /// Length of the chord segment.
    pub fn chord_length(&self) -> f64 {
        (self.s_plus() - self.s_minus()).norm()
    }

    /// Chord point at fraction `u` in [0, 1], traversed from `s_-` to `s_+`
    /// so that orientation is continuous with increasing `t`.
    pub fn chord_point(&self, u: f64) -> Complex64 {
        let sm = self.s_minus();
        sm + (self.s_plus() - sm) * u
    }

    /// Derivative of the chord parametrization (constant).
    pub fn chord_derivative(&self) -> Complex64 {
        self.s_plus() - self.s_minus()
    }
}

/// Build the deformed contour for evaluation direction `theta` at support
/// level `c_value + delta`.
///
/// The chord endpoints solve `Re(gamma(t) e^{i theta}) = -(c_value + delta)`
/// on the two branches; both must lie strictly away from the apex.
pub fn build_lambda(
    base: &GammaContour,
    theta: f64,
    c_value: f64,
    delta: f64,
) -> Result<LambdaContour> {
    if theta.abs() >= base.alpha {
        return Err(Error::RayOutsideSector { theta, alpha: base.alpha });
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta {delta} must be > 0")));
    }
    let level = -(c_value + delta);
    // Re(gamma(t) e^{i theta}) = p cos(theta) + t sin(alpha - theta) on the
    // upper branch and p cos(theta) - t sin(alpha + theta) on the lower one.
    let base_re = base.vertex * theta.cos();
    let t_plus = (level - base_re) / (base.alpha - theta).sin();
    let t_minus = -(level - base_re) / (base.alpha + theta).sin();
    if !(t_plus > 0.0) || !(t_minus < 0.0) {
        return Err(Error::NoIntersection { level });
    }
    Ok(LambdaContour { base: *base, theta, c_value, delta, t_minus, t_plus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQRT2_OVER_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn half_plane_membership() {
        let dom = HalfPlaneDomain::new(std::f64::consts::FRAC_PI_4, SQRT2_OVER_2);
        // Re(-3 e^{i pi/4}) = -2.1213 < -0.7071
        assert!(dom.contains(Complex64::new(-3.0, 0.0)));
        // boundary is excluded
        let dom0 = HalfPlaneDomain::new(std::f64::consts::FRAC_PI_4, 0.0);
        assert!(!dom0.contains(Complex64::new(0.0, 0.0)));
        // Re((-1-i) e^{-i pi/4}) = -sqrt(2) < -1, while Re((-1+i) e^{-i pi/4}) = 0
        let dom1 = HalfPlaneDomain::new(-std::f64::consts::FRAC_PI_4, 1.0);
        assert!(dom1.contains(Complex64::new(-1.0, -1.0)));
        assert!(!dom1.contains(Complex64::new(-1.0, 1.0)));
    }

    #[test]
    fn gamma_parametrization() {
        let p = -2.0 * std::f64::consts::SQRT_2;
        let g = GammaContour::new(p, std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        let apex = g.point(0.0);
        assert_abs_diff_eq!(apex.re, p, epsilon = 1e-15);
        assert_abs_diff_eq!(apex.im, 0.0, epsilon = 1e-15);
        let up = g.point(1.0);
        assert_abs_diff_eq!(up.re, -2.121_320_343_559_642_6, epsilon = 1e-12);
        assert_abs_diff_eq!(up.im, 0.707_106_781_186_547_5, epsilon = 1e-12);
        // t > 0 branch equals p + t sin(alpha) + i t cos(alpha)
        let t = 1.7;
        let expect = Complex64::new(
            p + t * std::f64::consts::FRAC_PI_4.sin(),
            t * std::f64::consts::FRAC_PI_4.cos(),
        );
        assert!((g.point(t) - expect).norm() < 1e-14);
        // conjugate symmetry
        let down = g.point(-1.0);
        assert!((down - up.conj()).norm() < 1e-15);
    }

    #[test]
    fn gamma_branch_level_is_constant() {
        let g = GammaContour::new(-3.0, 0.9, 1.5).unwrap();
        for t in [0.0, 0.3, 2.0, 37.0] {
            let lv = (g.point(t) * Complex64::from_polar(1.0, g.alpha)).re;
            assert_abs_diff_eq!(lv, g.branch_level(), epsilon = 1e-12);
            let lv_m = (g.point(-t) * Complex64::from_polar(1.0, -g.alpha)).re;
            assert_abs_diff_eq!(lv_m, g.branch_level(), epsilon = 1e-12);
        }
    }

    #[test]
    fn gamma_vertex_constraint() {
        assert!(GammaContour::new(-1.0, std::f64::consts::FRAC_PI_4, 1.0).is_err());
        let g = GammaContour::with_default_vertex(std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        assert_abs_diff_eq!(g.vertex, -2.0 * std::f64::consts::SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(g.branch_level(), -2.0, epsilon = 1e-14);
    }

    #[test]
    fn corner_point_examples() {
        let q = corner_point(std::f64::consts::FRAC_PI_4, SQRT2_OVER_2, SQRT2_OVER_2).unwrap();
        assert!((q - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        let q0 = corner_point(std::f64::consts::FRAC_PI_4, 0.0, 0.0).unwrap();
        assert!(q0.norm() < 1e-15);
        let q2 = corner_point(std::f64::consts::FRAC_PI_3, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(q2.re, -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q2.im, -0.577_350_269_189_625_8, epsilon = 1e-12);
        // both defining equations hold
        assert_abs_diff_eq!(
            (q2 * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3)).re,
            -1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            (q2 * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_3)).re,
            -2.0,
            epsilon = 1e-12
        );
        assert!(corner_point(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn support_value_examples() {
        assert_abs_diff_eq!(support_value(Complex64::new(-1.0, 0.0), 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            support_value(Complex64::new(-1.0, 0.0), std::f64::consts::FRAC_PI_4),
            SQRT2_OVER_2,
            epsilon = 1e-15
        );
        let q = corner_point(std::f64::consts::FRAC_PI_3, 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(
            support_value(q, std::f64::consts::FRAC_PI_6),
            2.309_401_076_758_503,
            epsilon = 1e-12
        );
    }

    #[test]
    fn lambda_chord_theta_zero() {
        let g = GammaContour::with_default_vertex(std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        let lam = build_lambda(&g, 0.0, 1.0, 0.1).unwrap();
        assert_abs_diff_eq!(lam.t_plus, 2.444_365_081_389_595_4, epsilon = 1e-12);
        let sp = lam.s_plus();
        assert_abs_diff_eq!(sp.re, -1.1, epsilon = 1e-12);
        assert_abs_diff_eq!(sp.im, 1.728_427_124_746_190_1, epsilon = 1e-12);
        assert!((lam.s_minus() - sp.conj()).norm() < 1e-12);
        assert_abs_diff_eq!(lam.chord_length(), 2.0 * 1.728_427_124_746_190_1, epsilon = 1e-12);
    }

    #[test]
    fn lambda_chord_on_support_line() {
        let g = GammaContour::with_default_vertex(std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        let th = std::f64::consts::FRAC_PI_8;
        let lam = build_lambda(&g, th, 1.0, 0.1).unwrap();
        assert!(lam.t_minus < 0.0 && lam.t_plus > 0.0);
        let rot = Complex64::from_polar(1.0, th);
        for u in [0.0, 0.25, 0.5, 0.75, 1.0] {
            assert_abs_diff_eq!((lam.chord_point(u) * rot).re, -1.1, epsilon = 1e-12);
        }
    }

    #[test]
    fn lambda_rejects_degenerate_cases() {
        let g = GammaContour::with_default_vertex(std::f64::consts::FRAC_PI_4, 1.0).unwrap();
        // support line through the apex exactly: C + delta = -p cos(0)
        let c = -g.vertex - 0.1;
        assert!(matches!(build_lambda(&g, 0.0, c, 0.1), Err(Error::NoIntersection { .. })));
        // support line on the wrong side of the apex
        assert!(build_lambda(&g, 0.0, -g.vertex + 1.0, 0.1).is_err());
        // |theta| >= alpha
        assert!(build_lambda(&g, std::f64::consts::FRAC_PI_4, 1.0, 0.1).is_err());
        // delta must be positive
        assert!(build_lambda(&g, 0.0, 1.0, 0.0).is_err());
    }
}
