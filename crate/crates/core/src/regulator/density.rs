//! Regulator integrand on the normalized nodal fiber.
//!
//! The closed (1,1)-form dx/u wedge conj(dy/v) on the product of the two
//! elliptic curves pulls back along the fiber parametrization to a density
//! F(gamma) d gamma wedge d conj(gamma). `density_general` and
//! `density_diagonal` are the transcribed closed forms (the diagonal one
//! specializes beta = alpha); `pullback_oracle` rebuilds the same
//! coefficient numerically through the chain rule and the square roots on
//! the two curves, and is the independent check of the transcription.
//!
//! All fourteen poles of the density are integrable of type 1/|z|; their
//! positions are produced by `pole_registry` from the denominator factors
//! (quadratics in gamma^2, the quartic solved as a quadratic in gamma^2).

use num_complex::Complex64;

use crate::kummer::{fiber_point, KummerModuli};
use crate::numerics::{SingularityKind, SingularityRegistry};

#[derive(Debug, Clone, thiserror::Error)]
pub enum DensityError {
    #[error("evaluation at a registered pole (gamma = {0})")]
    AtPole(Complex64),
    #[error("oracle undefined at gamma = {0}: {1}")]
    OracleUndefined(Complex64, &'static str),
}

pub type Result<T> = std::result::Result<T, DensityError>;

const POLE_EPS: f64 = 1e-13;

/// Density coefficient F with i1* omega_K = F d gamma wedge d conj(gamma),
/// for general (alpha, beta).
pub fn density_general(gamma: Complex64, m: &KummerModuli) -> Result<Complex64> {
    let (a, b) = (m.alpha, m.beta);
    let g2 = gamma * gamma;
    let delta = (a * b - a) / (b - a * b);

    let pref = -4.0 * (a * b - 1.0).norm() / (b.norm() * (1.0 - a).norm());
    let n1 = (a * b * b - b * b - b) * g2 * g2
        + 2.0 * b * g2
        + (a * a * b * b - a * a * b + a - 2.0 * a * b);
    let n2 = (a * a * b * b - a * b * b + b - 2.0 * a * b) * g2 * g2
        + 2.0 * a * g2
        + (a * a * b - a * a - a);

    let d1 = (g2 - a).norm();
    let d2 = (1.0 - b * g2).norm();
    let d3 = (g2 - delta).norm();
    let d4 = (g2 - (1.0 + a - a * b)).norm();
    let d5 = ((1.0 + b - a * b) * g2 - 1.0).norm();
    let d6 = (b * g2 * g2 + (a * a * b * b - 3.0 * a * b) * g2 + a).norm();
    let den = d1 * d2 * d3 * d4 * d5 * d6;
    if den <= POLE_EPS * POLE_EPS * (1.0 + g2.norm().powi(7)) {
        return Err(DensityError::AtPole(gamma));
    }
    Ok(pref * n1 * n2.conj() * gamma / den)
}

/// Density coefficient on the diagonal locus beta = alpha.
pub fn density_diagonal(gamma: Complex64, alpha: Complex64) -> Result<Complex64> {
    let a = alpha;
    let g2 = gamma * gamma;

    let pref = -4.0 * (a + 1.0).norm();
    let n1 = (a * a - a - 1.0) * g2 * g2
        + 2.0 * g2
        + (a * a * a - a * a - 2.0 * a + 1.0);
    let n2 = (a * a * a - a * a - 2.0 * a + 1.0) * g2 * g2
        + 2.0 * g2
        + (a * a - a - 1.0);

    let c = 1.0 + a - a * a;
    let d1 = (g2 - a).norm();
    let d2 = (1.0 - a * g2).norm();
    let d3 = (g2 + 1.0).norm();
    let d4 = (g2 - c).norm();
    let d5 = (c * g2 - 1.0).norm();
    let d6 = (g2 * g2 + (a * a * a - 3.0 * a) * g2 + 1.0).norm();
    let den = d1 * d2 * d3 * d4 * d5 * d6;
    if den <= POLE_EPS * POLE_EPS * (1.0 + g2.norm().powi(7)) {
        return Err(DensityError::AtPole(gamma));
    }
    Ok(pref * n1 * n2.conj() * gamma / den)
}

/// Real density (w.r.t. dx dy) of the real part of the (1,1)-form:
/// Re part of F d gamma wedge d conj(gamma) with
/// d gamma wedge d conj(gamma) = -2i dx dy.
#[inline]
pub fn real_part_density(f: Complex64) -> f64 {
    2.0 * f.im
}

/// Imaginary-part density under the same convention.
#[inline]
pub fn imag_part_density(f: Complex64) -> f64 {
    -2.0 * f.re
}

/// log |(gamma + i) / (gamma - i)|, the log of the normalization
/// coordinate on the diagonal locus where sqrt(delta) = i.
#[inline]
pub fn log_abs_zeta(gamma: Complex64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    0.5 * ((gamma + i).norm_sqr() / (gamma - i).norm_sqr()).ln()
}

fn central_derivative(
    f: &dyn Fn(Complex64) -> Option<Complex64>,
    z: Complex64,
    scale: f64,
) -> Option<Complex64> {
    // 5-point central difference along the real direction with two
    // Richardson levels; the maps are holomorphic so this is the complex
    // derivative. `scale` shrinks the step near blow-up points of the map.
    let h0 = 1e-3 * (1.0 + z.norm()) * scale;
    let d = |h: f64| -> Option<Complex64> {
        let fm2 = f(z - 2.0 * h)?;
        let fm1 = f(z - h)?;
        let fp1 = f(z + h)?;
        let fp2 = f(z + 2.0 * h)?;
        Some((-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h))
    };
    let d0 = d(h0)?;
    let d1 = d(h0 / 2.0)?;
    let d2 = d(h0 / 4.0)?;
    let w0 = (16.0 * d1 - d0) / 15.0;
    let w1 = (16.0 * d2 - d1) / 15.0;
    Some((64.0 * w1 - w0) / 63.0)
}

/// Numerical pullback of dx/u wedge conj(dy/v) through the fiber
/// parametrization: differentiates x(gamma), y(gamma), takes the principal
/// square root u on the first curve and v = z x y / u (consistent with
/// z = u v / (x y)), and returns the coefficient of
/// d gamma wedge d conj(gamma).
pub fn pullback_oracle(gamma: Complex64, m: &KummerModuli) -> Result<Complex64> {
    let xy = |g: Complex64| -> Option<(Complex64, Complex64, Complex64)> {
        let p = fiber_point(g, m);
        Some((p.x.value()?, p.y.value()?, p.z.value()?))
    };
    let (x, y, z) =
        xy(gamma).ok_or(DensityError::OracleUndefined(gamma, "point at infinity"))?;

    // coordinates blow up over the conic's points at infinity; shrink the
    // stencil so it stays well inside the pole-free neighborhood
    let scale = 1.0 / (1.0 + 0.5 * (x.norm() + y.norm()));
    let xp = central_derivative(&|g| xy(g).map(|t| t.0), gamma, scale)
        .ok_or(DensityError::OracleUndefined(gamma, "x stencil hits infinity"))?;
    let yp = central_derivative(&|g| xy(g).map(|t| t.1), gamma, scale)
        .ok_or(DensityError::OracleUndefined(gamma, "y stencil hits infinity"))?;

    let u2 = x * (x - 1.0) * (x - m.alpha);
    if u2.norm() < 1e-20 {
        return Err(DensityError::OracleUndefined(
            gamma,
            "branch point of the first curve",
        ));
    }
    let u = u2.sqrt();
    if x.norm() < 1e-20 || y.norm() < 1e-20 || z.norm() < 1e-20 {
        return Err(DensityError::OracleUndefined(gamma, "degenerate coordinates"));
    }
    let v = z * x * y / u;
    Ok(xp * yp.conj() / (u * v.conj()))
}

/// Relative residual of u^2 v^2 = z^2 x^2 y^2 with u, v the square roots
/// on the two curves; an algebraic restatement of the quartic equation.
pub fn square_root_consistency(gamma: Complex64, m: &KummerModuli) -> Option<f64> {
    let p = fiber_point(gamma, m);
    let (x, y, z) = (p.x.value()?, p.y.value()?, p.z.value()?);
    let u2 = x * (x - 1.0) * (x - m.alpha);
    let v2 = y * (y - 1.0) * (y - m.beta);
    let lhs = u2 * v2;
    let rhs = z * z * x * x * y * y;
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Some((lhs - rhs).norm() / scale)
}

fn push_pm_sqrt(reg: &mut SingularityRegistry, g2: Complex64, kind: SingularityKind) {
    let r = g2.sqrt();
    reg.push(r, kind);
    reg.push(-r, kind);
}

/// The fourteen pole positions of the general density plus the two
/// logarithmic points at +-sqrt(delta), from root-finding the denominator
/// factors.
pub fn pole_registry(m: &KummerModuli) -> SingularityRegistry {
    let (a, b) = (m.alpha, m.beta);
    let mut reg = SingularityRegistry::new();
    let delta = (a * b - a) / (b - a * b);
    push_pm_sqrt(&mut reg, a, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, 1.0 / b, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, delta, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, 1.0 + a - a * b, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, 1.0 / (1.0 + b - a * b), SingularityKind::InverseModulus);
    // beta u^2 + (a^2 b^2 - 3 a b) u + alpha = 0 in u = gamma^2
    let bb = a * a * b * b - 3.0 * a * b;
    let disc = (bb * bb - 4.0 * a * b).sqrt();
    push_pm_sqrt(&mut reg, (-bb + disc) / (2.0 * b), SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, (-bb - disc) / (2.0 * b), SingularityKind::InverseModulus);
    // the normalization coordinate contributes log weights at +-sqrt(delta)
    push_pm_sqrt(&mut reg, delta, SingularityKind::Logarithmic);
    reg
}

/// Pole registry on the diagonal locus (delta = -1, log points at +-i).
pub fn diagonal_registry(alpha: Complex64) -> SingularityRegistry {
    let a = alpha;
    let mut reg = SingularityRegistry::new();
    let c = 1.0 + a - a * a;
    push_pm_sqrt(&mut reg, a, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, 1.0 / a, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, Complex64::new(-1.0, 0.0), SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, c, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, 1.0 / c, SingularityKind::InverseModulus);
    let bb = a * a * a - 3.0 * a;
    let disc = (bb * bb - 4.0).sqrt();
    push_pm_sqrt(&mut reg, (-bb + disc) / 2.0, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, (-bb - disc) / 2.0, SingularityKind::InverseModulus);
    push_pm_sqrt(&mut reg, Complex64::new(-1.0, 0.0), SingularityKind::Logarithmic);
    reg
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_specializes_general() {
        for alpha in [c(0.5, 0.0), c(0.3, 0.2), c(1.7, -0.4)] {
            let m = KummerModuli::new(alpha, alpha).unwrap();
            for g in [c(0.7, 0.4), c(-1.3, 0.9), c(2.0, -0.5)] {
                let fg = density_general(g, &m).unwrap();
                let fd = density_diagonal(g, alpha).unwrap();
                assert!(
                    (fg - fd).norm() <= 1e-12 * fd.norm(),
                    "general {fg} vs diagonal {fd} at alpha {alpha} gamma {g}"
                );
            }
        }
    }

    #[test]
    fn alpha_one_closed_form() {
        // F = -8 gamma / (|g^2-1|^2 |g^2+1|) at alpha = 1
        for g in [c(0.4, 0.7), c(-1.1, 0.3), c(0.2, -1.6)] {
            let f = density_diagonal(g, c(1.0, 0.0)).unwrap();
            let g2 = g * g;
            let want = -8.0 * g / ((g2 - 1.0).norm_sqr() * (g2 + 1.0).norm());
            assert!(
                (f - want).norm() <= 1e-12 * want.norm(),
                "got {f}, want {want} at {g}"
            );
        }
    }

    #[test]
    fn real_measure_conversion_at_alpha_one() {
        // -2i F dx dy matches 16 r (i cos t - sin t) / (...) dx dy
        let g = c(0.8, 0.33);
        let f = density_diagonal(g, c(1.0, 0.0)).unwrap();
        let form = Complex64::new(0.0, -2.0) * f;
        let (r, t) = (g.norm(), g.arg());
        let g2 = g * g;
        let den = (g2 - 1.0).norm_sqr() * (g2 + 1.0).norm();
        let want = 16.0 * r * Complex64::new(-t.sin(), t.cos()) / den;
        assert!((form - want).norm() < 1e-12 * want.norm());
        // and the Re-part density is -16 r sin(theta) / den
        assert!(
            (real_part_density(f) - (-16.0 * r * t.sin() / den)).abs()
                < 1e-12 * (16.0 * r / den)
        );
    }

    #[test]
    fn conversion_conventions() {
        // purely real F has vanishing Re-part density; F = i gives 2
        assert_eq!(real_part_density(c(3.5, 0.0)), 0.0);
        assert_eq!(real_part_density(c(0.0, 1.0)), 2.0);
        assert_eq!(imag_part_density(c(1.0, 0.0)), -2.0);
    }

    #[test]
    fn oracle_matches_density_modulus() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let cases = [
            KummerModuli::new(c(0.4, 0.1), c(0.7, 0.0)).unwrap(),
            KummerModuli::new(c(0.3, 0.0), c(0.6, 0.0)).unwrap(),
            KummerModuli::new(c(0.5, 0.0), c(0.5, 0.0)).unwrap(),
        ];
        for m in &cases {
            let mut tested = 0;
            while tested < 60 {
                let g = c(rng.gen_range(-1.8..1.8), rng.gen_range(-1.8..1.8));
                let Ok(oracle) = pullback_oracle(g, m) else {
                    continue;
                };
                let Ok(f) = density_general(g, m) else {
                    continue;
                };
                if !oracle.is_finite() || !f.is_finite() || f.norm() < 1e-8 || f.norm() > 1e8 {
                    continue;
                }
                let rel = (oracle.norm() - f.norm()).abs() / f.norm();
                assert!(
                    rel < 1e-8,
                    "modulus mismatch {rel:.3e} at gamma {g} for alpha {} beta {}",
                    m.alpha,
                    m.beta
                );
                tested += 1;
            }
        }
    }

    #[test]
    fn oracle_square_root_consistency() {
        let m = KummerModuli::new(c(0.3, 0.0), c(0.6, 0.0)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if let Some(r) = square_root_consistency(g, &m) {
                if r.is_finite() {
                    assert!(r < 1e-10, "u^2 v^2 residual {r} at {g}");
                }
            }
        }
    }

    #[test]
    fn oracle_finite_at_generic_point() {
        let m = KummerModuli::new(c(0.3, 0.0), c(0.6, 0.0)).unwrap();
        let f = pullback_oracle(c(1.0, 1.0), &m).unwrap();
        assert!(f.is_finite() && f.norm() > 0.0);
    }

    #[test]
    fn density_decay_at_infinity() {
        // |F| = O(|gamma|^-5): log-log slope over |gamma| in 1e2..1e4
        let m = KummerModuli::new(c(0.4, 0.1), c(0.7, 0.0)).unwrap();
        let dir = c(0.6, 0.8);
        let f1 = density_general(dir * 1e2, &m).unwrap().norm();
        let f2 = density_general(dir * 1e4, &m).unwrap().norm();
        let slope = (f2.ln() - f1.ln()) / (1e4f64.ln() - 1e2f64.ln());
        assert!((slope + 5.0).abs() < 0.05, "decay slope {slope}");
    }

    #[test]
    fn registry_counts_fourteen_poles() {
        let m = KummerModuli::new(c(0.4, 0.1), c(0.7, 0.0)).unwrap();
        let reg = pole_registry(&m);
        let poles: Vec<_> = reg
            .entries()
            .iter()
            .filter(|s| s.kind == SingularityKind::InverseModulus)
            .collect();
        assert_eq!(poles.len(), 14);
        // the density blows up approaching every registered pole
        for p in poles {
            let near = p.location + c(1e-9, 1e-9);
            let f = density_general(near, &m).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            let far = density_general(p.location + c(0.05, 0.04), &m)
                .map(|v| v.norm())
                .unwrap_or(0.0);
            assert!(
                f > 50.0 * far.max(1e-6),
                "density not singular near registered pole {} ({} vs {})",
                p.location,
                f,
                far
            );
        }
        let logs: Vec<_> = reg
            .entries()
            .iter()
            .filter(|s| s.kind == SingularityKind::Logarithmic)
            .collect();
        assert_eq!(logs.len(), 2);
    }

    #[test]
    fn log_abs_zeta_vanishes_on_real_axis() {
        for x in [-2.0, -0.3, 0.0, 1.7] {
            assert!(log_abs_zeta(c(x, 0.0)).abs() < 1e-15);
        }
        // odd under conjugation
        let g = c(0.4, 0.9);
        assert!((log_abs_zeta(g) + log_abs_zeta(g.conj())).abs() < 1e-15);
    }
}
