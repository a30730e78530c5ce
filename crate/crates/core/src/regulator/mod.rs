//! Real-regulator integrals of the nodal-fiber cycle on the diagonal
//! locus.
//!
//! psi(alpha) pairs log of the normalization coordinate against the real
//! part of the pulled-back (1,1)-form over the whole sphere; eta(alpha)
//! pairs against the imaginary part and vanishes identically on the real
//! diagonal. The limit of psi at the degeneration alpha -> 1 is computed
//! from its own closed-form integrand, and the normalized variant divides
//! by the lattice area of the first curve obtained from AGM periods.

pub mod appendix;
pub mod density;

use num_complex::Complex64;

use crate::numerics::{
    agm, integrate_sphere, integrate_sphere_sector, Cubature2dOptions, SingularityKind,
    SingularityRegistry,
};
use density::{
    density_diagonal, density_general, diagonal_registry, imag_part_density, log_abs_zeta,
    real_part_density,
};

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("alpha = {0} is outside the domain of the diagonal family")]
    ExcludedAlpha(f64),
    #[error("lattice area is defined for real alpha away from 0 and 1, got {0}")]
    AreaDomain(f64),
    #[error(transparent)]
    Numerics(#[from] crate::numerics::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Result of the regulator pairing at one diagonal parameter.
#[derive(Debug, Clone, Copy)]
pub struct PsiResult {
    pub alpha: f64,
    pub psi: f64,
    pub eta: f64,
    /// psi divided by the lattice area of the first curve, when the area
    /// is defined (real alpha away from 0 and 1).
    pub psi_normalized: Option<f64>,
    pub err_abs: f64,
    pub evals: u64,
    pub converged: bool,
    /// Within 1e-3 of a degenerate parameter {0, 1, 2, -1}; the error
    /// estimate is inflated accordingly.
    pub near_degenerate: bool,
}

const EXCLUDED: [f64; 4] = [0.0, 1.0, -1.0, 2.0];

fn excluded(alpha: f64) -> bool {
    EXCLUDED.iter().any(|e| (alpha - e).abs() < 1e-12)
}

fn near_degenerate(alpha: f64) -> bool {
    EXCLUDED.iter().any(|e| (alpha - e).abs() < 1e-3)
}

/// psi integrand: log|zeta| times the Re-part density of the diagonal
/// form.
fn psi_integrand(gamma: Complex64, alpha: Complex64) -> f64 {
    match density_diagonal(gamma, alpha) {
        Ok(f) => log_abs_zeta(gamma) * real_part_density(f),
        Err(_) => f64::NAN,
    }
}

fn eta_integrand(gamma: Complex64, alpha: Complex64) -> f64 {
    match density_diagonal(gamma, alpha) {
        Ok(f) => log_abs_zeta(gamma) * imag_part_density(f),
        Err(_) => f64::NAN,
    }
}

/// The regulator pairing psi(alpha) and eta(alpha) over the sphere, with
/// the normalized value filled in for real alpha in the area domain.
pub fn psi(alpha: f64, rel_tol: f64) -> Result<PsiResult> {
    if excluded(alpha) || !alpha.is_finite() {
        return Err(Error::ExcludedAlpha(alpha));
    }
    let a = Complex64::new(alpha, 0.0);
    let reg = diagonal_registry(a);
    // psi values on the diagonal are of size 1..1e2 except at isolated
    // zeros (the rank-20 point alpha = 1/2); the absolute floor keeps the
    // refinement from grinding on an exact zero
    let opt = Cubature2dOptions {
        rel_tol,
        abs_tol: 2e-6,
        ..Default::default()
    };
    let psi_q = integrate_sphere(|g| psi_integrand(g, a), &reg, &opt);

    // eta cancels globally; control it in absolute terms tied to psi's size
    let eta_opt = Cubature2dOptions {
        rel_tol,
        abs_tol: 1e-5 * (1.0 + psi_q.value.abs()),
        ..Default::default()
    };
    let eta_q = integrate_sphere(|g| eta_integrand(g, a), &reg, &eta_opt);

    let area = lattice_area(alpha).ok();
    let near = near_degenerate(alpha);
    let err_scale = if near { 5.0 } else { 1.0 };
    Ok(PsiResult {
        alpha,
        psi: psi_q.value,
        eta: eta_q.value,
        psi_normalized: area.map(|s| psi_q.value / s),
        err_abs: err_scale * (psi_q.err_abs + eta_q.err_abs),
        evals: psi_q.evals + eta_q.evals,
        converged: psi_q.converged && eta_q.converged,
        near_degenerate: near,
    })
}

/// Same pairing evaluated through the general two-parameter density at
/// beta = alpha; agrees with [`psi`] within quadrature error.
pub fn psi_via_general(alpha: f64, rel_tol: f64) -> Result<PsiResult> {
    if excluded(alpha) || !alpha.is_finite() {
        return Err(Error::ExcludedAlpha(alpha));
    }
    let a = Complex64::new(alpha, 0.0);
    let m = crate::kummer::KummerModuli::new(a, a)
        .map_err(|_| Error::ExcludedAlpha(alpha))?;
    let reg = density::pole_registry(&m);
    let opt = Cubature2dOptions {
        rel_tol,
        abs_tol: 2e-6,
        ..Default::default()
    };
    let f = |g: Complex64| match density_general(g, &m) {
        Ok(v) => log_abs_zeta(g) * real_part_density(v),
        Err(_) => f64::NAN,
    };
    let q = integrate_sphere(f, &reg, &opt);
    Ok(PsiResult {
        alpha,
        psi: q.value,
        eta: 0.0,
        psi_normalized: None,
        err_abs: q.err_abs,
        evals: q.evals,
        converged: q.converged,
        near_degenerate: near_degenerate(alpha),
    })
}

/// Integrand of the limit integral at alpha = 1:
/// log|(g+i)/(g-i)| * Im(g) / (|g^2-1|^2 |g^2+1|).
fn limit_integrand(gamma: Complex64) -> f64 {
    let g2 = gamma * gamma;
    let den = (g2 - 1.0).norm_sqr() * (g2 + 1.0).norm();
    if den == 0.0 {
        return f64::NAN;
    }
    log_abs_zeta(gamma) * gamma.im / den
}

fn limit_registry() -> SingularityRegistry {
    let mut reg = SingularityRegistry::new();
    for p in [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ] {
        reg.push(p, SingularityKind::InverseModulus);
    }
    reg.push(Complex64::new(0.0, 1.0), SingularityKind::Logarithmic);
    reg.push(Complex64::new(0.0, -1.0), SingularityKind::Logarithmic);
    reg
}

/// The positive constant I(1) whose -16 multiple is the limit of psi as
/// alpha -> 1.
pub fn psi_at_one(rel_tol: f64) -> crate::numerics::QuadratureResult<f64> {
    let opt = Cubature2dOptions {
        rel_tol,
        abs_tol: 1e-12,
        ..Default::default()
    };
    integrate_sphere(limit_integrand, &limit_registry(), &opt)
}

/// Upper-half-plane half of the limit integral; the full sphere value is
/// exactly twice this by the integrand's parity.
pub fn psi_at_one_upper_half(rel_tol: f64) -> crate::numerics::QuadratureResult<f64> {
    let opt = Cubature2dOptions {
        rel_tol,
        abs_tol: 1e-12,
        ..Default::default()
    };
    integrate_sphere_sector(limit_integrand, &limit_registry(), &opt, Some(true))
}

/// Lattice area |integral over the first curve of dx/u wedge its
/// conjugate| = 2 |Im(conj(w1) w2)| from the AGM period pair of
/// y^2 = x (x-1) (x-alpha), for real alpha with three distinct real
/// branch points.
pub fn lattice_area(alpha: f64) -> Result<f64> {
    let (w_re, w_im) = legendre_periods(alpha)?;
    Ok(2.0 * w_re * w_im)
}

/// Magnitudes of the real and imaginary periods of dx/y on
/// y^2 = x (x-1) (x-alpha) (rectangular lattice for real alpha).
pub fn legendre_periods(alpha: f64) -> Result<(f64, f64)> {
    if !alpha.is_finite() || alpha.abs() < 1e-12 || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::AreaDomain(alpha));
    }
    let mut e = [0.0, 1.0, alpha];
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s = (e[2] - e[0]).sqrt();
    // real period: cycle over [e1, e2]; imaginary: over [e2, e3]
    let w_re = 2.0 * std::f64::consts::PI / agm(s, (e[2] - e[1]).sqrt())?;
    let w_im = 2.0 * std::f64::consts::PI / agm(s, (e[1] - e[0]).sqrt())?;
    Ok((w_re, w_im))
}

/// Least-squares fit of samples (x_i, y_i) to y = A log|x - c| + B.
#[derive(Debug, Clone, Copy)]
pub struct LogFit {
    pub a: f64,
    pub b: f64,
    /// root-mean-square residual of the fit
    pub rms_residual: f64,
    /// relative change of A when the farthest-from-center sample is
    /// dropped; small values indicate a stable fit
    pub stability: f64,
    /// residual magnitudes do not grow toward the center
    pub monotone_residuals: bool,
}

fn fit_log_once(samples: &[(f64, f64)], center: f64) -> (f64, f64) {
    let n = samples.len() as f64;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in samples {
        let t = (x - center).abs().ln();
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let det = n * stt - st * st;
    let a = (n * sty - st * sy) / det;
    let b = (sy - a * st) / n;
    (a, b)
}

/// Fit psi-hat samples near a degeneration center to A log|alpha - c| + B.
pub fn asymptotic_fit(samples: &[(f64, f64)], center: f64) -> LogFit {
    assert!(samples.len() >= 3, "log fit needs at least 3 samples");
    let (a, b) = fit_log_once(samples, center);
    let residuals: Vec<f64> = samples
        .iter()
        .map(|&(x, y)| (y - a * (x - center).abs().ln() - b).abs())
        .collect();
    let rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    // stability: drop the sample farthest from the center and refit
    let far = samples
        .iter()
        .enumerate()
        .max_by(|(_, p), (_, q)| {
            (p.0 - center)
                .abs()
                .partial_cmp(&(q.0 - center).abs())
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap();
    let reduced: Vec<(f64, f64)> = samples
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != far)
        .map(|(_, s)| *s)
        .collect();
    let stability = if reduced.len() >= 2 {
        let (a2, _) = fit_log_once(&reduced, center);
        ((a2 - a) / a).abs()
    } else {
        f64::INFINITY
    };
    // samples ordered from farthest to nearest; residuals should not grow
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| {
        (samples[j].0 - center)
            .abs()
            .partial_cmp(&(samples[i].0 - center).abs())
            .unwrap()
    });
    let ordered: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
    let monotone = ordered.windows(2).all(|w| w[1] <= w[0] + 0.5 * rms);
    LogFit {
        a,
        b,
        rms_residual: rms,
        stability,
        monotone_residuals: monotone,
    }
}
