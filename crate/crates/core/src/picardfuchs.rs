//! Quartic normal form, moduli invariants, transcribed Picard-Fuchs
//! operators, period residual checks, and the two-isogeny consistency
//! test.
//!
//! All operator coefficients and the modular parametrization are carried
//! in exact integer/rational arithmetic; floating point enters only when
//! evaluating at a numeric argument. The period of the normalized form
//! g2^(1/4) dx/y on the one-parameter Weierstrass slice is computed by
//! AGM from the real root configuration and must be annihilated by the
//! second-order operator; the fourth-order operator must annihilate
//! products of solutions of its two second-order factors.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::numerics::{agm, j_function, solve_ivp, IvpSolution, Poly, RationalFn, RationalOde};

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("d must be nonzero")]
    ZeroD,
    #[error("normalized period needs j > 1, got {0}")]
    PeriodDomain(f64),
    #[error("no parameter matches the two j-invariants (scaling {0})")]
    NoMatch(f64),
    #[error(transparent)]
    Numerics(#[from] crate::numerics::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Moduli point (a, b, d) of the quartic normal form, with the weighted
/// equivalence (a, b, d) ~ (l^2 a, l^3 b, l^6 d).
#[derive(Debug, Clone, Copy)]
pub struct MPolarizedPoint {
    pub a: Complex64,
    pub b: Complex64,
    pub d: Complex64,
}

impl MPolarizedPoint {
    pub fn new(a: Complex64, b: Complex64, d: Complex64) -> Result<Self> {
        if d.norm() == 0.0 {
            return Err(Error::ZeroD);
        }
        Ok(MPolarizedPoint { a, b, d })
    }

    /// Rescale by the weighted action so that a = 1 (when a != 0).
    pub fn normalize(&self) -> Self {
        if self.a.norm() == 0.0 {
            return *self;
        }
        let l2 = 1.0 / self.a; // lambda^2
        let l = l2.sqrt();
        MPolarizedPoint {
            a: Complex64::new(1.0, 0.0),
            b: self.b * l2 * l,
            d: self.d * l2 * l2 * l2,
        }
    }

    /// Fundamental invariants (a^3/d, b^2/d) of the weighted orbit.
    pub fn invariants(&self) -> (Complex64, Complex64) {
        (self.a * self.a * self.a / self.d, self.b * self.b / self.d)
    }
}

/// Exact fundamental invariants for rational moduli.
pub fn invariants_exact(
    a: &BigRational,
    b: &BigRational,
    d: &BigRational,
) -> Option<(BigRational, BigRational)> {
    if d.is_zero() {
        return None;
    }
    Some((a * a * a / d, b * b / d))
}

/// Value of the quartic normal form
/// Y^2 Z W - 4 X^3 Z + 3 a X Z W^2 + b Z W^3 - (d Z^2 W^2 + W^4)/2.
pub fn qm_evaluate(a: f64, b: f64, d: f64, x: f64, y: f64, z: f64, w: f64) -> f64 {
    y * y * z * w - 4.0 * x.powi(3) * z + 3.0 * a * x * z * w * w + b * z * w.powi(3)
        - 0.5 * (d * z * z * w * w + w.powi(4))
}

/// Gradient of the quartic normal form with respect to (X, Y, Z, W).
pub fn qm_gradient(a: f64, b: f64, d: f64, x: f64, y: f64, z: f64, w: f64) -> [f64; 4] {
    [
        -12.0 * x * x * z + 3.0 * a * z * w * w,
        2.0 * y * z * w,
        y * y * w - 4.0 * x.powi(3) + 3.0 * a * x * w * w + b * w.powi(3) - d * z * w * w,
        y * y * z + 6.0 * a * x * z * w + 3.0 * b * z * w * w - d * z * z * w - 2.0 * w.powi(3),
    ]
}

/// Genus-zero modular parametrization of the one-parameter subfamily:
/// a = (t+16)(t+256), b = (t-512)(t-8)(t+64), d = 2^12 3^6 t^3.
pub fn modular_parametrization(t: f64) -> Result<MPolarizedPoint> {
    if t == 0.0 {
        return Err(Error::ZeroD);
    }
    let a = (t + 16.0) * (t + 256.0);
    let b = (t - 512.0) * (t - 8.0) * (t + 64.0);
    let d = 2985984.0 * t * t * t;
    MPolarizedPoint::new(
        Complex64::new(a, 0.0),
        Complex64::new(b, 0.0),
        Complex64::new(d, 0.0),
    )
}

/// Exact-rational version of the modular parametrization.
pub fn modular_parametrization_exact(
    t: &BigRational,
) -> Option<(BigRational, BigRational, BigRational)> {
    if t.is_zero() {
        return None;
    }
    let a = (t + big(16)) * (t + big(256));
    let b = (t - big(512)) * (t - big(8)) * (t + big(64));
    let d = big(2985984) * t * t * t;
    Some((a, b, d))
}

/// The pair (j1, j2) attached to a moduli point: roots of
/// X^2 - sigma X + pi with pi = a^3/d and sigma = 1 + (a^3 - b^2)/d.
/// The boolean flags a (numerically) double root.
pub fn j_pair_from_point(p: &MPolarizedPoint) -> (Complex64, Complex64, bool) {
    let (pi, b2d) = p.invariants();
    let sigma = pi + 1.0 - b2d;
    let disc = sigma * sigma - 4.0 * pi;
    let sq = disc.sqrt();
    let j1 = (sigma + sq) / 2.0;
    let j2 = (sigma - sq) / 2.0;
    let degenerate = sq.norm() <= 1e-9 * (1.0 + sigma.norm());
    (j1, j2, degenerate)
}

/// The second-order operator annihilating periods in one normalized
/// j-variable: 72 j (2 (j-1) j f'' + (2j - 1) f') - 5 f.
pub fn decoupled_operator() -> RationalOde {
    RationalOde::new(
        "j",
        vec![
            RationalFn::constant(-5),
            // 72 j (2j - 1) = 144 j^2 - 72 j
            RationalFn::from_i64(&[0, -72, 144], &[1]),
            // 144 j^2 (j - 1) = 144 j^3 - 144 j^2
            RationalFn::from_i64(&[0, 0, -144, 144], &[1]),
        ],
    )
}

/// Third-order operator annihilating periods along the one-parameter
/// subfamily: f''' + 3(3t+128)/(2t(t+64)) f'' + (13t+256)/(4t^2(t+64)) f'
/// + 1/(8t^2(t+64)) f.
pub fn cubic_ode() -> RationalOde {
    RationalOde::new(
        "t",
        vec![
            // 1 / (8 t^2 (t + 64)) = 1 / (8 t^3 + 512 t^2)
            RationalFn::from_i64(&[1], &[0, 0, 512, 8]),
            // (13 t + 256) / (4 t^2 (t + 64))
            RationalFn::from_i64(&[256, 13], &[0, 0, 256, 4]),
            // 3 (3 t + 128) / (2 t (t + 64)) = (9 t + 384) / (2 t^2 + 128 t)
            RationalFn::from_i64(&[384, 9], &[0, 128, 2]),
            RationalFn::constant(1),
        ],
    )
}

/// Fourth-order operator of the sigma = 1 locus.
pub fn quartic_ode() -> RationalOde {
    RationalOde::new(
        "s",
        vec![
            // 385 (s-1)^2 / (20736 s^4 (s+1)^2)
            RationalFn::from_i64(&[385, -770, 385], &[0, 0, 0, 0, 20736, 41472, 20736]),
            // (167 s^2 - 239 s - 118) / (36 s^2 (s-1)(s+1)^2)
            RationalFn::from_i64(&[-118, -239, 167], &[0, 0, -36, -36, 36, 36]),
            // (1031 s^3 - 553 s^2 - 1175 s - 167) / (72 s^2 (s-1)(s+1)^2)
            RationalFn::from_i64(&[-167, -1175, -553, 1031], &[0, 0, -72, -72, 72, 72]),
            // 2 (4 s^2 - 3 s - 2) / (s (s-1)(s+1))
            RationalFn::from_i64(&[-4, -6, 8], &[0, -1, 0, 1]),
            RationalFn::constant(1),
        ],
    )
}

/// The two second-order factors whose solution products the fourth-order
/// operator annihilates; they differ only in the s vs s^2 denominator of
/// the constant-coefficient term.
pub fn factor_odes() -> (RationalOde, RationalOde) {
    let f1 = RationalOde::new(
        "s",
        vec![
            // 5 / (144 s (s+1))
            RationalFn::from_i64(&[5], &[0, 144, 144]),
            // (3s + 1) / (2 s (s+1))
            RationalFn::from_i64(&[1, 3], &[0, 2, 2]),
            RationalFn::constant(1),
        ],
    );
    let f2 = RationalOde::new(
        "s",
        vec![
            // 5 / (144 s^2 (s+1))
            RationalFn::from_i64(&[5], &[0, 0, 144, 144]),
            RationalFn::from_i64(&[1, 3], &[0, 2, 2]),
            RationalFn::constant(1),
        ],
    );
    (f1, f2)
}

/// Weierstrass slice with prescribed normalized j-invariant:
/// g2 = g3 = 27 j / (j - 1), which satisfies g2^3/(g2^3 - 27 g3^2) = j
/// identically.
pub fn weierstrass_slice(j: f64) -> (f64, f64) {
    let g = 27.0 * j / (j - 1.0);
    (g, g)
}

/// The j recovered from slice coefficients, for the slice identity check.
pub fn slice_j(g2: f64, g3: f64) -> f64 {
    let c = g2 * g2 * g2;
    c / (c - 27.0 * g3 * g3)
}

/// Real roots of 4 x^3 - g x - g (three distinct for g > 27), ascending.
fn cubic_roots(g: f64) -> [f64; 3] {
    // x^3 + p x + q with p = q = -g/4, trigonometric form
    let p = -g / 4.0;
    let q = -g / 4.0;
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p)) * (-3.0 / p).sqrt();
    let phi = arg.clamp(-1.0, 1.0).acos() / 3.0;
    let mut roots = [
        m * phi.cos(),
        m * (phi - 2.0 * std::f64::consts::PI / 3.0).cos(),
        m * (phi - 4.0 * std::f64::consts::PI / 3.0).cos(),
    ];
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Period of the normalized one-form g2^(1/4) dx/y on
/// y^2 = 4 x^3 - g2 x - g3 over the Weierstrass slice at normalized
/// j-invariant j > 1. Annihilated by [`decoupled_operator`].
pub fn normalized_period(j: f64) -> Result<f64> {
    if !(j > 1.0) {
        return Err(Error::PeriodDomain(j));
    }
    let (g2, _g3) = weierstrass_slice(j);
    let e = cubic_roots(g2);
    // real period of dx/y: pi / agm(sqrt(e3-e1), sqrt(e3-e2))
    let omega = std::f64::consts::PI / agm((e[2] - e[0]).sqrt(), (e[2] - e[1]).sqrt())?;
    Ok(g2.powf(0.25) * omega)
}

/// Direct quadrature of the real period for cross-checking the AGM value.
pub fn period_by_quadrature(j: f64) -> Result<f64> {
    use crate::numerics::tanhsinh::{tanh_sinh, TanhSinhOptions};
    if !(j > 1.0) {
        return Err(Error::PeriodDomain(j));
    }
    let (g2, _g3) = weierstrass_slice(j);
    let e = cubic_roots(g2);
    let (e1, e2, e3) = (e[0], e[1], e[2]);
    // the real cycle lies over [e1, e2], where 4 (x-e1)(x-e2)(x-e3) < 0
    // twice over; integrate dx / sqrt(4 (x-e1)(e2-x)(e3-x)) and double
    let opt = TanhSinhOptions::with_rel_tol(1e-13);
    let mut f = |x: f64, dist: f64| {
        let near = dist.abs();
        let (fa, fb) = if dist > 0.0 { (near, e2 - x) } else { (x - e1, near) };
        1.0 / (4.0 * fa * fb * (e3 - x)).sqrt()
    };
    let q = tanh_sinh::<f64>(&mut f, e1, e2, &opt);
    Ok(g2.powf(0.25) * 2.0 * q.value)
}

/// Outcome of the two-isogeny consistency test at one point of the
/// imaginary axis.
#[derive(Debug, Clone)]
pub struct IsogenyReport {
    pub tau_im: f64,
    /// the j-scaling divisor that was tried (1 or 1728)
    pub scaling: f64,
    /// parameter t matched to the product invariant
    pub t: f64,
    /// relative residual of the overdetermined sum invariant
    pub sigma_residual: f64,
    pub passed: bool,
}

/// For tau = i y, test whether the pair (j(tau), j(2 tau)) scaled by
/// `scaling` lies on the parametrized curve: t is solved from the product
/// invariant (a quadratic after taking a cube root) and the sum invariant
/// is then an overdetermined consistency check.
pub fn two_isogeny_check_scaled(y: f64, scaling: f64, perturb_j2: f64) -> Result<IsogenyReport> {
    let j1 = j_function(y)? / scaling;
    let j2 = j_function(2.0 * y)? / scaling * (1.0 + perturb_j2);
    let pi_inv = j1 * j2;
    let sigma_inv = j1 + j2;
    // (t+16)^3 (t+256)^3 / (1728^2 t^3) = pi
    //   =>  (t+16)(t+256) = (1728^2 pi)^(1/3) t
    let k = (2985984.0 * pi_inv).cbrt();
    let bq = 272.0 - k;
    let disc = bq * bq - 4.0 * 4096.0;
    if disc < 0.0 {
        return Err(Error::NoMatch(scaling));
    }
    // larger root: the parametrizing coordinate grows like exp(2 pi y)
    let t = 0.5 * (-bq + disc.sqrt());
    let p = modular_parametrization(t)?;
    let (pi_got, b2d) = p.invariants();
    let sigma_got = pi_got.re + 1.0 - b2d.re;
    let sigma_residual = (sigma_got - sigma_inv).abs() / sigma_inv.abs();
    // double-check the product invariant actually matched
    let product_residual = (pi_got.re - pi_inv).abs() / pi_inv.abs();
    let passed = sigma_residual < 1e-6 && product_residual < 1e-9;
    Ok(IsogenyReport {
        tau_im: y,
        scaling,
        t,
        sigma_residual,
        passed,
    })
}

/// Try both j-scalings (1 and 1728) and report each outcome.
pub fn two_isogeny_check(y: f64) -> Result<Vec<IsogenyReport>> {
    let mut out = Vec::new();
    for s in [1.0, 1728.0] {
        match two_isogeny_check_scaled(y, s, 0.0) {
            Ok(r) => out.push(r),
            Err(Error::NoMatch(_)) => out.push(IsogenyReport {
                tau_im: y,
                scaling: s,
                t: f64::NAN,
                sigma_residual: f64::INFINITY,
                passed: false,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Derivatives of a factor-ODE solution up to fourth order, propagated
/// exactly through the ODE relation f'' = -(c1 f' + c0 f)/c2 and its
/// derivatives.
struct FactorDerivatives {
    p: RationalFn, // c1/c2
    q: RationalFn, // c0/c2
    dp: RationalFn,
    dq: RationalFn,
    d2p: RationalFn,
    d2q: RationalFn,
}

impl FactorDerivatives {
    fn new(ode: &RationalOde) -> Self {
        assert_eq!(ode.order(), 2);
        let p = RationalFn::new(
            ode.coeffs[1].num.mul(&ode.coeffs[2].den),
            ode.coeffs[1].den.mul(&ode.coeffs[2].num),
        );
        let q = RationalFn::new(
            ode.coeffs[0].num.mul(&ode.coeffs[2].den),
            ode.coeffs[0].den.mul(&ode.coeffs[2].num),
        );
        let dp = p.derivative();
        let dq = q.derivative();
        let d2p = dp.derivative();
        let d2q = dq.derivative();
        FactorDerivatives {
            p,
            q,
            dp,
            dq,
            d2p,
            d2q,
        }
    }

    /// [f, f', f'', f''', f''''] from the state (f, f').
    fn chain(&self, s: f64, f: f64, fp: f64) -> Option<[f64; 5]> {
        let p = self.p.eval_f64(s)?;
        let q = self.q.eval_f64(s)?;
        let dp = self.dp.eval_f64(s)?;
        let dq = self.dq.eval_f64(s)?;
        let d2p = self.d2p.eval_f64(s)?;
        let d2q = self.d2q.eval_f64(s)?;
        let f2 = -(p * fp + q * f);
        let f3 = -(dp * fp + p * f2 + dq * f + q * fp);
        let f4 = -(d2p * fp + 2.0 * dp * f2 + p * f3 + d2q * f + 2.0 * dq * fp + q * f2);
        Some([f, fp, f2, f3, f4])
    }
}

const BINOM4: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

fn quartic_residual_of_derivatives(quartic: &RationalOde, s: f64, h: &[f64; 5]) -> Option<f64> {
    let c = quartic.coeffs_at(s)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..5 {
        let term = c[k] * h[k];
        num += term;
        den += term.abs();
    }
    if den == 0.0 {
        return Some(0.0);
    }
    Some(num.abs() / den)
}

fn leibniz_product(a: &[f64; 5], b: &[f64; 5]) -> [f64; 5] {
    let mut h = [0.0; 5];
    for (k, hk) in h.iter_mut().enumerate() {
        for i in 0..=k {
            *hk += BINOM4[k][i] * a[i] * b[k - i];
        }
    }
    h
}

/// Result of the tensor-product verification.
#[derive(Debug, Clone)]
pub struct TensorReport {
    pub max_residual: f64,
    pub grid: Vec<(f64, f64)>,
}

/// Solve the two factor ODEs as IVPs from s0 with the given initial data,
/// form the product of the solutions, and evaluate the fourth-order
/// operator's normalized residual on a uniform grid.
pub fn tensor_product_check(
    s0: f64,
    s1: f64,
    init1: (f64, f64),
    init2: (f64, f64),
    n_grid: usize,
) -> Result<TensorReport> {
    let (ode1, ode2) = factor_odes();
    let quartic = quartic_ode();
    let sol1 = solve_ivp(&ode1, init1.0, init1.1, s0, s1, 1e-12, n_grid)?;
    let sol2 = solve_ivp(&ode2, init2.0, init2.1, s0, s1, 1e-12, n_grid)?;
    let d1 = FactorDerivatives::new(&ode1);
    let d2 = FactorDerivatives::new(&ode2);
    let mut grid = Vec::with_capacity(n_grid);
    let mut max_residual: f64 = 0.0;
    for i in 0..n_grid {
        let (s, f1, f1p) = sol1.samples[i];
        let (_, f2, f2p) = sol2.samples[i];
        let r = d1
            .chain(s, f1, f1p)
            .zip(d2.chain(s, f2, f2p))
            .and_then(|(a, b)| quartic_residual_of_derivatives(&quartic, s, &leibniz_product(&a, &b)))
            .unwrap_or(f64::INFINITY);
        max_residual = max_residual.max(r);
        grid.push((s, r));
    }
    Ok(TensorReport { max_residual, grid })
}

/// Negative control: pair a factor-1 solution with a function that solves
/// neither factor (here exp), whose product the quartic must reject.
pub fn tensor_product_negative_control(s0: f64, s1: f64, n_grid: usize) -> Result<f64> {
    let (ode1, _) = factor_odes();
    let quartic = quartic_ode();
    let sol1 = solve_ivp(&ode1, 1.0, 0.3, s0, s1, 1e-12, n_grid)?;
    let d1 = FactorDerivatives::new(&ode1);
    let mut min_residual: f64 = f64::INFINITY;
    for i in 0..n_grid {
        let (s, f1, f1p) = sol1.samples[i];
        let a = d1.chain(s, f1, f1p).unwrap();
        let e = s.exp();
        let b = [e, e, e, e, e];
        let h = leibniz_product(&a, &b);
        let r = quartic_residual_of_derivatives(&quartic, s, &h).unwrap();
        min_residual = min_residual.min(r);
    }
    Ok(min_residual)
}

/// IVP solution of the first factor ODE, for smoothness inspection.
pub fn solve_factor1(s0: f64, s1: f64, init: (f64, f64), n_out: usize) -> Result<IvpSolution> {
    let (ode1, _) = factor_odes();
    Ok(solve_ivp(&ode1, init.0, init.1, s0, s1, 1e-12, n_out)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{default_residual_step, ode_residual};
    use rand::{Rng, SeedableRng};

    #[test]
    fn qm_vanishes_on_the_line_and_singular_points() {
        let (a, b, d) = (1.7, -0.4, 2.2);
        // X = W = 0 line
        for i in 0..20 {
            let y = -1.0 + 0.1 * i as f64;
            let z = 0.3 + 0.05 * i as f64;
            assert_eq!(qm_evaluate(a, b, d, 0.0, y, z, 0.0), 0.0);
        }
        // P1 = [0,1,0,0], P2 = [0,0,1,0]: value and full gradient vanish
        for (x, y, z, w) in [(0.0, 1.0, 0.0, 0.0), (0.0, 0.0, 1.0, 0.0)] {
            assert_eq!(qm_evaluate(a, b, d, x, y, z, w), 0.0);
            assert_eq!(qm_gradient(a, b, d, x, y, z, w), [0.0; 4]);
        }
    }

    #[test]
    fn invariants_weight_check() {
        let p = MPolarizedPoint::new(
            Complex64::new(1.3, 0.0),
            Complex64::new(-0.7, 0.0),
            Complex64::new(2.0, 0.0),
        )
        .unwrap();
        let scaled = MPolarizedPoint::new(p.a * 4.0, p.b * 8.0, p.d * 64.0).unwrap();
        let (i1, i2) = p.invariants();
        let (j1, j2) = scaled.invariants();
        assert!((i1 - j1).norm() < 1e-14 * i1.norm());
        assert!((i2 - j2).norm() < 1e-14 * (1.0 + i2.norm()));
        let (k1, k2) = MPolarizedPoint::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
        .unwrap()
        .invariants();
        assert_eq!((k1.re, k2.re), (1.0, 0.0));
    }

    #[test]
    fn invariants_exact_on_weighted_orbit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
        let base = (big(13) / big(7), big(-5) / big(3), big(9) / big(2));
        let (i1, i2) = invariants_exact(&base.0, &base.1, &base.2).unwrap();
        for _ in 0..100 {
            let l = big(rng.gen_range(1..50)) / big(rng.gen_range(1..50));
            let l2 = &l * &l;
            let l3 = &l2 * &l;
            let l6 = &l3 * &l3;
            let (j1, j2) =
                invariants_exact(&(&base.0 * &l2), &(&base.1 * &l3), &(&base.2 * &l6)).unwrap();
            assert_eq!(i1, j1);
            assert_eq!(i2, j2);
        }
    }

    #[test]
    fn parametrization_special_values() {
        assert!((modular_parametrization(8.0).unwrap().b).norm() < 1e-12);
        assert!((modular_parametrization(-16.0).unwrap().a).norm() < 1e-12);
        let p = modular_parametrization(1.0).unwrap();
        assert_eq!(p.a.re, 4369.0);
        assert_eq!(p.b.re, 232505.0);
        assert_eq!(p.d.re, 2985984.0);
        assert!(modular_parametrization(0.0).is_err());
        // exact arithmetic agrees
        let (a, b, d) = modular_parametrization_exact(&big(1)).unwrap();
        assert_eq!(a, big(4369));
        assert_eq!(b, big(232505));
        assert_eq!(d, big(2985984));
    }

    #[test]
    fn j_pair_roots() {
        // a = 1, d = 1/4, b^2 = 1/4: invariants (4, 1), sigma = 4, pi = 4,
        // double root 2
        let p = MPolarizedPoint::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.25, 0.0),
        )
        .unwrap();
        let (j1, j2, degenerate) = j_pair_from_point(&p);
        assert!(degenerate);
        assert!((j1 - 2.0).norm() < 1e-7);
        assert!((j2 - 2.0).norm() < 1e-7);
        // swapping roots leaves the invariants fixed by construction
        let sum = j1 + j2;
        let prod = j1 * j2;
        assert!((sum.re - 4.0).abs() < 1e-7 && (prod.re - 4.0).abs() < 1e-6);
        // a generic pair reconstructs its invariants up to swap
        let q = MPolarizedPoint::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.7, 0.0),
            Complex64::new(0.11, 0.0),
        )
        .unwrap();
        let (k1, k2, deg) = j_pair_from_point(&q);
        assert!(!deg);
        let (pi_inv, b2d) = q.invariants();
        assert!(((k1 * k2) - pi_inv).norm() < 1e-10 * pi_inv.norm());
        assert!(((k1 + k2) - (pi_inv + 1.0 - b2d)).norm() < 1e-10 * pi_inv.norm());
    }

    #[test]
    fn decoupled_operator_structure() {
        let ode = decoupled_operator();
        // leading coefficient at j = 2: 144*8 - 144*4 = 576
        assert_eq!(ode.coeffs[2].eval_f64(2.0).unwrap(), 576.0);
        // constants are not annihilated
        let r = ode_residual(&ode, &|_x| 1.0, 2.0, 0.02).unwrap();
        assert!(r > 0.5, "constant residual {r}");
    }

    #[test]
    fn slice_identity_exact() {
        for j in [2.0, 5.0, 10.0] {
            let (g2, g3) = weierstrass_slice(j);
            assert!((slice_j(g2, g3) - j).abs() < 1e-12 * j);
        }
    }

    #[test]
    fn period_agm_matches_quadrature() {
        for j in [2.0, 5.0, 10.0] {
            let agm_val = normalized_period(j).unwrap();
            let quad_val = period_by_quadrature(j).unwrap();
            assert!(
                ((agm_val - quad_val) / agm_val).abs() < 1e-9,
                "j={j}: AGM {agm_val} vs quadrature {quad_val}"
            );
        }
        assert!(normalized_period(0.9).is_err());
    }

    #[test]
    fn decoupled_annihilates_normalized_period() {
        let ode = decoupled_operator();
        for j in [2.0, 5.0, 10.0] {
            let h = f64::min(0.25 * (j - 1.0), default_residual_step(j));
            let r = ode_residual(&ode, &|x| normalized_period(x).unwrap(), j, h).unwrap();
            assert!(r < 1e-5, "residual {r} at j = {j}");
        }
    }

    #[test]
    fn quartic_singular_points() {
        let q = quartic_ode();
        assert!(q.coeffs_at(0.3).is_some());
        for s in [0.0, 1.0, -1.0] {
            assert!(q.coeffs_at(s).is_none(), "expected pole at {s}");
        }
        // the two factors differ only in the s vs s^2 zero-order
        // denominator
        let (f1, f2) = factor_odes();
        assert_eq!(f1.coeffs[1], f2.coeffs[1]);
        assert_eq!(f1.coeffs[0].den, Poly::from_i64(&[0, 144, 144]));
        assert_eq!(f2.coeffs[0].den, Poly::from_i64(&[0, 0, 144, 144]));
    }

    #[test]
    fn tensor_product_annihilated() {
        let rep = tensor_product_check(0.1, 0.5, (1.0, 0.3), (0.7, -0.2), 50).unwrap();
        assert!(rep.max_residual < 1e-6, "tensor residual {}", rep.max_residual);
    }

    #[test]
    fn tensor_residual_scale_invariant() {
        let r1 = tensor_product_check(0.1, 0.5, (1.0, 0.3), (0.7, -0.2), 25).unwrap();
        let r2 = tensor_product_check(0.1, 0.5, (3.0, 0.9), (0.7, -0.2), 25).unwrap();
        for (p, q) in r1.grid.iter().zip(r2.grid.iter()) {
            assert!((p.1 - q.1).abs() < 1e-8 + 0.2 * p.1.abs().max(q.1.abs()));
        }
    }

    #[test]
    fn tensor_negative_control_fails_loudly() {
        let r = tensor_product_negative_control(0.1, 0.5, 25).unwrap();
        assert!(r > 1e-3, "negative control residual {r}");
    }

    #[test]
    fn factor1_solution_smooth() {
        let sol = solve_factor1(0.1, 0.5, (1.0, 0.0), 41).unwrap();
        let (ode1, _) = factor_odes();
        for &x0 in &[0.2, 0.3, 0.4] {
            let r = ode_residual(&ode1, &|x| sol.eval(x).unwrap(), x0, 0.02).unwrap();
            assert!(r < 1e-6, "self-residual {r} at {x0}");
        }
        for w in sol.samples.windows(2) {
            assert!((w[1].1 - w[0].1).abs() < 0.2, "jump in solution");
        }
    }

    #[test]
    fn two_isogeny_single_consistent_scaling() {
        for y in [1.1, 1.5] {
            let reports = two_isogeny_check(y).unwrap();
            let passing: Vec<_> = reports.iter().filter(|r| r.passed).collect();
            assert_eq!(passing.len(), 1, "reports {reports:?}");
            assert_eq!(passing[0].scaling, 1728.0);
            assert!(passing[0].sigma_residual < 1e-6);
        }
    }

    #[test]
    fn two_isogeny_negative_control() {
        let r = two_isogeny_check_scaled(1.1, 1728.0, 0.01).unwrap();
        assert!(
            r.sigma_residual > 1e-3,
            "perturbed control residual {}",
            r.sigma_residual
        );
    }
}
