//! Linear ODEs with rational-function coefficients: exact transcription,
//! numerical residuals, and initial-value integration.
//!
//! Coefficients are carried exactly (integer or rational polynomial data);
//! floating point enters only at evaluation time. Residuals of sampled
//! functions use 5-point central differences with three Richardson levels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Error, Result};

/// Dense univariate polynomial with exact rational coefficients,
/// ascending degree order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::from_i64(&[1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i as i64 + 1)))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        Poly::new(out)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

/// Ratio of two exact polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RationalFn { num, den }
    }

    pub fn from_i64(num: &[i64], den: &[i64]) -> Self {
        RationalFn::new(Poly::from_i64(num), Poly::from_i64(den))
    }

    pub fn constant(c: i64) -> Self {
        RationalFn::from_i64(&[c], &[1])
    }

    /// Quotient-rule derivative, exact.
    pub fn derivative(&self) -> RationalFn {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        RationalFn::new(num, den)
    }

    pub fn eval_f64(&self, x: f64) -> Option<f64> {
        let d = self.den.eval_f64(x);
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.num.eval_f64(x) / d)
    }

    pub fn compile(&self) -> CompiledRationalFn {
        CompiledRationalFn {
            num: self.num.to_f64_coeffs(),
            den: self.den.to_f64_coeffs(),
        }
    }
}

/// f64-compiled rational function for hot evaluation loops.
#[derive(Debug, Clone)]
pub struct CompiledRationalFn {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl CompiledRationalFn {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let mut n = 0.0;
        for c in self.num.iter().rev() {
            n = n * x + c;
        }
        let mut d = 0.0;
        for c in self.den.iter().rev() {
            d = d * x + c;
        }
        n / d
    }
}

/// Linear ODE sum c_k(x) f^(k)(x) = 0 with exact rational-function
/// coefficients, c_n the leading one.
#[derive(Debug, Clone)]
pub struct RationalOde {
    pub var: &'static str,
    /// coeffs[k] multiplies the k-th derivative; length = order + 1.
    pub coeffs: Vec<RationalFn>,
}

impl RationalOde {
    pub fn new(var: &'static str, coeffs: Vec<RationalFn>) -> Self {
        assert!(coeffs.len() >= 2, "ODE needs order >= 1");
        assert!(
            !coeffs.last().unwrap().num.is_zero(),
            "leading coefficient must not vanish identically"
        );
        RationalOde { var, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluate all coefficients at x; None if any denominator vanishes.
    pub fn coeffs_at(&self, x: f64) -> Option<Vec<f64>> {
        self.coeffs.iter().map(|c| c.eval_f64(x)).collect()
    }
}

/// Central-difference derivative of order k (1..=4) with step h on a
/// 5-point stencil. Leading error term is even in h of the returned order.
fn stencil_derivative(f: &mut dyn FnMut(f64) -> f64, x0: f64, h: f64, k: usize) -> (f64, u32) {
    let fm2 = f(x0 - 2.0 * h);
    let fm1 = f(x0 - h);
    let f0 = f(x0);
    let fp1 = f(x0 + h);
    let fp2 = f(x0 + 2.0 * h);
    match k {
        1 => ((-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h), 4),
        2 => ((-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h), 4),
        3 => ((fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h), 2),
        4 => ((fp2 - 4.0 * fp1 + 6.0 * f0 - 4.0 * fm1 + fm2) / (h * h * h * h), 2),
        _ => panic!("stencil_derivative supports orders 1..=4"),
    }
}

/// k-th derivative by Richardson extrapolation over three step levels.
fn richardson_derivative(f: &mut dyn FnMut(f64) -> f64, x0: f64, h: f64, k: usize) -> f64 {
    let (d0, p) = stencil_derivative(f, x0, h, k);
    let (d1, _) = stencil_derivative(f, x0, h / 2.0, k);
    let (d2, _) = stencil_derivative(f, x0, h / 4.0, k);
    let r = 2f64.powi(p as i32);
    let w0 = (r * d1 - d0) / (r - 1.0);
    let w1 = (r * d2 - d1) / (r - 1.0);
    let r2 = 2f64.powi(p as i32 + 2);
    (r2 * w1 - w0) / (r2 - 1.0)
}

/// Normalized residual of a sampled function in a rational-coefficient ODE.
///
/// Returns |sum c_k f^(k)| / sum |c_k f^(k)| at x0, with derivatives from
/// 5-point central differences plus Richardson extrapolation at step h
/// (orders up to 4). The stencil must stay clear of coefficient poles.
pub fn ode_residual(
    ode: &RationalOde,
    f: &dyn Fn(f64) -> f64,
    x0: f64,
    h: f64,
) -> Result<f64> {
    if ode.order() > 4 {
        return Err(Error::Domain("ode_residual supports order <= 4".into()));
    }
    for probe in [x0 - 2.0 * h, x0, x0 + 2.0 * h] {
        if ode.coeffs_at(probe).is_none() {
            return Err(Error::CoefficientPole(probe));
        }
    }
    let c = ode.coeffs_at(x0).unwrap();
    let mut g = |x: f64| f(x);
    let mut num = c[0] * f(x0);
    let mut den = num.abs();
    for (k, ck) in c.iter().enumerate().skip(1) {
        let dk = richardson_derivative(&mut g, x0, h, k);
        let term = ck * dk;
        num += term;
        den += term.abs();
    }
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok(num.abs() / den)
}

/// Reasonable default differencing step at x0 for `ode_residual`.
pub fn default_residual_step(x0: f64) -> f64 {
    0.02 * x0.abs().max(1.0)
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct LinearSystem {
    c0: CompiledRationalFn,
    c1: CompiledRationalFn,
    c2: CompiledRationalFn,
}

impl LinearSystem {
    #[inline]
    fn rhs(&self, x: f64, y: [f64; 2]) -> [f64; 2] {
        let c2 = self.c2.eval(x);
        let acc = -(self.c1.eval(x) * y[1] + self.c0.eval(x) * y[0]) / c2;
        [y[1], acc]
    }
}

/// Adaptive Dormand-Prince integration of a second-order linear ODE from
/// (y0, y0') at `a` to `b`, recording state at the requested output nodes.
fn integrate_segment(
    sys: &LinearSystem,
    mut x: f64,
    mut y: [f64; 2],
    target: f64,
    rel_tol: f64,
) -> Result<[f64; 2]> {
    let dir = (target - x).signum();
    if dir == 0.0 {
        return Ok(y);
    }
    let mut h = dir * 0.01 * (target - x).abs().max(1e-3);
    let mut steps = 0u32;
    while (target - x) * dir > 1e-15 * target.abs().max(1.0) {
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::NonConvergence("IVP step budget exhausted".into()));
        }
        if (x + h - target) * dir > 0.0 {
            h = target - x;
        }
        let mut k = [[0.0; 2]; 7];
        k[0] = sys.rhs(x, y);
        for s in 1..7 {
            let mut ys = y;
            for j in 0..s {
                ys[0] += h * DP_A[s][j] * k[j][0];
                ys[1] += h * DP_A[s][j] * k[j][1];
            }
            k[s] = sys.rhs(x + DP_C[s] * h, ys);
        }
        let mut y5 = y;
        let mut y4 = y;
        for s in 0..7 {
            y5[0] += h * DP_B5[s] * k[s][0];
            y5[1] += h * DP_B5[s] * k[s][1];
            y4[0] += h * DP_B4[s] * k[s][0];
            y4[1] += h * DP_B4[s] * k[s][1];
        }
        if !y5[0].is_finite() || !y5[1].is_finite() {
            return Err(Error::CoefficientPole(x));
        }
        let scale0 = 1e-12 + rel_tol * y[0].abs().max(y5[0].abs());
        let scale1 = 1e-12 + rel_tol * y[1].abs().max(y5[1].abs());
        let err = ((y5[0] - y4[0]) / scale0).abs().max(((y5[1] - y4[1]) / scale1).abs());
        if err <= 1.0 {
            x += h;
            y = y5;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Ok(y)
}

/// Sampled solution of a second-order linear IVP, with re-integration
/// based dense evaluation.
pub struct IvpSolution {
    sys: LinearSystem,
    rel_tol: f64,
    /// (x, y, y') at the requested output nodes, ascending in x.
    pub samples: Vec<(f64, f64, f64)>,
}

impl IvpSolution {
    /// Value at an arbitrary point inside the solved interval, obtained by
    /// re-integrating from the nearest stored node (keeps the accuracy of
    /// the node data instead of an interpolation error).
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.state_at(x)?[0])
    }

    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        Ok(self.state_at(x)?[1])
    }

    fn state_at(&self, x: f64) -> Result<[f64; 2]> {
        let nearest = self
            .samples
            .iter()
            .min_by(|p, q| {
                (p.0 - x)
                    .abs()
                    .partial_cmp(&(q.0 - x).abs())
                    .unwrap()
            })
            .ok_or_else(|| Error::Domain("empty IVP solution".into()))?;
        integrate_segment(
            &self.sys,
            nearest.0,
            [nearest.1, nearest.2],
            x,
            self.rel_tol,
        )
    }
}

/// Solve a second-order linear ODE IVP on [a, b] with dense output at
/// `n_out` equally spaced nodes (endpoints included).
pub fn solve_ivp(
    ode: &RationalOde,
    y0: f64,
    yp0: f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    n_out: usize,
) -> Result<IvpSolution> {
    if ode.order() != 2 {
        return Err(Error::Domain(format!(
            "solve_ivp integrates second-order ODEs, got order {}",
            ode.order()
        )));
    }
    let n_out = n_out.max(2);
    // reject intervals containing a leading-coefficient zero: probe densely
    for i in 0..=200 {
        let x = a + (b - a) * i as f64 / 200.0;
        match ode.coeffs[2].eval_f64(x) {
            Some(v) if v.abs() > 1e-300 => {}
            _ => return Err(Error::CoefficientPole(x)),
        }
    }
    let sys = LinearSystem {
        c0: ode.coeffs[0].compile(),
        c1: ode.coeffs[1].compile(),
        c2: ode.coeffs[2].compile(),
    };
    let mut samples = Vec::with_capacity(n_out);
    let mut y = [y0, yp0];
    samples.push((a, y[0], y[1]));
    for i in 1..n_out {
        let target = a + (b - a) * i as f64 / (n_out - 1) as f64;
        let prev = samples.last().unwrap().0;
        y = integrate_segment(&sys, prev, y, target, rel_tol)?;
        samples.push((target, y[0], y[1]));
    }
    Ok(IvpSolution {
        sys,
        rel_tol,
        samples,
    })
}
