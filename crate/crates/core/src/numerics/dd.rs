//! Double-double ("software quad") arithmetic.
//!
//! A value is stored as an unevaluated sum `hi + lo` of two doubles with
//! `|lo| <= ulp(hi)/2`, giving roughly 31 significant decimal digits. The
//! error-free transforms follow Dekker and the usual qd-library recipes;
//! products rely on `f64::mul_add` for an exact fused multiply-add.
//!
//! Only the operations the extended-precision quadrature and continued
//! fractions need are provided: field ops, comparisons, `sqrt`, `exp`,
//! `sinh`/`cosh`, `floor`, `recip`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    /// ln(2) to double-double precision.
    pub const LN2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2b) = quick_two_sum(s1, s2 + t1);
        Dd::renorm(s1, s2b + t2)
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        Dd::renorm(p1, p2)
    }

    #[inline]
    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::renorm(s, e + q3)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        Dd::renorm(p1, p2 + self.lo * b)
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        self.add(Dd::from_f64(b))
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "dd sqrt of negative value");
        // One Newton step on an f64 seed doubles the working precision.
        let approx = self.hi.sqrt();
        let x = Dd::from_f64(approx);
        let x = x.add(self.div(x)).mul_f64(0.5);
        x.add(self.div(x)).mul_f64(0.5)
    }

    /// exp(x) by argument reduction x = k ln2 + r, |r| <= ln2/2, followed by
    /// three halvings of r and a Taylor sum.
    pub fn exp(self) -> Dd {
        let x = self;
        if x.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if x.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (x.hi / std::f64::consts::LN_2).round();
        let r = x.sub(Dd::LN2.mul_f64(k));
        // r' = r / 8, exp(r) = exp(r')^8
        let rp = r.mul_f64(0.125);
        let mut term = rp;
        let mut sum = Dd::ONE.add(rp);
        let mut fact = 1.0f64;
        for n in 2..24 {
            fact *= n as f64;
            term = term.mul(rp);
            let t = term.div(Dd::from_f64(fact));
            sum = sum.add(t);
            if t.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        // square three times
        let mut e = sum;
        e = e.mul(e);
        e = e.mul(e);
        e = e.mul(e);
        // scale by 2^k
        let scale = (k as i32).clamp(-1022, 1023);
        let pow2 = f64::from_bits(((1023 + scale) as u64) << 52);
        e.mul_f64(pow2)
    }

    pub fn sinh(self) -> Dd {
        let e = self.exp();
        let em = self.neg().exp();
        e.sub(em).mul_f64(0.5)
    }

    pub fn cosh(self) -> Dd {
        let e = self.exp();
        let em = self.neg().exp();
        e.add(em).mul_f64(0.5)
    }

    pub fn floor(self) -> Dd {
        let fh = self.hi.floor();
        if fh == self.hi {
            let fl = self.lo.floor();
            Dd::renorm(fh, fl)
        } else {
            Dd { hi: fh, lo: 0.0 }
        }
    }

    #[inline]
    pub fn lt(self, rhs: Dd) -> bool {
        self.hi < rhs.hi || (self.hi == rhs.hi && self.lo < rhs.lo)
    }

    #[inline]
    pub fn gt(self, rhs: Dd) -> bool {
        rhs.lt(self)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

/// Minimal scalar abstraction letting the tanh-sinh quadrature run in
/// either plain f64 or double-double precision.
pub trait Scalar: Copy {
    const EPS: f64;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn div(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn pi() -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    const EPS: f64 = f64::EPSILON;
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    #[inline]
    fn div(self, rhs: Self) -> Self {
        self / rhs
    }
    #[inline]
    fn neg(self) -> Self {
        -self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    #[inline]
    fn pi() -> Self {
        std::f64::consts::PI
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Dd {
    // Effective double-double epsilon (2^-104).
    const EPS: f64 = 4.93e-32;
    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dd::add(self, rhs)
    }
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dd::sub(self, rhs)
    }
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dd::mul(self, rhs)
    }
    #[inline]
    fn div(self, rhs: Self) -> Self {
        Dd::div(self, rhs)
    }
    #[inline]
    fn neg(self) -> Self {
        Dd::neg(self)
    }
    #[inline]
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    #[inline]
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        Dd::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        Dd::cosh(self)
    }
    #[inline]
    fn pi() -> Self {
        Dd::PI
    }
    #[inline]
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_identities() {
        let a = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let three_a = a.add(a).add(a);
        assert!((three_a.to_f64() - 1.0).abs() < 1e-30);
        let b = a.mul(Dd::from_f64(3.0)).sub(Dd::ONE);
        assert!(b.hi.abs() < 1e-31);
    }

    #[test]
    fn sqrt_two() {
        let s = Dd::from_f64(2.0).sqrt();
        let back = s.mul(s).sub(Dd::from_f64(2.0));
        assert!(back.hi.abs() < 1e-30);
    }

    #[test]
    fn exp_against_known_values() {
        let e1 = Dd::ONE.exp();
        // e to 32 digits: 2.7182818284590452353602874713527
        assert!((e1.hi - 2.718281828459045).abs() < 1e-15);
        assert!((e1.to_f64() - std::f64::consts::E).abs() < 3e-16);
        // exp(ln 2) == 2 to dd precision
        let two = Dd::LN2.exp();
        assert!(two.sub(Dd::from_f64(2.0)).to_f64().abs() < 1e-29);
        // functional equation exp(a+b) = exp(a) exp(b)
        let a = Dd::from_f64(0.37);
        let b = Dd::from_f64(-1.93);
        let lhs = a.add(b).exp();
        let rhs = a.exp().mul(b.exp());
        assert!(lhs.sub(rhs).to_f64().abs() < 1e-29 * rhs.to_f64().abs());
    }

    #[test]
    fn floor_and_recip() {
        let x = Dd::from_f64(7.0).add(Dd::from_f64(1e-20));
        assert_eq!(x.floor().to_f64(), 7.0);
        let r = Dd::from_f64(3.0).recip().mul_f64(3.0);
        assert!(r.sub(Dd::ONE).to_f64().abs() < 1e-30);
    }
}
