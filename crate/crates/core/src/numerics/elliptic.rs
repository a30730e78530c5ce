//! Arithmetic-geometric mean and complete elliptic integrals.

use super::{Error, Result};
use std::f64::consts::PI;

/// Arithmetic-geometric mean of two positive reals.
///
/// Quadratically convergent; the common limit of a_{n+1} = (a_n+b_n)/2,
/// b_{n+1} = sqrt(a_n b_n).
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("agm requires positive finite inputs, got ({a}, {b})")));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 2.0 * f64::EPSILON * an {
            return Ok(0.5 * (an + bn));
        }
        a = an;
        b = bn;
    }
    Ok(0.5 * (a + b))
}

/// Complete elliptic integral of the first kind, modulus convention:
/// K(k) = int_0^(pi/2) d theta / sqrt(1 - k^2 sin^2 theta), 0 <= k < 1.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic_k requires 0 <= k < 1, got {k}")));
    }
    if k == 0.0 {
        return Ok(PI / 2.0);
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    Ok(PI / (2.0 * agm(1.0, kp)?))
}
