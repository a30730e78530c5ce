//! Simple continued fractions with a propagated trust horizon.

use super::dd::Dd;
use super::{Error, Result};

/// A continued-fraction expansion [a0; a1, a2, ...] together with how many
/// leading terms survive the precision budget of the input.
#[derive(Debug, Clone)]
pub struct CfExpansion {
    pub terms: Vec<i64>,
    /// Number of leading terms unaffected by the input's rounding error.
    pub trustworthy: usize,
}

impl CfExpansion {
    /// Reconstruct the value of the first `n` terms as a convergent.
    pub fn convergent(&self, n: usize) -> f64 {
        let n = n.min(self.terms.len());
        let mut x = 0.0;
        for &a in self.terms[..n].iter().rev() {
            x = if x == 0.0 { a as f64 } else { a as f64 + 1.0 / x };
        }
        x
    }
}

/// Continued fraction of a positive real in double precision.
///
/// The expansion stops when the fractional remainder drops below the
/// propagated precision floor; `trustworthy` counts the terms produced
/// before the propagated uncertainty reaches half a unit.
pub fn continued_fraction(x: f64, n_terms: usize) -> Result<CfExpansion> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("continued_fraction requires finite x > 0, got {x}")));
    }
    let mut terms = Vec::new();
    let mut trustworthy = 0;
    let mut cur = x;
    let mut uncertainty = f64::EPSILON * x.abs();
    let mut trusted = true;
    for _ in 0..n_terms {
        let a = cur.floor();
        terms.push(a as i64);
        if trusted && uncertainty < 0.5 {
            trustworthy += 1;
        } else {
            trusted = false;
        }
        let frac = cur - a;
        if frac <= uncertainty || frac == 0.0 {
            break;
        }
        // 1/frac amplifies absolute error by 1/frac^2
        uncertainty /= frac * frac;
        cur = 1.0 / frac;
    }
    Ok(CfExpansion { terms, trustworthy })
}

/// Continued fraction of a positive double-double value.
pub fn continued_fraction_dd(x: Dd, n_terms: usize) -> Result<CfExpansion> {
    if !(x.hi > 0.0) || !x.is_finite() {
        return Err(Error::Domain("continued_fraction_dd requires finite x > 0".into()));
    }
    let mut terms = Vec::new();
    let mut trustworthy = 0;
    let mut cur = x;
    let mut uncertainty = 1e-31 * x.hi.abs();
    let mut trusted = true;
    for _ in 0..n_terms {
        let a = cur.floor();
        terms.push(a.to_f64() as i64);
        if trusted && uncertainty < 0.5 {
            trustworthy += 1;
        } else {
            trusted = false;
        }
        let frac = cur.sub(a);
        if frac.to_f64() <= uncertainty {
            break;
        }
        uncertainty /= frac.to_f64() * frac.to_f64();
        cur = frac.recip();
    }
    Ok(CfExpansion { terms, trustworthy })
}
