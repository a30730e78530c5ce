//! Exact geometry of the two-parameter Kummer quartic family.
//!
//! The singular model is the quartic z^2 xy = (x-1)(x-a)(y-1)(y-b) in
//! affine coordinates, fibered over mu by the conic pencil
//! R(X,Y,W) = mu XY. The module provides the rational parametrizations of
//! the mu = 1 conic and of the nodal fiber supporting the cycle, the
//! normalization coordinate, the singular-fiber census, and the branch
//! points of a fiber over its conic.
//!
//! Points of the projective line are represented with an explicit
//! infinity flag, never by large floats.

use num_complex::Complex64;

/// A point of P^1 in a chart: finite complex value or the point at
/// infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn value(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Sign token fixing the branch of sqrt(delta) once per moduli point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtBranch {
    #[default]
    Principal,
    Negated,
}

/// Parameter point (alpha, beta) of the family, with the chosen branch of
/// sqrt(delta) recorded so that every downstream formula consumes the same
/// sign.
#[derive(Debug, Clone, Copy)]
pub struct KummerModuli {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub branch: SqrtBranch,
}

const TOL: f64 = 1e-12;

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= TOL * (1.0 + a.norm().max(b.norm()))
}

impl KummerModuli {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let m = KummerModuli {
            alpha,
            beta,
            branch: SqrtBranch::Principal,
        };
        if !m.is_valid() {
            return Err(Error::Degenerate(format!(
                "alpha, beta must avoid 0, 1, infinity: ({alpha}, {beta})"
            )));
        }
        Ok(m)
    }

    pub fn diagonal(alpha: Complex64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    pub fn with_branch(mut self, branch: SqrtBranch) -> Self {
        self.branch = branch;
        self
    }

    /// Parameters avoid 0, 1 and infinity.
    pub fn is_valid(&self) -> bool {
        let ok = |z: Complex64| {
            z.is_finite()
                && !near(z, Complex64::new(0.0, 0.0))
                && !near(z, Complex64::new(1.0, 0.0))
        };
        ok(self.alpha) && ok(self.beta)
    }

    /// The supported cycle exists when additionally none of the five
    /// finite singular-fiber positions collides with mu = 1, which reduces
    /// to alpha*beta != 1 and alpha + beta != alpha*beta.
    pub fn cycle_valid(&self) -> bool {
        let one = Complex64::new(1.0, 0.0);
        self.is_valid()
            && !near(self.alpha * self.beta, one)
            && !near(self.alpha + self.beta, self.alpha * self.beta)
    }

    /// delta = (alpha beta - alpha) / (beta - alpha beta).
    pub fn delta(&self) -> Result<Complex64> {
        let den = self.beta - self.alpha * self.beta;
        if den.norm() <= TOL * (1.0 + self.beta.norm()) {
            return Err(Error::Degenerate(
                "beta (1 - alpha) = 0 makes delta undefined".into(),
            ));
        }
        Ok((self.alpha * self.beta - self.alpha) / den)
    }

    /// The branch-resolved square root of delta.
    pub fn sqrt_delta(&self) -> Result<Complex64> {
        let s = self.delta()?.sqrt();
        Ok(match self.branch {
            SqrtBranch::Principal => s,
            SqrtBranch::Negated => -s,
        })
    }

    /// Delta(xi) = alpha xi^2 + alpha beta xi + beta, the conic
    /// parametrization denominator.
    pub fn conic_denominator(&self, xi: Complex64) -> Complex64 {
        self.alpha * xi * xi + self.alpha * self.beta * xi + self.beta
    }
}

/// Point of the nodal fiber carried through all three coordinate systems.
#[derive(Debug, Clone, Copy)]
pub struct FiberPoint {
    pub gamma: Complex64,
    pub xi: SpherePoint,
    pub x: SpherePoint,
    pub y: SpherePoint,
    pub z: SpherePoint,
}

/// Rational parametrization of the mu = 1 conic:
/// x = alpha (xi^2 + (beta-1) xi) / Delta, y = beta ((alpha-1) xi + 1) / Delta.
pub fn conic_param(xi: SpherePoint, m: &KummerModuli) -> (SpherePoint, SpherePoint) {
    let (a, b) = (m.alpha, m.beta);
    match xi {
        SpherePoint::Infinity => (
            SpherePoint::finite(1.0, 0.0),
            SpherePoint::finite(0.0, 0.0),
        ),
        SpherePoint::Finite(xi) => {
            let den = m.conic_denominator(xi);
            // flag infinity on full cancellation of the denominator terms
            let scale = a.norm() * xi.norm_sqr() + (a * b).norm() * xi.norm() + b.norm();
            if den.norm() <= 1e-12 * scale {
                return (SpherePoint::Infinity, SpherePoint::Infinity);
            }
            let x = a * (xi * xi + (b - 1.0) * xi) / den;
            let y = b * ((a - 1.0) * xi + 1.0) / den;
            (SpherePoint::Finite(x), SpherePoint::Finite(y))
        }
    }
}

/// xi-coordinate of the residual intersection point:
/// xi(gamma) = (1 - beta gamma^2) / (gamma^2 - alpha).
pub fn residual_xi(gamma: Complex64, m: &KummerModuli) -> SpherePoint {
    let g2 = gamma * gamma;
    let den = g2 - m.alpha;
    if den.norm() <= 1e-15 * (1.0 + g2.norm()) {
        return SpherePoint::Infinity;
    }
    SpherePoint::Finite((1.0 - m.beta * g2) / den)
}

/// Full fiber-point data for the curve
/// Delta(xi) z = (alpha xi + beta)(xi + beta) gamma.
pub fn fiber_point(gamma: Complex64, m: &KummerModuli) -> FiberPoint {
    let (a, b) = (m.alpha, m.beta);
    let xi = residual_xi(gamma, m);
    let (x, y) = conic_param(xi, m);
    let z = match xi {
        // xi -> infinity: z -> gamma (leading coefficients cancel)
        SpherePoint::Infinity => SpherePoint::Finite(gamma),
        SpherePoint::Finite(xi) => {
            let den = m.conic_denominator(xi);
            let scale = a.norm() * xi.norm_sqr() + (a * b).norm() * xi.norm() + b.norm();
            if den.norm() <= 1e-12 * scale {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite((a * xi + b) * (xi + b) * gamma / den)
            }
        }
    };
    FiberPoint { gamma, xi, x, y, z }
}

/// Relative residual of the fiber-curve equation
/// (Delta(xi))^2 z^2 = (xi + beta)(1 + alpha xi)(beta + alpha xi)^2.
pub fn fiber_equation_residual(p: &FiberPoint, m: &KummerModuli) -> Option<f64> {
    let (a, b) = (m.alpha, m.beta);
    let xi = p.xi.value()?;
    let z = p.z.value()?;
    let den = m.conic_denominator(xi);
    let lhs = den * den * z * z;
    let rhs = (xi + b) * (1.0 + a * xi) * (b + a * xi) * (b + a * xi);
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Some((lhs - rhs).norm() / scale)
}

/// Relative residual of the affine quartic z^2 xy = (x-1)(x-a)(y-1)(y-b).
pub fn kummer_equation_residual(p: &FiberPoint, m: &KummerModuli) -> Option<f64> {
    let (a, b) = (m.alpha, m.beta);
    let x = p.x.value()?;
    let y = p.y.value()?;
    let z = p.z.value()?;
    let lhs = z * z * x * y;
    let rhs = (x - 1.0) * (x - a) * (y - 1.0) * (y - b);
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Some((lhs - rhs).norm() / scale)
}

/// Relative residual of conic membership R(x, y, 1) = xy for mu = 1.
pub fn conic_membership_residual(x: Complex64, y: Complex64, m: &KummerModuli) -> f64 {
    let (a, b) = (m.alpha, m.beta);
    let r = -x * x / a - y * y / b + (a + 1.0) / a * x + (b + 1.0) / b * y - 1.0 - x * y;
    r.norm() / (1.0 + x.norm_sqr() / a.norm() + y.norm_sqr() / b.norm())
}

/// Coordinate on the normalization taking the node preimages to 0 and
/// infinity and the two cover branch points to +-1:
/// zeta = (gamma + sqrt(delta)) / (gamma - sqrt(delta)).
pub fn zeta_coord(gamma: SpherePoint, m: &KummerModuli) -> Result<SpherePoint> {
    let s = m.sqrt_delta()?;
    Ok(match gamma {
        SpherePoint::Infinity => SpherePoint::finite(1.0, 0.0),
        SpherePoint::Finite(g) => {
            let den = g - s;
            if den.norm() <= 1e-300 {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite((g + s) / den)
            }
        }
    })
}

/// Inverse of [`zeta_coord`]: gamma = sqrt(delta) (zeta + 1) / (zeta - 1).
pub fn zeta_inverse(zeta: SpherePoint, m: &KummerModuli) -> Result<SpherePoint> {
    let s = m.sqrt_delta()?;
    Ok(match zeta {
        SpherePoint::Infinity => SpherePoint::Finite(s),
        SpherePoint::Finite(z) => {
            let den = z - 1.0;
            if den.norm() <= 1e-300 {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite(s * (z + 1.0) / den)
            }
        }
    })
}

/// Kodaira fiber types occurring in the pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KodairaType {
    I2,
    I4,
    I6Star,
}

impl std::fmt::Display for KodairaType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KodairaType::I2 => write!(f, "I2"),
            KodairaType::I4 => write!(f, "I4"),
            KodairaType::I6Star => write!(f, "I6*"),
        }
    }
}

/// One entry of the singular-fiber census.
#[derive(Debug, Clone, Copy)]
pub struct CensusEntry {
    pub mu: SpherePoint,
    pub kodaira: KodairaType,
    pub multiplicity: usize,
}

/// Census of singular fibers: six finite positions counted with
/// multiplicity plus the starred fiber at infinity.
#[derive(Debug, Clone)]
pub struct FiberCensus {
    pub entries: Vec<CensusEntry>,
}

impl FiberCensus {
    /// Finite mu values with multiplicity (total multiplicity 6 for valid
    /// moduli).
    pub fn finite_mu_multiset(&self) -> Vec<(Complex64, usize)> {
        self.entries
            .iter()
            .filter_map(|e| e.mu.value().map(|v| (v, e.multiplicity)))
            .collect()
    }
}

/// Positions and types of the singular fibers: the starred fiber at
/// mu = infinity and the six finite values
/// {1, 1/a, 1/b, 1/(ab), (ab+1)/(ab), (a+b)/(ab)} with multiplicity;
/// values colliding within 1e-9 relative merge into a 4-cycle fiber.
pub fn singular_fibers(m: &KummerModuli) -> FiberCensus {
    let (a, b) = (m.alpha, m.beta);
    let one = Complex64::new(1.0, 0.0);
    let finite = [
        one,
        1.0 / a,
        1.0 / b,
        1.0 / (a * b),
        (a * b + 1.0) / (a * b),
        (a + b) / (a * b),
    ];
    let mut used = [false; 6];
    let mut entries = Vec::new();
    for i in 0..6 {
        if used[i] {
            continue;
        }
        let mut mult = 1;
        for j in (i + 1)..6 {
            if used[j] {
                continue;
            }
            let scale = finite[i].norm().max(finite[j].norm()).max(1.0);
            if (finite[i] - finite[j]).norm() <= 1e-9 * scale {
                used[j] = true;
                mult += 1;
            }
        }
        let kodaira = if mult >= 2 {
            KodairaType::I4
        } else {
            KodairaType::I2
        };
        entries.push(CensusEntry {
            mu: SpherePoint::Finite(finite[i]),
            kodaira,
            multiplicity: mult,
        });
    }
    entries.push(CensusEntry {
        mu: SpherePoint::Infinity,
        kodaira: KodairaType::I6Star,
        multiplicity: 1,
    });
    FiberCensus { entries }
}

/// The four branch points of the fiber over its conic, for finite mu:
/// (1, (1-mu) b + 1), (a, (1 - mu a) b + 1), ((1-mu) a + 1, 1),
/// ((1 - mu b) a + 1, b).
pub fn branch_points(mu: Complex64, m: &KummerModuli) -> [(Complex64, Complex64); 4] {
    let (a, b) = (m.alpha, m.beta);
    let one = Complex64::new(1.0, 0.0);
    [
        (one, (1.0 - mu) * b + 1.0),
        (a, (1.0 - mu * a) * b + 1.0),
        ((1.0 - mu) * a + 1.0, one),
        ((1.0 - mu * b) * a + 1.0, b),
    ]
}

/// One row of the special-point table: a gamma^2 value with the closed
/// forms of xi and (x, y) it must map to.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: &'static str,
    pub gamma_sq: SpherePoint,
    pub xi: SpherePoint,
    pub x: SpherePoint,
    pub y: SpherePoint,
}

/// The eight special points relating gamma^2, xi and (x, y) on the nodal
/// fiber. The row over the conic's points at infinity (roots of the
/// parametrization denominator) expands into two concrete rows.
pub fn special_point_table(m: &KummerModuli) -> Result<Vec<TableRow>> {
    let (a, b) = (m.alpha, m.beta);
    let one = Complex64::new(1.0, 0.0);
    let delta = m.delta()?;
    let mut rows = vec![
        TableRow {
            label: "0",
            gamma_sq: SpherePoint::finite(0.0, 0.0),
            xi: SpherePoint::Finite(-1.0 / a),
            x: SpherePoint::Finite(a * (1.0 - b) + 1.0),
            y: SpherePoint::Finite(b),
        },
        TableRow {
            label: "inf",
            gamma_sq: SpherePoint::Infinity,
            xi: SpherePoint::Finite(-b),
            x: SpherePoint::Finite(a),
            y: SpherePoint::Finite(b * (1.0 - a) + 1.0),
        },
        TableRow {
            label: "delta",
            gamma_sq: SpherePoint::Finite(delta),
            xi: SpherePoint::Finite(-b / a),
            x: SpherePoint::Finite(one),
            y: SpherePoint::Finite(one),
        },
        TableRow {
            label: "1/beta",
            gamma_sq: SpherePoint::Finite(1.0 / b),
            xi: SpherePoint::finite(0.0, 0.0),
            x: SpherePoint::finite(0.0, 0.0),
            y: SpherePoint::Finite(one),
        },
        TableRow {
            label: "alpha",
            gamma_sq: SpherePoint::Finite(a),
            xi: SpherePoint::Infinity,
            x: SpherePoint::Finite(one),
            y: SpherePoint::finite(0.0, 0.0),
        },
        TableRow {
            label: "-ab+a+1",
            gamma_sq: SpherePoint::Finite(-a * b + a + 1.0),
            xi: SpherePoint::Finite(1.0 - b),
            x: SpherePoint::finite(0.0, 0.0),
            y: SpherePoint::Finite(b),
        },
        TableRow {
            label: "1/(1+b-ab)",
            gamma_sq: SpherePoint::Finite(1.0 / (1.0 + b - a * b)),
            xi: SpherePoint::Finite(1.0 / (1.0 - a)),
            x: SpherePoint::Finite(a),
            y: SpherePoint::finite(0.0, 0.0),
        },
    ];
    // roots of Delta(xi): the conic's points at infinity
    let disc = (a * b) * (a * b) - 4.0 * a * b;
    let sq = disc.sqrt();
    for (i, sign) in [1.0f64, -1.0].iter().enumerate() {
        let xi_root = (-a * b + sq * *sign) / (2.0 * a);
        // gamma^2 = (1 + a xi) / (xi + b) inverts the residual-point map
        let g2 = (1.0 + a * xi_root) / (xi_root + b);
        rows.push(TableRow {
            label: if i == 0 { "Delta root +" } else { "Delta root -" },
            gamma_sq: SpherePoint::Finite(g2),
            xi: SpherePoint::Finite(xi_root),
            x: SpherePoint::Infinity,
            y: SpherePoint::Infinity,
        });
    }
    Ok(rows)
}

/// Verify one table row by running gamma^2 -> xi -> (x, y) through the
/// parametrizations; returns the worst absolute deviation.
pub fn verify_table_row(row: &TableRow, m: &KummerModuli) -> f64 {
    let mut worst: f64 = 0.0;
    let mut check = |got: SpherePoint, want: SpherePoint| {
        let d = match (got, want) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(g), SpherePoint::Finite(w)) => (g - w).norm(),
            // a finite value against infinity counts as failure
            _ => f64::INFINITY,
        };
        worst = worst.max(d);
    };

    // gamma^2 -> xi through the residual map (directly in gamma^2)
    let xi_got = match row.gamma_sq {
        SpherePoint::Infinity => SpherePoint::Finite(-m.beta),
        SpherePoint::Finite(g2) => {
            let den = g2 - m.alpha;
            if den.norm() <= 1e-13 * (1.0 + g2.norm()) {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite((1.0 - m.beta * g2) / den)
            }
        }
    };
    check(xi_got, row.xi);

    let (x_got, y_got) = conic_param(row.xi, m);
    check(x_got, row.x);
    check(y_got, row.y);
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn moduli(a: f64, b: f64) -> KummerModuli {
        KummerModuli::real(a, b).unwrap()
    }

    #[test]
    fn delta_values() {
        // diagonal cancels to -1
        let m = KummerModuli::new(c(0.37, 0.11), c(0.37, 0.11)).unwrap();
        assert!((m.delta().unwrap() + 1.0).norm() < 1e-14);
        assert!((moduli(0.5, 1.0 / 3.0).delta().unwrap() - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((moduli(1.0 / 3.0, 0.2).delta().unwrap() - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn conic_param_special_values() {
        let m = moduli(0.3, 0.6);
        let (x, y) = conic_param(SpherePoint::finite(0.0, 0.0), &m);
        assert!((x.value().unwrap()).norm() < 1e-15);
        assert!((y.value().unwrap() - 1.0).norm() < 1e-15);
        let (x, y) = conic_param(SpherePoint::Infinity, &m);
        assert!((x.value().unwrap() - 1.0).norm() < 1e-15);
        assert!(y.value().unwrap().norm() < 1e-15);
        let (x, y) = conic_param(SpherePoint::Finite(-m.beta), &m);
        assert!((x.value().unwrap() - m.alpha).norm() < 1e-14);
        assert!((y.value().unwrap() - (m.beta * (1.0 - m.alpha) + 1.0)).norm() < 1e-14);
    }

    #[test]
    fn residual_xi_table_values() {
        let m = moduli(0.3, 0.6);
        // gamma^2 = 1/beta -> 0
        let g = (1.0 / m.beta).sqrt();
        assert!(residual_xi(g, &m).value().unwrap().norm() < 1e-13);
        // gamma^2 = delta -> -beta/alpha
        let g = m.delta().unwrap().sqrt();
        let xi = residual_xi(g, &m).value().unwrap();
        assert!((xi + m.beta / m.alpha).norm() < 1e-13);
        // gamma^2 = -ab + a + 1 -> 1 - beta
        let g = (-m.alpha * m.beta + m.alpha + 1.0).sqrt();
        let xi = residual_xi(g, &m).value().unwrap();
        assert!((xi - (1.0 - m.beta)).norm() < 1e-13);
        // double cover symmetry xi(-gamma) = xi(gamma)
        let g = c(0.83, -0.41);
        let p = residual_xi(g, &m).value().unwrap();
        let q = residual_xi(-g, &m).value().unwrap();
        assert!((p - q).norm() < 1e-15);
    }

    #[test]
    fn fiber_point_at_special_gammas() {
        let m = moduli(0.3, 0.6);
        let p = fiber_point(c(0.0, 0.0), &m);
        assert!((p.x.value().unwrap() - (m.alpha * (1.0 - m.beta) + 1.0)).norm() < 1e-14);
        assert!((p.y.value().unwrap() - m.beta).norm() < 1e-14);
        assert!(p.z.value().unwrap().norm() < 1e-15);
        let p = fiber_point(m.alpha.sqrt(), &m);
        assert!(p.xi.is_infinity());
        assert!((p.x.value().unwrap() - 1.0).norm() < 1e-14);
        assert!(p.y.value().unwrap().norm() < 1e-14);
    }

    #[test]
    fn fiber_equations_hold_at_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = KummerModuli::new(c(0.4, 0.1), c(0.7, 0.0)).unwrap();
        let mut tested = 0;
        while tested < 500 {
            let g = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let p = fiber_point(g, &m);
            let (Some(r1), Some(r2)) = (
                fiber_equation_residual(&p, &m),
                kummer_equation_residual(&p, &m),
            ) else {
                continue;
            };
            if !r1.is_finite() || !r2.is_finite() {
                continue;
            }
            assert!(r1 < 1e-10, "fiber eq residual {r1} at {g}");
            assert!(r2 < 1e-10, "kummer eq residual {r2} at {g}");
            tested += 1;
        }
    }

    #[test]
    fn conic_membership_of_parametrization() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let m = KummerModuli::new(c(0.35, -0.2), c(0.6, 0.15)).unwrap();
        for _ in 0..200 {
            let xi = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let (x, y) = conic_param(SpherePoint::Finite(xi), &m);
            if let (Some(x), Some(y)) = (x.value(), y.value()) {
                let r = conic_membership_residual(x, y, &m);
                assert!(r < 1e-11, "membership residual {r} at xi {xi}");
            }
        }
    }

    #[test]
    fn zeta_round_trip_and_branch_values() {
        let m = moduli(0.3, 0.6);
        let s = m.sqrt_delta().unwrap();
        // gamma = -sqrt(delta) -> 0
        let z = zeta_coord(SpherePoint::Finite(-s), &m).unwrap();
        assert!(z.value().unwrap().norm() < 1e-14);
        // gamma = 0 -> -1, gamma = inf -> 1
        let z = zeta_coord(SpherePoint::finite(0.0, 0.0), &m).unwrap();
        assert!((z.value().unwrap() + 1.0).norm() < 1e-14);
        let z = zeta_coord(SpherePoint::Infinity, &m).unwrap();
        assert!((z.value().unwrap() - 1.0).norm() < 1e-14);
        // round trip at random gamma
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let g = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let z = zeta_coord(SpherePoint::Finite(g), &m).unwrap();
            let back = zeta_inverse(z, &m).unwrap();
            assert!((back.value().unwrap() - g).norm() < 1e-12 * (1.0 + g.norm()));
        }
    }

    #[test]
    fn census_generic_distinct() {
        let m = moduli(1.0 / 3.0, 0.2);
        let census = singular_fibers(&m);
        let mut mus: Vec<f64> = census
            .finite_mu_multiset()
            .iter()
            .map(|(v, _)| v.re)
            .collect();
        mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [1.0, 3.0, 5.0, 8.0, 15.0, 16.0];
        assert_eq!(mus.len(), 6);
        for (got, want) in mus.iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(census
            .entries
            .iter()
            .filter(|e| !e.mu.is_infinity())
            .all(|e| e.kodaira == KodairaType::I2));
    }

    #[test]
    fn census_half_half() {
        let census = singular_fibers(&moduli(0.5, 0.5));
        let mut finite: Vec<(f64, usize, KodairaType)> = census
            .entries
            .iter()
            .filter_map(|e| e.mu.value().map(|v| (v.re, e.multiplicity, e.kodaira)))
            .collect();
        finite.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(finite.len(), 4);
        let want = [
            (1.0, 1, KodairaType::I2),
            (2.0, 2, KodairaType::I4),
            (4.0, 2, KodairaType::I4),
            (5.0, 1, KodairaType::I2),
        ];
        for (got, want) in finite.iter().zip(want.iter()) {
            assert!((got.0 - want.0).abs() < 1e-12);
            assert_eq!(got.1, want.1);
            assert_eq!(got.2, want.2);
        }
        // total finite multiplicity stays 6
        let total: usize = finite.iter().map(|e| e.1).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn census_diagonal_generic_has_one_i4() {
        let census = singular_fibers(&moduli(0.37, 0.37));
        let i4: Vec<_> = census
            .entries
            .iter()
            .filter(|e| e.kodaira == KodairaType::I4)
            .collect();
        assert_eq!(i4.len(), 1);
        let mu = i4[0].mu.value().unwrap();
        assert!((mu - 1.0 / 0.37).norm() < 1e-9);
    }

    #[test]
    fn branch_point_collisions() {
        let m = moduli(0.3, 0.6);
        // mu = 1: first and third coincide at (1,1), creating the node
        let pts = branch_points(c(1.0, 0.0), &m);
        assert!((pts[0].0 - pts[2].0).norm() < 1e-15);
        assert!((pts[0].1 - 1.0).norm() < 1e-15);
        assert!((pts[2].1 - 1.0).norm() < 1e-15);
        // mu = 1/alpha: second point hits (alpha, 1)
        let pts = branch_points(1.0 / m.alpha, &m);
        assert!((pts[1].0 - m.alpha).norm() < 1e-15);
        assert!((pts[1].1 - 1.0).norm() < 1e-14);
        // mu = 0
        let pts = branch_points(c(0.0, 0.0), &m);
        assert!((pts[0].1 - (m.beta + 1.0)).norm() < 1e-15);
        assert!((pts[3].0 - (m.alpha + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn table_reproduces_at_generic_moduli() {
        for m in [
            moduli(0.3, 0.6),
            KummerModuli::new(c(0.4, 0.1), c(0.7, 0.0)).unwrap(),
            moduli(0.37, 0.37),
        ] {
            for row in special_point_table(&m).unwrap() {
                let worst = verify_table_row(&row, &m);
                assert!(worst < 1e-12, "row {} deviates by {worst}", row.label);
            }
        }
    }

    #[test]
    fn validity_predicates() {
        assert!(KummerModuli::real(0.0, 0.5).is_err());
        assert!(KummerModuli::real(1.0, 0.5).is_err());
        let m = moduli(2.0, 0.5); // alpha beta = 1
        assert!(!m.cycle_valid());
        let m = moduli(3.0, 1.5); // alpha + beta = alpha beta = 4.5
        assert!(!m.cycle_valid());
        assert!(moduli(0.5, 0.5).cycle_valid());
    }
}
