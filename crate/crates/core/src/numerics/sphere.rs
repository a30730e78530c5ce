//! Integration of densities over the Riemann sphere by two unit-disk
//! charts.
//!
//! The integral over the full gamma-plane splits as the integral over the
//! closed unit disk plus the pushforward of the exterior under the
//! inversion gamma = 1/w, which contributes f(1/w) / |w|^4 over the unit
//! w-disk. The chart seam |gamma| = 1 has measure zero and is counted by
//! neither chart's interior; registered singularities sitting exactly on
//! the seam are treated by both charts, each on its own side.

use num_complex::Complex64;

use super::cubature::{integrate_2d, Cubature2dOptions, Region};
use super::{QuadratureResult, SingularityRegistry};

fn chart2_registry(registry: &SingularityRegistry) -> SingularityRegistry {
    let mut out = SingularityRegistry::new();
    for s in registry.entries() {
        let r = s.location.norm();
        if r >= 1.0 - 1e-12 {
            out.push(1.0 / s.location, s.kind);
        }
    }
    out
}

fn chart1_registry(registry: &SingularityRegistry) -> SingularityRegistry {
    let mut out = SingularityRegistry::new();
    for s in registry.entries() {
        if s.location.norm() <= 1.0 + 1e-12 {
            out.push(s.location, s.kind);
        }
    }
    out
}

/// Integral of `f` (a density with respect to dx dy in the gamma chart)
/// over the whole sphere. The density must decay fast enough that both
/// chart integrals converge; singularities are declared in gamma
/// coordinates.
pub fn integrate_sphere<F: Fn(Complex64) -> f64 + Sync>(
    f: F,
    registry: &SingularityRegistry,
    opt: &Cubature2dOptions,
) -> QuadratureResult<f64> {
    integrate_sphere_sector(f, registry, opt, None)
}

/// Sphere integral restricted to the upper half plane Im gamma > 0 when
/// `upper_half` is Some(true) (lower for Some(false)); None integrates the
/// whole sphere. Used for parity checks of the regulator integrands.
pub fn integrate_sphere_sector<F: Fn(Complex64) -> f64 + Sync>(
    f: F,
    registry: &SingularityRegistry,
    opt: &Cubature2dOptions,
    upper_half: Option<bool>,
) -> QuadratureResult<f64> {
    use std::f64::consts::PI;
    let reg1 = chart1_registry(registry);
    let reg2 = chart2_registry(registry);

    // Im gamma > 0 corresponds to Im w < 0 under gamma = 1/w.
    let (region1, region2) = match upper_half {
        None => (
            Region::Disk { center: Complex64::new(0.0, 0.0), radius: 1.0 },
            Region::Disk { center: Complex64::new(0.0, 0.0), radius: 1.0 },
        ),
        Some(true) => (
            Region::DiskSector {
                center: Complex64::new(0.0, 0.0),
                radius: 1.0,
                theta0: 0.0,
                theta1: PI,
            },
            Region::DiskSector {
                center: Complex64::new(0.0, 0.0),
                radius: 1.0,
                theta0: PI,
                theta1: 2.0 * PI,
            },
        ),
        Some(false) => (
            Region::DiskSector {
                center: Complex64::new(0.0, 0.0),
                radius: 1.0,
                theta0: PI,
                theta1: 2.0 * PI,
            },
            Region::DiskSector {
                center: Complex64::new(0.0, 0.0),
                radius: 1.0,
                theta0: 0.0,
                theta1: PI,
            },
        ),
    };

    let r1 = integrate_2d(&f, region1, &reg1, opt);
    let g = |w: Complex64| {
        let r2 = w.norm_sqr();
        // the density decays at infinity, so the puncture contributes
        // nothing below any supported tolerance
        if r2 < 1e-36 {
            return 0.0;
        }
        f(1.0 / w) / (r2 * r2)
    };
    let r2 = integrate_2d(g, region2, &reg2, opt);

    QuadratureResult {
        value: r1.value + r2.value,
        err_abs: r1.err_abs + r2.err_abs,
        evals: r1.evals + r2.evals,
        converged: r1.converged && r2.converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fubini_study_area() {
        // density 1/(1+|gamma|^2)^2 integrates to pi over the sphere
        let r = integrate_sphere(
            |z| 1.0 / (1.0 + z.norm_sqr()).powi(2),
            &SingularityRegistry::new(),
            &Cubature2dOptions::with_rel_tol(1e-10),
        );
        assert!(r.converged);
        assert!(((r.value - PI) / PI).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn odd_density_vanishes() {
        let r = integrate_sphere(
            |z| z.re / (1.0 + z.norm_sqr()).powi(3),
            &SingularityRegistry::new(),
            &Cubature2dOptions {
                rel_tol: 1e-8,
                abs_tol: 1e-10,
                ..Default::default()
            },
        );
        assert!(r.value.abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn half_plane_split_sums_to_sphere() {
        let f = |z: Complex64| 1.0 / (1.0 + z.norm_sqr()).powi(2);
        let opt = Cubature2dOptions::with_rel_tol(1e-9);
        let whole = integrate_sphere(f, &SingularityRegistry::new(), &opt);
        let up = integrate_sphere_sector(f, &SingularityRegistry::new(), &opt, Some(true));
        let dn = integrate_sphere_sector(f, &SingularityRegistry::new(), &opt, Some(false));
        assert!(
            (whole.value - up.value - dn.value).abs()
                < whole.err_abs + up.err_abs + dn.err_abs + 1e-11
        );
        // this density is conjugation-symmetric, so each half is pi/2
        assert!(((up.value - PI / 2.0) / PI).abs() < 1e-8);
    }
}
