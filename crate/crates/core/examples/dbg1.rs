use k3reg::numerics::*;
use k3reg::Complex64;
fn main() {
    let c = 0.3;
    let reg = SingularityRegistry::new().with(Complex64::new(c, 0.0), SingularityKind::InverseModulus);
    for tol in [1e-6, 1e-8, 1e-10] {
        let r = integrate_2d(
            |z: Complex64| 1.0 / (z - c).norm(),
            Region::Disk { center: Complex64::new(0.0, 0.0), radius: 1.0 },
            &reg,
            &Cubature2dOptions::with_rel_tol(tol),
        );
        println!("tol={tol:.0e} value={:.12} err={:.3e} evals={} conv={}", r.value, r.err_abs, r.evals, r.converged);
    }
}
