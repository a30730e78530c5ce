use k3reg::regulator::*;
use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let i1 = psi_at_one(1e-6);
    println!("I(1) = {:.9} err {:.2e} evals {} conv {} [{:?}]", i1.value, i1.err_abs, i1.evals, i1.converged, t0.elapsed());
    let t0 = Instant::now();
    let uh = psi_at_one_upper_half(1e-6);
    println!("UHP  = {:.9} ratio sphere/uhp = {:.9} [{:?}]", uh.value, i1.value/uh.value, t0.elapsed());
    for alpha in [0.5, 0.9, 0.99] {
        let t0 = Instant::now();
        let r = psi(alpha, 1e-5).unwrap();
        println!("alpha={alpha}: psi={:.8} eta={:.3e} psin={:?} err={:.2e} evals={} conv={} [{:?}]",
            r.psi, r.eta, r.psi_normalized, r.err_abs, r.evals, r.converged, t0.elapsed());
    }
    println!("-16 I(1) = {:.8}", -16.0*i1.value);
}
