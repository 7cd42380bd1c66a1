//! Sixth-equation τ function at 0 and at infinity, with the σ-form residual against the truncation budget.

use virasoro_confluence::painleve::{residual_budget, tau_series, TauParams, TauSpec};
use virasoro_confluence::scalars::bigcomplex::set_digits;
use virasoro_confluence::scalars::{rat, BigComplex};

fn main() {
    set_digits(100);
    let params = TauParams::VIAt0 { theta0: rat(13, 100), thetat: rat(27, 100), theta1: rat(31, 100), thetainf: rat(19, 100), sigma: rat(23, 100) };
    let series = tau_series(&TauSpec { params: params.clone(), rho: rat(3, 10), n_max: 2, order: 9 }).unwrap();
    let t0 = BigComplex::from_rationals(&rat(1, 20), &rat(0, 1));
    println!("t = 1/20");
    for n in 2..=8 {
        let b = residual_budget(&series, n, &t0, false).unwrap();
        println!("  N = {n}: |E| = {:.3e}, first dropped {:.3e}, lost digits {:.1}", b.residual.abs(), b.first_dropped, b.residual.lost_digits);
    }

    let TauParams::VIAt0 { theta0, thetat, theta1, thetainf, sigma } = params else { unreachable!() };
    let at_infty = TauParams::VIAtInfty { theta0, thetat, theta1, thetainf, sigma };
    let series = tau_series(&TauSpec { params: at_infty, rho: rat(3, 10), n_max: 2, order: 6 }).unwrap();
    let t0 = BigComplex::from_rationals(&rat(20, 1), &rat(0, 1));
    println!("t = 20");
    for n in 2..=5 {
        let b = residual_budget(&series, n, &t0, false).unwrap();
        println!("  N = {n}: |E| = {:.3e}, first dropped {:.3e}", b.residual.abs(), b.first_dropped);
    }
}
