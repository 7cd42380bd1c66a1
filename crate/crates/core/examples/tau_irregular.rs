//! Fifth and fourth equation τ series at infinity: weights, optimal truncation, and the residual.

use virasoro_confluence::painleve::{residual_budget, tau_series, TauParams, TauSpec};
use virasoro_confluence::scalars::bigcomplex::set_digits;
use virasoro_confluence::scalars::{rat, BigComplex};

fn scan(name: &str, params: TauParams, s0: BigComplex, top: usize, step: usize) {
    let series = tau_series(&TauSpec { params, rho: rat(3, 10), n_max: 1, order: top + 1 }).unwrap();
    for m in &series.modes {
        println!("{name} mode {:>2}: phase {}, weight {}", m.n, m.weight.phase, m.weight.ratio.to_json());
    }
    println!("{name} smallest terms: {:?}", series.smallest_terms(&s0));
    for n in (step..=top).step_by(step) {
        match residual_budget(&series, n, &s0, false) {
            Ok(b) => println!("  N = {n}: |E| = {:.4e}, last kept {:.3e}", b.residual.abs(), b.last_kept),
            Err(e) => println!("  N = {n}: {e}"),
        }
    }
}

fn main() {
    set_digits(100);
    let v = TauParams::VAtInfty { theta: rat(13, 100), thetat: rat(27, 100), theta0: rat(31, 100), eta: rat(1, 1), beta: rat(23, 100) };
    scan("V", v, BigComplex::from_rationals(&rat(0, 1), &rat(20, 1)), 5, 1);
    let iv = TauParams::IVAtInfty { theta_star: rat(13, 100), thetat: rat(27, 100), beta: rat(23, 100) };
    scan("IV", iv, BigComplex::from_f64(10.0 * 2f64.sqrt(), 10.0 * 2f64.sqrt()), 6, 2);
}
