//! Γ at high precision and exact Γ-product bookkeeping for structure-constant ratios.

use virasoro_confluence::painleve::{barnes_shift, gamma, structure_constant_ratio, GammaProduct, TauParams};
use virasoro_confluence::scalars::bigcomplex::set_digits;
use virasoro_confluence::scalars::{rat, BigComplex};

fn main() {
    set_digits(60);
    for (n, d) in [(1, 3), (1, 4), (1, 2)] {
        println!("Γ({n}/{d}) = {}", gamma(&BigComplex::from_rationals(&rat(n, d), &rat(0, 1))).unwrap());
    }
    println!("Γ(7/3) = {}", GammaProduct::gamma(&rat(7, 3)).unwrap().to_json());
    println!("G(1 + 2/5 + 3) / G(1 + 2/5) = {}", barnes_shift(&rat(2, 5), 3).unwrap().to_json());
    let p = TauParams::VIAt0 { theta0: rat(13, 100), thetat: rat(27, 100), theta1: rat(31, 100), thetainf: rat(19, 100), sigma: rat(23, 100) };
    for n in [-2, -1, 1, 2] {
        let r = structure_constant_ratio(&p, n).unwrap();
        println!("C(σ{n:+}) / C(σ) = {}  ≈ {}", r.to_json(), r.value().unwrap());
    }
}
