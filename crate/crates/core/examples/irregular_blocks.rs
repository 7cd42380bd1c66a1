//! Blocks with irregular insertions: the Whittaker pairing, the three-point limit, and the V / IV blocks at infinity.

use virasoro_confluence::painleve::{irregular_block_series, three_point_irregular_block, vacuum_whittaker_block, TauParams};
use virasoro_confluence::scalars::{rat, rational_to_string, PrefactoredSeries, Q};

fn show(name: &str, s: &PrefactoredSeries<Q>) {
    println!("{name}: exponent {}, charges {:?}", rational_to_string(&s.alpha), s.betas.iter().map(rational_to_string).collect::<Vec<_>>());
    println!("  {}", s.coeffs.iter().map(rational_to_string).collect::<Vec<_>>().join(", "));
}

fn main() {
    show("vacuum pairing", &vacuum_whittaker_block(&rat(2, 7), &rat(3, 5), &rat(-1, 3), &rat(1, 1), 4).unwrap());
    show("three point", &three_point_irregular_block(&rat(1, 3), &rat(2, 5), &rat(3, 7), &rat(1, 4), &rat(1, 6), 3).unwrap());
    let v = TauParams::VAtInfty { theta: rat(1, 3), thetat: rat(2, 7), theta0: rat(-1, 5), eta: rat(3, 2), beta: rat(1, 4) };
    for n in -1..=1 {
        show(&format!("V at infinity, n = {n}"), &irregular_block_series(&v, n, 3).unwrap());
    }
    let iv = TauParams::IVAtInfty { theta_star: rat(13, 100), thetat: rat(27, 100), beta: rat(23, 100) };
    show("IV at infinity", &irregular_block_series(&iv, 0, 4).unwrap());
}
