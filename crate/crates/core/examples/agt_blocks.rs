//! Four-point block two ways: Young-diagram sums and Verma-module solves.

use virasoro_confluence::agt::{block_series_agt, crosscheck_block, verma_block, BlockParams};
use virasoro_confluence::scalars::{rat, rational_to_string, Field};

fn main() {
    let p = BlockParams { theta0: rat(1, 3), thetat: rat(2, 7), theta1: rat(-3, 5), thetainf: rat(1, 4), sigma: rat(2, 9) };
    let agt = block_series_agt(&p, 4).unwrap();
    let verma = verma_block(&p, &p.sigma.square(), 4).unwrap();
    println!("exponent {}", rational_to_string(&agt.alpha));
    for (k, (a, b)) in agt.coeffs.iter().zip(&verma.coeffs).enumerate() {
        println!("t^{k}: {:>40}  {}", rational_to_string(a), if a == b { "=" } else { "≠" });
    }
    println!("orders agreeing: {}", crosscheck_block(&p, 4).unwrap());
}
