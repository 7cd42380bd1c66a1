//! Solving regular and irregular vertex operators order by order.

use virasoro_confluence::heisenberg::{delta_of_lambda, lambda_of_lambdas};
use virasoro_confluence::scalars::{rat, rational_to_string, Q};
use virasoro_confluence::vertexops::{alpha_beta_closed_form, irregular_vo_coeffs, regular_vo_coeffs};

fn show(xs: &[Q]) -> Vec<String> {
    xs.iter().map(rational_to_string).collect()
}

fn main() {
    let vo = regular_vo_coeffs(&rat(1, 3), &rat(2, 7), &rat(-1, 5), &rat(1, 1), 3).unwrap();
    println!("regular: α = {}, relations hold through n = {}", rational_to_string(&vo.alpha), vo.check_recursion(5).unwrap());
    for (m, v) in vo.coeffs.iter().enumerate() {
        println!("  v_{m} = {}", v.to_json());
    }

    let vo = irregular_vo_coeffs(2, &[rat(2, 3), rat(-5, 7), rat(3, 4)], &rat(1, 5), &rat(2, 7), &rat(-3, 2), 2).unwrap();
    println!("rank 2: α = {}, β = {:?}", rational_to_string(&vo.alpha), show(&vo.betas));

    // free-field weights give closed forms for α and β
    let rho = rat(1, 6);
    let lambdas = [rat(1, 3), rat(2, 5), rat(-3, 4)];
    let lz = rat(3, 7);
    let weights = lambda_of_lambdas(&lambdas, &rho, 2).unwrap();
    let c = rat(1, 1) - rat(12, 1) * rho.clone() * &rho;
    let solved = irregular_vo_coeffs(2, &weights, &rat(1, 2), &delta_of_lambda(&lz, &rho), &c, 0).unwrap();
    let (alpha, betas) = alpha_beta_closed_form(2, &lambdas, &lz, &rat(1, 2), &rho).unwrap();
    println!("closed form α = {}, β_1 = {:?}; solver α = {}", rational_to_string(&alpha), show(&betas), rational_to_string(&solved.alpha));
}
