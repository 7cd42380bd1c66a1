//! Free-field realization: Verma vectors in the Fock space and back, and `:e^{λφ}:`.

use virasoro_confluence::heisenberg::{apply_exp_vo, delta_of_lambda, fock_dictionary, DictVector, Direction, FockConfig, FockVector};
use virasoro_confluence::scalars::{rat, rational_to_string};
use virasoro_confluence::virasoro::{Module, ModuleVector};

fn main() {
    let rho = rat(1, 6);
    let cfg = FockConfig::new(rho.clone());
    let lambda = rat(2, 5);
    let delta = delta_of_lambda(&lambda, &rho);
    println!("c = {}, Δ(λ) = {}", rational_to_string(&cfg.central_charge()), rational_to_string(&delta));

    let m = Module::verma(delta, cfg.central_charge());
    let v = ModuleVector::from_terms(&m, [(vec![-2], rat(1, 1)), (vec![-1, -1], rat(-3, 2))]);
    let DictVector::Fock(f) = fock_dictionary(Direction::ToFock, &DictVector::Verma(v.clone(), vec![lambda]), &cfg).unwrap() else { unreachable!() };
    println!("Fock image: {}", f.to_json());
    let DictVector::Verma(back, _) = fock_dictionary(Direction::ToVerma, &DictVector::Fock(f), &cfg).unwrap() else { unreachable!() };
    println!("round trip exact: {}", back.sub(&v).is_zero());

    let s = apply_exp_vo(&rat(1, 3), &FockVector::base(vec![rat(2, 5), rat(3, 4)]), 2);
    println!("z-exponent {}, charges {:?}", rational_to_string(&s.alpha), s.betas.iter().map(rational_to_string).collect::<Vec<_>>());
    for (m, c) in s.coeffs.iter().enumerate() {
        println!("  z^{m}: {}", c.to_json());
    }
}
