//! Gram matrices of Verma modules and their zeros on the Kac table.

use virasoro_confluence::combinatorics::enumerate_partitions;
use virasoro_confluence::scalars::linalg::determinant;
use virasoro_confluence::scalars::{rat, rational_to_string, Field};
use virasoro_confluence::virasoro::{pair, partition_word, shapovalov, Module, ModuleVector};

fn main() {
    let (delta, c) = (rat(1, 3), rat(1, 2));
    for level in 1..=3 {
        let g = shapovalov(&delta, &c, level);
        println!("level {level}: {} states, det = {}", g.len(), rational_to_string(&determinant(&g)));
    }

    // c = 13 - 6(t + 1/t), h_{r,s} with rs <= 3
    let t = rat(2, 1) * rat(2, 3).square();
    let c = rat(13, 1) - rat(6, 1) * (t.clone() + t.recip());
    for (r, s) in [(1i64, 2i64), (2, 1), (1, 3)] {
        let h = (rat(r * r - 1, 1) * &t + rat(s * s - 1, 1) / t.clone()) / rat(4, 1) - rat(r * s - 1, 2);
        let det = determinant(&shapovalov(&h, &c, (r * s) as usize));
        println!("h_({r},{s}) = {:>10}  det at level {} = {}", rational_to_string(&h), r * s, rational_to_string(&det));
    }

    let m = Module::verma(delta.clone(), rat(1, 2));
    let v = ModuleVector::basis(&m, partition_word(&enumerate_partitions(2)[0]));
    let lowered = v.act(2);
    println!("L_2 L_-2 |Δ> = {}", lowered.to_json());
    let bra = ModuleVector::basis(&Module::new(virasoro_confluence::virasoro::ModuleKind::DualVerma { delta }, rat(1, 2)), vec![]);
    println!("<Δ| L_2 L_-2 |Δ> = {}", rational_to_string(&pair(&bra, &lowered).unwrap()));
}
