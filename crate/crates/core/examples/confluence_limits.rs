//! Two operators merging into one of higher rank, checked order by order in ε.

use virasoro_confluence::scalars::rat;
use virasoro_confluence::vertexops::{degeneration_report, rank0_to_1_spec, rank_up_spec};

fn main() {
    let spec = rank0_to_1_spec(rat(1, 3), rat(2, 5), rat(3, 7), rat(1, 4), rat(1, 6), 2);
    let rep = degeneration_report(&spec).unwrap();
    println!("rank 0 -> 1: {}", serde_json::to_string_pretty(&rep.to_json()).unwrap());

    let mut spoiled = spec;
    spoiled.a_shift = rat(1, 1);
    println!("with A + 1: {}", degeneration_report(&spoiled).unwrap().verdict());

    let spec = rank_up_spec(vec![rat(1, 3), rat(2, 5), rat(-3, 4)], rat(3, 7), rat(1, 4), rat(1, 6), 1);
    let rep = degeneration_report(&spec).unwrap();
    println!("rank 1 -> 2: {} over {} orders", rep.verdict(), rep.orders.len());
}
