pub mod agt;
pub mod cli;
pub mod combinatorics;
pub mod heisenberg;
pub mod painleve;
pub mod scalars;
pub mod vertexops;
pub mod virasoro;
