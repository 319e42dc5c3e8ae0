//! Cayley distance to subgroups generated by involutions with disjoint
//! support, polarized switching circuits, and the parsimonious reductions
//! 3-SAT → maximal routing → subgroup distance, with brute-force oracles for
//! every correspondence.

pub mod circuit;
pub mod cli;
pub mod format;
pub mod gadget;
pub mod perm;
pub mod sat;
pub mod reduction;
pub mod solver;
