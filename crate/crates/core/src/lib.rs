//! Cohomological lower bounds for Lusternik-Schnirelmann category over GF(2),
//! and checks of the known criteria under which a degree-one map
//! `f: M -> N` forces `cat M >= cat N`.

pub mod algebra;
pub mod catalogue;
pub mod f2;
pub mod invariants;
pub mod maps;
