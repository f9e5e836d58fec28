pub mod anosov_orbits;
pub mod bv_gauge;
pub mod cli;
pub mod graded_linalg;
pub mod linalg;
pub mod oracles;
pub mod ruelle_zeta;
pub mod twisted_complex;
pub mod verify;
