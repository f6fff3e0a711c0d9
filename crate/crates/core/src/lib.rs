pub mod calculus;
pub mod graded;
pub mod rational;
pub mod spectral;
pub mod homology;
pub mod bv;
pub mod checks;
pub mod gravity;
pub mod koszul;
pub mod identities;
