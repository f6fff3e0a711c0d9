//! Differential operators of a Poisson structure on polynomial and exterior
//! carriers.

pub mod exterior;
pub mod polynomial;
mod structure;

pub use structure::{expand_quadratic, BivectorTerm, PoissonStructure, QuadraticConstants};

use thiserror::Error;

use crate::graded::{Element, Role};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("not a polyvector: {0}")]
    NotPolyvector(String),
    #[error("not a bivector: {0}")]
    NotBivector(String),
    #[error("frame ({0}, {1}) is not a pair of distinct coordinates")]
    BadFrame(usize, usize),
    #[error("invalid coefficient monomial {0}")]
    BadMonomial(String),
    #[error("bivector is not homogeneous for the scaling weight: {0}")]
    NotHomogeneous(String),
    #[error("contraction with the volume form is singular at {0}")]
    SingularContraction(String),
    #[error("modular vector fails the {check} check: {witness}")]
    ModularCheck { check: &'static str, witness: String },
}

/// Schouten bracket of polyvectors on either carrier.
///
/// With coordinates `q_i` and their derivations `p_i`,
/// `[P, Q] = sum_i (P <- d/dp_i)(d/dq_i -> Q) - (P <- d/dq_i)(d/dp_i -> Q)`,
/// so `[d/dq_i, q_i] = 1` and vector fields bracket by commutator.
pub fn schouten(p: &Element, q: &Element) -> Result<Element, CalculusError> {
    for e in [p, q] {
        if !e.avoids(&[Role::Differential, Role::Dual]) {
            return Err(CalculusError::NotPolyvector(e.to_string()));
        }
    }
    let c = p.carrier();
    let mut out = Element::zero(c);
    for i in 0..c.n() {
        let (qs, ps) = (c.slot(Role::Coordinate, i), c.slot(Role::Vector, i));
        out = &out + &p.right_derivative(ps).mul(&q.left_derivative(qs));
        out = &out - &p.right_derivative(qs).mul(&q.left_derivative(ps));
    }
    Ok(out)
}
