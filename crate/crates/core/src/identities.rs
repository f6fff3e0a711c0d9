//! Slice-by-slice checks of the differential and contraction identities.

use crate::calculus::{exterior, polynomial};
use crate::checks::Check;
use crate::graded::{CarrierKind, Element};
use crate::homology::{Complex, Duality, EngineError};
use crate::rational;

/// `d^2 = 0` as a matrix identity on every slice of the window.
pub fn check_square_zero(complex: &Complex) -> Result<Check, EngineError> {
    let mut check = Check::new(format!("{} differential squares to zero", complex.variant().name()));
    for a in complex.addresses()? {
        let next = complex.step(&a);
        let dd = complex.differential_matrix(&next)?.mul(&complex.differential_matrix(&a)?);
        check.record(dd.is_zero(), || format!("at {a}"));
    }
    Ok(check)
}

/// Which form of the contraction identity to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapIdentity {
    /// Polynomial: `(-1)^{|P|-1} d(P cap eta) - nu.(P cap eta) = (delta P) cap eta`
    /// with `nu.(P cap eta) = i_P i_nu eta`; exterior:
    /// `d(P cap eta^!) + nu^! cap (P cap eta^!) = (delta P) cap eta^!`.
    Literal,
    /// `(delta P) cap eta = s (d + nu)(P cap eta)` with one sign `s` for all degrees,
    /// `nu` acting on the contracted element directly.
    Uniform,
}

/// Runs `form` on every cochain basis vector of the window. For `Uniform` the
/// sign is `-1` on the polynomial carrier and `+1` on the exterior carrier.
pub fn check_cap_identity(duality: &Duality, nu: &Element, form: CapIdentity) -> Result<Check, EngineError> {
    let kind = duality.carrier().kind();
    let label = match form {
        CapIdentity::Literal => "literal contraction identity",
        CapIdentity::Uniform => "uniform contraction identity",
    };
    let mut check = Check::new(format!("{label} ({})", duality.cochain.variant().name()));
    let pi = duality.cochain.structure();
    let eta = duality.volume();
    let untwisted = |x: &Element| match kind {
        CarrierKind::Polynomial => polynomial::boundary(pi, x),
        CarrierKind::Exterior => exterior::boundary(pi, x),
    };
    let act = |p: &Element, x: &Element| match kind {
        CarrierKind::Polynomial => polynomial::contract(p, x),
        CarrierKind::Exterior => exterior::cap(p, x),
    };
    for a in duality.cochain.addresses()? {
        for m in duality.cochain.basis(&a)?.iter() {
            let p = Element::monomial(duality.carrier(), m.clone());
            let capped = duality.map(&p);
            let rhs = duality.map(&duality.cochain.differential(&p));
            let lhs = match (form, kind) {
                (CapIdentity::Literal, CarrierKind::Polynomial) => {
                    let sign = rational::sign(a.degree - 1);
                    &untwisted(&capped).scale(&sign) - &act(&p, &act(nu, &eta))
                }
                (CapIdentity::Literal, CarrierKind::Exterior) => &untwisted(&capped) + &act(nu, &capped),
                (CapIdentity::Uniform, _) => {
                    let s = if kind == CarrierKind::Polynomial { -1 } else { 1 };
                    (&untwisted(&capped) + &act(nu, &capped)).scale(&rational::int(s))
                }
            };
            check.record(lhs == rhs, || format!("P = {p} at {a}: left {lhs}, right {rhs}"));
        }
    }
    Ok(check)
}

/// Equal homology dimensions at matching addresses, with the contraction
/// map invertible on every slice.
pub fn check_duality(duality: &Duality) -> Result<Check, EngineError> {
    let mut check = Check::new(format!("twisted duality ({})", duality.cochain.variant().name()));
    for a in duality.cochain.addresses()? {
        let b = duality.dual_address(&a);
        let m = duality.map_matrix(&a)?;
        let full = m.rows() == m.cols() && m.rank() == m.cols();
        let (h, dual) = (duality.cochain.homology(&a)?.dim(), duality.chain.homology(&b)?.dim());
        check.record(full && h == dual, || {
            format!("at {a}: cohomology {h}, homology at {b} {dual}, map rank {} of {}x{}", m.rank(), m.rows(), m.cols())
        });
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::calculus::{BivectorTerm, PoissonStructure};
    use crate::graded::CarrierSpec;
    use crate::koszul;
    use crate::rational::int;
    use crate::spectral::analyze_modular;

    fn log_plane() -> PoissonStructure {
        let c = Arc::new(CarrierSpec::standard(CarrierKind::Polynomial, 2));
        PoissonStructure::from_terms(
            &c,
            &[BivectorTerm {
                coeff: int(1),
                exponents: vec![1, 1],
                frame: (0, 1),
            }],
        )
        .unwrap()
    }

    fn duality(pi: &PoissonStructure, window: i64) -> (Duality, Element) {
        let nu = match pi.kind() {
            CarrierKind::Polynomial => polynomial::modular_vector(pi).unwrap(),
            CarrierKind::Exterior => exterior::modular_vector(pi).unwrap(),
        };
        let spectrum = analyze_modular(&nu);
        (Duality::new(pi, &nu, Some(spectrum.eigenvalues), window).unwrap(), nu)
    }

    #[test]
    fn squares_vanish() {
        let (d, _) = duality(&log_plane(), 2);
        assert!(check_square_zero(&d.cochain).unwrap().passed);
        assert!(check_square_zero(&d.chain).unwrap().passed);
    }

    #[test]
    fn contraction_identities() {
        let (d, nu) = duality(&log_plane(), 2);
        assert!(check_cap_identity(&d, &nu, CapIdentity::Uniform).unwrap().passed);
        // the literal polynomial form carries (-1)^{|P|-1} where -1 is needed
        let literal = check_cap_identity(&d, &nu, CapIdentity::Literal).unwrap();
        assert!(!literal.passed && literal.witness.unwrap().contains("p=1"));
        let dual = koszul::koszul_dual(&log_plane()).unwrap().dual;
        let (e, nu_dual) = duality(&dual, 2);
        assert!(check_cap_identity(&e, &nu_dual, CapIdentity::Uniform).unwrap().passed);
        assert!(check_cap_identity(&e, &nu_dual, CapIdentity::Literal).unwrap().passed);
        assert!(check_duality(&d).unwrap().passed);
        assert!(check_duality(&e).unwrap().passed);
    }
}
