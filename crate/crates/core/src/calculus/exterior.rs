//! Operators on `Lambda(xi_1..xi_n)`.
//!
//! Polyvectors are elements of `Lambda(xi, d/dxi)`, forms of `Lambda(xi, dxi)`,
//! and the coefficient complex of the dual coalgebra is `Lambda(d/dxi, xi^*)`.
//! The pairing lets `xi_i^*` act as `d/dxi_i` and `d/dxi_i` as `d/d(dxi_i)`,
//! with the factor written last acting first.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{schouten, CalculusError, PoissonStructure};
use crate::graded::{CarrierSpec, Element, Monomial, Role};
use crate::rational::{self, Rational};

fn present(c: &CarrierSpec, m: &Monomial, role: Role) -> Vec<usize> {
    (0..c.n()).filter(|&i| m.exponent(c.slot(role, i)) > 0).collect()
}

fn keep_only(c: &CarrierSpec, m: &Monomial, roles: &[Role]) -> Monomial {
    let mut e = m.exponents().to_vec();
    for (s, g) in c.generators().iter().enumerate() {
        if !roles.contains(&g.role) {
            e[s] = 0;
        }
    }
    Monomial::from_exponents(e)
}

/// `xi_1^* .. xi_n^*`.
pub fn volume(c: &Arc<CarrierSpec>) -> Element {
    Element::product_of(c, Role::Dual, &(0..c.n()).collect::<Vec<_>>())
}

/// Cap action of `p` in `Lambda(xi, d/dxi)` on `x` in `Lambda(d/dxi, xi^*)`:
/// `xi_i` acts as `d/dxi_i^*` and `d/dxi_i` multiplies.
pub fn cap(p: &Element, x: &Element) -> Element {
    let c = Arc::clone(p.carrier());
    let mut out = Element::zero(&c);
    for (m, q) in p.terms() {
        let mut v = x.clone();
        for &i in present(&c, m, Role::Coordinate).iter().rev() {
            v = v.left_derivative(c.slot(Role::Dual, i));
        }
        let multiplier = Element::term(&c, keep_only(&c, m, &[Role::Vector]), q.clone());
        out = &out + &multiplier.mul(&v);
    }
    out
}

pub fn cap_volume(p: &Element) -> Element {
    cap(p, &volume(p.carrier()))
}

/// Inverse of `p -> cap(p, eta^!)`, monomial by monomial.
pub fn cap_volume_inverse(x: &Element) -> Result<Element, CalculusError> {
    let c = Arc::clone(x.carrier());
    let eta = volume(&c);
    let mut out = Element::zero(&c);
    for (m, q) in x.terms() {
        let duals = present(&c, m, Role::Dual);
        let complement: Vec<usize> = (0..c.n()).filter(|i| !duals.contains(i)).collect();
        let xi = Element::product_of(&c, Role::Coordinate, &complement);
        let image = cap(&xi, &eta);
        let target = keep_only(&c, m, &[Role::Dual]);
        let s = image.coefficient(&target);
        if s.is_zero() || image.len() != 1 {
            return Err(CalculusError::SingularContraction(m.render(&c)));
        }
        let multiplier = Element::term(&c, keep_only(&c, m, &[Role::Vector]), q / s);
        out = &out + &xi.mul(&multiplier);
    }
    Ok(out)
}

/// De Rham differential of `Lambda(xi, dxi)`: `sum dxi_i d/dxi_i` from the left.
pub fn form_differential(omega: &Element) -> Element {
    let c = Arc::clone(omega.carrier());
    let mut out = Element::zero(&c);
    for i in 0..c.n() {
        let d = Element::of_role(&c, Role::Differential, i);
        out = &out + &d.mul(&omega.left_derivative(c.slot(Role::Coordinate, i)));
    }
    out
}

/// Contraction of a polyvector into a form: `d/dxi_i` acts as `d/d(dxi_i)`.
pub fn form_contract(p: &Element, omega: &Element) -> Element {
    let c = Arc::clone(p.carrier());
    let mut out = Element::zero(&c);
    for (m, q) in p.terms() {
        let mut v = omega.clone();
        for i in 0..c.n() {
            for _ in 0..m.exponent(c.slot(Role::Vector, i)) {
                v = v.left_derivative(c.slot(Role::Differential, i));
            }
        }
        let multiplier = Element::term(&c, keep_only(&c, m, &[Role::Coordinate]), q.clone());
        out = &out + &multiplier.mul(&v);
    }
    out
}

/// `<f, omega>` for `f` in `Lambda(d/dxi, xi^*)` and `omega` in `Lambda(xi, dxi)`.
pub fn pairing(f: &Element, omega: &Element) -> Rational {
    let c = Arc::clone(f.carrier());
    let mut total = Rational::zero();
    for (m, q) in f.terms() {
        let mut v = omega.clone();
        for &i in present(&c, m, Role::Dual).iter().rev() {
            v = v.left_derivative(c.slot(Role::Coordinate, i));
        }
        for i in 0..c.n() {
            for _ in 0..m.exponent(c.slot(Role::Vector, i)) {
                v = v.left_derivative(c.slot(Role::Differential, i));
            }
        }
        total += q * v.constant_term();
    }
    total
}

/// Form monomial dual to `m`: `(d/dxi)^a xi^*_S <-> xi_S dxi^a`.
pub fn dual_form(c: &CarrierSpec, m: &Monomial) -> Monomial {
    let mut e = vec![0; c.len()];
    for i in 0..c.n() {
        e[c.slot(Role::Coordinate, i)] = m.exponent(c.slot(Role::Dual, i));
        e[c.slot(Role::Differential, i)] = m.exponent(c.slot(Role::Vector, i));
    }
    Monomial::from_exponents(e)
}

fn dual_functional(c: &CarrierSpec, omega: &Monomial) -> Monomial {
    let mut e = vec![0; c.len()];
    for i in 0..c.n() {
        e[c.slot(Role::Dual, i)] = omega.exponent(c.slot(Role::Coordinate, i));
        e[c.slot(Role::Vector, i)] = omega.exponent(c.slot(Role::Differential, i));
    }
    Monomial::from_exponents(e)
}

/// Graded transpose of [`form_differential`] under [`pairing`]:
/// `<d* f, omega> = (-1)^{|f|} <f, d omega>` with `|f|` the number of `xi^*`.
///
/// Only forms whose differential meets the dual of `f` contribute, so the
/// transpose is assembled from those candidates instead of a full slice.
pub fn dual_de_rham(x: &Element) -> Element {
    let c = Arc::clone(x.carrier());
    x.map_linear(|m| {
        let duals = present(&c, m, Role::Dual);
        let sign = rational::sign(duals.len() as i64);
        let base = dual_form(&c, m);
        let f = Element::monomial(&c, m.clone());
        let mut out = Element::zero(&c);
        for i in 0..c.n() {
            let dslot = c.slot(Role::Differential, i);
            let xslot = c.slot(Role::Coordinate, i);
            if base.exponent(dslot) == 0 || base.exponent(xslot) == 1 {
                continue;
            }
            let mut e = base.exponents().to_vec();
            e[dslot] -= 1;
            e[xslot] = 1;
            let omega = Monomial::from_exponents(e);
            let entry = pairing(&f, &form_differential(&Element::monomial(&c, omega.clone())));
            if entry.is_zero() {
                continue;
            }
            let mu = dual_functional(&c, &omega);
            let gram = pairing(&Element::monomial(&c, mu.clone()), &Element::monomial(&c, omega));
            out.add_term(mu, &sign * entry / gram);
        }
        out
    })
}

/// `Div^! = cap^{-1} d* cap` with respect to `eta^!`.
pub fn divergence(p: &Element) -> Result<Element, CalculusError> {
    cap_volume_inverse(&dual_de_rham(&cap_volume(p)))
}

/// `nu^! = -Div^!(pi^!)`, checked to be a Poisson derivation and a cocycle.
pub fn modular_vector(pi: &PoissonStructure) -> Result<Element, CalculusError> {
    let nu = divergence(pi.bivector())?.scale(&-Rational::one());
    if pi.jacobi_check().is_ok() {
        let bracket = schouten(&nu, pi.bivector())?;
        if !bracket.is_zero() {
            return Err(CalculusError::ModularCheck {
                check: "Poisson derivation",
                witness: bracket.to_string(),
            });
        }
        let cob = coboundary(pi, &nu);
        if !cob.is_zero() {
            return Err(CalculusError::ModularCheck {
                check: "cocycle",
                witness: cob.to_string(),
            });
        }
    }
    Ok(nu)
}

/// Cochain differential `P -> [pi^!, P]`.
pub fn coboundary(pi: &PoissonStructure, p: &Element) -> Element {
    schouten(pi.bivector(), p).expect("polyvector input")
}

/// Boundary on `Lambda(d/dxi, xi^*)`: the commutator `d* cap_pi - cap_pi d*`.
pub fn boundary(pi: &PoissonStructure, x: &Element) -> Element {
    let b = pi.bivector();
    &dual_de_rham(&cap(b, x)) - &cap(b, &dual_de_rham(x))
}

/// Boundary twisted by `nu^!`, acting through the cap action.
pub fn twisted_boundary(pi: &PoissonStructure, nu: &Element, x: &Element) -> Element {
    &boundary(pi, x) + &cap(nu, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::BivectorTerm;
    use crate::graded::{slice_basis, CarrierKind, Selector};
    use crate::rational::int;

    fn carrier(n: usize) -> Arc<CarrierSpec> {
        Arc::new(CarrierSpec::standard(CarrierKind::Exterior, n))
    }

    fn dual_pi(c: &Arc<CarrierSpec>, q: i64) -> PoissonStructure {
        // q xi1 xi2 d/dxi1 d/dxi2
        PoissonStructure::from_terms(
            c,
            &[BivectorTerm {
                coeff: int(q),
                exponents: vec![1, 1],
                frame: (0, 1),
            }],
        )
        .unwrap()
    }

    fn functionals(c: &CarrierSpec, p: u32, w: i64) -> Vec<Monomial> {
        let sel = Selector::new(&[Role::Vector, Role::Dual]).count(Role::Dual, p).weight(w);
        slice_basis(c, &sel).unwrap()
    }

    fn forms(c: &CarrierSpec, p: u32, w: i64) -> Vec<Monomial> {
        let sel = Selector::new(&[Role::Coordinate, Role::Differential])
            .count(Role::Coordinate, p)
            .weight(w);
        slice_basis(c, &sel).unwrap()
    }

    #[test]
    fn pairing_is_diagonal_and_nondegenerate() {
        let c = carrier(2);
        for p in 0..=2 {
            for w in 0..=3 {
                let fs = functionals(&c, p, w);
                let ws = forms(&c, p, -w);
                assert_eq!(fs.len(), ws.len());
                for f in &fs {
                    for om in &ws {
                        let v = pairing(&Element::monomial(&c, f.clone()), &Element::monomial(&c, om.clone()));
                        assert_eq!(!v.is_zero(), dual_form(&c, f) == *om);
                    }
                }
            }
        }
    }

    #[test]
    fn dual_de_rham_is_graded_transpose() {
        let c = carrier(2);
        for p in 0..2u32 {
            for w in 0..=3 {
                for f in functionals(&c, p, w) {
                    let fe = Element::monomial(&c, f.clone());
                    let df = dual_de_rham(&fe);
                    for om in forms(&c, p + 1, -w) {
                        let oe = Element::monomial(&c, om);
                        let lhs = pairing(&df, &oe);
                        let rhs = rational::sign(p as i64) * pairing(&fe, &form_differential(&oe));
                        assert_eq!(lhs, rhs);
                    }
                    assert!(dual_de_rham(&df).is_zero());
                }
            }
        }
    }

    #[test]
    fn counit_is_closed() {
        let c = carrier(2);
        assert!(dual_de_rham(&Element::one(&c)).is_zero());
    }

    #[test]
    fn cap_volume_round_trip() {
        let c = carrier(3);
        let sel = Selector::new(&[Role::Coordinate, Role::Vector]).weight(1);
        for m in slice_basis(&c, &sel).unwrap() {
            let e = Element::monomial(&c, m);
            let image = cap_volume(&e);
            assert_eq!(image.len(), 1);
            assert_eq!(cap_volume_inverse(&image).unwrap(), e);
        }
    }

    #[test]
    fn dual_modular_vector() {
        let c = carrier(2);
        let pi = dual_pi(&c, 1);
        let nu = modular_vector(&pi).unwrap();
        let xi1z1 = Element::of_role(&c, Role::Coordinate, 0).mul(&Element::of_role(&c, Role::Vector, 0));
        let xi2z2 = Element::of_role(&c, Role::Coordinate, 1).mul(&Element::of_role(&c, Role::Vector, 1));
        assert_eq!(nu, &xi1z1 - &xi2z2);
        assert!(modular_vector(&dual_pi(&c, 0)).unwrap().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let c = carrier(2);
        let pi = dual_pi(&c, 3);
        let nu = modular_vector(&pi).unwrap();
        for p in 0..=2 {
            for w in 0..=4 {
                for m in functionals(&c, p, w) {
                    let e = Element::monomial(&c, m);
                    assert!(boundary(&pi, &boundary(&pi, &e)).is_zero());
                    let once = twisted_boundary(&pi, &nu, &e);
                    assert!(twisted_boundary(&pi, &nu, &once).is_zero());
                }
            }
        }
    }
}
