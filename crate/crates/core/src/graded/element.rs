use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{AlgebraError, CarrierSpec, Monomial, Role};
use crate::rational::{self, Rational};

/// Sparse rational combination of monomials over one carrier.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    carrier: Arc<CarrierSpec>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(carrier: &Arc<CarrierSpec>) -> Self {
        Element {
            carrier: Arc::clone(carrier),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(carrier: &Arc<CarrierSpec>, c: Rational) -> Self {
        Self::term(carrier, Monomial::one(carrier.len()), c)
    }

    pub fn one(carrier: &Arc<CarrierSpec>) -> Self {
        Self::constant(carrier, Rational::one())
    }

    pub fn term(carrier: &Arc<CarrierSpec>, m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero(carrier);
        e.add_term(m, c);
        e
    }

    pub fn monomial(carrier: &Arc<CarrierSpec>, m: Monomial) -> Self {
        Self::term(carrier, m, Rational::one())
    }

    /// The generator in `slot` as an element.
    pub fn generator(carrier: &Arc<CarrierSpec>, slot: usize) -> Self {
        Self::monomial(carrier, Monomial::generator(carrier.len(), slot))
    }

    pub fn of_role(carrier: &Arc<CarrierSpec>, role: Role, i: usize) -> Self {
        Self::generator(carrier, carrier.slot(role, i))
    }

    /// Product of the generators with `role` at the given indices, in the given order.
    pub fn product_of(carrier: &Arc<CarrierSpec>, role: Role, indices: &[usize]) -> Self {
        indices.iter().fold(Self::one(carrier), |acc, &i| {
            acc.mul(&Self::of_role(carrier, role, i))
        })
    }

    pub fn carrier(&self) -> &Arc<CarrierSpec> {
        &self.carrier
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Monomial, Rational> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.exponents().len(), self.carrier.len());
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        self.check_same(other);
        if c.is_zero() {
            return;
        }
        for (m, q) in &other.terms {
            self.add_term(m.clone(), q * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let mut out = Element::zero(&self.carrier);
        out.add_scaled(self, c);
        out
    }

    fn check_same(&self, other: &Element) {
        assert!(
            self.same_carrier(other),
            "elements live on different carriers"
        );
    }

    pub fn same_carrier(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.carrier, &other.carrier) || self.carrier == other.carrier
    }

    /// Graded-commutative product; errors when the carriers differ.
    pub fn try_mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        if !self.same_carrier(other) {
            return Err(AlgebraError::CarrierMismatch);
        }
        let mut out = Element::zero(&self.carrier);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, m)) = a.mul(b, &self.carrier) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Graded-commutative product. Panics on mismatched carriers; see [`Element::try_mul`].
    pub fn mul(&self, other: &Element) -> Element {
        self.try_mul(other).expect("elements live on different carriers")
    }

    /// Applies a linear map given on monomials.
    pub fn map_linear(&self, mut f: impl FnMut(&Monomial) -> Element) -> Element {
        let mut out = Element::zero(&self.carrier);
        for (m, c) in &self.terms {
            let image = f(m);
            out.add_scaled(&image, c);
        }
        out
    }

    /// Like [`Element::map_linear`] but into another carrier.
    pub fn map_into(
        &self,
        target: &Arc<CarrierSpec>,
        mut f: impl FnMut(&Monomial) -> Element,
    ) -> Element {
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    /// Algebra map sending the generator in slot `s` to `images[s]`, extended
    /// multiplicatively in canonical factor order.
    pub fn substitute(&self, target: &Arc<CarrierSpec>, images: &[Element]) -> Element {
        assert_eq!(images.len(), self.carrier.len(), "one image per generator");
        self.map_into(target, |m| {
            let mut acc = Element::one(target);
            for (s, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&images[s]);
                }
            }
            acc
        })
    }

    /// Derivative acting from the left: `d/dg (g * rest) = rest`.
    pub fn left_derivative(&self, slot: usize) -> Element {
        let carrier = Arc::clone(&self.carrier);
        let odd = carrier.is_odd(slot);
        self.map_linear(|m| {
            let e = m.exponent(slot);
            if e == 0 {
                return Element::zero(&carrier);
            }
            let reduced = m.with_exponent(slot, e - 1);
            let c = if odd {
                rational::sign(m.odd_before(&carrier, slot) as i64)
            } else {
                rational::int(e as i64)
            };
            Element::term(&carrier, reduced, c)
        })
    }

    /// Derivative acting from the right: `(rest * g) d/dg = rest`.
    pub fn right_derivative(&self, slot: usize) -> Element {
        let carrier = Arc::clone(&self.carrier);
        let odd = carrier.is_odd(slot);
        self.map_linear(|m| {
            let e = m.exponent(slot);
            if e == 0 {
                return Element::zero(&carrier);
            }
            let reduced = m.with_exponent(slot, e - 1);
            let c = if odd {
                rational::sign(m.odd_after(&carrier, slot) as i64)
            } else {
                rational::int(e as i64)
            };
            Element::term(&carrier, reduced, c)
        })
    }

    /// Keeps the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            carrier: Arc::clone(&self.carrier),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common value of `f` over all terms, if the element is homogeneous for it.
    pub fn homogeneous<T: PartialEq>(&self, f: impl Fn(&Monomial) -> T) -> Option<T> {
        let mut it = self.terms.keys().map(f);
        let first = it.next()?;
        it.all(|v| v == first).then_some(first)
    }

    pub fn max_count(&self, role: Role) -> u32 {
        self.terms
            .keys()
            .map(|m| m.count(&self.carrier, role))
            .max()
            .unwrap_or(0)
    }

    /// True when the element involves no generators of the listed roles.
    pub fn avoids(&self, roles: &[Role]) -> bool {
        self.terms.keys().all(|m| roles.iter().all(|&r| m.count(&self.carrier, r) == 0))
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.carrier.len()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let body = m.render(&self.carrier);
            if m.is_one() {
                f.write_str(&rational::format(&mag))?;
            } else if mag.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{}*{}", rational::format(&mag), body)?;
            }
        }
        Ok(())
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        Element::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::CarrierKind;

    fn poly(n: usize) -> Arc<CarrierSpec> {
        Arc::new(CarrierSpec::standard(CarrierKind::Polynomial, n))
    }

    #[test]
    fn even_generators_commute() {
        let c = poly(2);
        let x1 = Element::of_role(&c, Role::Coordinate, 0);
        let x2 = Element::of_role(&c, Role::Coordinate, 1);
        assert_eq!(&x1 * &x2, &x2 * &x1);
        assert_eq!((&x1 * &x2).to_string(), "x1*x2");
    }

    #[test]
    fn odd_generators_anticommute() {
        let c = poly(2);
        let t1 = Element::of_role(&c, Role::Vector, 0);
        let t2 = Element::of_role(&c, Role::Vector, 1);
        assert_eq!((&t1 * &t2).to_string(), "d/dx1*d/dx2");
        assert_eq!((&t2 * &t1).to_string(), "-d/dx1*d/dx2");
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn exterior_odd_square_vanishes() {
        let c = Arc::new(CarrierSpec::standard(CarrierKind::Exterior, 2));
        let xi1 = Element::of_role(&c, Role::Coordinate, 0);
        assert!((&xi1 * &xi1).is_zero());
    }

    #[test]
    fn mismatched_carriers_error() {
        let a = Element::one(&poly(2));
        let b = Element::one(&poly(3));
        assert_eq!(a.try_mul(&b), Err(AlgebraError::CarrierMismatch));
    }

    #[test]
    fn derivative_signs() {
        let c = poly(2);
        // t1 t2 dx1: left d/dt2 = -t1 dx1, right d/dt2 = t1 dx1 * (-1)
        let t1 = Element::of_role(&c, Role::Vector, 0);
        let t2 = Element::of_role(&c, Role::Vector, 1);
        let dx1 = Element::of_role(&c, Role::Differential, 0);
        let m = &(&t1 * &t2) * &dx1;
        let s = c.slot(Role::Vector, 1);
        assert_eq!(m.left_derivative(s), -&(&t1 * &dx1));
        assert_eq!(m.right_derivative(s), -&(&t1 * &dx1));
        let s1 = c.slot(Role::Vector, 0);
        assert_eq!(m.left_derivative(s1), &t2 * &dx1);
        assert_eq!(m.right_derivative(s1), &t2 * &dx1);
        let x1 = Element::of_role(&c, Role::Coordinate, 0);
        let x1sq = &x1 * &x1;
        assert_eq!(x1sq.left_derivative(0), x1.scale(&rational::int(2)));
    }
}
