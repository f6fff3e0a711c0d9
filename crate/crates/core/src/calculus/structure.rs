use std::collections::BTreeMap;
use std::sync::Arc;

use super::{schouten, CalculusError};
use crate::graded::{CarrierKind, CarrierSpec, Element, Monomial, Role};
use crate::rational::Rational;

/// `c[(i1, i2), (j1, j2)]` with `i1 <= i2`, `j1 < j2`, 0-based.
///
/// On a polynomial carrier the bivector is `sum c x_i1 x_i2 d_j1 ^ d_j2`; on an
/// exterior carrier it is `sum c xi_j1 xi_j2 d/dxi_i1 d/dxi_i2`.
pub type QuadraticConstants = BTreeMap<((usize, usize), (usize, usize)), Rational>;

/// One input term `coeff * monomial * frame_0 ^ frame_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivectorTerm {
    pub coeff: Rational,
    /// Exponents of the coordinates.
    pub exponents: Vec<u32>,
    pub frame: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonStructure {
    carrier: Arc<CarrierSpec>,
    bivector: Element,
    quadratic: Option<QuadraticConstants>,
}

impl PoissonStructure {
    pub fn new(bivector: Element) -> Result<Self, CalculusError> {
        let carrier = Arc::clone(bivector.carrier());
        if !bivector.avoids(&[Role::Differential, Role::Dual])
            || bivector.terms().any(|(m, _)| m.count(&carrier, Role::Vector) != 2)
        {
            return Err(CalculusError::NotBivector(bivector.to_string()));
        }
        let quadratic = extract_quadratic(&bivector);
        Ok(PoissonStructure {
            carrier,
            bivector,
            quadratic,
        })
    }

    pub fn from_terms(carrier: &Arc<CarrierSpec>, terms: &[BivectorTerm]) -> Result<Self, CalculusError> {
        let n = carrier.n();
        let mut pi = Element::zero(carrier);
        for t in terms {
            let (i, j) = t.frame;
            if i == j || i >= n || j >= n {
                return Err(CalculusError::BadFrame(i, j));
            }
            if t.exponents.len() != n {
                return Err(CalculusError::BadMonomial(format!("{:?}", t.exponents)));
            }
            let mut exps = vec![0; carrier.len()];
            for (k, &e) in t.exponents.iter().enumerate() {
                exps[carrier.slot(Role::Coordinate, k)] = e;
            }
            let coefficient = Element::monomial(carrier, Monomial::from_exponents(exps));
            if coefficient.is_zero() || t.exponents.iter().any(|&e| e > 1) && carrier.kind() == CarrierKind::Exterior {
                return Err(CalculusError::BadMonomial(format!("{:?}", t.exponents)));
            }
            let frame = Element::product_of(carrier, Role::Vector, &[i, j]);
            pi.add_scaled(&coefficient.mul(&frame), &t.coeff);
        }
        Self::new(pi)
    }

    /// Expands quadratic constants into a bivector.
    pub fn from_quadratic(carrier: &Arc<CarrierSpec>, constants: &QuadraticConstants) -> Result<Self, CalculusError> {
        Self::new(expand_quadratic(carrier, constants))
    }

    pub fn carrier(&self) -> &Arc<CarrierSpec> {
        &self.carrier
    }

    pub fn bivector(&self) -> &Element {
        &self.bivector
    }

    pub fn n(&self) -> usize {
        self.carrier.n()
    }

    pub fn kind(&self) -> CarrierKind {
        self.carrier.kind()
    }

    pub fn quadratic_constants(&self) -> Option<&QuadraticConstants> {
        self.quadratic.as_ref()
    }

    /// Scaling weight of the bivector; every differential built from it shifts
    /// weight by this amount.
    pub fn weight_shift(&self) -> Result<i64, CalculusError> {
        if self.bivector.is_zero() {
            return Ok(0);
        }
        self.bivector
            .homogeneous(|m| m.weight(&self.carrier))
            .ok_or_else(|| CalculusError::NotHomogeneous(self.bivector.to_string()))
    }

    /// `Ok(())` when `[pi, pi] = 0`, otherwise the nonzero bracket.
    pub fn jacobi_check(&self) -> Result<(), Element> {
        let s = schouten(&self.bivector, &self.bivector).expect("bivector is a polyvector");
        if s.is_zero() {
            Ok(())
        } else {
            Err(s)
        }
    }

    /// Coefficient functions `pi^{ij}` for `i < j`.
    pub fn components(&self) -> BTreeMap<(usize, usize), Element> {
        let c = &self.carrier;
        let mut out: BTreeMap<(usize, usize), Element> = BTreeMap::new();
        for (m, q) in self.bivector.terms() {
            let frame: Vec<usize> = (0..c.n())
                .filter(|&i| m.exponent(c.slot(Role::Vector, i)) > 0)
                .collect();
            let (i, j) = match frame.as_slice() {
                [i, j] => (*i, *j),
                // repeated even frame factor on an exterior carrier
                [i] => (*i, *i),
                _ => unreachable!("bivector terms carry two frame factors"),
            };
            let mut exps = m.exponents().to_vec();
            for k in 0..c.n() {
                exps[c.slot(Role::Vector, k)] = 0;
            }
            // coefficient factors precede the frame in canonical order
            out.entry((i, j))
                .or_insert_with(|| Element::zero(c))
                .add_term(Monomial::from_exponents(exps), q.clone());
        }
        out.retain(|_, e| !e.is_zero());
        out
    }
}

fn extract_quadratic(pi: &Element) -> Option<QuadraticConstants> {
    let c = pi.carrier();
    if pi.terms().any(|(m, _)| m.count(c, Role::Coordinate) != 2) {
        return None;
    }
    let mut out = QuadraticConstants::new();
    for (m, q) in pi.terms() {
        let coords = indices(m, c, Role::Coordinate);
        let vecs = indices(m, c, Role::Vector);
        let (lower, upper) = match c.kind() {
            CarrierKind::Polynomial => (coords, vecs),
            CarrierKind::Exterior => (vecs, coords),
        };
        // canonical monomial order already lists odd factors ascending
        let key = ((lower[0], lower[1]), (upper[0], upper[1]));
        out.insert(key, q.clone());
    }
    debug_assert_eq!(expand_quadratic(c, &out), *pi);
    Some(out)
}

/// Indices attached to the generators of `role`, with multiplicity.
fn indices(m: &Monomial, c: &CarrierSpec, role: Role) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..c.n() {
        for _ in 0..m.exponent(c.slot(role, i)) {
            out.push(i);
        }
    }
    out
}

pub fn expand_quadratic(carrier: &Arc<CarrierSpec>, constants: &QuadraticConstants) -> Element {
    let mut pi = Element::zero(carrier);
    for (&((i1, i2), (j1, j2)), q) in constants {
        let term = match carrier.kind() {
            CarrierKind::Polynomial => Element::product_of(carrier, Role::Coordinate, &[i1, i2])
                .mul(&Element::product_of(carrier, Role::Vector, &[j1, j2])),
            CarrierKind::Exterior => Element::product_of(carrier, Role::Coordinate, &[j1, j2])
                .mul(&Element::product_of(carrier, Role::Vector, &[i1, i2])),
        };
        pi.add_scaled(&term, q);
    }
    pi
}
