//! Batalin-Vilkovisky structure on Poisson cohomology at modular weight 0.
//!
//! The operator is `Delta = phi^{-1} B phi` with `phi` the duality map and `B`
//! the de Rham type operator of the chain side. Classes are added by their
//! coordinates in the fixed homology bases of the engine.

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::calculus::schouten;
use crate::checks::Check;
use crate::homology::{Address, Duality, EngineError, HomologyClass};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BvError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("address {0} lies outside the weight window")]
    WindowExceeded(Address),
}

/// Deliberate corruptions used to confirm that the checkers can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    Faithful,
    /// `Delta` negated on classes of odd degree.
    FlipOdd,
}

/// `((|a|, |b|), ratio)` as reported by [`Bv::bracket_sign_table`].
pub type SignCell = ((i64, i64), Option<i64>);

pub struct Bv {
    duality: Arc<Duality>,
    mode: DeltaMode,
}

/// Signed sum of classes that share an address.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub address: Address,
    pub coordinates: Vec<Rational>,
}

impl Combination {
    pub fn zero(address: Address, dim: usize) -> Self {
        Combination {
            address,
            coordinates: vec![Rational::zero(); dim],
        }
    }

    pub fn add(&mut self, sign: i64, class: &HomologyClass) {
        assert_eq!(self.address, class.address, "classes at different addresses");
        for (acc, q) in self.coordinates.iter_mut().zip(&class.coordinates) {
            *acc += rational::int(sign) * q;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl Bv {
    pub fn new(duality: Arc<Duality>) -> Self {
        Bv {
            duality,
            mode: DeltaMode::Faithful,
        }
    }

    pub fn with_mode(duality: Arc<Duality>, mode: DeltaMode) -> Self {
        Bv { duality, mode }
    }

    pub fn duality(&self) -> &Arc<Duality> {
        &self.duality
    }

    fn guard(&self, a: &Address) -> Result<(), BvError> {
        if self.duality.cochain.weights().contains(&a.weight) {
            Ok(())
        } else {
            Err(BvError::WindowExceeded(a.clone()))
        }
    }

    /// Weight-0 addresses of the window with nonzero cohomology.
    pub fn addresses(&self) -> Result<Vec<Address>, BvError> {
        let mut out = Vec::new();
        for a in self.duality.cochain.addresses()? {
            if a.lambda.is_zero() && self.duality.cochain.homology(&a)?.dim() > 0 {
                out.push(a);
            }
        }
        Ok(out)
    }

    pub fn basis(&self) -> Result<Vec<HomologyClass>, BvError> {
        let mut out = Vec::new();
        for a in self.addresses()? {
            out.extend(self.duality.cochain.basis_classes(&a)?);
        }
        Ok(out)
    }

    pub fn unit(&self) -> Result<HomologyClass, BvError> {
        let one = crate::graded::Element::one(self.duality.carrier());
        Ok(self.duality.cochain.class_of(&Address::new(0, 0, Rational::zero()), &one)?)
    }

    pub fn dim(&self, a: &Address) -> Result<usize, BvError> {
        Ok(self.duality.cochain.homology(a)?.dim())
    }

    pub fn cup(&self, a: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass, BvError> {
        let target = Address::new(
            a.address.degree + b.address.degree,
            a.address.weight + b.address.weight,
            &a.address.lambda + &b.address.lambda,
        );
        self.guard(&target)?;
        let product = a.representative.mul(&b.representative);
        Ok(self.duality.cochain.class_of(&target, &product)?)
    }

    pub fn delta(&self, a: &HomologyClass) -> Result<HomologyClass, BvError> {
        let image = self.duality.duality_map(a)?;
        let moved = self.duality.chain_operator(&image.representative);
        let chain_target = Address::new(image.address.degree + 1, image.address.weight, image.address.lambda.clone());
        let lifted = self.duality.chain.class_of(&chain_target, &moved)?;
        let mut out = self.duality.duality_inverse(&lifted)?;
        if self.mode == DeltaMode::FlipOdd && a.address.degree % 2 != 0 {
            out.representative = out.representative.scale(&rational::int(-1));
            out.coordinates.iter_mut().for_each(|q| *q = -q.clone());
        }
        Ok(out)
    }

    /// `(-1)^{|a|} (Delta(ab) - Delta(a) b - (-1)^{|a|} a Delta(b))`.
    pub fn generated_bracket(&self, a: &HomologyClass, b: &HomologyClass) -> Result<Combination, BvError> {
        let ea = parity(a.address.degree);
        let whole = self.delta(&self.cup(a, b)?)?;
        let left = self.cup(&self.delta(a)?, b)?;
        let right = self.cup(a, &self.delta(b)?)?;
        let mut out = Combination::zero(whole.address.clone(), whole.coordinates.len());
        out.add(ea, &whole);
        out.add(-ea, &left);
        out.add(-1, &right);
        Ok(out)
    }

    /// Class of the Schouten bracket of representatives.
    pub fn schouten_bracket(&self, a: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass, BvError> {
        let target = Address::new(
            a.address.degree + b.address.degree - 1,
            a.address.weight + b.address.weight,
            &a.address.lambda + &b.address.lambda,
        );
        self.guard(&target)?;
        let s = schouten(&a.representative, &b.representative).map_err(EngineError::from)?;
        Ok(self.duality.cochain.class_of(&target, &s)?)
    }

    pub fn check_delta_unit(&self) -> Result<Check, BvError> {
        let mut check = Check::new("Delta(1) = 0");
        let d = self.delta(&self.unit()?)?;
        check.record(d.is_zero(), || format!("Delta(1) = {}", d.representative));
        Ok(check)
    }

    pub fn check_delta_squared(&self, basis: &[HomologyClass]) -> Result<Check, BvError> {
        let mut check = Check::new("Delta^2 = 0");
        for a in basis {
            let dd = self.delta(&self.delta(a)?)?;
            check.record(dd.is_zero(), || format!("Delta^2({}) = {}", a.representative, dd.representative));
        }
        Ok(check)
    }

    /// The second-order identity on every ordered triple of basis classes.
    pub fn check_seven_term(&self, basis: &[HomologyClass]) -> Result<Check, BvError> {
        let mut check = Check::new("seven-term identity");
        for a in basis {
            for b in basis {
                for c in basis {
                    match self.seven_term(a, b, c) {
                        Ok(defect) => check.record(defect.is_zero(), || {
                            format!(
                                "a = {}, b = {}, c = {}",
                                a.representative, b.representative, c.representative
                            )
                        }),
                        Err(BvError::WindowExceeded(_)) => check.skip(),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Ok(check)
    }

    /// Left side minus right side of the second-order identity.
    pub fn seven_term(&self, a: &HomologyClass, b: &HomologyClass, c: &HomologyClass) -> Result<Combination, BvError> {
        let (pa, pb) = (a.address.degree, b.address.degree);
        let ab = self.cup(a, b)?;
        let abc = self.cup(&ab, c)?;
        let bc = self.cup(b, c)?;
        let ac = self.cup(a, c)?;
        let whole = self.delta(&abc)?;
        let mut out = Combination::zero(whole.address.clone(), whole.coordinates.len());
        out.add(1, &whole);
        out.add(-1, &self.cup(&self.delta(&ab)?, c)?);
        out.add(-parity(pa), &self.cup(a, &self.delta(&bc)?)?);
        out.add(-parity((pa - 1) * pb), &self.cup(b, &self.delta(&ac)?)?);
        out.add(1, &self.cup(&self.cup(&self.delta(a)?, b)?, c)?);
        out.add(parity(pa), &self.cup(&self.cup(a, &self.delta(b)?)?, c)?);
        out.add(parity(pa + pb), &self.cup(&ab, &self.delta(c)?)?);
        Ok(out)
    }

    /// `generated = sign * schouten` on every ordered pair of basis classes.
    pub fn check_bracket_against_schouten(&self, basis: &[HomologyClass], sign: i64) -> Result<Check, BvError> {
        let label = if sign == 1 { "" } else { "-" };
        let mut check = Check::new(format!("generated bracket = {label}Schouten bracket"));
        for a in basis {
            for b in basis {
                let (generated, s) = match (self.generated_bracket(a, b), self.schouten_bracket(a, b)) {
                    (Ok(g), Ok(s)) => (g, s),
                    (Err(BvError::WindowExceeded(_)), _) | (_, Err(BvError::WindowExceeded(_))) => {
                        check.skip();
                        continue;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                let mut defect = generated.clone();
                defect.add(-sign, &s);
                check.record(defect.is_zero(), || {
                    format!("a = {}, b = {}, Schouten = {}", a.representative, b.representative, s.representative)
                });
            }
        }
        Ok(check)
    }

    /// `{a, b} = -(-1)^{(|a|-1)(|b|-1)} {b, a}`.
    pub fn check_antisymmetry(&self, basis: &[HomologyClass]) -> Result<Check, BvError> {
        let mut check = Check::new("bracket antisymmetry");
        for a in basis {
            for b in basis {
                let (ab, ba) = match (self.generated_bracket(a, b), self.generated_bracket(b, a)) {
                    (Ok(x), Ok(y)) => (x, y),
                    (Err(BvError::WindowExceeded(_)), _) | (_, Err(BvError::WindowExceeded(_))) => {
                        check.skip();
                        continue;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                let sign = -parity((a.address.degree - 1) * (b.address.degree - 1));
                let mut defect = ab;
                for (acc, q) in defect.coordinates.iter_mut().zip(&ba.coordinates) {
                    *acc -= rational::int(sign) * q;
                }
                check.record(defect.is_zero(), || format!("a = {}, b = {}", a.representative, b.representative));
            }
        }
        Ok(check)
    }

    /// `a b = (-1)^{|a||b|} b a` and `1 a = a` on basis pairs.
    pub fn check_cup(&self, basis: &[HomologyClass]) -> Result<Check, BvError> {
        let mut check = Check::new("cup product unit and graded commutativity");
        let one = self.unit()?;
        for a in basis {
            let ua = self.cup(&one, a)?;
            check.record(ua.coordinates == a.coordinates, || format!("1 a != a for a = {}", a.representative));
            for b in basis {
                let (ab, ba) = match (self.cup(a, b), self.cup(b, a)) {
                    (Ok(x), Ok(y)) => (x, y),
                    (Err(BvError::WindowExceeded(_)), _) | (_, Err(BvError::WindowExceeded(_))) => {
                        check.skip();
                        continue;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                let sign = rational::int(parity(a.address.degree * b.address.degree));
                let ok = ab.coordinates.iter().zip(&ba.coordinates).all(|(x, y)| *x == &sign * y);
                check.record(ok, || format!("a = {}, b = {}", a.representative, b.representative));
            }
        }
        Ok(check)
    }

    /// Observed `generated / Schouten` ratio per pair of degrees: `+1`, `-1`,
    /// `0` when both vanish on every pair, or `None` when no single sign fits.
    pub fn bracket_sign_table(&self, basis: &[HomologyClass]) -> Result<Vec<SignCell>, BvError> {
        use std::collections::BTreeMap;
        let mut table: BTreeMap<(i64, i64), (bool, bool, bool)> = BTreeMap::new();
        for a in basis {
            for b in basis {
                let (Ok(g), Ok(s)) = (self.generated_bracket(a, b), self.schouten_bracket(a, b)) else {
                    continue;
                };
                let entry = table
                    .entry((a.address.degree, b.address.degree))
                    .or_insert((true, true, true));
                let mut plus = g.clone();
                plus.add(-1, &s);
                let mut minus = g.clone();
                minus.add(1, &s);
                entry.0 &= plus.is_zero();
                entry.1 &= minus.is_zero();
                entry.2 &= g.is_zero() && s.is_zero();
            }
        }
        Ok(table
            .into_iter()
            .map(|(k, (plus, minus, zero))| {
                let v = if zero {
                    Some(0)
                } else if plus {
                    Some(1)
                } else if minus {
                    Some(-1)
                } else {
                    None
                };
                (k, v)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{exterior, polynomial, BivectorTerm, PoissonStructure};
    use crate::graded::{CarrierKind, CarrierSpec};
    use crate::rational::int;
    use crate::spectral::analyze_modular;

    fn setup(kind: CarrierKind, terms: &[(i64, &[u32], usize, usize)], window: i64) -> Bv {
        let n = terms.first().map_or(2, |t| t.1.len());
        let c = Arc::new(CarrierSpec::standard(kind, n));
        let terms: Vec<BivectorTerm> = terms
            .iter()
            .map(|&(q, e, i, j)| BivectorTerm {
                coeff: int(q),
                exponents: e.to_vec(),
                frame: (i, j),
            })
            .collect();
        let pi = PoissonStructure::from_terms(&c, &terms).unwrap();
        let nu = match kind {
            CarrierKind::Polynomial => polynomial::modular_vector(&pi).unwrap(),
            CarrierKind::Exterior => exterior::modular_vector(&pi).unwrap(),
        };
        let spectrum = analyze_modular(&nu);
        Bv::new(Arc::new(Duality::new(&pi, &nu, Some(spectrum.eigenvalues), window).unwrap()))
    }

    #[test]
    fn unit_and_square() {
        let bv = setup(CarrierKind::Polynomial, &[(1, &[1, 1], 0, 1)], 2);
        let basis = bv.basis().unwrap();
        assert!(!basis.is_empty());
        assert!(bv.check_delta_unit().unwrap().passed);
        assert!(bv.check_delta_squared(&basis).unwrap().passed);
        assert!(bv.check_cup(&basis).unwrap().passed);
    }

    #[test]
    fn second_order_on_log_plane() {
        let bv = setup(CarrierKind::Polynomial, &[(1, &[1, 1], 0, 1)], 2);
        let basis = bv.basis().unwrap();
        let check = bv.check_seven_term(&basis).unwrap();
        assert!(check.passed, "{check}");
        assert!(check.checked > 0);
    }

    #[test]
    fn polynomial_bracket_is_opposite_to_schouten() {
        let bv = setup(CarrierKind::Polynomial, &[(1, &[1, 1], 0, 1)], 2);
        let basis = bv.basis().unwrap();
        assert!(bv.check_bracket_against_schouten(&basis, -1).unwrap().passed);
        assert!(bv.check_antisymmetry(&basis).unwrap().passed);
    }

    #[test]
    fn bracket_with_unit_vanishes() {
        let bv = setup(CarrierKind::Polynomial, &[(1, &[1, 1], 0, 1)], 2);
        let one = bv.unit().unwrap();
        for b in bv.basis().unwrap() {
            if let Ok(g) = bv.generated_bracket(&one, &b) {
                assert!(g.is_zero());
            }
        }
    }

    #[test]
    fn exterior_side() {
        let bv = setup(CarrierKind::Exterior, &[(1, &[1, 1], 0, 1)], 2);
        let basis = bv.basis().unwrap();
        assert!(bv.check_delta_unit().unwrap().passed);
        assert!(bv.check_delta_squared(&basis).unwrap().passed);
        assert!(bv.check_seven_term(&basis).unwrap().passed);
        let table = bv.bracket_sign_table(&basis).unwrap();
        assert!(!table.is_empty());
        eprintln!("{table:?}");
    }

    #[test]
    fn corrupted_delta_is_caught() {
        let good = setup(CarrierKind::Polynomial, &[(1, &[1, 1], 0, 1)], 2);
        let bad = Bv::with_mode(Arc::clone(good.duality()), DeltaMode::FlipOdd);
        let basis = bad.basis().unwrap();
        let check = bad.check_bracket_against_schouten(&basis, -1).unwrap();
        assert!(!check.passed && check.witness.is_some());

        let three = [(1, &[1u32, 1, 0][..], 0, 1), (2, &[1, 0, 1], 0, 2), (3, &[0, 1, 1], 1, 2)];
        let good = setup(CarrierKind::Polynomial, &three, 1);
        let basis = good.basis().unwrap();
        assert!(good.check_seven_term(&basis).unwrap().passed);
        let bad = Bv::with_mode(Arc::clone(good.duality()), DeltaMode::FlipOdd);
        let check = bad.check_seven_term(&basis).unwrap();
        assert!(!check.passed && check.witness.is_some());
    }
}
