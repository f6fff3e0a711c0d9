//! Finite slices of the Poisson (co)chain complexes and their homology.
//!
//! A slice is addressed by form degree `p`, scaling weight `w` and, when an
//! eigenvalue list is supplied, modular weight `lambda`. Every differential
//! moves `(p, w, lambda)` by a fixed step, so each slice sees only finitely
//! many monomials and all linear algebra is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use thiserror::Error;

use crate::calculus::{exterior, polynomial, CalculusError, PoissonStructure};
use crate::graded::{
    operator_matrix, slice_basis, AlgebraError, CarrierKind, CarrierSpec, Element, Monomial, RationalMatrix, Role,
    Selector,
};
use crate::rational::{self, Rational};
use crate::spectral::modular_weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0:?} complexes need a {1:?} carrier")]
    WrongCarrier(Variant, CarrierKind),
    #[error("not a cycle at {address}: {element}")]
    NotCycle { address: Address, element: String },
    #[error("element does not lie in the slice {0}")]
    OutsideSlice(Address),
    #[error("duality map fails to be a chain map up to sign at {0}")]
    NotChainMap(Address),
    #[error("no preimage under the duality map at {0}")]
    Unsolvable(Address),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    /// Polyvectors on the polynomial carrier with the Lichnerowicz coboundary.
    Cochain,
    /// Forms on the polynomial carrier with the (twisted) Koszul boundary.
    Chain,
    /// Polyvectors on the exterior carrier, graded by the number of `xi`.
    ExteriorCochain,
    /// `Lambda(d/dxi, xi^*)` with the (twisted) dual boundary, graded by the number of `xi^*`.
    ExteriorTwisted,
}

impl Variant {
    pub fn kind(self) -> CarrierKind {
        match self {
            Variant::Cochain | Variant::Chain => CarrierKind::Polynomial,
            Variant::ExteriorCochain | Variant::ExteriorTwisted => CarrierKind::Exterior,
        }
    }

    fn roles(self) -> (&'static [Role], Role) {
        match self {
            Variant::Cochain => (&[Role::Coordinate, Role::Vector], Role::Vector),
            Variant::Chain => (&[Role::Coordinate, Role::Differential], Role::Differential),
            Variant::ExteriorCochain => (&[Role::Coordinate, Role::Vector], Role::Coordinate),
            Variant::ExteriorTwisted => (&[Role::Vector, Role::Dual], Role::Dual),
        }
    }

    /// Change of form degree under the differential.
    pub fn degree_step(self) -> i64 {
        match self {
            Variant::Cochain | Variant::ExteriorCochain => 1,
            Variant::Chain | Variant::ExteriorTwisted => -1,
        }
    }

    pub fn is_chain(self) -> bool {
        self.degree_step() < 0
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Cochain => "cochain",
            Variant::Chain => "chain",
            Variant::ExteriorCochain => "exterior-cochain",
            Variant::ExteriorTwisted => "exterior-twisted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address {
    pub degree: i64,
    pub weight: i64,
    pub lambda: Rational,
}

impl Address {
    pub fn new(degree: i64, weight: i64, lambda: Rational) -> Self {
        Address { degree, weight, lambda }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, w={}, lambda={})", self.degree, self.weight, rational::format(&self.lambda))
    }
}

#[derive(Debug, Clone)]
pub struct ComplexSlice {
    pub address: Address,
    pub basis: Arc<Vec<Monomial>>,
    /// Differential arriving at this slice.
    pub in_matrix: RationalMatrix,
    /// Differential leaving this slice.
    pub out_matrix: RationalMatrix,
}

/// Homology of a pair of composable matrices `in`, `out` with `out * in = 0`.
///
/// Class representatives are the cycles that extend a basis of the boundaries
/// to a basis of the cycles, chosen by leftmost pivots.
#[derive(Debug, Clone)]
pub struct LinearHomology {
    pub cycle_dim: usize,
    pub boundary_rank: usize,
    pub representatives: Vec<Vec<Rational>>,
    reducer: RationalMatrix,
    out_matrix: RationalMatrix,
}

impl LinearHomology {
    pub fn new(rows: usize, in_matrix: &RationalMatrix, out_matrix: &RationalMatrix) -> Self {
        let cycles = out_matrix.kernel();
        let boundaries = in_matrix.image();
        let mut columns = boundaries.clone();
        columns.extend(cycles.iter().cloned());
        let pivots = RationalMatrix::from_columns(rows, &columns).echelon().pivots;
        // boundaries are independent, so they occupy the leading pivots
        let chosen: Vec<Vec<Rational>> = pivots
            .iter()
            .filter(|&&j| j >= boundaries.len())
            .map(|&j| columns[j].clone())
            .collect();
        let mut frame = boundaries.clone();
        frame.extend(chosen.iter().cloned());
        let reducer = RationalMatrix::from_columns(rows, &frame)
            .left_inverse()
            .expect("independent columns");
        LinearHomology {
            cycle_dim: cycles.len(),
            boundary_rank: boundaries.len(),
            representatives: chosen,
            reducer,
            out_matrix: out_matrix.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_cycle(&self, v: &[Rational]) -> bool {
        self.out_matrix.apply(v).iter().all(Zero::is_zero)
    }

    /// Class coordinates of a cycle, `None` if `v` is not a cycle.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.is_cycle(v) {
            return None;
        }
        Some(self.reducer.apply(v)[self.boundary_rank..].to_vec())
    }

    /// The cycle with the given class coordinates.
    pub fn combination(&self, coordinates: &[Rational]) -> Vec<Rational> {
        let rows = self.out_matrix.cols();
        let mut v = vec![Rational::zero(); rows];
        for (r, q) in self.representatives.iter().zip(coordinates) {
            for (acc, x) in v.iter_mut().zip(r) {
                *acc += q * x;
            }
        }
        v
    }
}

/// Homology of one slice with a fixed basis of classes.
#[derive(Debug, Clone)]
pub struct SliceHomology {
    pub address: Address,
    pub basis: Arc<Vec<Monomial>>,
    pub linear: LinearHomology,
    pub representatives: Vec<Element>,
}

impl SliceHomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologyClass {
    pub address: Address,
    pub representative: Element,
    pub coordinates: Vec<Rational>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

/// Coordinates of `e` in `basis`, or `None` if a term falls outside it.
pub fn to_vector(e: &Element, basis: &[Monomial]) -> Option<Vec<Rational>> {
    let mut v = vec![Rational::zero(); basis.len()];
    for (m, q) in e.terms() {
        let i = basis.binary_search(m).ok()?;
        v[i] = q.clone();
    }
    Some(v)
}

pub fn from_vector(c: &Arc<CarrierSpec>, basis: &[Monomial], v: &[Rational]) -> Element {
    let mut e = Element::zero(c);
    for (m, q) in basis.iter().zip(v) {
        e.add_term(m.clone(), q.clone());
    }
    e
}

type Basis = Arc<Vec<Monomial>>;

/// One of the four complexes attached to a Poisson structure, sliced lazily.
pub struct Complex {
    pi: PoissonStructure,
    variant: Variant,
    twist: Option<Element>,
    eigenvalues: Option<Vec<Rational>>,
    window: i64,
    shift: i64,
    bases: Mutex<BTreeMap<(i64, i64), Basis>>,
    homology: Mutex<BTreeMap<Address, Arc<SliceHomology>>>,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Complex")
            .field("variant", &self.variant)
            .field("window", &self.window)
            .finish_non_exhaustive()
    }
}

impl Complex {
    /// `twist` is used by the chain variants only; `eigenvalues` switches on
    /// the modular-weight grading.
    pub fn new(
        pi: &PoissonStructure,
        variant: Variant,
        twist: Option<Element>,
        eigenvalues: Option<Vec<Rational>>,
        window: i64,
    ) -> Result<Self, EngineError> {
        if pi.kind() != variant.kind() {
            return Err(EngineError::WrongCarrier(variant, variant.kind()));
        }
        let shift = pi.weight_shift()?;
        Ok(Complex {
            pi: pi.clone(),
            variant,
            twist: twist.filter(|_| variant.is_chain()),
            eigenvalues,
            window,
            shift,
            bases: Mutex::new(BTreeMap::new()),
            homology: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn structure(&self) -> &PoissonStructure {
        &self.pi
    }

    pub fn carrier(&self) -> &Arc<CarrierSpec> {
        self.pi.carrier()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn twist(&self) -> Option<&Element> {
        self.twist.as_ref()
    }

    pub fn eigenvalues(&self) -> Option<&[Rational]> {
        self.eigenvalues.as_deref()
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Weight change of the differential.
    pub fn weight_shift(&self) -> i64 {
        self.shift
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        0..=self.pi.n() as i64
    }

    /// Scaling weights enumerated by [`Complex::addresses`]. Chain-type
    /// windows are the image of `[-W, W]` under the duality map.
    pub fn weights(&self) -> std::ops::RangeInclusive<i64> {
        let offset = if self.variant.is_chain() { self.pi.n() as i64 } else { 0 };
        offset - self.window..=offset + self.window
    }

    pub fn in_window(&self, a: &Address) -> bool {
        self.degrees().contains(&a.degree) && self.weights().contains(&a.weight)
    }

    pub fn step(&self, a: &Address) -> Address {
        Address::new(a.degree + self.variant.degree_step(), a.weight + self.shift, a.lambda.clone())
    }

    pub fn step_back(&self, a: &Address) -> Address {
        Address::new(a.degree - self.variant.degree_step(), a.weight - self.shift, a.lambda.clone())
    }

    pub fn differential(&self, e: &Element) -> Element {
        match (self.variant, &self.twist) {
            (Variant::Cochain, _) => polynomial::coboundary(&self.pi, e),
            (Variant::Chain, None) => polynomial::boundary(&self.pi, e),
            (Variant::Chain, Some(nu)) => polynomial::twisted_boundary(&self.pi, nu, e),
            (Variant::ExteriorCochain, _) => exterior::coboundary(&self.pi, e),
            (Variant::ExteriorTwisted, None) => exterior::boundary(&self.pi, e),
            (Variant::ExteriorTwisted, Some(nu)) => exterior::twisted_boundary(&self.pi, nu, e),
        }
    }

    pub fn modular_weight(&self, m: &Monomial) -> Rational {
        match &self.eigenvalues {
            Some(l) => modular_weight(self.carrier(), m, l),
            None => Rational::zero(),
        }
    }

    fn full_basis(&self, degree: i64, weight: i64) -> Result<Arc<Vec<Monomial>>, EngineError> {
        if !self.degrees().contains(&degree) {
            return Ok(Arc::new(Vec::new()));
        }
        if let Some(b) = self.bases.lock().unwrap().get(&(degree, weight)) {
            return Ok(Arc::clone(b));
        }
        let (allowed, role) = self.variant.roles();
        let sel = Selector::new(allowed).count(role, degree as u32).weight(weight);
        let basis = Arc::new(slice_basis(self.carrier(), &sel)?);
        self.bases.lock().unwrap().insert((degree, weight), Arc::clone(&basis));
        Ok(basis)
    }

    /// Sorted basis of the slice at `a`.
    pub fn basis(&self, a: &Address) -> Result<Arc<Vec<Monomial>>, EngineError> {
        let full = self.full_basis(a.degree, a.weight)?;
        if self.eigenvalues.is_none() {
            return Ok(if a.lambda.is_zero() { full } else { Arc::new(Vec::new()) });
        }
        Ok(Arc::new(full.iter().filter(|m| self.modular_weight(m) == a.lambda).cloned().collect()))
    }

    /// Modular weights occurring at `(degree, weight)`, ascending.
    pub fn lambdas(&self, degree: i64, weight: i64) -> Result<Vec<Rational>, EngineError> {
        let full = self.full_basis(degree, weight)?;
        let mut out: Vec<Rational> = full.iter().map(|m| self.modular_weight(m)).collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Every nonempty slice address in the window.
    pub fn addresses(&self) -> Result<Vec<Address>, EngineError> {
        let mut out = Vec::new();
        for p in self.degrees() {
            for w in self.weights() {
                for l in self.lambdas(p, w)? {
                    out.push(Address::new(p, w, l));
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the differential from `a` to the next slice.
    pub fn differential_matrix(&self, a: &Address) -> Result<RationalMatrix, EngineError> {
        let dom = self.basis(a)?;
        let cod = self.basis(&self.step(a))?;
        Ok(operator_matrix(self.carrier(), |e| self.differential(e), &dom, &cod)?)
    }

    /// Matrix of an arbitrary operator between two slices of this complex.
    pub fn operator(
        &self,
        op: impl Fn(&Element) -> Element,
        from: &Address,
        to: &Address,
    ) -> Result<RationalMatrix, EngineError> {
        let dom = self.basis(from)?;
        let cod = self.basis(to)?;
        Ok(operator_matrix(self.carrier(), op, &dom, &cod)?)
    }

    pub fn slice(&self, a: &Address) -> Result<ComplexSlice, EngineError> {
        Ok(ComplexSlice {
            address: a.clone(),
            basis: self.basis(a)?,
            in_matrix: self.differential_matrix(&self.step_back(a))?,
            out_matrix: self.differential_matrix(a)?,
        })
    }

    pub fn homology(&self, a: &Address) -> Result<Arc<SliceHomology>, EngineError> {
        if let Some(h) = self.homology.lock().unwrap().get(a) {
            return Ok(Arc::clone(h));
        }
        let slice = self.slice(a)?;
        let linear = LinearHomology::new(slice.basis.len(), &slice.in_matrix, &slice.out_matrix);
        let c = self.carrier();
        let h = Arc::new(SliceHomology {
            address: a.clone(),
            representatives: linear.representatives.iter().map(|v| from_vector(c, &slice.basis, v)).collect(),
            basis: Arc::clone(&slice.basis),
            linear,
        });
        self.homology.lock().unwrap().insert(a.clone(), Arc::clone(&h));
        Ok(h)
    }

    /// Coordinates of the class of the cycle `e` at `a`.
    pub fn class_coordinates(&self, a: &Address, e: &Element) -> Result<Vec<Rational>, EngineError> {
        let h = self.homology(a)?;
        let v = to_vector(e, &h.basis).ok_or_else(|| EngineError::OutsideSlice(a.clone()))?;
        h.linear.coordinates(&v).ok_or_else(|| EngineError::NotCycle {
            address: a.clone(),
            element: e.to_string(),
        })
    }

    pub fn class_of(&self, a: &Address, e: &Element) -> Result<HomologyClass, EngineError> {
        Ok(HomologyClass {
            address: a.clone(),
            representative: e.clone(),
            coordinates: self.class_coordinates(a, e)?,
        })
    }

    /// Canonical representative with the given coordinates.
    pub fn class_from(&self, a: &Address, coordinates: &[Rational]) -> Result<HomologyClass, EngineError> {
        let h = self.homology(a)?;
        let mut rep = Element::zero(self.carrier());
        for (r, q) in h.representatives.iter().zip(coordinates) {
            rep.add_scaled(r, q);
        }
        Ok(HomologyClass {
            address: a.clone(),
            representative: rep,
            coordinates: coordinates.to_vec(),
        })
    }

    /// Basis classes of the homology at `a`.
    pub fn basis_classes(&self, a: &Address) -> Result<Vec<HomologyClass>, EngineError> {
        let h = self.homology(a)?;
        let d = h.dim();
        (0..d)
            .map(|k| {
                let mut coords = vec![Rational::zero(); d];
                coords[k] = Rational::from_integer(1.into());
                self.class_from(a, &coords)
            })
            .collect()
    }

    /// Address of a homogeneous element, if it is homogeneous for all three gradings.
    pub fn address_of(&self, e: &Element) -> Option<Address> {
        let c = self.carrier();
        let role = self.variant.roles().1;
        e.homogeneous(|m| Address::new(m.count(c, role) as i64, m.weight(c), self.modular_weight(m)))
    }
}

/// The two complexes linked by contraction with a volume form.
#[derive(Debug)]
pub struct Duality {
    pub cochain: Complex,
    pub chain: Complex,
}

impl Duality {
    /// Cochain and twisted chain complexes of `pi`, with `nu` its modular vector.
    pub fn new(
        pi: &PoissonStructure,
        nu: &Element,
        eigenvalues: Option<Vec<Rational>>,
        window: i64,
    ) -> Result<Self, EngineError> {
        let (co, ch) = match pi.kind() {
            CarrierKind::Polynomial => (Variant::Cochain, Variant::Chain),
            CarrierKind::Exterior => (Variant::ExteriorCochain, Variant::ExteriorTwisted),
        };
        Ok(Duality {
            cochain: Complex::new(pi, co, None, eigenvalues.clone(), window)?,
            chain: Complex::new(pi, ch, Some(nu.clone()), eigenvalues, window)?,
        })
    }

    pub fn carrier(&self) -> &Arc<CarrierSpec> {
        self.cochain.carrier()
    }

    pub fn volume(&self) -> Element {
        match self.carrier().kind() {
            CarrierKind::Polynomial => polynomial::volume(self.carrier()),
            CarrierKind::Exterior => exterior::volume(self.carrier()),
        }
    }

    /// `phi -> phi ∩ vol`.
    pub fn map(&self, phi: &Element) -> Element {
        match self.carrier().kind() {
            CarrierKind::Polynomial => polynomial::contract_volume(phi),
            CarrierKind::Exterior => exterior::cap_volume(phi),
        }
    }

    pub fn map_inverse(&self, x: &Element) -> Result<Element, CalculusError> {
        match self.carrier().kind() {
            CarrierKind::Polynomial => polynomial::contract_volume_inverse(x),
            CarrierKind::Exterior => exterior::cap_volume_inverse(x),
        }
    }

    /// The de Rham type operator on the chain side.
    pub fn chain_operator(&self, x: &Element) -> Element {
        match self.carrier().kind() {
            CarrierKind::Polynomial => polynomial::de_rham(x),
            CarrierKind::Exterior => exterior::dual_de_rham(x),
        }
    }

    /// Chain address matching a cochain address.
    pub fn dual_address(&self, a: &Address) -> Address {
        let n = self.carrier().n() as i64;
        let vol = self.volume();
        let (m, _) = vol.terms().next().expect("nonzero volume");
        Address::new(n - a.degree, a.weight + n, &a.lambda + self.chain.modular_weight(m))
    }

    pub fn cochain_address(&self, a: &Address) -> Address {
        let n = self.carrier().n() as i64;
        let vol = self.volume();
        let (m, _) = vol.terms().next().expect("nonzero volume");
        Address::new(n - a.degree, a.weight - n, &a.lambda - self.chain.modular_weight(m))
    }

    /// Matrix of the duality map on one slice.
    pub fn map_matrix(&self, a: &Address) -> Result<RationalMatrix, EngineError> {
        let dom = self.cochain.basis(a)?;
        let cod = self.chain.basis(&self.dual_address(a))?;
        Ok(operator_matrix(self.carrier(), |e| self.map(e), &dom, &cod)?)
    }

    /// The sign `s` with `map(d phi) = s * d(map(phi))` on the slice at `a`,
    /// if one exists.
    pub fn chain_map_sign(&self, a: &Address) -> Result<i64, EngineError> {
        let iota = self.map_matrix(a)?;
        let next = self.cochain.step(a);
        let lhs = self.map_matrix(&next)?.mul(&self.cochain.differential_matrix(a)?);
        let rhs = self.chain.differential_matrix(&self.dual_address(a))?.mul(&iota);
        if lhs.is_zero() && rhs.is_zero() {
            return Ok(0);
        }
        for s in [1, -1] {
            if lhs == rhs.scale(&rational::int(s)) {
                return Ok(s);
            }
        }
        Err(EngineError::NotChainMap(a.clone()))
    }

    pub fn duality_map(&self, class: &HomologyClass) -> Result<HomologyClass, EngineError> {
        let target = self.dual_address(&class.address);
        self.chain.class_of(&target, &self.map(&class.representative))
    }

    pub fn duality_inverse(&self, class: &HomologyClass) -> Result<HomologyClass, EngineError> {
        let target = self.cochain_address(&class.address);
        let pre = self
            .map_inverse(&class.representative)
            .map_err(|_| EngineError::Unsolvable(class.address.clone()))?;
        self.cochain.class_of(&target, &pre)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::BivectorTerm;
    use crate::rational::int;

    fn structure(kind: CarrierKind, n: usize, terms: &[(i64, &[u32], usize, usize)]) -> PoissonStructure {
        let c = Arc::new(CarrierSpec::standard(kind, n));
        let terms: Vec<BivectorTerm> = terms
            .iter()
            .map(|&(q, e, i, j)| BivectorTerm {
                coeff: int(q),
                exponents: e.to_vec(),
                frame: (i, j),
            })
            .collect();
        PoissonStructure::from_terms(&c, &terms).unwrap()
    }

    fn at(p: i64, w: i64) -> Address {
        Address::new(p, w, int(0))
    }

    #[test]
    fn zero_structure_has_zero_differentials() {
        let pi = structure(CarrierKind::Polynomial, 2, &[]);
        let cx = Complex::new(&pi, Variant::Cochain, None, None, 2).unwrap();
        for a in cx.addresses().unwrap() {
            let h = cx.homology(&a).unwrap();
            assert_eq!(h.dim(), h.basis.len());
        }
    }

    #[test]
    fn symplectic_casimirs_are_constants() {
        let pi = structure(CarrierKind::Polynomial, 2, &[(1, &[0, 0], 0, 1)]);
        let cx = Complex::new(&pi, Variant::Cochain, None, None, 4).unwrap();
        assert_eq!(cx.weight_shift(), -2);
        for w in 0..=4 {
            let expected = usize::from(w == 0);
            assert_eq!(cx.homology(&at(0, w)).unwrap().dim(), expected, "w = {w}");
        }
    }

    #[test]
    fn casimirs_of_log_symplectic_plane() {
        // {x1x2, -} kills exactly the constants among functions of positive degree
        let pi = structure(CarrierKind::Polynomial, 2, &[(1, &[1, 1], 0, 1)]);
        let cx = Complex::new(&pi, Variant::Cochain, None, None, 4).unwrap();
        for w in 0..=4 {
            let basis = cx.basis(&at(0, w)).unwrap();
            // independent route: kernel of f -> {x_i, f} for both coordinates
            let mut kernel_dim = 0;
            for m in basis.iter() {
                let f = Element::monomial(cx.carrier(), m.clone());
                let vanish = (0..2).all(|i| {
                    polynomial::poisson_bracket(&pi, &Element::of_role(cx.carrier(), Role::Coordinate, i), &f)
                        .is_zero()
                });
                kernel_dim += usize::from(vanish);
            }
            // the bracket is diagonal on monomials, so counting suffices
            assert_eq!(cx.homology(&at(0, w)).unwrap().dim(), kernel_dim);
        }
    }

    #[test]
    fn differentials_square_to_zero() {
        let pi = structure(CarrierKind::Polynomial, 2, &[(1, &[1, 1], 0, 1)]);
        let nu = polynomial::modular_vector(&pi).unwrap();
        for (variant, twist) in [(Variant::Cochain, None), (Variant::Chain, Some(nu))] {
            let cx = Complex::new(&pi, variant, twist, Some(vec![int(1), int(-1)]), 3).unwrap();
            for a in cx.addresses().unwrap() {
                let s = cx.slice(&a).unwrap();
                assert!(s.out_matrix.mul(&s.in_matrix).is_zero(), "{a}");
            }
        }
    }

    #[test]
    fn class_arithmetic() {
        let pi = structure(CarrierKind::Polynomial, 2, &[(1, &[1, 1], 0, 1)]);
        let cx = Complex::new(&pi, Variant::Cochain, None, None, 3).unwrap();
        for a in cx.addresses().unwrap() {
            for (k, class) in cx.basis_classes(&a).unwrap().iter().enumerate() {
                assert_eq!(cx.class_coordinates(&a, &class.representative).unwrap()[k], int(1));
                // adding a boundary does not change the class
                let prev = cx.step_back(&a);
                for m in cx.basis(&prev).unwrap().iter() {
                    let b = cx.differential(&Element::monomial(cx.carrier(), m.clone()));
                    let shifted = &class.representative + &b;
                    assert_eq!(cx.class_coordinates(&a, &shifted).unwrap(), class.coordinates);
                }
            }
        }
    }

    #[test]
    fn duality_is_a_signed_chain_isomorphism() {
        let pi = structure(CarrierKind::Polynomial, 2, &[(1, &[1, 1], 0, 1)]);
        let nu = polynomial::modular_vector(&pi).unwrap();
        let dual = Duality::new(&pi, &nu, None, 3).unwrap();
        for a in dual.cochain.addresses().unwrap() {
            let m = dual.map_matrix(&a).unwrap();
            assert_eq!(m.rows(), m.cols());
            assert_eq!(m.rank(), m.cols());
            assert!(dual.chain_map_sign(&a).unwrap() != 1);
            assert_eq!(
                dual.cochain.homology(&a).unwrap().dim(),
                dual.chain.homology(&dual.dual_address(&a)).unwrap().dim()
            );
            for class in dual.cochain.basis_classes(&a).unwrap() {
                let image = dual.duality_map(&class).unwrap();
                assert_eq!(dual.duality_inverse(&image).unwrap().coordinates, class.coordinates);
            }
        }
    }

    #[test]
    fn unit_maps_to_volume() {
        let pi = structure(CarrierKind::Exterior, 2, &[(1, &[1, 1], 0, 1)]);
        let nu = exterior::modular_vector(&pi).unwrap();
        let dual = Duality::new(&pi, &nu, None, 2).unwrap();
        let one = dual.cochain.class_of(&at(0, 0), &Element::one(dual.carrier())).unwrap();
        let image = dual.duality_map(&one).unwrap();
        assert_eq!(image.representative, exterior::volume(dual.carrier()));
        assert_eq!(image.address, at(2, 2));
    }
}
