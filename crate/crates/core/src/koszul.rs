//! Koszul duality between quadratic Poisson structures on `k[x]` and on `Lambda(xi)`.
//!
//! Generators correspond as `x_i <-> d/dxi_i`, `d/dx_i <-> xi_i` and `dx_i <-> xi_i^*`.
//! Both `psi` (polyvectors) and `phi` (forms) are this substitution; it preserves
//! form degree, scaling weight and modular weight.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::calculus::{exterior, polynomial, CalculusError, PoissonStructure, QuadraticConstants};
use crate::checks::Check;
use crate::graded::{CarrierKind, CarrierSpec, Element, RationalMatrix, Role};
use crate::homology::{Address, Complex, Duality, EngineError};
use crate::rational;
use crate::spectral::{analyze_modular, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("structure is not quadratic")]
    NotQuadratic,
    #[error("Koszul duality starts from a polynomial carrier")]
    NotPolynomial,
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPair {
    pub primal: PoissonStructure,
    pub dual: PoissonStructure,
    pub constants: QuadraticConstants,
    pub primal_jacobi: bool,
    pub dual_jacobi: bool,
}

impl DualPair {
    pub fn jacobi_agrees(&self) -> bool {
        self.primal_jacobi == self.dual_jacobi
    }
}

/// Exterior carrier on the same number of generators.
pub fn dual_carrier(c: &CarrierSpec) -> Arc<CarrierSpec> {
    Arc::new(CarrierSpec::standard(CarrierKind::Exterior, c.n()))
}

/// `pi^! = sum c xi_j1 xi_j2 d/dxi_i1 d/dxi_i2`, with both Jacobi identities evaluated.
pub fn koszul_dual(pi: &PoissonStructure) -> Result<DualPair, KoszulError> {
    if pi.kind() != CarrierKind::Polynomial {
        return Err(KoszulError::NotPolynomial);
    }
    let constants = if pi.bivector().is_zero() {
        QuadraticConstants::new()
    } else {
        pi.quadratic_constants().ok_or(KoszulError::NotQuadratic)?.clone()
    };
    let dual = PoissonStructure::from_quadratic(&dual_carrier(pi.carrier()), &constants)?;
    Ok(DualPair {
        primal_jacobi: pi.jacobi_check().is_ok(),
        dual_jacobi: dual.jacobi_check().is_ok(),
        primal: pi.clone(),
        dual,
        constants,
    })
}

/// Corruption of `phi` used to show the square check can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiMode {
    Faithful,
    /// `dx_1 -> -xi_1^*`.
    FlipFirst,
}

fn images(source: &CarrierSpec, target: &Arc<CarrierSpec>, mode: PhiMode) -> Vec<Element> {
    source
        .generators()
        .iter()
        .map(|g| {
            let role = match g.role {
                Role::Coordinate => Role::Vector,
                Role::Vector => Role::Coordinate,
                Role::Differential => Role::Dual,
                Role::Dual => unreachable!("polynomial carriers have no dual generators"),
            };
            let image = Element::of_role(target, role, g.index);
            if mode == PhiMode::FlipFirst && g.role == Role::Differential && g.index == 0 {
                image.scale(&rational::int(-1))
            } else {
                image
            }
        })
        .collect()
}

/// `x_i -> d/dxi_i`, `d/dx_i -> xi_i` on polyvectors.
pub fn psi(p: &Element) -> Element {
    let target = dual_carrier(p.carrier());
    p.substitute(&target, &images(p.carrier(), &target, PhiMode::Faithful))
}

/// `x_i -> d/dxi_i`, `dx_i -> xi_i^*` on forms.
pub fn phi(omega: &Element) -> Element {
    phi_with(omega, PhiMode::Faithful)
}

pub fn phi_with(omega: &Element, mode: PhiMode) -> Element {
    let target = dual_carrier(omega.carrier());
    omega.substitute(&target, &images(omega.carrier(), &target, mode))
}

/// `psi(nu) = nu^!` with both sides computed from their divergences.
pub fn modular_correspondence_check(pair: &DualPair) -> Result<Check, KoszulError> {
    let mut check = Check::new("psi(nu) = nu^!");
    let nu = polynomial::modular_vector(&pair.primal)?;
    let nu_dual = exterior::modular_vector(&pair.dual)?;
    let image = psi(&nu);
    check.record(image == nu_dual, || format!("psi(nu) = {image}, nu^! = {nu_dual}"));
    Ok(check)
}

/// Per-degree signs `s` with `left = s * right` on every slice.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignTable(pub BTreeMap<i64, i64>);

impl SignTable {
    fn record(&mut self, check: &mut Check, a: &Address, left: &RationalMatrix, right: &RationalMatrix) {
        if left.is_zero() && right.is_zero() {
            check.record(true, String::new);
            return;
        }
        let sign = [1, -1].into_iter().find(|&s| *left == right.scale(&rational::int(s)));
        match (sign, self.0.get(&a.degree)) {
            (Some(s), Some(&pinned)) => check.record(s == pinned, || format!("sign {s} at {a}, degree pinned to {pinned}")),
            (Some(s), None) => {
                self.0.insert(a.degree, s);
                check.record(true, String::new);
            }
            (None, _) => check.record(false, || format!("no global sign at {a}")),
        }
    }

    pub fn render(&self) -> String {
        self.0
            .iter()
            .map(|(p, s)| format!("{p}:{}", if *s > 0 { "+" } else { "-" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// One row of the dimension tables: cochain address and the four homology dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionRow {
    pub address: Address,
    pub cohomology: usize,
    pub dual_cohomology: usize,
    pub chain_address: Address,
    pub homology: usize,
    pub dual_homology: usize,
}

/// The primal and dual duality squares over a common window.
pub struct KoszulSquare {
    pub pair: DualPair,
    pub primal: Duality,
    pub dual: Duality,
    mode: PhiMode,
}

impl KoszulSquare {
    /// Modular weights are used when the primal modular vector is semisimple
    /// with rational spectrum; otherwise slices are graded by degree and weight only.
    pub fn new(pair: DualPair, window: i64) -> Result<Self, KoszulError> {
        Self::with_mode(pair, window, PhiMode::Faithful)
    }

    pub fn with_mode(pair: DualPair, window: i64, mode: PhiMode) -> Result<Self, KoszulError> {
        let nu = polynomial::modular_vector(&pair.primal)?;
        let nu_dual = exterior::modular_vector(&pair.dual)?;
        let spectrum = analyze_modular(&nu);
        let eigenvalues = (spectrum.verdict == Verdict::Semisimple).then_some(spectrum.eigenvalues);
        Ok(KoszulSquare {
            primal: Duality::new(&pair.primal, &nu, eigenvalues.clone(), window)?,
            dual: Duality::new(&pair.dual, &nu_dual, eigenvalues, window)?,
            pair,
            mode,
        })
    }

    fn matrix(&self, f: impl Fn(&Element) -> Element, from: &Complex, a: &Address, to: &Complex) -> Result<RationalMatrix, EngineError> {
        let dom = from.basis(a)?;
        let cod = to.basis(a)?;
        let mut columns = Vec::with_capacity(dom.len());
        for m in dom.iter() {
            let image = f(&Element::monomial(from.carrier(), m.clone()));
            let v = crate::homology::to_vector(&image, &cod).ok_or_else(|| EngineError::OutsideSlice(a.clone()))?;
            columns.push(v);
        }
        Ok(RationalMatrix::from_columns(cod.len(), &columns))
    }

    pub fn psi_matrix(&self, a: &Address) -> Result<RationalMatrix, EngineError> {
        self.matrix(psi, &self.primal.cochain, a, &self.dual.cochain)
    }

    pub fn phi_matrix(&self, a: &Address) -> Result<RationalMatrix, EngineError> {
        self.matrix(|e| phi_with(e, self.mode), &self.primal.chain, a, &self.dual.chain)
    }

    /// `psi` and `phi` are square and invertible on every slice.
    pub fn check_bijective(&self) -> Result<Check, EngineError> {
        let mut check = Check::new("psi and phi are slice bijections");
        for a in self.primal.cochain.addresses()? {
            let m = self.psi_matrix(&a)?;
            check.record(m.rows() == m.cols() && m.rank() == m.cols(), || format!("psi at {a}"));
        }
        for a in self.primal.chain.addresses()? {
            let m = self.phi_matrix(&a)?;
            check.record(m.rows() == m.cols() && m.rank() == m.cols(), || format!("phi at {a}"));
        }
        Ok(check)
    }

    /// `psi delta = s_p delta^! psi` per cochain degree.
    pub fn psi_chain_map(&self) -> Result<(Check, SignTable), EngineError> {
        let mut check = Check::new("psi is a chain map");
        let mut table = SignTable::default();
        let (co, dco) = (&self.primal.cochain, &self.dual.cochain);
        for a in co.addresses()? {
            let next = co.step(&a);
            let left = self.psi_matrix(&next)?.mul(&co.differential_matrix(&a)?);
            let right = dco.differential_matrix(&a)?.mul(&self.psi_matrix(&a)?);
            table.record(&mut check, &a, &left, &right);
        }
        Ok((check, table))
    }

    /// `phi partial_nu = s_p partial_{nu^!} phi` per chain degree.
    pub fn phi_chain_map(&self) -> Result<(Check, SignTable), EngineError> {
        let mut check = Check::new("phi is a chain map");
        let mut table = SignTable::default();
        let (ch, dch) = (&self.primal.chain, &self.dual.chain);
        for a in ch.addresses()? {
            let next = ch.step(&a);
            let left = self.phi_matrix(&next)?.mul(&ch.differential_matrix(&a)?);
            let right = dch.differential_matrix(&a)?.mul(&self.phi_matrix(&a)?);
            table.record(&mut check, &a, &left, &right);
        }
        Ok((check, table))
    }

    /// `phi(iota_P eta) = s_p psi(P) cap eta^!` per cochain degree.
    pub fn square_check(&self) -> Result<(Check, SignTable), EngineError> {
        let mut check = Check::new("duality square commutes");
        let mut table = SignTable::default();
        for a in self.primal.cochain.addresses()? {
            let b = self.primal.dual_address(&a);
            if b != self.dual.dual_address(&a) {
                check.fail(format!("dual addresses differ at {a}"));
                continue;
            }
            let left = self.phi_matrix(&b)?.mul(&self.primal.map_matrix(&a)?);
            let right = self.dual.map_matrix(&a)?.mul(&self.psi_matrix(&a)?);
            table.record(&mut check, &a, &left, &right);
        }
        Ok((check, table))
    }

    pub fn dimension_table(&self) -> Result<Vec<DimensionRow>, EngineError> {
        let mut rows = Vec::new();
        for a in self.primal.cochain.addresses()? {
            let b = self.primal.dual_address(&a);
            rows.push(DimensionRow {
                cohomology: self.primal.cochain.homology(&a)?.dim(),
                dual_cohomology: self.dual.cochain.homology(&a)?.dim(),
                homology: self.primal.chain.homology(&b)?.dim(),
                dual_homology: self.dual.chain.homology(&b)?.dim(),
                address: a,
                chain_address: b,
            });
        }
        Ok(rows)
    }

    pub fn check_dimensions(&self) -> Result<Check, EngineError> {
        let mut check = Check::new("homology dimensions agree across the duality");
        for row in self.dimension_table()? {
            check.record(row.cohomology == row.dual_cohomology && row.homology == row.dual_homology, || {
                format!(
                    "at {}: {} vs {}, at {}: {} vs {}",
                    row.address, row.cohomology, row.dual_cohomology, row.chain_address, row.homology, row.dual_homology
                )
            });
        }
        Ok(check)
    }
}

/// `psi(pi) = pi^!` and `phi(eta) = eta^!`.
pub fn check_generators(pair: &DualPair) -> Check {
    let mut check = Check::new("psi(pi) = pi^!, phi(eta) = eta^!");
    let image = psi(pair.primal.bivector());
    check.record(&image == pair.dual.bivector(), || format!("psi(pi) = {image}"));
    let vol = phi(&polynomial::volume(pair.primal.carrier()));
    let dual_vol = Element::product_of(pair.dual.carrier(), Role::Dual, &(0..pair.dual.n()).collect::<Vec<_>>());
    check.record(vol == dual_vol, || format!("phi(eta) = {vol}"));
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::BivectorTerm;
    use crate::rational::int;

    fn structure(n: usize, terms: &[(i64, &[u32], usize, usize)]) -> PoissonStructure {
        let c = Arc::new(CarrierSpec::standard(CarrierKind::Polynomial, n));
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

    fn log_plane() -> PoissonStructure {
        structure(2, &[(1, &[1, 1], 0, 1)])
    }

    fn three_space() -> PoissonStructure {
        structure(3, &[(1, &[1, 1, 0], 0, 1), (2, &[1, 0, 1], 0, 2), (3, &[0, 1, 1], 1, 2)])
    }

    #[test]
    fn dual_bivectors() {
        let zero = koszul_dual(&structure(2, &[])).unwrap();
        assert!(zero.dual.bivector().is_zero());
        let pair = koszul_dual(&structure(2, &[(5, &[1, 1], 0, 1)])).unwrap();
        let c = pair.dual.carrier();
        let expected = Element::product_of(c, Role::Coordinate, &[0, 1])
            .mul(&Element::product_of(c, Role::Vector, &[0, 1]))
            .scale(&int(5));
        assert_eq!(pair.dual.bivector(), &expected);
        assert!(check_generators(&pair).passed);
    }

    #[test]
    fn rejects_non_quadratic() {
        let symplectic = structure(2, &[(1, &[0, 0], 0, 1)]);
        assert_eq!(koszul_dual(&symplectic), Err(KoszulError::NotQuadratic));
    }

    #[test]
    fn jacobi_both_ways() {
        let good = koszul_dual(&three_space()).unwrap();
        assert!(good.primal_jacobi && good.dual_jacobi);
        // x1 x2 d1^d2 + x1 x3 d2^d3 fails Jacobi
        let bad = koszul_dual(&structure(3, &[(1, &[1, 1, 0], 0, 1), (1, &[1, 0, 1], 1, 2)])).unwrap();
        assert!(!bad.primal_jacobi);
        assert!(bad.jacobi_agrees());
    }

    #[test]
    fn generator_images() {
        let c = Arc::new(CarrierSpec::standard(CarrierKind::Polynomial, 2));
        let d = dual_carrier(&c);
        let x1 = Element::of_role(&c, Role::Coordinate, 0);
        assert_eq!(psi(&x1), Element::of_role(&d, Role::Vector, 0));
        let form = x1.mul(&Element::of_role(&c, Role::Differential, 1));
        let expected = Element::of_role(&d, Role::Vector, 0).mul(&Element::of_role(&d, Role::Dual, 1));
        assert_eq!(phi(&form), expected);
    }

    #[test]
    fn modular_vectors_correspond() {
        for pi in [structure(2, &[]), log_plane(), three_space()] {
            let pair = koszul_dual(&pi).unwrap();
            let check = modular_correspondence_check(&pair).unwrap();
            assert!(check.passed, "{check}");
        }
    }

    #[test]
    fn squares_and_pinned_signs() {
        for (pi, window) in [(log_plane(), 2), (three_space(), 1)] {
            let n = pi.n() as i64;
            let sq = KoszulSquare::new(koszul_dual(&pi).unwrap(), window).unwrap();
            assert!(sq.check_bijective().unwrap().passed);
            let (psi_check, psi_signs) = sq.psi_chain_map().unwrap();
            let (phi_check, phi_signs) = sq.phi_chain_map().unwrap();
            let (square, signs) = sq.square_check().unwrap();
            assert!(psi_check.passed && phi_check.passed && square.passed, "{psi_check} {phi_check} {square}");
            // psi anticommutes with the coboundaries, phi commutes with the boundaries
            assert!(psi_signs.0.iter().all(|(p, s)| (0..n).contains(p) && *s == -1));
            assert!(phi_signs.0.iter().all(|(p, s)| (1..=n).contains(p) && *s == 1));
            assert!(signs.0.values().all(|&s| s == 1) && signs.0.len() == n as usize + 1);
            assert!(sq.check_dimensions().unwrap().passed);
        }
    }

    #[test]
    fn corrupted_phi_is_caught() {
        let sq = KoszulSquare::with_mode(koszul_dual(&log_plane()).unwrap(), 2, PhiMode::FlipFirst).unwrap();
        let (square, _) = sq.square_check().unwrap();
        assert!(!square.passed && square.witness.is_some());
    }
}
