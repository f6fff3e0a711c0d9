//! Eigenvalue analysis of a linear modular vector and the weights it induces.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::calculus::{CalculusError, PoissonStructure};
use crate::homology::{Address, Complex, Duality, EngineError};
use crate::graded::{CarrierKind, CarrierSpec, Element, Monomial, RationalMatrix, Role};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Semisimple,
    NotSemisimple,
    UnsupportedField,
    NotLinear,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Semisimple => "semisimple",
            Verdict::NotSemisimple => "not-semisimple",
            Verdict::UnsupportedField => "unsupported-field",
            Verdict::NotLinear => "not-linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularSpectrum {
    pub verdict: Verdict,
    /// `nu = sum M_ij x_j d/dx_i`, or `sum M_ij xi_i d/dxi_j` on an exterior carrier.
    pub matrix: Option<RationalMatrix>,
    /// One eigenvalue per coordinate when semisimple; otherwise the rational
    /// roots of the characteristic polynomial with multiplicity.
    pub eigenvalues: Vec<Rational>,
    /// Columns are eigenvectors; present only when `M` is semisimple but not diagonal.
    pub change_of_coordinates: Option<RationalMatrix>,
}

impl ModularSpectrum {
    pub fn is_semisimple(&self) -> bool {
        self.verdict == Verdict::Semisimple
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_semisimple() && self.change_of_coordinates.is_none()
    }
}

/// Matrix of the linear part, or `None` if some term is not of the form
/// coordinate times derivation.
pub fn linear_matrix(nu: &Element) -> Option<RationalMatrix> {
    let c = nu.carrier();
    let n = c.n();
    let mut m = RationalMatrix::zeros(n, n);
    for (mono, q) in nu.terms() {
        if mono.count(c, Role::Coordinate) != 1
            || mono.count(c, Role::Vector) != 1
            || !nu.avoids(&[Role::Differential, Role::Dual])
        {
            return None;
        }
        let find = |role| (0..n).find(|&i| mono.exponent(c.slot(role, i)) == 1).unwrap();
        let (coord, vector) = (find(Role::Coordinate), find(Role::Vector));
        let (i, j) = match c.kind() {
            CarrierKind::Polynomial => (vector, coord),
            CarrierKind::Exterior => (coord, vector),
        };
        m.set(i, j, q.clone());
    }
    Some(m)
}

/// Coefficients `c_0..c_n` of `det(t I - M)`, lowest degree first.
pub fn characteristic_polynomial(m: &RationalMatrix) -> Vec<Rational> {
    // Faddeev-LeVerrier recursion
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = aux.add(&RationalMatrix::scalar(n, &coeffs[n + 1 - k]));
        aux = m.mul(&shifted);
        let trace: Rational = (0..n).map(|i| aux.get(i, i).clone()).sum();
        coeffs[n - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn divisors(x: &BigInt) -> Vec<BigInt> {
    let x = x.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= x {
        if (&x % &d).is_zero() {
            out.push(d.clone());
            let other = &x / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

fn eval(p: &[Rational], t: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Synthetic division of `p` by `t - r`.
fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        carry = &p[k + 1] + carry * r;
        q[k] = carry.clone();
    }
    q
}

/// Rational roots with multiplicity, sorted ascending.
pub fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut p = p.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        roots.push(Rational::zero());
        p.remove(0);
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let lcm = p.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let mut found = None;
        'search: for num in divisors(&ints[0]) {
            for den in divisors(ints.last().unwrap()) {
                for sign in [1, -1] {
                    let r = Rational::new(BigInt::from(sign) * &num, den.clone());
                    if eval(&p, &r).is_zero() {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                p = deflate(&p, &r);
                roots.push(r);
            }
            None => break,
        }
    }
    roots.sort();
    roots
}

pub fn analyze_modular(nu: &Element) -> ModularSpectrum {
    let Some(m) = linear_matrix(nu) else {
        return ModularSpectrum {
            verdict: Verdict::NotLinear,
            matrix: None,
            eigenvalues: Vec::new(),
            change_of_coordinates: None,
        };
    };
    let n = m.rows();
    let roots = rational_roots(&characteristic_polynomial(&m));
    let mut distinct: BTreeMap<Rational, usize> = BTreeMap::new();
    for r in &roots {
        *distinct.entry(r.clone()).or_default() += 1;
    }
    let mut vectors = Vec::new();
    let mut eigenvalues = Vec::new();
    for lambda in distinct.keys() {
        let shifted = m.sub(&RationalMatrix::scalar(n, lambda));
        for v in shifted.kernel() {
            vectors.push(v);
            eigenvalues.push(lambda.clone());
        }
    }
    let verdict = if vectors.len() == n {
        Verdict::Semisimple
    } else if roots.len() == n {
        Verdict::NotSemisimple
    } else {
        Verdict::UnsupportedField
    };
    if verdict != Verdict::Semisimple {
        return ModularSpectrum {
            verdict,
            matrix: Some(m),
            eigenvalues: roots,
            change_of_coordinates: None,
        };
    }
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j).is_zero()));
    if diagonal {
        let eigenvalues = (0..n).map(|i| m.get(i, i).clone()).collect();
        return ModularSpectrum {
            verdict,
            matrix: Some(m),
            eigenvalues,
            change_of_coordinates: None,
        };
    }
    ModularSpectrum {
        verdict,
        matrix: Some(m),
        eigenvalues,
        change_of_coordinates: Some(RationalMatrix::from_columns(n, &vectors)),
    }
}

/// Eigenvalue weight of a monomial: each generator contributes its modular
/// sign times the eigenvalue of its coordinate.
pub fn modular_weight(c: &CarrierSpec, m: &Monomial, eigenvalues: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (s, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let g = c.generator(s);
        total += &eigenvalues[g.index] * Rational::from_integer(BigInt::from(g.modular_sign as i64 * e as i64));
    }
    total
}

/// Rewrites an element in the coordinates `y` with `x = S y`.
pub fn change_coordinates(e: &Element, s: &RationalMatrix) -> Element {
    let c = Arc::clone(e.carrier());
    let n = c.n();
    let inv = s.inverse().expect("change of coordinates is invertible");
    let images: Vec<Element> = c
        .generators()
        .iter()
        .map(|g| {
            let mut img = Element::zero(&c);
            for k in 0..n {
                let (coeff, slot) = match g.role {
                    Role::Coordinate | Role::Differential => (s.get(g.index, k), c.slot(g.role, k)),
                    Role::Vector | Role::Dual => (inv.get(k, g.index), c.slot(g.role, k)),
                };
                img.add_term(Monomial::generator(c.len(), slot), coeff.clone());
            }
            img
        })
        .collect();
    e.substitute(&c, &images)
}

/// The structure in eigencoordinates of its modular vector, when that differs
/// from the given coordinates.
pub fn diagonalize(
    pi: &PoissonStructure,
    spectrum: &ModularSpectrum,
) -> Result<Option<PoissonStructure>, CalculusError> {
    match &spectrum.change_of_coordinates {
        None => Ok(None),
        Some(s) => PoissonStructure::new(change_coordinates(pi.bivector(), s)).map(Some),
    }
}

/// The chain side of a duality as a mixed complex `(b, B)` on modular weight 0.
#[derive(Debug, Clone)]
pub struct MixedComplex {
    duality: Arc<Duality>,
}

impl MixedComplex {
    pub fn duality(&self) -> &Arc<Duality> {
        &self.duality
    }

    pub fn chain(&self) -> &Complex {
        &self.duality.chain
    }

    pub fn address(&self, degree: i64, weight: i64) -> Address {
        Address::new(degree, weight, Rational::zero())
    }

    pub fn b(&self, x: &Element) -> Element {
        self.chain().differential(x)
    }

    pub fn big_b(&self, x: &Element) -> Element {
        self.duality.chain_operator(x)
    }

    pub fn b_matrix(&self, degree: i64, weight: i64) -> Result<RationalMatrix, EngineError> {
        self.chain().differential_matrix(&self.address(degree, weight))
    }

    /// `B` from `(degree, weight)` to `(degree + 1, weight)`.
    pub fn big_b_matrix(&self, degree: i64, weight: i64) -> Result<RationalMatrix, EngineError> {
        let from = self.address(degree, weight);
        let to = self.address(degree + 1, weight);
        self.chain().operator(|x| self.big_b(x), &from, &to)
    }

    /// `b^2 = 0`, `B^2 = 0` and `bB + Bb = 0` on every slice of the window.
    /// Returns the number of slices checked or the first failing address.
    pub fn check_axioms(&self) -> Result<usize, String> {
        let s = self.chain().weight_shift();
        let mut checked = 0;
        for p in self.chain().degrees() {
            for w in self.chain().weights() {
                let run = || -> Result<Option<&'static str>, EngineError> {
                    let b = self.b_matrix(p, w)?;
                    let bb = self.b_matrix(p - 1, w + s)?.mul(&b);
                    if !bb.is_zero() {
                        return Ok(Some("b^2"));
                    }
                    let big = self.big_b_matrix(p, w)?;
                    if !self.big_b_matrix(p + 1, w)?.mul(&big).is_zero() {
                        return Ok(Some("B^2"));
                    }
                    let anti = self.b_matrix(p + 1, w)?.mul(&big).add(&self.big_b_matrix(p - 1, w + s)?.mul(&b));
                    Ok((!anti.is_zero()).then_some("bB + Bb"))
                };
                match run() {
                    Ok(None) => checked += 1,
                    Ok(Some(what)) => return Err(format!("{what} != 0 at {}", self.address(p, w))),
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
        Ok(checked)
    }
}

/// The modular-weight-0 mixed complex; needs a diagonal spectrum (or `nu = 0`).
pub fn weight_zero_subcomplex(duality: Arc<Duality>) -> Result<MixedComplex, EngineError> {
    assert!(
        duality.chain.eigenvalues().is_some() || duality.chain.twist().is_none_or(Element::is_zero),
        "the weight-0 subcomplex needs modular eigenvalues"
    );
    Ok(MixedComplex { duality })
}

/// `bB + Bb` on the chain slice at `a`, landing at `(p, w + shift, lambda)`.
pub fn homotopy_matrix(duality: &Duality, a: &Address) -> Result<RationalMatrix, EngineError> {
    let chain = &duality.chain;
    let big_b = |x: &Element| duality.chain_operator(x);
    let up = Address::new(a.degree + 1, a.weight, a.lambda.clone());
    let down = chain.step(a);
    let target = Address::new(a.degree, down.weight, a.lambda.clone());
    let first = chain.differential_matrix(&up)?.mul(&chain.operator(big_b, a, &up)?);
    let second = chain.operator(big_b, &down, &target)?.mul(&chain.differential_matrix(a)?);
    Ok(first.add(&second))
}

/// `bB + Bb = lambda Id` on the slice at `a` (zero when the differential moves the weight).
pub fn homotopy_identity_check(duality: &Duality, a: &Address) -> Result<bool, EngineError> {
    let h = homotopy_matrix(duality, a)?;
    let size = duality.chain.basis(a)?.len();
    let expected = if duality.chain.weight_shift() == 0 {
        RationalMatrix::scalar(size, &a.lambda)
    } else {
        RationalMatrix::zeros(h.rows(), h.cols())
    };
    Ok(h == expected)
}

/// Homology dimensions at one `(degree, weight)`: the whole slice against
/// the modular weight 0 part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIsoRow {
    pub degree: i64,
    pub weight: i64,
    pub full: usize,
    pub weight_zero: usize,
}

/// Compares `dim H(CP)` with `dim H(CP^0)` over the window, computing the
/// former without the eigenvalue grading.
pub fn quasi_isomorphism_table(duality: &Duality) -> Result<Vec<QuasiIsoRow>, EngineError> {
    let graded = &duality.chain;
    let ungraded = Complex::new(
        graded.structure(),
        graded.variant(),
        graded.twist().cloned(),
        None,
        graded.window(),
    )?;
    let mut rows = Vec::new();
    for p in graded.degrees() {
        for w in graded.weights() {
            let a = Address::new(p, w, Rational::zero());
            rows.push(QuasiIsoRow {
                degree: p,
                weight: w,
                full: ungraded.homology(&a)?.dim(),
                weight_zero: graded.homology(&a)?.dim(),
            });
        }
    }
    Ok(rows)
}

/// On a slice with `lambda != 0`, `(1/lambda)(bB + Bb)` is the identity,
/// which is `Id - incl o proj` there since the projection to weight 0 vanishes.
pub fn projection_homotopy_check(duality: &Duality, a: &Address) -> Result<bool, EngineError> {
    assert!(!a.lambda.is_zero());
    let h = homotopy_matrix(duality, a)?.scale(&a.lambda.recip());
    Ok(h == RationalMatrix::identity(duality.chain.basis(a)?.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{polynomial, BivectorTerm};
    use crate::rational::int;

    fn poly(n: usize) -> Arc<CarrierSpec> {
        Arc::new(CarrierSpec::standard(CarrierKind::Polynomial, n))
    }

    fn field(c: &Arc<CarrierSpec>, entries: &[(usize, usize, i64)]) -> Element {
        // sum q x_j d/dx_i
        let mut e = Element::zero(c);
        for &(i, j, q) in entries {
            let t = Element::of_role(c, Role::Coordinate, j).mul(&Element::of_role(c, Role::Vector, i));
            e.add_scaled(&t, &int(q));
        }
        e
    }

    #[test]
    fn charpoly_matches_cofactor_expansion() {
        let m = RationalMatrix::from_rows(vec![
            vec![int(2), int(1), int(0)],
            vec![int(0), int(3), int(4)],
            vec![int(1), int(0), int(-1)],
        ]);
        // det(tI - M) expanded by hand
        assert_eq!(characteristic_polynomial(&m), vec![int(2), int(1), int(-4), int(1)]);
    }

    #[test]
    fn roots_with_multiplicity() {
        // (t - 1/2)^2 (t + 3) t = t^4 + 2t^3 - 11/4 t^2 + 3/4 t
        let p = vec![int(0), Rational::new(3.into(), 4.into()), Rational::new((-11).into(), 4.into()), int(2), int(1)];
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(rational_roots(&p), vec![int(-3), int(0), half.clone(), half]);
        // t^2 - 2 has no rational roots
        assert!(rational_roots(&[int(-2), int(0), int(1)]).is_empty());
    }

    #[test]
    fn zero_field_is_semisimple() {
        let s = analyze_modular(&Element::zero(&poly(2)));
        assert!(s.is_diagonal());
        assert_eq!(s.eigenvalues, vec![int(0), int(0)]);
    }

    #[test]
    fn verdicts() {
        let c = poly(2);
        assert_eq!(analyze_modular(&field(&c, &[(1, 0, 2)])).verdict, Verdict::NotSemisimple);
        assert_eq!(analyze_modular(&field(&c, &[(0, 1, 1), (1, 0, 2)])).verdict, Verdict::UnsupportedField);
        let quadratic = Element::of_role(&c, Role::Coordinate, 0)
            .mul(&Element::of_role(&c, Role::Coordinate, 0))
            .mul(&Element::of_role(&c, Role::Vector, 1));
        assert_eq!(analyze_modular(&quadratic).verdict, Verdict::NotLinear);
        let s = analyze_modular(&field(&c, &[(0, 0, 1), (1, 1, -1)]));
        assert!(s.is_diagonal());
        assert_eq!(s.eigenvalues, vec![int(1), int(-1)]);
    }

    #[test]
    fn non_diagonal_semisimple_is_diagonalized() {
        let c = poly(2);
        // M = [[0,1],[1,0]] has eigenvalues -1, 1
        let nu = field(&c, &[(0, 1, 1), (1, 0, 1)]);
        let s = analyze_modular(&nu);
        assert_eq!(s.verdict, Verdict::Semisimple);
        let change = s.change_of_coordinates.clone().unwrap();
        let diag = linear_matrix(&change_coordinates(&nu, &change)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { s.eigenvalues[i].clone() } else { int(0) };
                assert_eq!(*diag.get(i, j), expected);
            }
        }
    }

    #[test]
    fn transported_structure_has_diagonal_modular_vector() {
        // pi = x1 x2 d1^d2 in coordinates x = S y
        let c = poly(2);
        let pi = PoissonStructure::from_terms(
            &c,
            &[BivectorTerm {
                coeff: int(1),
                exponents: vec![1, 1],
                frame: (0, 1),
            }],
        )
        .unwrap();
        let s = RationalMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]);
        let skewed = PoissonStructure::new(change_coordinates(pi.bivector(), &s)).unwrap();
        let spectrum = analyze_modular(&polynomial::modular_vector(&skewed).unwrap());
        assert!(spectrum.is_semisimple() && !spectrum.is_diagonal());
        let straight = diagonalize(&skewed, &spectrum).unwrap().unwrap();
        let again = analyze_modular(&polynomial::modular_vector(&straight).unwrap());
        assert!(again.is_diagonal());
        let mut sorted = again.eigenvalues.clone();
        sorted.sort();
        assert_eq!(sorted, vec![int(-1), int(1)]);
    }

    #[test]
    fn weights_of_monomials() {
        let c = poly(2);
        let lambda = vec![int(-1), int(1)];
        let x1x2 = Monomial::from_exponents(vec![1, 1, 0, 0, 0, 0]);
        let x1dx1 = Monomial::from_exponents(vec![1, 0, 0, 0, 1, 0]);
        assert_eq!(modular_weight(&c, &Monomial::one(6), &lambda), int(0));
        assert_eq!(modular_weight(&c, &x1x2, &lambda), int(0));
        assert_eq!(modular_weight(&c, &x1dx1, &lambda), int(-2));
    }

    fn log_plane() -> (PoissonStructure, Element) {
        let c = poly(2);
        let pi = PoissonStructure::from_terms(
            &c,
            &[BivectorTerm {
                coeff: int(1),
                exponents: vec![1, 1],
                frame: (0, 1),
            }],
        )
        .unwrap();
        let nu = polynomial::modular_vector(&pi).unwrap();
        (pi, nu)
    }

    #[test]
    fn homotopy_identity_on_eigenvalue_slices() {
        let (pi, nu) = log_plane();
        let spectrum = analyze_modular(&nu);
        let duality = Duality::new(&pi, &nu, Some(spectrum.eigenvalues), 3).unwrap();
        let mut nonzero = 0;
        for a in duality.chain.addresses().unwrap() {
            assert!(homotopy_identity_check(&duality, &a).unwrap(), "{a}");
            if !a.lambda.is_zero() {
                nonzero += 1;
                assert!(projection_homotopy_check(&duality, &a).unwrap());
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn weight_zero_part_carries_the_homology() {
        let (pi, nu) = log_plane();
        let spectrum = analyze_modular(&nu);
        let duality = Arc::new(Duality::new(&pi, &nu, Some(spectrum.eigenvalues), 3).unwrap());
        for row in quasi_isomorphism_table(&duality).unwrap() {
            assert_eq!(row.full, row.weight_zero, "{row:?}");
        }
        let mixed = weight_zero_subcomplex(duality).unwrap();
        assert!(mixed.check_axioms().unwrap() > 0);
    }

    #[test]
    fn weight_zero_monomials_are_balanced() {
        let (pi, nu) = log_plane();
        let spectrum = analyze_modular(&nu);
        let duality = Duality::new(&pi, &nu, Some(spectrum.eigenvalues), 3).unwrap();
        let c = duality.carrier().clone();
        for a in duality.chain.addresses().unwrap().iter().filter(|a| a.lambda.is_zero()) {
            for m in duality.chain.basis(a).unwrap().iter() {
                let first = m.exponent(c.slot(Role::Coordinate, 0)) + m.exponent(c.slot(Role::Differential, 0));
                let second = m.exponent(c.slot(Role::Coordinate, 1)) + m.exponent(c.slot(Role::Differential, 1));
                assert_eq!(first, second);
            }
        }
    }
}
