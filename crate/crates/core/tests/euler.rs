//! Homology dimensions against an independent count: on each `(weight, lambda)`
//! strand of a weight-preserving complex the alternating sum of homology
//! dimensions equals that of the chain dimensions.

use std::collections::BTreeMap;
use std::sync::Arc;

use poisson_workbench::calculus::{polynomial, BivectorTerm, PoissonStructure};
use poisson_workbench::graded::{CarrierKind, CarrierSpec};
use poisson_workbench::homology::{Complex, Duality};
use poisson_workbench::rational::{int, ratio, Rational};
use poisson_workbench::spectral::analyze_modular;

fn structure(n: usize, terms: &[(Rational, [u32; 3], usize, usize)]) -> PoissonStructure {
    let c = Arc::new(CarrierSpec::standard(CarrierKind::Polynomial, n));
    let terms: Vec<BivectorTerm> = terms
        .iter()
        .map(|(q, e, i, j)| BivectorTerm {
            coeff: q.clone(),
            exponents: e[..n].to_vec(),
            frame: (*i, *j),
        })
        .collect();
    PoissonStructure::from_terms(&c, &terms).unwrap()
}

fn euler_defects(complex: &Complex) -> Vec<String> {
    let mut strands: BTreeMap<(i64, Rational), (i64, i64)> = BTreeMap::new();
    for a in complex.addresses().unwrap() {
        let s = if a.degree % 2 == 0 { 1 } else { -1 };
        let entry = strands.entry((a.weight, a.lambda.clone())).or_default();
        entry.0 += s * complex.basis(&a).unwrap().len() as i64;
        entry.1 += s * complex.homology(&a).unwrap().dim() as i64;
    }
    strands
        .into_iter()
        .filter(|(_, (c, h))| c != h)
        .map(|((w, l), (c, h))| format!("w={w}, lambda={l}: chains {c}, homology {h}"))
        .collect()
}

fn assert_euler(pi: &PoissonStructure, window: i64) {
    let nu = polynomial::modular_vector(pi).unwrap();
    let spectrum = analyze_modular(&nu);
    let d = Duality::new(pi, &nu, Some(spectrum.eigenvalues), window).unwrap();
    assert_eq!(euler_defects(&d.cochain), Vec::<String>::new());
    assert_eq!(euler_defects(&d.chain), Vec::<String>::new());
}

#[test]
fn log_plane() {
    assert_euler(&structure(2, &[(int(1), [1, 1, 0], 0, 1)]), 4);
}

#[test]
fn quadratic_three_space() {
    let pi = structure(
        3,
        &[(int(1), [1, 1, 0], 0, 1), (ratio(-2, 3), [1, 0, 1], 0, 2), (ratio(5, 2), [0, 1, 1], 1, 2)],
    );
    assert_euler(&pi, 2);
}

#[test]
fn zero_structure_has_no_differential() {
    let pi = structure(2, &[]);
    let nu = polynomial::modular_vector(&pi).unwrap();
    let d = Duality::new(&pi, &nu, Some(analyze_modular(&nu).eigenvalues), 2).unwrap();
    for a in d.cochain.addresses().unwrap() {
        assert_eq!(d.cochain.homology(&a).unwrap().dim(), d.cochain.basis(&a).unwrap().len());
    }
}
