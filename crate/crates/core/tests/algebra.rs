use std::sync::Arc;

use poisson_workbench::calculus::schouten;
use poisson_workbench::graded::{CarrierKind, CarrierSpec, Element, Monomial, Parity, Role};
use poisson_workbench::koszul::psi;
use poisson_workbench::rational::int;
use proptest::prelude::*;

fn carrier(kind: CarrierKind) -> Arc<CarrierSpec> {
    Arc::new(CarrierSpec::standard(kind, 3))
}

/// Sparse elements with small coefficients, optionally restricted to some roles.
fn element(c: Arc<CarrierSpec>, roles: &'static [Role]) -> impl Strategy<Value = Element> {
    let slots: Vec<(usize, u32)> = c
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| roles.contains(&g.role))
        .map(|(s, g)| (s, if g.parity == Parity::Odd { 1 } else { 2 }))
        .collect();
    let len = c.len();
    let exponents = slots.iter().map(|&(_, top)| 0..=top).collect::<Vec<_>>();
    prop::collection::vec((exponents, -3i64..=3), 1..4).prop_map(move |terms| {
        let mut e = Element::zero(&c);
        for (picked, q) in terms {
            let mut full = vec![0u32; len];
            for (&(s, _), x) in slots.iter().zip(picked) {
                full[s] = x;
            }
            e.add_term(Monomial::from_exponents(full), int(q));
        }
        e
    })
}

fn monomial(c: Arc<CarrierSpec>, roles: &'static [Role]) -> impl Strategy<Value = Element> {
    element(c, roles)
        .prop_map(|e| e.terms().next().map_or_else(|| Element::one(e.carrier()), |(m, _)| Element::monomial(e.carrier(), m.clone())))
}

fn odd_degree(e: &Element) -> i64 {
    let c = e.carrier();
    let (m, _) = e.terms().next().expect("nonzero");
    m.odd_count(c) as i64
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

const ALL: &[Role] = &[Role::Coordinate, Role::Vector, Role::Differential, Role::Dual];
const POLYVECTOR: &[Role] = &[Role::Coordinate, Role::Vector];

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn polynomial_product_is_associative(
        (a, b, c) in (element(carrier(CarrierKind::Polynomial), ALL), element(carrier(CarrierKind::Polynomial), ALL), element(carrier(CarrierKind::Polynomial), ALL))
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn exterior_product_is_associative(
        (a, b, c) in (element(carrier(CarrierKind::Exterior), ALL), element(carrier(CarrierKind::Exterior), ALL), element(carrier(CarrierKind::Exterior), ALL))
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn monomials_graded_commute(
        (a, b) in (monomial(carrier(CarrierKind::Polynomial), ALL), monomial(carrier(CarrierKind::Polynomial), ALL)),
        (p, q) in (monomial(carrier(CarrierKind::Exterior), ALL), monomial(carrier(CarrierKind::Exterior), ALL))
    ) {
        let s = sign(odd_degree(&a) * odd_degree(&b));
        prop_assert_eq!(a.mul(&b), b.mul(&a).scale(&int(s)));
        let s = sign(odd_degree(&p) * odd_degree(&q));
        prop_assert_eq!(p.mul(&q), q.mul(&p).scale(&int(s)));
    }

    #[test]
    fn product_distributes(
        (a, b, c) in (element(carrier(CarrierKind::Polynomial), ALL), element(carrier(CarrierKind::Polynomial), ALL), element(carrier(CarrierKind::Polynomial), ALL))
    ) {
        prop_assert_eq!(a.mul(&(&b + &c)), &a.mul(&b) + &a.mul(&c));
    }

    #[test]
    fn schouten_antisymmetry(
        (p, q) in (monomial(carrier(CarrierKind::Polynomial), POLYVECTOR), monomial(carrier(CarrierKind::Polynomial), POLYVECTOR))
    ) {
        let (dp, dq) = (odd_degree(&p), odd_degree(&q));
        let pq = schouten(&p, &q).unwrap();
        let qp = schouten(&q, &p).unwrap();
        prop_assert_eq!(pq, qp.scale(&int(-sign((dp - 1) * (dq - 1)))));
    }

    #[test]
    fn psi_is_multiplicative(
        (a, b) in (element(carrier(CarrierKind::Polynomial), POLYVECTOR), element(carrier(CarrierKind::Polynomial), POLYVECTOR))
    ) {
        prop_assert_eq!(psi(&a.mul(&b)), psi(&a).mul(&psi(&b)));
    }
}
