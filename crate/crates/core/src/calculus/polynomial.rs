//! Operators on `R[x_1..x_n]`: polyvectors live in `Lambda(x, d/dx)` and
//! forms in `Lambda(x, dx)` inside one polynomial carrier.
//!
//! Conventions: a polyvector `f d_j1 ^ .. ^ d_jp` evaluates on functions by
//! `f det[d_js f_t]`; contraction is `i_{X^Y} = i_X i_Y`, so the factor written
//! last acts first; the bracket of functions is `{f, g} = pi(df, dg)`.

use std::sync::Arc;

use num_traits::Zero;

use super::{schouten, CalculusError, PoissonStructure};
use crate::graded::{CarrierSpec, Element, Monomial, Role};
use crate::rational::{self, Rational};

/// Sorted coordinate indices of the generators of `role` present in `m`.
fn odd_indices(c: &CarrierSpec, m: &Monomial, role: Role) -> Vec<usize> {
    (0..c.n()).filter(|&i| m.exponent(c.slot(role, i)) > 0).collect()
}

/// `m` with every generator of the given roles removed.
fn strip(c: &CarrierSpec, m: &Monomial, roles: &[Role]) -> Monomial {
    let mut e = m.exponents().to_vec();
    for (s, g) in c.generators().iter().enumerate() {
        if roles.contains(&g.role) {
            e[s] = 0;
        }
    }
    Monomial::from_exponents(e)
}

fn coordinate(c: &Arc<CarrierSpec>, i: usize) -> Element {
    Element::of_role(c, Role::Coordinate, i)
}

fn partial(f: &Element, i: usize) -> Element {
    f.left_derivative(f.carrier().slot(Role::Coordinate, i))
}

/// `{f, g} = sum_{i<j} pi^{ij} (d_i f d_j g - d_j f d_i g)`.
pub fn poisson_bracket(pi: &PoissonStructure, f: &Element, g: &Element) -> Element {
    let mut out = Element::zero(pi.carrier());
    for ((i, j), coeff) in pi.components() {
        let a = partial(f, i).mul(&partial(g, j));
        let b = partial(f, j).mul(&partial(g, i));
        out = &out + &coeff.mul(&(&a - &b));
    }
    out
}

/// Value of a polyvector on a tuple of functions.
pub fn evaluate(p: &Element, args: &[Element]) -> Element {
    let c = Arc::clone(p.carrier());
    let k = args.len();
    let grads: Vec<Vec<Element>> = args
        .iter()
        .map(|f| (0..c.n()).map(|i| partial(f, i)).collect())
        .collect();
    let mut out = Element::zero(&c);
    for (m, q) in p.terms() {
        let frame = odd_indices(&c, m, Role::Vector);
        if frame.len() != k {
            continue;
        }
        let coeff = Element::term(&c, strip(&c, m, &[Role::Vector]), q.clone());
        let det = determinant(&c, k, |s, t| grads[t][frame[s]].clone());
        out = &out + &coeff.mul(&det);
    }
    out
}

fn determinant(c: &Arc<CarrierSpec>, k: usize, entry: impl Fn(usize, usize) -> Element) -> Element {
    let mut out = Element::zero(c);
    let mut perm: Vec<usize> = (0..k).collect();
    permutations(&mut perm, 0, &mut |perm, sign| {
        let mut term = Element::constant(c, rational::sign(sign as i64));
        for (s, &t) in perm.iter().enumerate() {
            term = term.mul(&entry(s, t));
            if term.is_zero() {
                return;
            }
        }
        out = &out + &term;
    });
    out
}

/// Heap-free recursive enumeration with parity of the transposition count.
fn permutations(perm: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize], u32)) {
    fn go(perm: &mut Vec<usize>, at: usize, swaps: u32, f: &mut impl FnMut(&[usize], u32)) {
        if at == perm.len() {
            f(perm, swaps);
            return;
        }
        for i in at..perm.len() {
            perm.swap(at, i);
            go(perm, at + 1, swaps + u32::from(i != at), f);
            perm.swap(at, i);
        }
    }
    go(perm, at, 0, f)
}

/// Lichnerowicz coboundary from the alternating-sum formula on functions.
///
/// The result is read off from its values on increasing tuples of coordinates.
pub fn coboundary(pi: &PoissonStructure, p: &Element) -> Element {
    let c = Arc::clone(pi.carrier());
    let mut out = Element::zero(&c);
    for deg in 0..=c.n() {
        let part = p.filter(|m| m.count(&c, Role::Vector) as usize == deg);
        if part.is_zero() || deg == c.n() {
            continue;
        }
        for set in increasing_tuples(c.n(), deg + 1) {
            let xs: Vec<Element> = set.iter().map(|&k| coordinate(&c, k)).collect();
            let mut value = Element::zero(&c);
            for i in 0..=deg {
                let rest: Vec<Element> = skip(&xs, &[i]);
                let inner = evaluate(&part, &rest);
                value.add_scaled(&poisson_bracket(pi, &xs[i], &inner), &rational::sign(i as i64));
            }
            for i in 0..=deg {
                for j in i + 1..=deg {
                    let mut args = vec![poisson_bracket(pi, &xs[i], &xs[j])];
                    args.extend(skip(&xs, &[i, j]));
                    value.add_scaled(&evaluate(&part, &args), &rational::sign((i + j) as i64));
                }
            }
            let frame = Element::product_of(&c, Role::Vector, &set);
            out = &out + &value.mul(&frame);
        }
    }
    out
}

fn skip(xs: &[Element], drop: &[usize]) -> Vec<Element> {
    xs.iter()
        .enumerate()
        .filter(|(k, _)| !drop.contains(k))
        .map(|(_, e)| e.clone())
        .collect()
}

pub(crate) fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out.sort();
    out
}

/// Koszul boundary on `f0 dx_k1 ^ .. ^ dx_kp`, optionally twisted by a vector field.
fn boundary_impl(pi: &PoissonStructure, twist: Option<&Element>, omega: &Element) -> Element {
    let c = Arc::clone(pi.carrier());
    omega.map_linear(|m| {
        let ks = odd_indices(&c, m, Role::Differential);
        let f0 = Element::monomial(&c, strip(&c, m, &[Role::Differential]));
        let xs: Vec<Element> = ks.iter().map(|&k| coordinate(&c, k)).collect();
        let mut out = Element::zero(&c);
        for (i, x) in xs.iter().enumerate() {
            let mut coefficient = poisson_bracket(pi, &f0, x);
            if let Some(nu) = twist {
                coefficient = &coefficient + &f0.mul(&evaluate(nu, std::slice::from_ref(x)));
            }
            let rest: Vec<usize> = ks.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &v)| v).collect();
            let tail = Element::product_of(&c, Role::Differential, &rest);
            out.add_scaled(&coefficient.mul(&tail), &rational::sign(i as i64));
        }
        for i in 0..ks.len() {
            for j in i + 1..ks.len() {
                let inner = de_rham(&poisson_bracket(pi, &xs[i], &xs[j]));
                let rest: Vec<usize> = ks
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, &v)| v)
                    .collect();
                let tail = Element::product_of(&c, Role::Differential, &rest);
                out.add_scaled(&f0.mul(&inner).mul(&tail), &rational::sign((j - i) as i64));
            }
        }
        out
    })
}

pub fn boundary(pi: &PoissonStructure, omega: &Element) -> Element {
    boundary_impl(pi, None, omega)
}

/// Boundary with coefficients in the module twisted by the derivation `nu`.
pub fn twisted_boundary(pi: &PoissonStructure, nu: &Element, omega: &Element) -> Element {
    boundary_impl(pi, Some(nu), omega)
}

pub fn de_rham(omega: &Element) -> Element {
    let c = Arc::clone(omega.carrier());
    let mut out = Element::zero(&c);
    for i in 0..c.n() {
        let dx = Element::of_role(&c, Role::Differential, i);
        out = &out + &dx.mul(&partial(omega, i));
    }
    out
}

/// `dx_1 ^ .. ^ dx_n`.
pub fn volume(c: &Arc<CarrierSpec>) -> Element {
    Element::product_of(c, Role::Differential, &(0..c.n()).collect::<Vec<_>>())
}

/// Interior product `i_phi omega`.
pub fn contract(phi: &Element, omega: &Element) -> Element {
    let c = Arc::clone(phi.carrier());
    let mut out = Element::zero(&c);
    for (m, q) in phi.terms() {
        let frame = odd_indices(&c, m, Role::Vector);
        let mut v = omega.clone();
        for &j in frame.iter().rev() {
            v = v.left_derivative(c.slot(Role::Differential, j));
        }
        let coeff = Element::term(&c, strip(&c, m, &[Role::Vector]), q.clone());
        out = &out + &coeff.mul(&v);
    }
    out
}

pub fn contract_volume(phi: &Element) -> Element {
    contract(phi, &volume(phi.carrier()))
}

/// Inverse of `phi -> i_phi eta`, solved monomial by monomial.
///
/// `f dx_S` has the unique preimage `f d_{S^c} / s` where `i_{d_{S^c}} eta = s dx_S`.
pub fn contract_volume_inverse(omega: &Element) -> Result<Element, CalculusError> {
    let c = Arc::clone(omega.carrier());
    let eta = volume(&c);
    let mut out = Element::zero(&c);
    for (m, q) in omega.terms() {
        let present = odd_indices(&c, m, Role::Differential);
        let complement: Vec<usize> = (0..c.n()).filter(|i| !present.contains(i)).collect();
        let frame = Element::product_of(&c, Role::Vector, &complement);
        let image = contract(&frame, &eta);
        let target = strip(&c, m, &[Role::Coordinate]);
        let s = image.coefficient(&target);
        if s.is_zero() || image.len() != 1 {
            return Err(CalculusError::SingularContraction(m.render(&c)));
        }
        let coeff = Element::term(&c, strip(&c, m, &[Role::Differential]), q / s);
        out = &out + &coeff.mul(&frame);
    }
    Ok(out)
}

/// `Div = i^{-1} d i` with respect to `dx_1 ^ .. ^ dx_n`.
pub fn divergence(p: &Element) -> Result<Element, CalculusError> {
    contract_volume_inverse(&de_rham(&contract_volume(p)))
}

/// `nu = -Div(pi)`, checked to be a Poisson derivation and a 1-cocycle.
pub fn modular_vector(pi: &PoissonStructure) -> Result<Element, CalculusError> {
    let nu = divergence(pi.bivector())?.scale(&-Rational::from_integer(1.into()));
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

/// `true` if `[nu, pi] = 0`.
pub fn is_poisson_derivation(pi: &PoissonStructure, nu: &Element) -> bool {
    schouten(nu, pi.bivector()).is_ok_and(|e| e.is_zero())
}
