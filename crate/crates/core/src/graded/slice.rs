use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{AlgebraError, CarrierSpec, Element, Monomial, RationalMatrix, Role};

/// Degree-and-weight predicate cutting a block of monomials out of a carrier.
///
/// Generators whose role is not listed in `allowed` must be absent. Roles with
/// a fixed count must have exactly that total exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    allowed: Vec<Role>,
    counts: Vec<(Role, u32)>,
    weight: Option<i64>,
}

impl Selector {
    pub fn new(allowed: &[Role]) -> Self {
        Selector {
            allowed: allowed.to_vec(),
            counts: Vec::new(),
            weight: None,
        }
    }

    pub fn count(mut self, role: Role, k: u32) -> Self {
        self.counts.retain(|(r, _)| *r != role);
        self.counts.push((role, k));
        self
    }

    pub fn weight(mut self, w: i64) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn matches(&self, carrier: &CarrierSpec, m: &Monomial) -> bool {
        carrier.generators().iter().enumerate().all(|(s, g)| {
            m.exponent(s) == 0 || self.allowed.contains(&g.role)
        }) && self
            .counts
            .iter()
            .all(|&(r, k)| m.count(carrier, r) == k)
            && self.weight.is_none_or(|w| m.weight(carrier) == w)
    }
}

/// Every monomial matching `selector`, sorted.
pub fn slice_basis(carrier: &CarrierSpec, selector: &Selector) -> Result<Vec<Monomial>, AlgebraError> {
    let n = carrier.n();
    let len = carrier.len();
    let roles: Vec<Role> = selector
        .allowed
        .iter()
        .copied()
        .filter(|&r| carrier.has_role(r))
        .collect();

    // partial exponent vectors from fixed-count roles and odd roles
    let mut partials: Vec<Vec<u32>> = vec![vec![0; len]];
    let mut free_even: Vec<usize> = Vec::new();
    for &role in &roles {
        let slots: Vec<usize> = (0..n).map(|i| carrier.slot(role, i)).collect();
        let odd = carrier.is_odd(slots[0]);
        let fixed = selector.counts.iter().find(|(r, _)| *r == role).map(|c| c.1);
        let choices: Vec<Vec<u32>> = match (fixed, odd) {
            (Some(k), true) => subsets(n, Some(k as usize)),
            (None, true) => subsets(n, None),
            (Some(k), false) => compositions(n, k),
            (None, false) => {
                free_even.extend(&slots);
                continue;
            }
        };
        let mut next = Vec::with_capacity(partials.len() * choices.len());
        for p in &partials {
            for c in &choices {
                let mut e = p.clone();
                for (i, &v) in c.iter().enumerate() {
                    e[slots[i]] = v;
                }
                next.push(e);
            }
        }
        partials = next;
    }
    // a fixed count on a role that is not allowed can only be met by zero
    for &(r, k) in &selector.counts {
        if k > 0 && !roles.contains(&r) {
            return Ok(Vec::new());
        }
    }

    let mut out = BTreeSet::new();
    if free_even.is_empty() {
        for e in partials {
            let m = Monomial::from_exponents(e);
            if selector.weight.is_none_or(|w| m.weight(carrier) == w) {
                out.insert(m);
            }
        }
        return Ok(out.into_iter().collect());
    }

    let target = selector.weight.ok_or_else(|| unbounded(carrier, &free_even[..1]))?;
    let w = |s: usize| carrier.generator(s).scaling_weight as i64;
    if let Some(&s) = free_even.iter().find(|&&s| w(s) == 0) {
        return Err(unbounded(carrier, &[s]));
    }
    let pos = free_even.iter().copied().find(|&s| w(s) > 0);
    let neg = free_even.iter().copied().find(|&s| w(s) < 0);
    if let (Some(a), Some(b)) = (pos, neg) {
        return Err(unbounded(carrier, &[a, b]));
    }
    for e in partials {
        let base = Monomial::from_exponents(e.clone()).weight(carrier);
        let mut stack = e;
        fill_even(carrier, &free_even, 0, target - base, &mut stack, &mut out);
    }
    Ok(out.into_iter().collect())
}

fn fill_even(
    carrier: &CarrierSpec,
    slots: &[usize],
    at: usize,
    remaining: i64,
    exps: &mut Vec<u32>,
    out: &mut BTreeSet<Monomial>,
) {
    if at == slots.len() {
        if remaining == 0 {
            out.insert(Monomial::from_exponents(exps.clone()));
        }
        return;
    }
    let w = carrier.generator(slots[at]).scaling_weight as i64;
    if remaining % w.abs() != 0 && at + 1 == slots.len() {
        return;
    }
    let max = remaining / w;
    if max < 0 {
        return;
    }
    for k in 0..=max {
        exps[slots[at]] = k as u32;
        fill_even(carrier, slots, at + 1, remaining - k * w, exps, out);
    }
    exps[slots[at]] = 0;
}

fn unbounded(carrier: &CarrierSpec, slots: &[usize]) -> AlgebraError {
    let witness = match slots {
        [a] => format!("{}^k", carrier.generator(*a).name),
        _ => {
            let parts: Vec<String> = slots
                .iter()
                .map(|&s| {
                    let other: i64 = slots
                        .iter()
                        .filter(|&&t| t != s)
                        .map(|&t| (carrier.generator(t).scaling_weight as i64).abs())
                        .product();
                    format!("{}^({}k)", carrier.generator(s).name, other)
                })
                .collect();
            parts.join("*")
        }
    };
    AlgebraError::UnboundedSlice { witness }
}

fn subsets(n: usize, size: Option<usize>) -> Vec<Vec<u32>> {
    (0u32..1 << n)
        .filter(|mask| size.is_none_or(|k| mask.count_ones() as usize == k))
        .map(|mask| (0..n).map(|i| (mask >> i) & 1).collect())
        .collect()
}

fn compositions(n: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=total {
            prefix.push(k);
            go(n, total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, total, &mut Vec::new(), &mut out);
    out
}

/// Matrix of `op` from the `domain` basis to the `codomain` basis.
pub fn operator_matrix(
    carrier: &Arc<CarrierSpec>,
    op: impl Fn(&Element) -> Element,
    domain: &[Monomial],
    codomain: &[Monomial],
) -> Result<RationalMatrix, AlgebraError> {
    let index: HashMap<&Monomial, usize> = codomain.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = RationalMatrix::zeros(codomain.len(), domain.len());
    for (j, m) in domain.iter().enumerate() {
        let image = op(&Element::monomial(carrier, m.clone()));
        for (t, c) in image.terms() {
            let Some(&i) = index.get(t) else {
                return Err(AlgebraError::Leakage {
                    basis_vector: m.render(carrier),
                    offending: t.render(carrier),
                });
            };
            mat.set(i, j, c.clone());
        }
    }
    Ok(mat)
}
