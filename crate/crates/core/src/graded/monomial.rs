use std::cmp::Ordering;
use std::fmt::Write;

use super::{CarrierSpec, Role};

/// Exponent vector over the generators of a carrier. Odd exponents are 0 or 1.
///
/// Ordered by descending lexicographic exponent vectors, so `x1` sorts before
/// `x2` and the unit sorts last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len].into_boxed_slice())
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn generator(len: usize, slot: usize) -> Self {
        let mut e = vec![0; len];
        e[slot] = 1;
        Monomial::from_exponents(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, slot: usize) -> u32 {
        self.0[slot]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub(crate) fn with_exponent(&self, slot: usize, e: u32) -> Monomial {
        let mut v = self.0.to_vec();
        v[slot] = e;
        Monomial::from_exponents(v)
    }

    /// Product in canonical order: `Some((negative, m))`, or `None` when an odd
    /// factor repeats.
    pub fn mul(&self, other: &Monomial, carrier: &CarrierSpec) -> Option<(bool, Monomial)> {
        let mut exps = Vec::with_capacity(self.0.len());
        let mut swaps = 0u32;
        // odd factors of self lying to the right of the current slot
        let mut odd_after: u32 = (0..self.0.len())
            .filter(|&s| carrier.is_odd(s) && self.0[s] == 1)
            .count() as u32;
        for slot in 0..self.0.len() {
            let (a, b) = (self.0[slot], other.0[slot]);
            if carrier.is_odd(slot) {
                if a + b > 1 {
                    return None;
                }
                if a == 1 {
                    odd_after -= 1;
                }
                if b == 1 {
                    swaps += odd_after;
                }
            }
            exps.push(a + b);
        }
        Some((swaps % 2 == 1, Monomial::from_exponents(exps)))
    }

    pub fn degree(&self, carrier: &CarrierSpec) -> i64 {
        self.sum_by(carrier, |g| g.homological_degree as i64)
    }

    pub fn weight(&self, carrier: &CarrierSpec) -> i64 {
        self.sum_by(carrier, |g| g.scaling_weight as i64)
    }

    pub fn count(&self, carrier: &CarrierSpec, role: Role) -> u32 {
        self.0
            .iter()
            .zip(carrier.generators())
            .filter(|(_, g)| g.role == role)
            .map(|(e, _)| *e)
            .sum()
    }

    pub fn odd_count(&self, carrier: &CarrierSpec) -> u32 {
        (0..self.0.len())
            .filter(|&s| carrier.is_odd(s))
            .map(|s| self.0[s])
            .sum()
    }

    /// Number of odd factors strictly before `slot`.
    pub(crate) fn odd_before(&self, carrier: &CarrierSpec, slot: usize) -> u32 {
        (0..slot)
            .filter(|&s| carrier.is_odd(s))
            .map(|s| self.0[s])
            .sum()
    }

    pub(crate) fn odd_after(&self, carrier: &CarrierSpec, slot: usize) -> u32 {
        (slot + 1..self.0.len())
            .filter(|&s| carrier.is_odd(s))
            .map(|s| self.0[s])
            .sum()
    }

    fn sum_by(&self, carrier: &CarrierSpec, f: impl Fn(&super::Generator) -> i64) -> i64 {
        self.0
            .iter()
            .zip(carrier.generators())
            .map(|(&e, g)| e as i64 * f(g))
            .sum()
    }

    pub fn render(&self, carrier: &CarrierSpec) -> String {
        let mut out = String::new();
        for (slot, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&carrier.generator(slot).name);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}
