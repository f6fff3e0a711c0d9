//! Negative cyclic homology of the weight-0 mixed complex and its gravity brackets.
//!
//! A chain of `CC^-_m` at weight `w` is a finite list `(x_0, x_1, ..)` with
//! `x_i` in `C_{m+2i}` at weight `w - s i`, where `s` is the weight shift of `b`.
//! The total differential sends it to `(b x_i + B x_{i-1})_i` in `CC^-_{m-1}`
//! at weight `w + s`. Form degrees are bounded by `n`, so nothing is truncated.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use thiserror::Error;

use crate::bv::DeltaMode;
use crate::checks::Check;
use crate::graded::{Element, Monomial, RationalMatrix};
use crate::homology::{from_vector, to_vector, Address, EngineError, HomologyClass, LinearHomology};
use crate::rational::{self, Rational};
use crate::spectral::MixedComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GravityError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("address {0} lies outside the weight window")]
    WindowExceeded(Address),
    #[error("B of {0} is not a cycle of the total complex")]
    BetaNotCycle(String),
}

/// Sign rule for the brackets; `Mutated` exists to show the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonRule {
    /// `eps_k = (k-1)|x_1| + (k-2)|x_2| + .. + |x_{k-1}|`.
    Faithful,
    /// `eps_k = |x_2| + 2|x_3| + .. + (k-1)|x_k|`.
    Mutated,
}

/// Signs of the terms `{{x_i, x_j}, ..}` in the generalized Jacobi relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiSigns {
    /// `eps_ij` plus the permutation sign `i + j - 3` of moving `x_i, x_j` to the
    /// front, plus `n - 2` against the right-hand side.
    Permuted,
    /// `eps_ij` alone. Fails on `pi = 0` in the plane.
    Displayed,
}

#[derive(Debug, Clone)]
struct Part {
    index: i64,
    address: Address,
    basis: Arc<Vec<Monomial>>,
    offset: usize,
}

#[derive(Debug, Clone)]
struct Layout {
    parts: Vec<Part>,
    len: usize,
}

impl Layout {
    fn part(&self, index: i64) -> Option<&Part> {
        self.parts.iter().find(|p| p.index == index)
    }
}

/// A class in `HC^-_m` at weight `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicClass {
    pub degree: i64,
    pub weight: i64,
    /// `(i, x_i)` for the components present at this address.
    pub components: Vec<(i64, Element)>,
    pub coordinates: Vec<Rational>,
}

impl CyclicClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| if *i == 0 { format!("({e})") } else { format!("({e})u^{i}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub struct NegativeCyclic {
    mixed: MixedComplex,
    epsilon: EpsilonRule,
    delta: DeltaMode,
    jacobi: JacobiSigns,
    homology: Mutex<BTreeMap<(i64, i64), Arc<LinearHomology>>>,
}

impl NegativeCyclic {
    pub fn new(mixed: MixedComplex) -> Self {
        NegativeCyclic {
            mixed,
            epsilon: EpsilonRule::Faithful,
            delta: DeltaMode::Faithful,
            jacobi: JacobiSigns::Permuted,
            homology: Mutex::new(BTreeMap::new()),
        }
    }

    /// `DeltaMode::FlipOdd` replaces `B` by `phi Delta' phi^{-1}` for the corrupted `Delta'`
    /// everywhere, in the total differential and in the connecting map.
    pub fn with_modes(mixed: MixedComplex, epsilon: EpsilonRule, delta: DeltaMode) -> Self {
        NegativeCyclic {
            mixed,
            epsilon,
            delta,
            jacobi: JacobiSigns::Permuted,
            homology: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn with_jacobi_signs(mut self, jacobi: JacobiSigns) -> Self {
        self.jacobi = jacobi;
        self
    }

    pub fn mixed(&self) -> &MixedComplex {
        &self.mixed
    }

    fn n(&self) -> i64 {
        self.mixed.chain().carrier().n() as i64
    }

    fn shift(&self) -> i64 {
        self.mixed.chain().weight_shift()
    }

    fn b_sign(&self, degree: i64) -> i64 {
        if self.delta == DeltaMode::FlipOdd && (self.n() - degree) % 2 != 0 {
            -1
        } else {
            1
        }
    }

    fn big_b_matrix(&self, p: i64, w: i64) -> Result<RationalMatrix, EngineError> {
        let m = self.mixed.big_b_matrix(p, w)?;
        Ok(if self.b_sign(p) < 0 { m.scale(&rational::int(-1)) } else { m })
    }

    fn layout(&self, m: i64, w: i64) -> Result<Layout, EngineError> {
        let mut parts = Vec::new();
        let mut offset = 0;
        let n = self.n();
        let first = if m >= 0 { 0 } else { (-m + 1) / 2 };
        let mut i = first;
        while m + 2 * i <= n {
            let address = self.mixed.address(m + 2 * i, w - self.shift() * i);
            let basis = self.mixed.chain().basis(&address)?;
            let len = basis.len();
            parts.push(Part {
                index: i,
                address,
                basis,
                offset,
            });
            offset += len;
            i += 1;
        }
        Ok(Layout { parts, len: offset })
    }

    /// Matrix of `b + uB` from `CC^-_m` at `w` to `CC^-_{m-1}` at `w + s`.
    pub fn total_matrix(&self, m: i64, w: i64) -> Result<RationalMatrix, EngineError> {
        let src = self.layout(m, w)?;
        let dst = self.layout(m - 1, w + self.shift())?;
        let mut out = RationalMatrix::zeros(dst.len, src.len);
        for part in &src.parts {
            let (p, pw) = (part.address.degree, part.address.weight);
            if let Some(target) = dst.part(part.index) {
                place(&mut out, &self.mixed.b_matrix(p, pw)?, target.offset, part.offset);
            }
            if let Some(target) = dst.part(part.index + 1) {
                place(&mut out, &self.big_b_matrix(p, pw)?, target.offset, part.offset);
            }
        }
        Ok(out)
    }

    pub fn homology(&self, m: i64, w: i64) -> Result<Arc<LinearHomology>, EngineError> {
        if let Some(h) = self.homology.lock().unwrap().get(&(m, w)) {
            return Ok(Arc::clone(h));
        }
        let rows = self.layout(m, w)?.len;
        let incoming = self.total_matrix(m + 1, w - self.shift())?;
        let outgoing = self.total_matrix(m, w)?;
        let h = Arc::new(LinearHomology::new(rows, &incoming, &outgoing));
        self.homology.lock().unwrap().insert((m, w), Arc::clone(&h));
        Ok(h)
    }

    fn split(&self, m: i64, w: i64, v: &[Rational]) -> Result<Vec<(i64, Element)>, EngineError> {
        let layout = self.layout(m, w)?;
        let c = self.mixed.chain().carrier();
        Ok(layout
            .parts
            .iter()
            .map(|p| (p.index, from_vector(c, &p.basis, &v[p.offset..p.offset + p.basis.len()])))
            .collect())
    }

    fn class_from_vector(&self, m: i64, w: i64, v: &[Rational]) -> Result<Option<CyclicClass>, EngineError> {
        let h = self.homology(m, w)?;
        let Some(coordinates) = h.coordinates(v) else {
            return Ok(None);
        };
        Ok(Some(CyclicClass {
            degree: m,
            weight: w,
            components: self.split(m, w, v)?,
            coordinates,
        }))
    }

    /// Class of a cycle given componentwise.
    pub fn class_of(&self, m: i64, w: i64, components: &[(i64, Element)]) -> Result<Option<CyclicClass>, EngineError> {
        let layout = self.layout(m, w)?;
        let mut v = vec![Rational::zero(); layout.len];
        for (i, e) in components {
            if e.is_zero() {
                continue;
            }
            let part = layout.part(*i).ok_or_else(|| EngineError::OutsideSlice(self.mixed.address(m, w)))?;
            let local = to_vector(e, &part.basis).ok_or_else(|| EngineError::OutsideSlice(part.address.clone()))?;
            v[part.offset..part.offset + local.len()].clone_from_slice(&local);
        }
        self.class_from_vector(m, w, &v)
    }

    pub fn basis_classes(&self, m: i64, w: i64) -> Result<Vec<CyclicClass>, EngineError> {
        let h = self.homology(m, w)?;
        let mut out = Vec::new();
        for k in 0..h.dim() {
            let mut coords = vec![Rational::zero(); h.dim()];
            coords[k] = Rational::from_integer(1.into());
            let v = h.combination(&coords);
            out.push(CyclicClass {
                degree: m,
                weight: w,
                components: self.split(m, w, &v)?,
                coordinates: coords,
            });
        }
        Ok(out)
    }

    /// Chain weights of the window.
    pub fn weights(&self) -> std::ops::RangeInclusive<i64> {
        self.mixed.chain().weights()
    }

    /// Basis classes in degrees `0..=n` over the window.
    pub fn window_basis(&self) -> Result<Vec<CyclicClass>, EngineError> {
        let mut out = Vec::new();
        for m in 0..=self.n() {
            for w in self.weights() {
                out.extend(self.basis_classes(m, w)?);
            }
        }
        Ok(out)
    }

    /// `sum x_i u^i -> [x_0]`.
    pub fn pi_star(&self, x: &CyclicClass) -> Result<HomologyClass, EngineError> {
        let address = self.mixed.address(x.degree, x.weight);
        let x0 = x
            .components
            .iter()
            .find(|(i, _)| *i == 0)
            .map(|(_, e)| e.clone())
            .unwrap_or_else(|| Element::zero(self.mixed.chain().carrier()));
        self.mixed.chain().class_of(&address, &x0)
    }

    /// Multiplication by `u`, from `CC^-_{m+2}` at `w - s` to `CC^-_m` at `w`.
    pub fn u_shift(&self, x: &CyclicClass) -> Result<CyclicClass, GravityError> {
        let (m, w) = (x.degree - 2, x.weight + self.shift());
        let moved: Vec<(i64, Element)> = x.components.iter().map(|(i, e)| (i + 1, e.clone())).collect();
        self.class_of(m, w, &moved)?
            .ok_or_else(|| GravityError::BetaNotCycle(x.render()))
    }

    /// Connecting map: `[x] -> [(B x, 0, ..)]` in degree one higher.
    pub fn beta(&self, x: &HomologyClass) -> Result<CyclicClass, GravityError> {
        let bx = self
            .mixed
            .big_b(&x.representative)
            .scale(&rational::int(self.b_sign(x.address.degree)));
        self.class_of(x.address.degree + 1, x.address.weight, &[(0, bx.clone())])?
            .ok_or_else(|| GravityError::BetaNotCycle(x.representative.to_string()))
    }

    fn guard(&self, a: &Address) -> Result<(), GravityError> {
        if self.weights().contains(&a.weight) {
            Ok(())
        } else {
            Err(GravityError::WindowExceeded(a.clone()))
        }
    }

    /// Product on `b`-homology transported from the cup product:
    /// `a . b = phi(phi^{-1} a  phi^{-1} b)`.
    pub fn product(&self, a: &HomologyClass, b: &HomologyClass) -> Result<HomologyClass, GravityError> {
        let duality = self.mixed.duality();
        let n = self.n();
        let target = Address::new(
            a.address.degree + b.address.degree - n,
            a.address.weight + b.address.weight - n,
            &a.address.lambda + &b.address.lambda,
        );
        self.guard(&target)?;
        let fa = duality.duality_inverse(a)?;
        let fb = duality.duality_inverse(b)?;
        let image = duality.map(&fa.representative.mul(&fb.representative));
        Ok(self.mixed.chain().class_of(&target, &image)?)
    }

    fn epsilon(&self, degrees: &[i64]) -> i64 {
        let k = degrees.len() as i64;
        degrees
            .iter()
            .enumerate()
            .map(|(i, d)| match self.epsilon {
                EpsilonRule::Faithful => (k - 1 - i as i64) * d,
                EpsilonRule::Mutated => i as i64 * d,
            })
            .sum()
    }

    /// `{x_1, .., x_k} = (-1)^{eps_k} beta(pi_* x_1 . .. . pi_* x_k)`.
    pub fn bracket(&self, xs: &[&CyclicClass]) -> Result<CyclicClass, GravityError> {
        assert!(xs.len() >= 2, "brackets take at least two arguments");
        let mut acc = self.pi_star(xs[0])?;
        for x in &xs[1..] {
            acc = self.product(&acc, &self.pi_star(x)?)?;
        }
        let mut out = self.beta(&acc)?;
        let degrees: Vec<i64> = xs.iter().map(|x| x.degree).collect();
        if parity(self.epsilon(&degrees)) < 0 {
            negate(&mut out);
        }
        Ok(out)
    }
}

fn negate(x: &mut CyclicClass) {
    for q in x.coordinates.iter_mut() {
        *q = -q.clone();
    }
    for (_, e) in x.components.iter_mut() {
        *e = e.scale(&rational::int(-1));
    }
}

fn place(out: &mut RationalMatrix, block: &RationalMatrix, row: usize, col: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            let v = block.get(i, j);
            if !v.is_zero() {
                out.set(row + i, col + j, v.clone());
            }
        }
    }
}

/// Running signed sum of cyclic classes at one address.
#[derive(Debug, Clone)]
struct Sum {
    key: Option<(i64, i64)>,
    coordinates: Vec<Rational>,
}

impl Sum {
    fn new() -> Self {
        Sum {
            key: None,
            coordinates: Vec::new(),
        }
    }

    fn add(&mut self, sign: i64, x: &CyclicClass) {
        let key = (x.degree, x.weight);
        match self.key {
            None => {
                self.key = Some(key);
                self.coordinates = x.coordinates.iter().map(|q| rational::int(sign) * q).collect();
            }
            Some(k) => {
                assert_eq!(k, key, "classes at different addresses");
                for (acc, q) in self.coordinates.iter_mut().zip(&x.coordinates) {
                    *acc += rational::int(sign) * q;
                }
            }
        }
    }

    fn minus(&self, other: &Sum) -> bool {
        // true when self == other as classes
        match (self.key, other.key) {
            (Some(a), Some(b)) if a == b => self.coordinates == other.coordinates,
            (None, None) => true,
            (Some(_), None) => self.coordinates.iter().all(Zero::is_zero),
            (None, Some(_)) => other.coordinates.iter().all(Zero::is_zero),
            _ => false,
        }
    }
}

/// `eps_ij` of the generalized Jacobi relation, with 1-based `i < j`.
pub fn epsilon_ij(degrees: &[i64], i: usize, j: usize) -> i64 {
    let prefix = |k: usize| -> i64 { degrees[..k - 1].iter().sum::<i64>() + k as i64 - 1 };
    let (di, dj) = (degrees[i - 1] + 1, degrees[j - 1] + 1);
    di * prefix(i) + dj * prefix(j) - di * dj
}

/// Nondecreasing index tuples of length `k` over `0..len`.
fn multisets(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i, len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, k, &mut Vec::new(), &mut out);
    out
}

impl NegativeCyclic {
    /// `{x1, x2} = -(-1)^{(|x1|+1)(|x2|+1)} {x2, x1}` on all ordered basis pairs.
    pub fn check_skew_symmetry(&self, basis: &[CyclicClass]) -> Result<Check, GravityError> {
        let mut check = Check::new("gravity bracket skew-symmetry");
        for a in basis {
            for b in basis {
                let (ab, ba) = match (self.bracket(&[a, b]), self.bracket(&[b, a])) {
                    (Ok(x), Ok(y)) => (x, y),
                    (Err(GravityError::WindowExceeded(_)), _) | (_, Err(GravityError::WindowExceeded(_))) => {
                        check.skip();
                        continue;
                    }
                    (Err(GravityError::BetaNotCycle(w)), _) | (_, Err(GravityError::BetaNotCycle(w))) => {
                        check.fail(format!("connecting map leaves the cycles at {w}"));
                        continue;
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(e),
                };
                let sign = -parity((a.degree + 1) * (b.degree + 1));
                let mut lhs = Sum::new();
                lhs.add(1, &ab);
                let mut rhs = Sum::new();
                rhs.add(sign, &ba);
                check.record(lhs.minus(&rhs), || format!("x1 = {}, x2 = {}", a.render(), b.render()));
            }
        }
        Ok(check)
    }

    /// Nonzero binary brackets among ordered basis pairs, as `(i, j, {x_i, x_j})`.
    pub fn binary_brackets(&self, basis: &[CyclicClass]) -> Result<Vec<(usize, usize, CyclicClass)>, GravityError> {
        let mut out = Vec::new();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                match self.bracket(&[a, b]) {
                    Ok(x) if !x.is_zero() => out.push((i, j, x)),
                    Ok(_) | Err(GravityError::WindowExceeded(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(out)
    }

    /// Left minus right side of the relation for `xs` and `ys`.
    fn relation(&self, xs: &[&CyclicClass], ys: &[&CyclicClass]) -> Result<bool, GravityError> {
        let n = xs.len();
        let degrees: Vec<i64> = xs.iter().map(|x| x.degree).collect();
        let mut lhs = Sum::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let inner = self.bracket(&[xs[i - 1], xs[j - 1]])?;
                let mut args: Vec<&CyclicClass> = vec![&inner];
                args.extend(xs.iter().enumerate().filter(|(k, _)| *k + 1 != i && *k + 1 != j).map(|(_, x)| *x));
                args.extend(ys.iter().copied());
                let mut sign = epsilon_ij(&degrees, i, j);
                if self.jacobi == JacobiSigns::Permuted {
                    sign += (i + j) as i64 - 3 + n as i64 - 2;
                }
                lhs.add(parity(sign), &self.bracket(&args)?);
            }
        }
        let mut rhs = Sum::new();
        if !ys.is_empty() {
            let inner = self.bracket(xs)?;
            let mut args: Vec<&CyclicClass> = vec![&inner];
            args.extend(ys.iter().copied());
            rhs.add(1, &self.bracket(&args)?);
        }
        Ok(lhs.minus(&rhs))
    }

    /// Generalized Jacobi relations for all `(n, m)` with `n + m <= max_arity`.
    ///
    /// Brackets are skew-symmetric, so the `x` and `y` tuples run over
    /// nondecreasing index sequences of the basis.
    pub fn check_relations(&self, basis: &[CyclicClass], max_arity: usize) -> Result<Vec<Check>, GravityError> {
        let mut checks = Vec::new();
        for total in 3..=max_arity {
            for n in 2..=total {
                let m = total - n;
                if n == 2 && m == 0 {
                    continue;
                }
                let mut check = Check::new(format!("gravity relation n={n}, m={m}"));
                for xi in multisets(basis.len(), n) {
                    let xs: Vec<&CyclicClass> = xi.iter().map(|&k| &basis[k]).collect();
                    for yi in multisets(basis.len(), m) {
                        let ys: Vec<&CyclicClass> = yi.iter().map(|&k| &basis[k]).collect();
                        match self.relation(&xs, &ys) {
                            Ok(ok) => check.record(ok, || {
                                let show = |v: &[&CyclicClass]| v.iter().map(|c| c.render()).collect::<Vec<_>>().join(", ");
                                format!("x = [{}], y = [{}]", show(&xs), show(&ys))
                            }),
                            Err(GravityError::WindowExceeded(_)) => check.skip(),
                            Err(GravityError::BetaNotCycle(w)) => {
                                check.fail(format!("connecting map leaves the cycles at {w}"))
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                checks.push(check);
            }
        }
        Ok(checks)
    }

    /// `D^2 = 0` on the total complex.
    pub fn check_total_square(&self, degrees: std::ops::RangeInclusive<i64>) -> Result<Check, EngineError> {
        let mut check = Check::new("total differential squares to zero");
        let s = self.shift();
        for m in degrees {
            for w in self.weights() {
                let dd = self.total_matrix(m - 1, w + s)?.mul(&self.total_matrix(m, w)?);
                let witness = (0..dd.cols()).find(|&j| (0..dd.rows()).any(|i| !dd.get(i, j).is_zero()));
                check.record(witness.is_none(), || {
                    let v: Vec<Rational> = (0..dd.cols()).map(|k| rational::int((Some(k) == witness) as i64)).collect();
                    let parts: Vec<String> = self
                        .split(m, w, &v)
                        .map(|p| p.iter().filter(|(_, e)| !e.is_zero()).map(|(i, e)| format!("({e})u^{i}")).collect())
                        .unwrap_or_default();
                    format!("D^2 of {} at m={m}, w={w} is nonzero", parts.join(" + "))
                });
            }
        }
        Ok(check)
    }

    /// Chain-level exactness of `0 -> u CC^-_{m+2} -> CC^-_m -> C_m -> 0` and
    /// compatibility of both maps with the differentials.
    pub fn check_short_exact(&self, degrees: std::ops::RangeInclusive<i64>) -> Result<Check, EngineError> {
        let mut check = Check::new("short exact sequence");
        let s = self.shift();
        for m in degrees {
            for w in self.weights() {
                let whole = self.layout(m, w)?;
                let shifted = self.layout(m + 2, w - s)?;
                let base = self.mixed.chain().basis(&self.mixed.address(m, w))?;
                let head = whole.part(0).map_or(0, |p| p.basis.len());
                check.record(head == base.len() && whole.len == shifted.len + head, || {
                    format!("dimensions at m={m}, w={w}")
                });
                // projection commutes with the differentials
                let d = self.total_matrix(m, w)?;
                let lower = self.layout(m - 1, w + s)?;
                let head_rows = lower.part(0).map_or(0, |p| p.basis.len());
                let b = self.mixed.b_matrix(m, w)?;
                let ok = (0..head_rows).all(|i| {
                    (0..whole.len).all(|j| {
                        let expected = if j < head { b.get(i, j).clone() } else { Rational::zero() };
                        *d.get(i, j) == expected
                    })
                });
                check.record(ok, || format!("projection is not a chain map at m={m}, w={w}"));
            }
        }
        Ok(check)
    }

    fn matrix_of(&self, f: impl Fn(&[Rational]) -> Result<Vec<Rational>, GravityError>, dim: usize) -> Result<RationalMatrix, GravityError> {
        let mut columns = Vec::new();
        let mut rows = 0;
        for k in 0..dim {
            let mut e = vec![Rational::zero(); dim];
            e[k] = Rational::from_integer(1.into());
            let col = f(&e)?;
            rows = col.len();
            columns.push(col);
        }
        if dim == 0 {
            return Ok(RationalMatrix::zeros(0, 0));
        }
        Ok(RationalMatrix::from_columns(rows, &columns))
    }

    /// Exactness of the long exact sequence `.. -> HC_{m+2} -> HC_m -> HH_m -> HC_{m+1} -> HC_{m-1} -> ..`
    /// by rank bookkeeping at every node.
    pub fn check_long_exact(&self, degrees: std::ops::RangeInclusive<i64>) -> Result<Check, GravityError> {
        let mut check = Check::new("long exact sequence");
        let s = self.shift();
        let chain = self.mixed.chain();
        for m in degrees {
            for w in self.weights() {
                let hc = |m: i64, w: i64| self.homology(m, w);
                let hh = |m: i64, w: i64| chain.homology(&self.mixed.address(m, w));
                // u: HC_{m+2}(w-s) -> HC_m(w)
                let u_map = |m: i64, w: i64| -> Result<RationalMatrix, GravityError> {
                    let src = hc(m + 2, w - s)?;
                    let dim_out = hc(m, w)?.dim();
                    let mat = self.matrix_of(
                        |e| {
                            let v = src.combination(e);
                            let parts = self.split(m + 2, w - s, &v)?;
                            let x = CyclicClass {
                                degree: m + 2,
                                weight: w - s,
                                components: parts,
                                coordinates: e.to_vec(),
                            };
                            Ok(self.u_shift(&x)?.coordinates)
                        },
                        src.dim(),
                    )?;
                    Ok(if src.dim() == 0 { RationalMatrix::zeros(dim_out, 0) } else { mat })
                };
                let pi_map = |m: i64, w: i64| -> Result<RationalMatrix, GravityError> {
                    let dim_out = hh(m, w)?.dim();
                    let classes = self.basis_classes(m, w)?;
                    if classes.is_empty() {
                        return Ok(RationalMatrix::zeros(dim_out, 0));
                    }
                    let cols: Result<Vec<Vec<Rational>>, GravityError> =
                        classes.iter().map(|x| Ok(self.pi_star(x)?.coordinates)).collect();
                    Ok(RationalMatrix::from_columns(dim_out, &cols?))
                };
                let beta_map = |m: i64, w: i64| -> Result<RationalMatrix, GravityError> {
                    let dim_out = hc(m + 1, w)?.dim();
                    let classes = chain.basis_classes(&self.mixed.address(m, w))?;
                    if classes.is_empty() {
                        return Ok(RationalMatrix::zeros(dim_out, 0));
                    }
                    let cols: Result<Vec<Vec<Rational>>, GravityError> =
                        classes.iter().map(|x| Ok(self.beta(x)?.coordinates)).collect();
                    Ok(RationalMatrix::from_columns(dim_out, &cols?))
                };
                // node HC_m(w): in = u from HC_{m+2}(w-s), out = pi_*
                let nodes = [
                    ("HC", hc(m, w)?.dim(), u_map(m, w)?, pi_map(m, w)?),
                    ("HH", hh(m, w)?.dim(), pi_map(m, w)?, beta_map(m, w)?),
                    ("HC", hc(m + 1, w)?.dim(), beta_map(m, w)?, u_map(m - 1, w + s)?),
                ];
                for (name, dim, incoming, outgoing) in nodes {
                    let composite_zero = incoming.cols() == 0 || outgoing.rows() == 0 || outgoing.mul(&incoming).is_zero();
                    let exact = incoming.rank() + outgoing.rank() == dim;
                    check.record(composite_zero && exact, || format!("{name} node at m={m}, w={w}"));
                }
            }
        }
        Ok(check)
    }
}
