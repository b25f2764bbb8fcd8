//! Sparse multivariate polynomials and truncated power series over ℚ.
//!
//! A [`Polynomial`] has a fixed number of variables. The first `p` of them are the germ
//! variables `z_1, ..., z_p` that words differentiate; any further variables are
//! parameters (symbolic coefficients, Vandermonde columns, ...).

mod calculus;
mod parse;
mod series;

pub use calculus::{
    compose_series, derivative_of_composition, infer_composition_constants, leibniz_constant,
    leibniz_expand, multiset_partitions, CompositionConstants, CompositionTerm,
    MAX_COMPOSITION_WORD_LEN,
};
pub use parse::parse_poly;
pub(crate) use calculus::sub_exponents;
pub use series::TruncatedSeries;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::det::{det_bareiss, det_cofactor, ExactDiv, Ring};
use crate::rational::{fmt_rat, Rat};
use crate::wordcomb::Word;

/// Monomial order used for series orders: lexicographic on exponent vectors, with the
/// first coordinate most significant. `z_2 < z_1^2` because `(0,1) < (2,0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExponentOrder {
    #[default]
    LexFirstMostSignificant,
}

impl ExponentOrder {
    pub fn compare(&self, a: &[u32], b: &[u32]) -> std::cmp::Ordering {
        match self {
            ExponentOrder::LexFirstMostSignificant => a.cmp(b),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

/// `a (a-1) ... (a-k+1)`, zero when `k > a`.
pub(crate) fn falling_factorial(a: u32, k: u32) -> BigInt {
    if k > a {
        return BigInt::zero();
    }
    (a - k + 1..=a).map(BigInt::from).product()
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The variable with 0-based index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exponent: Vec<u32>, coeff: Rat) -> Self {
        let nvars = exponent.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut out = Polynomial::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length does not match variable count");
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: &[u32]) -> Rat {
        self.terms.get(exponent).cloned().unwrap_or_else(Rat::zero)
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `(exponent, coefficient)` if the polynomial is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(&Vec<u32>, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Total degree in the first `p` variables.
    pub fn germ_degree(&self, p: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[..p].iter().sum()).max()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Same polynomial seen in a ring with `nvars ≥ self.nvars()` variables; the new
    /// variables are appended after the existing ones.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(nvars, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to the variable with 0-based index `i`.
    pub fn derivative_var(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.terms.insert(e2, c * Rat::from_integer(e[i].into()));
            }
        }
        out
    }

    /// `∂_u = ∂^{|α|} / ∂z_1^{α_1} ... ∂z_p^{α_p}` acting on the first `p = u.p()` variables.
    pub fn partial_derivative(&self, u: &Word) -> Self {
        self.partial_derivative_exp(u.alpha())
    }

    /// As [`Polynomial::partial_derivative`], allowing the zero exponent (identity).
    pub fn partial_derivative_exp(&self, alpha: &[u32]) -> Self {
        assert!(alpha.len() <= self.nvars, "word alphabet exceeds the variable count");
        let mut out = Polynomial::zero(self.nvars);
        'terms: for (e, c) in &self.terms {
            let mut factor = BigInt::one();
            let mut e2 = e.clone();
            for (i, &a) in alpha.iter().enumerate() {
                if e[i] < a {
                    continue 'terms;
                }
                factor *= falling_factorial(e[i], a);
                e2[i] -= a;
            }
            out.terms.insert(e2, c * Rat::from_integer(factor));
        }
        out
    }

    /// Evaluates at a point with one rational per variable.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= crate::rational::pow(x, k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes rationals for the first `values.len()` variables, keeping the
    /// variable count.
    pub fn eval_leading(&self, values: &[Rat]) -> Self {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in values.iter().zip(e) {
                if k > 0 {
                    t *= crate::rational::pow(x, k);
                }
            }
            let mut e2 = e.clone();
            e2[..values.len()].iter_mut().for_each(|x| *x = 0);
            out.add_term(e2, t);
        }
        out
    }

    /// `f(φ_1, ..., φ_n)` for `f` in `n` variables; the result lives in the ring of the `φ`.
    pub fn compose(&self, phi: &[Polynomial]) -> Polynomial {
        assert_eq!(phi.len(), self.nvars, "composition arity mismatch");
        let target = phi.first().map_or(0, |f| f.nvars);
        let mut powers: Vec<Vec<Polynomial>> = phi.iter().map(|f| vec![Polynomial::one(f.nvars)]).collect();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (j, &k) in e.iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().expect("nonempty") * &phi[j];
                    powers[j].push(next);
                }
                if k > 0 {
                    t = &t * &powers[j][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Least exponent of the germ variables (first `p`) in the declared order, `None` for 0.
    pub fn series_order(&self, p: usize, order: ExponentOrder) -> Option<Vec<u32>> {
        self.terms
            .keys()
            .map(|e| e[..p].to_vec())
            .min_by(|a, b| order.compare(a, b))
    }

    /// Coefficient (a polynomial in the parameters) of a germ monomial `z^γ`.
    pub fn germ_coefficient(&self, gamma: &[u32]) -> Polynomial {
        let p = gamma.len();
        self.filter_terms(|e| e[..p] == *gamma)
    }

    /// Leading term in lexicographic order (largest exponent).
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Renders with the given variable names; terms in decreasing lexicographic order.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert!(names.len() >= self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            if factors.is_empty() {
                out.push_str(&fmt_rat(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&fmt_rat(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("z{i}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&Polynomial::default_names(self.nvars)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: HashMap<Vec<u32>, Rat> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(Polynomial);

impl Ring for Polynomial {
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        Polynomial::one(self.nvars)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn determinant(rows: &[Vec<Self>]) -> Self {
        if rows.len() <= 6 {
            det_cofactor(rows)
        } else {
            det_bareiss(rows)
        }
    }
}

impl ExactDiv for Polynomial {
    /// Multivariate long division by leading terms.
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (de, dc) = divisor.leading_term()?;
        let (de, dc) = (de.clone(), dc.clone());
        if let Some((e, c)) = divisor.as_monomial() {
            // fast path: monomial divisor
            let mut out = Polynomial::zero(self.nvars);
            for (te, tc) in &self.terms {
                if te.iter().zip(e).any(|(a, b)| a < b) {
                    return None;
                }
                let q: Vec<u32> = te.iter().zip(e).map(|(a, b)| a - b).collect();
                out.terms.insert(q, tc / c);
            }
            return Some(out);
        }
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            let t = Polynomial::monomial(qe, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }
}
