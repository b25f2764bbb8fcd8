//! Differential polynomials in jet variables.
//!
//! A jet variable `u_{j,α}` stands for the raw derivative `∂^α f_j` of the `j`-th germ
//! at the base point (no factorial normalisation). A [`DiffPoly`] is a polynomial in the
//! jet variables of a [`JetSpace`], which fixes the germ dimension `p`, the jet order `k`
//! and the number of functions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::det::{det_bareiss, det_cofactor, ExactDiv, Ring};
use crate::error::{Error, Result};
use crate::polyring::{owned_ops, Polynomial};
use crate::rational::{fmt_rat, Rat};
use crate::wordcomb::{words_of_length, Word};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct JetVar {
    pub j: usize,
    pub alpha: Vec<u32>,
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.alpha.iter().map(|x| x.to_string()).collect();
        write!(f, "u{}_({})", self.j, a.join(","))
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct JetSpace {
    p: usize,
    k: u32,
    count: usize,
    /// multi-indices with `|α| ≤ k`: zero first, then words in canonical order
    alphas: Vec<Vec<u32>>,
    position: HashMap<Vec<u32>, usize>,
}

impl JetSpace {
    pub fn new(p: usize, k: u32, count: usize) -> Arc<Self> {
        let mut alphas = vec![vec![0; p]];
        for len in 1..=k {
            alphas.extend(words_of_length(p, len).into_iter().map(|w| w.alpha().to_vec()));
        }
        let position = alphas.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Arc::new(JetSpace { p, k, count, alphas, position })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn nvars(&self) -> usize {
        self.count * self.alphas.len()
    }

    pub fn index(&self, var: &JetVar) -> Option<usize> {
        if var.j >= self.count {
            return None;
        }
        self.position.get(&var.alpha).map(|pos| var.j * self.alphas.len() + pos)
    }

    pub fn var_at(&self, idx: usize) -> JetVar {
        let n = self.alphas.len();
        JetVar { j: idx / n, alpha: self.alphas[idx % n].clone() }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.nvars()).map(|i| self.var_at(i).to_string()).collect()
    }
}

/// Element of the differential polynomial ring over a [`JetSpace`].
#[derive(Clone, Debug)]
pub struct DiffPoly {
    space: Arc<JetSpace>,
    poly: Polynomial,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.poly == other.poly
    }
}

/// Torus weight of a differential polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Multidegree {
    Pure(Vec<u64>),
    Mixed,
}

impl DiffPoly {
    pub fn zero(space: &Arc<JetSpace>) -> Self {
        DiffPoly { space: space.clone(), poly: Polynomial::zero(space.nvars()) }
    }

    pub fn constant(space: &Arc<JetSpace>, c: Rat) -> Self {
        DiffPoly { space: space.clone(), poly: Polynomial::constant(space.nvars(), c) }
    }

    pub fn var(space: &Arc<JetSpace>, var: &JetVar) -> Result<Self> {
        let idx = space.index(var).ok_or_else(|| {
            let order: u32 = var.alpha.iter().sum();
            if var.j < space.count() && var.alpha.len() == space.p() {
                Error::JetOrderOverflow { order, max: space.order() }
            } else {
                Error::Invalid(format!("jet variable {var} outside the jet space"))
            }
        })?;
        Ok(DiffPoly { space: space.clone(), poly: Polynomial::var(space.nvars(), idx) })
    }

    pub fn from_poly(space: &Arc<JetSpace>, poly: Polynomial) -> Self {
        assert_eq!(poly.nvars(), space.nvars());
        DiffPoly { space: space.clone(), poly }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.poly.num_terms()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        DiffPoly { space: self.space.clone(), poly: self.poly.scale(c) }
    }

    pub fn pow(&self, k: u32) -> Self {
        DiffPoly { space: self.space.clone(), poly: self.poly.pow(k) }
    }

    /// Monomials as lists of `(jet variable, power)` with their coefficients.
    pub fn monomials(&self) -> impl Iterator<Item = (Vec<(JetVar, u32)>, &Rat)> + '_ {
        self.poly.terms().map(move |(e, c)| {
            let factors = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (self.space.var_at(i), k))
                .collect();
            (factors, c)
        })
    }

    /// Total derivation `D_i`: `u_{j,α} ↦ u_{j,α+e_i}`, extended by the product rule.
    /// `i` is a 1-based letter.
    pub fn formal_derivative(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.space.p() {
            return Err(Error::Invalid(format!("letter {i} outside alphabet 1..{}", self.space.p())));
        }
        let mut acc = Polynomial::zero(self.space.nvars());
        let mut used = vec![false; self.space.nvars()];
        for (e, _) in self.poly.terms() {
            for (v, &k) in e.iter().enumerate() {
                used[v] |= k > 0;
            }
        }
        for (v, _) in used.iter().enumerate().filter(|(_, &u)| u) {
            let mut next = self.space.var_at(v);
            next.alpha[i - 1] += 1;
            let target = DiffPoly::var(&self.space, &next)?;
            acc = &acc + &(&self.poly.derivative_var(v) * &target.poly);
        }
        Ok(DiffPoly { space: self.space.clone(), poly: acc })
    }

    /// `∂_u` applied letter by letter.
    pub fn formal_derivative_word(&self, u: &Word) -> Result<Self> {
        let mut out = self.clone();
        for letter in u.letters() {
            out = out.formal_derivative(letter)?;
        }
        Ok(out)
    }

    /// Torus weight: each `u_{j,α}` has weight `α`.
    pub fn torus_multidegree(&self) -> Result<Multidegree> {
        let mut common: Option<Vec<u64>> = None;
        for (e, _) in self.poly.terms() {
            let mut beta = vec![0u64; self.space.p()];
            for (v, &k) in e.iter().enumerate().filter(|(_, &k)| k > 0) {
                let var = self.space.var_at(v);
                for (b, &a) in beta.iter_mut().zip(&var.alpha) {
                    *b += a as u64 * k as u64;
                }
            }
            match &common {
                None => common = Some(beta),
                Some(c) if *c != beta => return Ok(Multidegree::Mixed),
                Some(_) => {}
            }
        }
        common.map(Multidegree::Pure).ok_or(Error::ZeroInput)
    }

    /// Largest total power of the jet variables `u_{j,α(u)}` over all monomials.
    pub fn deg_u(&self, u: &Word) -> Result<u32> {
        if u.len() != self.space.order() {
            return Err(Error::Invalid(format!(
                "word of length {} for jet order {}",
                u.len(),
                self.space.order()
            )));
        }
        let targets: Vec<usize> = (0..self.space.count())
            .filter_map(|j| self.space.index(&JetVar { j, alpha: u.alpha().to_vec() }))
            .collect();
        Ok(self
            .poly
            .terms()
            .map(|(e, _)| targets.iter().map(|&t| e[t]).sum::<u32>())
            .max()
            .unwrap_or(0))
    }

    /// Divides by `Π_j u_{j,0}^{exponents[j]}`, if exact.
    pub fn divide_by_base_powers(&self, exponents: &[u32]) -> Option<Self> {
        let mut e = vec![0u32; self.space.nvars()];
        for (j, &x) in exponents.iter().enumerate() {
            e[self.space.index(&JetVar { j, alpha: vec![0; self.space.p()] })?] = x;
        }
        let divisor = Polynomial::monomial(e, Rat::from_integer(1.into()));
        self.poly.div_exact(&divisor).map(|poly| DiffPoly { space: self.space.clone(), poly })
    }

    pub fn base_power_product(space: &Arc<JetSpace>, exponents: &[u32]) -> Self {
        let mut acc = DiffPoly::constant(space, Rat::from_integer(1.into()));
        for (j, &x) in exponents.iter().enumerate() {
            let v = DiffPoly::var(space, &JetVar { j, alpha: vec![0; space.p()] }).expect("base variable");
            acc = &acc * &v.pow(x);
        }
        acc
    }
}

fn same_space(a: &DiffPoly, b: &DiffPoly) {
    assert!(Arc::ptr_eq(&a.space, &b.space) || a.space == b.space, "jet space mismatch");
}

impl std::ops::Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        same_space(self, rhs);
        DiffPoly { space: self.space.clone(), poly: &self.poly + &rhs.poly }
    }
}

impl std::ops::Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        same_space(self, rhs);
        DiffPoly { space: self.space.clone(), poly: &self.poly - &rhs.poly }
    }
}

impl std::ops::Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        same_space(self, rhs);
        DiffPoly { space: self.space.clone(), poly: &self.poly * &rhs.poly }
    }
}

impl std::ops::Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { space: self.space.clone(), poly: -&self.poly }
    }
}

owned_ops!(DiffPoly);

impl Ring for DiffPoly {
    fn zero_like(&self) -> Self {
        DiffPoly::zero(&self.space)
    }
    fn one_like(&self) -> Self {
        DiffPoly::constant(&self.space, Rat::from_integer(1.into()))
    }
    fn is_zero_elem(&self) -> bool {
        self.poly.is_zero()
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

impl ExactDiv for DiffPoly {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        same_space(self, divisor);
        self.poly
            .div_exact(&divisor.poly)
            .map(|poly| DiffPoly { space: self.space.clone(), poly })
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.to_string_with(&self.space.names()))
    }
}

#[derive(Serialize)]
struct FactorRepr {
    j: usize,
    alpha: Vec<u32>,
    power: u32,
}

#[derive(Serialize)]
struct TermRepr {
    coeff: String,
    factors: Vec<FactorRepr>,
}

impl Serialize for DiffPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .monomials()
            .map(|(factors, c)| TermRepr {
                coeff: fmt_rat(c),
                factors: factors
                    .into_iter()
                    .map(|(v, power)| FactorRepr { j: v.j, alpha: v.alpha, power })
                    .collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

/// Generic germs `f_0, ..., f_{count-1}`: `∂_u f_j` evaluates to `u_{j,α(u)}`.
pub fn make_generic_jet(p: usize, k: u32, count: usize) -> (Arc<JetSpace>, Vec<DiffPoly>) {
    let space = JetSpace::new(p, k, count);
    let fs = (0..count)
        .map(|j| DiffPoly::var(&space, &JetVar { j, alpha: vec![0; p] }).expect("base variable"))
        .collect();
    (space, fs)
}
