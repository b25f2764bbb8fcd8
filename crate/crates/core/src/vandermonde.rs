//! Geometric Vandermonde determinants.
//!
//! For a set `U = {u_1, ..., u_m}` and columns `C_0, ..., C_m ∈ ℚ^p`, the row `X_u` has
//! entry `Π_k x_{k,ℓ}^{α_k(u)}` in column `ℓ`. `V_U` stacks `X_∅ = (1, ..., 1)` on top of
//! the rows `X_{u_i}`; `Ṽ_U` drops it and takes `m` columns.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::det::{det_cofactor, Ring};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::polyring::Polynomial;
use crate::rational::{fmt_rat, Rat};
use crate::wordcomb::{enumerate_full_sets_capped, Word, WordSet, DEFAULT_ENUMERATION_CAP};
use crate::wronskian::eval_wronskian_expanded;

/// Columns with entries in a polynomial ring of parameters; rational columns are the
/// constant case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnTuple {
    p: usize,
    nvars: usize,
    cols: Vec<Vec<Polynomial>>,
}

impl ColumnTuple {
    pub fn new(p: usize, nvars: usize, cols: Vec<Vec<Polynomial>>) -> Result<Self> {
        for c in &cols {
            if c.len() != p {
                return Err(Error::DimensionMismatch { expected: p, found: c.len() });
            }
            if let Some(x) = c.iter().find(|x| x.nvars() != nvars) {
                return Err(Error::DimensionMismatch { expected: nvars, found: x.nvars() });
            }
        }
        Ok(ColumnTuple { p, nvars, cols })
    }

    pub fn from_rationals(p: usize, cols: &[Vec<Rat>]) -> Result<Self> {
        let cols = cols
            .iter()
            .map(|c| c.iter().map(|x| Polynomial::constant(0, x.clone())).collect())
            .collect();
        ColumnTuple::new(p, 0, cols)
    }

    /// `count` columns of fresh parameters: `x_{k,ℓ}` is variable `ℓ·p + k`.
    pub fn symbolic(p: usize, count: usize) -> Self {
        let nvars = p * count;
        let cols = (0..count)
            .map(|l| (0..p).map(|k| Polynomial::var(nvars, l * p + k)).collect())
            .collect();
        ColumnTuple { p, nvars, cols }
    }

    /// Names `x{k}_{ℓ}` (1-based `k`) of the parameters of [`ColumnTuple::symbolic`].
    pub fn symbolic_names(p: usize, count: usize) -> Vec<String> {
        (0..count).flat_map(|l| (1..=p).map(move |k| format!("x{k}_{l}"))).collect()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn columns(&self) -> &[Vec<Polynomial>] {
        &self.cols
    }

    pub fn zero_column(&self) -> Vec<Polynomial> {
        vec![Polynomial::zero(self.nvars); self.p]
    }

    pub fn with_column(&self, i: usize, col: Vec<Polynomial>) -> Self {
        let mut out = self.clone();
        out.cols[i] = col;
        out
    }

    pub fn push(&mut self, col: Vec<Polynomial>) {
        assert_eq!(col.len(), self.p);
        self.cols.push(col);
    }

    /// Drops the trailing columns, keeping the first `n`.
    pub fn prefix(&self, n: usize) -> Self {
        ColumnTuple { p: self.p, nvars: self.nvars, cols: self.cols[..n].to_vec() }
    }
}

/// `X_u` over the columns; `alpha = 0` is the empty word.
pub fn row_x(alpha: &[u32], cols: &ColumnTuple) -> Result<Vec<Polynomial>> {
    if alpha.len() != cols.p {
        return Err(Error::DimensionMismatch { expected: cols.p, found: alpha.len() });
    }
    Ok(cols
        .cols
        .iter()
        .map(|c| {
            let mut acc = Polynomial::one(cols.nvars);
            for (x, &a) in c.iter().zip(alpha) {
                if a > 0 {
                    acc = &acc * &x.pow(a);
                }
            }
            acc
        })
        .collect())
}

fn check(set: &WordSet, cols: &ColumnTuple, expected: usize) -> Result<()> {
    if cols.len() != expected {
        return Err(Error::Arity { expected, found: cols.len() });
    }
    if set.p() != cols.p {
        return Err(Error::DimensionMismatch { expected: cols.p, found: set.p() });
    }
    Ok(())
}

fn rows_of(set: &WordSet, cols: &ColumnTuple, ones_row: bool) -> Result<Vec<Vec<Polynomial>>> {
    let mut rows = Vec::with_capacity(set.len() + 1);
    if ones_row {
        rows.push(row_x(&vec![0; cols.p], cols)?);
    }
    for u in set.words() {
        rows.push(row_x(u.alpha(), cols)?);
    }
    Ok(rows)
}

fn det_rows(rows: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    if rows.is_empty() {
        return Polynomial::one(nvars);
    }
    if let Some(values) = rows
        .iter()
        .map(|r| r.iter().map(Polynomial::as_constant).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
    {
        return Polynomial::constant(nvars, determinant(&values));
    }
    Polynomial::determinant(rows)
}

/// `V_U(C_0, ..., C_m)`.
pub fn eval_v(set: &WordSet, cols: &ColumnTuple) -> Result<Polynomial> {
    check(set, cols, set.len() + 1)?;
    Ok(det_rows(&rows_of(set, cols, true)?, cols.nvars))
}

/// `Ṽ_U(C_0, ..., C_{m-1})`.
pub fn eval_v_tilde(set: &WordSet, cols: &ColumnTuple) -> Result<Polynomial> {
    check(set, cols, set.len())?;
    Ok(det_rows(&rows_of(set, cols, false)?, cols.nvars))
}

/// `V_U` on rational columns.
pub fn eval_v_rational(set: &WordSet, cols: &[Vec<Rat>]) -> Result<Rat> {
    let v = eval_v(set, &ColumnTuple::from_rationals(set.p(), cols)?)?;
    Ok(v.as_constant().expect("rational columns"))
}

/// `V_U(C_0 + C, ..., C_m + C) = V_U(C_0, ..., C_m)` for symbolic columns and a symbolic
/// shift `C`.
pub fn translation_invariance_check(set: &WordSet) -> Result<bool> {
    let (p, m) = (set.p(), set.len());
    let all = ColumnTuple::symbolic(p, m + 2);
    let shift = all.cols[m + 1].clone();
    let plain = all.prefix(m + 1);
    let moved = ColumnTuple {
        p,
        nvars: all.nvars,
        cols: plain.cols.iter().map(|c| c.iter().zip(&shift).map(|(x, s)| x + s).collect()).collect(),
    };
    Ok(eval_v(set, &plain)? == eval_v(set, &moved)?)
}

/// `V_U(C_0, ..., C_{m-1}, 0) = (-1)^m Ṽ_U(C_0, ..., C_{m-1})`, the sign being read off an
/// explicit expansion along the zero column.
pub fn rec_sign_check(set: &WordSet) -> Result<bool> {
    let (p, m) = (set.p(), set.len());
    let base = ColumnTuple::symbolic(p, m);
    let mut with_zero = base.clone();
    with_zero.push(base.zero_column());
    let rows = rows_of(set, &with_zero, true)?;
    // only row 0 has a nonzero entry in the last column
    let mut oracle = Polynomial::zero(base.nvars);
    for (i, row) in rows.iter().enumerate() {
        if row[m].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = rows
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != i)
            .map(|(_, r)| r[..m].to_vec())
            .collect();
        let d = if minor.is_empty() { Polynomial::one(base.nvars) } else { det_cofactor(&minor) };
        let term = &row[m] * &d;
        oracle = if (i + m) % 2 == 0 { &oracle + &term } else { &oracle - &term };
    }
    let v = eval_v(set, &with_zero)?;
    let tilde = eval_v_tilde(set, &base)?;
    let signed = if m % 2 == 0 { tilde } else { -&tilde };
    Ok(v == oracle && v == signed)
}

/// `W_U(z^{α_0}, ..., z^{α_m})(1, ..., 1) = V_U(α_0, ..., α_m)`.
///
/// For a full set no shift of the exponents is needed: `∂_u z^a = (a)_u z^{a-u}` with
/// `(a)_u = Π_k a_k(a_k-1)⋯(a_k-u_k+1)`, and `(a)_u - a^u` is a combination of the
/// `a^v` with `v < u`, all of which index earlier rows. The left side is computed by
/// differentiating and expanding, independently of the monomial shortcut.
pub fn key_identity_check(set: &WordSet, alphas: &[Vec<u32>]) -> Result<bool> {
    let (lhs, rhs) = key_identity_sides(set, alphas)?;
    Ok(lhs == rhs)
}

/// Both sides of [`key_identity_check`].
pub fn key_identity_sides(set: &WordSet, alphas: &[Vec<u32>]) -> Result<(Rat, Rat)> {
    if !set.is_full() {
        return Err(Error::Invalid(format!("{set} is not a full set")));
    }
    let p = set.p();
    if alphas.len() != set.len() + 1 {
        return Err(Error::Arity { expected: set.len() + 1, found: alphas.len() });
    }
    if let Some(a) = alphas.iter().find(|a| a.len() != p) {
        return Err(Error::DimensionMismatch { expected: p, found: a.len() });
    }
    let fs: Vec<Polynomial> = alphas.iter().map(|a| Polynomial::monomial(a.clone(), Rat::one())).collect();
    let lhs = eval_wronskian_expanded(set, &fs)?.eval(&vec![Rat::one(); p]);
    let cols: Vec<Vec<Rat>> = alphas.iter().map(|a| a.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
    Ok((lhs, eval_v_rational(set, &cols)?))
}

/// Which zero-set description is certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// `V_U`, `m + 1` columns: common zeros are the tuples with two equal columns.
    A,
    /// `Ṽ_U`, `m` columns: common zeros are the tuples with a zero or two equal columns.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Converse,
    Both,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Entries are drawn from `0..grid`; raised to at least `2(m+1)`.
    pub grid: u32,
    pub cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { samples: 100, seed: 0, grid: 0, cap: DEFAULT_ENUMERATION_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternResult {
    pub pattern: String,
    pub sets_checked: usize,
    pub all_vanish: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    pub columns: Vec<Vec<String>>,
    pub witness: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyTotals {
    pub full_sets: usize,
    pub patterns: usize,
    pub patterns_vanishing: usize,
    pub samples: usize,
    pub witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub p: usize,
    pub m: usize,
    pub variant: Variant,
    pub grid: u32,
    pub converse: Vec<PatternResult>,
    pub forward: Vec<SampleResult>,
    pub totals: CertifyTotals,
}

impl CertifyReport {
    /// Every converse pattern vanished and every forward sample found a witness.
    pub fn passed(&self) -> bool {
        self.totals.patterns_vanishing == self.totals.patterns && self.totals.witnesses == self.totals.samples
    }
}

fn columns_for(variant: Variant, m: usize) -> usize {
    match variant {
        Variant::A => m + 1,
        Variant::B => m,
    }
}

fn eval_variant(variant: Variant, set: &WordSet, cols: &ColumnTuple) -> Result<Polynomial> {
    match variant {
        Variant::A => eval_v(set, cols),
        Variant::B => eval_v_tilde(set, cols),
    }
}

/// Coincidence patterns: `C_i = C_j` for `i < j`, and `C_i = 0` for variant B.
fn patterns(variant: Variant, n: usize, base: &ColumnTuple) -> Vec<(String, ColumnTuple)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((format!("C{i}=C{j}"), base.with_column(j, base.cols[i].clone())));
        }
    }
    if variant == Variant::B {
        for i in 0..n {
            out.push((format!("C{i}=0"), base.with_column(i, base.zero_column())));
        }
    }
    out
}

/// Certifies that the common zero set of `{V_U : U ∈ F_{p,m}}` (variant A) or of
/// `{Ṽ_U}` (variant B) is the union of the coincidence loci.
///
/// Converse: under each symbolic coincidence every determinant is the zero polynomial.
/// Forward: random tuples avoiding every coincidence have a nonvanishing determinant;
/// a sample without one is reported as [`Error::Refuted`].
pub fn zero_set_certify(
    p: usize,
    m: usize,
    variant: Variant,
    direction: Direction,
    opts: &CertifyOptions,
) -> Result<CertifyReport> {
    if p == 0 || m == 0 {
        return Err(Error::Invalid("p and m must be positive".into()));
    }
    let sets = enumerate_full_sets_capped(p, m, opts.cap)?;
    let n = columns_for(variant, m);
    let grid = opts.grid.max(2 * (m as u32 + 1));
    let mut converse = Vec::new();
    if direction != Direction::Forward {
        let base = ColumnTuple::symbolic(p, n);
        for (name, cols) in patterns(variant, n, &base) {
            let all_vanish = sets
                .par_iter()
                .map(|u| eval_variant(variant, u, &cols).map(|v| v.is_zero()))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|z| z);
            converse.push(PatternResult { pattern: name, sets_checked: sets.len(), all_vanish });
        }
    }
    let mut forward = Vec::new();
    if direction != Direction::Converse {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let cols = loop {
                let cols: Vec<Vec<u32>> = (0..n).map(|_| (0..p).map(|_| rng.gen_range(0..grid)).collect()).collect();
                let coincide = (0..n).any(|i| (i + 1..n).any(|j| cols[i] == cols[j]));
                let has_zero = variant == Variant::B && cols.iter().any(|c| c.iter().all(|&x| x == 0));
                if !coincide && !has_zero {
                    break cols;
                }
            };
            let rat: Vec<Vec<Rat>> = cols.iter().map(|c| c.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
            let tuple = ColumnTuple::from_rationals(p, &rat)?;
            let witness = sets
                .par_iter()
                .map(|u| eval_variant(variant, u, &tuple).map(|v| !v.is_zero()))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .position(|nonzero| nonzero);
            let columns: Vec<Vec<String>> = rat.iter().map(|c| c.iter().map(fmt_rat).collect()).collect();
            match witness {
                Some(i) => forward.push(SampleResult { columns, witness: sets[i].exponents() }),
                None => {
                    return Err(Error::Refuted(format!(
                        "no nonvanishing determinant at columns {columns:?} for p={p}, m={m}"
                    )))
                }
            }
        }
    }
    let totals = CertifyTotals {
        full_sets: sets.len(),
        patterns: converse.len(),
        patterns_vanishing: converse.iter().filter(|r| r.all_vanish).count(),
        samples: forward.len(),
        witnesses: forward.len(),
    };
    Ok(CertifyReport { p, m, variant, grid, converse, forward, totals })
}

/// `X_u` for a word.
pub fn row_x_word(u: &Word, cols: &ColumnTuple) -> Result<Vec<Polynomial>> {
    row_x(u.alpha(), cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn set(p: usize, letters: &[&[usize]]) -> WordSet {
        WordSet::from_letter_lists(p, &letters.iter().map(|l| l.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn ints(cols: &[&[i64]]) -> Vec<Vec<Rat>> {
        cols.iter().map(|c| c.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rows() {
        let cols = ColumnTuple::symbolic(2, 1);
        let r = row_x(&[1, 1], &cols).unwrap();
        assert_eq!(r[0], &Polynomial::var(2, 0) * &Polynomial::var(2, 1));
        let sq = row_x(&[2, 0], &cols).unwrap();
        assert_eq!(sq[0], Polynomial::var(2, 0).pow(2));
        assert_eq!(row_x(&[0, 0], &cols).unwrap()[0], Polynomial::one(2));
        // X_u is the entrywise product of powers of X_1, ..., X_p
        let cols = ColumnTuple::symbolic(2, 3);
        let x1 = row_x(&[1, 0], &cols).unwrap();
        let x2 = row_x(&[0, 1], &cols).unwrap();
        let x = row_x(&[2, 3], &cols).unwrap();
        for l in 0..3 {
            assert_eq!(x[l], &x1[l].pow(2) * &x2[l].pow(3));
        }
    }

    #[test]
    fn classical_values() {
        let u = set(1, &[&[1], &[1, 1]]);
        assert_eq!(eval_v_rational(&u, &ints(&[&[0], &[1], &[2]])).unwrap(), int(2));
        assert_eq!(eval_v_rational(&u, &ints(&[&[3], &[1], &[3]])).unwrap(), int(0));
        let tilde = eval_v_tilde(&u, &ColumnTuple::from_rationals(1, &ints(&[&[1], &[2]])).unwrap()).unwrap();
        assert_eq!(tilde.as_constant(), Some(int(2)));
        let zero = eval_v_tilde(&u, &ColumnTuple::from_rationals(1, &ints(&[&[0], &[2]])).unwrap()).unwrap();
        assert!(zero.is_zero());
        assert!(matches!(eval_v_rational(&u, &ints(&[&[0], &[1]])), Err(Error::Arity { .. })));
    }

    #[test]
    fn small_symbolic() {
        let u = set(1, &[&[1]]);
        let v = eval_v(&u, &ColumnTuple::symbolic(1, 2)).unwrap();
        assert_eq!(v, &Polynomial::var(2, 1) - &Polynomial::var(2, 0));
        let u = set(2, &[&[1], &[2]]);
        let v = eval_v(&u, &ColumnTuple::symbolic(2, 3)).unwrap();
        assert_eq!(v.total_degree(), Some(2));
        for l in 0..3 {
            let col_degree = v.terms().map(|(e, _)| e[2 * l] + e[2 * l + 1]).max().unwrap();
            assert_eq!(col_degree, 1);
        }
    }

    #[test]
    fn invariance_and_sign() {
        for u in [set(1, &[&[1], &[1, 1]]), set(2, &[&[1], &[2], &[1, 2]]), set(2, &[&[1], &[2]])] {
            assert!(translation_invariance_check(&u).unwrap());
            assert!(rec_sign_check(&u).unwrap());
        }
    }

    #[test]
    fn key_identity_examples() {
        let u = set(1, &[&[1], &[1, 1]]);
        assert_eq!(key_identity_sides(&u, &[vec![0], vec![1], vec![2]]).unwrap(), (int(2), int(2)));
        assert_eq!(key_identity_sides(&u, &[vec![3], vec![1], vec![3]]).unwrap(), (int(0), int(0)));
        let u = set(2, &[&[1], &[2], &[1, 2]]);
        assert!(key_identity_check(&u, &[vec![0, 0], vec![2, 1], vec![1, 3], vec![0, 1]]).unwrap());
        assert!(key_identity_check(&set(2, &[&[1, 2]]), &[vec![0, 0], vec![1, 1]]).is_err());
    }

    #[test]
    fn certify_small() {
        let opts = CertifyOptions { samples: 10, ..CertifyOptions::default() };
        for variant in [Variant::A, Variant::B] {
            let r = zero_set_certify(2, 2, variant, Direction::Both, &opts).unwrap();
            assert!(r.passed());
            assert_eq!(r.totals.samples, 10);
        }
        let r = zero_set_certify(1, 1, Variant::A, Direction::Converse, &opts).unwrap();
        assert_eq!(r.converse.len(), 1);
        assert!(r.forward.is_empty());
    }
}
