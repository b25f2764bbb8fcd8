//! Deciding linear dependence of polynomial families.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{determinant, identity, rank, RatMatrix};
use crate::polyring::{ExponentOrder, Polynomial};
use crate::rational::{fmt_rat, Rat};
use crate::vandermonde::eval_v_rational;
use crate::wordcomb::{enumerate_full_sets_capped, WordSet, DEFAULT_ENUMERATION_CAP};
use crate::wronskian::eval_wronskian;

fn common_nvars(fs: &[Polynomial]) -> Result<usize> {
    let Some(first) = fs.first() else {
        return Err(Error::Arity { expected: 1, found: 0 });
    };
    let n = first.nvars();
    if let Some(f) = fs.iter().find(|f| f.nvars() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: f.nvars() });
    }
    Ok(n)
}

/// Rank over ℚ of the coefficient vectors of `fs`.
pub fn rank_oracle(fs: &[Polynomial]) -> Result<usize> {
    common_nvars(fs)?;
    let mut columns: BTreeMap<&Vec<u32>, usize> = BTreeMap::new();
    for f in fs {
        for (e, _) in f.terms() {
            let n = columns.len();
            columns.entry(e).or_insert(n);
        }
    }
    let mut m: RatMatrix = vec![vec![Rat::zero(); columns.len()]; fs.len()];
    for (row, f) in m.iter_mut().zip(fs) {
        for (e, c) in f.terms() {
            row[columns[e]] = c.clone();
        }
    }
    Ok(rank(&m))
}

/// One elementary operation of [`distinct_order_reduction`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Step {
    /// New position `i` holds the old entry `perm[i]`.
    Permute { perm: Vec<usize> },
    /// `t_target ← t_target − λ·t_source`.
    Transvection {
        target: usize,
        source: usize,
        #[serde(with = "crate::rational::serde_rat")]
        lambda: Rat,
    },
}

/// `(t_0, ..., t_m) = (f_0, ..., f_m)·A` with pairwise distinct series orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub ts: Vec<Polynomial>,
    pub a: RatMatrix,
    pub steps: Vec<Step>,
}

impl ReductionResult {
    /// Checks the matrix relation, invertibility of `A` and distinctness of the orders.
    pub fn verify(&self, fs: &[Polynomial], order: ExponentOrder) -> bool {
        let n = fs.len();
        if self.ts.len() != n || self.a.len() != n {
            return false;
        }
        let nvars = fs[0].nvars();
        for (j, t) in self.ts.iter().enumerate() {
            let mut combo = Polynomial::zero(nvars);
            for (i, f) in fs.iter().enumerate() {
                combo = &combo + &f.scale(&self.a[i][j]);
            }
            if combo != *t {
                return false;
            }
        }
        if determinant(&self.a).is_zero() {
            return false;
        }
        let orders: Option<Vec<Vec<u32>>> = self.ts.iter().map(|t| t.series_order(nvars, order)).collect();
        let Some(orders) = orders else { return false };
        (0..n).all(|i| (i + 1..n).all(|j| orders[i] != orders[j]))
    }
}

/// Brings an independent family to pairwise distinct series orders.
///
/// Each round sorts by order (stably) and, for the first run of equal orders, applies
/// `t_k ← t_k − λ t_i` to every later member `t_k` of the run, `λ` the ratio of the
/// leading coefficients. Each transvection strictly raises one order, and a polynomial
/// has finitely many exponents, so the loop terminates. The output is sorted by
/// increasing order.
pub fn distinct_order_reduction(fs: &[Polynomial], order: ExponentOrder) -> Result<ReductionResult> {
    let nvars = common_nvars(fs)?;
    if rank_oracle(fs)? < fs.len() {
        return Err(Error::Dependent);
    }
    let n = fs.len();
    let mut ts = fs.to_vec();
    let mut a = identity(n);
    let mut steps = Vec::new();
    let lowest = |t: &Polynomial| t.series_order(nvars, order).expect("independent family has no zero member");
    loop {
        let orders: Vec<Vec<u32>> = ts.iter().map(lowest).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&i, &j| order.compare(&orders[i], &orders[j]));
        if perm.iter().enumerate().any(|(i, &j)| i != j) {
            ts = perm.iter().map(|&j| ts[j].clone()).collect();
            a = a.iter().map(|row| perm.iter().map(|&j| row[j].clone()).collect()).collect();
            steps.push(Step::Permute { perm: perm.clone() });
        }
        let orders: Vec<Vec<u32>> = perm.iter().map(|&j| orders[j].clone()).collect();
        let Some(i) = (0..n.saturating_sub(1)).find(|&i| order.compare(&orders[i], &orders[i + 1]) == Ordering::Equal)
        else {
            return Ok(ReductionResult { ts, a, steps });
        };
        // one round: clear the leading term of every later entry of the same order
        let pivot = ts[i].clone();
        let lead = pivot.coeff(&orders[i]);
        for k in (i + 1..n).take_while(|&k| orders[k] == orders[i]) {
            let lambda = ts[k].coeff(&orders[i]) / &lead;
            ts[k] = &ts[k] - &pivot.scale(&lambda);
            for row in a.iter_mut() {
                let delta = &lambda * &row[i];
                row[k] -= delta;
            }
            steps.push(Step::Transvection { target: k, source: i, lambda });
        }
    }
}

/// First full set, in canonical enumeration order, whose Wronskian of `fs` is not the
/// zero polynomial; `None` exactly when `fs` is linearly dependent.
pub fn independence_witness(fs: &[Polynomial]) -> Result<Option<WordSet>> {
    independence_witness_capped(fs, DEFAULT_ENUMERATION_CAP)
}

pub fn independence_witness_capped(fs: &[Polynomial], cap: usize) -> Result<Option<WordSet>> {
    let p = common_nvars(fs)?;
    let sets = enumerate_full_sets_capped(p, fs.len() - 1, cap)?;
    sets.par_iter()
        .map(|u| eval_wronskian(u, fs).map(|w| (!w.is_zero()).then(|| u.clone())))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

/// Outcome of the dependence decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependenceReport {
    pub independent: bool,
    pub witness: Option<Vec<Vec<u32>>>,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wronskian: Option<String>,
}

pub fn decide(fs: &[Polynomial], cap: usize) -> Result<DependenceReport> {
    let rank = rank_oracle(fs)?;
    let witness = independence_witness_capped(fs, cap)?;
    let wronskian = match &witness {
        Some(u) => Some(eval_wronskian(u, fs)?.to_string()),
        None => None,
    };
    Ok(DependenceReport { independent: witness.is_some(), witness: witness.map(|u| u.exponents()), rank, wronskian })
}

/// Checks that `W_U(z^{α_0} + tail_0, ..., z^{α_m} + tail_m)` has series order
/// `Σ α_i − β(U)`, the tails having only exponents greater than `α_i`.
///
/// Fails with [`Error::Inapplicable`] when `V_U(α_0, ..., α_m) = 0`.
pub fn least_order_check(set: &WordSet, alphas: &[Vec<u32>], tails: &[Polynomial], order: ExponentOrder) -> Result<bool> {
    let (expected, found) = least_order_sides(set, alphas, tails, order)?;
    Ok(found.as_ref() == Some(&expected))
}

/// Predicted and actual least order in [`least_order_check`].
pub fn least_order_sides(
    set: &WordSet,
    alphas: &[Vec<u32>],
    tails: &[Polynomial],
    order: ExponentOrder,
) -> Result<(Vec<u32>, Option<Vec<u32>>)> {
    let p = set.p();
    if alphas.len() != set.len() + 1 || tails.len() != alphas.len() {
        return Err(Error::Arity { expected: set.len() + 1, found: alphas.len().min(tails.len()) });
    }
    let cols: Vec<Vec<Rat>> = alphas.iter().map(|a| a.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
    let v = eval_v_rational(set, &cols)?;
    if v.is_zero() {
        return Err(Error::Inapplicable("V_U vanishes at these exponents".into()));
    }
    let mut fs = Vec::with_capacity(alphas.len());
    for (alpha, tail) in alphas.iter().zip(tails) {
        if tail.nvars() != p {
            return Err(Error::DimensionMismatch { expected: p, found: tail.nvars() });
        }
        if let Some((e, _)) = tail.terms().find(|(e, _)| order.compare(e, alpha) != Ordering::Greater) {
            return Err(Error::Invalid(format!("tail exponent {e:?} is not above {alpha:?}")));
        }
        fs.push(&Polynomial::monomial(alpha.clone(), Rat::one()) + tail);
    }
    let beta = set.beta();
    let expected: Vec<u32> = (0..p)
        .map(|k| (alphas.iter().map(|a| a[k] as u64).sum::<u64>() - beta[k]) as u32)
        .collect();
    let w = eval_wronskian(set, &fs)?;
    Ok((expected, w.series_order(p, order)))
}

/// The matrix `A` of a reduction with entries as reduced fractions.
pub fn format_matrix(a: &[Vec<Rat>]) -> Vec<Vec<String>> {
    a.iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
}
