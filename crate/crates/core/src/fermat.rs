//! Wronskians of the Fermat sections `X_1^δ, ..., X_N^δ` on generic jets.
//!
//! Sections are read in the chart `X_0 = 1`: the germ `γ_j` is the `j`-th affine
//! coordinate, and `X_j^δ` becomes `γ_j^δ`.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetdiff::{make_generic_jet, DiffPoly, Multidegree};
use crate::polyring::{Polynomial, TruncatedSeries};
use crate::rational::Rat;
use crate::wordcomb::{enumerate_full_sets, words_of_length, WordSet};
use crate::wronskian::eval_wronskian;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FermatConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: usize,
    pub delta: u32,
}

impl FermatConfig {
    pub fn new(n: usize, p: usize, delta: u32) -> Result<Self> {
        if p == 0 || p >= n {
            return Err(Error::Invalid(format!("need 1 ≤ p ≤ N−1, got p={p}, N={n}")));
        }
        if delta == 0 {
            return Err(Error::Invalid("the degree must be positive".into()));
        }
        Ok(FermatConfig { n, p, delta })
    }

    /// `(N+1)(N−p)`.
    pub fn threshold(&self) -> u64 {
        threshold(self.n, self.p)
    }

    pub fn meets_threshold(&self) -> bool {
        self.delta as u64 > self.threshold()
    }
}

pub fn threshold(n: usize, p: usize) -> u64 {
    (n as u64 + 1) * (n - p) as u64
}

/// Splits `F_{p,N−1}` into the sets containing every letter (`F₊`) and the others (`F₋`).
pub fn partition_fullsets(n: usize, p: usize) -> Result<(Vec<WordSet>, Vec<WordSet>)> {
    if p == 0 || p >= n {
        return Err(Error::Invalid(format!("need 1 ≤ p ≤ N−1, got p={p}, N={n}")));
    }
    Ok(enumerate_full_sets(p, n - 1)?.into_iter().partition(WordSet::contains_all_letters))
}

fn check_set(cfg: &FermatConfig, set: &WordSet) -> Result<()> {
    if set.p() != cfg.p || set.len() != cfg.n - 1 {
        return Err(Error::Invalid(format!("{set} is not in F_{{{},{}}}", cfg.p, cfg.n - 1)));
    }
    if !set.is_full() {
        return Err(Error::Invalid(format!("{set} is not a full set")));
    }
    Ok(())
}

/// `W_U(γ_1^δ, ..., γ_N^δ)` on generic jets of order `order(U)`.
pub fn fermat_wronskian(cfg: &FermatConfig, set: &WordSet) -> Result<DiffPoly> {
    check_set(cfg, set)?;
    let (_, gammas) = make_generic_jet(cfg.p, set.order(), cfg.n);
    let fs: Vec<DiffPoly> = gammas.iter().map(|g| g.pow(cfg.delta)).collect();
    eval_wronskian(set, &fs)
}

/// Divides `W` by `Π_j u_{j,0}^{e}` with `e = max(δ − order(U), 0)`.
///
/// Every entry of column `j` is `∂_u γ_j^δ` with `ℓ(u) ≤ k`, a multiple of
/// `γ_j^{δ−k}`, so the division is exact; a failure is reported as
/// [`Error::Refuted`].
pub fn factor_columns(cfg: &FermatConfig, set: &WordSet, w: &DiffPoly) -> Result<(Vec<u32>, DiffPoly)> {
    check_set(cfg, set)?;
    let e = cfg.delta.saturating_sub(set.order());
    let exponents = vec![e; cfg.n];
    let cofactor = w
        .divide_by_base_powers(&exponents)
        .ok_or_else(|| Error::Refuted(format!("W_{set} is not divisible by the column factors")))?;
    Ok((exponents, cofactor))
}

/// `W_U(c_1, ..., c_{N−1}, −c_0 − Σ c_i) = W_U(c_1, ..., c_{N−1}, −c_0)` with
/// `c_i = γ_i^δ` on generic jets of `γ_0, ..., γ_N`.
pub fn restriction_identity_check(cfg: &FermatConfig, set: &WordSet) -> Result<bool> {
    check_set(cfg, set)?;
    let (_, gammas) = make_generic_jet(cfg.p, set.order(), cfg.n + 1);
    let cs: Vec<DiffPoly> = gammas.iter().map(|g| g.pow(cfg.delta)).collect();
    let mut last = -&cs[0];
    for c in &cs[1..cfg.n] {
        last = &last - c;
    }
    let mut lhs_args = cs[1..cfg.n].to_vec();
    lhs_args.push(last);
    let mut rhs_args = cs[1..cfg.n].to_vec();
    rhs_args.push(-&cs[0]);
    Ok(eval_wronskian(set, &lhs_args)? == eval_wronskian(set, &rhs_args)?)
}

/// Tails `g_{p+1}, ..., g_{N−1}` of the graph germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tails {
    /// Every coefficient up to the truncation order is a fresh parameter.
    Symbolic,
    /// Integer coefficients drawn from `-9..=9`.
    Random { seed: u64 },
}

/// Truncation order of the tails: one above the order of the set.
pub fn tail_truncation(set: &WordSet) -> u32 {
    set.order() + 1
}

fn tail_series(cfg: &FermatConfig, trunc: u32, tails: Tails) -> Vec<TruncatedSeries> {
    let count = cfg.n - 1 - cfg.p;
    let mut exps = vec![vec![0u32; cfg.p]];
    for len in 1..=trunc {
        exps.extend(words_of_length(cfg.p, len).into_iter().map(|u| u.alpha().to_vec()));
    }
    match tails {
        Tails::Symbolic => {
            let nvars = cfg.p + count * exps.len();
            (0..count)
                .map(|j| {
                    let terms = exps.iter().enumerate().map(|(i, a)| {
                        let mut e = a.clone();
                        e.resize(nvars, 0);
                        e[cfg.p + j * exps.len() + i] = 1;
                        (e, Rat::one())
                    });
                    TruncatedSeries::new(Polynomial::from_terms(nvars, terms), cfg.p, trunc)
                })
                .collect()
        }
        Tails::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let terms = exps.iter().map(|a| (a.clone(), Rat::from_integer(rng.gen_range(-9i64..=9).into())));
                    TruncatedSeries::new(Polynomial::from_terms(cfg.p, terms), cfg.p, trunc)
                })
                .collect()
        }
    }
}

/// `W_U(z_1^δ, ..., z_p^δ, g_{p+1}^δ, ..., g_{N−1}^δ, −1)` for `U ∈ F₋`.
pub fn fminus_wronskian(cfg: &FermatConfig, set: &WordSet, tails: Tails) -> Result<TruncatedSeries> {
    check_set(cfg, set)?;
    if set.contains_all_letters() {
        return Err(Error::Invalid(format!("{set} contains every letter")));
    }
    let trunc = tail_truncation(set);
    let gs = tail_series(cfg, trunc, tails);
    let nvars = gs.first().map_or(cfg.p, TruncatedSeries::nvars);
    let mut fs: Vec<TruncatedSeries> = (0..cfg.p)
        .map(|i| TruncatedSeries::new(Polynomial::var(nvars, i).pow(cfg.delta), cfg.p, trunc))
        .collect();
    fs.extend(gs.iter().map(|g| g.pow(cfg.delta)));
    fs.push(TruncatedSeries::new(Polynomial::constant(nvars, -Rat::one()), cfg.p, trunc));
    eval_wronskian(set, &fs)
}

/// The `F₋` Wronskian vanishes identically (up to the truncation order).
pub fn fminus_vanishing_check(cfg: &FermatConfig, set: &WordSet, tails: Tails) -> Result<bool> {
    Ok(fminus_wronskian(cfg, set, tails)?.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub delta: u32,
    pub qualifies: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: usize,
    pub threshold: u64,
    pub least_qualifying_delta: u64,
    pub deltas: Vec<DeltaRow>,
}

/// `(N+1)(N−p)` and which `δ ≤ max_delta` exceed it.
pub fn degree_report(n: usize, p: usize, max_delta: u32) -> Result<DegreeReport> {
    if p == 0 || p >= n {
        return Err(Error::Invalid(format!("need 1 ≤ p ≤ N−1, got p={p}, N={n}")));
    }
    let t = threshold(n, p);
    let deltas = (1..=max_delta).map(|delta| DeltaRow { delta, qualifies: delta as u64 > t }).collect();
    Ok(DegreeReport { n, p, threshold: t, least_qualifying_delta: t + 1, deltas })
}

/// Which checks [`fermat_report`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    pub factor: bool,
    pub restrict: bool,
    pub fminus: bool,
}

impl Checks {
    pub const ALL: Checks = Checks { factor: true, restrict: true, fminus: true };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetReport {
    pub set: Vec<Vec<u32>>,
    pub part: &'static str,
    pub order: u32,
    pub beta: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multidegree_is_beta: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_exponents: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restriction_identity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fminus_vanishes: Option<bool>,
}

impl SetReport {
    pub fn passed(&self) -> bool {
        self.multidegree_is_beta != Some(false)
            && self.restriction_identity != Some(false)
            && self.fminus_vanishes != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FermatReport {
    pub config: FermatConfig,
    pub threshold: u64,
    pub meets_threshold: bool,
    pub fplus: usize,
    pub fminus: usize,
    pub sets: Vec<SetReport>,
}

impl FermatReport {
    pub fn passed(&self) -> bool {
        self.sets.iter().all(SetReport::passed)
    }
}

fn report_one(cfg: &FermatConfig, set: &WordSet, plus: bool, checks: Checks, tails: Tails) -> Result<SetReport> {
    let mut r = SetReport {
        set: set.exponents(),
        part: if plus { "F+" } else { "F-" },
        order: set.order(),
        beta: set.beta(),
        multidegree_is_beta: None,
        factor_exponents: None,
        restriction_identity: None,
        fminus_vanishes: None,
    };
    if checks.factor {
        let w = fermat_wronskian(cfg, set)?;
        r.multidegree_is_beta = Some(w.torus_multidegree()? == Multidegree::Pure(set.beta()));
        r.factor_exponents = Some(factor_columns(cfg, set, &w)?.0);
    }
    if checks.restrict {
        r.restriction_identity = Some(restriction_identity_check(cfg, set)?);
    }
    if checks.fminus && !plus {
        r.fminus_vanishes = Some(fminus_vanishing_check(cfg, set, tails)?);
    }
    Ok(r)
}

/// Runs the selected checks on every `U ∈ F_{p,N−1}`, `F₊` first, each part in canonical
/// order.
pub fn fermat_report(cfg: &FermatConfig, checks: Checks, tails: Tails) -> Result<FermatReport> {
    let (plus, minus) = partition_fullsets(cfg.n, cfg.p)?;
    let tagged: Vec<(&WordSet, bool)> = plus.iter().map(|u| (u, true)).chain(minus.iter().map(|u| (u, false))).collect();
    let sets = tagged
        .par_iter()
        .map(|&(u, is_plus)| report_one(cfg, u, is_plus, checks, tails))
        .collect::<Result<Vec<_>>>()?;
    Ok(FermatReport {
        config: *cfg,
        threshold: cfg.threshold(),
        meets_threshold: cfg.meets_threshold(),
        fplus: plus.len(),
        fminus: minus.len(),
        sets,
    })
}
