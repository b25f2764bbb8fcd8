//! Generalized Wronskians and their combinations.
//!
//! `W_U(f_0, ..., f_m)` is the determinant whose first row is `(f_0, ..., f_m)` and whose
//! row `i ≥ 1` is `∂_{u_i}` of it, the words `u_i` of `U` taken in canonical order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::det::Ring;
use crate::error::{Error, Result};
use crate::jetdiff::{DiffPoly, JetSpace, JetVar};
use crate::linalg::{determinant, solve_unique};
use crate::polyring::{compose_series, falling_factorial, leibniz_constant, sub_exponents, Polynomial, TruncatedSeries};
use crate::rational::{fmt_rat, parse_rat, pow, Rat};
use crate::wordcomb::{canonical_full_set, words_of_length, CharSequence, Word, WordSet};

/// Default number of trials of the randomized geometricity test.
pub const DEFAULT_TRIALS: usize = 16;

/// Default bound on the number of jet monomials in the exact geometricity test.
pub const DEFAULT_EXACT_BUDGET: usize = 2_000_000;

/// Random coefficients and points are drawn uniformly from the integers in
/// `-RANDOM_RANGE..=RANDOM_RANGE`.
pub const RANDOM_RANGE: i64 = 9;

/// Functions a Wronskian can be evaluated on.
pub trait Germ: Ring {
    /// `∂_u self`.
    fn derive(&self, u: &Word) -> Result<Self>;

    fn scale_by(&self, c: &Rat) -> Self;

    /// Shortcut evaluation, when the inputs allow one.
    fn wronskian_shortcut(_set: &WordSet, _fs: &[Self]) -> Option<Self> {
        None
    }
}

impl Germ for Polynomial {
    fn scale_by(&self, c: &Rat) -> Self {
        self.scale(c)
    }

    fn derive(&self, u: &Word) -> Result<Self> {
        if u.p() > self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: u.p() });
        }
        Ok(self.partial_derivative(u))
    }

    /// All-monomial inputs: `∂_u (c z^a) = c·(a)_u·z^{a-u}`, so the determinant factors
    /// into `Π c_j · z^{Σ a_j - β(U)}` times a determinant of falling factorials.
    fn wronskian_shortcut(set: &WordSet, fs: &[Self]) -> Option<Self> {
        let nvars = fs[0].nvars();
        let mut exps = Vec::with_capacity(fs.len());
        let mut coeff = Rat::one();
        for f in fs {
            if f.is_zero() {
                return Some(Polynomial::zero(nvars));
            }
            let (e, c) = f.as_monomial()?;
            exps.push(e.clone());
            coeff *= c;
        }
        let mut total = vec![0i64; nvars];
        for e in &exps {
            for (t, &x) in total.iter_mut().zip(e) {
                *t += x as i64;
            }
        }
        for (t, b) in total.iter_mut().zip(set.beta()) {
            *t -= b as i64;
        }
        if total.iter().any(|&t| t < 0) {
            return Some(Polynomial::zero(nvars));
        }
        let p = set.p();
        let mut rows = vec![vec![Rat::one(); fs.len()]];
        for u in set.words() {
            rows.push(
                exps.iter()
                    .map(|e| {
                        let v = u.alpha().iter().zip(&e[..p]).map(|(&k, &a)| falling_factorial(a, k)).product();
                        Rat::from_integer(v)
                    })
                    .collect(),
            );
        }
        let d = determinant(&rows) * coeff;
        let total = total.into_iter().map(|t| t as u32).collect();
        Some(Polynomial::monomial(total, d))
    }
}

impl Germ for TruncatedSeries {
    fn scale_by(&self, c: &Rat) -> Self {
        self.scale(c)
    }

    fn derive(&self, u: &Word) -> Result<Self> {
        if u.p() != self.p() {
            return Err(Error::DimensionMismatch { expected: self.p(), found: u.p() });
        }
        self.partial_derivative(u)
    }
}

impl Germ for DiffPoly {
    fn scale_by(&self, c: &Rat) -> Self {
        self.scale(c)
    }

    fn derive(&self, u: &Word) -> Result<Self> {
        if u.p() != self.space().p() {
            return Err(Error::DimensionMismatch { expected: self.space().p(), found: u.p() });
        }
        self.formal_derivative_word(u)
    }
}

fn check_arity<F>(set: &WordSet, fs: &[F]) -> Result<()> {
    if fs.len() != set.len() + 1 {
        return Err(Error::Arity { expected: set.len() + 1, found: fs.len() });
    }
    Ok(())
}

/// The matrix of `W_U(fs)`.
pub fn wronskian_matrix<F: Germ>(set: &WordSet, fs: &[F]) -> Result<Vec<Vec<F>>> {
    check_arity(set, fs)?;
    let mut rows = vec![fs.to_vec()];
    for u in set.words() {
        rows.push(fs.iter().map(|f| f.derive(u)).collect::<Result<_>>()?);
    }
    Ok(rows)
}

/// `W_U(fs)`, using a closed form when every input is a monomial.
pub fn eval_wronskian<F: Germ>(set: &WordSet, fs: &[F]) -> Result<F> {
    check_arity(set, fs)?;
    if let Some(w) = F::wronskian_shortcut(set, fs) {
        // the shortcut skips differentiation, so validate the alphabet here
        if let Some(u) = set.words().first() {
            fs[0].derive(u)?;
        }
        return Ok(w);
    }
    eval_wronskian_expanded(set, fs)
}

/// `W_U(fs)` by differentiating every entry and expanding the determinant.
pub fn eval_wronskian_expanded<F: Germ>(set: &WordSet, fs: &[F]) -> Result<F> {
    let rows = wronskian_matrix(set, fs)?;
    Ok(F::determinant(&rows))
}

/// `Σ λ_U W_U`: a generalized Wronskian of size `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WronskianCombination {
    m: usize,
    p: usize,
    terms: Vec<(Rat, WordSet)>,
}

impl WronskianCombination {
    /// Rejects the zero combination, zero coefficients, repeated sets, sets of the wrong
    /// size or alphabet, and non-admissible sets.
    pub fn new(m: usize, terms: Vec<(Rat, WordSet)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Invalid("the zero combination is not a Wronskian".into()));
        };
        let p = first.p();
        let mut seen = HashSet::new();
        for (c, set) in &terms {
            if c.is_zero() {
                return Err(Error::Invalid(format!("zero coefficient on {set}")));
            }
            if set.len() != m {
                return Err(Error::Invalid(format!("set {set} has size {}, expected {m}", set.len())));
            }
            if set.p() != p {
                return Err(Error::DimensionMismatch { expected: p, found: set.p() });
            }
            if !set.is_admissible() {
                return Err(Error::Invalid(format!("set {set} is not admissible")));
            }
            if !seen.insert(set.clone()) {
                return Err(Error::Invalid(format!("set {set} appears twice")));
            }
        }
        Ok(WronskianCombination { m, p, terms })
    }

    pub fn pure(set: WordSet) -> Result<Self> {
        WronskianCombination::new(set.len(), vec![(Rat::one(), set)])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &[(Rat, WordSet)] {
        &self.terms
    }

    /// Least order of the sets appearing.
    pub fn order(&self) -> u32 {
        self.terms.iter().map(|(_, s)| s.order()).min().unwrap_or(0)
    }

    /// Largest order of the sets appearing; derivatives up to this order are needed.
    pub fn max_order(&self) -> u32 {
        self.terms.iter().map(|(_, s)| s.order()).max().unwrap_or(0)
    }

    pub fn eval<F: Germ>(&self, fs: &[F]) -> Result<F> {
        let mut acc: Option<F> = None;
        for (c, set) in &self.terms {
            let w = eval_wronskian(set, fs)?;
            let term = w.scale_by(c);
            acc = Some(match acc {
                Some(a) => a.plus(&term),
                None => term,
            });
        }
        Ok(acc.expect("nonempty combination"))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    set: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct CombinationRepr {
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    terms: Vec<TermRepr>,
}

impl Serialize for WronskianCombination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(c, set)| TermRepr { coeff: fmt_rat(c), set: set.exponents() })
            .collect();
        CombinationRepr { m: self.m, p: Some(self.p), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WronskianCombination {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CombinationRepr::deserialize(d)?;
        let p = repr
            .p
            .or_else(|| repr.terms.iter().flat_map(|t| t.set.first()).map(Vec::len).next())
            .unwrap_or(1);
        let terms = repr
            .terms
            .into_iter()
            .map(|t| {
                let c = parse_rat(&t.coeff)?;
                Ok((c, WordSet::from_exponents(p, &t.set)?))
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        WronskianCombination::new(repr.m, terms).map_err(D::Error::custom)
    }
}

/// How [`is_geometric`] decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometricMode {
    /// Symbolic identity on generic jets; fails with [`Error::BudgetExhausted`] once an
    /// intermediate determinant exceeds `budget` jet monomials.
    Exact { budget: usize },
    /// Evaluation on random polynomials at random points.
    Randomized { trials: usize, seed: u64 },
}

/// Inputs on which `W(g·f) ≠ g^{m+1}·W(f)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub g: String,
    pub fs: Vec<String>,
    pub point: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricReport {
    pub geometric: bool,
    pub mode: &'static str,
    pub trials: usize,
    pub counterexample: Option<Counterexample>,
}

/// Tests `W(g f_0, ..., g f_m) = g^{m+1} W(f_0, ..., f_m)`.
///
/// Exact mode compares both sides as polynomials in the jets of `g, f_0, ..., f_m` at a
/// point, up to the order of `W`. Both sides only involve those jets, which can take
/// arbitrary values, and the operators `∂_u` commute with translations, so equality at
/// the origin for generic jets is equality everywhere for all germs.
///
/// Randomized mode is one-sided: `false` comes with a counterexample, `true` means every
/// trial passed.
pub fn is_geometric(w: &WronskianCombination, mode: GeometricMode) -> Result<GeometricReport> {
    match mode {
        GeometricMode::Exact { budget } => {
            let geometric = geometric_exact(w, budget)?;
            Ok(GeometricReport { geometric, mode: "exact", trials: 0, counterexample: None })
        }
        GeometricMode::Randomized { trials, seed } => geometric_randomized(w, trials, seed),
    }
}

fn geometric_exact(w: &WronskianCombination, budget: usize) -> Result<bool> {
    let (m, p, k) = (w.m, w.p, w.max_order());
    let space = JetSpace::new(p, k, m + 2);
    let jet = |j: usize, alpha: &[u32]| DiffPoly::var(&space, &JetVar { j, alpha: alpha.to_vec() });
    let zero = vec![0u32; p];
    let g0 = jet(m + 1, &zero)?;
    let check = |d: &DiffPoly| {
        if d.num_terms() > budget {
            Err(Error::BudgetExhausted(format!("{} jet monomials exceed the budget of {budget}", d.num_terms())))
        } else {
            Ok(())
        }
    };
    let mut lhs = DiffPoly::zero(&space);
    let mut rhs = DiffPoly::zero(&space);
    for (c, set) in &w.terms {
        let mut plain = vec![(0..=m).map(|j| jet(j, &zero)).collect::<Result<Vec<_>>>()?];
        let mut twisted = vec![(0..=m).map(|j| Ok(&g0 * &jet(j, &zero)?)).collect::<Result<Vec<_>>>()?];
        for u in set.words() {
            let alpha = u.alpha();
            plain.push((0..=m).map(|j| jet(j, alpha)).collect::<Result<Vec<_>>>()?);
            let mut row = Vec::with_capacity(m + 1);
            for j in 0..=m {
                let mut entry = DiffPoly::zero(&space);
                for a in sub_exponents(alpha) {
                    let b: Vec<u32> = alpha.iter().zip(&a).map(|(x, y)| x - y).collect();
                    let coeff = Rat::from_integer(leibniz_constant(&a, &b));
                    entry = &entry + &(&jet(m + 1, &a)? * &jet(j, &b)?).scale(&coeff);
                }
                row.push(entry);
            }
            twisted.push(row);
        }
        let l = DiffPoly::determinant(&twisted);
        check(&l)?;
        lhs = &lhs + &l.scale(c);
        rhs = &rhs + &DiffPoly::determinant(&plain).scale(c);
    }
    let rhs = &rhs * &g0.pow(m as u32 + 1);
    check(&lhs)?;
    Ok(lhs == rhs)
}

fn random_int(rng: &mut ChaCha8Rng) -> Rat {
    Rat::from_integer(rng.gen_range(-RANDOM_RANGE..=RANDOM_RANGE).into())
}

/// Random polynomial in `p` variables of total degree at most `deg`, every coefficient
/// drawn from the declared finite set.
pub fn random_polynomial(rng: &mut ChaCha8Rng, p: usize, deg: u32) -> Polynomial {
    let mut terms = vec![(vec![0; p], random_int(rng))];
    for len in 1..=deg {
        for u in words_of_length(p, len) {
            terms.push((u.alpha().to_vec(), random_int(rng)));
        }
    }
    Polynomial::from_terms(p, terms)
}

fn eval_at(w: &WronskianCombination, fs: &[Polynomial], x: &[Rat]) -> Result<Rat> {
    let mut acc = Rat::zero();
    for (c, set) in &w.terms {
        let rows = wronskian_matrix(set, fs)?;
        let values: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|f| f.eval(x)).collect()).collect();
        acc += c * determinant(&values);
    }
    Ok(acc)
}

fn geometric_randomized(w: &WronskianCombination, trials: usize, seed: u64) -> Result<GeometricReport> {
    let (m, p) = (w.m, w.p);
    let deg = w.max_order() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let g = random_polynomial(&mut rng, p, deg);
        let fs: Vec<Polynomial> = (0..=m).map(|_| random_polynomial(&mut rng, p, deg)).collect();
        let x: Vec<Rat> = (0..p).map(|_| random_int(&mut rng)).collect();
        let gfs: Vec<Polynomial> = fs.iter().map(|f| &g * f).collect();
        let lhs = eval_at(w, &gfs, &x)?;
        let rhs = pow(&g.eval(&x), m as u32 + 1) * eval_at(w, &fs, &x)?;
        if lhs != rhs {
            let counterexample = Counterexample {
                g: g.to_string(),
                fs: fs.iter().map(Polynomial::to_string).collect(),
                point: x.iter().map(fmt_rat).collect(),
                lhs: fmt_rat(&lhs),
                rhs: fmt_rat(&rhs),
            };
            return Ok(GeometricReport {
                geometric: false,
                mode: "randomized",
                trials: trial + 1,
                counterexample: Some(counterexample),
            });
        }
    }
    Ok(GeometricReport { geometric: true, mode: "randomized", trials, counterexample: None })
}

/// Matrix of the linear part of `φ`: entry `(l, i)` is `∂_i φ_l(0)`.
fn linear_part(phi: &[TruncatedSeries]) -> Vec<Vec<Rat>> {
    let p = phi.len();
    phi.iter()
        .map(|s| {
            (0..p)
                .map(|i| {
                    let mut e = vec![0u32; s.nvars()];
                    e[i] = 1;
                    s.poly().coeff(&e)
                })
                .collect()
        })
        .collect()
}

/// `(φ·W)_x(fs) = W_0(f_0(x + φ(·)), ..., f_m(x + φ(·)))`.
pub fn act_biholomorphism(
    w: &WronskianCombination,
    phi: &[TruncatedSeries],
    fs: &[Polynomial],
    x: &[Rat],
) -> Result<Rat> {
    let p = w.p;
    if phi.len() != p {
        return Err(Error::Arity { expected: p, found: phi.len() });
    }
    if x.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: x.len() });
    }
    if fs.len() != w.m + 1 {
        return Err(Error::Arity { expected: w.m + 1, found: fs.len() });
    }
    if let Some(f) = fs.iter().find(|f| f.nvars() != p) {
        return Err(Error::DimensionMismatch { expected: p, found: f.nvars() });
    }
    if phi.iter().any(|s| s.p() != p || s.nvars() != p) {
        return Err(Error::Invalid("φ must be a tuple of series in the germ variables only".into()));
    }
    if phi.iter().any(|s| !s.value_at_origin().is_zero()) {
        return Err(Error::Invalid("φ must fix the origin".into()));
    }
    if determinant(&linear_part(phi)).is_zero() {
        return Err(Error::Singular);
    }
    let order = w.max_order();
    let shift: Vec<Polynomial> = (0..p)
        .map(|i| &Polynomial::var(p, i) + &Polynomial::constant(p, x[i].clone()))
        .collect();
    let composed = fs
        .iter()
        .map(|f| compose_series(&f.compose(&shift), phi, order))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = Rat::zero();
    for (c, set) in &w.terms {
        let rows = wronskian_matrix(set, &composed)?;
        let values: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.value_at_origin().as_constant().expect("germ variables only")).collect())
            .collect();
        acc += c * determinant(&values);
    }
    Ok(acc)
}

/// The linear map `z ↦ A z` as a tuple of polynomials.
pub fn linear_map(a: &[Vec<Rat>]) -> Vec<Polynomial> {
    let p = a.len();
    a.iter()
        .map(|row| Polynomial::from_terms(p, row.iter().enumerate().map(|(i, c)| (unit(p, i), c.clone()))))
        .collect()
}

fn unit(p: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; p];
    e[i] = 1;
    e
}

fn check_square(a: &[Vec<Rat>], p: usize) -> Result<()> {
    if a.len() != p || a.iter().any(|r| r.len() != p) {
        return Err(Error::DimensionMismatch { expected: p, found: a.len() });
    }
    Ok(())
}

/// Checks `W_{U_n}(f_0∘A, ..., f_m∘A) = det(A)^{w(U_n)/p} · W_{U_n}(f_0, ..., f_m)∘A`.
pub fn det_power_law_check(p: usize, n: u32, a: &[Vec<Rat>], fs: &[Polynomial]) -> Result<bool> {
    check_square(a, p)?;
    let d = determinant(a);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let set = canonical_full_set(p, n)?;
    check_arity(&set, fs)?;
    let w = set.weight();
    assert_eq!(w % p as u64, 0, "w(U_n) is a multiple of p");
    let map = linear_map(a);
    let composed: Vec<Polynomial> = fs.iter().map(|f| f.compose(&map)).collect();
    let lhs = eval_wronskian(&set, &composed)?;
    let rhs = eval_wronskian(&set, fs)?.compose(&map).scale(&pow(&d, (w / p as u64) as u32));
    Ok(lhs == rhs)
}

/// The monomials of degree `≤ n` in `p` variables: `1`, then `z^u` for the words `u` of
/// `U_n` in canonical order.
pub fn monomial_basis(p: usize, n: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one(p)];
    for len in 1..=n {
        out.extend(words_of_length(p, len).into_iter().map(|u| Polynomial::monomial(u.alpha().to_vec(), Rat::one())));
    }
    out
}

/// `W_{U_n}(fs)`.
pub fn wronskian_on_basis(p: usize, n: u32, fs: &[Polynomial]) -> Result<Polynomial> {
    eval_wronskian(&canonical_full_set(p, n)?, fs)
}

/// Largest characteristic sequence among the sets of `w`.
pub fn stratum(w: &WronskianCombination) -> CharSequence {
    w.terms.iter().map(|(_, s)| s.charseq()).max().expect("nonempty combination")
}

/// `(A·W)_0` on generic jets of `f_0, ..., f_m`, where `A` acts as the linear
/// biholomorphism `z ↦ A z`: `∂_u(f∘A)(0) = Π_i (Σ_l A_{l,i} D_l)^{u_i} f (0)`.
pub fn linear_action_on_generic(w: &WronskianCombination, a: &[Vec<Rat>]) -> Result<DiffPoly> {
    let p = w.p;
    check_square(a, p)?;
    if determinant(a).is_zero() {
        return Err(Error::Singular);
    }
    let space = JetSpace::new(p, w.max_order(), w.m + 1);
    let forms: Vec<Polynomial> = (0..p)
        .map(|i| Polynomial::from_terms(p, (0..p).map(|l| (unit(p, l), a[l][i].clone()))))
        .collect();
    let row = |alpha: &[u32]| -> Result<Vec<DiffPoly>> {
        let mut op = Polynomial::one(p);
        for (i, &k) in alpha.iter().enumerate() {
            op = &op * &forms[i].pow(k);
        }
        (0..=w.m)
            .map(|j| {
                let mut entry = DiffPoly::zero(&space);
                for (beta, c) in op.terms() {
                    let v = DiffPoly::var(&space, &JetVar { j, alpha: beta.clone() })?;
                    entry = &entry + &v.scale(c);
                }
                Ok(entry)
            })
            .collect()
    };
    let mut acc = DiffPoly::zero(&space);
    for (c, set) in &w.terms {
        let mut rows = vec![row(&vec![0; p])?];
        for u in set.words() {
            rows.push(row(u.alpha())?);
        }
        acc = &acc + &DiffPoly::determinant(&rows).scale(c);
    }
    Ok(acc)
}

/// Writes a differential polynomial in the jets of `f_0, ..., f_m` as `Σ λ_V W_V` over
/// sets `V` of size `m`, by solving for the coefficients of every candidate `W_V`.
///
/// Candidates are read off the monomials of `target`; fails with [`Error::Refuted`] when
/// `target` is not in their span.
pub fn expand_in_pure_basis(target: &DiffPoly, m: usize) -> Result<Vec<(WordSet, Rat)>> {
    let space: &Arc<JetSpace> = target.space();
    if space.count() != m + 1 {
        return Err(Error::Arity { expected: m + 1, found: space.count() });
    }
    let p = space.p();
    let mut candidates: Vec<WordSet> = Vec::new();
    let mut seen = HashSet::new();
    for (factors, _) in target.monomials() {
        let mut words = Vec::new();
        for (var, k) in factors {
            if var.alpha.iter().any(|&a| a > 0) {
                for _ in 0..k {
                    words.push(Word::new(var.alpha.clone())?);
                }
            }
        }
        if words.len() != m {
            continue;
        }
        if let Ok(set) = WordSet::new(p, words) {
            if seen.insert(set.clone()) {
                candidates.push(set);
            }
        }
    }
    candidates.sort_by_key(|s| s.exponents());
    let fs: Vec<DiffPoly> = (0..=m)
        .map(|j| DiffPoly::var(space, &JetVar { j, alpha: vec![0; p] }))
        .collect::<Result<_>>()?;
    let columns: Vec<DiffPoly> = candidates
        .iter()
        .map(|set| eval_wronskian_expanded(set, &fs))
        .collect::<Result<_>>()?;
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut entries: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    for (col, w) in columns.iter().enumerate() {
        for (e, c) in w.poly().terms() {
            let n = index.len();
            let row = *index.entry(e.clone()).or_insert(n);
            entries.insert((row, col), c.clone());
        }
    }
    let mut rhs_entries = Vec::new();
    for (e, c) in target.poly().terms() {
        let n = index.len();
        let row = *index.entry(e.clone()).or_insert(n);
        rhs_entries.push((row, c.clone()));
    }
    let rows = index.len();
    let mut a = vec![vec![Rat::zero(); candidates.len()]; rows];
    for ((r, c), v) in entries {
        a[r][c] = v;
    }
    let mut b = vec![Rat::zero(); rows];
    for (r, v) in rhs_entries {
        b[r] = v;
    }
    if candidates.is_empty() {
        return if target.is_zero() {
            Ok(Vec::new())
        } else {
            Err(Error::Refuted("not a combination of pure Wronskians".into()))
        };
    }
    let x = solve_unique(&a, &b)?;
    Ok(candidates.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect())
}
