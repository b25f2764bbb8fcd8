//! Derivatives of products and compositions.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::det::Ring;
use crate::error::{Error, Result};
use crate::linalg::solve_unique;
use crate::polyring::{Polynomial, TruncatedSeries};
use crate::rational::{int, Rat};
use crate::wordcomb::Word;

/// Longest word accepted by [`infer_composition_constants`].
pub const MAX_COMPOSITION_WORD_LEN: u32 = 4;

/// All exponent vectors `a ≤ alpha` componentwise, including `0` and `alpha`.
pub(crate) fn sub_exponents(alpha: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=a).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// `C_{a,b} = Π_i C(a_i + b_i, a_i)`.
pub fn leibniz_constant(a: &[u32], b: &[u32]) -> BigInt {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| binomial(BigInt::from(x + y), BigInt::from(x)))
        .product()
}

/// `Σ_{u_1·u_2 = u} C_{u_1,u_2} ∂_{u_1} f · ∂_{u_2} g` over ordered decompositions, the
/// empty word allowed on either side.
pub fn leibniz_expand(f: &Polynomial, g: &Polynomial, u: &Word) -> Polynomial {
    let alpha = u.alpha();
    let mut acc = Polynomial::zero(f.nvars());
    for a in sub_exponents(alpha) {
        let b: Vec<u32> = alpha.iter().zip(&a).map(|(x, y)| x - y).collect();
        let c = Rat::from_integer(leibniz_constant(&a, &b));
        let term = &f.partial_derivative_exp(&a) * &g.partial_derivative_exp(&b);
        acc = &acc + &term.scale(&c);
    }
    acc
}

fn check_phi(phi: &[TruncatedSeries], arity: usize, needed: u32) -> Result<(usize, usize)> {
    if phi.len() != arity || arity == 0 {
        return Err(Error::Arity { expected: arity, found: phi.len() });
    }
    let (p, nvars) = (phi[0].p(), phi[0].nvars());
    if phi.iter().any(|s| s.p() != p || s.nvars() != nvars) {
        return Err(Error::Invalid("components of φ live in different rings".into()));
    }
    if let Some(short) = phi.iter().find(|s| s.trunc() < needed) {
        return Err(Error::Precision { needed, available: short.trunc() });
    }
    Ok((p, nvars))
}

/// `f(φ_1, ..., φ_n)` truncated at total degree `trunc`.
pub fn compose_series(f: &Polynomial, phi: &[TruncatedSeries], trunc: u32) -> Result<TruncatedSeries> {
    let (p, nvars) = check_phi(phi, f.nvars(), trunc)?;
    let phi: Vec<TruncatedSeries> = phi.iter().map(|s| s.truncate(trunc)).collect();
    let mut powers: Vec<Vec<TruncatedSeries>> = phi.iter().map(|s| vec![s.one_like()]).collect();
    let mut acc = TruncatedSeries::new(Polynomial::zero(nvars), p, trunc);
    for (e, c) in f.terms() {
        let mut t = TruncatedSeries::new(Polynomial::constant(nvars, c.clone()), p, trunc);
        for (j, &k) in e.iter().enumerate() {
            while powers[j].len() <= k as usize {
                let next = powers[j].last().expect("nonempty").times(&phi[j]);
                powers[j].push(next);
            }
            if k > 0 {
                t = t.times(&powers[j][k as usize]);
            }
        }
        acc = acc.plus(&t);
    }
    Ok(acc)
}

/// `∂_u (f ∘ φ)` by the first-order chain rule applied one letter at a time.
///
/// Writing `u = u'·i`, `∂_u(f∘φ) = ∂_{u'} Σ_j (∂_j f ∘ φ)·∂_i φ_j`, and the outer
/// derivative is distributed with the Leibniz rule, recursing on `∂_j f`. This never
/// differentiates a composed series, so it is independent from composing first.
///
/// Each `φ_j` must be known to order `ℓ(u) + trunc`; the result is known to `trunc`.
pub fn derivative_of_composition(
    f: &Polynomial,
    phi: &[TruncatedSeries],
    u: &Word,
    trunc: u32,
) -> Result<TruncatedSeries> {
    check_phi(phi, f.nvars(), u.len() + trunc)?;
    if u.p() != phi[0].p() {
        return Err(Error::DimensionMismatch { expected: phi[0].p(), found: u.p() });
    }
    chain_rule(f, phi, u.alpha(), trunc)
}

fn chain_rule(f: &Polynomial, phi: &[TruncatedSeries], alpha: &[u32], trunc: u32) -> Result<TruncatedSeries> {
    let Some(i) = alpha.iter().rposition(|&a| a > 0) else {
        return compose_series(f, phi, trunc);
    };
    let mut rest = alpha.to_vec();
    rest[i] -= 1;
    let (p, nvars) = (phi[0].p(), phi[0].nvars());
    let mut acc = TruncatedSeries::new(Polynomial::zero(nvars), p, trunc);
    for (j, phi_j) in phi.iter().enumerate() {
        let df = f.derivative_var(j);
        if df.is_zero() {
            continue;
        }
        for a in sub_exponents(&rest) {
            let mut b: Vec<u32> = rest.iter().zip(&a).map(|(x, y)| x - y).collect();
            let c = Rat::from_integer(leibniz_constant(&a, &b));
            b[i] += 1;
            let inner = chain_rule(&df, phi, &a, trunc)?;
            let dphi = TruncatedSeries::new(phi_j.poly().partial_derivative_exp(&b), p, trunc);
            acc = acc.plus(&inner.times(&dphi).scale(&c));
        }
    }
    Ok(acc)
}

/// Unordered decompositions of `alpha` into nonzero parts; each decomposition is listed
/// with its parts in decreasing lexicographic order.
pub fn multiset_partitions(alpha: &[u32]) -> Vec<Vec<Vec<u32>>> {
    fn rec(rest: &[u32], max: &[u32], cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if rest.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        let mut parts = sub_exponents(rest);
        parts.sort_by(|a, b| b.cmp(a));
        for v in parts {
            if v.iter().all(|&x| x == 0) || v.as_slice() > max {
                continue;
            }
            let next: Vec<u32> = rest.iter().zip(&v).map(|(x, y)| x - y).collect();
            cur.push(v.clone());
            rec(&next, &v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if alpha.iter().any(|&x| x > 0) {
        rec(alpha, alpha, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositionTerm {
    pub parts: Vec<Word>,
    #[serde(with = "crate::rational::serde_rat")]
    pub constant: Rat,
}

/// The constants `D_{u_1, ..., u_k}(n)` of the composition formula for one word `u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositionConstants {
    pub p: usize,
    pub n: usize,
    pub word: Word,
    pub terms: Vec<CompositionTerm>,
}

/// `Σ_{i_1..i_k} (∂_{i_1..i_k} f)(x) Π_j c_j(i_j)` where `dphi[j][i]` is `∂_{u_j} φ_i` and
/// `eval(g)` evaluates a derivative of `f` composed with `φ`.
fn block_sum<T: Ring>(
    f: &Polynomial,
    dphi: &[Vec<T>],
    zero: &T,
    mut eval: impl FnMut(&Polynomial) -> Result<T>,
) -> Result<T> {
    let n = f.nvars();
    let k = dphi.len();
    let mut acc = zero.clone();
    let mut idx = vec![0usize; k];
    loop {
        let mut multi = vec![0u32; n];
        for &i in &idx {
            multi[i] += 1;
        }
        let df = f.partial_derivative_exp(&multi);
        if !df.is_zero() {
            let mut t = eval(&df)?;
            for (j, &i) in idx.iter().enumerate() {
                t = t.times(&dphi[j][i]);
            }
            acc = acc.plus(&t);
        }
        // odometer over [n]^k
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(acc);
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

impl CompositionConstants {
    /// `∂_u (f∘φ)` from the table; `φ_j` must be known to `ℓ(u) + trunc`.
    pub fn apply(&self, f: &Polynomial, phi: &[TruncatedSeries], trunc: u32) -> Result<TruncatedSeries> {
        let (p, nvars) = check_phi(phi, self.n, self.word.len() + trunc)?;
        if f.nvars() != self.n {
            return Err(Error::Arity { expected: self.n, found: f.nvars() });
        }
        let zero = TruncatedSeries::new(Polynomial::zero(nvars), p, trunc);
        let mut acc = zero.clone();
        for term in &self.terms {
            let dphi: Vec<Vec<TruncatedSeries>> = term
                .parts
                .iter()
                .map(|w| {
                    phi.iter()
                        .map(|s| TruncatedSeries::new(s.poly().partial_derivative(w), p, trunc))
                        .collect()
                })
                .collect();
            let sum = block_sum(f, &dphi, &zero, |g| compose_series(g, phi, trunc))?;
            acc = acc.plus(&sum.scale(&term.constant));
        }
        Ok(acc)
    }
}

fn random_poly(rng: &mut ChaCha8Rng, p: usize, degree: u32) -> Polynomial {
    let mut terms = Vec::new();
    for e in sub_exponents(&vec![degree; p]) {
        if e.iter().sum::<u32>() <= degree {
            terms.push((e, int(rng.gen_range(-3..=3))));
        }
    }
    Polynomial::from_terms(p, terms)
}

/// Determines the constants `D` of the composition formula for the word `u` by exact
/// linear solving.
///
/// Every unordered decomposition `{u_1, ..., u_k}` of `u` is an unknown. Each test pair
/// `(f, φ)`, with `f` a monomial in `n` variables and the `φ_j` random integer polynomials
/// in `p` variables, contributes one equation: both sides of the formula evaluated at the
/// origin, the left side by composing and differentiating.
pub fn infer_composition_constants(p: usize, n: usize, u: &Word) -> Result<CompositionConstants> {
    if u.p() != p {
        return Err(Error::DimensionMismatch { expected: p, found: u.p() });
    }
    if n == 0 {
        return Err(Error::Invalid("f needs at least one variable".into()));
    }
    let len = u.len();
    if len > MAX_COMPOSITION_WORD_LEN {
        return Err(Error::Invalid(format!(
            "words longer than {MAX_COMPOSITION_WORD_LEN} are not supported"
        )));
    }
    let partitions = multiset_partitions(u.alpha());
    let unknowns = partitions.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + len as u64);
    let origin = vec![Rat::zero(); p];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for trial in 0..(3 * unknowns + 6) {
        // f = t^c with |c| cycling through 1..=ℓ(u)
        let deg = (trial as u32 % len) + 1;
        let mut c = vec![0u32; n];
        for _ in 0..deg {
            c[rng.gen_range(0..n)] += 1;
        }
        let f = Polynomial::monomial(c, Rat::one());
        let phi: Vec<Polynomial> = (0..n).map(|_| random_poly(&mut rng, p, len)).collect();
        let base: Vec<Rat> = phi.iter().map(|g| g.eval(&origin)).collect();
        let lhs = f.compose(&phi).partial_derivative(u).eval(&origin);
        let row = partitions
            .iter()
            .map(|parts| {
                let dphi: Vec<Vec<Rat>> = parts
                    .iter()
                    .map(|a| phi.iter().map(|g| g.partial_derivative_exp(a).eval(&origin)).collect())
                    .collect();
                block_sum(&f, &dphi, &Rat::zero(), |g| Ok(g.eval(&base)))
            })
            .collect::<Result<Vec<Rat>>>()?;
        rows.push(row);
        rhs.push(lhs);
    }
    let solution = solve_unique(&rows, &rhs)?;
    let terms = partitions
        .into_iter()
        .zip(solution)
        .map(|(parts, constant)| {
            let parts = parts.into_iter().map(Word::new).collect::<Result<Vec<_>>>()?;
            Ok(CompositionTerm { parts, constant })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompositionConstants { p, n, word: u.clone(), terms })
}

impl CompositionConstants {
    /// Whether all constants are nonnegative integers.
    pub fn all_natural(&self) -> bool {
        self.terms.iter().all(|t| t.constant.denom().is_one() && t.constant >= Rat::zero())
    }
}
