//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wronski::{Polynomial, Rat, WordSet};

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sign of a permutation by counting inversions.
fn sign(perm: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `Σ_σ sgn(σ) Π_i a_{i,σ(i)}`.
pub fn perm_det_rat(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut acc = Rat::zero();
    for perm in permutations(n) {
        let mut t = int(sign(&perm));
        for (i, &j) in perm.iter().enumerate() {
            t *= &a[i][j];
        }
        acc += t;
    }
    acc
}

pub fn perm_det_poly(a: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = a.len();
    let mut acc = Polynomial::zero(nvars);
    for perm in permutations(n) {
        let mut t = Polynomial::constant(nvars, int(sign(&perm)));
        for (i, &j) in perm.iter().enumerate() {
            t = &t * &a[i][j];
        }
        acc = &acc + &t;
    }
    acc
}

/// Derivative by repeated single-variable differentiation, letter by letter.
pub fn diff_word(f: &Polynomial, alpha: &[u32]) -> Polynomial {
    let mut g = f.clone();
    for (i, &a) in alpha.iter().enumerate() {
        for _ in 0..a {
            g = g.derivative_var(i);
        }
    }
    g
}

/// Wronskian with rows `f_j` and `∂_u f_j`, `u` in the order of the set.
pub fn wronskian_oracle(set: &WordSet, fs: &[Polynomial]) -> Polynomial {
    let nvars = fs[0].nvars();
    let mut rows = vec![fs.to_vec()];
    for u in set.words() {
        rows.push(fs.iter().map(|f| diff_word(f, u.alpha())).collect());
    }
    perm_det_poly(&rows, nvars)
}

/// `det[x_ℓ^{α(u)}]` over `u ∈ {∅} ∪ U`.
pub fn vandermonde_oracle(set: &WordSet, cols: &[Vec<Rat>]) -> Rat {
    let mut rows = vec![vec![Rat::one(); cols.len()]];
    for u in set.words() {
        rows.push(
            cols.iter()
                .map(|x| x.iter().zip(u.alpha()).fold(Rat::one(), |acc, (xi, &a)| acc * num_traits::pow(xi.clone(), a as usize)))
                .collect(),
        );
    }
    perm_det_rat(&rows)
}

fn closed_under_subwords(set: &BTreeSet<Vec<u32>>) -> bool {
    set.iter().all(|w| {
        (0..w.len()).filter(|&i| w[i] > 0).all(|i| {
            let mut v = w.clone();
            v[i] -= 1;
            v.iter().all(|&x| x == 0) || set.contains(&v)
        })
    })
}

/// Order ideals of `ℕ^p ∖ {0}` of size `m`, grown one element at a time.
pub fn ideals_bfs(p: usize, m: usize) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let mut level: HashSet<BTreeSet<Vec<u32>>> = HashSet::new();
    level.insert(BTreeSet::new());
    for _ in 0..m {
        let mut next = HashSet::new();
        for ideal in &level {
            let mut cands: BTreeSet<Vec<u32>> = BTreeSet::new();
            for i in 0..p {
                let mut e = vec![0; p];
                e[i] = 1;
                cands.insert(e);
            }
            for w in ideal {
                for i in 0..p {
                    let mut v = w.clone();
                    v[i] += 1;
                    cands.insert(v);
                }
            }
            for c in cands {
                if ideal.contains(&c) {
                    continue;
                }
                let mut bigger = ideal.clone();
                bigger.insert(c);
                if closed_under_subwords(&bigger) {
                    next.insert(bigger);
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

/// Same as [`ideals_bfs`] by testing every `m`-subset of the words of length `≤ m`.
pub fn ideals_subsets(p: usize, m: usize) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let mut words = Vec::new();
    let mut stack = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == p {
            let total: u32 = prefix.iter().sum();
            if total > 0 {
                words.push(prefix);
            }
            continue;
        }
        let used: u32 = prefix.iter().sum();
        for a in 0..=(m as u32 - used) {
            let mut v = prefix.clone();
            v.push(a);
            stack.push(v);
        }
    }
    let mut out = BTreeSet::new();
    let n = words.len();
    let mut idx: Vec<usize> = (0..m).collect();
    if m > n {
        return out;
    }
    loop {
        let set: BTreeSet<Vec<u32>> = idx.iter().map(|&i| words[i].clone()).collect();
        if closed_under_subwords(&set) {
            out.insert(set);
        }
        let Some(i) = (0..m).rev().find(|&i| idx[i] < n - m + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn as_exponent_set(u: &WordSet) -> BTreeSet<Vec<u32>> {
    u.exponents().into_iter().collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Multivariate Faà di Bruno constant `α!/(Π_j a_j! · Π_parts mult!)` of the multiset
/// partition `parts` of `α`.
pub fn d_constant(alpha: &[u32], parts: &[Vec<u32>]) -> Rat {
    let num: BigInt = alpha.iter().map(|&a| factorial(a)).product();
    let mut den: BigInt = parts.iter().flat_map(|a| a.iter().map(|&x| factorial(x))).product();
    let mut sorted = parts.to_vec();
    sorted.sort();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        den *= factorial((j - i) as u32);
        i = j;
    }
    Rat::new(num, den)
}

/// Rank by plain Gaussian elimination on the coefficient matrix.
pub fn rank_of(fs: &[Polynomial]) -> usize {
    let mut monos: BTreeSet<Vec<u32>> = BTreeSet::new();
    for f in fs {
        for (e, _) in f.terms() {
            monos.insert(e.clone());
        }
    }
    let monos: Vec<Vec<u32>> = monos.into_iter().collect();
    let mut rows: Vec<Vec<Rat>> = fs.iter().map(|f| monos.iter().map(|e| f.coeff(e)).collect()).collect();
    let mut rank = 0;
    for col in 0..monos.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rank][col];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Random polynomial in `p` variables of total degree `≤ deg`, coefficients in
/// `-range..=range`, each monomial kept with probability `density`.
pub fn random_poly(rng: &mut ChaCha8Rng, p: usize, deg: u32, range: i64, density: f64) -> Polynomial {
    let mut terms = Vec::new();
    let mut stack = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == p {
            if rng.gen_bool(density) {
                terms.push((prefix, int(rng.gen_range(-range..=range))));
            }
            continue;
        }
        let used: u32 = prefix.iter().sum();
        for a in 0..=(deg - used) {
            let mut v: Vec<u32> = prefix.clone();
            v.push(a);
            stack.push(v);
        }
    }
    Polynomial::from_terms(p, terms)
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rat>> {
    loop {
        let a: Vec<Vec<Rat>> = (0..n)
            .map(|_| (0..n).map(|_| Rat::new(BigInt::from(rng.gen_range(-4..=4)), BigInt::from(rng.gen_range(1..=3)))).collect())
            .collect();
        if !perm_det_rat(&a).is_zero() {
            return a;
        }
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("finite")
}
