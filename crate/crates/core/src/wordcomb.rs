//! Words, word sets and their combinatorics.
//!
//! A word over the alphabet `{1, ..., p}` is written in lexicographic order, so it is
//! determined by its occurrence counts. We store words as exponent vectors
//! `α ∈ ℕ^p ∖ {0}`; the subword relation is then the componentwise order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Default cap on the number of sets produced by [`enumerate_full_sets`].
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word {
    alpha: Vec<u32>,
}

impl Word {
    pub fn new(alpha: Vec<u32>) -> Result<Self> {
        if alpha.iter().all(|&a| a == 0) {
            return Err(Error::EmptyWord);
        }
        Ok(Word { alpha })
    }

    /// Builds a word from its letters, 1-based. Order of the letters is irrelevant.
    pub fn from_letters(p: usize, letters: &[usize]) -> Result<Self> {
        let mut alpha = vec![0u32; p];
        for &l in letters {
            if l == 0 || l > p {
                return Err(Error::Invalid(format!("letter {l} outside alphabet 1..{p}")));
            }
            alpha[l - 1] += 1;
        }
        Word::new(alpha)
    }

    /// The one-letter word `i` (1-based).
    pub fn letter(p: usize, i: usize) -> Self {
        let mut alpha = vec![0; p];
        alpha[i - 1] = 1;
        Word { alpha }
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn p(&self) -> usize {
        self.alpha.len()
    }

    pub fn len(&self) -> u32 {
        self.alpha.iter().sum()
    }

    /// Letters in lexicographic order, 1-based.
    pub fn letters(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i + 1, a as usize))
            .collect()
    }

    pub fn is_subword_of(&self, other: &Word) -> bool {
        self.alpha.iter().zip(&other.alpha).all(|(a, b)| a <= b)
    }

    /// Concatenation; for lex-sorted words this adds exponent vectors.
    pub fn concat(&self, other: &Word) -> Word {
        Word {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
        }
    }

    /// The word with one occurrence of letter `i` (1-based) removed, or `None` when
    /// that leaves the empty word or the letter does not occur.
    pub fn remove_letter(&self, i: usize) -> Option<Word> {
        if self.alpha[i - 1] == 0 {
            return None;
        }
        let mut alpha = self.alpha.clone();
        alpha[i - 1] -= 1;
        Word::new(alpha).ok()
    }

    pub fn append_letter(&self, i: usize) -> Word {
        let mut alpha = self.alpha.clone();
        alpha[i - 1] += 1;
        Word { alpha }
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;
    fn try_from(alpha: Vec<u32>) -> Result<Self> {
        Word::new(alpha)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Vec<u32> {
        w.alpha
    }
}

/// Canonical order: by length, then lexicographically on the letter strings
/// (`11 < 12 < 22`), i.e. decreasing lexicographic order of exponent vectors.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| other.alpha.cmp(&self.alpha))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.p() > 9 { "." } else { "" };
        let letters: Vec<String> = self.letters().iter().map(|l| l.to_string()).collect();
        write!(f, "{}", letters.join(sep))
    }
}

/// All words of length exactly `len`, in canonical order.
pub fn words_of_length(p: usize, len: u32) -> Vec<Word> {
    fn rec(p: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Word>) {
        if i + 1 == p {
            cur.push(left);
            out.push(Word { alpha: cur.clone() });
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(p, i + 1, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 && p > 0 {
        rec(p, 0, len, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

/// Characteristic sequence `(n_1, ..., n_k)`: `n_j` counts the words of length `j`.
///
/// Ordered as in the filtration of geometric Wronskians: lower order first, and at equal
/// order a lexicographically *greater* sequence is *smaller*.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharSequence(pub Vec<u32>);

impl CharSequence {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&n| n as u64).sum()
    }

    pub fn weight(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &n)| (j as u64 + 1) * n as u64)
            .sum()
    }

    /// `n_j ≤ C(p+j-1, p-1)` for all `j`, and the last entry is positive.
    pub fn is_feasible(&self, p: usize) -> bool {
        self.0.last().is_some_and(|&n| n > 0)
            && self
                .0
                .iter()
                .enumerate()
                .all(|(j, &n)| n as u128 <= words_of_length_count(p, j as u32 + 1))
    }
}

impl Ord for CharSequence {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_char_sequences(self, other)
    }
}

impl PartialOrd for CharSequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn compare_char_sequences(a: &CharSequence, b: &CharSequence) -> Ordering {
    a.order().cmp(&b.order()).then_with(|| b.0.cmp(&a.0))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SetStats {
    pub m: usize,
    pub k: u32,
    pub w: u64,
    pub beta: Vec<u64>,
    pub charseq: CharSequence,
}

/// A finite set of distinct nonempty words, kept in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WordSet {
    p: usize,
    words: Vec<Word>,
}

impl WordSet {
    pub fn new(p: usize, mut words: Vec<Word>) -> Result<Self> {
        if p == 0 {
            return Err(Error::Invalid("alphabet must have at least one letter".into()));
        }
        for w in &words {
            if w.p() != p {
                return Err(Error::DimensionMismatch { expected: p, found: w.p() });
            }
        }
        words.sort();
        if let Some(pair) = words.windows(2).find(|pair| pair[0] == pair[1]) {
            return Err(Error::DuplicateWord(pair[0].to_string()));
        }
        Ok(WordSet { p, words })
    }

    /// Word set from exponent vectors.
    pub fn from_exponents(p: usize, alphas: &[Vec<u32>]) -> Result<Self> {
        let words = alphas.iter().map(|a| Word::new(a.clone())).collect::<Result<_>>()?;
        WordSet::new(p, words)
    }

    /// Word set from letter lists such as `[[1], [2], [1, 2]]`.
    pub fn from_letter_lists(p: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let words = lists.iter().map(|l| Word::from_letters(p, l)).collect::<Result<_>>()?;
        WordSet::new(p, words)
    }

    pub fn empty(p: usize) -> Self {
        WordSet { p, words: Vec::new() }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn order(&self) -> u32 {
        self.words.last().map_or(0, Word::len)
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.len() as u64).sum()
    }

    pub fn beta(&self) -> Vec<u64> {
        let mut beta = vec![0u64; self.p];
        for w in &self.words {
            for (b, &a) in beta.iter_mut().zip(w.alpha()) {
                *b += a as u64;
            }
        }
        beta
    }

    pub fn charseq(&self) -> CharSequence {
        let mut n = vec![0u32; self.order() as usize];
        for w in &self.words {
            n[w.len() as usize - 1] += 1;
        }
        CharSequence(n)
    }

    pub fn stats(&self) -> SetStats {
        SetStats {
            m: self.len(),
            k: self.order(),
            w: self.weight(),
            beta: self.beta(),
            charseq: self.charseq(),
        }
    }

    /// Whether some ordering `u_1, ..., u_m` has `ℓ(u_i) ≤ i`.
    ///
    /// Sorting by length is an optimal witness: if any ordering works, moving a shorter
    /// word before a longer one never breaks the bound (the shorter word moves to a later
    /// slot only when it swaps with a longer word, whose old slot already fit it).
    pub fn is_admissible(&self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, w)| w.len() as usize <= i + 1)
    }

    /// Closed under taking nonempty subwords.
    ///
    /// Checking the immediate subwords (one letter removed) suffices by induction on length.
    pub fn is_full(&self) -> bool {
        self.words.iter().all(|w| {
            (1..=self.p).all(|i| match w.remove_letter(i) {
                Some(sub) => self.contains(&sub),
                None => true,
            })
        })
    }

    /// Whether every letter `1..=p` occurs as a one-letter word.
    pub fn contains_all_letters(&self) -> bool {
        (1..=self.p).all(|i| self.contains(&Word::letter(self.p, i)))
    }

    /// Letters (1-based) occurring in no word of the set.
    pub fn missing_letters(&self) -> Vec<usize> {
        (1..=self.p)
            .filter(|&i| self.words.iter().all(|w| w.alpha()[i - 1] == 0))
            .collect()
    }

    pub fn exponents(&self) -> Vec<Vec<u32>> {
        self.words.iter().map(|w| w.alpha().to_vec()).collect()
    }
}

impl fmt::Display for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct WordSetRepr {
    words: Vec<Word>,
    #[serde(default, skip_deserializing)]
    stats: Option<SetStats>,
}

impl Serialize for WordSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordSetRepr { words: self.words.clone(), stats: Some(self.stats()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WordSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = WordSetRepr::deserialize(d)?;
        let p = repr
            .words
            .first()
            .map(Word::p)
            .ok_or_else(|| serde::de::Error::custom("cannot infer alphabet of an empty word set"))?;
        WordSet::new(p, repr.words).map_err(serde::de::Error::custom)
    }
}

pub fn set_stats(p: usize, words: Vec<Word>) -> Result<WordSet> {
    WordSet::new(p, words)
}

/// All full sets of size `m` over `p` letters (order ideals of `ℕ^p ∖ {0}`).
pub fn enumerate_full_sets(p: usize, m: usize) -> Result<Vec<WordSet>> {
    enumerate_full_sets_capped(p, m, DEFAULT_ENUMERATION_CAP)
}

/// Like [`enumerate_full_sets`] with an explicit cap on the number of sets.
///
/// Each ideal is produced once, by adding its words in canonical order: canonical order
/// is a linear extension of the subword order, so every prefix is again an ideal, and
/// requiring each new word to exceed the previous one fixes the insertion sequence.
pub fn enumerate_full_sets_capped(p: usize, m: usize, cap: usize) -> Result<Vec<WordSet>> {
    if p == 0 {
        return Err(Error::Invalid("alphabet must have at least one letter".into()));
    }
    let mut out = Vec::new();
    let mut state = IdealState { p, words: Vec::new(), members: HashSet::new() };
    state.extend(m, &mut out, cap)?;
    Ok(out)
}

struct IdealState {
    p: usize,
    words: Vec<Word>,
    members: HashSet<Word>,
}

impl IdealState {
    fn addable(&self, w: &Word) -> bool {
        !self.members.contains(w)
            && (1..=self.p).all(|i| match w.remove_letter(i) {
                Some(sub) => self.members.contains(&sub),
                None => true,
            })
    }

    fn extend(&mut self, m: usize, out: &mut Vec<WordSet>, cap: usize) -> Result<()> {
        if self.words.len() == m {
            if out.len() == cap {
                return Err(Error::EnumerationTooLarge { cap });
            }
            out.push(WordSet { p: self.p, words: self.words.clone() });
            return Ok(());
        }
        let mut candidates = BTreeSet::new();
        for i in 1..=self.p {
            candidates.insert(Word::letter(self.p, i));
            for w in &self.words {
                candidates.insert(w.append_letter(i));
            }
        }
        let last = self.words.last().cloned();
        for c in candidates {
            if last.as_ref().is_some_and(|l| c <= *l) || !self.addable(&c) {
                continue;
            }
            self.members.insert(c.clone());
            self.words.push(c);
            let res = self.extend(m, out, cap);
            let c = self.words.pop().expect("pushed above");
            self.members.remove(&c);
            res?;
        }
        Ok(())
    }
}

pub(crate) fn words_of_length_count(p: usize, len: u32) -> u128 {
    if p == 0 {
        return 0;
    }
    binomial(p as u128 + len as u128 - 1, p as u128 - 1)
}

/// `|U_n| = Σ_{i=1}^{n} C(p+i-1, p-1)`.
pub fn full_set_size(p: usize, n: u32) -> u128 {
    (1..=n).map(|i| words_of_length_count(p, i)).sum()
}

/// `w(U_n) = Σ_{i=1}^{n} i·C(p+i-1, p-1)`.
pub fn full_set_weight(p: usize, n: u32) -> u128 {
    (1..=n).map(|i| i as u128 * words_of_length_count(p, i)).sum()
}

/// `U_n`: all words of length at most `n`.
pub fn canonical_full_set(p: usize, n: u32) -> Result<WordSet> {
    let words = (1..=n).flat_map(|l| words_of_length(p, l)).collect();
    WordSet::new(p, words)
}

/// Greedy characteristic sequence of minimal weight among sets of size `m`: fill the
/// lengths `1, 2, ...` with as many words as exist.
pub fn min_weight_for_size(p: usize, m: u128) -> (CharSequence, u128) {
    let mut left = m;
    let mut seq = Vec::new();
    let mut weight = 0u128;
    let mut j = 1u32;
    while left > 0 {
        let n = left.min(words_of_length_count(p, j));
        seq.push(n as u32);
        weight += j as u128 * n;
        left -= n;
        j += 1;
    }
    (CharSequence(seq), weight)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoliationRatio {
    pub m: u128,
    pub r: u128,
    pub w_min: u128,
    #[serde(with = "crate::rational::serde_rat")]
    pub ratio: Rat,
}

/// `r(n)(m(n)+1)/w_min(n)` where `m(n) = |U_n|` and `r(n)` is the least integer with
/// `C·r^{p+1} > m(n)`.
pub fn foliation_ratio(p: usize, c: u128, n: u32) -> Result<FoliationRatio> {
    if p == 0 || c == 0 || n == 0 {
        return Err(Error::Invalid("p, C and n must be positive".into()));
    }
    let m = full_set_size(p, n);
    let mut r: u128 = 1;
    while c * r.pow(p as u32 + 1) <= m {
        r += 1;
    }
    let (_, w_min) = min_weight_for_size(p, m);
    let ratio = Rat::new(BigInt::from(r * (m + 1)), BigInt::from(w_min));
    Ok(FoliationRatio { m, r, w_min, ratio })
}

/// `w(U_n) / (n·|U_n|)`, which tends to `p/(p+1)`.
pub fn weight_density(p: usize, n: u32) -> Rat {
    Rat::new(
        BigInt::from(full_set_weight(p, n)),
        BigInt::from(n as u128 * full_set_size(p, n)),
    )
}
