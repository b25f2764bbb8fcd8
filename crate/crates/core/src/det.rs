//! Commutative rings and exact determinants over them.

use num_traits::{One, Zero};

use crate::rational::Rat;

/// Minimal commutative ring interface used by the determinant routines.
///
/// Elements carry their own context (number of variables, jet space, truncation), hence
/// `zero_like`/`one_like` instead of associated constants.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;

    /// Determinant of a square matrix. Defaults to cofactor expansion.
    fn determinant(rows: &[Vec<Self>]) -> Self
    where
        Self: Sized,
    {
        det_cofactor(rows)
    }
}

/// Rings where exact division can be attempted.
pub trait ExactDiv: Ring {
    /// `Some(q)` with `q·divisor == self`, `None` if the division is not exact.
    fn div_exact(&self, divisor: &Self) -> Option<Self>;
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
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
        det_bareiss(rows)
    }
}

impl ExactDiv for Rat {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if Zero::is_zero(divisor) {
            None
        } else {
            Some(self / divisor)
        }
    }
}

fn check_square<R>(rows: &[Vec<R>]) -> usize {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    n
}

/// Cofactor expansion along rows with memoised minors.
///
/// `minors[S]` holds the determinant of the first `|S|` rows restricted to the column
/// subset `S`; this costs `n·2^(n-1)` ring products and never divides.
///
/// # Panics
///
/// If the matrix is empty or not square. An empty matrix has no element to take the
/// ring context from.
pub fn det_cofactor<R: Ring>(rows: &[Vec<R>]) -> R {
    let n = check_square(rows);
    assert!(n > 0, "determinant of an empty matrix");
    assert!(n < 26, "cofactor expansion limited to 25 rows");
    let one = rows[0][0].one_like();
    let mut minors: Vec<Option<R>> = vec![None; 1 << n];
    minors[0] = Some(one);
    // subsets in order of popcount
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for s in 1usize..(1 << n) {
        by_size[s.count_ones() as usize].push(s);
    }
    for (size, subsets) in by_size.iter().enumerate().skip(1) {
        let r = size - 1;
        for &s in subsets {
            let mut acc: Option<R> = None;
            let mut t = 0usize;
            for c in 0..n {
                if s & (1 << c) == 0 {
                    continue;
                }
                let entry = &rows[r][c];
                if !entry.is_zero_elem() {
                    if let Some(minor) = &minors[s & !(1 << c)] {
                        if !minor.is_zero_elem() {
                            let term = entry.times(minor);
                            let term = if (r + t) % 2 == 1 { term.negate() } else { term };
                            acc = Some(match acc {
                                Some(a) => a.plus(&term),
                                None => term,
                            });
                        }
                    }
                }
                t += 1;
            }
            minors[s] = acc;
        }
        // minors of the previous size are no longer needed
        if size >= 2 {
            for &s in &by_size[size - 1] {
                minors[s] = None;
            }
        }
    }
    minors[(1 << n) - 1]
        .take()
        .unwrap_or_else(|| rows[0][0].zero_like())
}

/// Fraction-free Gaussian elimination (Bareiss); every division is exact.
pub fn det_bareiss<R: ExactDiv>(rows: &[Vec<R>]) -> R {
    let n = check_square(rows);
    assert!(n > 0, "determinant of an empty matrix");
    let mut a: Vec<Vec<R>> = rows.to_vec();
    let mut negate = false;
    let mut prev = a[0][0].one_like();
    for k in 0..n - 1 {
        if a[k][k].is_zero_elem() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero_elem()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return a[0][0].zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division must be exact over an integral domain");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.negate()
    } else {
        d
    }
}
