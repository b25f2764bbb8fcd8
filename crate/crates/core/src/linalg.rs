//! Exact linear algebra over ℚ.

use num_traits::{One, Zero};

use crate::det::Ring;
use crate::error::{Error, Result};
use crate::rational::Rat;

pub type RatMatrix = Vec<Vec<Rat>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut RatMatrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = Rat::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<Rat>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// The unique solution of `a·x = b`.
///
/// Fails with [`Error::Underdetermined`] when `a` lacks full column rank and with
/// [`Error::Refuted`] when the system is inconsistent.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    assert_eq!(a.len(), b.len());
    let unknowns = a.first().map_or(0, Vec::len);
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, y)| {
            let mut row = row.clone();
            row.push(y.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&unknowns) {
        return Err(Error::Refuted("inconsistent linear system".into()));
    }
    if pivots.len() < unknowns {
        return Err(Error::Underdetermined { rank: pivots.len(), unknowns });
    }
    Ok((0..unknowns).map(|i| aug[i][unknowns].clone()).collect())
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn determinant(a: &[Vec<Rat>]) -> Rat {
    if a.is_empty() {
        return Rat::one();
    }
    Rat::determinant(a)
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> RatMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).fold(Rat::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}
