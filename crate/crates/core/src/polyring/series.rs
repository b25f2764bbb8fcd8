use std::fmt;

use crate::det::Ring;
use crate::error::{Error, Result};
use crate::polyring::{ExponentOrder, Polynomial};
use crate::rational::Rat;
use crate::wordcomb::Word;

/// A power series in the germ variables known up to a total degree.
///
/// Terms whose germ degree exceeds `trunc` are discarded. Coefficients may involve the
/// parameter variables of the underlying [`Polynomial`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    poly: Polynomial,
    p: usize,
    trunc: u32,
}

impl TruncatedSeries {
    pub fn new(poly: Polynomial, p: usize, trunc: u32) -> Self {
        assert!(p <= poly.nvars(), "germ variables exceed the variable count");
        let poly = poly.filter_terms(|e| e[..p].iter().sum::<u32>() <= trunc);
        TruncatedSeries { poly, p, trunc }
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn into_poly(self) -> Polynomial {
        self.poly
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    /// Re-truncates at a lower order.
    pub fn truncate(&self, trunc: u32) -> Self {
        TruncatedSeries::new(self.poly.clone(), self.p, trunc.min(self.trunc))
    }

    /// `∂_u`; the result is known up to `trunc - ℓ(u)`.
    pub fn partial_derivative(&self, u: &Word) -> Result<Self> {
        let len = u.len();
        if len > self.trunc {
            return Err(Error::Precision { needed: len, available: self.trunc });
        }
        Ok(TruncatedSeries::new(self.poly.partial_derivative(u), self.p, self.trunc - len))
    }

    /// Value at the origin of the germ variables (a polynomial in the parameters).
    pub fn value_at_origin(&self) -> Polynomial {
        self.poly.germ_coefficient(&vec![0; self.p])
    }

    pub fn series_order(&self, order: ExponentOrder) -> Option<Vec<u32>> {
        self.poly.series_order(self.p, order)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Equality up to the smaller of the two truncation orders.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        let t = self.trunc.min(other.trunc);
        self.truncate(t).poly == other.truncate(t).poly
    }

    fn combine(&self, other: &Self, poly: Polynomial) -> Self {
        assert_eq!(self.p, other.p, "germ dimension mismatch");
        TruncatedSeries::new(poly, self.p, self.trunc.min(other.trunc))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncatedSeries { poly: self.poly.scale(c), p: self.p, trunc: self.trunc }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.times(self);
        }
        acc
    }
}

impl Ring for TruncatedSeries {
    fn zero_like(&self) -> Self {
        TruncatedSeries { poly: Polynomial::zero(self.nvars()), p: self.p, trunc: self.trunc }
    }
    fn one_like(&self) -> Self {
        TruncatedSeries { poly: Polynomial::one(self.nvars()), p: self.p, trunc: self.trunc }
    }
    fn is_zero_elem(&self) -> bool {
        self.poly.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.combine(other, &self.poly + &other.poly)
    }
    fn minus(&self, other: &Self) -> Self {
        self.combine(other, &self.poly - &other.poly)
    }
    fn times(&self, other: &Self) -> Self {
        // truncate factors first so the product never materialises discarded terms
        let t = self.trunc.min(other.trunc);
        let a = self.truncate(t);
        let b = other.truncate(t);
        let p = self.p;
        let mut terms = Vec::new();
        for (e1, c1) in a.poly.terms() {
            let d1: u32 = e1[..p].iter().sum();
            for (e2, c2) in b.poly.terms() {
                let d2: u32 = e2[..p].iter().sum();
                if d1 + d2 > t {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                terms.push((e, c1 * c2));
            }
        }
        self.combine(other, Polynomial::from_terms(self.nvars(), terms))
    }
    fn negate(&self) -> Self {
        TruncatedSeries { poly: -&self.poly, p: self.p, trunc: self.trunc }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(|z|^{})", self.poly, self.trunc + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn truncation_and_derivative_precision() {
        let z = Polynomial::var(1, 0);
        let s = TruncatedSeries::new(&z + &z.pow(3), 1, 2);
        assert_eq!(s.poly(), &z);
        let d = s.partial_derivative(&Word::new(vec![1]).unwrap()).unwrap();
        assert_eq!(d.trunc(), 1);
        assert_eq!(d.poly(), &Polynomial::one(1));
        assert_eq!(
            s.partial_derivative(&Word::new(vec![3]).unwrap()),
            Err(Error::Precision { needed: 3, available: 2 })
        );
    }

    #[test]
    fn products_retruncate() {
        let z = Polynomial::var(1, 0);
        let s = TruncatedSeries::new(&Polynomial::one(1) + &z, 1, 3);
        let cube = s.pow(3);
        let expected = Polynomial::from_terms(1, [(vec![0], int(1)), (vec![1], int(3)), (vec![2], int(3)), (vec![3], int(1))]);
        assert_eq!(cube.poly(), &expected);
        let s4 = cube.times(&s);
        assert_eq!(s4.poly().coeff(&[3]), int(4));
        assert_eq!(s4.poly().coeff(&[4]), int(0));
    }
}
