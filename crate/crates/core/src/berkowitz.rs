//! Division-free characteristic polynomials (Berkowitz) over any commutative
//! ring. Used for ℚ and for the polynomial ring 𝔽_p[t].

use num_traits::{One, Zero};

use crate::poly::PolyFp;
use crate::rational::Rational;

/// The ring operations Berkowitz needs. `zero_like`/`one_like` take a sample
/// element so rings with runtime parameters (the modulus of 𝔽_p[t]) work.
pub trait CommRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

impl CommRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

impl CommRing for PolyFp {
    fn zero_like(&self) -> Self {
        PolyFp::zero(self.modulus())
    }
    fn one_like(&self) -> Self {
        PolyFp::one(self.modulus())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

/// Coefficients of `det(x I - M)`, highest degree first (so index 0 is the
/// leading 1). `sample` supplies the ring's zero/one when `m` is empty.
pub fn char_poly_coeffs<T: CommRing>(m: &[Vec<T>], sample: &T) -> Vec<T> {
    let n = m.len();
    let one = sample.one_like();
    let zero = sample.zero_like();
    let mut coeffs = vec![one.clone()];
    for k in 0..n {
        // Leading (k+1)x(k+1) block: a = m[k][k], row = m[k][..k], col = m[..k][k].
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(one.clone());
        toeplitz.push(m[k][k].ring_neg());
        let mut power_col: Vec<T> = (0..k).map(|i| m[i][k].clone()).collect();
        for _ in 0..k {
            let dot = (0..k).fold(zero.clone(), |acc, j| {
                acc.ring_add(&m[k][j].ring_mul(&power_col[j]))
            });
            toeplitz.push(dot.ring_neg());
            power_col = (0..k)
                .map(|i| {
                    (0..k).fold(zero.clone(), |acc, j| {
                        acc.ring_add(&m[i][j].ring_mul(&power_col[j]))
                    })
                })
                .collect();
        }
        let next: Vec<T> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(zero.clone(), |acc, j| {
                    acc.ring_add(&toeplitz[i - j].ring_mul(&coeffs[j]))
                })
            })
            .collect();
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn rational_two_by_two() {
        let m = vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 2), rat(1, 2)]];
        let c = char_poly_coeffs(&m, &int(0));
        assert_eq!(c, vec![int(1), rat(-7, 6), rat(1, 6)]);
    }

    #[test]
    fn empty_matrix_is_one() {
        let m: Vec<Vec<Rational>> = vec![];
        assert_eq!(char_poly_coeffs(&m, &int(0)), vec![int(1)]);
    }

    #[test]
    fn polynomial_entries() {
        // [[t, 1], [0, t]] over F_5[t]: (x - t)^2 = x^2 - 2t x + t^2
        let p = 5;
        let t = PolyFp::new(p, vec![0, 1]);
        let m = vec![
            vec![t.clone(), PolyFp::one(p)],
            vec![PolyFp::zero(p), t.clone()],
        ];
        let c = char_poly_coeffs(&m, &t);
        assert_eq!(c[0], PolyFp::one(p));
        assert_eq!(c[1], PolyFp::new(p, vec![0, 3]));
        assert_eq!(c[2], PolyFp::new(p, vec![0, 0, 1]));
    }
}
