//! Exact derivative tower `A_{[s]} = P_s / D^s`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fuchsian::FuchsianSystem;
use crate::poly::PolyQ;
use crate::rational::Rational;

/// Square matrix of polynomials over ℚ, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<PolyQ>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> Self {
        PolyMatrix {
            n,
            entries: vec![PolyQ::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = PolyQ::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyQ {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[PolyQ] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PolyQ::is_zero)
    }

    fn map(&self, f: impl Fn(&PolyQ) -> PolyQ) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&PolyQ, &PolyQ) -> PolyQ) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * other.get(k, j);
                    out.entries[i * n + j] = &out.entries[i * n + j] + &prod;
                }
            }
        }
        out
    }

    /// Smallest `p`-adic coefficient valuation over all entries; `None` for
    /// the zero matrix.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.min_valuation(p)).min()
    }
}

#[derive(Clone, Debug)]
pub struct DerivativeTower {
    /// `D = ∏ (t - q_i)`
    pub denominator: PolyQ,
    /// `N` with `A = N / D`.
    pub numerator: PolyMatrix,
    /// `P_0 ..= P_S`.
    pub terms: Vec<PolyMatrix>,
}

impl DerivativeTower {
    pub fn depth(&self) -> usize {
        self.terms.len() - 1
    }
}

/// `D` and `N = Σ_k A_k ∏_{j≠k} (t - q_j)` for a system.
pub fn common_denominator_form(f: &FuchsianSystem) -> (PolyQ, PolyMatrix) {
    let n = f.rank();
    let linear: Vec<PolyQ> = f.points().iter().map(PolyQ::linear).collect();
    let denominator = linear.iter().fold(PolyQ::one(), |acc, l| &acc * l);
    let mut numerator = PolyMatrix::zeros(n);
    for (k, a) in f.residues().iter().enumerate() {
        let cofactor = linear
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .fold(PolyQ::one(), |acc, (_, l)| &acc * l);
        for i in 0..n {
            for j in 0..n {
                let c = &a[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let idx = i * n + j;
                numerator.entries[idx] = &numerator.entries[idx] + &cofactor.scale(c);
            }
        }
    }
    (denominator, numerator)
}

/// `P_0 = I`, `P_{s+1} = P_s' D - s P_s D' + N P_s`.
pub fn build_tower(f: &FuchsianSystem, depth: usize) -> Result<DerivativeTower> {
    if depth == 0 {
        return Err(Error::InvalidArgument(
            "tower depth must be at least 1".into(),
        ));
    }
    let (denominator, numerator) = common_denominator_form(f);
    let d_prime = denominator.derivative();
    let mut terms = vec![PolyMatrix::identity(f.rank())];
    for s in 0..depth {
        let current = &terms[s];
        let s_rat = Rational::from_integer(BigInt::from(s));
        let first = current.map(|e| &e.derivative() * &denominator);
        let second = current.map(|e| (e * &d_prime).scale(&s_rat));
        let third = numerator.mul(current);
        let next = first.zip(&second, |a, b| a - b).zip(&third, |a, b| a + b);
        terms.push(next);
    }
    debug_assert_eq!(terms[1], numerator);
    Ok(DerivativeTower {
        denominator,
        numerator,
        terms,
    })
}
