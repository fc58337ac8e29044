//! Reduction modulo good primes, the p-curvature via the symbol tower of
//! `(∂ - A)^p`, and nilpotency sweeps over prime ranges.

use rayon::prelude::*;

use crate::berkowitz::char_poly_coeffs;
use crate::error::{Error, Result};
use crate::fuchsian::FuchsianSystem;
use crate::poly::PolyFp;
use crate::rational::{primes_in, reduce_mod, Rational};

/// Square matrix over 𝔽_p[t], row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrixFp {
    p: u64,
    n: usize,
    entries: Vec<PolyFp>,
}

impl PolyMatrixFp {
    pub fn zeros(p: u64, n: usize) -> Self {
        PolyMatrixFp {
            p,
            n,
            entries: vec![PolyFp::zero(p); n * n],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        Self::scalar(&PolyFp::one(p), n)
    }

    pub fn scalar(c: &PolyFp, n: usize) -> Self {
        let p = c.modulus();
        let mut m = Self::zeros(p, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyFp {
        &self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PolyFp::is_zero)
    }

    pub fn to_rows(&self) -> Vec<Vec<PolyFp>> {
        self.entries
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[PolyFp]>::to_vec)
            .collect()
    }

    fn map(&self, f: impl Fn(&PolyFp) -> PolyFp) -> Self {
        PolyMatrixFp {
            p: self.p,
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        PolyMatrixFp {
            p: self.p,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        PolyMatrixFp {
            p: self.p,
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(self.p, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * n + j] = &out.entries[i * n + j] + &(a * b);
                }
            }
        }
        out
    }

    pub fn scale_poly(&self, c: &PolyFp) -> Self {
        self.map(|e| e * c)
    }

    pub fn derivative(&self) -> Self {
        self.map(PolyFp::derivative)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::identity(self.p, self.n), |acc, _| acc.mul(self))
    }
}

/// A system reduced mod `p` in the form `A = N / D` over 𝔽_p(t).
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub p: u64,
    pub denominator: PolyFp,
    pub numerator: PolyMatrixFp,
}

/// Good-prime test: `p` divides no denominator of a point or residue entry,
/// all point differences are `p`-adic units, and `ord_p λ ≥ 0` when `λ` is
/// supplied.
pub fn is_good_prime(f: &FuchsianSystem, p: u64, lambda: Option<&Rational>) -> bool {
    let integral = |x: &Rational| reduce_mod(x, p).is_some();
    if !f.points().iter().all(integral) {
        return false;
    }
    if !f.residues().iter().flat_map(|m| m.entries()).all(integral) {
        return false;
    }
    if lambda.is_some_and(|l| !integral(l)) {
        return false;
    }
    let reduced: Vec<u64> = f
        .points()
        .iter()
        .map(|q| reduce_mod(q, p).expect("integral"))
        .collect();
    for (i, a) in reduced.iter().enumerate() {
        if reduced[..i].contains(a) {
            return false;
        }
    }
    true
}

/// Good primes in `[lo, hi]`, ascending.
pub fn good_primes(f: &FuchsianSystem, lo: u64, hi: u64, lambda: Option<&Rational>) -> Vec<u64> {
    primes_in(lo, hi)
        .into_iter()
        .filter(|&p| is_good_prime(f, p, lambda))
        .collect()
}

pub fn reduce_system(f: &FuchsianSystem, p: u64) -> Result<ReducedSystem> {
    if !is_good_prime(f, p, None) {
        return Err(Error::BadPrime { p });
    }
    let n = f.rank();
    let points: Vec<u64> = f
        .points()
        .iter()
        .map(|q| reduce_mod(q, p).expect("good"))
        .collect();
    let linear: Vec<PolyFp> = points.iter().map(|&q| PolyFp::linear(p, q)).collect();
    let denominator = linear.iter().fold(PolyFp::one(p), |acc, l| &acc * l);
    let mut numerator = PolyMatrixFp::zeros(p, n);
    for (k, a) in f.residues().iter().enumerate() {
        let cofactor = linear
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .fold(PolyFp::one(p), |acc, (_, l)| &acc * l);
        for i in 0..n {
            for j in 0..n {
                let c = reduce_mod(&a[(i, j)], p).expect("good");
                if c == 0 {
                    continue;
                }
                let idx = i * n + j;
                numerator.entries[idx] = &numerator.entries[idx] + &cofactor.scale(c);
            }
        }
    }
    Ok(ReducedSystem {
        p,
        denominator,
        numerator,
    })
}

/// `ψ_p = P / D^p` over 𝔽_p(t).
#[derive(Clone, Debug)]
pub struct PCurvature {
    pub p: u64,
    pub numerator: PolyMatrixFp,
    pub denominator: PolyFp,
}

impl PCurvature {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// The p-curvature `C_{p,0}` of `(∂ - A)^p = Σ_j C_{p,j} ∂^j`.
///
/// With `C_{s,j} = Q_{s,j} / D^s` the symbol recurrence
/// `C_{s+1,j} = C_{s,j-1} + C_{s,j}' - A C_{s,j}` becomes
/// `Q_{s+1,j} = D (Q_{s,j-1} + Q_{s,j}') - s D' Q_{s,j} - N Q_{s,j}`.
/// The middle coefficients `C_{p,j}`, `1 ≤ j ≤ p-1`, must vanish; a
/// nonzero one is reported as `SymbolResidue`.
pub fn pcurvature(f: &FuchsianSystem, p: u64) -> Result<PCurvature> {
    let reduced = reduce_system(f, p)?;
    let n = f.rank();
    let d = &reduced.denominator;
    let d_prime = d.derivative();
    let zero = PolyMatrixFp::zeros(p, n);
    let mut symbols = vec![PolyMatrixFp::identity(p, n)];
    for s in 0..p as usize {
        let s_mod = (s as u64) % p;
        let d_prime_s = d_prime.scale(s_mod);
        let next: Vec<PolyMatrixFp> = (0..=s + 1)
            .map(|j| {
                let current = symbols.get(j).unwrap_or(&zero);
                let lower = if j == 0 { &zero } else { &symbols[j - 1] };
                let shifted = lower.add(&current.derivative()).scale_poly(d);
                shifted
                    .sub(&current.scale_poly(&d_prime_s))
                    .sub(&reduced.numerator.mul(current))
            })
            .collect();
        symbols = next;
    }
    if let Some(j) = (1..p as usize).find(|&j| !symbols[j].is_zero()) {
        return Err(Error::SymbolResidue { p, j });
    }
    Ok(PCurvature {
        p,
        numerator: symbols.swap_remove(0),
        denominator: d.clone(),
    })
}

/// Numerator of `A_{[p]} = P_p / D^p` reduced mod `p`, from the solution-side
/// recurrence `P_{s+1} = P_s' D - s P_s D' + N P_s`.
pub fn solution_side_matrix_mod_p(f: &FuchsianSystem, p: u64) -> Result<PolyMatrixFp> {
    let reduced = reduce_system(f, p)?;
    let d = &reduced.denominator;
    let d_prime = d.derivative();
    let mut current = PolyMatrixFp::identity(p, f.rank());
    for s in 0..p {
        current = current
            .derivative()
            .scale_poly(d)
            .sub(&current.scale_poly(&d_prime.scale(s % p)))
            .add(&reduced.numerator.mul(&current));
    }
    Ok(current)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum PCurvatureStatus {
    Zero,
    Nilpotent,
    NonNilpotent,
    BadPrime,
}

impl PCurvatureStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PCurvatureStatus::Zero => "zero",
            PCurvatureStatus::Nilpotent => "nilpotent",
            PCurvatureStatus::NonNilpotent => "non_nilpotent",
            PCurvatureStatus::BadPrime => "bad_prime",
        }
    }
}

/// First nonzero coefficient below the top of `det(x I - P_ψ)`: the
/// coefficient of `x^{n - index}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NilpotencyWitness {
    pub index: usize,
    pub coefficient: PolyFp,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PCurvatureReport {
    pub p: u64,
    pub status: PCurvatureStatus,
    pub witness: Option<NilpotencyWitness>,
}

/// Classify `ψ_p`. Nilpotency is decided on the numerator `P_ψ` (the
/// denominator is a unit of 𝔽_p(t)) by its characteristic polynomial, and
/// cross-checked with `P_ψ^n = 0`.
pub fn classify(psi: &PCurvature) -> Result<PCurvatureReport> {
    let p = psi.p;
    if psi.is_zero() {
        return Ok(PCurvatureReport {
            p,
            status: PCurvatureStatus::Zero,
            witness: None,
        });
    }
    let n = psi.numerator.size();
    let coeffs = char_poly_coeffs(&psi.numerator.to_rows(), &PolyFp::zero(p));
    let witness = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| !c.is_zero())
        .map(|(index, c)| NilpotencyWitness {
            index,
            coefficient: c.clone(),
        });
    let power_vanishes = psi.numerator.pow(n).is_zero();
    if power_vanishes != witness.is_none() {
        return Err(Error::IdentityViolation(format!(
            "characteristic polynomial and matrix power disagree on nilpotency at p = {p}"
        )));
    }
    Ok(match witness {
        None => PCurvatureReport {
            p,
            status: PCurvatureStatus::Nilpotent,
            witness: None,
        },
        Some(w) => PCurvatureReport {
            p,
            status: PCurvatureStatus::NonNilpotent,
            witness: Some(w),
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub primes: usize,
    pub good: usize,
    pub zero: usize,
    pub nilpotent: usize,
    pub non_nilpotent: usize,
    pub bad: usize,
    /// `(zero + nilpotent) / good`: an evidence score, not a proof.
    pub nilpotent_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub range: (u64, u64),
    pub reports: Vec<PCurvatureReport>,
    pub summary: SweepSummary,
}

impl SweepReport {
    /// Every good prime in the range has zero or nilpotent p-curvature.
    pub fn all_nilpotent(&self) -> bool {
        self.summary.non_nilpotent == 0
    }

    pub fn all_zero(&self) -> bool {
        self.summary.non_nilpotent == 0 && self.summary.nilpotent == 0
    }

    pub fn non_nilpotent_primes(&self) -> Vec<u64> {
        self.reports
            .iter()
            .filter(|r| r.status == PCurvatureStatus::NonNilpotent)
            .map(|r| r.p)
            .collect()
    }
}

/// p-curvature status at every prime of `[lo, hi]`, ordered by `p`. Primes
/// are processed in parallel on the current rayon pool.
pub fn nilpotency_sweep(f: &FuchsianSystem, lo: u64, hi: u64) -> Result<SweepReport> {
    let primes = primes_in(lo, hi);
    let mut reports = primes
        .par_iter()
        .map(|&p| {
            if !is_good_prime(f, p, None) {
                return Ok(PCurvatureReport {
                    p,
                    status: PCurvatureStatus::BadPrime,
                    witness: None,
                });
            }
            classify(&pcurvature(f, p)?)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| r.p);
    let count = |s: PCurvatureStatus| reports.iter().filter(|r| r.status == s).count();
    let zero = count(PCurvatureStatus::Zero);
    let nilpotent = count(PCurvatureStatus::Nilpotent);
    let non_nilpotent = count(PCurvatureStatus::NonNilpotent);
    let bad = count(PCurvatureStatus::BadPrime);
    let good = reports.len() - bad;
    let nilpotent_fraction = if good == 0 {
        1.0
    } else {
        (zero + nilpotent) as f64 / good as f64
    };
    Ok(SweepReport {
        range: (lo, hi),
        summary: SweepSummary {
            primes: reports.len(),
            good,
            zero,
            nilpotent,
            non_nilpotent,
            bad,
            nilpotent_fraction,
        },
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::kummer;
    use crate::matrix::{mat, MatQ};
    use crate::rational::{int, rat};

    #[test]
    fn good_prime_rules() {
        let f = FuchsianSystem::new(
            1,
            vec![int(0), int(1)],
            vec![MatQ::scalar(1, &rat(1, 2)), MatQ::scalar(1, &rat(3, 2))],
        )
        .unwrap();
        assert_eq!(good_primes(&f, 2, 10, None), vec![3, 5, 7]);
        assert_eq!(good_primes(&f, 2, 10, Some(&rat(1, 3))), vec![5, 7]);
        let g = FuchsianSystem::new(
            1,
            vec![int(0), int(6)],
            vec![MatQ::scalar(1, &rat(1, 1)), MatQ::scalar(1, &rat(1, 1))],
        )
        .unwrap();
        assert_eq!(good_primes(&g, 2, 10, None), vec![5, 7]);
    }

    #[test]
    fn kummer_pcurvature_vanishes() {
        for lambda in [int(3), rat(1, 2)] {
            let psi = pcurvature(&kummer(int(0), lambda), 5).unwrap();
            assert!(psi.is_zero());
        }
        assert!(matches!(
            pcurvature(&kummer(int(0), rat(1, 5)), 5),
            Err(Error::BadPrime { p: 5 })
        ));
    }

    #[test]
    fn nilpotent_residue_pcurvature() {
        let f = FuchsianSystem::new(
            2,
            vec![int(0)],
            vec![mat(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]])],
        )
        .unwrap();
        let psi = pcurvature(&f, 3).unwrap();
        assert_eq!(psi.denominator, PolyFp::new(3, vec![0, 1]));
        // numerator N·t^0 scaled: ψ = N / t^3 with N = [[0,1],[0,0]], so P_ψ = N·(t^3/D^3)·... = N
        assert_eq!(psi.numerator.get(0, 1), &PolyFp::one(3));
        assert!(psi.numerator.get(0, 0).is_zero());
        assert!(psi.numerator.get(1, 0).is_zero());
        let report = classify(&psi).unwrap();
        assert_eq!(report.status, PCurvatureStatus::Nilpotent);
    }

    #[test]
    fn kummer_sweep_all_zero() {
        let sweep = nilpotency_sweep(&kummer(int(0), rat(1, 2)), 3, 97).unwrap();
        assert!(sweep.all_zero());
        assert_eq!(sweep.summary.good, 24);
        assert_eq!(sweep.summary.bad, 0);
    }
}
