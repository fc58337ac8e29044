//! Gauss norms, truncated p-adic radii, the truncated global inverse radius
//! and the explicit bound `H(λ)`.

use std::collections::BTreeSet;

use num_traits::One;
use rayon::prelude::*;

use crate::convolution::middle_convolution;
use crate::error::{Error, Result};
use crate::fuchsian::FuchsianSystem;
use crate::poly::PolyQ;
use crate::rational::{
    factorial_valuation, is_integer, p_adic_valuation, prime_factors, primes_in, Rational,
};

use super::tower::build_tower;

/// An exact Gauss norm `p^exponent`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GaussNorm {
    pub p: u64,
    pub exponent: i64,
}

impl GaussNorm {
    pub fn value(&self) -> f64 {
        (self.p as f64).powi(self.exponent as i32)
    }
}

/// `|Σ a_i t^i| = max_i |a_i|_p` with `|p|_p = 1/p`.
pub fn gauss_norm(f: &PolyQ, p: u64) -> Result<GaussNorm> {
    let v = f
        .min_valuation(p)
        .ok_or(Error::ZeroInput("Gauss norm of the zero polynomial"))?;
    Ok(GaussNorm { p, exponent: -v })
}

/// Gauss norm of `f / g`: the quotient of the two norms.
pub fn gauss_norm_ratio(f: &PolyQ, g: &PolyQ, p: u64) -> Result<GaussNorm> {
    let a = gauss_norm(f, p)?;
    let b = gauss_norm(g, p)?;
    Ok(GaussNorm {
        p,
        exponent: a.exponent - b.exponent,
    })
}

/// Per-prime data of a truncated radius computation.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeRadiusEstimate {
    pub p: u64,
    /// `(s, e_s)` with `‖A_{[s]}/s!‖_p = p^{e_s}`; `None` when `A_{[s]} = 0`.
    pub per_s: Vec<(usize, Option<i64>)>,
    /// `max_s max(0, e_s) / s` over the window, as `(e_s, s)`; `None` when
    /// every norm in the window is at most 1.
    pub best: Option<(i64, usize)>,
    /// `max over window of (1/s) log max{1, norm}`.
    pub windowed_log: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoEstimate {
    pub depth: usize,
    pub window: (usize, usize),
    /// Primes with a positive contribution, ascending.
    pub contributions: Vec<PrimeRadiusEstimate>,
    pub candidate_primes: Vec<u64>,
    pub total: f64,
}

/// Primes dividing a denominator of a point or a residue entry.
pub fn denominator_primes(f: &FuchsianSystem) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    let values = f
        .points()
        .iter()
        .chain(f.residues().iter().flat_map(|m| m.entries().iter()));
    for x in values {
        if !x.denom().is_one() {
            out.extend(prime_factors(x.denom())?);
        }
    }
    Ok(out)
}

pub fn default_window(depth: usize) -> (usize, usize) {
    (depth.div_ceil(2), depth)
}

/// Truncated global inverse radius.
///
/// Candidate primes are those up to `max(depth, extra_prime_bound)` plus the
/// primes dividing input denominators; every other prime contributes 0 for
/// `s ≤ depth`. Per prime, `‖A_{[s]}/s!‖_p = p^{v_p(s!)} ‖P_s‖_p / ‖D‖_p^s`
/// and the contribution is the largest `(1/s) log max{1, ·}` over the window.
pub fn rho_truncated(
    f: &FuchsianSystem,
    depth: usize,
    window: Option<(usize, usize)>,
    extra_prime_bound: u64,
) -> Result<RhoEstimate> {
    if depth < 4 {
        return Err(Error::InvalidArgument(format!("depth {depth} is below 4")));
    }
    let window = window.unwrap_or_else(|| default_window(depth));
    if window.0 < 1 || window.0 > window.1 || window.1 > depth {
        return Err(Error::InvalidArgument(format!(
            "window [{}, {}] is not inside [1, {depth}]",
            window.0, window.1
        )));
    }
    let mut candidates = denominator_primes(f)?;
    candidates.extend(primes_in(2, (depth as u64).max(extra_prime_bound)));
    let candidate_primes: Vec<u64> = candidates.into_iter().collect();

    let tower = build_tower(f, depth)?;
    let estimates: Vec<PrimeRadiusEstimate> = candidate_primes
        .par_iter()
        .map(|&p| {
            let d_val = tower.denominator.min_valuation(p).unwrap_or(0);
            let per_s: Vec<(usize, Option<i64>)> = (window.0..=window.1)
                .map(|s| {
                    let e = tower.terms[s]
                        .min_valuation(p)
                        .map(|v| factorial_valuation(p, s as u64) as i64 - v + s as i64 * d_val);
                    (s, e)
                })
                .collect();
            let best = per_s
                .iter()
                .filter_map(|&(s, e)| e.filter(|&e| e > 0).map(|e| (e, s)))
                .fold(None, |acc: Option<(i64, usize)>, (e, s)| match acc {
                    // e/s > be/bs  <=>  e*bs > be*s
                    Some((be, bs)) if e * bs as i64 <= be * s as i64 => Some((be, bs)),
                    _ => Some((e, s)),
                });
            let windowed_log = best.map_or(0.0, |(e, s)| e as f64 / s as f64 * (p as f64).ln());
            PrimeRadiusEstimate {
                p,
                per_s,
                best,
                windowed_log,
            }
        })
        .collect();
    let contributions: Vec<PrimeRadiusEstimate> =
        estimates.into_iter().filter(|e| e.best.is_some()).collect();
    let total = contributions.iter().map(|c| c.windowed_log).sum();
    Ok(RhoEstimate {
        depth,
        window,
        contributions,
        candidate_primes,
        total,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HBound {
    /// `(p, 1/(p-1) - ord_p λ)` for the primes with `ord_p λ < 0`, ascending.
    pub terms: Vec<(u64, Rational)>,
    pub value: f64,
}

/// `H(λ) = Σ_{ord_p λ < 0} (1/(p-1) - ord_p λ) log p`.
pub fn h_bound(lambda: &Rational) -> Result<HBound> {
    if is_integer(lambda) {
        return Err(Error::IntegerParameter(crate::rational::format_rational(
            lambda,
        )));
    }
    let mut terms = Vec::new();
    for p in prime_factors(lambda.denom())? {
        let ord = p_adic_valuation(p, lambda)?;
        let coeff = Rational::new(1.into(), (p - 1).into()) - Rational::from_integer(ord.into());
        terms.push((p, coeff));
    }
    let value = terms
        .iter()
        .map(|(p, c)| rational_to_f64(c) * (*p as f64).ln())
        .sum();
    Ok(HBound { terms, value })
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Truncated comparison of `ρ̂(mc_λ F)` with `(n² + 1)(ρ̂(F) + H(λ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub depth: usize,
    pub rank: usize,
    pub rho_input: f64,
    pub rho_convolved: f64,
    pub convolved_rank: usize,
    pub h: HBound,
    pub bound: f64,
    pub holds: bool,
}

pub fn inequality_report(
    f: &FuchsianSystem,
    lambda: &Rational,
    depth: usize,
) -> Result<InequalityReport> {
    let h = h_bound(lambda)?;
    let bound_primes = depth as u64;
    let rho_input = rho_truncated(f, depth, None, bound_primes)?.total;
    let (convolved, _) = middle_convolution(f, lambda)?;
    let rho_convolved = if convolved.rank() == 0 {
        0.0
    } else {
        rho_truncated(&convolved, depth, None, bound_primes)?.total
    };
    let n = f.rank() as f64;
    let bound = (n * n + 1.0) * (rho_input + h.value);
    Ok(InequalityReport {
        depth,
        rank: f.rank(),
        rho_input,
        rho_convolved,
        convolved_rank: convolved.rank(),
        holds: rho_convolved <= bound,
        bound,
        h,
    })
}
