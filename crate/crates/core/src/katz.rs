//! Katz's reduction of rigid irreducible systems to rank one by alternating
//! rank-one twists and middle convolutions, its replay, and the harness that
//! compares the arithmetic evidence channels along a reduction.

use std::fmt;

use crate::convolution::{mc_rank, middle_convolution, prune_apparent};
use crate::error::{Error, Result};
use crate::fuchsian::{FuchsianSystem, RankOneTwist};
use crate::matrix::MatQ;
use crate::probes::{nilpotency_sweep, rho_truncated, SweepReport};
use crate::rational::{format_rational, is_integer, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KatzStep {
    /// Twist applied to the step input, aligned with its points in
    /// ascending order.
    pub twist: RankOneTwist,
    pub lambda: Rational,
    pub rank_before: usize,
    pub rank_after: usize,
    /// Points whose residue vanished after the convolution.
    pub pruned_points: Vec<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KatzTrace {
    pub steps: Vec<KatzStep>,
    /// Outputs of each step, the last one being the rank-one terminal.
    pub intermediates: Vec<FuchsianSystem>,
    pub terminal: FuchsianSystem,
}

/// A reduction that stopped early, with the steps completed so far.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KatzFailure {
    pub error: Error,
    pub partial: KatzTrace,
}

impl fmt::Display for KatzFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (after {} steps)",
            self.error,
            self.partial.steps.len()
        )
    }
}

impl std::error::Error for KatzFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Twist making the maximal-multiplicity eigenvalue of every finite residue
/// zero: `α_i = -e_i` with `e_i` first in the canonical spectrum order.
pub fn select_twist(f: &FuchsianSystem) -> Result<RankOneTwist> {
    let alphas = f
        .residues()
        .iter()
        .map(|a| {
            let spectrum = a.rational_eigenvalues()?;
            Ok(-spectrum[0].0.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RankOneTwist::new(alphas))
}

/// First eigenvalue `λ ∉ ℤ` of the infinity residue, in canonical spectrum
/// order, for which `mc_λ` strictly lowers the rank.
pub fn select_lambda(f: &FuchsianSystem) -> Result<Rational> {
    let n = f.rank();
    let spectrum = f.infinity_residue().rational_eigenvalues()?;
    for (lambda, multiplicity) in &spectrum {
        if is_integer(lambda) {
            continue;
        }
        if mc_rank(f, lambda)? >= n {
            continue;
        }
        let kernel = (&f.residue_sum() + &MatQ::scalar(n, lambda)).nullity();
        if kernel != *multiplicity {
            return Err(Error::Stuck(format!(
                "infinity eigenvalue {} has multiplicity {multiplicity} but eigenspace dimension {kernel}",
                format_rational(lambda)
            )));
        }
        return Ok(lambda.clone());
    }
    let listed: Vec<String> = spectrum.iter().map(|(e, _)| format_rational(e)).collect();
    Err(Error::Stuck(format!(
        "no infinity eigenvalue among [{}] lowers the rank",
        listed.join(", ")
    )))
}

fn check_reducible_input(f: &FuchsianSystem) -> Result<()> {
    f.validate()?;
    if f.rank() <= 1 {
        return Err(Error::RankOne);
    }
    if !f.is_absolutely_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let index = f.rigidity_index()?;
    if index != 2 {
        return Err(Error::NotRigid { index });
    }
    Ok(())
}

/// One reduction step: twist, convolve with the selected `λ`, prune.
pub fn katz_step(f: &FuchsianSystem) -> Result<(KatzStep, FuchsianSystem)> {
    check_reducible_input(f)?;
    let input = f.sorted();
    let twist = select_twist(&input)?;
    let twisted = input.twist(&twist)?;
    let lambda = select_lambda(&twisted)?;
    let (convolved, _) = middle_convolution(&twisted, &lambda)?;
    let pruned_points: Vec<Rational> = convolved
        .points()
        .iter()
        .zip(convolved.residues())
        .filter(|(_, m)| m.is_zero())
        .map(|(q, _)| q.clone())
        .collect();
    let output = prune_apparent(&convolved);
    if output.rank() >= input.rank() {
        return Err(Error::Stuck(format!(
            "rank did not drop ({} -> {})",
            input.rank(),
            output.rank()
        )));
    }
    let step = KatzStep {
        twist,
        lambda,
        rank_before: input.rank(),
        rank_after: output.rank(),
        pruned_points,
    };
    Ok((step, output))
}

/// Iterate [`katz_step`] down to rank one. Every intermediate of rank ≥ 2 is
/// re-checked for irreducibility and rigidity index 2.
#[allow(clippy::result_large_err)]
pub fn katz_reduce(f: &FuchsianSystem) -> Result<KatzTrace, KatzFailure> {
    let mut trace = KatzTrace {
        steps: Vec::new(),
        intermediates: Vec::new(),
        terminal: f.clone(),
    };
    let fail = |error: Error, partial: &KatzTrace| KatzFailure {
        error,
        partial: partial.clone(),
    };
    if let Err(e) = f.validate() {
        return Err(fail(e, &trace));
    }
    if f.rank() <= 1 {
        return Ok(trace);
    }
    while trace.terminal.rank() > 1 {
        let (step, next) = match katz_step(&trace.terminal) {
            Ok(x) => x,
            Err(e) => return Err(fail(e, &trace)),
        };
        trace.steps.push(step);
        trace.intermediates.push(next.clone());
        trace.terminal = next;
        if trace.terminal.rank() > 1 {
            if !trace.terminal.is_absolutely_irreducible() {
                return Err(fail(Error::NotIrreducible, &trace));
            }
            match trace.terminal.rigidity_index() {
                Ok(2) => {}
                Ok(index) => return Err(fail(Error::NotRigid { index }, &trace)),
                Err(e) => return Err(fail(e, &trace)),
            }
        }
    }
    Ok(trace)
}

/// Rebuild the input of a reduction from its terminal by applying
/// `mc_{-λ}` and the inverse twist for each step in reverse order.
pub fn replay_unchecked(trace: &KatzTrace) -> Result<FuchsianSystem> {
    let mut current = trace.terminal.clone();
    for step in trace.steps.iter().rev() {
        let mut points = current.points().to_vec();
        let mut residues = current.residues().to_vec();
        for q in &step.pruned_points {
            points.push(q.clone());
            residues.push(MatQ::zeros(current.rank(), current.rank()));
        }
        let restored = FuchsianSystem::new(current.rank(), points, residues)?.sorted();
        let (back, _) = middle_convolution(&restored, &(-&step.lambda))?;
        if back.rank() != step.rank_before {
            return Err(Error::ReplayMismatch);
        }
        current = back.twist(&step.twist.inverse())?;
    }
    Ok(current)
}

/// Replay and confirm the result is isomorphic to `original`.
pub fn replay(trace: &KatzTrace, original: &FuchsianSystem) -> Result<FuchsianSystem> {
    let rebuilt = replay_unchecked(trace)?;
    if rebuilt.is_isomorphic(original)? {
        Ok(rebuilt)
    } else {
        Err(Error::ReplayMismatch)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarnessConfig {
    pub primes: (u64, u64),
    pub depth: usize,
    /// Primes up to this bound are always candidates in `ρ̂`; stability is
    /// checked against twice this bound.
    pub extra_prime_bound: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageEvidence {
    /// 0 for the input, `k` for the output of step `k`.
    pub stage: usize,
    pub rank: usize,
    pub sweep: SweepReport,
    pub rho: f64,
    pub rho_doubled: f64,
}

impl StageEvidence {
    pub fn rho_stable(&self) -> bool {
        self.rho.is_finite() && self.rho == self.rho_doubled
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HarnessReport {
    pub config: HarnessConfig,
    pub trace: KatzTrace,
    pub stages: Vec<StageEvidence>,
    /// Good primes of every stage have zero or nilpotent p-curvature.
    pub nilpotent_channel: bool,
    /// `ρ̂` is finite and stable at every stage.
    pub convergence_channel: bool,
    /// The rank-one terminal has zero p-curvature at every good prime.
    pub terminal_channel: bool,
}

impl HarnessReport {
    pub fn channels_agree(&self) -> bool {
        self.nilpotent_channel == self.convergence_channel
            && self.convergence_channel == self.terminal_channel
    }
}

/// Run the nilpotency sweep and the truncated radius on the input, every
/// intermediate of its Katz reduction and the terminal rank-one system.
pub fn equivalence_harness(f: &FuchsianSystem, config: HarnessConfig) -> Result<HarnessReport> {
    let trace = katz_reduce(f).map_err(|failure| failure.error)?;
    let systems: Vec<&FuchsianSystem> = std::iter::once(f).chain(&trace.intermediates).collect();
    let stages = systems
        .iter()
        .enumerate()
        .map(|(stage, system)| {
            let sweep = nilpotency_sweep(system, config.primes.0, config.primes.1)?;
            let rho = rho_truncated(system, config.depth, None, config.extra_prime_bound)?.total;
            let rho_doubled =
                rho_truncated(system, config.depth, None, 2 * config.extra_prime_bound)?.total;
            Ok(StageEvidence {
                stage,
                rank: system.rank(),
                sweep,
                rho,
                rho_doubled,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let nilpotent_channel = stages.iter().all(|s| s.sweep.all_nilpotent());
    let convergence_channel = stages.iter().all(StageEvidence::rho_stable);
    let terminal_channel = stages
        .last()
        .is_some_and(|s| s.rank == 1 && s.sweep.all_zero());
    Ok(HarnessReport {
        config,
        trace,
        stages,
        nilpotent_channel,
        convergence_channel,
        terminal_channel,
    })
}
