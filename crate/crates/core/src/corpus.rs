//! Named example systems used by the CLI and the test suites.

use crate::convolution::naive_convolution;
use crate::error::{Error, Result};
use crate::fuchsian::{kummer, FuchsianSystem};
use crate::matrix::{mat, MatQ};
use crate::rational::{format_rational, int, is_integer, rat, Rational};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CorpusKind {
    /// Rank-one Kummer-type data.
    RankOne,
    /// Irreducible, non-resonant, rigidity index 2: accepted by the Katz
    /// reduction and the equivalence harness.
    Rigid,
    /// Irreducible with nilpotent residues; resonant at infinity.
    Resonant,
    /// Irreducible with rigidity index 0.
    NonRigid,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: CorpusKind,
    pub system: FuchsianSystem,
}

fn rank_one_pair(a: Rational, b: Rational) -> FuchsianSystem {
    FuchsianSystem::new(
        1,
        vec![int(0), int(1)],
        vec![MatQ::scalar(1, &a), MatQ::scalar(1, &b)],
    )
    .expect("distinct points")
}

/// Rank-two rigid system on `{0, 1, ∞}` obtained by convolving the rank-one
/// system with exponents `(a, b)` at `(0, 1)` with parameter `c`. Its local
/// exponents are `{a + c, 0}`, `{b + c, 0}` and `{-c, -(a + b + c)}`.
pub fn hypergeometric(a: &Rational, b: &Rational, c: &Rational) -> Result<FuchsianSystem> {
    if is_integer(c) {
        return Err(Error::IntegerParameter(format_rational(c)));
    }
    naive_convolution(&rank_one_pair(a.clone(), b.clone()), c)
}

/// The shipped corpus, in a fixed order.
pub fn corpus() -> Vec<CorpusEntry> {
    let nilpotent = FuchsianSystem::new(
        2,
        vec![int(0), int(1)],
        vec![
            mat(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]),
            mat(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)]]),
        ],
    )
    .expect("valid");
    let four_point = FuchsianSystem::new(
        2,
        vec![int(0), int(1), int(-1)],
        vec![
            mat(&[&[(1, 2), (1, 1)], &[(0, 1), (0, 1)]]),
            mat(&[&[(0, 1), (0, 1)], &[(1, 1), (1, 3)]]),
            mat(&[&[(1, 5), (0, 1)], &[(-1, 1), (1, 7)]]),
        ],
    )
    .expect("valid");
    vec![
        CorpusEntry {
            name: "kummer-0-1/2",
            description: "rank one, residue 1/2 at 0: solution t^(1/2)",
            kind: CorpusKind::RankOne,
            system: kummer(int(0), rat(1, 2)),
        },
        CorpusEntry {
            name: "kummer-0-1/3",
            description: "rank one, residue 1/3 at 0: solution t^(1/3)",
            kind: CorpusKind::RankOne,
            system: kummer(int(0), rat(1, 3)),
        },
        CorpusEntry {
            name: "kummer-1-1/2",
            description: "rank one, residue 1/2 at 1",
            kind: CorpusKind::RankOne,
            system: kummer(int(1), rat(1, 2)),
        },
        CorpusEntry {
            name: "rank1-half-third",
            description: "rank one, residues 1/2 at 0 and 1/3 at 1; input of the worked convolution",
            kind: CorpusKind::RankOne,
            system: rank_one_pair(rat(1, 2), rat(1, 3)),
        },
        CorpusEntry {
            name: "rank1-zero-third",
            description: "rank one, residues 0 at 0 and 1/3 at 1; convolution with 1/6 prunes to rank one",
            kind: CorpusKind::RankOne,
            system: rank_one_pair(int(0), rat(1, 3)),
        },
        CorpusEntry {
            name: "mc-worked",
            description: "middle convolution with 1/6 of rank1-half-third: rank two on {0, 1, infinity}",
            kind: CorpusKind::Rigid,
            system: hypergeometric(&rat(1, 2), &rat(1, 3), &rat(1, 6)).expect("valid"),
        },
        CorpusEntry {
            name: "hypergeometric",
            description: "rank-two rigid family member with exponents (1/3, 1/5, 1/7)",
            kind: CorpusKind::Rigid,
            system: hypergeometric(&rat(1, 3), &rat(1, 5), &rat(1, 7)).expect("valid"),
        },
        CorpusEntry {
            name: "hypergeometric-b",
            description: "rank-two rigid family member with exponents (1/4, 2/3, -1/5)",
            kind: CorpusKind::Rigid,
            system: hypergeometric(&rat(1, 4), &rat(2, 3), &rat(-1, 5)).expect("valid"),
        },
        CorpusEntry {
            name: "nilpotent-rigid",
            description: "nilpotent residues [[0,1],[0,0]] at 0 and [[0,0],[1,0]] at 1; resonant at infinity",
            kind: CorpusKind::Resonant,
            system: nilpotent,
        },
        CorpusEntry {
            name: "nonrigid-4pt",
            description: "rank two on {0, 1, -1, infinity} with regular semisimple residues; rigidity index 0",
            kind: CorpusKind::NonRigid,
            system: four_point,
        },
    ]
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
