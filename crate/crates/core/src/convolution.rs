//! Additive middle convolution `mc_λ` of Fuchsian systems as explicit exact
//! linear algebra.
//!
//! For residues `A_1..A_r` of size `n` the naive convolution has residues
//! `B_k` of size `rn`, zero outside block-row `k`, whose block-row `k` is
//! `(A_1, …, A_k + λI, …, A_r)`. The subspaces
//!
//! * `K = ⊕_k ker A_k` (the `k`-th kernel placed in block `k`), and
//! * `L = {(v, …, v) : (A_1 + ⋯ + A_r + λI) v = 0}`
//!
//! are invariant under every `B_k`, and `mc_λ` is the induced action on the
//! quotient `ℚ^{rn} / (K + L)`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fuchsian::FuchsianSystem;
use crate::matrix::MatQ;
use crate::rational::{format_rational, is_integer, Rational};

static IDENTITY_CHECKS: AtomicU64 = AtomicU64::new(0);
static IDENTITY_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Number of `middle_convolution` calls whose trace and rank identities were
/// verified in this process, and how many of those failed.
pub fn identity_check_counts() -> (u64, u64) {
    (
        IDENTITY_CHECKS.load(Ordering::Relaxed),
        IDENTITY_VIOLATIONS.load(Ordering::Relaxed),
    )
}

/// Intermediate data of one convolution, kept for inspection and tests.
#[derive(Clone, Debug)]
pub struct ConvolutionWorkspace {
    pub lambda: Rational,
    pub blocks: Vec<MatQ>,
    pub k_basis: Vec<Vec<Rational>>,
    pub l_basis: Vec<Vec<Rational>>,
    /// Coordinates of `ℚ^{rn}` whose unit vectors complete `K + L` to a basis.
    pub quotient_basis: Vec<usize>,
}

fn require_parameter(lambda: &Rational) -> Result<()> {
    if is_integer(lambda) {
        Err(Error::IntegerParameter(format_rational(lambda)))
    } else {
        Ok(())
    }
}

fn require_points(f: &FuchsianSystem) -> Result<()> {
    if f.points().is_empty() {
        Err(Error::InvalidArgument(
            "convolution needs at least one point".into(),
        ))
    } else {
        Ok(())
    }
}

/// The block matrices `B_1..B_r`.
pub fn convolution_blocks(f: &FuchsianSystem, lambda: &Rational) -> Vec<MatQ> {
    let n = f.rank();
    let r = f.points().len();
    (0..r)
        .map(|k| {
            let mut b = MatQ::zeros(r * n, r * n);
            for (j, a) in f.residues().iter().enumerate() {
                for x in 0..n {
                    for y in 0..n {
                        let mut v = a[(x, y)].clone();
                        if j == k && x == y {
                            v += lambda;
                        }
                        b[(k * n + x, j * n + y)] = v;
                    }
                }
            }
            b
        })
        .collect()
}

/// Convolution without the quotient: rank `rn`, residues `B_k`.
pub fn naive_convolution(f: &FuchsianSystem, lambda: &Rational) -> Result<FuchsianSystem> {
    require_parameter(lambda)?;
    require_points(f)?;
    FuchsianSystem::new(
        f.rank() * f.points().len(),
        f.points().to_vec(),
        convolution_blocks(f, lambda),
    )
}

pub fn subspace_k(f: &FuchsianSystem) -> Vec<Vec<Rational>> {
    let n = f.rank();
    let rn = n * f.points().len();
    let mut out = Vec::new();
    for (k, a) in f.residues().iter().enumerate() {
        for v in a.kernel_basis() {
            let mut w = vec![Rational::zero(); rn];
            w[k * n..(k + 1) * n].clone_from_slice(&v);
            out.push(w);
        }
    }
    out
}

pub fn subspace_l(f: &FuchsianSystem, lambda: &Rational) -> Vec<Vec<Rational>> {
    let shifted = &f.residue_sum() + &MatQ::scalar(f.rank(), lambda);
    let r = f.points().len();
    shifted
        .kernel_basis()
        .into_iter()
        .map(|v| v.iter().cloned().cycle().take(v.len() * r).collect())
        .collect()
}

/// `rn - Σ dim ker A_k - dim ker(A_1 + ⋯ + A_r + λI)`, without building the
/// quotient.
pub fn mc_rank(f: &FuchsianSystem, lambda: &Rational) -> Result<usize> {
    require_parameter(lambda)?;
    let n = f.rank();
    let kernels: usize = f.residues().iter().map(MatQ::nullity).sum();
    let l = (&f.residue_sum() + &MatQ::scalar(n, lambda)).nullity();
    Ok(n * f.points().len() - kernels - l)
}

/// `mc_λ(F)` on the same point list (zero residues are kept; see
/// [`prune_apparent`]).
pub fn middle_convolution(
    f: &FuchsianSystem,
    lambda: &Rational,
) -> Result<(FuchsianSystem, ConvolutionWorkspace)> {
    require_parameter(lambda)?;
    require_points(f)?;
    let n = f.rank();
    let rn = n * f.points().len();
    let blocks = convolution_blocks(f, lambda);
    let k_basis = subspace_k(f);
    let l_basis = subspace_l(f, lambda);

    let spanning: Vec<Vec<Rational>> = k_basis.iter().chain(&l_basis).cloned().collect();
    let d = spanning.len();
    let as_rows = MatQ::from_columns(rn, &spanning).transpose();
    let (_, pivots) = as_rows.rref();
    if pivots.len() != d {
        return Err(Error::IdentityViolation(
            "K and L are not independent".into(),
        ));
    }
    let quotient_basis: Vec<usize> = (0..rn).filter(|c| !pivots.contains(c)).collect();

    let mut columns = spanning;
    for &c in &quotient_basis {
        let mut e = vec![Rational::zero(); rn];
        e[c] = Rational::one();
        columns.push(e);
    }
    let change = MatQ::from_columns(rn, &columns);
    let change_inv = change
        .inverse()
        .ok_or_else(|| Error::IdentityViolation("basis change is singular".into()))?;

    let out_rank = rn - d;
    let mut residues = Vec::with_capacity(blocks.len());
    for (k, b) in blocks.iter().enumerate() {
        let conj = &(&change_inv * b) * &change;
        if !conj.submatrix(d, 0, out_rank, d).is_zero() {
            return Err(Error::InvarianceViolation { block: k });
        }
        residues.push(conj.submatrix(d, d, out_rank, out_rank));
    }
    let out = FuchsianSystem::new(out_rank, f.points().to_vec(), residues)?;
    check_identities(f, lambda, &out)?;

    Ok((
        out,
        ConvolutionWorkspace {
            lambda: lambda.clone(),
            blocks,
            k_basis,
            l_basis,
            quotient_basis,
        },
    ))
}

/// Rank formula and `tr(out_k) = tr(A_k) + λ(n - dim ker A_k)`.
fn check_identities(f: &FuchsianSystem, lambda: &Rational, out: &FuchsianSystem) -> Result<()> {
    IDENTITY_CHECKS.fetch_add(1, Ordering::Relaxed);
    let violation = |msg: String| {
        IDENTITY_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        Err(Error::IdentityViolation(msg))
    };
    let expected_rank = mc_rank(f, lambda)?;
    if out.rank() != expected_rank {
        return violation(format!(
            "rank {} but formula gives {expected_rank}",
            out.rank()
        ));
    }
    let n = f.rank();
    for (k, (a, b)) in f.residues().iter().zip(out.residues()).enumerate() {
        let free = Rational::from_integer((n - a.nullity()).into());
        let expected = a.trace() + lambda * free;
        if b.trace() != expected {
            return violation(format!(
                "trace of residue {k} is {}, expected {}",
                format_rational(&b.trace()),
                format_rational(&expected)
            ));
        }
    }
    Ok(())
}

/// Remove points whose residue is zero.
pub fn prune_apparent(f: &FuchsianSystem) -> FuchsianSystem {
    f.without_apparent_points()
}

/// Whether `mc_{-λ}(mc_λ(F)) ≅ F`. Inputs outside the guarded regime
/// (reducible, a singular residue, singular `ΣA + λI`, or a reverse step that
/// does not return to rank `n`) yield `PreconditionSkipped`.
pub fn round_trip_check(f: &FuchsianSystem, lambda: &Rational) -> Result<bool> {
    require_parameter(lambda)?;
    let skip = |why: &str| Err(Error::PreconditionSkipped(why.to_string()));
    if !f.is_absolutely_irreducible() {
        return skip("input is not absolutely irreducible");
    }
    if f.residues().iter().any(|a| a.nullity() > 0) {
        return skip("a residue is singular");
    }
    if (&f.residue_sum() + &MatQ::scalar(f.rank(), lambda)).nullity() > 0 {
        return skip("A_1 + ... + A_r + lambda I is singular");
    }
    let (forward, _) = middle_convolution(f, lambda)?;
    let back_lambda = -lambda;
    if mc_rank(&forward, &back_lambda)? != f.rank() {
        return skip("reverse convolution does not return to the input rank");
    }
    let (back, _) = middle_convolution(&forward, &back_lambda)?;
    f.is_isomorphic(&back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::kummer;
    use crate::matrix::mat;
    use crate::rational::{int, rat};

    fn rank_one(residues: &[(i64, i64)]) -> FuchsianSystem {
        FuchsianSystem::new(
            1,
            (0..residues.len() as i64).map(int).collect(),
            residues
                .iter()
                .map(|&(n, d)| MatQ::scalar(1, &rat(n, d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn naive_blocks() {
        let f = rank_one(&[(1, 2), (1, 3)]);
        let g = naive_convolution(&f, &rat(1, 6)).unwrap();
        assert_eq!(
            g.residues()[0],
            mat(&[&[(2, 3), (1, 3)], &[(0, 1), (0, 1)]])
        );
        assert_eq!(
            g.residues()[1],
            mat(&[&[(0, 1), (0, 1)], &[(1, 2), (1, 2)]])
        );
        let g = naive_convolution(&f, &rat(-5, 6)).unwrap();
        assert_eq!(
            g.residues()[0],
            mat(&[&[(-1, 3), (1, 3)], &[(0, 1), (0, 1)]])
        );
        assert_eq!(
            g.residues()[1],
            mat(&[&[(0, 1), (0, 1)], &[(1, 2), (-1, 2)]])
        );
        let single = naive_convolution(&kummer(int(0), rat(1, 4)), &rat(1, 3)).unwrap();
        assert_eq!(single.residues()[0], MatQ::scalar(1, &rat(7, 12)));
        assert!(matches!(
            naive_convolution(&f, &int(2)),
            Err(Error::IntegerParameter(_))
        ));
    }

    #[test]
    fn subspaces() {
        let f = rank_one(&[(1, 2), (1, 3)]);
        assert!(subspace_k(&f).is_empty());
        assert!(subspace_l(&f, &rat(1, 6)).is_empty());
        assert_eq!(subspace_l(&f, &rat(-5, 6)), vec![vec![int(1), int(1)]]);
        let degenerate = rank_one(&[(0, 1), (1, 3)]);
        assert_eq!(subspace_k(&degenerate), vec![vec![int(1), int(0)]]);
        assert!(subspace_l(&degenerate, &rat(1, 6)).is_empty());
    }

    #[test]
    fn worked_convolutions() {
        let f = rank_one(&[(1, 2), (1, 3)]);
        let (g, ws) = middle_convolution(&f, &rat(1, 6)).unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.residues(), ws.blocks.as_slice());

        let (h, _) = middle_convolution(&f, &rat(-5, 6)).unwrap();
        assert_eq!(h.rank(), 1);
        assert_eq!(h.residues()[0], MatQ::scalar(1, &rat(-1, 3)));
        assert_eq!(h.residues()[1], MatQ::scalar(1, &rat(-1, 2)));

        let degenerate = rank_one(&[(0, 1), (1, 3)]);
        let (k, _) = middle_convolution(&degenerate, &rat(1, 6)).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(k.residues()[0].is_zero());
        assert_eq!(k.residues()[1], MatQ::scalar(1, &rat(1, 2)));
        assert_eq!(prune_apparent(&k), kummer(int(1), rat(1, 2)));
    }

    #[test]
    fn rank_formula() {
        assert_eq!(
            mc_rank(&rank_one(&[(1, 2), (1, 3)]), &rat(1, 6)).unwrap(),
            2
        );
        assert_eq!(
            mc_rank(&rank_one(&[(1, 2), (1, 3)]), &rat(-5, 6)).unwrap(),
            1
        );
        assert_eq!(
            mc_rank(&rank_one(&[(0, 1), (1, 3)]), &rat(1, 6)).unwrap(),
            1
        );
        assert!(mc_rank(&rank_one(&[(0, 1)]), &int(0)).is_err());
    }

    #[test]
    fn pruning() {
        assert_eq!(
            prune_apparent(&rank_one(&[(0, 1), (1, 2)])).points(),
            &[int(1)]
        );
        let f = rank_one(&[(1, 2), (1, 3)]);
        assert_eq!(prune_apparent(&f), f);
        let trivial = rank_one(&[(0, 1), (0, 1)]);
        assert!(prune_apparent(&trivial).points().is_empty());
        assert_eq!(prune_apparent(&trivial).rank(), 1);
    }

    #[test]
    fn round_trips() {
        assert!(round_trip_check(&rank_one(&[(1, 2), (1, 3)]), &rat(1, 6)).unwrap());
        let singular = FuchsianSystem::new(
            2,
            vec![int(0), int(1)],
            vec![
                mat(&[&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]),
                mat(&[&[(1, 1), (0, 1)], &[(1, 1), (2, 1)]]),
            ],
        )
        .unwrap();
        assert!(matches!(
            round_trip_check(&singular, &rat(1, 5)),
            Err(Error::PreconditionSkipped(_))
        ));
    }
}
