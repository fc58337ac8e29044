//! Fuchsian systems `y' = Σ A_i/(t - q_i) · y` with rational residues.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{simultaneous_conjugacy, MatQ};
use crate::rational::{format_rational, is_integer, Rational};

/// A singular point on ℙ¹: finite and rational, or the point at infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SingularPoint {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPoint::Finite(q) => write!(f, "{}", format_rational(q)),
            SingularPoint::Infinity => write!(f, "infinity"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FuchsianSystem {
    rank: usize,
    points: Vec<Rational>,
    residues: Vec<MatQ>,
}

impl FuchsianSystem {
    pub fn new(rank: usize, points: Vec<Rational>, residues: Vec<MatQ>) -> Result<Self> {
        let system = FuchsianSystem {
            rank,
            points,
            residues,
        };
        system.validate()?;
        Ok(system)
    }

    /// Check the structural invariants: one `rank × rank` residue per point
    /// and pairwise distinct points. Rank 0 (the zero connection) is allowed
    /// since convolution can produce it.
    pub fn validate(&self) -> Result<()> {
        if self.points.len() != self.residues.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} points but {} residues",
                self.points.len(),
                self.residues.len()
            )));
        }
        for (i, m) in self.residues.iter().enumerate() {
            if m.rows() != self.rank || m.cols() != self.rank {
                return Err(Error::ShapeMismatch(format!(
                    "residue {i} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    self.rank,
                    self.rank
                )));
            }
        }
        for (i, q) in self.points.iter().enumerate() {
            if self.points[..i].contains(q) {
                return Err(Error::DuplicatePoints {
                    index: i,
                    point: format_rational(q),
                });
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn residues(&self) -> &[MatQ] {
        &self.residues
    }

    /// `A_∞ = -(A_1 + ⋯ + A_r)`.
    pub fn infinity_residue(&self) -> MatQ {
        let sum = self
            .residues
            .iter()
            .fold(MatQ::zeros(self.rank, self.rank), |acc, m| &acc + m);
        -&sum
    }

    pub fn residue_sum(&self) -> MatQ {
        -&self.infinity_residue()
    }

    pub fn residue_at(&self, point: &SingularPoint) -> Result<MatQ> {
        match point {
            SingularPoint::Infinity => Ok(self.infinity_residue()),
            SingularPoint::Finite(q) => self
                .points
                .iter()
                .position(|x| x == q)
                .map(|i| self.residues[i].clone())
                .ok_or_else(|| Error::UnknownPoint(format_rational(q))),
        }
    }

    /// Points carrying a nonzero residue, with `∞` last when `A_∞ ≠ 0`.
    pub fn singular_points(&self) -> Vec<(SingularPoint, MatQ)> {
        let mut out: Vec<(SingularPoint, MatQ)> = self
            .points
            .iter()
            .zip(&self.residues)
            .filter(|(_, m)| !m.is_zero())
            .map(|(q, m)| (SingularPoint::Finite(q.clone()), m.clone()))
            .collect();
        let inf = self.infinity_residue();
        if !inf.is_zero() {
            out.push((SingularPoint::Infinity, inf));
        }
        out
    }

    /// Tensor with the rank-one system of exponents `alphas`: `A_i + α_i I`.
    pub fn twist(&self, twist: &RankOneTwist) -> Result<FuchsianSystem> {
        if twist.alphas.len() != self.points.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} twist exponents for {} points",
                twist.alphas.len(),
                self.points.len()
            )));
        }
        let residues = self
            .residues
            .iter()
            .zip(&twist.alphas)
            .map(|(m, a)| m + &MatQ::scalar(self.rank, a))
            .collect();
        Ok(FuchsianSystem {
            rank: self.rank,
            points: self.points.clone(),
            residues,
        })
    }

    /// Burnside criterion: the algebra generated by the residues is all of
    /// `M_n`. The span is closed under right multiplication by generators
    /// starting from `I` until it stabilises.
    pub fn is_absolutely_irreducible(&self) -> bool {
        let n = self.rank;
        if n <= 1 {
            return true;
        }
        let target = n * n;
        let mut span = EchelonSpan::new(target);
        let identity = MatQ::identity(n);
        span.insert(identity.entries());
        let mut queue = vec![identity];
        while let Some(word) = queue.pop() {
            for gen in &self.residues {
                let next = &word * gen;
                if span.insert(next.entries()) {
                    if span.dim() == target {
                        return true;
                    }
                    queue.push(next);
                }
            }
        }
        span.dim() == target
    }

    pub fn local_spectrum(&self, point: &SingularPoint) -> Result<LocalSpectrum> {
        let residue = self.residue_at(point)?;
        let eigenvalues = match residue.rational_eigenvalues() {
            Ok(e) => Spectrum::Rational(e),
            Err(Error::NonRationalSpectrum(_)) => Spectrum::NonRational,
            Err(e) => return Err(e),
        };
        Ok(LocalSpectrum {
            point: point.clone(),
            eigenvalues,
        })
    }

    /// No two eigenvalues of a nonzero residue (including `A_∞`) differ by a
    /// nonzero integer.
    pub fn is_non_resonant(&self) -> Result<bool> {
        Ok(self.resonance()?.is_none())
    }

    /// First resonant point and offending eigenvalue pair, if any.
    fn resonance(&self) -> Result<Option<String>> {
        for (point, residue) in self.singular_points() {
            let spectrum = residue.rational_eigenvalues().map_err(|_| {
                Error::NonRationalSpectrum(format!("residue at {point} = {residue}"))
            })?;
            for (i, (a, _)) in spectrum.iter().enumerate() {
                for (b, _) in &spectrum[i + 1..] {
                    let diff = a - b;
                    if !diff.is_zero() && is_integer(&diff) {
                        return Ok(Some(format!(
                            "eigenvalues {} and {} at {point}",
                            format_rational(a),
                            format_rational(b)
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Katz's index `(2 - m) n² + Σ dim Z(A)` over the `m` points with a
    /// nonzero residue (infinity included).
    pub fn rigidity_index(&self) -> Result<i64> {
        if let Some(why) = self.resonance()? {
            return Err(Error::Resonant(why));
        }
        let singular = self.singular_points();
        let n2 = (self.rank * self.rank) as i64;
        let mut index = (2 - singular.len() as i64) * n2;
        for (_, residue) in &singular {
            index += residue.centralizer_dim()? as i64;
        }
        Ok(index)
    }

    /// Irreducible with rigidity index 2.
    pub fn is_rigid(&self) -> Result<bool> {
        Ok(self.is_absolutely_irreducible() && self.rigidity_index()? == 2)
    }

    /// Drop points whose residue is zero; the connection is unchanged.
    pub fn without_apparent_points(&self) -> FuchsianSystem {
        let (points, residues) = self
            .points
            .iter()
            .zip(&self.residues)
            .filter(|(_, m)| !m.is_zero())
            .map(|(q, m)| (q.clone(), m.clone()))
            .unzip();
        FuchsianSystem {
            rank: self.rank,
            points,
            residues,
        }
    }

    /// Same connection with the points listed in ascending order.
    pub fn sorted(&self) -> FuchsianSystem {
        let mut pairs: Vec<(Rational, MatQ)> = self
            .points
            .iter()
            .cloned()
            .zip(self.residues.iter().cloned())
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (points, residues) = pairs.into_iter().unzip();
        FuchsianSystem {
            rank: self.rank,
            points,
            residues,
        }
    }

    /// Isomorphism of connections: after dropping apparent points and sorting,
    /// the point sets agree and the residue tuples are simultaneously
    /// conjugate.
    pub fn is_isomorphic(&self, other: &FuchsianSystem) -> Result<bool> {
        if self.rank != other.rank {
            return Ok(false);
        }
        let a = self.without_apparent_points().sorted();
        let b = other.without_apparent_points().sorted();
        if a.points != b.points {
            return Ok(false);
        }
        if a.points.is_empty() || a.rank == 0 {
            return Ok(true);
        }
        Ok(simultaneous_conjugacy(&a.residues, &b.residues)?.is_some())
    }

    /// Simultaneous conjugation `S A_i S⁻¹`.
    pub fn conjugate(&self, s: &MatQ) -> Result<FuchsianSystem> {
        let inv = s
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("conjugating matrix is singular".into()))?;
        let residues = self.residues.iter().map(|m| &(s * m) * &inv).collect();
        FuchsianSystem::new(self.rank, self.points.clone(), residues)
    }
}

/// The rank-one system with solution `(t - q)^λ`: one point `q`, residue `λ`.
pub fn kummer(q: Rational, lambda: Rational) -> FuchsianSystem {
    FuchsianSystem {
        rank: 1,
        points: vec![q],
        residues: vec![MatQ::scalar(1, &lambda)],
    }
}

/// Exponents `α_i` of a rank-one system on the same points; the exponent at
/// infinity is `-Σ α_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankOneTwist {
    pub alphas: Vec<Rational>,
}

impl RankOneTwist {
    pub fn new(alphas: Vec<Rational>) -> Self {
        RankOneTwist { alphas }
    }

    pub fn identity(points: usize) -> Self {
        RankOneTwist {
            alphas: vec![Rational::zero(); points],
        }
    }

    pub fn inverse(&self) -> Self {
        RankOneTwist {
            alphas: self.alphas.iter().map(|a| -a).collect(),
        }
    }

    pub fn infinity_exponent(&self) -> Rational {
        -self.alphas.iter().cloned().sum::<Rational>()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Spectrum {
    /// Eigenvalues with multiplicity in canonical order.
    Rational(Vec<(Rational, usize)>),
    NonRational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalSpectrum {
    pub point: SingularPoint,
    pub eigenvalues: Spectrum,
}

/// Incrementally maintained row-echelon basis of a subspace of ℚ^dim.
struct EchelonSpan {
    dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonSpan {
    fn new(dim: usize) -> Self {
        EchelonSpan {
            dim,
            rows: Vec::new(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Add `v` to the span; returns whether the span grew.
    fn insert(&mut self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let f = w[*pivot].clone();
            for (x, r) in w.iter_mut().zip(row) {
                *x -= &f * r;
            }
        }
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &w[pivot];
        for x in &mut w {
            *x *= &inv;
        }
        for (_, row) in &mut self.rows {
            if row[pivot].is_zero() {
                continue;
            }
            let f = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                *x -= &f * y;
            }
        }
        self.rows.push((pivot, w));
        true
    }
}
