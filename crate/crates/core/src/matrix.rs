//! Dense matrices over ℚ and the exact linear algebra built on them:
//! echelon forms, kernels, characteristic polynomials, rational spectra and
//! simultaneous conjugacy.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::berkowitz::char_poly_coeffs;
use crate::error::{Error, Result};
use crate::poly::PolyQ;
use crate::rational::{format_rational, height, prime_factors, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatQ {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(MatQ { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::ShapeMismatch(format!(
                "row {bad} has {} entries, expected {c}",
                rows[bad].len()
            )));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Rational::one())
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut m = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form and the pivot columns. Pivots are taken
    /// at the first nonzero entry scanning rows downward, columns left to right.
    pub fn rref(&self) -> (MatQ, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] *= &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column in index
    /// order (reduced echelon basis).
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = &m[(i, c)] / &pivot;
                for j in c..n {
                    let delta = &factor * &m[(c, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<MatQ> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = MatQ::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// `det(x I - M)`, monic of degree `n`, by the division-free Berkowitz
    /// recurrence.
    pub fn char_poly(&self) -> Result<PolyQ> {
        self.require_square()?;
        let mut coeffs = char_poly_coeffs(&self.to_rows(), &Rational::zero());
        coeffs.reverse();
        Ok(PolyQ::new(coeffs))
    }

    /// Full rational spectrum with multiplicities, in the canonical order
    /// (multiplicity descending, then height ascending, then value ascending).
    pub fn rational_eigenvalues(&self) -> Result<Vec<(Rational, usize)>> {
        rational_roots(&self.char_poly()?)
    }

    /// Dimension of the centralizer `{X : XA = AX}`.
    pub fn centralizer_dim(&self) -> Result<usize> {
        self.require_square()?;
        let n = self.rows;
        let mut eqs = MatQ::zeros(n * n, n * n);
        // (XA - AX)_{il} = sum_j x_ij a_jl - sum_j a_ij x_jl
        for i in 0..n {
            for l in 0..n {
                let row = i * n + l;
                for j in 0..n {
                    eqs[(row, i * n + j)] += &self[(j, l)];
                    eqs[(row, j * n + l)] -= &self[(i, j)];
                }
            }
        }
        Ok(eqs.nullity())
    }
}

/// Deterministic ordering of eigenvalues: multiplicity descending, then
/// height ascending, then value ascending.
pub fn spectrum_order(a: &(Rational, usize), b: &(Rational, usize)) -> Ordering {
    b.1.cmp(&a.1)
        .then_with(|| height(&a.0).cmp(&height(&b.0)))
        .then_with(|| a.0.cmp(&b.0))
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut divs = vec![BigInt::one()];
    let mut rest = n.abs();
    for p in prime_factors(n)? {
        let p = BigInt::from(p);
        let mut pk = Vec::new();
        let mut acc = BigInt::one();
        while (&rest % &p).is_zero() {
            rest /= &p;
            acc *= &p;
            pk.push(acc.clone());
        }
        let mut next = divs.clone();
        for d in &divs {
            for q in &pk {
                next.push(d * q);
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// All rational roots of `f` with multiplicity, in the canonical spectrum
/// order. Fails with `NonRationalSpectrum` unless the roots exhaust the degree.
pub fn rational_roots(f: &PolyQ) -> Result<Vec<(Rational, usize)>> {
    let Some(deg) = f.degree() else {
        return Err(Error::ZeroInput("roots of the zero polynomial"));
    };
    let mut rest = f.clone();
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let mut zero_mult = 0;
    while rest.degree().is_some_and(|d| d > 0) && rest.coeff(0).is_zero() {
        rest = PolyQ::new(rest.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if rest.degree().is_some_and(|d| d > 0) {
        let ints = rest.primitive_integer_form();
        let nums = divisors(&ints[0])?;
        let dens = divisors(ints.last().expect("nonconstant"))?;
        let mut candidates: Vec<Rational> = Vec::new();
        for a in &nums {
            for b in &dens {
                let c = Rational::new(a.clone(), b.clone());
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            if rest.degree() == Some(0) {
                break;
            }
            let mut mult = 0;
            let lin = PolyQ::linear(&c);
            loop {
                let (q, r) = rest.div_rem(&lin);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((c, mult));
            }
        }
    }
    let found: usize = roots.iter().map(|r| r.1).sum();
    if found != deg {
        return Err(Error::NonRationalSpectrum(format!("{f}")));
    }
    roots.sort_by(spectrum_order);
    Ok(roots)
}

/// Find an invertible `S` with `S A_k = B_k S` for every `k`.
///
/// The solution space of the linear conditions is scanned over its basis
/// vectors and every ±1 combination of up to three of them. `None` means no
/// invertible solution exists; `IndeterminateConjugacy` means the scan was
/// inconclusive on a solution space of dimension ≥ 2.
pub fn simultaneous_conjugacy(a: &[MatQ], b: &[MatQ]) -> Result<Option<MatQ>> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} matrices against {}",
            a.len(),
            b.len()
        )));
    }
    let n = match a.first() {
        Some(m) => m.rows,
        None => return Err(Error::ShapeMismatch("empty matrix tuple".into())),
    };
    for m in a.iter().chain(b) {
        if m.rows != n || m.cols != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n}, found {}x{}",
                m.rows, m.cols
            )));
        }
    }
    for (x, y) in a.iter().zip(b) {
        if x.char_poly()? != y.char_poly()? {
            return Ok(None);
        }
    }
    let nn = n * n;
    let mut eqs = MatQ::zeros(a.len() * nn, nn);
    for (k, (ak, bk)) in a.iter().zip(b).enumerate() {
        for i in 0..n {
            for l in 0..n {
                let row = k * nn + i * n + l;
                for j in 0..n {
                    eqs[(row, i * n + j)] += &ak[(j, l)];
                    eqs[(row, j * n + l)] -= &bk[(i, j)];
                }
            }
        }
    }
    let basis = eqs.kernel_basis();
    let to_matrix = |v: Vec<Rational>| MatQ::new(n, n, v).expect("n*n entries");
    let check = |s: &MatQ| -> bool {
        !s.determinant().expect("square").is_zero()
            && a.iter().zip(b).all(|(ak, bk)| s * ak == bk * s)
    };
    for combo in sign_combinations(basis.len()) {
        let mut v = vec![Rational::zero(); nn];
        for (idx, sign) in combo {
            for (acc, x) in v.iter_mut().zip(&basis[idx]) {
                if sign > 0 {
                    *acc += x;
                } else {
                    *acc -= x;
                }
            }
        }
        let s = to_matrix(v);
        if check(&s) {
            return Ok(Some(s));
        }
    }
    if basis.len() >= 2 {
        Err(Error::IndeterminateConjugacy { dim: basis.len() })
    } else {
        Ok(None)
    }
}

/// Index/sign lists for single basis vectors, then pairs, then triples. The
/// first coefficient is always +1 since invertibility ignores overall sign.
fn sign_combinations(d: usize) -> Vec<Vec<(usize, i8)>> {
    let mut out = Vec::new();
    for i in 0..d {
        out.push(vec![(i, 1)]);
    }
    for i in 0..d {
        for j in i + 1..d {
            for sj in [1, -1] {
                out.push(vec![(i, 1), (j, sj)]);
            }
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                for sj in [1, -1] {
                    for sk in [1, -1] {
                        out.push(vec![(i, 1), (j, sj), (k, sk)]);
                    }
                }
            }
        }
    }
    out
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &MatQ {
    type Output = MatQ;
    fn add(self, rhs: &MatQ) -> MatQ {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &MatQ {
    type Output = MatQ;
    fn sub(self, rhs: &MatQ) -> MatQ {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &MatQ {
    type Output = MatQ;
    fn neg(self) -> MatQ {
        MatQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &MatQ {
    type Output = MatQ;
    fn mul(self, rhs: &MatQ) -> MatQ {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = MatQ::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Build a matrix from small integer fractions, `(num, den)` row-major.
pub fn mat(rows: &[&[(i64, i64)]]) -> MatQ {
    MatQ::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&(n, d)| crate::rational::rat(n, d)).collect())
            .collect(),
    )
    .expect("rectangular literal")
}
