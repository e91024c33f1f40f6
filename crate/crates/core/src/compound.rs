//! Second-order minors, the second compound matrix, and W-matrices.
//!
//! The exterior square of `R^n` is identified with functions on `W \ Δ` for a
//! relation set `W`. Basis element `e_i ∧ e_j` for `(i, j) ∈ W \ Δ` takes the
//! value 1 on `(i, j)` and 0 on every other pair of `W \ Δ`, so coordinates
//! in a W-basis are just function values on the pairs of `W \ Δ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::relation::RelationSet;

/// Lexicographic numbering of the pairs `(i, j)`, `i < j`, of `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIndexer {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairIndexer {
    pub fn new(n: usize) -> Self {
        let pairs = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        PairIndexer { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `C(n, 2)`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, alpha: usize) -> (usize, usize) {
        self.pairs[alpha]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of the sorted pair `{i, j}`; `None` when `i == j` or out of range.
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == j || j >= self.n {
            return None;
        }
        Some(i * (2 * self.n - i - 1) / 2 + (j - i - 1))
    }
}

/// Number of unordered pairs from `n` elements.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Coordinates of an element of the exterior square in the W-basis
/// recorded alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedgeVector {
    pub basis: Vec<(usize, usize)>,
    pub coords: Vec<f64>,
}

impl WedgeVector {
    pub fn max_abs_diff(&self, other: &WedgeVector) -> f64 {
        assert_eq!(self.basis, other.basis, "wedge vectors in different bases");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn check_index(a: &Matrix, idx: usize) -> Result<()> {
    if idx < a.n() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: idx, n: a.n() })
    }
}

#[inline]
fn minor_unchecked(a: &Matrix, i: usize, j: usize, k: usize, l: usize) -> f64 {
    a[(i, k)] * a[(j, l)] - a[(i, l)] * a[(j, k)]
}

/// Minor on rows `(i, j)` and columns `(k, l)`, in the order given:
/// `a_ik a_jl - a_il a_jk`.
pub fn generalized_minor(a: &Matrix, i: usize, j: usize, k: usize, l: usize) -> Result<f64> {
    for idx in [i, j, k, l] {
        check_index(a, idx)?;
    }
    Ok(minor_unchecked(a, i, j, k, l))
}

/// All 2x2 minors over sorted row and column pairs, lexicographically numbered.
pub fn second_compound(a: &Matrix) -> Result<Matrix> {
    if a.n() < 2 {
        return Err(Error::DimensionTooSmall { n: a.n(), min: 2 });
    }
    minor_table(a, PairIndexer::new(a.n()).pairs())
}

/// Matrix of `A ∧ A` in the W-basis: entry `(α, β)` is the generalized minor
/// with rows taken from the `α`-th pair of `W \ Δ` and columns from the
/// `β`-th. Pairs are ordered lexicographically as written in `W`.
pub fn w_matrix(a: &Matrix, w: &RelationSet) -> Result<Matrix> {
    if a.n() < 2 {
        return Err(Error::DimensionTooSmall { n: a.n(), min: 2 });
    }
    if w.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: w.n(),
        });
    }
    minor_table(a, &w.basis_pairs())
}

fn minor_table(a: &Matrix, pairs: &[(usize, usize)]) -> Result<Matrix> {
    let m = pairs.len();
    let mut data = Vec::with_capacity(m * m);
    for &(i, j) in pairs {
        for &(k, l) in pairs {
            data.push(minor_unchecked(a, i, j, k, l));
        }
    }
    Matrix::new(m, data)
}

/// Coordinates of `x ∧ y` in the W-basis: `x(i) y(j) - x(j) y(i)` on each
/// pair of `W \ Δ`.
pub fn wedge(x: &[f64], y: &[f64], w: &RelationSet) -> Result<WedgeVector> {
    let n = w.n();
    for len in [x.len(), y.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let basis = w.basis_pairs();
    let coords = basis
        .iter()
        .map(|&(i, j)| x[i] * y[j] - x[j] * y[i])
        .collect();
    Ok(WedgeVector { basis, coords })
}

/// `(A ∧ A)(x ∧ y) = Ax ∧ Ay`, computed without any minor table.
pub fn exterior_square_apply(
    a: &Matrix,
    x: &[f64],
    y: &[f64],
    w: &RelationSet,
) -> Result<WedgeVector> {
    if w.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: w.n(),
        });
    }
    let ax = a.mul_vec(x)?;
    let ay = a.mul_vec(y)?;
    wedge(&ax, &ay, w)
}

/// Product of a W-matrix with a wedge vector in the same basis.
pub fn apply_w_matrix(m: &Matrix, v: &WedgeVector) -> Result<WedgeVector> {
    Ok(WedgeVector {
        basis: v.basis.clone(),
        coords: m.mul_vec(&v.coords)?,
    })
}
