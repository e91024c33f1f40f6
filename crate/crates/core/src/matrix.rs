//! Dense real square matrices and the similarity transforms used throughout
//! the crate: signature-diagonal conjugation and permutation conjugation.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pattern::Digraph;

/// Dense real `n x n` matrix, row-major, all entries finite.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::NotSquare {
                rows: n,
                cols: if n == 0 { 0 } else { data.len() / n },
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(Matrix { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Matrix::new(n, data)
    }

    /// Builds a matrix entry by entry. Panics if `f` yields a non-finite value.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = f(i, j);
                assert!(x.is_finite(), "non-finite entry at ({i}, {j})");
                data.push(x);
            }
        }
        Matrix { n, data }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| 0.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += aik * other[(k, j)];
                }
            }
        }
        Ok(Matrix { n, data: out })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, x.len())?;
        Ok((0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix::from_fn(self.n, |i, j| s * self[(i, j)])
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.n, other.n)?;
        Ok(Matrix::from_fn(self.n, |i, j| self[(i, j)] + other[(i, j)]))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest entrywise absolute difference.
    pub fn max_entry_distance(&self, other: &Matrix) -> Result<f64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0.0)
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0.0)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of range");
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<f64>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but {} rows given",
                repr.n,
                repr.entries.len()
            )));
        }
        Matrix::from_rows(&repr.entries).map_err(serde::de::Error::custom)
    }
}

/// Diagonal matrix with `+1` / `-1` on the diagonal. It is its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureMatrix {
    signs: Vec<i8>,
}

impl SignatureMatrix {
    pub fn identity(n: usize) -> Self {
        SignatureMatrix { signs: vec![1; n] }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if let Some(k) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Parse(format!(
                "signature entry {k} is {}, expected +1 or -1",
                signs[k]
            )));
        }
        Ok(SignatureMatrix {
            signs: signs.to_vec(),
        })
    }

    /// `-1` exactly at the listed (0-based) indices.
    pub fn from_negative_set(n: usize, negative: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut signs = vec![1i8; n];
        for k in negative {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
            signs[k] = -1;
        }
        Ok(SignatureMatrix { signs })
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_negative(&self, i: usize) -> bool {
        self.signs[i] < 0
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n(), |i, j| if i == j { f64::from(self.signs[i]) } else { 0.0 })
    }
}

/// Bijection of `{0, .., n-1}`; `image[i]` is the image of `i`.
/// Serializes as the 1-based image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &k in &image {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
            if seen[k] {
                return Err(Error::Parse(format!("{k} appears twice in permutation")));
            }
            seen[k] = true;
        }
        Ok(Permutation { image })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &t) in self.image.iter().enumerate() {
            inv[t] = i;
        }
        Permutation { image: inv }
    }

    /// The operator sending `e_i` to `e_{theta(i)}`.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.n(), |r, c| if self.image[c] == r { 1.0 } else { 0.0 })
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.image.iter().map(|k| k + 1))
    }
}

/// `D A D^{-1}`: entry `(i, j)` becomes `s_i s_j a_ij`.
pub fn conjugate_signature(a: &Matrix, d: &SignatureMatrix) -> Result<Matrix> {
    check_dim(a.n(), d.n())?;
    Ok(Matrix::from_fn(a.n(), |i, j| {
        if d.signs[i] == d.signs[j] {
            a[(i, j)]
        } else {
            -a[(i, j)]
        }
    }))
}

/// `Q^T A Q` with `Q e_i = e_{theta(i)}`, i.e. `p_ij = a_{theta(i) theta(j)}`.
pub fn conjugate_permutation(a: &Matrix, theta: &Permutation) -> Result<Matrix> {
    check_dim(a.n(), theta.n())?;
    Ok(Matrix::from_fn(a.n(), |i, j| a[(theta.apply(i), theta.apply(j))]))
}

/// Strong connectivity of the nonzero pattern (`|a_ij| > zero_tol`).
/// A `1 x 1` matrix is irreducible.
pub fn is_irreducible(a: &Matrix, zero_tol: f64) -> bool {
    Digraph::from_pattern(a, zero_tol).is_strongly_connected()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed3() -> Matrix {
        Matrix::from_rows(&[[8.5, 0.0, 6.1], [-5.6, 3.2, -7.4], [6.0, -2.8, 6.6]]).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(Matrix::new(0, vec![]), Err(Error::NotSquare { .. })));
        assert!(matches!(
            Matrix::new(2, vec![1.0; 3]),
            Err(Error::NotSquare { .. })
        ));
        assert_eq!(
            Matrix::new(2, vec![1.0, f64::NAN, 0.0, 1.0]),
            Err(Error::NonFinite { row: 0, col: 1 })
        );
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn signature_conjugation_signed3() {
        let d = SignatureMatrix::from_signs(&[-1, 1, -1]).unwrap();
        let p = conjugate_signature(&signed3(), &d).unwrap();
        // direct D * A * D product as the oracle
        let dm = d.to_matrix();
        let direct = dm.matmul(&signed3()).unwrap().matmul(&dm).unwrap();
        assert_eq!(p, direct);
        assert_eq!(
            p,
            Matrix::from_rows(&[[8.5, 0.0, 6.1], [5.6, 3.2, 7.4], [6.0, 2.8, 6.6]]).unwrap()
        );
        assert!(p.is_nonnegative());
    }

    #[test]
    fn signature_small_cases() {
        let a = Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]]).unwrap();
        let d = SignatureMatrix::from_signs(&[1, -1]).unwrap();
        assert_eq!(
            conjugate_signature(&a, &d).unwrap(),
            Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
        );
        let e = signed3();
        assert_eq!(
            conjugate_signature(&e, &SignatureMatrix::identity(3)).unwrap(),
            e
        );
        assert!(SignatureMatrix::from_signs(&[1, 0]).is_err());
        assert!(matches!(
            conjugate_signature(&e, &SignatureMatrix::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn permutation_conjugation() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(
            conjugate_permutation(&a, &swap).unwrap(),
            Matrix::from_rows(&[[4.0, 3.0], [2.0, 1.0]]).unwrap()
        );
        assert_eq!(
            conjugate_permutation(&a, &Permutation::identity(2)).unwrap(),
            a
        );

        let cyc = Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let theta = Permutation::new(vec![1, 2, 0]).unwrap();
        let q = theta.to_matrix();
        let oracle = q.transpose().matmul(&cyc).unwrap().matmul(&q).unwrap();
        assert_eq!(conjugate_permutation(&cyc, &theta).unwrap(), oracle);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let inv = p.inverse();
        for i in 0..3 {
            assert_eq!(inv.apply(p.apply(i)), i);
        }
    }

    #[test]
    fn irreducibility() {
        let cyc = Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        assert!(is_irreducible(&cyc, 0.0));
        assert!(!is_irreducible(&Matrix::identity(2), 0.0));
        assert!(is_irreducible(&Matrix::zeros(1), 0.0));
        let pos = Matrix::from_fn(5, |i, j| 1.0 + (i * 5 + j) as f64 * 0.1);
        assert!(is_irreducible(&pos, 0.0));
        let lower = Matrix::from_rows(&[[1.0, 0.0], [1.0, 1.0]]).unwrap();
        assert!(!is_irreducible(&lower, 0.0));
        let tiny = Matrix::from_rows(&[[1.0, 1e-14], [1.0, 1.0]]).unwrap();
        assert!(is_irreducible(&tiny, 0.0));
        assert!(!is_irreducible(&tiny, 1e-12));
    }

    #[test]
    fn json_roundtrip() {
        let a = signed3();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with("{\"n\":3,\"entries\":[[8.5,0.0,6.1]"));
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Matrix>(r#"{"n":2,"entries":[[1,2,3]]}"#).is_err());
    }
}
