//! Spectra, Perron–Frobenius data and the peripheral-spectrum classifier.

mod classify;
mod eigen;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::compound::w_matrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::pattern::Digraph;
use crate::relation::RelationSet;

pub use classify::{classify, classify_with, Case, Check, Classification, ClassifyOptions};

/// Relative distance to `ρ` under which an eigenvalue counts as peripheral.
pub const PERIPHERAL_TOL: f64 = 1e-7;

/// Eigenvalues below this fraction of `ρ` are treated as one cluster at the
/// origin by the rotation check; defective zero eigenvalues scatter far more
/// than the peripheral ones.
const NULL_CLUSTER: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    /// By decreasing modulus, then decreasing real part, then decreasing
    /// imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub rho: f64,
    /// Count of peripheral eigenvalues.
    pub h: usize,
    pub peripheral: Vec<Complex64>,
    /// `||A v - λ v||_2` for the unit eigenvector of each eigenvalue.
    pub residuals: Vec<f64>,
    pub residual_bound: f64,
    pub peripheral_tol: f64,
    /// Real eigenvector for `λ = ρ`, scaled to unit norm with a nonnegative
    /// largest-magnitude entry.
    pub leading_vector: Option<Vec<f64>>,
    #[serde(skip)]
    pub vectors: Vec<Vec<Complex64>>,
}

impl SpectralReport {
    /// Smallest distance from `lambda` to an eigenvalue other than the one
    /// at `index`.
    pub fn gap(&self, index: usize) -> f64 {
        let lambda = self.eigenvalues[index];
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != index)
            .map(|(_, mu)| (lambda - mu).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the eigenvalue closest to `z`.
    pub fn nearest(&self, z: Complex64) -> Option<usize> {
        self.eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
            .map(|(k, _)| k)
    }

    /// Eigenvalues with modulus within `tol * ρ` of `radius`.
    pub fn on_circle(&self, radius: f64, tol: f64) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|z| (z.norm() - radius).abs() <= tol * self.rho.max(f64::MIN_POSITIVE))
            .collect()
    }
}

/// Full spectrum of `a` with residuals; `tol` is the relative peripheral
/// tolerance.
pub fn eigenvalues(a: &Matrix, tol: f64) -> Result<SpectralReport> {
    let raw = eigen::solve(a)?;
    let rho = raw.values.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let key = |z: &Complex64| -> i64 {
        if rho == 0.0 {
            0
        } else {
            (z.norm() / rho * 1e10).round() as i64
        }
    };
    let mut order: Vec<usize> = (0..raw.values.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&raw.values[i], &raw.values[j]);
        key(b)
            .cmp(&key(a))
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    let eigenvalues: Vec<Complex64> = order.iter().map(|&k| raw.values[k]).collect();
    let vectors: Vec<Vec<Complex64>> = order.iter().map(|&k| raw.vectors[k].clone()).collect();
    let residuals: Vec<f64> = eigenvalues
        .iter()
        .zip(&vectors)
        .map(|(&l, v)| eigen::residual(a, l, v))
        .collect();
    let residual_bound = residuals.iter().copied().fold(0.0, f64::max);

    let peripheral: Vec<Complex64> = eigenvalues
        .iter()
        .copied()
        .filter(|z| z.norm() >= rho * (1.0 - tol))
        .collect();

    let leading_vector = eigenvalues
        .iter()
        .position(|z| rho > 0.0 && (z.re - rho).abs() <= tol * rho && z.im.abs() <= tol * rho)
        .map(|k| {
            let mut v: Vec<f64> = vectors[k].iter().map(|z| z.re).collect();
            let big = v.iter().copied().fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let s = if big < 0.0 { -norm } else { norm };
            if s != 0.0 {
                v.iter_mut().for_each(|x| *x /= s);
            }
            v
        });

    Ok(SpectralReport {
        h: peripheral.len(),
        eigenvalues,
        rho,
        peripheral,
        residuals,
        residual_bound,
        peripheral_tol: tol,
        leading_vector,
        vectors,
    })
}

/// Imprimitivity index of an irreducible matrix: the peripheral count of
/// `report`, which must equal the gcd of cycle lengths of the pattern
/// digraph of `a`.
pub fn imprimitivity_index(a: &Matrix, report: &SpectralReport, zero_tol: f64) -> Result<usize> {
    let graph = Digraph::from_pattern(a, zero_tol);
    if !graph.is_strongly_connected() {
        return Err(Error::NotIrreducible);
    }
    if a.n() == 1 {
        return Ok(1);
    }
    let cyclic = graph.period().ok_or(Error::NotIrreducible)?;
    if cyclic != report.h {
        return Err(Error::MethodDisagreement {
            spectral: report.h,
            graph: cyclic,
        });
    }
    Ok(cyclic)
}

/// Greedy nearest pairing of two equally long multisets. Returns the largest
/// matched distance.
pub fn match_multisets(left: &[Complex64], right: &[Complex64]) -> Option<f64> {
    if left.len() != right.len() {
        return None;
    }
    let mut candidates: Vec<(f64, usize, usize)> = left
        .iter()
        .enumerate()
        .flat_map(|(i, a)| right.iter().enumerate().map(move |(j, b)| ((a - b).norm(), i, j)))
        .collect();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_l = vec![false; left.len()];
    let mut used_r = vec![false; right.len()];
    let mut worst = 0.0f64;
    let mut matched = 0;
    for (dist, i, j) in candidates {
        if used_l[i] || used_r[j] {
            continue;
        }
        used_l[i] = true;
        used_r[j] = true;
        worst = worst.max(dist);
        matched += 1;
        if matched == left.len() {
            break;
        }
    }
    Some(worst)
}

/// The `h`-th roots of `ρ^h`.
pub fn roots_of_rho(rho: f64, h: usize) -> Vec<Complex64> {
    (0..h)
        .map(|k| Complex64::from_polar(rho, TAU * k as f64 / h as f64))
        .collect()
}

/// Deviation of the peripheral spectrum from the `h`-th roots of `ρ^h`, and of
/// the spectrum from its own rotation by `2π/h`, both relative to `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrobeniusDeviation {
    pub roots: f64,
    pub rotation: f64,
}

pub fn frobenius_deviation(report: &SpectralReport, h: usize) -> FrobeniusDeviation {
    let rho = report.rho;
    if rho == 0.0 || h == 0 {
        return FrobeniusDeviation {
            roots: 0.0,
            rotation: 0.0,
        };
    }
    let roots = match_multisets(&report.peripheral, &roots_of_rho(rho, h))
        .map_or(f64::INFINITY, |d| d / rho);
    let visible: Vec<Complex64> = report
        .eigenvalues
        .iter()
        .copied()
        .filter(|z| z.norm() > NULL_CLUSTER * rho)
        .collect();
    let turn = Complex64::from_polar(1.0, TAU / h as f64);
    let rotated: Vec<Complex64> = visible.iter().map(|z| z * turn).collect();
    let rotation = match_multisets(&visible, &rotated).map_or(f64::INFINITY, |d| d / rho);
    FrobeniusDeviation { roots, rotation }
}

/// Outcome of comparing the spectrum of a W-matrix with the pairwise
/// products of eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductCheck {
    pub passed: bool,
    pub worst_mismatch: f64,
    pub threshold: f64,
    pub detail: Option<String>,
}

impl ProductCheck {
    fn failed(detail: String) -> Self {
        ProductCheck {
            passed: false,
            worst_mismatch: f64::INFINITY,
            threshold: 0.0,
            detail: Some(detail),
        }
    }
}

/// Matches the eigenvalues of `w_matrix(a, w)` against `{λ_i λ_j : i < j}`
/// with threshold `tol · ρ(A)²` (`tol` when `ρ = 0`).
pub fn check_product_spectrum(a: &Matrix, w: &RelationSet, tol: f64) -> ProductCheck {
    let wm = match w_matrix(a, w) {
        Ok(m) => m,
        Err(e) => return ProductCheck::failed(e.to_string()),
    };
    let (base, wedge) = match (eigenvalues(a, PERIPHERAL_TOL), eigenvalues(&wm, PERIPHERAL_TOL)) {
        (Ok(b), Ok(w)) => (b, w),
        (Err(e), _) | (_, Err(e)) => return ProductCheck::failed(e.to_string()),
    };
    let lambda = &base.eigenvalues;
    let products: Vec<Complex64> = (0..lambda.len())
        .flat_map(|i| (i + 1..lambda.len()).map(move |j| lambda[i] * lambda[j]))
        .collect();
    let worst = match_multisets(&wedge.eigenvalues, &products).unwrap_or(f64::INFINITY);
    let scale = base.rho * base.rho;
    let threshold = if scale > 0.0 { tol * scale } else { tol };
    let passed = worst <= threshold;
    ProductCheck {
        passed,
        worst_mismatch: worst,
        threshold,
        detail: (!passed).then(|| format!("worst pairing distance {worst:e} exceeds {threshold:e}")),
    }
}
