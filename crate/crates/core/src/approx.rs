//! Approximation of sign-symmetric matrices with sign-symmetric compounds by
//! strictly sign-symmetric ones.
//!
//! The target is permuted into `P` whose compound is nonnegative, smoothed
//! to `P_ε = G_ε P G_ε` with the Gaussian kernel `g_ij ∝ exp(-(i-j)²/ε)`,
//! and mapped back. The compound of `P_ε` is assembled as
//! `G_ε^(2) P^(2) G_ε^(2)` from closed-form kernel minors, so every entry is
//! a sum of nonnegative terms and its sign is exact.

use serde::Serialize;

use crate::compound::{second_compound, PairIndexer};
use crate::error::{Error, Result};
use crate::matrix::{conjugate_permutation, Matrix, Permutation, SignatureMatrix};
use crate::relation::{is_transitive, permutation_from_w, w_hat, RelationSet};
use crate::signsym::{detect_strict, detect_weak, signature_from_partition, SignPartition, ZeroBand};
use crate::spectral::eigenvalues;

/// Relative tolerance for the realness of the two leading eigenvalues of the
/// target. Targets are often defective, so this is far looser than the
/// peripheral tolerance.
pub const LEADING_PAIR_TOL: f64 = 1e-4;

/// `ε_k = ε₀ 2^{-k}` for `k < steps`.
pub fn geometric_schedule(eps0: f64, steps: usize) -> Vec<f64> {
    (0..steps).map(|k| eps0 * 0.5f64.powi(k as i32)).collect()
}

#[derive(Debug, Clone)]
pub struct ApproxOptions {
    pub epsilons: Vec<f64>,
    /// Stop at the first accepted step closer than this to the target.
    pub target_distance: Option<f64>,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            epsilons: geometric_schedule(1.0, 40),
            target_distance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepCertificate {
    /// Every entry of the smoothed permuted matrix is positive.
    pub smoothed_positive: bool,
    /// Every entry of its compound is positive.
    pub smoothed_compound_positive: bool,
    /// Strict sign symmetry of the approximant, with its partition.
    pub approximant_partition: Option<SignPartition>,
    pub compound_partition: Option<SignPartition>,
    /// The approximant partition agrees with the one of the target.
    pub matches_target_partition: bool,
    pub min_smoothed_entry: f64,
    pub min_smoothed_compound_entry: f64,
    /// Relative max-entry gap between the compound computed from the
    /// approximant directly and the certified one.
    pub direct_compound_deviation: f64,
    /// Size of the rank-repair perturbation, when used.
    pub rank_repair: Option<f64>,
}

impl StepCertificate {
    pub fn passed(&self) -> bool {
        self.smoothed_positive
            && self.smoothed_compound_positive
            && self.approximant_partition.is_some()
            && self.compound_partition.is_some()
            && self.matches_target_partition
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxStep {
    pub epsilon: f64,
    pub approximant: Matrix,
    pub distance: f64,
    pub certificate: StepCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct RejectedStep {
    pub epsilon: f64,
    pub distance: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxSequence {
    pub target: Matrix,
    pub order: Permutation,
    pub signature: SignatureMatrix,
    pub steps: Vec<ApproxStep>,
    pub rejected: Vec<RejectedStep>,
    /// Max-entry distance of the last accepted step.
    pub converged_norm: f64,
    pub target_distance: Option<f64>,
    pub reached_target: Option<bool>,
    /// The two largest-modulus eigenvalues of the target are real and
    /// nonnegative.
    pub leading_pair_nonnegative: bool,
    pub rank_repair_used: bool,
}

/// Gaussian kernel with unit row sums, and the row sums themselves.
fn kernel(n: usize, eps: f64) -> (Matrix, Vec<f64>) {
    let raw = |i: usize, j: usize| (-((i as f64 - j as f64).powi(2)) / eps).exp();
    let sums: Vec<f64> = (0..n).map(|i| (0..n).map(|j| raw(i, j)).sum()).collect();
    (Matrix::from_fn(n, |i, j| raw(i, j) / sums[i]), sums)
}

/// Second compound of the normalised kernel, each minor in closed form
/// `exp(-a/ε) (1 - exp(-2 (j-i)(l-k)/ε)) / (r_i r_j)`.
fn kernel_compound(n: usize, eps: f64, sums: &[f64]) -> Matrix {
    let idx = PairIndexer::new(n);
    let m = idx.len();
    let sq = |x: usize, y: usize| (x as f64 - y as f64).powi(2);
    Matrix::from_fn(m, |r, c| {
        let (i, j) = idx.pair(r);
        let (k, l) = idx.pair(c);
        let a = sq(i, k) + sq(j, l);
        let spread = 2.0 * ((j - i) * (l - k)) as f64;
        (-a / eps).exp() * -(-spread / eps).exp_m1() / (sums[i] * sums[j])
    })
}

/// Compound of `p` with rounding noise inside the band set to zero. Entries
/// negative beyond the band are a precondition failure.
fn clipped_compound(p: &Matrix) -> Result<Matrix> {
    let c = second_compound(p)?;
    let band = ZeroBand::COMPUTED.threshold(&c);
    let mut min = 0.0f64;
    let clipped = Matrix::from_fn(c.n(), |i, j| {
        let x = c[(i, j)];
        min = min.min(x);
        if x.abs() <= band {
            0.0
        } else {
            x
        }
    });
    if min < -band {
        return Err(Error::PreconditionFailed(format!(
            "permuted compound has a negative entry {min:e}: W does not match the compound signs"
        )));
    }
    Ok(clipped)
}

fn min_entry(m: &Matrix) -> f64 {
    m.as_slice().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Exact signed permutation `S` with `target = S P Sᵀ`, and its compound.
struct Mapping {
    s: Matrix,
    s_t: Matrix,
    s2: Matrix,
    s2_t: Matrix,
}

impl Mapping {
    fn new(order: &Permutation, signature: &SignatureMatrix) -> Result<Self> {
        let s = signature.to_matrix().matmul(&order.to_matrix())?;
        let s2 = second_compound(&s)?;
        Ok(Mapping {
            s_t: s.transpose(),
            s2_t: s2.transpose(),
            s,
            s2,
        })
    }

    fn forward(&self, p: &Matrix) -> Result<Matrix> {
        self.s.matmul(p)?.matmul(&self.s_t)
    }

    fn forward_compound(&self, p2: &Matrix) -> Result<Matrix> {
        self.s2.matmul(p2)?.matmul(&self.s2_t)
    }
}

struct Pipeline<'a> {
    target: &'a Matrix,
    permuted: Matrix,
    permuted_compound: Matrix,
    mapping: Mapping,
    target_partition: SignPartition,
}

impl Pipeline<'_> {
    fn step(&self, eps: f64, repair: bool) -> Result<(Matrix, f64, StepCertificate)> {
        let n = self.permuted.n();
        let (base, base2, eta) = if repair {
            let eta = (-1.0 / eps).exp() * self.permuted.max_abs().max(1.0);
            let bump = Matrix::from_fn(n, |i, j| {
                if i == j && (i == 0 || i == n - 1) {
                    eta
                } else {
                    0.0
                }
            });
            let p = self.permuted.add(&bump)?;
            let p2 = clipped_compound(&p)?;
            (p, p2, Some(eta))
        } else {
            (self.permuted.clone(), self.permuted_compound.clone(), None)
        };

        let (g, sums) = kernel(n, eps);
        let smoothed = g.matmul(&base)?.matmul(&g)?;
        let g2 = kernel_compound(n, eps, &sums);
        let smoothed2 = g2.matmul(&base2)?.matmul(&g2)?;

        let approximant = self.mapping.forward(&smoothed)?;
        let approximant2 = self.mapping.forward_compound(&smoothed2)?;
        let direct = second_compound(&approximant)?;
        let scale = approximant2.max_abs();
        let direct_compound_deviation = if scale > 0.0 {
            direct.max_entry_distance(&approximant2)? / scale
        } else {
            0.0
        };

        let approximant_partition = detect_strict(&approximant, ZeroBand::Exact).ok();
        let compound_partition = detect_strict(&approximant2, ZeroBand::Exact).ok();
        let matches_target_partition = approximant_partition
            .as_ref()
            .is_some_and(|p| p.same_bipartition(self.target_partition.members()));
        let min_smoothed_entry = min_entry(&smoothed);
        let min_smoothed_compound_entry = min_entry(&smoothed2);
        let certificate = StepCertificate {
            smoothed_positive: min_smoothed_entry > 0.0,
            smoothed_compound_positive: min_smoothed_compound_entry > 0.0,
            approximant_partition,
            compound_partition,
            matches_target_partition,
            min_smoothed_entry,
            min_smoothed_compound_entry,
            direct_compound_deviation,
            rank_repair: eta,
        };
        let distance = approximant.max_entry_distance(self.target)?;
        Ok((approximant, distance, certificate))
    }

    fn sweep(
        &self,
        opts: &ApproxOptions,
        repair: bool,
        steps: &mut Vec<ApproxStep>,
        rejected: &mut Vec<RejectedStep>,
    ) -> Result<()> {
        for &eps in &opts.epsilons {
            let (approximant, distance, certificate) = self.step(eps, repair)?;
            let previous = steps.last().map_or(f64::INFINITY, |s| s.distance);
            let reason = if !certificate.passed() {
                Some("certificate failed".to_string())
            } else if distance > previous {
                Some(format!("distance grew from {previous:e}"))
            } else {
                None
            };
            match reason {
                Some(reason) => rejected.push(RejectedStep {
                    epsilon: eps,
                    distance,
                    reason: if repair { format!("{reason} (rank repair)") } else { reason },
                }),
                None => {
                    steps.push(ApproxStep {
                        epsilon: eps,
                        approximant,
                        distance,
                        certificate,
                    });
                    if opts.target_distance.is_some_and(|t| distance < t) {
                        break;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_schedule(opts: &ApproxOptions) -> Result<()> {
    if opts.epsilons.is_empty() {
        return Err(Error::PreconditionFailed("empty epsilon schedule".into()));
    }
    if let Some(bad) = opts.epsilons.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::PreconditionFailed(format!("epsilon {bad} is not positive")));
    }
    Ok(())
}

fn run(
    target: &Matrix,
    nonnegative: &Matrix,
    w: &RelationSet,
    signature: SignatureMatrix,
    target_partition: SignPartition,
    opts: &ApproxOptions,
) -> Result<ApproxSequence> {
    check_schedule(opts)?;
    if target.n() < 2 {
        return Err(Error::DimensionTooSmall { n: target.n(), min: 2 });
    }
    if let Some((i, j, k)) = w.transitivity_violation() {
        return Err(Error::PreconditionFailed(format!(
            "W is not transitive at ({}, {}, {}); no approximating sequence is constructed",
            i + 1,
            j + 1,
            k + 1
        )));
    }
    let order = permutation_from_w(w)?;
    let permuted = conjugate_permutation(nonnegative, &order)?;
    let permuted_compound = clipped_compound(&permuted)?;
    let pipeline = Pipeline {
        target,
        mapping: Mapping::new(&order, &signature)?,
        permuted,
        permuted_compound,
        target_partition,
    };

    let mut steps = Vec::new();
    let mut rejected = Vec::new();
    pipeline.sweep(opts, false, &mut steps, &mut rejected)?;
    let mut rank_repair_used = false;
    if steps.is_empty() {
        rank_repair_used = true;
        pipeline.sweep(opts, true, &mut steps, &mut rejected)?;
    }
    let Some(last) = steps.last() else {
        return Err(Error::CertificationFailed(format!(
            "no step certified among {} epsilons, with and without rank repair",
            opts.epsilons.len()
        )));
    };
    let converged_norm = last.distance;

    let spec = eigenvalues(target, LEADING_PAIR_TOL)?;
    let slack = LEADING_PAIR_TOL * spec.rho.max(f64::MIN_POSITIVE);
    let leading_pair_nonnegative = spec
        .eigenvalues
        .iter()
        .take(2)
        .all(|z| z.im.abs() <= slack && z.re >= -slack);

    Ok(ApproxSequence {
        target: target.clone(),
        order,
        signature,
        converged_norm,
        reached_target: opts.target_distance.map(|t| converged_norm < t),
        target_distance: opts.target_distance,
        steps,
        rejected,
        leading_pair_nonnegative,
        rank_repair_used,
    })
}

/// Approximating sequence for a nonnegative `a` whose compound is
/// nonnegative after the reordering given by the linear order `w`.
pub fn approximate_nonnegative(
    a: &Matrix,
    w: &RelationSet,
    opts: &ApproxOptions,
) -> Result<ApproxSequence> {
    if !a.is_nonnegative() {
        return Err(Error::PreconditionFailed("target has negative entries".into()));
    }
    if w.n() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: w.n(),
        });
    }
    let empty = SignPartition::from_members(a.n(), std::iter::empty(), false)?;
    run(a, a, w, SignatureMatrix::identity(a.n()), empty, opts)
}

/// Approximating sequence for a weakly sign-symmetric `a` with weakly
/// sign-symmetric compound, through `a = D Ã D` with `Ã` nonnegative.
pub fn approximate_jss(a: &Matrix, opts: &ApproxOptions) -> Result<ApproxSequence> {
    if a.n() < 2 {
        return Err(Error::DimensionTooSmall { n: a.n(), min: 2 });
    }
    let j = detect_weak(a, ZeroBand::Exact)?;
    let compound = second_compound(a)?;
    let j_tilde = detect_weak(&compound, ZeroBand::COMPUTED)?;
    let w = w_hat(&j, &j_tilde, &PairIndexer::new(a.n()))?;
    if !is_transitive(&w) {
        return Err(Error::PreconditionFailed(
            "the relation built from J and J~ is not transitive".into(),
        ));
    }
    let d = signature_from_partition(&j);
    let flipped = crate::matrix::conjugate_signature(a, &d)?;
    run(a, &flipped, &w, d, j, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lower_ones() -> Matrix {
        Matrix::from_fn(3, |i, j| if j <= i { 1.0 } else { 0.0 })
    }

    #[test]
    fn kernel_minors_match_direct_minors_at_moderate_eps() {
        let (g, sums) = kernel(4, 0.7);
        let closed = kernel_compound(4, 0.7, &sums);
        let direct = second_compound(&g).unwrap();
        assert!(closed.max_entry_distance(&direct).unwrap() < 1e-14);
        assert!(closed.is_positive());
    }

    #[test]
    fn lower_triangular_ones() {
        let opts = ApproxOptions {
            target_distance: Some(1e-6),
            ..ApproxOptions::default()
        };
        let seq = approximate_nonnegative(&lower_ones(), &RelationSet::natural_order(3), &opts).unwrap();
        assert_eq!(seq.reached_target, Some(true));
        assert!(seq.converged_norm < 1e-6);
        assert!(seq.steps.iter().all(|s| s.certificate.passed() && s.approximant.is_positive()));
        assert!(seq.steps.windows(2).all(|w| w[1].distance <= w[0].distance));
        assert!(!seq.rank_repair_used);
        assert!(seq.leading_pair_nonnegative);
    }

    #[test]
    fn signed3_jss() {
        let a = Matrix::from_rows(&[[8.5, 0.0, 6.1], [-5.6, 3.2, -7.4], [6.0, -2.8, 6.6]]).unwrap();
        let opts = ApproxOptions {
            target_distance: Some(1e-6),
            ..ApproxOptions::default()
        };
        let seq = approximate_jss(&a, &opts).unwrap();
        assert_eq!(seq.reached_target, Some(true));
        for step in &seq.steps {
            let j = step.certificate.approximant_partition.as_ref().unwrap();
            assert!(j.same_bipartition(&[0, 2]));
        }
    }

    #[test]
    fn rank_one_needs_repair() {
        let a = Matrix::from_fn(3, |i, j| ((i + 1) * (j + 2)) as f64);
        let opts = ApproxOptions {
            target_distance: Some(1e-6),
            ..ApproxOptions::default()
        };
        let seq = approximate_nonnegative(&a, &RelationSet::natural_order(3), &opts).unwrap();
        assert!(seq.rank_repair_used);
        assert!(seq.steps.iter().all(|s| s.certificate.rank_repair.is_some()));
        assert_eq!(seq.reached_target, Some(true));
    }

    #[test]
    fn preconditions() {
        let cyclic = Matrix::from_rows(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let w = RelationSet::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(
            approximate_nonnegative(&cyclic, &w, &ApproxOptions::default()),
            Err(Error::PreconditionFailed(_))
        ));
        assert!(matches!(
            approximate_jss(&cyclic, &ApproxOptions::default()),
            Err(Error::PreconditionFailed(_))
        ));
        let neg = Matrix::from_rows(&[[1.0, -1.0], [1.0, 1.0]]).unwrap();
        assert!(approximate_nonnegative(&neg, &RelationSet::natural_order(2), &ApproxOptions::default()).is_err());
        let empty = ApproxOptions {
            epsilons: vec![],
            target_distance: None,
        };
        assert!(approximate_nonnegative(&lower_ones(), &RelationSet::natural_order(3), &empty).is_err());
    }
}
