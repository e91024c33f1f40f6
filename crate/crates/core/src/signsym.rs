//! Strict and weak J-sign-symmetry.
//!
//! A matrix is weakly J-sign-symmetric when its negative entries sit only on
//! index pairs split by a bipartition `J | J^c` and every split pair carries a
//! nonpositive entry; strictly, when in addition no entry is zero (so the
//! negatives are exactly the split pairs). Detection is a 2-colouring of the
//! constraint graph in which a negative entry forces "split" and a positive
//! entry forces "same side". Zero entries impose nothing.
//!
//! Canonical choice: within each connected component of the constraint graph
//! the smallest index is kept out of `J`.

use std::collections::VecDeque;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SignatureMatrix};

/// How entries close to zero are classified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroBand {
    /// Only an exact `0.0` counts as zero.
    Exact,
    /// `|a_ij| <= factor * max |a|` counts as zero.
    Relative(f64),
    /// `|a_ij| <= threshold` counts as zero.
    Absolute(f64),
}

impl ZeroBand {
    /// Band for matrices computed from decimal inputs, `1e-12 * max |a|`.
    pub const COMPUTED: ZeroBand = ZeroBand::Relative(1e-12);

    pub fn threshold(&self, a: &Matrix) -> f64 {
        match *self {
            ZeroBand::Exact => 0.0,
            ZeroBand::Relative(f) => f * a.max_abs(),
            ZeroBand::Absolute(t) => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Sign {
    Negative,
    Zero,
    Positive,
}

fn sign_of(x: f64, threshold: f64) -> Sign {
    if x > threshold {
        Sign::Positive
    } else if x < -threshold {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

/// A bipartition `J ⊆ {0, .., m-1}` certifying (strict or weak) J-sign-symmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPartition {
    universe_size: usize,
    members: Vec<usize>,
    strict: bool,
    components: usize,
}

impl SignPartition {
    /// Wraps an explicit member set, e.g. one written by hand.
    /// The metadata describes a single-component candidate.
    pub fn from_members(
        universe_size: usize,
        members: impl IntoIterator<Item = usize>,
        strict: bool,
    ) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&k) = members.iter().find(|&&k| k >= universe_size) {
            return Err(Error::IndexOutOfRange {
                index: k,
                n: universe_size,
            });
        }
        Ok(SignPartition {
            universe_size,
            members,
            strict,
            components: 1,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    /// Sorted, 0-based.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Whether `i` and `j` lie on different sides of the partition.
    pub fn splits(&self, i: usize, j: usize) -> bool {
        self.contains(i) != self.contains(j)
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn complement(&self) -> SignPartition {
        SignPartition {
            members: (0..self.universe_size)
                .filter(|&k| !self.contains(k))
                .collect(),
            ..self.clone()
        }
    }

    /// Same bipartition, i.e. equal or complementary member sets.
    pub fn same_bipartition(&self, members: &[usize]) -> bool {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        m == self.members || m == self.complement().members
    }

    /// Connected components of the constraint graph.
    pub fn components(&self) -> usize {
        self.components
    }

    pub fn unique_up_to_complement(&self) -> bool {
        self.components <= 1
    }

    /// Number of valid partitions counted up to global complement,
    /// `2^(components - 1)`; `None` if that overflows `u128`.
    pub fn alternatives_count(&self) -> Option<u128> {
        1u128.checked_shl(self.components.saturating_sub(1) as u32)
    }
}

impl Serialize for SignPartition {
    /// Members are written 1-based.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SignPartition", 3)?;
        let members: Vec<usize> = self.members.iter().map(|k| k + 1).collect();
        st.serialize_field("members", &members)?;
        st.serialize_field("strict", &self.strict)?;
        match self.alternatives_count() {
            Some(c) => st.serialize_field("alternatives", &c)?,
            None => st.serialize_field(
                "alternatives",
                &format!("2^{}", self.components.saturating_sub(1)),
            )?,
        }
        st.end()
    }
}

/// Side assignment by BFS over the constraint graph. Edge parity `true`
/// means "split". On conflict returns a witness cycle of indices.
fn two_colour(m: usize, edges: &[Vec<(usize, bool)>]) -> std::result::Result<(Vec<bool>, usize), Vec<usize>> {
    let mut side: Vec<Option<bool>> = vec![None; m];
    let mut parent: Vec<Option<usize>> = vec![None; m];
    let mut components = 0;
    for root in 0..m {
        if side[root].is_some() {
            continue;
        }
        components += 1;
        side[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &(v, split) in &edges[u] {
                let want = su ^ split;
                match side[v] {
                    None => {
                        side[v] = Some(want);
                        parent[v] = Some(u);
                        queue.push_back(v);
                    }
                    Some(sv) if sv != want => return Err(witness_cycle(&parent, u, v)),
                    Some(_) => {}
                }
            }
        }
    }
    Ok((side.into_iter().map(Option::unwrap).collect(), components))
}

/// Tree path `u -> lca -> v`, closed by the offending edge `v -> u`.
fn witness_cycle(parent: &[Option<usize>], u: usize, v: usize) -> Vec<usize> {
    let ancestors = |mut x: usize| {
        let mut path = vec![x];
        while let Some(p) = parent[x] {
            path.push(p);
            x = p;
        }
        path
    };
    let pu = ancestors(u);
    let pv = ancestors(v);
    let lca = *pu.iter().find(|x| pv.contains(x)).expect("same BFS tree");
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != lca).collect();
    cycle.push(lca);
    let tail: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

fn detect(a: &Matrix, band: ZeroBand, strict: bool) -> Result<SignPartition> {
    let m = a.n();
    let t = band.threshold(a);
    for i in 0..m {
        match sign_of(a[(i, i)], t) {
            Sign::Negative => return Err(Error::NegativeDiagonal { index: i }),
            Sign::Zero if strict => return Err(Error::ZeroEntry { row: i, col: i }),
            _ => {}
        }
    }
    let mut edges = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let split = match sign_of(a[(i, j)], t) {
                Sign::Zero if strict => return Err(Error::ZeroEntry { row: i, col: j }),
                Sign::Zero => continue,
                Sign::Negative => true,
                Sign::Positive => false,
            };
            edges[i].push((j, split));
            edges[j].push((i, split));
        }
    }
    let (side, components) = two_colour(m, &edges).map_err(|cycle| Error::SignConflict { cycle })?;
    Ok(SignPartition {
        universe_size: m,
        members: (0..m).filter(|&k| side[k]).collect(),
        strict,
        components,
    })
}

/// Strict J-sign-symmetry: no zero entries, positive diagonal, and negative
/// entries exactly on split pairs.
pub fn detect_strict(a: &Matrix, band: ZeroBand) -> Result<SignPartition> {
    detect(a, band, true)
}

/// Weak J-sign-symmetry; zero entries leave the pair unconstrained.
pub fn detect_weak(a: &Matrix, band: ZeroBand) -> Result<SignPartition> {
    detect(a, band, false)
}

/// `D` with `d_ii = -1` exactly for `i ∈ J`.
pub fn signature_from_partition(j: &SignPartition) -> SignatureMatrix {
    SignatureMatrix::from_negative_set(j.universe_size, j.members.iter().copied())
        .expect("members are within the universe")
}

/// Entry-by-entry check of the defining inequalities, independent of the
/// colouring used by the detectors.
pub fn verify_partition(a: &Matrix, j: &SignPartition, strict: bool, band: ZeroBand) -> bool {
    if a.n() != j.universe_size {
        return false;
    }
    let t = band.threshold(a);
    for r in 0..a.n() {
        for c in 0..a.n() {
            let s = sign_of(a[(r, c)], t);
            let split = j.splits(r, c);
            let ok = match (strict, s) {
                (true, Sign::Zero) => false,
                (true, Sign::Negative) => split,
                (true, Sign::Positive) => !split,
                (false, Sign::Negative) => split,
                (false, Sign::Positive) => !split,
                (false, Sign::Zero) => true,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compound::second_compound;
    use crate::matrix::{conjugate_signature, is_irreducible};

    fn positive4() -> Matrix {
        Matrix::from_rows(&[
            [30.0, 41.0, 3.0, 16.0],
            [41.0, 61.0, 3.0, 20.0],
            [3.0, 3.0, 1.0, 2.0],
            [16.0, 20.0, 2.0, 10.0],
        ])
        .unwrap()
    }

    fn signed3() -> Matrix {
        Matrix::from_rows(&[[8.5, 0.0, 6.1], [-5.6, 3.2, -7.4], [6.0, -2.8, 6.6]]).unwrap()
    }

    #[test]
    fn positive4_compound_partition() {
        let c = second_compound(&positive4()).unwrap();
        let j = detect_strict(&c, ZeroBand::Exact).unwrap();
        // canonical form keeps index 0 out; {1, 6} is the complementary side
        assert_eq!(j.members(), &[1, 2, 3, 4]);
        assert!(j.same_bipartition(&[0, 5]));
        assert!(j.unique_up_to_complement());
        assert!(verify_partition(&c, &j, true, ZeroBand::Exact));
        let bad = SignPartition::from_members(6, [0, 1], true).unwrap();
        assert!(!verify_partition(&c, &bad, true, ZeroBand::Exact));
    }

    #[test]
    fn positive_matrix_has_empty_partition() {
        let j = detect_strict(&positive4(), ZeroBand::Exact).unwrap();
        assert!(j.members().is_empty());
        assert!(verify_partition(&positive4(), &j, true, ZeroBand::Exact));
        assert_eq!(signature_from_partition(&j), SignatureMatrix::identity(4));
    }

    #[test]
    fn signed3_weak() {
        let a = signed3();
        assert_eq!(detect_strict(&a, ZeroBand::Exact), Err(Error::ZeroEntry { row: 0, col: 1 }));
        let j = detect_weak(&a, ZeroBand::Exact).unwrap();
        assert!(j.same_bipartition(&[0, 2]));
        assert!(j.unique_up_to_complement());
        let d = signature_from_partition(&j.complement());
        assert_eq!(d.signs(), &[-1, 1, -1]);
        let t = conjugate_signature(&a, &d).unwrap();
        assert!(t.is_nonnegative());
        assert_eq!(is_irreducible(&t, 0.0), is_irreducible(&a, 0.0));
    }

    #[test]
    fn cyclic3_compound_weak() {
        let c = Matrix::from_rows(&[[0.0, -1.0, 0.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]]).unwrap();
        let j = detect_weak(&c, ZeroBand::Exact).unwrap();
        assert_eq!(j.members(), &[1]);
        assert!(j.same_bipartition(&[0, 2]));
    }

    #[test]
    fn zero_matrix_alternatives() {
        let j = detect_weak(&Matrix::zeros(4), ZeroBand::Exact).unwrap();
        assert!(j.members().is_empty());
        assert_eq!(j.components(), 4);
        assert_eq!(j.alternatives_count(), Some(8));
        assert!(!j.unique_up_to_complement());
    }

    #[test]
    fn conflicts_and_diagonals() {
        let odd = Matrix::from_rows(&[[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]).unwrap();
        match detect_weak(&odd, ZeroBand::Exact) {
            Err(Error::SignConflict { cycle }) => {
                assert_eq!(cycle.len(), 3);
                let mut c = cycle.clone();
                c.sort();
                assert_eq!(c, vec![0, 1, 2]);
            }
            other => panic!("expected conflict, got {other:?}"),
        }
        let asym = Matrix::from_rows(&[[1.0, 2.0], [-1.0, 1.0]]).unwrap();
        assert!(matches!(
            detect_weak(&asym, ZeroBand::Exact),
            Err(Error::SignConflict { .. })
        ));
        let negdiag = Matrix::from_rows(&[[-1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(
            detect_weak(&negdiag, ZeroBand::Exact),
            Err(Error::NegativeDiagonal { index: 0 })
        );
        let zerodiag = Matrix::from_rows(&[[0.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(detect_weak(&zerodiag, ZeroBand::Exact).is_ok());
        assert_eq!(
            detect_strict(&zerodiag, ZeroBand::Exact),
            Err(Error::ZeroEntry { row: 0, col: 0 })
        );
    }

    #[test]
    fn band_treats_noise_as_zero() {
        let a = Matrix::from_rows(&[[1.0, -1e-15], [2.0, 1.0]]).unwrap();
        assert!(detect_weak(&a, ZeroBand::Exact).is_err());
        assert!(detect_weak(&a, ZeroBand::COMPUTED).is_ok());
        assert!(detect_weak(&a, ZeroBand::Absolute(1e-14)).is_ok());
    }

    #[test]
    fn serializes_one_based() {
        let j = SignPartition::from_members(6, [0, 5], true).unwrap();
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"members":[1,6],"strict":true,"alternatives":1}"#
        );
    }
}
