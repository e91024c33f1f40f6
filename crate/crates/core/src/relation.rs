//! Relation sets `W ⊆ {0..n-1}²` with `W ∪ W~ = everything` and
//! `W ∩ W~ = Δ`: reflexive, antisymmetric, connected relations. Exactly one
//! of `(i, j)`, `(j, i)` is in `W` for each `i != j`.
//!
//! Also the translations between relation sets, sign partitions of the
//! compound, and permutations.

use std::fmt::Write as _;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::compound::{pair_count, PairIndexer};
use crate::error::{Error, Result};
use crate::matrix::Permutation;
use crate::signsym::SignPartition;

/// Largest `n` accepted by [`enumerate_relations`].
pub const MAX_ENUMERATION_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationSet {
    n: usize,
    table: Vec<bool>,
}

impl RelationSet {
    /// Checks both defining conditions on a raw `n x n` membership table.
    pub fn from_table(n: usize, table: Vec<bool>) -> Result<Self> {
        if table.len() != n * n {
            return Err(Error::InvalidRelation(format!(
                "table has {} cells, expected {}",
                table.len(),
                n * n
            )));
        }
        for i in 0..n {
            if !table[i * n + i] {
                return Err(Error::InvalidRelation(format!("diagonal pair ({i}, {i}) missing")));
            }
            for j in i + 1..n {
                match (table[i * n + j], table[j * n + i]) {
                    (true, true) => {
                        return Err(Error::InvalidRelation(format!(
                            "both ({i}, {j}) and ({j}, {i}) present"
                        )))
                    }
                    (false, false) => {
                        return Err(Error::InvalidRelation(format!(
                            "neither ({i}, {j}) nor ({j}, {i}) present"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(RelationSet { n, table })
    }

    /// Off-diagonal pairs of `W`; the diagonal is added.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut table = vec![false; n * n];
        for i in 0..n {
            table[i * n + i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), n });
            }
            if i == j {
                continue;
            }
            if table[i * n + j] {
                return Err(Error::InvalidRelation(format!("pair ({i}, {j}) listed twice")));
            }
            table[i * n + j] = true;
        }
        RelationSet::from_table(n, table)
    }

    /// `M = {(i, j) : i <= j}`.
    pub fn natural_order(n: usize) -> Self {
        let table = (0..n * n).map(|k| k / n <= k % n).collect();
        RelationSet { n, table }
    }

    /// Sorted pair number `α` is oriented `(i, j)`, `i < j`, when `keep(α)`
    /// holds and `(j, i)` otherwise.
    fn from_orientation(n: usize, keep: impl Fn(usize) -> bool) -> Self {
        let idx = PairIndexer::new(n);
        let mut table = vec![false; n * n];
        for i in 0..n {
            table[i * n + i] = true;
        }
        for (alpha, &(i, j)) in idx.pairs().iter().enumerate() {
            if keep(alpha) {
                table[i * n + j] = true;
            } else {
                table[j * n + i] = true;
            }
        }
        RelationSet { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.table[i * self.n + j]
    }

    /// `W \ Δ` ordered lexicographically as the pairs are written.
    pub fn basis_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.contains(i, j))
            .collect()
    }

    /// The reversed relation `W~`.
    pub fn transpose(&self) -> RelationSet {
        let n = self.n;
        RelationSet {
            n,
            table: (0..n * n).map(|k| self.table[(k % n) * n + k / n]).collect(),
        }
    }

    /// First triple violating transitivity, if any.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if !self.contains(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.contains(j, k) && !self.contains(i, k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// ASCII dot grid: column `i` left to right, row `j` bottom to top,
    /// `*` for pairs of `W \ Δ`, `o` for everything else.
    pub fn dot_grid(&self) -> String {
        let mut out = String::new();
        for j in (0..self.n).rev() {
            let row: Vec<&str> = (0..self.n)
                .map(|i| if i != j && self.contains(i, j) { "*" } else { "o" })
                .collect();
            let _ = writeln!(out, "{} | {}", j + 1, row.join(" "));
        }
        let _ = write!(out, "    ");
        for i in 0..self.n {
            let _ = write!(out, "{} ", i + 1);
        }
        out.truncate(out.trim_end().len());
        out
    }
}

impl Serialize for RelationSet {
    /// Off-diagonal pairs, 1-based.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.basis_pairs();
        let mut seq = s.serialize_seq(Some(pairs.len()))?;
        for (i, j) in pairs {
            seq.serialize_element(&[i + 1, j + 1])?;
        }
        seq.end()
    }
}

pub fn is_transitive(w: &RelationSet) -> bool {
    w.transitivity_violation().is_none()
}

fn check_universe(j: &SignPartition, expected: usize) -> Result<()> {
    if j.universe_size() == expected {
        Ok(())
    } else {
        Err(Error::UniverseMismatch {
            expected,
            found: j.universe_size(),
        })
    }
}

/// `(i, j) ∈ W` iff `i < j` and `α(i, j) ∈ J`, or `i > j` and `α(j, i) ∉ J`.
pub fn w_from_partition(j: &SignPartition, indexer: &PairIndexer) -> Result<RelationSet> {
    check_universe(j, indexer.len())?;
    Ok(RelationSet::from_orientation(indexer.n(), |alpha| {
        j.contains(alpha)
    }))
}

/// `J = {α : sorted pair α lies in W}`.
pub fn partition_from_w(w: &RelationSet, indexer: &PairIndexer) -> Result<SignPartition> {
    if indexer.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            found: indexer.n(),
        });
    }
    let members = indexer
        .pairs()
        .iter()
        .enumerate()
        .filter(|(_, &(i, k))| w.contains(i, k))
        .map(|(alpha, _)| alpha);
    SignPartition::from_members(indexer.len(), members, false)
}

/// `Ŵ(J, J~)` from a partition of the indices and a partition of the pair
/// numbers. For `i < j` with pair number `α`, and `split` meaning exactly
/// one of `i, j` lies in `J`:
///
/// * (a) `(i, j)` when not split and `α ∈ J~`;
/// * (b) `(i, j)` when split and `α ∉ J~`;
/// * (c) `(j, i)` when not split and `α ∉ J~`;
/// * (d) `(j, i)` when split and `α ∈ J~`.
pub fn w_hat(j: &SignPartition, j_tilde: &SignPartition, indexer: &PairIndexer) -> Result<RelationSet> {
    check_universe(j, indexer.n())?;
    check_universe(j_tilde, indexer.len())?;
    let n = indexer.n();
    let mut table = vec![false; n * n];
    for i in 0..n {
        table[i * n + i] = true;
    }
    for (alpha, &(lo, hi)) in indexer.pairs().iter().enumerate() {
        let split = j.splits(lo, hi);
        let in_tilde = j_tilde.contains(alpha);
        let forward = match (split, in_tilde) {
            (false, true) => true,   // (a)
            (true, false) => true,   // (b)
            (false, false) => false, // (c)
            (true, true) => false,   // (d)
        };
        if forward {
            table[lo * n + hi] = true;
        } else {
            table[hi * n + lo] = true;
        }
    }
    RelationSet::from_table(n, table)
}

/// Recovers the ordering `θ` of a linear order: `(i, j) ∈ W` iff
/// `θ^{-1}(i) <= θ^{-1}(j)`.
///
/// Insertion: with the first `j` indices already ordered as `θ_{j-1}`, let
/// `l` be the last position whose element precedes `j` (0 if none) and place
/// `j` right after it.
pub fn permutation_from_w(w: &RelationSet) -> Result<Permutation> {
    if let Some((i, j, k)) = w.transitivity_violation() {
        return Err(Error::NotTransitive { i, j, k });
    }
    let mut order: Vec<usize> = Vec::with_capacity(w.n());
    for j in 0..w.n() {
        let l = order
            .iter()
            .rposition(|&x| w.contains(x, j))
            .map_or(0, |p| p + 1);
        order.insert(l, j);
    }
    Permutation::new(order)
}

pub fn w_from_permutation(theta: &Permutation) -> RelationSet {
    let n = theta.n();
    let pos = theta.inverse();
    let table = (0..n * n).map(|k| pos.apply(k / n) <= pos.apply(k % n)).collect();
    RelationSet { n, table }
}

/// All `2^C(n,2)` relation sets. Bit `α` of the counter set means the sorted
/// pair `α` keeps its natural orientation, so the last item is `M`.
pub fn enumerate_relations(n: usize) -> Result<impl Iterator<Item = RelationSet>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::EnumerationTooLarge {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    let total = 1u64 << pair_count(n);
    Ok((0..total).map(move |mask| RelationSet::from_orientation(n, |alpha| mask >> alpha & 1 == 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(m: usize, members: &[usize]) -> SignPartition {
        SignPartition::from_members(m, members.iter().copied(), false).unwrap()
    }

    #[test]
    fn validation() {
        assert!(RelationSet::from_pairs(3, &[(0, 1), (1, 2)]).is_err());
        assert!(RelationSet::from_pairs(2, &[(0, 1), (1, 0)]).is_err());
        assert!(RelationSet::from_pairs(2, &[(0, 3)]).is_err());
        assert!(RelationSet::from_table(2, vec![false, true, false, true]).is_err());
        assert!(RelationSet::from_pairs(1, &[]).is_ok());
    }

    #[test]
    fn transitivity_examples() {
        assert!(is_transitive(&RelationSet::natural_order(5)));
        let cycle = RelationSet::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!is_transitive(&cycle));
        let order = RelationSet::from_pairs(3, &[(0, 1), (0, 2), (2, 1)]).unwrap();
        assert!(is_transitive(&order));
    }

    #[test]
    fn partition_correspondence_examples() {
        let idx = PairIndexer::new(3);
        let w = w_from_partition(&part(3, &[0, 2]), &idx).unwrap();
        assert_eq!(w.basis_pairs(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(partition_from_w(&w, &idx).unwrap().members(), &[0, 2]);
        let all = w_from_partition(&part(3, &[0, 1, 2]), &idx).unwrap();
        assert_eq!(all, RelationSet::natural_order(3));
        assert_eq!(
            partition_from_w(&RelationSet::natural_order(4), &PairIndexer::new(4))
                .unwrap()
                .members(),
            &[0, 1, 2, 3, 4, 5]
        );
        assert!(matches!(
            w_from_partition(&part(4, &[]), &idx),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn w_hat_signed3() {
        let idx = PairIndexer::new(3);
        let w = w_hat(&part(3, &[0, 2]), &part(3, &[1, 2]), &idx).unwrap();
        assert_eq!(w.basis_pairs(), vec![(0, 1), (0, 2), (2, 1)]);
        // complementing J does not move any pair
        assert_eq!(w_hat(&part(3, &[1]), &part(3, &[1, 2]), &idx).unwrap(), w);
        // complementing J~ reverses the relation
        assert_eq!(
            w_hat(&part(3, &[0, 2]), &part(3, &[0]), &idx).unwrap(),
            w.transpose()
        );
    }

    #[test]
    fn w_hat_degenerate_cases() {
        let idx = PairIndexer::new(4);
        let jt = part(6, &[1, 4, 5]);
        assert_eq!(
            w_hat(&part(4, &[]), &jt, &idx).unwrap(),
            w_from_partition(&jt, &idx).unwrap()
        );
        assert_eq!(
            w_hat(&part(4, &[0, 1, 2, 3]), &part(6, &[0, 1, 2, 3, 4, 5]), &idx).unwrap(),
            RelationSet::natural_order(4)
        );
    }

    #[test]
    fn permutations() {
        assert_eq!(
            permutation_from_w(&RelationSet::natural_order(4)).unwrap(),
            Permutation::identity(4)
        );
        let order = RelationSet::from_pairs(3, &[(0, 1), (0, 2), (2, 1)]).unwrap();
        let theta = permutation_from_w(&order).unwrap();
        assert_eq!(theta.image(), &[0, 2, 1]);
        assert_eq!(w_from_permutation(&theta), order);
        assert_eq!(
            w_from_permutation(&Permutation::identity(3)),
            RelationSet::natural_order(3)
        );
        let two = RelationSet::from_pairs(2, &[(1, 0)]).unwrap();
        assert_eq!(permutation_from_w(&two).unwrap().image(), &[1, 0]);
        let cycle = RelationSet::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(permutation_from_w(&cycle), Err(Error::NotTransitive { .. })));
    }

    #[test]
    fn enumeration_counts() {
        for (n, total, transitive) in [(2, 2, 2), (3, 8, 6), (4, 64, 24)] {
            let all: Vec<_> = enumerate_relations(n).unwrap().collect();
            assert_eq!(all.len(), total);
            assert_eq!(all.iter().filter(|w| is_transitive(w)).count(), transitive);
        }
        assert!(enumerate_relations(7).is_err());
        assert_eq!(
            enumerate_relations(3).unwrap().last().unwrap(),
            RelationSet::natural_order(3)
        );
    }

    #[test]
    fn grid_and_serialization() {
        let cycle = RelationSet::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle.dot_grid(), "3 | o * o\n2 | * o o\n1 | o o *\n    1 2 3");
        assert_eq!(serde_json::to_string(&cycle).unwrap(), "[[1,2],[2,3],[3,1]]");
    }
}
