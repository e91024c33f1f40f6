//! Nonzero-pattern digraphs of square matrices.
//!
//! Node `i` has an edge to node `j` whenever `|a_ij| > zero_tol`. Strong
//! connectivity of this graph is irreducibility of the matrix, and for a
//! strongly connected graph the gcd of its cycle lengths is the
//! imprimitivity index of any nonnegative matrix with that pattern.

use std::collections::VecDeque;

use crate::matrix::Matrix;

/// Adjacency-list digraph over nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn from_pattern(a: &Matrix, zero_tol: f64) -> Self {
        let n = a.n();
        let succ = (0..n)
            .map(|i| (0..n).filter(|&j| a[(i, j)].abs() > zero_tol).collect())
            .collect();
        Digraph { succ }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut succ = vec![Vec::new(); n];
        for &(u, v) in edges {
            succ[u].push(v);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Digraph { succ }
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }

    fn reversed(&self) -> Digraph {
        let mut succ = vec![Vec::new(); self.succ.len()];
        for (u, vs) in self.succ.iter().enumerate() {
            for &v in vs {
                succ[v].push(u);
            }
        }
        Digraph { succ }
    }

    /// BFS distances from `start`; `None` for unreachable nodes.
    pub fn bfs_levels(&self, start: usize) -> Vec<Option<usize>> {
        let mut level = vec![None; self.succ.len()];
        let mut queue = VecDeque::new();
        level[start] = Some(0);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let next = level[u].map(|d| d + 1);
            for &v in &self.succ[u] {
                if level[v].is_none() {
                    level[v] = next;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    /// Forward and backward sweeps from node 0 both reach everything.
    /// A graph with a single node counts as strongly connected.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.succ.len();
        if n <= 1 {
            return true;
        }
        let reach_all = |g: &Digraph| g.bfs_levels(0).iter().all(Option::is_some);
        reach_all(self) && reach_all(&self.reversed())
    }

    /// Gcd of all cycle lengths of a strongly connected graph, or `None`
    /// when the graph is not strongly connected or has no cycle at all.
    pub fn period(&self) -> Option<usize> {
        if self.succ.is_empty() || !self.is_strongly_connected() {
            return None;
        }
        let level = self.bfs_levels(0);
        let mut g = 0usize;
        for (u, vs) in self.succ.iter().enumerate() {
            let lu = level[u]? as i64;
            for &v in vs {
                let lv = level[v]? as i64;
                g = gcd(g, (lu + 1 - lv).unsigned_abs() as usize);
            }
        }
        (g > 0).then_some(g)
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_periods() {
        let three = Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(three.period(), Some(3));
        let mixed = Digraph::from_edges(3, &[(0, 1), (1, 2), (2, 0), (1, 0)]);
        assert_eq!(mixed.period(), Some(1));
        let loop_ = Digraph::from_edges(1, &[(0, 0)]);
        assert_eq!(loop_.period(), Some(1));
        let bip = Digraph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0), (0, 3), (3, 1)]);
        assert_eq!(bip.period(), Some(2));
    }

    #[test]
    fn acyclic_and_disconnected() {
        assert_eq!(Digraph::from_edges(1, &[]).period(), None);
        let chain = Digraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(!chain.is_strongly_connected());
        assert_eq!(chain.period(), None);
        assert!(Digraph::from_edges(1, &[]).is_strongly_connected());
    }
}
