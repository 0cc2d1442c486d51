//! The directed graph associated to an evolution algebra relative to its
//! basis: vertex `i` points to the support of `e_i^2`.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::algebra::EvolutionAlgebra;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct AlgebraGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl AlgebraGraph {
    pub fn from_algebra(a: &EvolutionAlgebra) -> Self {
        let n = a.dim();
        let adj = (0..n)
            .map(|i| (0..n).map(|j| !a.omega(i, j).is_zero()).collect())
            .collect();
        AlgebraGraph { n, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.n,
            });
        }
        Ok(())
    }

    /// First-generation descendants `D^1(i)`: the out-neighbours of `i`.
    pub fn first_generation(&self, i: usize) -> Result<BTreeSet<usize>> {
        self.check_index(i)?;
        Ok((0..self.n).filter(|&j| self.adj[i][j]).collect())
    }

    /// `D^m(i)`, the m-th generation (`m >= 1`).
    pub fn generation(&self, i: usize, m: usize) -> Result<BTreeSet<usize>> {
        self.check_index(i)?;
        if m == 0 {
            return Err(Error::HypothesisViolated(
                "generation index must be at least 1".into(),
            ));
        }
        let mut current = self.first_generation(i)?;
        for _ in 1..m {
            let mut next = BTreeSet::new();
            for &k in &current {
                next.extend(self.first_generation(k)?);
            }
            current = next;
        }
        Ok(current)
    }

    /// `D(i)`: all vertices reachable from `i` by a path of length >= 1.
    pub fn descendants(&self, i: usize) -> Result<BTreeSet<usize>> {
        self.check_index(i)?;
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<usize> = self.first_generation(i)?.into_iter().collect();
        for &v in &queue {
            seen.insert(v);
        }
        while let Some(v) = queue.pop_front() {
            for j in 0..self.n {
                if self.adj[v][j] && seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        Ok(seen)
    }

    /// Shortest path length from `i` to `j` (at least 1), or `None` when no
    /// path exists. `distance(i, i)` is the shortest closed path through `i`.
    pub fn distance(&self, i: usize, j: usize) -> Result<Option<usize>> {
        self.check_index(i)?;
        self.check_index(j)?;
        let mut dist: Vec<Option<usize>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for k in self.first_generation(i)? {
            if dist[k].is_none() {
                dist[k] = Some(1);
                queue.push_back(k);
            }
        }
        while let Some(v) = queue.pop_front() {
            if v == j {
                break;
            }
            let next = dist[v].expect("queued vertices have distances") + 1;
            for w in 0..self.n {
                if self.adj[v][w] && dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist[j])
    }

    /// Strongly connected components (Kosaraju), each sorted ascending.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        fn dfs_order(adj: &[Vec<bool>], v: usize, seen: &mut [bool], order: &mut Vec<usize>) {
            seen[v] = true;
            for w in 0..adj.len() {
                if adj[v][w] && !seen[w] {
                    dfs_order(adj, w, seen, order);
                }
            }
            order.push(v);
        }
        let n = self.n;
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for v in 0..n {
            if !seen[v] {
                dfs_order(&self.adj, v, &mut seen, &mut order);
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        while let Some(v) = order.pop() {
            if comp[v] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![v];
            let mut members = Vec::new();
            comp[v] = id;
            while let Some(u) = stack.pop() {
                members.push(u);
                for w in 0..n {
                    // reversed edge w -> u
                    if self.adj[w][u] && comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    /// Whether the directed graph (optionally restricted to an induced vertex
    /// set) contains a directed cycle of odd length. A digraph has one iff
    /// some strongly connected component fails to be 2-colourable with every
    /// arc crossing colours.
    pub fn has_odd_cycle(&self, restrict: Option<&[usize]>) -> bool {
        let keep: Vec<bool> = match restrict {
            None => vec![true; self.n],
            Some(vs) => {
                let mut k = vec![false; self.n];
                for &v in vs {
                    if v < self.n {
                        k[v] = true;
                    }
                }
                k
            }
        };
        let sub = AlgebraGraph {
            n: self.n,
            adj: (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| keep[i] && keep[j] && self.adj[i][j])
                        .collect()
                })
                .collect(),
        };
        for comp in sub.sccs() {
            if comp.len() == 1 {
                let v = comp[0];
                if sub.adj[v][v] {
                    return true; // self-loop
                }
                continue;
            }
            // 2-colour the component over its internal arcs.
            let in_comp: Vec<bool> = {
                let mut k = vec![false; self.n];
                for &v in &comp {
                    k[v] = true;
                }
                k
            };
            let mut colour: Vec<Option<bool>> = vec![None; self.n];
            let start = comp[0];
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let cv = colour[v].expect("queued vertices are coloured");
                for w in 0..self.n {
                    let arc = (sub.adj[v][w] || sub.adj[w][v]) && in_comp[w] && in_comp[v];
                    if !arc {
                        continue;
                    }
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cv);
                            queue.push_back(w);
                        }
                        Some(cw) => {
                            if cw == cv {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }
}
