//! The evolution algebra value type and its elementary structural predicates.
//!
//! Conventions, used verbatim everywhere else in the crate:
//! - indices are 0-based in the API (the CLI prints 1-based labels);
//! - row `i` of the structure matrix holds the coordinates of `e_i^2`, i.e.
//!   `e_i^2 = sum_k w_ik e_k`;
//! - the implicit basis is natural: `e_i e_j = 0` for `i != j` is a modelling
//!   assumption, not stored data.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{support, vec_is_zero, vec_zero, MatrixQ, Vector};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvolutionAlgebra {
    m: MatrixQ,
}

impl EvolutionAlgebra {
    pub fn new(structure_matrix: MatrixQ) -> Result<Self> {
        if !structure_matrix.is_square() {
            return Err(Error::NotSquare {
                rows: structure_matrix.rows(),
                cols: structure_matrix.cols(),
            });
        }
        Ok(EvolutionAlgebra {
            m: structure_matrix,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(MatrixQ::from_i64(rows)).expect("literal structure matrix must be square")
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn structure_matrix(&self) -> &MatrixQ {
        &self.m
    }

    /// Structure constant `w_ij`.
    pub fn omega(&self, i: usize, j: usize) -> &Rational {
        self.m.at(i, j)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Product of two elements given by coordinates: since distinct basis
    /// vectors annihilate, `u v = sum_i u_i v_i e_i^2`.
    pub fn product(&self, u: &[Rational], v: &[Rational]) -> Result<Vector> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut out = vec_zero(self.dim());
        for i in 0..self.dim() {
            let c = &u[i] * &v[i];
            if c.is_zero() {
                continue;
            }
            for k in 0..self.dim() {
                let w = self.m.at(i, k);
                if !w.is_zero() {
                    out[k] += &c * w;
                }
            }
        }
        Ok(out)
    }

    /// `e_i^2` as a coordinate vector (row `i` of the structure matrix).
    pub fn square(&self, i: usize) -> Result<Vector> {
        self.check_index(i)?;
        Ok(self.m.row_vec(i))
    }

    /// `e_i^2 e_i^2`.
    pub fn fourth_power(&self, i: usize) -> Result<Vector> {
        let s = self.square(i)?;
        self.product(&s, &s)
    }

    /// Indices of basis vectors with zero square; these span the annihilator.
    pub fn annihilator_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| vec_is_zero(self.m.row(i)))
            .collect()
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.annihilator_indices().is_empty()
    }

    /// Greedy ascending scan for a set `Gamma` of indices whose squares form a
    /// basis of `A^2`. Returns `(Gamma, dim A^2)`.
    pub fn squares_span(&self) -> (Vec<usize>, usize) {
        let mut gamma = Vec::new();
        let mut picked: Vec<Vector> = Vec::new();
        let mut rank = 0;
        for i in 0..self.dim() {
            let mut candidate = picked.clone();
            candidate.push(self.m.row_vec(i));
            let r = MatrixQ::from_rows(candidate.clone())
                .expect("rows share a length")
                .rank();
            if r > rank {
                rank = r;
                gamma.push(i);
                picked = candidate;
            }
        }
        (gamma, rank)
    }

    /// Whether the structure matrix is skew-symmetric (Volterra relative to
    /// the implicit basis).
    pub fn is_volterra_basis(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                if *self.m.at(i, j) != -self.m.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Property (2LI): every pair of distinct basis squares is linearly
    /// independent.
    pub fn has_property_2li(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let pair = vec![self.m.row_vec(i), self.m.row_vec(j)];
                if MatrixQ::from_rows(pair).expect("rows share a length").rank() != 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Finest partition of the index set into connected components of the
    /// symmetric relation `i ~ j iff w_ij != 0 or w_ji != 0`. Each part spans
    /// an evolution ideal and the structure matrix is block-diagonal under a
    /// simultaneous permutation grouping the parts.
    pub fn ideal_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for i in 0..n {
            for j in 0..n {
                if !self.m.at(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut root_to_block: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            match root_to_block[r] {
                Some(b) => blocks[b].push(i),
                None => {
                    root_to_block[r] = Some(blocks.len());
                    blocks.push(vec![i]);
                }
            }
        }
        blocks
    }
}

/// Support of a coordinate vector (re-exported next to the algebra ops).
pub fn support_of(u: &[Rational]) -> Vec<usize> {
    support(u)
}
