//! Natural decomposition of the index set, proportionality constants, twin
//! partition, and cross-basis class alignment.
//!
//! The decomposition splits `{0..n}` into the annihilator class (zero squares)
//! and maximal classes of pairwise proportional squares. Within a class the
//! constant `alpha(j, k)` satisfies `e_k^2 = alpha(j, k) * e_j^2`; we store the
//! constants relative to the class representative (its smallest index), which
//! makes the cocycle identities `alpha(j,j) = 1`, `alpha(j,k) alpha(k,l) =
//! alpha(j,l)` hold by construction.

use num_traits::{One, Zero};

use crate::algebra::EvolutionAlgebra;
use crate::basis_change::{change_basis, BasisChange};
use crate::error::{Error, Result};
use crate::matrix::{support, vec_is_zero};
use crate::rational::{cube, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionClass {
    /// Members in ascending order; the representative is `members[0]`.
    pub members: Vec<usize>,
    /// `alpha_to_rep[t]` is the constant with `e_{members[t]}^2 =
    /// alpha_to_rep[t] * e_rep^2`; the first entry is 1.
    pub alpha_to_rep: Vec<Rational>,
}

impl DecompositionClass {
    pub fn rep(&self) -> usize {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.binary_search(&j).is_ok()
    }

    fn alpha_of(&self, j: usize) -> Option<&Rational> {
        self.members
            .binary_search(&j)
            .ok()
            .map(|pos| &self.alpha_to_rep[pos])
    }

    /// `alpha(j, k)` with `e_k^2 = alpha(j, k) e_j^2`; both must be members.
    pub fn alpha(&self, j: usize, k: usize) -> Option<Rational> {
        let aj = self.alpha_of(j)?;
        let ak = self.alpha_of(k)?;
        Some(ak / aj)
    }

    /// `sum_k alpha(rep, k)^3` over the class. Whether this vanishes does not
    /// depend on the choice of base point inside the class.
    pub fn alpha_cube_sum(&self) -> Rational {
        let mut acc = Rational::zero();
        for a in &self.alpha_to_rep {
            acc += cube(a);
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalDecomposition {
    /// Annihilator indices (zero squares), ascending.
    pub lambda0: Vec<usize>,
    /// Proportionality classes ordered by smallest member.
    pub classes: Vec<DecompositionClass>,
    class_of: Vec<Option<usize>>,
}

impl NaturalDecomposition {
    pub fn compute(a: &EvolutionAlgebra) -> Self {
        let n = a.dim();
        let mut lambda0 = Vec::new();
        let mut classes: Vec<DecompositionClass> = Vec::new();
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let row = a.structure_matrix().row(i);
            if vec_is_zero(row) {
                lambda0.push(i);
                continue;
            }
            let mut assigned = false;
            for (ci, class) in classes.iter_mut().enumerate() {
                let rep_row = a.structure_matrix().row(class.rep());
                if let Some(alpha) = proportionality(rep_row, row) {
                    class.members.push(i);
                    class.alpha_to_rep.push(alpha);
                    class_of[i] = Some(ci);
                    assigned = true;
                    break;
                }
            }
            if !assigned {
                class_of[i] = Some(classes.len());
                classes.push(DecompositionClass {
                    members: vec![i],
                    alpha_to_rep: vec![Rational::one()],
                });
            }
        }
        NaturalDecomposition {
            lambda0,
            classes,
            class_of,
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index_of(&self, j: usize) -> Option<usize> {
        self.class_of.get(j).copied().flatten()
    }

    /// `Lambda(j)`: the proportionality class containing `j`. Asking for an
    /// annihilator index is refused rather than guessing a convention.
    pub fn lambda_of(&self, j: usize) -> Result<&DecompositionClass> {
        match self.class_index_of(j) {
            Some(ci) => Ok(&self.classes[ci]),
            None => Err(Error::IndexInAnnihilator { index: j }),
        }
    }

    /// `alpha(j, k)` with `e_k^2 = alpha(j, k) e_j^2`; errors unless `j` and
    /// `k` share a class.
    pub fn alpha(&self, j: usize, k: usize) -> Result<Rational> {
        let class = self.lambda_of(j)?;
        class.alpha(j, k).ok_or_else(|| {
            Error::HypothesisViolated(format!(
                "e_{} and e_{} do not lie in one proportionality class",
                j + 1,
                k + 1
            ))
        })
    }

    /// True iff `i` and `j` lie in one proportionality class.
    pub fn same_class(&self, i: usize, j: usize) -> bool {
        match (self.class_index_of(i), self.class_index_of(j)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// The factor `lambda` with `row_b = lambda * row_a`, when rows are nonzero
/// and proportional.
fn proportionality(row_a: &[Rational], row_b: &[Rational]) -> Option<Rational> {
    let sup_a = support(row_a);
    if sup_a != support(row_b) {
        return None;
    }
    let k = *sup_a.first()?;
    let lambda = &row_b[k] / &row_a[k];
    for j in &sup_a {
        if row_b[*j] != &lambda * &row_a[*j] {
            return None;
        }
    }
    Some(lambda)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinPartition {
    /// Classes of indices with identical first-generation sets, ordered by
    /// smallest member.
    pub classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl TwinPartition {
    pub fn class_of(&self, i: usize) -> &[usize] {
        &self.classes[self.class_of[i]]
    }

    pub fn are_twins(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }
}

/// Partition by equality of the first-generation descendant sets (row
/// supports).
pub fn twin_partition(a: &EvolutionAlgebra) -> TwinPartition {
    let n = a.dim();
    let supports: Vec<Vec<usize>> = (0..n)
        .map(|i| support(a.structure_matrix().row(i)))
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0usize; n];
    for i in 0..n {
        if let Some(ci) = classes
            .iter()
            .position(|c| supports[c[0]] == supports[i])
        {
            classes[ci].push(i);
            class_of[i] = ci;
        } else {
            class_of[i] = classes.len();
            classes.push(vec![i]);
        }
    }
    TwinPartition { classes, class_of }
}

pub fn is_twin_free(a: &EvolutionAlgebra) -> bool {
    twin_partition(a).classes.iter().all(|c| c.len() == 1)
}

/// Correspondence between the classes of the implicit basis and the classes
/// of the image basis under a natural change.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    /// `old_to_new[t]` is the index of the new class matched with old class
    /// `t`; a bijection.
    pub old_to_new: Vec<usize>,
}

/// Matches old classes with new ones so that the new annihilator part spans
/// the old one and each new class lies inside `span(B_0 union B_t)` for its
/// matched old class `t`. Errors signal a naturality or decomposition bug.
pub fn align_decompositions(a: &EvolutionAlgebra, bc: &BasisChange) -> Result<Alignment> {
    let old = NaturalDecomposition::compute(a);
    let image = change_basis(a, bc)?;
    let new = NaturalDecomposition::compute(&image);

    if old.classes.len() != new.classes.len() {
        return Err(Error::AlignmentFailed(format!(
            "class counts differ: {} vs {}",
            old.classes.len(),
            new.classes.len()
        )));
    }
    if old.lambda0.len() != new.lambda0.len() {
        return Err(Error::AlignmentFailed(
            "annihilator class sizes differ".into(),
        ));
    }
    let in_lambda0: Vec<bool> = {
        let mut v = vec![false; a.dim()];
        for &i in &old.lambda0 {
            v[i] = true;
        }
        v
    };
    // New annihilator vectors must lie in the span of the old ones, which for
    // coordinate vectors is a support condition.
    for &j in &new.lambda0 {
        let col = bc.matrix().col_vec(j);
        if support(&col).iter().any(|&i| !in_lambda0[i]) {
            return Err(Error::AlignmentFailed(format!(
                "new annihilator vector f_{} leaves the old annihilator span",
                j + 1
            )));
        }
    }

    let mut old_to_new = vec![usize::MAX; old.classes.len()];
    for (nt, nclass) in new.classes.iter().enumerate() {
        let mut matched_old: Option<usize> = None;
        for &j in &nclass.members {
            let col = bc.matrix().col_vec(j);
            let mut old_class_hit: Option<usize> = None;
            for &i in &support(&col) {
                if in_lambda0[i] {
                    continue;
                }
                let ci = old.class_index_of(i).expect("non-annihilator index");
                match old_class_hit {
                    None => old_class_hit = Some(ci),
                    Some(prev) if prev == ci => {}
                    Some(prev) => {
                        return Err(Error::AlignmentFailed(format!(
                            "new basis vector f_{} mixes old classes {} and {}",
                            j + 1,
                            prev + 1,
                            ci + 1
                        )));
                    }
                }
            }
            let Some(hit) = old_class_hit else {
                return Err(Error::AlignmentFailed(format!(
                    "new class member f_{} lies in the old annihilator span",
                    j + 1
                )));
            };
            match matched_old {
                None => matched_old = Some(hit),
                Some(prev) if prev == hit => {}
                Some(prev) => {
                    return Err(Error::AlignmentFailed(format!(
                        "new class {} spreads over old classes {} and {}",
                        nt + 1,
                        prev + 1,
                        hit + 1
                    )));
                }
            }
        }
        let ot = matched_old.expect("classes are nonempty");
        if old_to_new[ot] != usize::MAX {
            return Err(Error::AlignmentFailed(format!(
                "old class {} matched twice",
                ot + 1
            )));
        }
        if old.classes[ot].len() != nclass.len() {
            return Err(Error::AlignmentFailed(format!(
                "matched classes have different sizes: |old {}| = {}, |new {}| = {}",
                ot + 1,
                old.classes[ot].len(),
                nt + 1,
                nclass.len()
            )));
        }
        old_to_new[ot] = nt;
    }
    Ok(Alignment { old_to_new })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::EvolutionAlgebra;
    use crate::fixtures::{seven_dim_odd_cycles, volterra_3dim as volterra_3dim_example};
    use crate::matrix::MatrixQ;
    use crate::rational::{q, qr};

    #[test]
    fn decomposition_of_worked_example() {
        // Rows 0 and 2 are proportional with factor -1.
        let d = NaturalDecomposition::compute(&volterra_3dim_example());
        assert!(d.lambda0.is_empty());
        assert_eq!(d.classes.len(), 2);
        assert_eq!(d.classes[0].members, vec![0, 2]);
        assert_eq!(d.classes[1].members, vec![1]);
        assert_eq!(d.alpha(0, 2).unwrap(), q(-1));
        assert_eq!(d.alpha(2, 0).unwrap(), q(-1));
        assert_eq!(d.alpha(0, 0).unwrap(), q(1));
    }

    #[test]
    fn decomposition_of_seven_dim_example() {
        let a = seven_dim_odd_cycles();
        let d = NaturalDecomposition::compute(&a);
        let members: Vec<Vec<usize>> = d.classes.iter().map(|c| c.members.clone()).collect();
        assert_eq!(
            members,
            vec![vec![0], vec![1, 2], vec![3, 4], vec![5, 6]]
        );
        for t in 1..4 {
            assert_eq!(
                d.classes[t].alpha(d.classes[t].members[0], d.classes[t].members[1]),
                Some(q(-1))
            );
        }
    }

    #[test]
    fn identity_matrix_gives_singletons() {
        let a = EvolutionAlgebra::new(MatrixQ::identity(4)).unwrap();
        let d = NaturalDecomposition::compute(&a);
        assert_eq!(d.classes.len(), 4);
        assert!(d.classes.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn lambda_of_annihilator_is_refused() {
        let a = EvolutionAlgebra::from_i64(&[&[0, 0], &[1, 0]]);
        let d = NaturalDecomposition::compute(&a);
        assert_eq!(d.lambda0, vec![0]);
        assert!(matches!(
            d.lambda_of(0),
            Err(Error::IndexInAnnihilator { index: 0 })
        ));
        assert_eq!(d.lambda_of(1).unwrap().members, vec![1]);
    }

    #[test]
    fn alpha_cocycle_relations() {
        let a = EvolutionAlgebra::new(MatrixQ::from_fn(3, 3, |i, j| {
            // rows: v, 2v, -v/3 for v = (1, 2, 0)
            let base = [q(1), q(2), q(0)];
            let factors = [q(1), q(2), qr(-1, 3)];
            &factors[i] * &base[j]
        }))
        .unwrap();
        let d = NaturalDecomposition::compute(&a);
        assert_eq!(d.classes.len(), 1);
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let ajk = d.alpha(j, k).unwrap();
                    let akl = d.alpha(k, l).unwrap();
                    let ajl = d.alpha(j, l).unwrap();
                    assert_eq!(&ajk * &akl, ajl);
                }
                assert_eq!(
                    d.alpha(j, k).unwrap() * d.alpha(k, j).unwrap(),
                    q(1)
                );
            }
        }
    }

    #[test]
    fn twin_partition_of_worked_example() {
        let t = twin_partition(&volterra_3dim_example());
        assert_eq!(t.classes, vec![vec![0, 2], vec![1]]);
        assert!(t.are_twins(0, 2));
        assert!(!t.are_twins(0, 1));
        assert!(is_twin_free(
            &EvolutionAlgebra::new(MatrixQ::identity(3)).unwrap()
        ));
    }

    #[test]
    fn alignment_of_worked_example_change() {
        let a = volterra_3dim_example();
        let p = MatrixQ::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => q(2),
            (2, 0) => q(1),
            (0, 1) => qr(1, 2),
            (2, 1) => q(1),
            (1, 2) => q(1),
            _ => q(0),
        });
        let bc = BasisChange::new(&a, p).unwrap();
        let al = align_decompositions(&a, &bc).unwrap();
        // Old class {e_1, e_3} matches new class {f_1, f_2}; old {e_2}
        // matches new {f_3}.
        assert_eq!(al.old_to_new, vec![0, 1]);
    }
}
