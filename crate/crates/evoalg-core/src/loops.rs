//! Loops of an evolution algebra (nonzero diagonal entries of the structure
//! matrix), the loop-count invariance decision, and witness natural bases
//! that change the loop count.

use num_traits::Zero;

use crate::algebra::EvolutionAlgebra;
use crate::basis_change::{change_basis, random_natural_basis, BasisChange};
use crate::decomposition::{align_decompositions, is_twin_free, NaturalDecomposition};
use crate::error::{Error, Result};
use crate::matrix::MatrixQ;
use crate::rational::{q, Rational};

/// Indices with `w_ii != 0`.
pub fn loop_set(a: &EvolutionAlgebra) -> Vec<usize> {
    (0..a.dim()).filter(|&i| !a.omega(i, i).is_zero()).collect()
}

/// Indices with `w_ii == 0`.
pub fn noloop_set(a: &EvolutionAlgebra) -> Vec<usize> {
    (0..a.dim()).filter(|&i| a.omega(i, i).is_zero()).collect()
}

/// Sufficient conditions under which the loop count is invariant across all
/// natural bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvarianceCondition {
    Property2LI,
    NoLoops,
    Perfect,
    TwinFree,
    Volterra,
}

impl InvarianceCondition {
    pub fn describe(&self) -> &'static str {
        match self {
            InvarianceCondition::Property2LI => "every pair of distinct squares is independent",
            InvarianceCondition::NoLoops => "the loop set is empty",
            InvarianceCondition::Perfect => "the structure matrix is invertible",
            InvarianceCondition::TwinFree => "no two indices share a first generation",
            InvarianceCondition::Volterra => "the structure matrix is skew-symmetric",
        }
    }
}

/// Sufficient conditions that apply to `a`.
pub fn invariance_conditions(a: &EvolutionAlgebra) -> Vec<InvarianceCondition> {
    let mut out = Vec::new();
    if a.has_property_2li() {
        out.push(InvarianceCondition::Property2LI);
    }
    if loop_set(a).is_empty() {
        out.push(InvarianceCondition::NoLoops);
    }
    if a.structure_matrix().rank() == a.dim() {
        out.push(InvarianceCondition::Perfect);
    }
    if is_twin_free(a) {
        out.push(InvarianceCondition::TwinFree);
    }
    if a.is_volterra_basis() {
        out.push(InvarianceCondition::Volterra);
    }
    out
}

#[derive(Clone, Debug)]
pub enum LoopVerdict {
    Invariant,
    NotInvariant(BasisChange),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct LoopReport {
    pub loops: Vec<usize>,
    pub noloops: Vec<usize>,
    pub verdict: LoopVerdict,
    /// Which of the standalone sufficient conditions hold.
    pub sufficient: Vec<InvarianceCondition>,
}

/// Whether an all-loop pair `(q, p)` admits the loop-removing change:
/// `alpha_qp != -(w_qq / w_qp)^2`. Within an all-loop class `w_qp` is
/// automatically nonzero.
fn pair_admissible(a: &EvolutionAlgebra, dec: &NaturalDecomposition, qi: usize, p: usize) -> bool {
    let alpha_qp = dec.alpha(qi, p).expect("same class");
    let ratio = a.omega(qi, qi) / a.omega(qi, p);
    alpha_qp != -(&ratio * &ratio)
}

/// The invariance predicate: every class meeting the loop set has size at
/// most 2, and every 2-element class is all-no-loop or all-loop with the
/// rigidity condition `alpha_jk = -(w_jj / w_jk)^2` throughout.
fn invariant_conditions_hold(a: &EvolutionAlgebra, dec: &NaturalDecomposition) -> bool {
    let loops = loop_set(a);
    let is_loop = |i: usize| loops.binary_search(&i).is_ok();
    for class in &dec.classes {
        let members = &class.members;
        let any_loop = members.iter().any(|&m| is_loop(m));
        if any_loop && members.len() > 2 {
            return false;
        }
        if members.len() == 2 {
            let all_noloop = members.iter().all(|&m| !is_loop(m));
            if all_noloop {
                continue;
            }
            let all_loop = members.iter().all(|&m| is_loop(m));
            if !all_loop {
                return false; // mixed pair
            }
            for &j in members {
                for &k in members {
                    if j != k && pair_admissible(a, dec, j, k) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Decides whether the number of loops is invariant under change of natural
/// basis (non-degenerate algebras only), returning a certified witness basis
/// when it is not.
pub fn decide_loop_invariance(a: &EvolutionAlgebra) -> LoopReport {
    let loops = loop_set(a);
    let noloops = noloop_set(a);
    let sufficient = invariance_conditions(a);
    if !a.is_non_degenerate() {
        return LoopReport {
            loops,
            noloops,
            verdict: LoopVerdict::Undecided(
                "the decision procedure requires a non-degenerate algebra".into(),
            ),
            sufficient,
        };
    }
    let dec = NaturalDecomposition::compute(a);
    if invariant_conditions_hold(a, &dec) {
        return LoopReport {
            loops,
            noloops,
            verdict: LoopVerdict::Invariant,
            sufficient,
        };
    }
    // Some class certifies non-invariance; construct and certify a witness.
    let is_loop = |i: usize| loops.binary_search(&i).is_ok();
    let mut witness: Option<BasisChange> = None;
    for (t, class) in dec.classes.iter().enumerate() {
        if class.len() < 2 {
            continue;
        }
        let has_loop = class.members.iter().any(|&m| is_loop(m));
        let has_noloop = class.members.iter().any(|&m| !is_loop(m));
        if has_loop && has_noloop {
            witness = Some(witness_case_mixed(a, t).expect("class is mixed"));
            break;
        }
        if has_loop {
            if let Ok(w) = witness_case_all_loops(a, t) {
                witness = Some(w);
                break;
            }
        }
    }
    let Some(w) = witness else {
        return LoopReport {
            loops,
            noloops,
            verdict: LoopVerdict::Undecided(
                "invariance conditions fail but no witness class was found".into(),
            ),
            sufficient,
        };
    };
    // Certify: the image algebra must have a different loop count.
    let image = change_basis(a, &w).expect("witness is a valid natural change");
    assert_ne!(
        loop_set(&image).len(),
        loops.len(),
        "internal self-check: witness must change the loop count"
    );
    LoopReport {
        loops,
        noloops,
        verdict: LoopVerdict::NotInvariant(w),
        sufficient,
    }
}

/// Witness for a mixed class `t`: with `e_i` a loop and `e_j` a no-loop in
/// the class, `f_i = e_i + g e_j` and `f_j = -g alpha_ij e_i + e_j` form a
/// natural basis in which both vectors carry loops, so the count changes by
/// one. `g` is the smallest integer >= 2 with `g^2 != -1/alpha_ij`.
pub fn witness_case_mixed(a: &EvolutionAlgebra, t: usize) -> Result<BasisChange> {
    let dec = NaturalDecomposition::compute(a);
    let class = dec
        .classes
        .get(t)
        .ok_or(Error::IndexOutOfRange {
            index: t,
            dim: dec.classes.len(),
        })?;
    let loops = loop_set(a);
    let is_loop = |i: usize| loops.binary_search(&i).is_ok();
    let i = class.members.iter().copied().find(|&m| is_loop(m));
    let j = class.members.iter().copied().find(|&m| !is_loop(m));
    let (Some(i), Some(j)) = (i, j) else {
        return Err(Error::ClassNotMixed {
            members: members_string(&class.members),
        });
    };
    let alpha_ij = dec.alpha(i, j)?;
    let gamma = (2i64..)
        .map(q)
        .find(|g| &(g * g) * &alpha_ij != q(-1))
        .expect("at most one integer square is excluded");
    let mut p = MatrixQ::identity(a.dim());
    // Columns hold the new vectors: f_i = e_i + g e_j, f_j = -g a_ij e_i + e_j.
    p.set(j, i, gamma.clone());
    p.set(i, j, -(&gamma * &alpha_ij));
    BasisChange::new(a, p)
}

/// Witness for an all-loop class `t` containing an admissible pair `(q, p)`:
/// `f_q = g e_q + e_p`, `f_p = e_q + b e_p` with `g = -alpha_qp w_qp / w_qq`
/// and `b = w_qp / w_qq` strictly lowers the loop count.
pub fn witness_case_all_loops(a: &EvolutionAlgebra, t: usize) -> Result<BasisChange> {
    let dec = NaturalDecomposition::compute(a);
    let class = dec
        .classes
        .get(t)
        .ok_or(Error::IndexOutOfRange {
            index: t,
            dim: dec.classes.len(),
        })?;
    let loops = loop_set(a);
    let is_loop = |i: usize| loops.binary_search(&i).is_ok();
    if !class.members.iter().all(|&m| is_loop(m)) {
        return Err(Error::HypothesisViolated(format!(
            "class {{{}}} is not all-loop",
            members_string(&class.members)
        )));
    }
    let mut pair: Option<(usize, usize)> = None;
    'outer: for &qi in &class.members {
        for &p in &class.members {
            if qi != p && pair_admissible(a, &dec, qi, p) {
                pair = Some((qi, p));
                break 'outer;
            }
        }
    }
    let Some((qi, p_idx)) = pair else {
        return Err(Error::NoAdmissiblePair {
            members: members_string(&class.members),
        });
    };
    let alpha_qp = dec.alpha(qi, p_idx)?;
    let gamma = -(&alpha_qp * a.omega(qi, p_idx)) / a.omega(qi, qi);
    let beta: Rational = a.omega(qi, p_idx) / a.omega(qi, qi);
    if &gamma * &beta == q(1) {
        return Err(Error::Internal(
            "admissible pair produced a singular 2x2 block".into(),
        ));
    }
    let mut p = MatrixQ::identity(a.dim());
    // f_q = g e_q + e_p, f_p = e_q + b e_p.
    p.set(qi, qi, gamma);
    p.set(p_idx, qi, q(1));
    p.set(qi, p_idx, q(1));
    p.set(p_idx, p_idx, beta);
    BasisChange::new(a, p)
}

fn members_string(members: &[usize]) -> String {
    members
        .iter()
        .map(|m| format!("e_{}", m + 1))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Class-by-class no-loop correspondence under a natural change: an aligned
/// class is all-no-loop on one side iff it is on the other. Returns whether
/// the equivalence holds for every class (it always should).
pub fn check_noloop_correspondence(a: &EvolutionAlgebra, bc: &BasisChange) -> Result<bool> {
    let alignment = align_decompositions(a, bc)?;
    let image = change_basis(a, bc)?;
    let old_dec = NaturalDecomposition::compute(a);
    let new_dec = NaturalDecomposition::compute(&image);
    let old_loops = loop_set(a);
    let new_loops = loop_set(&image);
    let old_is_loop = |i: usize| old_loops.binary_search(&i).is_ok();
    let new_is_loop = |i: usize| new_loops.binary_search(&i).is_ok();
    for (t, class) in old_dec.classes.iter().enumerate() {
        let matched = &new_dec.classes[alignment.old_to_new[t]];
        let old_all_nl = class.members.iter().all(|&m| !old_is_loop(m));
        let new_all_nl = matched.members.iter().all(|&m| !new_is_loop(m));
        if old_all_nl != new_all_nl {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hypothesis predicate of the small-class invariance criterion; identical to
/// the invariant branch of the decision procedure and kept separate so the
/// two code paths can be cross-checked.
pub fn small_class_invariance_applies(a: &EvolutionAlgebra) -> Result<bool> {
    if !a.is_non_degenerate() {
        let i = a.annihilator_indices()[0];
        return Err(Error::Degenerate { index: i });
    }
    let dec = NaturalDecomposition::compute(a);
    Ok(invariant_conditions_hold(a, &dec))
}

/// Sampling check for the invariance statement on algebras all of whose
/// multi-member classes avoid loops: every sampled natural basis must show
/// the same loop count.
pub fn check_invariance_by_sampling(
    a: &EvolutionAlgebra,
    seed: u64,
    samples: usize,
) -> Result<bool> {
    let dec = NaturalDecomposition::compute(a);
    let loops = loop_set(a);
    let is_loop = |i: usize| loops.binary_search(&i).is_ok();
    for class in &dec.classes {
        if class.len() > 1 && class.members.iter().any(|&m| is_loop(m)) {
            return Err(Error::HypothesisViolated(format!(
                "class {{{}}} has several members and meets the loop set",
                members_string(&class.members)
            )));
        }
    }
    let expected = loops.len();
    for s in 0..samples {
        let bc = random_natural_basis(a, seed.wrapping_add(s as u64));
        let image = change_basis(a, &bc)?;
        if loop_set(&image).len() != expected {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::EvolutionAlgebra;
    use crate::fixtures::{loops_3dim, volterra_3dim};

    #[test]
    fn loop_sets() {
        let a = loops_3dim();
        assert_eq!(loop_set(&a), vec![1, 2]);
        assert_eq!(noloop_set(&a), vec![0]);
        assert!(loop_set(&volterra_3dim()).is_empty());
    }

    #[test]
    fn loop_iff_product_with_square_nonzero() {
        // For e_i^2 != 0: i is a loop iff e_i * e_i^2 != 0.
        let a = loops_3dim();
        for i in 0..3 {
            let mut e = crate::matrix::vec_zero(3);
            e[i] = q(1);
            let sq = a.square(i).unwrap();
            let prod = a.product(&e, &sq).unwrap();
            let is_loop = !a.omega(i, i).is_zero();
            assert_eq!(!crate::matrix::vec_is_zero(&prod), is_loop);
        }
    }

    #[test]
    fn decision_on_worked_loop_example() {
        let report = decide_loop_invariance(&loops_3dim());
        assert_eq!(report.loops, vec![1, 2]);
        match &report.verdict {
            LoopVerdict::NotInvariant(w) => {
                let image = change_basis(&loops_3dim(), w).unwrap();
                assert_ne!(loop_set(&image).len(), 2);
            }
            other => panic!("expected NotInvariant, got {other:?}"),
        }
    }

    #[test]
    fn volterra_algebras_are_invariant() {
        let report = decide_loop_invariance(&volterra_3dim());
        assert!(matches!(report.verdict, LoopVerdict::Invariant));
        assert!(report.sufficient.contains(&InvarianceCondition::Volterra));
        assert!(report.sufficient.contains(&InvarianceCondition::NoLoops));
    }

    #[test]
    fn identity_matrix_is_invariant() {
        let a = EvolutionAlgebra::new(MatrixQ::identity(3)).unwrap();
        let report = decide_loop_invariance(&a);
        assert!(matches!(report.verdict, LoopVerdict::Invariant));
        assert_eq!(report.loops, vec![0, 1, 2]);
    }

    #[test]
    fn degenerate_input_is_undecided() {
        let a = EvolutionAlgebra::from_i64(&[&[0, 0], &[1, 1]]);
        let report = decide_loop_invariance(&a);
        assert!(matches!(report.verdict, LoopVerdict::Undecided(_)));
    }

    #[test]
    fn mixed_witness_changes_count_by_one() {
        // Class {0, 1} with e_1^2 = e_1 (loop), e_2^2 = 2 e_1 (no loop).
        let a = EvolutionAlgebra::from_i64(&[&[1, 0], &[2, 0]]);
        let w = witness_case_mixed(&a, 0).unwrap();
        let image = change_basis(&a, &w).unwrap();
        assert_eq!(loop_set(&a).len(), 1);
        assert_eq!(loop_set(&image).len(), 2);

        // An all-loop class is refused by the mixed constructor.
        let b = EvolutionAlgebra::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(
            witness_case_mixed(&b, 0),
            Err(Error::ClassNotMixed { .. })
        ));
    }

    #[test]
    fn all_loop_witness_lowers_count() {
        // e_1^2 = e_1 + e_2, e_2^2 = 2(e_1 + e_2): all loops, alpha = 2,
        // -(w_11/w_12)^2 = -1 != 2, so the pair is admissible.
        let a = EvolutionAlgebra::from_i64(&[&[1, 1], &[2, 2]]);
        let w = witness_case_all_loops(&a, 0).unwrap();
        let image = change_basis(&a, &w).unwrap();
        assert!(loop_set(&image).len() < 2);

        // The rigid pair alpha_qp = -(w_qq/w_qp)^2 is refused.
        let rigid = EvolutionAlgebra::from_i64(&[&[1, 1], &[-1, -1]]);
        assert!(matches!(
            witness_case_all_loops(&rigid, 0),
            Err(Error::NoAdmissiblePair { .. })
        ));
        // And the rigid algebra is invariant overall.
        assert!(matches!(
            decide_loop_invariance(&rigid).verdict,
            LoopVerdict::Invariant
        ));
    }

    #[test]
    fn small_class_predicate_matches_decision() {
        for a in [
            loops_3dim(),
            volterra_3dim(),
            EvolutionAlgebra::from_i64(&[&[1, 1], &[-1, -1]]),
            EvolutionAlgebra::from_i64(&[&[1, 1], &[2, 2]]),
        ] {
            let predicate = small_class_invariance_applies(&a).unwrap();
            let verdict = decide_loop_invariance(&a).verdict;
            match verdict {
                LoopVerdict::Invariant => assert!(predicate),
                LoopVerdict::NotInvariant(_) => assert!(!predicate),
                LoopVerdict::Undecided(_) => panic!("unexpected undecided"),
            }
        }
    }

    #[test]
    fn sampling_check_on_hypothesis_instances() {
        assert!(check_invariance_by_sampling(&volterra_3dim(), 7, 40).unwrap());
        let singletons = EvolutionAlgebra::new(MatrixQ::identity(3)).unwrap();
        assert!(check_invariance_by_sampling(&singletons, 7, 40).unwrap());
        // Hypothesis violation is an error.
        assert!(check_invariance_by_sampling(&loops_3dim(), 7, 5).is_err());
    }

    #[test]
    fn noloop_correspondence_on_worked_changes() {
        let a = volterra_3dim();
        for seed in 0..20 {
            let bc = random_natural_basis(&a, seed);
            assert!(check_noloop_correspondence(&a, &bc).unwrap());
        }
        let b = loops_3dim();
        for seed in 0..20 {
            let bc = random_natural_basis(&b, seed);
            assert!(check_noloop_correspondence(&b, &bc).unwrap());
        }
        let id = BasisChange::identity(&a);
        assert!(check_noloop_correspondence(&a, &id).unwrap());
    }
}
