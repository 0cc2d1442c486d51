//! Small worked algebras used by the documentation, the test suites, and the
//! shipped example files.

use crate::algebra::EvolutionAlgebra;

/// 3-dimensional Volterra algebra with `e_1^2 = e_2`, `e_2^2 = -e_1 + e_3`,
/// `e_3^2 = -e_2`.
pub fn volterra_3dim() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[&[0, 1, 0], &[-1, 0, 1], &[0, -1, 0]])
}

/// 2-dimensional algebra with `e_1^2 = e_2^2 = e_1 + e_2`: no Property (2LI),
/// yet a trivial derivation space.
pub fn dim2_equal_squares() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[&[1, 1], &[1, 1]])
}

/// 3-dimensional algebra with `e_i^2 = e_1` for every `i`: its derivation
/// space is one-dimensional.
pub fn dim3_all_to_first() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[&[1, 0, 0], &[1, 0, 0], &[1, 0, 0]])
}

/// 5-dimensional algebra with `e_1^2 = e_1+e_2+e_4+e_5`, `e_2^2 = e_1+e_2`,
/// `e_3^2 = e_4+e_5`, `e_4^2 = -e_5^2 = e_3`.
pub fn five_dim_squares_basis() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[
        &[1, 1, 0, 1, 1],
        &[1, 1, 0, 0, 0],
        &[0, 0, 0, 1, 1],
        &[0, 0, 1, 0, 0],
        &[0, 0, -1, 0, 0],
    ])
}

/// 7-dimensional Volterra algebra whose associated graph has odd cycles and
/// whose derivation space is trivial: `e_1^2 = e_2-e_3+e_4-e_5+e_6-e_7`,
/// `e_2^2 = -e_3^2 = -e_1+e_4-e_5`, `e_4^2 = -e_5^2 = -e_1-e_2+e_3`,
/// `e_6^2 = -e_7^2 = -e_1`.
pub fn seven_dim_odd_cycles() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[
        &[0, 1, -1, 1, -1, 1, -1],
        &[-1, 0, 0, 1, -1, 0, 0],
        &[1, 0, 0, -1, 1, 0, 0],
        &[-1, -1, 1, 0, 0, 0, 0],
        &[1, 1, -1, 0, 0, 0, 0],
        &[-1, 0, 0, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0],
    ])
}

/// 4-dimensional bipartite Volterra algebra with classes `{e_1, e_2}` and
/// `{e_3, e_4}`, both with proportionality constant -1.
pub fn bipartite_4dim() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[
        &[0, 0, 1, -1],
        &[0, 0, -1, 1],
        &[-1, 1, 0, 0],
        &[1, -1, 0, 0],
    ])
}

/// 3-dimensional algebra with `e_1^2 = e_2^2 = e_2 + e_3` and
/// `e_3^2 = e_1 - e_2 + e_3`: its loop count depends on the natural basis.
pub fn loops_3dim() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[&[0, 1, 1], &[0, 1, 1], &[1, -1, 1]])
}

/// 2-dimensional algebra with `e_1^2 = e_1 + e_2`, `e_2^2 = -e_1 - e_2`:
/// one proportionality class, one-dimensional square, zero fourth powers.
pub fn dim2_fourth_power_zero() -> EvolutionAlgebra {
    EvolutionAlgebra::from_i64(&[&[1, 1], &[-1, -1]])
}
