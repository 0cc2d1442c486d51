//! Natural basis changes: verification, the induced structure matrix, the
//! action on derivation matrices, and a seeded generator of random natural
//! bases used by the property suites.
//!
//! Convention: column `j` of the change matrix holds the coordinates of the
//! new basis vector `f_j` in the old basis. Structure matrices keep rows as
//! squares on both sides.

use num_traits::Zero;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::EvolutionAlgebra;
use crate::decomposition::NaturalDecomposition;
use crate::error::{Error, Result};
use crate::matrix::{vec_is_zero, MatrixQ, Vector};
use crate::rational::{q, Rational};

/// An invertible matrix whose columns form another natural basis, checked
/// exactly at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    p: MatrixQ,
    p_inv: MatrixQ,
}

impl BasisChange {
    pub fn new(a: &EvolutionAlgebra, p: MatrixQ) -> Result<Self> {
        if !p.is_square() || p.rows() != a.dim() {
            return Err(Error::ShapeMismatch(format!(
                "basis change must be {0}x{0}, got {1}x{2}",
                a.dim(),
                p.rows(),
                p.cols()
            )));
        }
        let Some(p_inv) = p.inverse() else {
            return Err(Error::Singular);
        };
        for i in 0..a.dim() {
            for j in (i + 1)..a.dim() {
                let prod = a.product(&p.col_vec(i), &p.col_vec(j))?;
                if !vec_is_zero(&prod) {
                    return Err(Error::NotNatural(format!(
                        "f_{} f_{} != 0",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(BasisChange { p, p_inv })
    }

    pub fn identity(a: &EvolutionAlgebra) -> Self {
        BasisChange {
            p: MatrixQ::identity(a.dim()),
            p_inv: MatrixQ::identity(a.dim()),
        }
    }

    pub fn matrix(&self) -> &MatrixQ {
        &self.p
    }

    pub fn inverse_matrix(&self) -> &MatrixQ {
        &self.p_inv
    }

    /// Coordinates of `f_j` in the old basis.
    pub fn new_vector(&self, j: usize) -> Vector {
        self.p.col_vec(j)
    }

    /// The change sending the new basis back to the old one.
    pub fn inverse_change(&self, image: &EvolutionAlgebra) -> Result<BasisChange> {
        BasisChange::new(image, self.p_inv.clone())
    }
}

/// Whether `p` is invertible and sends the implicit basis to another natural
/// basis (all pairwise products of columns vanish).
pub fn is_natural(a: &EvolutionAlgebra, p: &MatrixQ) -> bool {
    BasisChange::new(a, p.clone()).is_ok()
}

/// Structure matrix relative to the new basis: row `j` solves
/// `f_j^2 = sum_k w'_jk f_k`, computed exactly.
pub fn change_basis(a: &EvolutionAlgebra, bc: &BasisChange) -> Result<EvolutionAlgebra> {
    let n = a.dim();
    let mut rows: Vec<Vector> = Vec::with_capacity(n);
    for j in 0..n {
        let col = bc.p.col_vec(j);
        // f_j^2 in old coordinates.
        let fj_sq = a.product(&col, &col)?;
        // Re-express through the inverse: new coords x with P x = f_j^2.
        let x = bc.p_inv.mul_vec(&fj_sq)?;
        rows.push(x);
    }
    EvolutionAlgebra::new(MatrixQ::from_rows(rows)?)
}

/// Action of a basis change on derivation matrices.
///
/// Derivation matrices follow the same row convention as structure matrices
/// (row `i` holds the coordinates of the image of `e_i`), so the matrix of the
/// same linear map relative to the new basis is `P^T d (P^T)^-1`.
pub fn transport_derivation(bc: &BasisChange, d: &MatrixQ) -> Result<MatrixQ> {
    let pt = bc.p.transpose();
    let pt_inv = bc.p_inv.transpose();
    pt.mul(d)?.mul(&pt_inv)
}

/// Seeded random natural basis.
///
/// Per proportionality class the quadratic form `sum_k alpha_k x_k^2` governs
/// products of class-supported vectors, so a random invertible class-local
/// matrix is orthogonalized under that form, resampling when an isotropic
/// pivot appears; annihilator coordinates mix freely and may be added to any
/// vector. Falls back to the identity on a class after too many rejections,
/// so the generator never fails.
pub fn random_natural_basis(a: &EvolutionAlgebra, seed: u64) -> BasisChange {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.dim();
    let dec = NaturalDecomposition::compute(a);
    let mut p = MatrixQ::zeros(n, n);

    // Annihilator block: any invertible mix of the annihilator vectors.
    let k0 = dec.lambda0.len();
    if k0 > 0 {
        let block = random_invertible(&mut rng, k0);
        for (bi, &i) in dec.lambda0.iter().enumerate() {
            for (bj, &j) in dec.lambda0.iter().enumerate() {
                p.set(i, j, block.at(bi, bj).clone());
            }
        }
    }

    for class in &dec.classes {
        let s = class.len();
        let form: Vec<Rational> = class.alpha_to_rep.clone();
        let block = loop {
            match try_form_orthogonal_block(&mut rng, s, &form) {
                Some(b) => break b,
                None => {
                    if rng.gen_range(0..40) == 0 {
                        break MatrixQ::identity(s);
                    }
                }
            }
        };
        for (bi, &i) in class.members.iter().enumerate() {
            for (bj, &j) in class.members.iter().enumerate() {
                p.set(i, j, block.at(bi, bj).clone());
            }
        }
        // Optional annihilator components: they never disturb products.
        for &j in &class.members {
            for &i in &dec.lambda0 {
                if rng.gen_bool(0.5) {
                    p.set(i, j, q(rng.gen_range(-2..=2)));
                }
            }
        }
    }

    BasisChange::new(a, p).expect("generated matrix is a natural basis change")
}

/// One attempt at an invertible `s x s` block whose columns are pairwise
/// orthogonal under `<x, y> = sum_k form_k x_k y_k` with anisotropic columns.
fn try_form_orthogonal_block(
    rng: &mut ChaCha8Rng,
    s: usize,
    form: &[Rational],
) -> Option<MatrixQ> {
    let raw = random_invertible(rng, s);
    let mut cols: Vec<Vector> = Vec::with_capacity(s);
    for j in 0..s {
        let mut v = raw.col_vec(j);
        for u in &cols {
            let num = form_inner(form, &v, u);
            let den = form_inner(form, u, u);
            debug_assert!(!den.is_zero());
            let coef = num / den;
            for k in 0..s {
                let adj = &coef * &u[k];
                v[k] = &v[k] - &adj;
            }
        }
        if form_inner(form, &v, &v).is_zero() {
            return None; // isotropic pivot: resample
        }
        cols.push(v);
    }
    Some(MatrixQ::from_fn(s, s, |i, j| cols[j][i].clone()))
}

fn form_inner(form: &[Rational], x: &[Rational], y: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..form.len() {
        acc += &form[k] * &x[k] * &y[k];
    }
    acc
}

fn random_invertible(rng: &mut ChaCha8Rng, s: usize) -> MatrixQ {
    loop {
        let m = MatrixQ::from_fn(s, s, |_, _| q(rng.gen_range(-3..=3)));
        if m.is_invertible() {
            return m;
        }
    }
}
