use num_bigint::BigUint;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::reps::{CoeffVector, SpinLadder};
use crate::scalar::Real;
use crate::su2::HalfInt;

/// Tolerance on `Σ_j ‖block_j‖² = 1` for signal states.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// A vector of `(1/2)^⊗N` written in the decomposed basis `|j m α⟩`.
///
/// Sector `j` is a `d_j × k_j` amplitude block: rows are `m = j, …, −j`,
/// columns are the multiplicity labels actually used, `k_j ≤ min(n_j, d_j)`.
/// Only `d_j` copies of a sector can ever be reached by the group action,
/// so no more are allocated.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState<T> {
    ladder: SpinLadder,
    blocks: Vec<CMatrix<T>>,
}

impl<T: Real> BlockState<T> {
    pub fn new(ladder: &SpinLadder, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if blocks.len() != ladder.len() {
            return Err(Error::Domain(format!(
                "expected {} sector blocks, got {}",
                ladder.len(),
                blocks.len()
            )));
        }
        for (s, b) in ladder.sectors().iter().zip(&blocks) {
            let max_cols = s
                .dim
                .min(usize::try_from(&s.multiplicity).unwrap_or(usize::MAX));
            if b.rows() != s.dim || b.cols() > max_cols {
                return Err(Error::Domain(format!(
                    "sector j = {}: block is {}×{}, allowed {}×(≤{max_cols})",
                    s.j,
                    b.rows(),
                    b.cols(),
                    s.dim
                )));
            }
        }
        Ok(BlockState {
            ladder: ladder.clone(),
            blocks,
        })
    }

    /// `a_J |J J⟩ + Σ_{j<J} a_j/√d_j Σ_m |j m α_m⟩`, without any
    /// normalization requirement (measurement seeds use this form too).
    pub fn standard(ladder: &SpinLadder, coeffs: &CoeffVector<T>) -> Result<Self> {
        coeffs.check_ladder(ladder)?;
        let blocks = ladder
            .sectors()
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let a = coeffs[k];
                if k == 0 {
                    let mut b = CMatrix::zeros(s.dim, 1);
                    b[(0, 0)] = Complex::new(a, T::zero());
                    b
                } else {
                    CMatrix::identity(s.dim).scale_real(a / T::from_usize_lossy(s.dim).sqrt())
                }
            })
            .collect();
        Self::new(ladder, blocks)
    }

    /// A normalized signal state of the standard form.
    pub fn signal(ladder: &SpinLadder, coeffs: &CoeffVector<T>) -> Result<Self> {
        let tol = T::lit(NORMALIZATION_TOL).max(T::epsilon() * T::lit(16.0));
        if (coeffs.norm_sqr() - T::one()).abs() > tol {
            return Err(Error::Domain(format!(
                "signal coefficients have Σa² = {}, expected 1",
                coeffs.norm_sqr()
            )));
        }
        Self::standard(ladder, coeffs)
    }

    /// Unit coefficient in every sector; scale it with
    /// [`BlockState::scaled`] by the measurement weights.
    pub fn povm_seed(ladder: &SpinLadder) -> Self {
        let ones = CoeffVector::new(ladder, vec![T::one(); ladder.len()]).expect("ladder-sized");
        Self::standard(ladder, &ones).expect("standard form fits every ladder")
    }

    /// The maximally entangled state of a single sector `j`.
    pub fn maximally_entangled(ladder: &SpinLadder, j: HalfInt) -> Result<Self> {
        let idx = ladder
            .index_of(j)
            .ok_or_else(|| Error::Domain(format!("sector j = {j} not in ladder")))?;
        let s = &ladder.sectors()[idx];
        if s.multiplicity < BigUint::from(s.dim) {
            return Err(Error::Domain(format!(
                "sector j = {j} has fewer than d_j copies"
            )));
        }
        let blocks = ladder
            .sectors()
            .iter()
            .map(|t| {
                if t.j == j {
                    CMatrix::identity(t.dim)
                        .scale_real(T::one() / T::from_usize_lossy(t.dim).sqrt())
                } else {
                    CMatrix::zeros(t.dim, 0)
                }
            })
            .collect();
        Self::new(ladder, blocks)
    }

    /// Multiplies block `j` by `coeffs[j]`.
    pub fn scaled(&self, coeffs: &CoeffVector<T>) -> Result<Self> {
        coeffs.check_ladder(&self.ladder)?;
        Ok(BlockState {
            ladder: self.ladder.clone(),
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(k, b)| b.scale_real(coeffs[k]))
                .collect(),
        })
    }

    pub fn ladder(&self) -> &SpinLadder {
        &self.ladder
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn norm_sqr(&self) -> T {
        self.blocks.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs()
            <= T::lit(NORMALIZATION_TOL).max(T::epsilon() * T::lit(16.0))
    }

    pub(crate) fn is_zero_block(&self, k: usize) -> bool {
        let b = &self.blocks[k];
        b.cols() == 0 || b.norm_sqr().is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reps::ladder;

    #[test]
    fn standard_state_is_normalized() {
        let l = ladder(5).unwrap();
        let a = CoeffVector::uniform(&l);
        let s = BlockState::<f64>::signal(&l, &a).unwrap();
        assert!(s.is_normalized());
        assert_eq!(s.blocks()[0].cols(), 1);
        assert_eq!(s.blocks()[1].cols(), 4);
    }

    #[test]
    fn unnormalized_signal_rejected() {
        let l = ladder(3).unwrap();
        let a = CoeffVector::new(&l, vec![1.0f64, 1.0]).unwrap();
        assert!(BlockState::signal(&l, &a).is_err());
        assert!(BlockState::standard(&l, &a).is_ok());
    }

    #[test]
    fn block_shapes_validated() {
        let l = ladder(3).unwrap();
        // the J sector occurs once, so it cannot hold two columns
        let bad = vec![CMatrix::<f64>::zeros(4, 2), CMatrix::zeros(2, 2)];
        assert!(BlockState::new(&l, bad).is_err());
        let bad_rows = vec![CMatrix::<f64>::zeros(3, 1), CMatrix::zeros(2, 2)];
        assert!(BlockState::new(&l, bad_rows).is_err());
    }

    #[test]
    fn ladder_mismatch() {
        let l3 = ladder(3).unwrap();
        let l5 = ladder(5).unwrap();
        let a = CoeffVector::<f64>::uniform(&l5);
        assert!(matches!(
            BlockState::standard(&l3, &a),
            Err(Error::LadderMismatch { .. })
        ));
    }
}
