//! Direct numerical Haar integration in the decomposed basis.
//!
//! Everything here is computed from Wigner matrices on a product quadrature
//! grid, independently of the tridiagonal matrix in [`crate::optimal`]. It is
//! meant for small `N` (grid cost grows like `L³ Σ d_j²`).

mod block;
mod quadrature;

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

pub use block::{BlockState, NORMALIZATION_TOL};
pub use quadrature::{gauss_legendre, quadrature_grid, QuadratureGrid};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::reps::CoeffVector;
use crate::scalar::{compensated_sum, Real};
use crate::su2::{character, wigner_big_d, GroupElement, HalfInt};

/// Nodes per parallel work item in matrix-valued reductions.
const NODE_CHUNK: usize = 256;

/// Largest `N` the oracle is intended for.
pub const MAX_ORACLE_SPINS: u32 = 9;

/// Grid level at which the `⟨χ₁⟩` integrand is integrated exactly.
pub fn required_level(n_spins: u32) -> usize {
    2 * n_spins as usize + 2
}

fn check_level<T: Real>(grid: &QuadratureGrid<T>, required: usize) -> Result<()> {
    if grid.level() < required {
        return Err(Error::Capability {
            what: "quadrature level",
            required,
            supported: grid.level(),
        });
    }
    Ok(())
}

fn check_pair<T: Real>(bra: &BlockState<T>, ket: &BlockState<T>) -> Result<()> {
    let (l, r) = (bra.ladder().n_spins(), ket.ladder().n_spins());
    if l != r {
        return Err(Error::LadderMismatch { left: l, right: r });
    }
    for (k, (a, b)) in bra.blocks().iter().zip(ket.blocks()).enumerate() {
        if a.cols() != b.cols() && !bra.is_zero_block(k) && !ket.is_zero_block(k) {
            return Err(Error::Domain(format!(
                "sector {k}: bra uses {} multiplicity labels, ket uses {}",
                a.cols(),
                b.cols()
            )));
        }
    }
    Ok(())
}

fn overlap_unchecked<T: Real>(
    bra: &BlockState<T>,
    ket: &BlockState<T>,
    g: &GroupElement<T>,
) -> Result<Complex<T>> {
    let mut acc = Complex::zero();
    for (k, s) in bra.ladder().sectors().iter().enumerate() {
        if bra.is_zero_block(k) || ket.is_zero_block(k) {
            continue;
        }
        let d = wigner_big_d(s.j, g)?;
        acc = acc + bra.blocks()[k].inner(&(&d * &ket.blocks()[k]));
    }
    Ok(acc)
}

/// `⟨bra| U(g) |ket⟩ = Σ_j tr(bra_j† D^j(g) ket_j)`.
pub fn overlap<T: Real>(
    bra: &BlockState<T>,
    ket: &BlockState<T>,
    g: &GroupElement<T>,
) -> Result<Complex<T>> {
    check_pair(bra, ket)?;
    overlap_unchecked(bra, ket, g)
}

/// Weighted sum over the grid with a fixed-order reduction, so the result
/// does not depend on how the nodes were scheduled.
fn integrate<T, F>(grid: &QuadratureGrid<T>, f: F) -> Result<T>
where
    T: Real,
    F: Fn(&GroupElement<T>) -> Result<T> + Sync,
{
    let terms: Vec<T> = grid
        .nodes()
        .par_iter()
        .map(|(g, w)| f(g).map(|v| *w * v))
        .collect::<Result<_>>()?;
    Ok(compensated_sum(terms))
}

/// `∫ dg χ₁(g) |⟨signal| U(g) |seed·norm⟩|²` on the grid.
pub fn chi1_by_quadrature<T: Real>(
    signal: &BlockState<T>,
    povm_seed: &BlockState<T>,
    povm_norm: &CoeffVector<T>,
    grid: &QuadratureGrid<T>,
) -> Result<T> {
    check_level(grid, required_level(signal.ladder().n_spins()))?;
    let povm = povm_seed.scaled(povm_norm)?;
    check_pair(signal, &povm)?;
    integrate(grid, |g| {
        let ov = overlap_unchecked(signal, &povm, g)?;
        Ok(character(HalfInt::ONE, g) * ov.norm_sqr())
    })
}

/// Total outcome probability `∫ dg |⟨povm| U(g) |signal⟩|²` of the
/// covariant measurement generated by `povm` (already weighted).
pub fn povm_completeness<T: Real>(
    signal: &BlockState<T>,
    povm: &BlockState<T>,
    grid: &QuadratureGrid<T>,
) -> Result<T> {
    check_level(grid, required_level(signal.ladder().n_spins()))?;
    check_pair(povm, signal)?;
    integrate(grid, |g| Ok(overlap_unchecked(povm, signal, g)?.norm_sqr()))
}

/// Max-norm residual of the group average
/// `∫ dg (D^j(g)⊗I) O (D^j(g)⊗I)† − I ⊗ tr_A(O)/d_j`
/// for an operator `O` on `d_j ⊗ d_j`.
pub fn schur_average_check<T: Real>(
    j: HalfInt,
    op: &CMatrix<T>,
    grid: &QuadratureGrid<T>,
) -> Result<T> {
    let d = j.dim();
    if op.rows() != d * d || !op.is_square() {
        return Err(Error::Domain(format!(
            "operator must be {0}×{0} for j = {j}, got {1}×{2}",
            d * d,
            op.rows(),
            op.cols()
        )));
    }
    check_level(grid, 2 * j.twice() as usize)?;
    // (D⊗I) O (D⊗I)† acts on the A index only: for each pair of B indices
    // (β, β') it maps the d×d slice O[(·,β),(·,β')] to D·slice·D†
    let slices: Vec<CMatrix<T>> = (0..d * d)
        .map(|bb| {
            let (b1, b2) = (bb / d, bb % d);
            CMatrix::from_fn(d, d, |a1, a2| op[(a1 * d + b1, a2 * d + b2)])
        })
        .collect();
    let partials: Vec<CMatrix<T>> = grid
        .nodes()
        .par_chunks(NODE_CHUNK)
        .map(|chunk| {
            let mut acc = CMatrix::zeros(d * d, d * d);
            for (g, w) in chunk {
                let u = wigner_big_d(j, g)?;
                let ud = u.adjoint().scale_real(*w);
                for (bb, sl) in slices.iter().enumerate() {
                    let (b1, b2) = (bb / d, bb % d);
                    let rotated = &(&u * sl) * &ud;
                    for a1 in 0..d {
                        for a2 in 0..d {
                            let cell = &mut acc[(a1 * d + b1, a2 * d + b2)];
                            *cell = *cell + rotated[(a1, a2)];
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let avg = partials
        .iter()
        .fold(CMatrix::zeros(d * d, d * d), |acc, p| &acc + p);
    let eye = CMatrix::identity(d);
    let expect = eye
        .kron(&op.partial_trace_first(d, d))
        .scale_real(T::one() / T::from_usize_lossy(d));
    Ok((&avg - &expect).max_abs())
}

/// `|φ⟩ = Σ_m |m⟩|m⟩/√d`, the maximally entangled vector on `d ⊗ d`, as a
/// column.
pub fn maximally_entangled_vector<T: Real>(d: usize) -> CMatrix<T> {
    let amp = T::one() / T::from_usize_lossy(d).sqrt();
    CMatrix::from_fn(d * d, 1, |i, _| {
        if i / d == i % d {
            Complex::new(amp, T::zero())
        } else {
            Complex::zero()
        }
    })
}
