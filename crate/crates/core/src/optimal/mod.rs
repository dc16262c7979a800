//! The optimal signal state for `N` spins.
//!
//! For signal states that put amplitude `a_J` on `|J J⟩` and entangle `m`
//! with the multiplicity label in every lower sector, the averaged score is
//! `⟨χ₁⟩ = 1 + aᵗ M a` with `M` the tridiagonal [`TriDiag::protocol_matrix`].
//! Its top eigenvalue `μ = −2λ₀` is computed twice: by Sturm bisection on
//! `M`, and as the smallest zero `λ₀` of the Chebyshev-form characteristic
//! polynomial [`char_poly`].

mod chebyshev;
mod tridiag;

use rayon::prelude::*;

pub use chebyshev::{char_poly, chebyshev_u, chebyshev_u_triple, smallest_root};
pub use tridiag::{protocol_matrix_squared, shifted_determinant, TriDiag};

use crate::error::{Error, Result};
use crate::reps::{ladder, CoeffVector};
use crate::scalar::Real;

/// Absolute tolerance of the Sturm bisection (for `f64`).
pub const BISECTION_TOL: f64 = 1e-13;

/// Largest tolerated disagreement between the eigen and polynomial routes.
pub const ROUTE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalProtocol<T> {
    pub n_spins: u32,
    /// Smallest zero of `P_n`; lies in `[−1, 0)` for `N ≥ 3`.
    pub lambda0: T,
    /// Largest eigenvalue of `M`, `−2λ₀`.
    pub mu_max: T,
    /// `1 + μ_max`
    pub chi1: T,
    pub fidelity: T,
    pub holevo: T,
    /// Optimal signal coefficients `(a_J, a_{J−1}, …)`: unit norm, nonnegative.
    pub coefficients: CoeffVector<T>,
    /// `|μ_eigen − μ_polynomial|`
    pub route_gap: T,
}

fn check_odd(n_spins: u32) -> Result<()> {
    if n_spins == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if n_spins.is_multiple_of(2) {
        return Err(Error::UnsupportedParity(n_spins));
    }
    Ok(())
}

/// Solves for the optimal coefficients and score at an odd `N`.
pub fn solve<T: Real>(n_spins: u32) -> Result<OptimalProtocol<T>> {
    check_odd(n_spins)?;
    let m = TriDiag::<T>::protocol_matrix(n_spins)?;
    let n = m.len();
    let tol = T::lit(BISECTION_TOL).max(T::lit(64.0) * T::epsilon());
    let mu_eigen = m.largest_eigenvalue(tol);

    let (_, lambda_poly) = smallest_root::<T>(n);
    let mu_poly = -T::lit(2.0) * lambda_poly;
    let gap = (mu_eigen - mu_poly).abs();
    let allowed = T::lit(ROUTE_TOL).max(T::epsilon().sqrt() * T::from_usize_lossy(n));
    if gap.is_nan() || gap > allowed {
        return Err(Error::Consistency {
            what: "top eigenvalue (Sturm bisection vs Chebyshev root)",
            gap: gap.to_f64_lossy(),
        });
    }

    let vector = m.eigenvector(mu_eigen, 3);
    let coefficients = CoeffVector::new(&ladder(n_spins)?, vector)?;
    let chi1 = T::one() + mu_eigen;
    Ok(OptimalProtocol {
        n_spins,
        lambda0: -mu_eigen / T::lit(2.0),
        mu_max: mu_eigen,
        chi1,
        fidelity: (T::one() + chi1) / T::lit(4.0),
        holevo: T::lit(6.0) - chi1,
        coefficients,
        route_gap: gap,
    })
}

/// `⟨χ₁⟩ = 1 + aᵗ M a` for arbitrary (not necessarily optimal) coefficients.
pub fn chi1_of_coefficients<T: Real>(a: &CoeffVector<T>) -> Result<T> {
    let m = TriDiag::<T>::protocol_matrix(a.n_spins())?;
    Ok(T::one() + m.quadratic_form(a.values()))
}

/// Large-`N` expansion `3 − 4π²/N² + 8π²/N³`.
pub fn asymptotic_chi1<T: Real>(n_spins: u32) -> T {
    let n = T::from_u32(n_spins).unwrap();
    let pi2 = T::PI() * T::PI();
    T::lit(3.0) - T::lit(4.0) * pi2 / (n * n) + T::lit(8.0) * pi2 / (n * n * n)
}

/// The maximally entangled `2N`-spin reference protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledBenchmark<T> {
    /// `1 + 2cos(π/(n+1))` with `n = (N+1)/2`.
    pub chi1_exact: T,
    /// `3 − 4π²/N² + 24π²/N³`
    pub chi1_asymptotic: T,
}

pub fn entangled_benchmark<T: Real>(n_spins: u32) -> Result<EntangledBenchmark<T>> {
    check_odd(n_spins)?;
    let sectors = T::from_u32(n_spins.div_ceil(2)).unwrap();
    let n = T::from_u32(n_spins).unwrap();
    let pi2 = T::PI() * T::PI();
    Ok(EntangledBenchmark {
        chi1_exact: T::one() + T::lit(2.0) * (T::PI() / (sectors + T::one())).cos(),
        chi1_asymptotic: T::lit(3.0) - T::lit(4.0) * pi2 / (n * n)
            + T::lit(24.0) * pi2 / (n * n * n),
    })
}

/// One row of a scan over odd `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow<T> {
    pub n_spins: u32,
    pub chi1: T,
    pub entangled_chi1: T,
    pub asymptotic_chi1: T,
    pub entangled_asymptotic_chi1: T,
    /// `(χ₁ − asymptotic)·N⁴`
    pub residual_n4: T,
    /// `(entangled − entangled asymptotic)·N⁴`
    pub entangled_residual_n4: T,
}

/// Solves every odd `N` in `[n_min, n_max]` with the given (even) stride.
/// Rows come back ordered by `N` regardless of scheduling.
pub fn scan<T: Real>(n_min: u32, n_max: u32, step: u32) -> Result<Vec<ScanRow<T>>> {
    if n_min > n_max {
        return Err(Error::Domain(format!("empty range: {n_min} > {n_max}")));
    }
    if step == 0 || !step.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "step must be a positive even number, got {step}"
        )));
    }
    check_odd(n_min)?;
    let ns: Vec<u32> = (n_min..=n_max).step_by(step as usize).collect();
    ns.into_par_iter()
        .map(|n_spins| {
            let opt = solve::<T>(n_spins)?;
            let bench = entangled_benchmark::<T>(n_spins)?;
            let asym = asymptotic_chi1::<T>(n_spins);
            let n = T::from_u32(n_spins).unwrap();
            let n4 = n * n * n * n;
            Ok(ScanRow {
                n_spins,
                chi1: opt.chi1,
                entangled_chi1: bench.chi1_exact,
                asymptotic_chi1: asym,
                entangled_asymptotic_chi1: bench.chi1_asymptotic,
                residual_n4: (opt.chi1 - asym) * n4,
                entangled_residual_n4: (bench.chi1_exact - bench.chi1_asymptotic) * n4,
            })
        })
        .collect()
}
