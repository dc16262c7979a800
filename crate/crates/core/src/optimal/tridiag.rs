use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

/// Symmetric tridiagonal matrix. Index 0 is the `J` sector, index `k` is
/// the sector `j = J - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiag<T> {
    diag: Vec<T>,
    off: Vec<T>,
}

/// Diagonal and squared couplings of the protocol matrix for `n` sectors
/// (`N = 2n - 1` spins), in any field. Only squared couplings enter the
/// determinant, so this form stays exact over the rationals.
pub fn protocol_matrix_squared<F: Field>(n: usize) -> (Vec<F>, Vec<F>) {
    assert!(n >= 1);
    let n_i = n as i64;
    let mut diag = vec![F::zero(); n];
    // -1/(J+1) with J = n - 1/2
    diag[0] = -F::from_ratio(2, 2 * n_i + 1);
    let mut off_sq = vec![F::one(); n - 1];
    if n > 1 {
        // 1/d_J with d_J = 2n
        off_sq[0] = F::from_ratio(1, 2 * n_i);
    }
    (diag, off_sq)
}

/// `det(A + shift·I)` of a symmetric tridiagonal `A` by the continuant
/// recurrence `D_k = (a_k + s) D_{k-1} - e_{k-1}² D_{k-2}`.
pub fn shifted_determinant<F: Field>(diag: &[F], off_sq: &[F], shift: &F) -> F {
    let mut prev = F::one();
    let mut cur = F::one();
    for (k, d) in diag.iter().enumerate() {
        let next = if k == 0 {
            d.clone() + shift.clone()
        } else {
            (d.clone() + shift.clone()) * cur.clone() - off_sq[k - 1].clone() * prev.clone()
        };
        prev = cur;
        cur = next;
    }
    cur
}

/// Solves a general tridiagonal system in place by Gaussian elimination with
/// partial pivoting. Exactly zero pivots are replaced by `tiny`.
fn solve_tridiagonal<T: Real>(
    mut sub: Vec<T>,
    mut diag: Vec<T>,
    mut sup: Vec<T>,
    rhs: &mut [T],
    tiny: T,
) {
    let n = diag.len();
    let guard = |v: T| if v == T::zero() { tiny } else { v };
    for i in 0..n.saturating_sub(1) {
        if diag[i].abs() >= sub[i].abs() {
            let pivot = guard(diag[i]);
            diag[i] = pivot;
            let fact = sub[i] / pivot;
            diag[i + 1] -= fact * sup[i];
            rhs[i + 1] -= fact * rhs[i];
            sub[i] = T::zero();
        } else {
            let fact = diag[i] / sub[i];
            diag[i] = sub[i];
            let temp = diag[i + 1];
            diag[i + 1] = sup[i] - fact * temp;
            if i + 2 < n {
                // sub[i] now holds the second superdiagonal
                sub[i] = sup[i + 1];
                sup[i + 1] = -fact * sub[i];
            } else {
                sub[i] = T::zero();
            }
            sup[i] = temp;
            let b = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = b - fact * rhs[i + 1];
        }
    }
    diag[n - 1] = guard(diag[n - 1]);
    rhs[n - 1] = rhs[n - 1] / diag[n - 1];
    if n > 1 {
        rhs[n - 2] = (rhs[n - 2] - sup[n - 2] * rhs[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1] - sub[i] * rhs[i + 2]) / diag[i];
    }
}

impl<T: Real> TriDiag<T> {
    pub fn new(diag: Vec<T>, off: Vec<T>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "tridiagonal shape mismatch: {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        Ok(TriDiag { diag, off })
    }

    /// The protocol matrix `M` for an odd number of spins:
    /// `M₀₀ = -1/(J+1)`, `M₀₁ = 1/√d_J`, unit couplings below, zero
    /// diagonal elsewhere.
    pub fn protocol_matrix(n_spins: u32) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        if n_spins.is_multiple_of(2) {
            return Err(Error::UnsupportedParity(n_spins));
        }
        let n = (n_spins as usize).div_ceil(2);
        let (diag, off_sq) = protocol_matrix_squared::<T>(n);
        let off = off_sq.into_iter().map(|e| e.sqrt()).collect();
        Ok(TriDiag { diag, off })
    }

    /// Unit couplings and zero diagonal: `M` without the `J`-sector
    /// asymmetry.
    pub fn free(n: usize) -> Self {
        assert!(n >= 1);
        TriDiag {
            diag: vec![T::zero(); n],
            off: vec![T::one(); n - 1],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn off(&self) -> &[T] {
        &self.off
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len());
        (0..self.len())
            .map(|k| {
                let mut acc = self.diag[k] * v[k];
                if k > 0 {
                    acc += self.off[k - 1] * v[k - 1];
                }
                if k + 1 < self.len() {
                    acc += self.off[k] * v[k + 1];
                }
                acc
            })
            .collect()
    }

    /// `vᵗ A v`
    pub fn quadratic_form(&self, v: &[T]) -> T {
        self.apply(v).iter().zip(v).map(|(&a, &b)| a * b).sum()
    }

    /// `det(A + shift·I)`
    pub fn shifted_determinant(&self, shift: T) -> T {
        let off_sq: Vec<T> = self.off.iter().map(|&e| e * e).collect();
        shifted_determinant(&self.diag, &off_sq, &shift)
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let left = if i > 0 {
                self.off[i - 1].abs()
            } else {
                T::zero()
            };
            let right = if i + 1 < n {
                self.off[i].abs()
            } else {
                T::zero()
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence of LDLᵗ
    /// pivots).
    pub fn sturm_count(&self, x: T) -> usize {
        let guard = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let safe = if q.abs() < guard {
                    guard.copysign(q)
                } else {
                    q
                };
                q = (self.diag[i] - x) - self.off[i - 1] * self.off[i - 1] / safe;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// Largest eigenvalue by Sturm bisection to absolute tolerance `tol`.
    pub fn largest_eigenvalue(&self, tol: T) -> T {
        let n = self.len();
        let (lo0, hi0) = self.gershgorin();
        let pad = T::epsilon() * (lo0.abs().max(hi0.abs()) + T::one());
        let (mut lo, mut hi) = (lo0 - pad, hi0 + pad);
        loop {
            let mid = (lo + hi) / T::lit(2.0);
            if hi - lo <= tol || mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) == n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Eigenvector for an eigenvalue estimate `mu`, by inverse iteration.
    /// Normalized to unit length with a nonnegative sum of entries.
    pub fn eigenvector(&self, mu: T, iterations: usize) -> Vec<T> {
        let n = self.len();
        let scale = self
            .diag
            .iter()
            .chain(&self.off)
            .fold(T::one(), |m, &v| m.max(v.abs()));
        let tiny = T::epsilon() * scale;
        let mut v = vec![T::one() / T::from_usize_lossy(n).sqrt(); n];
        for _ in 0..iterations.max(1) {
            let shifted: Vec<T> = self.diag.iter().map(|&d| d - mu).collect();
            solve_tridiagonal(self.off.clone(), shifted, self.off.clone(), &mut v, tiny);
            let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
            for x in v.iter_mut() {
                *x = *x / norm;
            }
        }
        if v.iter().copied().sum::<T>() < T::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }
}
