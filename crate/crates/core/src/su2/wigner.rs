use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

use super::group::{GroupElement, HalfInt};

/// Largest `2j` accepted by [`wigner_d_matrix`] and [`wigner_big_d`].
///
/// The factorial sum cancels terms as large as `C(2j, j)` against each
/// other, so accuracy degrades roughly like `1e-16 · C(2j, j)`: about 1e-11
/// at `j = 10` and 1e-5 at `j = 20`.
pub const MAX_TWICE_J: u32 = 40;

fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    table.push(acc);
    for k in 1..=n {
        acc += T::from_usize_lossy(k).ln();
        table.push(acc);
    }
    table
}

fn check_range(j: HalfInt) -> Result<()> {
    if j.twice() > MAX_TWICE_J {
        return Err(Error::Capability {
            what: "Wigner matrix spin (2j)",
            required: j.twice() as usize,
            supported: MAX_TWICE_J as usize,
        });
    }
    Ok(())
}

/// Real Wigner small-d matrix `d^j_{m'm}(β)`, rows and columns ordered
/// `m = j, j-1, ..., -j`.
pub fn wigner_d_matrix<T: Real>(j: HalfInt, beta: T) -> Result<Vec<Vec<T>>> {
    check_range(j)?;
    let tj = j.twice() as usize;
    let dim = tj + 1;
    let lf = ln_factorials::<T>(tj);
    let (s_half, c_half) = (beta / T::lit(2.0)).sin_cos();
    let two = T::lit(2.0);

    let mut out = vec![vec![T::zero(); dim]; dim];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            // r = j - m', c = j - m
            let outer = (lf[tj - r] + lf[r] + lf[tj - c] + lf[c]) / two;
            let s_lo = r.saturating_sub(c);
            let s_hi = (tj - c).min(r);
            let mut sum = T::zero();
            for s in s_lo..=s_hi {
                let log_coef = outer - lf[tj - c - s] - lf[s] - lf[c + s - r] - lf[r - s];
                let cos_pow = (tj + r - c - 2 * s) as i32;
                let sin_pow = (c + 2 * s - r) as i32;
                let term = log_coef.exp() * c_half.powi(cos_pow) * s_half.powi(sin_pow);
                if (c + s - r) % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            *entry = sum;
        }
    }
    Ok(out)
}

/// Unitary matrix `D^j(g)` of the spin-`j` representation,
/// `D^j_{m'm} = e^{-i m' α} d^j_{m'm}(β) e^{-i m γ}`.
pub fn wigner_big_d<T: Real>(j: HalfInt, g: &GroupElement<T>) -> Result<CMatrix<T>> {
    let e = g.to_euler();
    let small = wigner_d_matrix(j, e.beta)?;
    let tj = j.twice() as usize;
    let half = T::lit(0.5);
    let m_of =
        |idx: usize| (T::from_usize_lossy(tj) - T::lit(2.0) * T::from_usize_lossy(idx)) * half;
    Ok(CMatrix::from_fn(tj + 1, tj + 1, |r, c| {
        let phase = -(m_of(r) * e.alpha + m_of(c) * e.gamma);
        Complex::from_polar(small[r][c], phase)
    }))
}
