use crate::scalar::{Field, Real};

/// `(U_n, U_{n-1}, U_{n-2})` at `λ` by forward recurrence, with the
/// conventions `U_{-1} = 0` and `U_{-2} = -1`.
pub fn chebyshev_u_triple<F: Field>(n: usize, lambda: &F) -> (F, F, F) {
    let two_lambda = F::from_i64(2).unwrap() * lambda.clone();
    let mut u_m2 = -F::one();
    let mut u_m1 = F::zero();
    let mut u = F::one();
    for _ in 0..n {
        let next = two_lambda.clone() * u.clone() - u_m1.clone();
        u_m2 = u_m1;
        u_m1 = u;
        u = next;
    }
    (u, u_m1, u_m2)
}

/// Second-kind Chebyshev polynomial `U_n(λ)`.
pub fn chebyshev_u<F: Field>(n: usize, lambda: &F) -> F {
    chebyshev_u_triple(n, lambda).0
}

/// Characteristic polynomial `P_n(λ) = det(M + 2λI)` of the `n`-sector
/// protocol matrix, in closed form:
/// `P_n = U_n − 2/(2n+1)·U_{n−1} + (2n−1)/(2n)·U_{n−2}`.
pub fn char_poly<F: Field>(n: usize, lambda: &F) -> F {
    assert!(n >= 1, "char_poly needs n >= 1");
    let n_i = n as i64;
    let (u, u1, u2) = chebyshev_u_triple(n, lambda);
    u - F::from_ratio(2, 2 * n_i + 1) * u1 + F::from_ratio(2 * n_i - 1, 2 * n_i) * u2
}

/// Smallest zero of `P_n`, found by bisection in `θ` with `λ = cos θ`,
/// stepping down from `θ = π` until the first sign change.
///
/// Returns `(θ₀, λ₀)`.
pub fn smallest_root<T: Real>(n: usize) -> (T, T) {
    let f = |theta: T| char_poly(n, &theta.cos());
    let pi = T::PI();
    let step = pi / T::from_usize_lossy(8 * (n + 1));
    let f_pi = f(pi);
    let mut hi = pi;
    let mut lo = pi - step;
    let mut f_lo = f(lo);
    while f_lo.signum() == f_pi.signum() && f_lo != T::zero() {
        hi = lo;
        lo -= step;
        assert!(lo > T::zero(), "no sign change of P_{n} on (0, π]");
        f_lo = f(lo);
    }
    if f_lo == T::zero() {
        return (lo, lo.cos());
    }
    // f(lo) and f(hi) have opposite signs
    loop {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return (mid, mid.cos());
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let theta = (lo + hi) / T::lit(2.0);
    (theta, theta.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::tridiag::{protocol_matrix_squared, shifted_determinant};

    #[test]
    fn u_matches_trigonometric_definition() {
        for n in 0..30 {
            for &theta in &[0.3f64, 1.0, 2.0, 3.0] {
                let expect = ((n + 1) as f64 * theta).sin() / theta.sin();
                let got = chebyshev_u(n, &theta.cos());
                assert!((got - expect).abs() < 1e-11 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn small_polynomials() {
        // P_1(λ) = 2λ − 2/3
        for &l in &[-1.0f64, -0.3, 0.0, 0.8] {
            assert!((char_poly(1, &l) - (2.0 * l - 2.0 / 3.0)).abs() < 1e-15);
            // P_2(λ) = 4λ² − (4/5)λ − 1/4
            let p2 = 4.0 * l * l - 0.8 * l - 0.25;
            assert!((char_poly(2, &l) - p2).abs() < 1e-15);
        }
        assert_eq!(char_poly(2, &0.0f64), -0.25);
    }

    #[test]
    fn agrees_with_determinant_in_floats() {
        for n in 1..=40 {
            let (d, e2) = protocol_matrix_squared::<f64>(n);
            for k in 0..=20 {
                let l = -1.0 + 0.1 * k as f64;
                let det = shifted_determinant(&d, &e2, &(2.0 * l));
                assert!((char_poly(n, &l) - det).abs() < 1e-10, "n={n} λ={l}");
            }
        }
    }

    #[test]
    fn smallest_root_n2() {
        let (_, l0) = smallest_root::<f64>(2);
        let expect = (0.8 - (0.64f64 + 4.0).sqrt()) / 8.0;
        assert!((l0 - expect).abs() < 1e-14);
    }
}
