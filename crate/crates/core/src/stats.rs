//! Kolmogorov-Smirnov tests used to compare sampled distributions.

/// Complementary Kolmogorov distribution `Q_KS(z) = P(K > z)`.
pub fn kolmogorov_q(z: f64) -> f64 {
    if z <= 0.0 {
        return 1.0;
    }
    if z < 1.18 {
        let y = (-1.233_700_550_136_17 / (z * z)).exp();
        let p =
            2.256_758_334_191_025 * (-y.ln()).sqrt() * (y + y.powi(9) + y.powi(25) + y.powi(49));
        (1.0 - p).clamp(0.0, 1.0)
    } else {
        let x = (-2.0 * z * z).exp();
        (2.0 * (x - x.powi(4) + x.powi(9))).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

fn sorted(data: &[f64]) -> Vec<f64> {
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn p_value(d: f64, effective_n: f64) -> f64 {
    let en = effective_n.sqrt();
    kolmogorov_q((en + 0.12 + 0.11 / en) * d)
}

/// Two-sample test of whether `a` and `b` come from the same distribution.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "KS test needs non-empty samples"
    );
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut k) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && k < b.len() {
        let x = a[i].min(b[k]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while k < b.len() && b[k] <= x {
            k += 1;
        }
        d = d.max((i as f64 / na - k as f64 / nb).abs());
    }
    KsResult {
        statistic: d,
        p_value: p_value(d, na * nb / (na + nb)),
    }
}

/// One-sample test of `data` against a continuous CDF.
pub fn ks_one_sample(data: &[f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    assert!(!data.is_empty(), "KS test needs a non-empty sample");
    let v = sorted(data);
    let n = v.len() as f64;
    let d = v.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs())
    });
    KsResult {
        statistic: d,
        p_value: p_value(d, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn q_limits() {
        assert_eq!(kolmogorov_q(0.0), 1.0);
        assert!(kolmogorov_q(3.0) < 1e-6);
        // tabulated: Q(1.36) ≈ 0.049
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 1e-3);
        // continuity across the branch point
        assert!((kolmogorov_q(1.1799999) - kolmogorov_q(1.18)).abs() < 1e-6);
    }

    #[test]
    fn same_distribution_passes_different_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a: Vec<f64> = (0..5000).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..5000).map(|_| rng.random()).collect();
        let c: Vec<f64> = (0..5000).map(|_| rng.random::<f64>().powi(2)).collect();
        assert!(ks_two_sample(&a, &b).p_value > 0.001);
        assert!(ks_two_sample(&a, &c).p_value < 1e-6);
        assert!(ks_one_sample(&a, |x| x.clamp(0.0, 1.0)).p_value > 0.001);
        assert!(ks_one_sample(&c, |x| x.clamp(0.0, 1.0)).p_value < 1e-6);
    }

    #[test]
    fn identical_samples_have_zero_statistic() {
        let a = [0.1, 0.5, 0.5, 0.9];
        let r = ks_two_sample(&a, &a);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }
}
