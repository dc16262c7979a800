use proptest::prelude::*;

use su2align::optimal::{
    asymptotic_chi1, chi1_of_coefficients, entangled_benchmark, smallest_root, solve, TriDiag,
};

fn odd_n() -> impl Strategy<Value = u32> {
    (0u32..60).prop_map(|k| 2 * k + 1)
}

proptest! {
    #[test]
    fn rayleigh_quotient_never_exceeds_optimum(n in odd_n(), raw in prop::collection::vec(-1.0f64..1.0, 60)) {
        let m = TriDiag::<f64>::protocol_matrix(n).unwrap();
        let v: Vec<f64> = raw.into_iter().take(m.len()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        let v: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let best = solve::<f64>(n).unwrap().chi1;
        prop_assert!(1.0 + m.quadratic_form(&v) <= best + 1e-12);
    }
}

#[test]
fn routes_agree_for_all_odd_n_up_to_201() {
    for n in (1..=201u32).step_by(2) {
        let p = solve::<f64>(n).unwrap();
        assert!(p.route_gap <= 1e-10, "N={n}: gap {:e}", p.route_gap);
        let (_, l0) = smallest_root::<f64>(p.coefficients.len());
        assert!((1.0 - 2.0 * l0 - p.chi1).abs() <= 1e-10);
    }
}

#[test]
fn strictly_increasing_and_bounded() {
    let mut prev = f64::NEG_INFINITY;
    for n in (1..=201u32).step_by(2) {
        let p = solve::<f64>(n).unwrap();
        let bench = entangled_benchmark::<f64>(n).unwrap();
        assert!(p.chi1 > prev, "N={n}");
        assert!(p.chi1 >= 1.0 / 3.0 - 1e-15 && p.chi1 < 3.0);
        assert!(p.chi1 < bench.chi1_exact && bench.chi1_exact < 3.0, "N={n}");
        prev = p.chi1;
    }
}

#[test]
fn perron_vector_is_positive_and_reproduces_score() {
    for n in (3..=201u32).step_by(2) {
        let p = solve::<f64>(n).unwrap();
        assert!(p.coefficients.values().iter().all(|&a| a > 0.0), "N={n}");
        assert!((chi1_of_coefficients(&p.coefficients).unwrap() - p.chi1).abs() <= 1e-10);
        assert!((p.coefficients.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn free_matrix_top_eigenvalue_is_the_benchmark() {
    for n in (1..=101u32).step_by(2) {
        let sectors = (n as usize).div_ceil(2);
        let free = TriDiag::<f64>::free(sectors);
        let top = free.largest_eigenvalue(1e-14);
        let b = entangled_benchmark::<f64>(n).unwrap();
        assert!((1.0 + top - b.chi1_exact).abs() < 1e-12);
    }
}

#[test]
fn remainder_is_fourth_order() {
    let r = |n: u32| (solve::<f64>(n).unwrap().chi1 - asymptotic_chi1::<f64>(n)).abs();
    let ratio = r(201) / r(101);
    assert!((1.0 / 32.0..=1.0 / 8.0).contains(&ratio), "ratio {ratio}");
}
