//! Oracle cross-checks run by `su2align verify`.

use num_complex::Complex;
use su2align::linalg::CMatrix;
use su2align::optimal::{char_poly, solve, TriDiag};
use su2align::oracle::{
    chi1_by_quadrature, povm_completeness, required_level, schur_average_check, BlockState,
    QuadratureGrid,
};
use su2align::reps::{ladder, CoeffVector};
use su2align::su2::HalfInt;
use su2align::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn spins(self) -> &'static [u32] {
        match self {
            Level::Quick => &[1, 3, 5],
            Level::Full => &[1, 3, 5, 7],
        }
    }

    fn max_sectors(self) -> usize {
        match self {
            Level::Quick => 50,
            Level::Full => 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.threshold
    }
}

/// Deterministic Hermitian test operator on `C^d ⊗ C^d`.
fn test_operator(d: usize) -> CMatrix<f64> {
    let raw = CMatrix::from_fn(d * d, d * d, |i, k| {
        let t = (7 * i + 3 * k + 1) as f64;
        Complex::new((t * 0.618).sin(), (t * 1.414).cos())
    });
    &raw + &raw.adjoint()
}

pub fn run(level: Level, double_top_weight: bool) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let max_n = *level.spins().last().unwrap();
    let grid = QuadratureGrid::<f64>::new(required_level(max_n));

    for &n in level.spins() {
        let l = ladder(n)?;
        let opt = solve::<f64>(n)?;
        let signal = BlockState::signal(&l, &opt.coefficients)?;
        let seed = BlockState::povm_seed(&l);
        let b = CoeffVector::povm_weights(&l);
        let quad = chi1_by_quadrature(&signal, &seed, &b, &grid)?;
        checks.push(Check {
            name: format!("quadrature vs eigenvalue, N={n}"),
            residual: (quad - opt.chi1).abs(),
            threshold: 1e-8,
        });

        let mut weights = b.values().to_vec();
        if double_top_weight {
            weights[0] *= 2.0;
        }
        let povm = seed.scaled(&CoeffVector::new(&l, weights)?)?;
        let total = povm_completeness(&signal, &povm, &grid)?;
        checks.push(Check {
            name: format!("completeness, N={n}"),
            residual: (total - 1.0).abs(),
            threshold: 1e-8,
        });
    }

    for twice in 1..=max_n {
        let j = HalfInt::from_twice(twice);
        let g = QuadratureGrid::new(2 * twice as usize);
        let residual = schur_average_check(j, &test_operator(j.dim()), &g)?;
        checks.push(Check {
            name: format!("Schur average, j={j}"),
            residual,
            threshold: 1e-10,
        });
    }

    let mut worst = 0.0f64;
    for sectors in 1..=level.max_sectors() {
        let m = TriDiag::<f64>::protocol_matrix(2 * sectors as u32 - 1)?;
        for k in 0..20 {
            let lambda = (1.0 + k as f64 * 0.754_877_666).cos();
            worst = worst
                .max((char_poly(sectors, &lambda) - m.shifted_determinant(2.0 * lambda)).abs());
        }
    }
    checks.push(Check {
        name: format!("polynomial vs determinant, n<={}", level.max_sectors()),
        residual: worst,
        threshold: 1e-9,
    });
    Ok(checks)
}
