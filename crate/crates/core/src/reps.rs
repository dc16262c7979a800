//! Clebsch-Gordan bookkeeping for `N` spin-1/2 particles: which total spins
//! `j` occur, their dimensions `d_j`, and their multiplicities `n_j`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::su2::HalfInt;

/// One irreducible block of `(1/2)^⊗N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub j: HalfInt,
    pub dim: usize,
    pub multiplicity: BigUint,
}

/// All sectors of `(1/2)^⊗N`, ordered from `J = N/2` downwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinLadder {
    n_spins: u32,
    sectors: Vec<Sector>,
}

fn binomial(n: u32, k: u32) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of copies of spin `j` in `(1/2)^⊗N`:
/// `n_j = (2j+1)/(N/2+j+1) · C(N, N/2+j)`.
pub fn multiplicity(n_spins: u32, j: HalfInt) -> Result<BigUint> {
    if j.twice() > n_spins {
        return Err(Error::Domain(format!(
            "j = {j} exceeds N/2 for N = {n_spins}"
        )));
    }
    if !(j.twice() + n_spins).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "parity mismatch: 2j = {} and N = {n_spins} must have equal parity",
            j.twice()
        )));
    }
    let k = (n_spins + j.twice()) / 2;
    let num = binomial(n_spins, k) * (j.twice() + 1);
    Ok(num / (k + 1))
}

/// Builds the ladder for `N ≥ 1` spins and checks its counting identities.
pub fn ladder(n_spins: u32) -> Result<SpinLadder> {
    if n_spins == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let sectors = (0..=n_spins)
        .rev()
        .step_by(2)
        .map(|twice| {
            let j = HalfInt::from_twice(twice);
            Ok(Sector {
                j,
                dim: j.dim(),
                multiplicity: multiplicity(n_spins, j)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ladder = SpinLadder { n_spins, sectors };
    debug_assert_eq!(ladder.total_dimension(), BigUint::one() << n_spins);
    Ok(ladder)
}

impl SpinLadder {
    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// Number of sectors.
    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    /// Highest spin `J = N/2`.
    pub fn top(&self) -> HalfInt {
        self.sectors[0].j
    }

    /// Position of sector `j` (0 for `J`), if present.
    pub fn index_of(&self, j: HalfInt) -> Option<usize> {
        self.sectors.iter().position(|s| s.j == j)
    }

    /// `Σ_j n_j d_j`, which must equal `2^N`.
    pub fn total_dimension(&self) -> BigUint {
        self.sectors
            .iter()
            .fold(BigUint::zero(), |acc, s| acc + &s.multiplicity * s.dim)
    }

    /// Whether every sector below `J` has room to pair each `m` with a
    /// distinct multiplicity label (`n_j ≥ d_j`), and `n_J = 1`.
    pub fn supports_internal_entanglement(&self) -> bool {
        self.sectors[0].multiplicity.is_one()
            && self.sectors[1..]
                .iter()
                .all(|s| s.multiplicity >= BigUint::from(s.dim))
    }
}

/// Real coefficients, one per sector of a ladder (index 0 is `J`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector<T> {
    n_spins: u32,
    values: Vec<T>,
}

impl<T: Real> CoeffVector<T> {
    pub fn new(ladder: &SpinLadder, values: Vec<T>) -> Result<Self> {
        if values.len() != ladder.len() {
            return Err(Error::Domain(format!(
                "expected {} coefficients for N = {}, got {}",
                ladder.len(),
                ladder.n_spins(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(CoeffVector {
            n_spins: ladder.n_spins(),
            values,
        })
    }

    /// Measurement weights `b_J = √d_J`, `b_j = d_j` for `j < J`, which make
    /// the covariant measurement complete.
    pub fn povm_weights(ladder: &SpinLadder) -> Self {
        let values = ladder
            .sectors()
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let d = T::from_usize_lossy(s.dim);
                if k == 0 {
                    d.sqrt()
                } else {
                    d
                }
            })
            .collect();
        CoeffVector {
            n_spins: ladder.n_spins(),
            values,
        }
    }

    /// Equal weight on every sector, unit norm.
    pub fn uniform(ladder: &SpinLadder) -> Self {
        let v = T::one() / T::from_usize_lossy(ladder.len()).sqrt();
        CoeffVector {
            n_spins: ladder.n_spins(),
            values: vec![v; ladder.len()],
        }
    }

    /// All weight on the `J` sector.
    pub fn top_only(ladder: &SpinLadder) -> Self {
        let mut values = vec![T::zero(); ladder.len()];
        values[0] = T::one();
        CoeffVector {
            n_spins: ladder.n_spins(),
            values,
        }
    }

    pub fn n_spins(&self) -> u32 {
        self.n_spins
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|&v| v * v).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= T::zero() {
            return Err(Error::Domain(
                "cannot normalize a zero coefficient vector".into(),
            ));
        }
        Ok(CoeffVector {
            n_spins: self.n_spins,
            values: self.values.iter().map(|&v| v / n).collect(),
        })
    }

    pub(crate) fn check_ladder(&self, ladder: &SpinLadder) -> Result<()> {
        if self.n_spins != ladder.n_spins() {
            return Err(Error::LadderMismatch {
                left: self.n_spins,
                right: ladder.n_spins(),
            });
        }
        Ok(())
    }
}

impl<T> std::ops::Index<usize> for CoeffVector<T> {
    type Output = T;
    fn index(&self, k: usize) -> &T {
        &self.values[k]
    }
}
