//! Monte Carlo simulation of the covariant estimation protocol.
//!
//! Each shot draws a true element `g` from the Haar prior, draws a
//! measurement outcome `ĝ` with density `|⟨Ψ_b| U(ĝ⁻¹g) |Ψ_a⟩|²` by
//! rejection sampling, and scores `ĝ` against `g`.
//!
//! The proposal is `h ~ Haar`, `ĝ = g·h⁻¹`, accepted with probability
//! `|closed_overlap(h)|² / peak`, where `peak = (Σ_j |a_j b_j|)²` bounds the
//! overlap (attained at the identity for nonnegative coefficients). Since the
//! overlap integrates to `Σ a_j² = 1`, the expected number of proposals per
//! shot is `peak`, which grows like `N³` for the optimal state: about 51 at
//! `N = 7` and about 3·10³ at `N = 31`.
//!
//! Shot `i` draws all its randomness from the ChaCha stream `i` keyed by the
//! seed, and shots are reduced in fixed chunks in chunk order, so results are
//! bit-for-bit independent of the number of worker threads.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimal::solve;
use crate::reps::{ladder, CoeffVector, SpinLadder};
use crate::su2::{character, character_of_angle, haar_sample, GroupElement, HalfInt, Scores};

/// Proposals allowed for a single outcome before giving up.
pub const MAX_PROPOSALS: u64 = 10_000_000;

/// Smallest acceptable acceptance rate `1/peak`.
pub const MIN_ACCEPTANCE: f64 = 1e-6;

/// Shots per reduction chunk.
pub const CHUNK_SHOTS: u64 = 4096;

/// Signal coefficients `a`, measurement weights `b`, and the rejection bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    ladder: SpinLadder,
    a: CoeffVector<f64>,
    b: CoeffVector<f64>,
    peak: f64,
}

impl ProtocolSpec {
    /// Protocol with the complete covariant measurement (`b_J = √d_J`,
    /// `b_j = d_j`).
    pub fn new(a: CoeffVector<f64>) -> Result<Self> {
        let l = ladder(a.n_spins())?;
        let b = CoeffVector::povm_weights(&l);
        Self::with_weights(a, b)
    }

    /// Protocol with explicit measurement weights.
    pub fn with_weights(a: CoeffVector<f64>, b: CoeffVector<f64>) -> Result<Self> {
        let n = a.n_spins();
        if n.is_multiple_of(2) {
            return Err(Error::UnsupportedParity(n));
        }
        let l = ladder(n)?;
        b.check_ladder(&l)?;
        if (a.norm_sqr() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "signal coefficients have Σa² = {}, expected 1",
                a.norm_sqr()
            )));
        }
        let bound: f64 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x * y).abs())
            .sum();
        let peak = bound * bound;
        if peak.is_nan() || peak <= 0.0 || 1.0 / peak < MIN_ACCEPTANCE {
            return Err(Error::Pathological(format!(
                "rejection bound {peak:e} gives acceptance rate below {MIN_ACCEPTANCE:e}"
            )));
        }
        Ok(ProtocolSpec {
            ladder: l,
            a,
            b,
            peak,
        })
    }

    /// The optimal signal for `N` spins.
    pub fn optimal(n_spins: u32) -> Result<Self> {
        Self::new(solve::<f64>(n_spins)?.coefficients)
    }

    pub fn n_spins(&self) -> u32 {
        self.ladder.n_spins()
    }

    pub fn signal(&self) -> &CoeffVector<f64> {
        &self.a
    }

    pub fn weights(&self) -> &CoeffVector<f64> {
        &self.b
    }

    /// Rejection bound `sup_h |closed_overlap(h)|²`.
    pub fn peak(&self) -> f64 {
        self.peak
    }
}

/// `⟨Ψ_a| U(h) |Ψ_b⟩ = Σ_{j<J} a_j b_j χ_j(h)/d_j + a_J b_J D^J_{JJ}(h)`.
pub fn closed_overlap(spec: &ProtocolSpec, h: &GroupElement<f64>) -> Complex<f64> {
    let omega = h.rotation_angle();
    let sectors = spec.ladder.sectors();
    let mut acc = h.top_matrix_element(sectors[0].j) * (spec.a[0] * spec.b[0]);
    for (k, s) in sectors.iter().enumerate().skip(1) {
        let ab = spec.a[k] * spec.b[k];
        if ab != 0.0 {
            acc.re += ab * character_of_angle(s.j, omega) / s.dim as f64;
        }
    }
    acc
}

/// Draws an outcome and reports how many proposals it took.
pub fn sample_outcome_counted<R: Rng + ?Sized>(
    spec: &ProtocolSpec,
    g_true: &GroupElement<f64>,
    rng: &mut R,
) -> Result<(GroupElement<f64>, u64)> {
    for proposals in 1..=MAX_PROPOSALS {
        let h: GroupElement<f64> = haar_sample(rng);
        let accept = closed_overlap(spec, &h).norm_sqr() / spec.peak;
        if rng.random::<f64>() < accept {
            return Ok((g_true.compose(&h.inverse()), proposals));
        }
    }
    Err(Error::Pathological(format!(
        "no outcome accepted after {MAX_PROPOSALS} proposals"
    )))
}

/// Draws a measurement outcome for the true element `g_true`.
pub fn sample_outcome<R: Rng + ?Sized>(
    spec: &ProtocolSpec,
    g_true: &GroupElement<f64>,
    rng: &mut R,
) -> Result<GroupElement<f64>> {
    sample_outcome_counted(spec, g_true, rng).map(|(g, _)| g)
}

/// How the true element is chosen in each shot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TruthMode {
    /// Haar-random per shot (the uniform prior).
    #[default]
    Haar,
    /// The same element every shot.
    Fixed(GroupElement<f64>),
    /// `g0 · g` with `g` Haar-random per shot.
    PreRotated(GroupElement<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub truth: TruthMode,
}

/// Aggregated Monte Carlo estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimStats {
    pub shots: u64,
    pub mean_chi1: f64,
    /// `(1 + mean_chi1)/4`
    pub mean_fidelity: f64,
    /// `6 − mean_chi1`
    pub mean_holevo: f64,
    pub stderr_chi1: f64,
    /// Accepted outcomes per proposal.
    pub acceptance_rate: f64,
    pub seed: u64,
}

fn seed_key(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(!seed).rotate_left(17).to_le_bytes());
    key
}

fn shot_rng(key: &[u8; 32], shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(shot);
    rng
}

fn one_shot(
    spec: &ProtocolSpec,
    truth: &TruthMode,
    key: &[u8; 32],
    shot: u64,
) -> Result<(f64, u64)> {
    let mut rng = shot_rng(key, shot);
    let g_true = match truth {
        TruthMode::Haar => haar_sample(&mut rng),
        TruthMode::Fixed(g) => *g,
        TruthMode::PreRotated(g0) => g0.compose(&haar_sample(&mut rng)),
    };
    let (guess, proposals) = sample_outcome_counted(spec, &g_true, &mut rng)?;
    let rel = guess.inverse().compose(&g_true);
    Ok((character(HalfInt::ONE, &rel), proposals))
}

#[derive(Debug, Clone, Copy)]
struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
    proposals: u64,
}

impl Accumulator {
    fn empty() -> Self {
        Accumulator {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            proposals: 0,
        }
    }

    fn push(&mut self, x: f64, proposals: u64) {
        self.count += 1;
        self.proposals += proposals;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        Accumulator {
            count: n,
            mean: self.mean + delta * other.count as f64 / n as f64,
            m2: self.m2
                + other.m2
                + delta * delta * (self.count as f64 * other.count as f64 / n as f64),
            proposals: self.proposals + other.proposals,
        }
    }
}

fn chunk_ranges(shots: u64) -> Vec<(u64, u64)> {
    (0..shots.div_ceil(CHUNK_SHOTS))
        .map(|c| (c * CHUNK_SHOTS, ((c + 1) * CHUNK_SHOTS).min(shots)))
        .collect()
}

fn in_pool<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Domain(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs `shots` independent trials with the default options.
pub fn run(spec: &ProtocolSpec, shots: u64, seed: u64) -> Result<SimStats> {
    run_with(spec, shots, seed, &RunOptions::default())
}

pub fn run_with(
    spec: &ProtocolSpec,
    shots: u64,
    seed: u64,
    options: &RunOptions,
) -> Result<SimStats> {
    if shots == 0 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    let key = seed_key(seed);
    let chunks = chunk_ranges(shots);
    let partials: Vec<Accumulator> = in_pool(options.workers, || {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut acc = Accumulator::empty();
                for shot in lo..hi {
                    let (chi1, proposals) = one_shot(spec, &options.truth, &key, shot)?;
                    acc.push(chi1, proposals);
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let total = partials
        .into_iter()
        .fold(Accumulator::empty(), Accumulator::merge);
    let n = total.count as f64;
    let stderr = if total.count >= 2 {
        (total.m2 / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        0.0
    };
    let derived = Scores::from_chi1(total.mean);
    Ok(SimStats {
        shots,
        mean_chi1: total.mean,
        mean_fidelity: derived.fidelity,
        mean_holevo: derived.holevo,
        stderr_chi1: stderr,
        acceptance_rate: n / total.proposals as f64,
        seed,
    })
}

/// Per-shot `χ₁` scores, in shot order.
pub fn sample_scores(
    spec: &ProtocolSpec,
    shots: u64,
    seed: u64,
    options: &RunOptions,
) -> Result<Vec<f64>> {
    let key = seed_key(seed);
    let chunks = chunk_ranges(shots);
    let per_chunk: Vec<Vec<f64>> = in_pool(options.workers, || {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                (lo..hi)
                    .map(|shot| one_shot(spec, &options.truth, &key, shot).map(|(c, _)| c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(per_chunk.into_iter().flatten().collect())
}
