use crate::scalar::Real;

use super::group::{GroupElement, HalfInt};

/// Below this value of `|sin(ω/2)|` the character is evaluated from its
/// Taylor series about the nearest pole.
const POLE_THRESHOLD: f64 = 1e-6;

/// Character `χ_j(g) = sin((2j+1)ω/2) / sin(ω/2)`.
pub fn character<T: Real>(j: HalfInt, g: &GroupElement<T>) -> T {
    // half-angle measured from the nearer pole, read off the quaternion
    // directly so that no precision is lost near ω = 2π
    let v = (g.x() * g.x() + g.y() * g.y() + g.z() * g.z()).sqrt();
    if g.w() >= T::zero() {
        ratio(j, v.atan2(g.w()), T::one())
    } else {
        ratio(j, v.atan2(-g.w()), pole_sign(j))
    }
}

/// Character as a function of the rotation angle `ω ∈ [0, 2π]`.
pub fn character_of_angle<T: Real>(j: HalfInt, omega: T) -> T {
    let half = omega / T::lit(2.0);
    if half <= T::FRAC_PI_2() {
        ratio(j, half, T::one())
    } else {
        ratio(j, T::PI() - half, pole_sign(j))
    }
}

/// `χ_j` at `ω = 2π − ω'` equals `(−1)^{2j} χ_j(ω')`.
fn pole_sign<T: Real>(j: HalfInt) -> T {
    if j.is_integer() {
        T::one()
    } else {
        -T::one()
    }
}

/// `sign · sin(dε)/sin(ε)` for `ε ∈ [0, π/2]`.
fn ratio<T: Real>(j: HalfInt, eps: T, sign: T) -> T {
    let d = T::from_usize_lossy(j.dim());
    let s = eps.sin();
    if s >= T::lit(POLE_THRESHOLD) {
        return sign * (d * eps).sin() / s;
    }
    // sin(dε)/sin(ε) = d [1 - (d²-1)ε²/6 + (d²-1)(3d²-7)ε⁴/360 + O(ε⁶)]
    let d2 = d * d;
    let e2 = eps * eps;
    let c2 = (d2 - T::one()) / T::lit(6.0);
    let c4 = (d2 - T::one()) * (T::lit(3.0) * d2 - T::lit(7.0)) / T::lit(360.0);
    sign * d * (T::one() - c2 * e2 + c4 * e2 * e2)
}

/// Pointwise scores of a guess against the truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores<T> {
    /// `χ_1(g_guess⁻¹ g_true)`
    pub chi1: T,
    /// Gate fidelity `(1 + χ_1)/4`.
    pub fidelity: T,
    /// Holevo frame error, taken as `6 − χ_1`.
    pub holevo: T,
}

impl<T: Real> Scores<T> {
    pub fn from_chi1(chi1: T) -> Self {
        Scores {
            chi1,
            fidelity: (T::one() + chi1) / T::lit(4.0),
            holevo: T::lit(6.0) - chi1,
        }
    }
}

pub fn pointwise_scores<T: Real>(g_guess: &GroupElement<T>, g_true: &GroupElement<T>) -> Scores<T> {
    let rel = g_guess.inverse().compose(g_true);
    Scores::from_chi1(character(HalfInt::ONE, &rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::group::haar_sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn recurrence_character(j: HalfInt, omega: f64) -> f64 {
        // U_{2j}(cos(ω/2)) by the three-term recurrence; no division anywhere
        let x = (omega / 2.0).cos();
        let (mut prev, mut cur) = (1.0, 2.0 * x);
        if j.twice() == 0 {
            return 1.0;
        }
        for _ in 1..j.twice() {
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn identity_gives_dimension() {
        let e = GroupElement::<f64>::identity();
        for twice in 0..30 {
            let j = HalfInt::from_twice(twice);
            assert_eq!(character(j, &e), j.dim() as f64);
        }
    }

    #[test]
    fn minus_identity() {
        let m = GroupElement::<f64>::identity().negate();
        assert!((character(HalfInt::HALF, &m) + 2.0).abs() < 1e-15);
        assert!((character(HalfInt::ONE, &m) - 3.0).abs() < 1e-15);
        assert!((character(HalfInt::from_twice(3), &m) + 4.0).abs() < 1e-15);
    }

    #[test]
    fn matches_recurrence_everywhere_including_poles() {
        let omegas = [
            0.0,
            1e-9,
            3e-7,
            2e-6,
            0.5,
            PI,
            2.0 * PI - 1e-8,
            2.0 * PI - 5e-6,
            2.0 * PI,
        ];
        for twice in 0..=40 {
            let j = HalfInt::from_twice(twice);
            for &w in &omegas {
                let a = character_of_angle(j, w);
                let b = recurrence_character(j, w);
                assert!(
                    (a - b).abs() <= 1e-12 * b.abs().max(1.0),
                    "j={j} ω={w} {a} {b}"
                );
            }
        }
    }

    #[test]
    fn spin_half_squared_is_one_plus_spin_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g: GroupElement<f64> = haar_sample(&mut rng);
            let c = character(HalfInt::HALF, &g);
            assert!((c * c - 1.0 - character(HalfInt::ONE, &g)).abs() < 1e-12);
        }
    }

    #[test]
    fn class_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let g: GroupElement<f64> = haar_sample(&mut rng);
            let h: GroupElement<f64> = haar_sample(&mut rng);
            let conj = h.compose(&g).compose(&h.inverse());
            for twice in 0..8 {
                let j = HalfInt::from_twice(twice);
                assert!((character(j, &conj) - character(j, &g)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn perfect_guess() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g: GroupElement<f64> = haar_sample(&mut rng);
        let s = pointwise_scores(&g, &g);
        assert!((s.chi1 - 3.0).abs() < 1e-12);
        assert!((s.fidelity - 1.0).abs() < 1e-12);
        assert!((s.holevo - 3.0).abs() < 1e-12);
    }

    #[test]
    fn half_turn_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g: GroupElement<f64> = haar_sample(&mut rng);
        let truth = g.compose(&GroupElement::rotation_y(PI));
        let s = pointwise_scores(&g, &truth);
        assert!((s.chi1 + 1.0).abs() < 1e-12);
        assert!(s.fidelity.abs() < 1e-12);
        assert!((s.holevo - 7.0).abs() < 1e-12);
    }

    #[test]
    fn score_identities_and_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let g: GroupElement<f64> = haar_sample(&mut rng);
            let h: GroupElement<f64> = haar_sample(&mut rng);
            let s = pointwise_scores(&g, &h);
            assert_eq!(s.holevo, 6.0 - s.chi1);
            assert_eq!(s.fidelity, (1.0 + s.chi1) / 4.0);
            assert!((-1e-12..=1.0 + 1e-12).contains(&s.fidelity));
            assert!((3.0 - 1e-12..=7.0 + 1e-12).contains(&s.holevo));
            // fidelity is |tr u†(g) u(h)|²/4
            let rel = g.inverse().compose(&h);
            assert!((s.fidelity - rel.w() * rel.w()).abs() < 1e-12);
        }
    }
}
