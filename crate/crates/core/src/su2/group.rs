use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A spin label `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: u32) -> Self {
        HalfInt { twice }
    }

    /// `2j`
    pub const fn twice(self) -> u32 {
        self.twice
    }

    /// Dimension `d_j = 2j + 1` of the irreducible representation.
    pub const fn dim(self) -> usize {
        self.twice as usize + 1
    }

    pub const fn is_integer(self) -> bool {
        self.twice.is_multiple_of(2)
    }

    pub fn value<T: Real>(self) -> T {
        T::from_u32(self.twice).unwrap() / T::lit(2.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// ZYZ Euler angles `(alpha, beta, gamma)` in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

/// An element of SU(2) stored as a unit quaternion `w + x i + y j + z k`.
///
/// The quaternion `q` corresponds to the spin-1/2 matrix
/// `w I - i (x σx + y σy + z σz)`, so `q` and `-q` are distinct group
/// elements that induce the same spatial rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement<T> {
    w: T,
    x: T,
    y: T,
    z: T,
}

impl<T: Real> GroupElement<T> {
    pub fn identity() -> Self {
        GroupElement {
            w: T::one(),
            x: T::zero(),
            y: T::zero(),
            z: T::zero(),
        }
    }

    /// Builds an element from raw quaternion components, normalizing them.
    pub fn from_quaternion(w: T, x: T, y: T, z: T) -> Result<Self> {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm <= T::min_positive_value() {
            return Err(Error::Domain(format!(
                "quaternion ({w}, {x}, {y}, {z}) cannot be normalized"
            )));
        }
        Ok(GroupElement {
            w: w / norm,
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// `exp(-i θ Jz)`
    pub fn rotation_z(theta: T) -> Self {
        let half = theta / T::lit(2.0);
        GroupElement {
            w: half.cos(),
            x: T::zero(),
            y: T::zero(),
            z: half.sin(),
        }
    }

    /// `exp(-i θ Jy)`
    pub fn rotation_y(theta: T) -> Self {
        let half = theta / T::lit(2.0);
        GroupElement {
            w: half.cos(),
            x: T::zero(),
            y: half.sin(),
            z: T::zero(),
        }
    }

    /// `exp(-iαJz) exp(-iβJy) exp(-iγJz)` with `β ∈ [0, π]`, `α ∈ [0, 2π)`
    /// and `γ ∈ [0, 4π)`. These ranges cover SU(2) exactly once (up to the
    /// measure-zero poles).
    pub fn from_euler(alpha: T, beta: T, gamma: T) -> Result<Self> {
        let pi = T::PI();
        let two_pi = T::TAU();
        let four_pi = two_pi + two_pi;
        let in_range = |v: T, lo: T, hi: T, closed: bool| {
            v.is_finite() && v >= lo && if closed { v <= hi } else { v < hi }
        };
        if !in_range(beta, T::zero(), pi, true) {
            return Err(Error::Domain(format!("beta = {beta} outside [0, π]")));
        }
        if !in_range(alpha, T::zero(), two_pi, false) {
            return Err(Error::Domain(format!("alpha = {alpha} outside [0, 2π)")));
        }
        if !in_range(gamma, T::zero(), four_pi, false) {
            return Err(Error::Domain(format!("gamma = {gamma} outside [0, 4π)")));
        }
        Ok(Self::from_euler_unchecked(alpha, beta, gamma))
    }

    pub(crate) fn from_euler_unchecked(alpha: T, beta: T, gamma: T) -> Self {
        let two = T::lit(2.0);
        let (sb, cb) = (beta / two).sin_cos();
        let sum = (alpha + gamma) / two;
        let diff = (alpha - gamma) / two;
        GroupElement {
            w: cb * sum.cos(),
            x: -sb * diff.sin(),
            y: sb * diff.cos(),
            z: cb * sum.sin(),
        }
    }

    /// Inverse of [`GroupElement::from_euler`], with angles in the canonical
    /// ranges. At the poles (`β = 0` or `β = π`) only `α ± γ` is determined;
    /// the free combination is set to zero.
    pub fn to_euler(&self) -> EulerAngles<T> {
        let two = T::lit(2.0);
        let two_pi = T::TAU();
        let four_pi = two_pi + two_pi;
        let cos_half = (self.w * self.w + self.z * self.z).sqrt();
        let sin_half = (self.x * self.x + self.y * self.y).sqrt();
        let beta = two * sin_half.atan2(cos_half);

        let pole = T::epsilon() * T::lit(16.0);
        // α + γ and α − γ, each defined modulo 4π
        let sum = if cos_half > pole {
            two * self.z.atan2(self.w)
        } else {
            T::zero()
        };
        let diff = if sin_half > pole {
            two * (-self.x).atan2(self.y)
        } else {
            T::zero()
        };
        let alpha = wrap((sum + diff) / two, two_pi);
        let gamma = wrap(sum - alpha, four_pi);
        EulerAngles { alpha, beta, gamma }
    }

    pub fn w(&self) -> T {
        self.w
    }
    pub fn x(&self) -> T {
        self.x
    }
    pub fn y(&self) -> T {
        self.y
    }
    pub fn z(&self) -> T {
        self.z
    }

    /// Group product `self · other`, renormalized.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self, other);
        let w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z;
        let x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y;
        let y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x;
        let z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w;
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        GroupElement {
            w: w / norm,
            x: x / norm,
            y: y / norm,
            z: z / norm,
        }
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// `-q`: the same spatial rotation, the other SU(2) element.
    pub fn negate(&self) -> Self {
        GroupElement {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Rotation angle `ω ∈ [0, 2π]` with `cos(ω/2) = w`.
    pub fn rotation_angle(&self) -> T {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        T::lit(2.0) * v.atan2(self.w)
    }

    /// Largest componentwise difference between two quaternions.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.w - other.w)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Distance to `other` allowing for a global quaternion sign.
    pub fn max_abs_diff_up_to_sign(&self, other: &Self) -> T {
        self.max_abs_diff(other)
            .min(self.max_abs_diff(&other.negate()))
    }

    /// Spin-1/2 matrix `u(g)` in the basis `(m = +1/2, m = -1/2)`.
    pub fn spin_half_matrix(&self) -> [[Complex<T>; 2]; 2] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [Complex::new(w, -z), Complex::new(-y, -x)],
            [Complex::new(y, -x), Complex::new(w, z)],
        ]
    }

    /// The top-weight matrix element `D^J_{JJ}(g) = (w - i z)^{2J}`.
    pub fn top_matrix_element(&self, j: HalfInt) -> Complex<T> {
        Complex::new(self.w, -self.z).powu(j.twice())
    }
}

fn wrap<T: Real>(v: T, period: T) -> T {
    let r = v - period * (v / period).floor();
    if r >= period || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

/// Draws a Haar-distributed element of SU(2): four independent standard
/// normals, normalized onto the unit 3-sphere.
pub fn haar_sample<T, R>(rng: &mut R) -> GroupElement<T>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    loop {
        let w: T = StandardNormal.sample(rng);
        let x: T = StandardNormal.sample(rng);
        let y: T = StandardNormal.sample(rng);
        let z: T = StandardNormal.sample(rng);
        if let Ok(g) = GroupElement::from_quaternion(w, x, y, z) {
            return g;
        }
    }
}
