//! SU(2) group arithmetic: unit quaternions, Haar sampling, characters,
//! Wigner matrices and the pointwise fidelity and frame-error scores.

mod character;
mod group;
mod wigner;

pub use character::{character, character_of_angle, pointwise_scores, Scores};
pub use group::{haar_sample, EulerAngles, GroupElement, HalfInt};
pub use wigner::{wigner_big_d, wigner_d_matrix, MAX_TWICE_J};
