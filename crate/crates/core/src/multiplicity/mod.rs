//! Multiplicities in minimum length spectra and norms that attain the
//! lower bound `n ≥ f(m)`.

mod profile;
mod sharp;

pub use profile::{
    cached_f_of_m, multiplicity_profile, profile_from_lengths, MultiplicityGroup, MultiplicityProfile, MAX_CHECKED_M,
};
pub use sharp::{construct_sharp_norm, verify_sharpness, SharpNorm, SharpnessReport, MAX_SHARP_M};
