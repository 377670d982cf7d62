//! Special functions backing the closed-form log-derivative evaluators:
//! the Airy pair (linear profile) and modified Bessel K (exponential
//! profile), both implemented from scratch on top of a small double-double
//! arithmetic kernel. Accuracy targets: Airy ≤ 1e-12 relative for |x| ≤ 10
//! (≤ 1e-10 out to |x| = 100, measured against the oscillatory envelope on
//! the negative axis), Bessel K ≤ 1e-9 relative on its supported box.

mod airy;
mod bessel;
pub(crate) mod dd;

pub use airy::{airy, airy_zeros, AiryValues, MAX_ABS_ARGUMENT, SERIES_ASYMPTOTIC_SWITCH};
pub use bessel::{bessel_k, bessel_k_value, BesselK};
