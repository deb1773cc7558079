//! Special functions: Airy functions on the real line and the parabolic
//! cylinder function `U(ν, z)` scaled by `h(μ)`, with the uniform
//! turning-point asymptotics used near the turning point.

pub mod airy;
pub mod pcf;
pub mod uniform;

pub use airy::{airy, airy_bi, airy_scaled_ic, AiryPair};
pub use pcf::{pcf_even_odd, pcf_scaled, pcf_scaled_with, EvenOdd, PcfBudget, PcfParams, ScaledPcfPair};
pub use uniform::{h_mu_log, pcf_uniform_asymptotic, turning_maps, TurningMaps};
