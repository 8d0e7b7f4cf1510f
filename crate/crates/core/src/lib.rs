//! Numerical toolkit for the three-dimensional wave propagator: oscillatory
//! kernel evaluation, Wiener amalgam and weak-Lorentz norms, exact rational
//! exponent-region predicates, dispersive decay experiments and a radial
//! semilinear fixed-point solver.
//!
//! Module map:
//!
//! * [`rational`]  — exact rational scalars with a single `+inf`
//! * [`special`]   — Bessel `J_nu` and its two-term large-argument split
//! * [`kernel`]    — the wave-multiplier kernel `K_gamma(x, t)` in n = 3
//! * [`amalgam`]   — windowed norms: 1-d, radial 3-d, weak-Lorentz, annulus surrogate
//! * [`regions`]   — admissibility predicates and exponent bookkeeping
//! * [`decaylab`]  — decay-rate fits, windowed time profiles, scaling quotients
//! * [`nlw`]       — half-wave propagator, Sobolev norms, Duhamel fixed point

pub mod amalgam;
pub mod decaylab;
pub mod kernel;
pub mod nlw;
pub mod rational;
pub mod regions;
pub mod special;

pub use rational::ExtendedRational;
