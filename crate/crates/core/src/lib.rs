//! Wrist sEMG thumb-gesture decoding and electrode-configuration analysis.
//!
//! The crate covers the full desk-scale experiment loop:
//!
//! - [`grid`] — electrode geometry for the Maize 4×4 grids and the Quattro
//!   wrist ring, channel-subset sampling under density constraints, and the
//!   spatial metrics `Dist` and `FOM`.
//! - [`dsp`] — Butterworth band-pass filtering, protocol-aware segment
//!   extraction, 250 ms windowing, and train-statistics normalization.
//! - [`nn`] — a minimal reverse-mode autodiff engine plus the CNN and TCN
//!   gesture classifiers.
//! - [`train`] — Adam, the training loop, and block-wise ten-fold
//!   cross-validation with leakage guards.
//! - [`attribution`] — integrated-gradients electrode importance maps.
//! - [`stats`] — Shapiro–Wilk, one-way ANOVA, Tukey HSD, and linear
//!   regression with exact p-value machinery.
//! - [`synth`] — synthetic wrist-sEMG session generation so every experiment
//!   runs without recorded data.
//! - [`experiments`] — the four experiment families (region, reference,
//!   channel count, density) plus attribution maps, emitting JSON reports.

pub mod attribution;
pub mod dsp;
pub mod experiments;
pub mod grid;
pub mod nn;
pub mod rng;
pub mod stats;
pub mod synth;
pub mod train;
