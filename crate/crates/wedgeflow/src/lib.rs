//! Numerical laboratory for the Dirichlet heat flow in curved planar wedges.
//!
//! A curved wedge of opening angle 2πa is the planar domain swept by
//! `(r cos(φ+θ(r)), r sin(φ+θ(r)))` with r > 0 and φ ∈ (0, 2πa). In the
//! natural curvilinear coordinates the Dirichlet Laplacian becomes an
//! operator on the half-strip U = (0,∞) × (0,2πa) with measure ρ dρ dφ,
//! and self-similar variables ρ = (t+1)^{-1/2} r, s = log(t+1) turn the
//! heat equation into a non-autonomous parabolic problem governed by a
//! confined operator family L_s + M_s.
//!
//! The crate discretizes these objects on a staggered tensor grid and
//! provides:
//!
//! * [`geometry`] — wedge parameters, angular-shift profiles θ and the
//!   induced metric;
//! * [`assembly`] — sparse matrices for the quadratic forms h, l_s, l,
//!   the skew perturbation M_s and the mass matrix;
//! * [`spectral`] — lowest eigenpairs, the exact reference spectrum
//!   n + 1/2 + m/(4a) and the eigenvalue trajectory λ₀(s);
//! * [`evolve`] — Crank–Nicolson integration in self-similar time,
//!   energy monitoring and decay-rate fitting;
//! * [`hardy`] — the local Hardy constant λ(R,θ′), the positivity
//!   dichotomy and the certified global Hardy constant.
//!
//! Parallel execution (grid sweeps, matrix assembly, batched checks) is
//! backed by rayon and can be disabled at compile time by building with
//! `--no-default-features`; the sequential fallback computes identical
//! results.

pub mod assembly;
pub mod error;
pub mod evolve;
pub mod exec;
pub mod geometry;
pub mod hardy;
pub mod linalg;
pub mod special;
pub mod spectral;

pub use error::{Result, WedgeError};
