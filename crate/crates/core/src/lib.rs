//! Energy transfer between the guided modes of two quadratic-index
//! (selfoc) waveguides.
//!
//! A graded-index channel with `n(x) ∝ x²` supports modes that are
//! harmonic-oscillator eigenfunctions, so the fraction of power that mode `n`
//! of one guide hands to mode `n'` of a displaced, stretched second guide is
//! a Franck–Condon factor `|⟨n|n'⟩|²`. Units throughout are `ħ = m = 1`, the
//! potential is `U(x) = ω²(x - d)²/2` and the mode length is `l = ω^(-1/2)`.
//!
//! * [`hermite`]: Hermite polynomials, oscillator eigenfunctions and the
//!   scaled two-index Hermite table behind the closed-form overlap.
//! * [`quadrature`]: Gauss–Hermite rules, used as an independent oracle.
//! * [`coupling1d`]: planar-guide overlaps, spectra, coupling matrices and
//!   the semiclassical Franck–Condon estimate.
//! * [`coupling2d`]: elliptic guides, with optional `γxy` cross-coupling, and
//!   the Schmidt analysis of the resulting two-channel amplitudes.

pub mod coupling1d;
pub mod coupling2d;
mod dd;
pub mod error;
pub mod hermite;
pub mod quadrature;

pub use coupling1d::{
    coupling_matrix, fc_estimate, fc_estimate_detail, overlap_closed, overlap_quad, spectrum1d,
    CouplingMatrix, FcCandidate, FcEstimate, Spectrum, SpectrumEntry, Transition1D, DEFAULT_EPSILON,
};
pub use coupling2d::{
    coupled_tensor, normal_modes, overlap_coupled, schmidt_report, spectrum2d_separable,
    CouplingTensor, NormalModes, SchmidtReport, Waveguide2D,
};
pub use error::{Error, Result};
pub use hermite::{
    build_kernel, hermite_phys, oscillator_psi, scaled_hermite_table, OscillatorFrame,
    OverlapKernel, ScaledHermiteTable, MAX_MODE_INDEX,
};
pub use quadrature::{gauss_hermite, integrate, QuadratureRule};
