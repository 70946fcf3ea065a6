//! Free-particle wave-packet families obtained from the harmonic oscillator
//! through the quantum Arnold transformation (QAT).
//!
//! The crate is organised bottom-up:
//!
//! * [`scales`] – unit system (m, ħ, ω, L, τ) and the complex factors δ, δ_r.
//! * [`special_fn`] – Hermite, Laguerre, confluent hypergeometric M, Y_l^m.
//! * [`grid`] – uniform periodic grids, spectral derivatives, band-limited
//!   resampling and N-dimensional Cartesian fields.
//! * [`states`] / [`states_nd`] – closed-form wave packets in 1D and N-D.
//! * [`operators`] – conserved operators and the Schrödinger algebra.
//! * [`observables`] – norms, moments, overlaps, hump counting.
//! * [`qat`] – the transformation itself, grid to grid.
//! * [`propagator`] – Strang split-step evolution, trap schedules, Glauber
//!   driving and barrier experiments.
//!
//! Data-parallel inner loops go through [`par`]; with the default `parallel`
//! feature they run on rayon, otherwise sequentially with identical results.

pub mod error;
pub mod grid;
pub mod observables;
pub mod operators;
pub mod par;
pub mod propagator;
pub mod qat;
pub mod quadrature;
pub mod scales;
pub mod special_fn;
pub mod states;
pub mod states_nd;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use grid::{Axis, CartesianField, CartesianGrid, GridState};
pub use observables::{moments, overlap, MomentReport};
pub use operators::{LinearOperator1D, OpKind};
pub use par::Exec;
pub use propagator::{Potential, Propagator, TrapSchedule};
pub use qat::{ClassicalSolutionPair, HarmonicPair};
pub use scales::{delta, DeltaFactor, PhysicalScales};
pub use states::{Family, StateSpec1D};
pub use states_nd::{Chirality, StateSpecND};
