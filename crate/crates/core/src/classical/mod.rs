//! Classical Perron-Frobenius backend.
//!
//! Densities are never advected on the grid. Each node instead carries its
//! back-trajectory `M⁻ᵗ(x)` and the field is re-evaluated from the closed
//! form of `ρ₀`, which keeps `ρ_t = ρ₀ ∘ M⁻ᵗ` exact at the nodes.

mod density;
mod evolution;
mod maps;
mod space;

pub use density::{GaussianDensity, PhaseDensity, LATTICE_CUTOFF};
pub use evolution::{pf_evolve, BackTrajectoryState, PfSeries};
pub use maps::{
    harper_map, kicked_forward, kicked_inverse, kicked_jacobian, oscillator_map, AreaPreservingMap,
    HarperMap, KickedForm, OscillatorMap,
};
pub use space::{l2_inner, FieldSpace};
