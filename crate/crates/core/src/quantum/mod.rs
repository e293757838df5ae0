//! Quantum backend on the quantized torus and on the truncated plane.
//!
//! Operators are dense `Array2<C64>`; kets are `Array1<C64>`. On the torus
//! the position basis `|q_n⟩`, `q_n = (n + q̄)/N`, is used throughout; on
//! the plane the number basis `|n⟩`, `n < D`.

mod coherent;
mod density;
mod husimi;
mod space;
mod symmetry;
mod system;

pub use coherent::{coherent_matrix, coherent_state, coherent_tail, TORUS_IMAGES};
pub use density::{
    op_inner, p_rep_density, pure_density, superop_step, DensityOperator, StateVector,
    WEIGHT_CUTOFF,
};
pub use husimi::{husimi, husimi_at, HusimiSource};
pub use space::{KetSpace, LiouvilleSpace, QuantumMode};
pub use symmetry::{symmetry_report, SymmetryReport};
pub use system::{
    build_torus_system, fourier_kernel, harper_unitary, kicked_unitary, oscillator_dimension,
    oscillator_system, oscillator_unitary, QuantumGeometry, QuantumSystem, Unitary,
};
