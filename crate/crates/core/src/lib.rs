//! Toolkit for qubit registers with full rotational symmetry.
//!
//! Operators that commute with every global spin rotation decompose over
//! total angular momentum sectors. This crate builds those operators densely,
//! provides the invariant operator bases attached to the sector structure,
//! decides which symmetric Hamiltonians few-body symmetric interactions can
//! reach, computes the matching invariants of symmetric unitaries, and
//! constructs two-ancilla couplings that recover the unreachable ones.

pub mod error;
pub mod operator;
pub mod hamiltonian;
pub mod linalg;
pub mod sectors;
pub mod cl_basis;
pub mod constraints;
pub mod lie;
pub mod phases;
pub mod ancilla;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use hamiltonian::{HamiltonianSpec, Term};
pub use operator::{
    commutator, exchange_op, hs_inner, j_component, kron, partial_trace, pauli,
    pauli_string, pauli_weight_components, random_global_rotation, swap_op, CMat, CVec,
    Operator, MAX_DENSE_QUBITS,
};
pub use sectors::{
    casimir_value, catalan, charge_vector, is_symmetric, multiplicity, sector_basis,
    sector_block, sector_labels, sector_projector, sector_table, symmetry_residual,
    total_j2, ChargeVector, SectorInfo, SectorTable,
};
pub use cl_basis::{
    bm_operator, cl_eigenvalue_closed_form, cl_operator, cl_polynomial, cl_table,
    cl_table_recursive, dl_operator, max_body_label, ClRow, ClTable,
};
pub use constraints::{
    average_energies, check_realizable, decompose, fit_energy_polynomial, swap_hamiltonian,
    swap_overlap, time_reversal_realizable, EnergyTable, RealizabilityReport,
};
pub use lie::{
    center_check, closure_dimension, closure_for, contains, lie_closure,
    symmetric_local_generators, CenterReport, LieBasis, MAX_CLOSURE_QUBITS,
};
pub use operator::{random_symmetric_hamiltonian, site_permutation_op};
pub use phases::{
    compose_phases, k_locality_certificate, lbody_phases, lbody_phases_from_path,
    lbody_phases_from_schedule, recover_sector_phases, recovery_weights, sector_phases,
    PathSegment, PhaseVector, PiecewisePath,
};
pub use ancilla::{
    block_action_residual, dynamical_residual, e_tilde, lift_pairwise,
    nested_commutator_program, q_monomial, q_tilde, synthesize, synthesize_with,
    CommutatorProgram, ProgramTerm, SynthesisResult,
};
