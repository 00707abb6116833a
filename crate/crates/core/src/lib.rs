//! Open-system simulation of polariton-condensate qubits: single-qubit
//! pulses, CPHASE/iSWAP couplings, Lindblad evolution under relaxation and
//! dephasing, and entanglement diagnostics.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod experiments;
pub mod gates;
pub mod hamiltonians;
pub mod linalg;
pub mod lindblad;
pub mod metrics;
