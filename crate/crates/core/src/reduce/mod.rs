//! Constructive reductions: transitive action on isotropic vectors, diagonalization modulo the radical,
//! dilation and local-global patching, conjugation into the elementary subgroup, and BFS closures.

mod bfs;
mod lg;
mod diagonal;
mod vector;

pub use bfs::{
    bfs_closure, bfs_with, closure_generators, commutator_containment_check, gl_closure_comparison, gl_correspondence,
    gl_elementary, symplectic_order, Answer, BfsCaps, ContainmentTally, GlComparison, GlCorrespondence, Key,
    MembershipOracle, OracleMode,
};
pub use lg::{
    conjugate_into_e, dilate, embed_word, local_global_patch, local_group, local_slices, localize_matrix, localize_word,
    patch_word, specialize_matrix, Dilation, LocalSlice, PatchReport, PatchStatus, SlicePiece,
};
pub use diagonal::{diagonalize_mod_radical, Diagonalization};
pub use vector::{
    check_isotropic, column_reduce_semisimple, find_unit_in_coset, improve_to_unit, quadratic_value,
    reduce_isotropic_unimodular, torus_word, unimodular_certificate, ReductionResult, UnimodularCertificate,
};

#[cfg(test)]
mod tests;
