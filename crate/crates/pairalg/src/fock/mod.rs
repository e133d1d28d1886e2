//! Brute-force Fock-space oracle: explicit operator matrices on small
//! sectors, used to verify the algebraic identities and to cross-check the
//! quasispin engine.

pub mod basis;
pub mod casimir;
pub mod herm;
pub mod matrix;
pub mod ops;
pub mod verify;

pub use basis::{FockBasis, FockSpace, Mode, BASIS_SIZE_CAP};
pub use casimir::Casimirs;
pub use herm::{eig_hermitian, j_labels, resolve_j, HermEigen};
pub use matrix::CMatrix;
pub use ops::{
    coupled_commutator, coupled_product, graded_sign, sigma0_from_sigma, OperatorMatrix,
    ProductCache, QuasispinOps, QuasispinSel, Sign, TensorFamily, TensorOperator,
};
pub use verify::{
    all_pass, check_double_product_rule, check_product_rule, pairing_hamiltonian,
    verify_appendix, verify_casimirs, verify_commutator_tables, verify_duality,
    verify_engine_vs_oracle, verify_f_self_adjoint, worst, IdentityReport, SplitMix64,
    IDENTITY_TOL,
};
