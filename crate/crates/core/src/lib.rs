//! Exact-arithmetic composition algebras over finite fields.
//!
//! The crate builds symmetric compositions (split para-Cayley and Okubo),
//! induces cyclic compositions over cubic cyclic extensions, realizes the
//! Clifford-algebra identification of the even part with a product of
//! endomorphism algebras, and implements the constructive correspondence
//! between order-3 semilinear automorphisms and the symmetric compositions
//! they descend to. All arithmetic is exact: checks either hold identically
//! or fail with a witness.

pub mod clifford;
pub mod cyclic;
pub mod extension;
pub mod field;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod symmetric;
pub mod triality;

pub use clifford::{alpha_star_assemble, psi_u_extract, AlphaStar, ClifError, CliffordAlgebra};
pub use cyclic::{
    hat_rho, induce, multiplier_extract, split_form, CycError, CyclicComposition,
    SemilinearIsotopy, SplitCyclicTriple,
};
pub use extension::{make_extension, Aut, CubicCyclicExtension, ExtError};
pub use field::{prime_power, FieldElement, FieldError, FiniteField};
pub use linalg::{Mat, Tensor3};
pub use report::{Check, CheckReport};
pub use sample::{SampleStream, DEFAULT_SEED};
pub use symmetric::{okubo, para_cayley_split, SymError, SymmetricComposition};
pub use triality::{
    classify_conjugacy, descend, tau_from_symmetric, Classification, DescentError, DescentResult,
    TriError, TrialitarianAut, Verdict,
};
