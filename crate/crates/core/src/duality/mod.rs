//! The expanded copy algebras and the duality machinery built on them: the
//! duality map eta, the fundamental class, and the cap product inverting
//! eta on homology.

pub mod cap;
pub mod copy;
pub mod perturb;
pub mod split;

pub use cap::{cap_product, length_two, CapReport, LengthTwoComponents};
pub use copy::{build_copies, CopyDga, CopyGen, CopyKind, CopyWord, Provenance};
pub use perturb::{perturbation_data, PerturbationScheme, SchemeKind};
pub use split::{
    conjugate_copy, duality_check, eta_homology, extend_augmentation, fundamental_class,
    induced_map, split_linearized, CopyAugmentation, DualityReport, EtaHomology,
    FundamentalClass, SplitComplexes,
};
