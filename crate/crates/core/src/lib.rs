//! Legendrian knot invariants from front diagrams, over GF(2).
//!
//! The pipeline starts from a plain-text *front word* (`L<i>`, `X<i>`, `R<i>`
//! tokens describing left cusps, crossings and right cusps of a front
//! projection, indexed from the topmost strand). From there:
//!
//! * [`diagram`] parses and validates fronts, computes the Thurston–Bennequin
//!   and rotation numbers, assigns Maslov potentials, and produces the
//!   resolved Lagrangian-style diagram whose crossing heights increase
//!   strictly left to right.
//! * [`disks`] enumerates admissible immersed disks on a resolved diagram by
//!   a left-to-right sweep over vertical sections.
//! * [`dga`] assembles the Chekanov–Eliashberg differential graded algebra
//!   (free unital tensor algebra on the crossings) from one-positive-corner
//!   disks and checks its degree and `d² = 0` invariants.
//! * [`linearize`] finds augmentations, performs the change of variables,
//!   extracts the word-length-one differential, and computes graded homology
//!   and Poincaré polynomials.
//! * [`duality`] builds the expanded algebra of n vertically stacked copies
//!   (n = 2, 3) of the knot, splits its linearization into the `Q`/`P`/`C`
//!   complexes, and realizes the duality map `eta`, the fundamental class,
//!   and the cap product that inverts `eta` on homology.
//! * [`oracle`] is an independent brute-force disk enumerator used only to
//!   cross-check the sweep on small diagrams.
//!
//! Everything is exact: integer gradings (reduced mod `2·rot` when the
//! rotation number is nonzero) and GF(2) linear algebra throughout.

pub mod diagram;
pub mod disks;
pub mod dga;
pub mod duality;
pub mod error;
pub mod gf2;
pub mod json;
pub mod linearize;
pub mod oracle;

pub use diagram::{ClassicalInvariants, FrontDiagram, MaslovPotential, ResolvedDiagram};
pub use dga::Dga;
pub use error::Error;
pub use linearize::{Augmentation, LaurentPoly, LinearComplex};
