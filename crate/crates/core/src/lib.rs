//! Decision and certificate engine for invariant complex structures of
//! finite integer matrix groups.
//!
//! Given the integer matrix action of a finite group (the characteristic
//! representation of a finitely generated virtually abelian group), the
//! library decides whether the group is the fundamental group of a compact
//! Kähler manifold — equivalently of a smooth projective variety — and emits
//! machine-checkable witnesses: an invariant integral symplectic form, an
//! invariant positive form, a compatible invariant complex structure, a
//! rational symplectic conjugator, and continuous deformation paths to
//! polarisable complex structures.

pub mod cm;
pub mod decide;
pub mod exactlin;
pub mod floatlin;
pub mod matgroup;
pub mod siegel;

pub use decide::{
    decide_kahler, verify_certificate, ComplexStructure, KahlerCertificate, NonexistenceWitness,
    Polarisation,
};
pub use exactlin::{Rational, RationalMatrix};
pub use matgroup::{BilinearForm, FiniteMatrixGroup, FormKind};
