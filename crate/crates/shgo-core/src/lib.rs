//! Molecular integrals over solid harmonic Gaussian orbitals (SHGOs).
//!
//! Two independent evaluation paths are provided and kept deliberately
//! separate so they can check each other:
//!
//! * [`engine`] — the vector-coupling path: integrals are assembled from
//!   solid-harmonic translation coefficients, single-center collapse rules,
//!   and Boys-function radial factors. This is the fast path.
//! * [`cgto`] — a textbook McMurchie–Davidson path over Cartesian Gaussians,
//!   transformed to the solid-harmonic basis at the end. This is the slow,
//!   plain reference path.
//!
//! Supporting modules:
//!
//! * [`angular`] — exact binomials, double factorials, vector-coupling
//!   (ε) coefficients, Wigner 3-j symbols.
//! * [`harmonics`] — complex Racah solid harmonics: evaluation, Cartesian
//!   expansions, the translation theorem, real/complex transforms, rotation
//!   matrices, and the term algebra for solid-harmonic gradient operators.
//! * [`boys`] — Boys functions F_n(T) and truncated-Taylor jets.
//! * [`quadrature`] — adaptive quadrature used as a first-principles oracle.
//! * [`io`] — molecule / basis-set parsing and shell construction.
//! * [`tensor`] — dense integral tensors and their file format.
//!
//! Lengths are in bohr everywhere; any unit conversion happens at parse
//! time in [`io`].

pub mod angular;
pub mod boys;
pub mod cgto;
pub mod engine;
pub mod error;
pub mod harmonics;
pub mod io;
pub mod quadrature;
pub mod tensor;

pub use error::Error;
