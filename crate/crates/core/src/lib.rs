//! Exact linear algebra for sequence objects `V^i -> V^{i+1}` over a field,
//! their interval barcodes, and the category whose morphisms are pairs
//! `(f_1, f_ε)` of graded maps.

#![no_std]

extern crate alloc;

pub mod barcode;
pub mod dualnum;
pub mod error;
pub mod field;
pub mod graded;
pub mod hat;
pub mod hom;
pub mod linalg;
pub mod matrix;
pub mod phantom;
pub mod seq;
pub mod triang;

pub use barcode::{Barcode, BoundedClass, Classification, Interval};
pub use error::{Error, Result};
pub use graded::GradedHom;
pub use hat::HatMorphism;
pub use field::{Field, Fp, Rationals};
pub use matrix::Matrix;
pub use seq::{Endpoint, Presentation, Seq, Tail, TailKind};
pub use phantom::{Derivation, Diagram, Generator, LeibnizCheck, Relation};
pub use triang::{ExtensionClass, Triangle};
