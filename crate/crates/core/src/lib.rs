//! Exact arithmetic for Heegner-cycle relations on Shimura curves: number
//! theory helpers, Hashimoto's quaternion model, model search, genus-2 theta
//! characteristic signs, `(r, s)` enumeration and relation assembly.

pub mod arith;
pub mod error;
pub mod heegner;
pub mod int_serde;
pub mod model;
pub mod quatalg;
pub mod relations;
pub mod thetasign;

pub use arith::{BinaryQuadraticForm, Discriminant, Place};
pub use error::{Error, Result};
pub use heegner::RSTuple;
pub use quatalg::{HashimotoModel, QuaternionAlgebra, QuaternionElement, SingularRelation};
pub use relations::{build_relation, check_relation, RelationReport, RelationTerm};
pub use thetasign::{Calibration, ThetaCharacteristic};
