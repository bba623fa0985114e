pub mod constructions;
pub mod cyclotomic;
pub mod document;
pub mod error;
pub mod linalg;
pub mod oplm;
pub mod states;
pub mod table1;
pub mod verdicts;

pub use constructions::{ConstructionSpec, Family};
pub use cyclotomic::{root_of_unity, ArithOp, Cyclotomic, Rational};
pub use error::{Error, Result};
pub use oplm::{OplmReport, ConstraintSystem, HermitianOperator};
pub use states::{LocalFactor, ProductState, StateSet};
pub use verdicts::{classify, Bipartition, Classification, GnlType, RuleCertificate, SearchOptions};
