//! Exhaustive finite realizations: finite categories and categorical
//! groups, the covering-group construction, conversion to and from crossed
//! modules, quotient principal bundles, reductions and reduced words.

pub mod bundle;
pub mod catgroup;
pub mod category;
pub mod fixtures;
pub mod words;

pub use bundle::{check_principal_axioms, check_reduction, quotient_bundle, FiniteAction, PrincipalBundle};
pub use catgroup::{build_cg2, catgroup_roundtrip, crossed_roundtrip, FiniteCategoricalGroup};
pub use category::{AxiomCheck, FiniteCategory, FiniteFunctor, FiniteReport};
pub use words::ReducedWord;
