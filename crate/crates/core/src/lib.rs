//! Generalized quiver Hecke algebras from root data: the faithful polynomial
//! representation, its defining relations and braid corrections, and an
//! independent fixed-point localization model.
//!
//! Arithmetic is exact throughout. Weyl group elements are indices into a
//! precomputed table ([`WeylGroup`]); polynomial components are indexed by
//! the cosets `W \ 𝕎` ([`CosetTable`]).

pub mod algebra;
pub mod config;
pub mod error;
pub mod localize;
pub mod opexpr;
pub mod poly;
pub mod presets;
pub mod rational;
pub mod repdata;
pub mod report;
pub mod rootcore;
pub mod subgroup;
pub mod suite;

pub use algebra::{BraidDefect, Model, ModuleElement, NormalForm, TwistedOperator};
pub use config::Config;
pub use error::{Error, Result};
pub use localize::{FixedPointMatrix, FixedPointVector, Localizer};
pub use opexpr::{eval_str, parse_opexpr, parse_poly, OpExpr};
pub use poly::{LinearProduct, Poly, RatFun};
pub use presets::{klr, klr_oracle_check, nilhecke, skew, KlrOracle, QuiverSpec};
pub use rational::Q;
pub use repdata::{Multiset, SpringerData};
pub use report::{all_passed, Check};
pub use rootcore::{RootDatum, Weight, WeylElement, WeylGroup};
pub use subgroup::{ConstraintKind, CosetTable, SubSystem, TorusConstraint};
