//! Quotients, pushouts, pullbacks and Higman composition. Every
//! construction returns the new complex together with its structural maps.

mod higman;
mod pullback;
mod pushout;
mod quotient;

pub use higman::{higman_composition, HandleConfiguration, HandlePair, Higman};
pub use pullback::{pullback, pullback_factorize, Pullback};
pub use pushout::{component_of, disjoint_union, pushout, pushout_factorize, stallings_fold, Pushout, PushoutMode};
pub(crate) use quotient::ComplexRelation;
pub use quotient::{quotient_by_group_action, quotient_by_relation, quotient_by_subcomplexes, GroupAction};
