//! Isogeny classes of abelian surfaces over small finite fields.
//!
//! An isogeny class of abelian surfaces over `F_q` is determined by its Weil
//! polynomial `X^4 + aX^3 + bX^2 + aqX + q^2`, so everything here is keyed
//! by the triple `(q, a, b)`:
//!
//! * [`arith`]: exact integer and p-adic helpers (valuations, square tests).
//! * [`weil`]: which `(a, b)` occur at all, with p-rank, simplicity,
//!   splitting and group order.
//! * [`jacobian`]: which occurring classes contain a genus-2 Jacobian.
//! * [`classify`]: per-class records and the classes whose group order is
//!   divisible by `q^k`, both by exhaustive search and in closed form.
//! * [`smallfield`] and [`census`]: an independent check of the Jacobian
//!   rules by counting points on every genus-2 curve model over small fields.
//!
//! No floating point is used in any decision.

pub mod arith;
pub mod census;
pub mod classify;
mod error;
pub mod jacobian;
pub mod smallfield;
pub mod weil;

pub use arith::{PrimePower, Valuation};
pub use census::{CensusCache, CensusOptions, CensusReport, CensusSet};
pub use classify::{
    enumerate_order_divisible, known_non_jacobians, q_squared_closed_form, ClassificationRecord,
};
pub use error::{Error, Result};
pub use jacobian::is_jacobian;
pub use weil::{AdmissibilityVerdict, Condition, SplitForm, SupersingularRow, WeilCoeffs};
