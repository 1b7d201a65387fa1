//! Mod-p Steenrod algebra machinery for the divisibility of the
//! Miller–Morita–Mumford classes `κ_{i(p-1)-1}`.
//!
//! * [`arith`]: `F_p` scalars and binomials mod `p`.
//! * [`steenrod`]: words, admissible normal forms, Adem rewriting, excess.
//! * [`oracle`]: the action on `H^*((BZ/p)^n)`, an independent check on
//!   rewriting.
//! * [`thom`]: the action on `F_p[e]·λ`, two independent strategies.
//! * [`secondary`]: `θ_s`, `v_s`, `w_s`, their identities, and the
//!   divisibility table.
//! * [`registry`]: runtime-selectable verification checks.
//! * [`cli`]: the `kappadiv` command.

pub mod arith;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod registry;
pub mod secondary;
pub mod steenrod;
pub mod thom;

pub use arith::{binom_mod_p, gen_binom_mod_p, FpScalar, Prime};
pub use error::Error;
