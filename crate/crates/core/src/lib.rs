//! Superregular matrices over finite fields and convolutional codes whose
//! distance attains the bound `n(ν₁+1) − m₁ + 1`.
//!
//! * [`gf`]: prime and extension fields, alpha powers with big exponents.
//! * [`exactla`]: exact dense linear algebra over a field.
//! * [`superreg`]: trivial minors, the superregularity decision procedure and
//!   the weight property of superregular matrices.
//! * [`convcode`]: polynomial generator matrices, Forney profiles, sliding
//!   matrices, encoding and distance bounds.
//! * [`construct`]: alpha-power superregular constructions, optimal code
//!   generators and their certification.

pub mod construct;
pub mod convcode;
pub mod exactla;
pub mod gf;
pub mod rng;
pub mod superreg;
