//! Library behind the `optcode` binary: build and certify optimal-distance
//! convolutional codes, check superregularity and inspect finite fields.
//!
//! Exit codes: 0 the property holds, 1 it is false, 2 usage or parse error,
//! 3 a budget or size cap was exceeded, 4 a certification hypothesis failed.
//! For `pattern triviality` the property is "the minor is trivial".

pub mod args;
pub mod commands;
pub mod docs;
pub mod error;
