//! File formats, example generation and report pipeline behind the `ihsig`
//! binary.

pub mod gen;
pub mod pipeline;
pub mod scx;
