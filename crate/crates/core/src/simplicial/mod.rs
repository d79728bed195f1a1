//! Decomposition of double harmonics into simplicial harmonics.

pub mod ladder;
pub mod projection;
pub mod decompose;
pub mod oracle;
