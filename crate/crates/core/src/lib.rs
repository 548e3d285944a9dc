pub mod scalar;
pub mod series;
pub mod stirling;
pub mod phi;
pub mod saddle;
pub mod lagrangean;
pub mod oracles;
pub mod delta;
