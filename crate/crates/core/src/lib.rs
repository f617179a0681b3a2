pub mod cli;
pub mod connection;
pub mod expr;
pub mod involution;
pub mod jet;
pub mod linalg;
pub mod scalar;
pub mod symbol;
pub mod system;
pub mod vessiot;
