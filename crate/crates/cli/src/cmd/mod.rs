pub mod check;
pub mod gen;
pub mod hunt;
pub mod pipeline;
pub mod sweep;
