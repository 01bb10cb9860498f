pub mod cbsets;
pub mod cli;
pub mod covering;
pub mod creals;
pub mod elementary;
pub mod error;
pub mod func;
pub mod interval;
pub mod rational;
pub mod schwarz;
pub mod trigseries;
pub mod opensets;
