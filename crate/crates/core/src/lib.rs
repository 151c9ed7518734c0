pub mod arith;
pub mod ball;
pub mod bessel;
pub mod calibration;
pub mod chebyshev;
pub mod cli;
pub mod experiments;
pub mod kloosterman;
pub mod petersson;
pub mod poly;
pub mod verify;
