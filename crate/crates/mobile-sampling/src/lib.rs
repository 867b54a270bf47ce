pub mod bandlimited;
pub mod certify;
pub mod config;
pub mod convex;
pub mod crofton;
pub mod error;
pub mod geometry;
pub mod nodal;
pub mod parallel;
pub mod quadrature;
pub mod random;
pub mod remez;
pub mod report;
pub mod stats;
pub mod surface;
