//! Periodic points of the quartic algebraic function
//! `F(z) = (-1 + sqrt(1 - z^4)) / z^2`, the class-field generators they
//! produce, and the exact machinery needed to compute and check them.

pub mod cm;
pub mod dynamics;
pub mod factor;
pub mod modp;
pub mod numtheory;
pub mod padic;
pub mod pipeline;
pub mod poly;
pub mod qseries;
pub mod quadforms;
pub mod resultant;
