pub mod error;
pub mod factor;
pub mod gaussian;
pub mod gcd;
pub mod hull;
pub mod laurent;
pub mod numpoly;
pub mod parse;
pub mod poly;
pub mod polyhedron;
pub mod report;
pub mod resultant;
pub mod roots;
pub mod solve;
pub mod upoly;
pub mod verify;
