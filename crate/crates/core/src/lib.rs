//! Exact-arithmetic laboratory for deformation quantization on finite-group
//! orbifold models: Moyal star products and their crossed products, twisted
//! traces, Hochschild/cyclic/Poisson operators on finite-dimensional and
//! polynomial algebras, dual Koszul cohomology, and finite groupoid sectors.

pub mod scalar;
pub mod linalg;
pub mod polyalg;
pub mod report;
pub mod star;
pub mod symgroup;
pub mod crossed;
pub mod traces;
pub mod homology;
pub mod poisson;
pub mod koszul;
pub mod fgroupoid;
