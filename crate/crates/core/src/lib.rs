//! Line-bundle cohomology and q-ample cones of complete simplicial projective
//! toric varieties, computed exactly.
//!
//! The weight-`m` piece of `H^p(X, O(D))` is the reduced cohomology
//! `H̃^{p−1}(Z_α)` of a union of facets of the polytope of `X`, where `α` is the
//! set of rays with `⟨m, v_i⟩ + d_i < 0`. Everything else follows from the table
//! of those cohomologies and exact polyhedral algebra over ℚ.

pub mod asymptotic;
pub mod cache;
pub mod catalog;
pub mod cohomology;
pub mod cones;
pub mod error;
pub mod exact;
pub mod fan;
pub mod nerve;
pub mod qample;

pub use error::{Error, Result};
pub use fan::{ClassLattice, ClassVector, Fan, TorusDivisor};
pub use nerve::{ObstructionTable, RaySubset, SimplicialComplex};

/// A validated fan together with its class lattice, boundary complex and
/// obstruction table.
#[derive(Clone, Debug)]
pub struct ToricVariety {
    pub fan: Fan,
    pub lattice: ClassLattice,
    pub complex: SimplicialComplex,
    pub table: ObstructionTable,
}

impl ToricVariety {
    /// Validates `fan` and computes the obstruction table with the default cap.
    pub fn new(fan: Fan) -> Result<Self> {
        fan.validate()?;
        let table = ObstructionTable::compute(&fan, nerve::DEFAULT_RAY_CAP)?;
        Ok(Self::from_parts(fan, table))
    }

    /// Assembles a variety from an already validated fan and its table.
    pub fn from_parts(fan: Fan, table: ObstructionTable) -> Self {
        let lattice = fan.class_lattice();
        let complex = nerve::boundary_complex(&fan);
        ToricVariety { fan, lattice, complex, table }
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn picard_rank(&self) -> usize {
        self.lattice.rank
    }
}
