//! Validity-preserving operations on algorithms.

mod duality;
mod equivalence;
mod product;

pub use duality::{dual, DualityPermutation};
pub use equivalence::{apply_equivalence, random_equivalence, EquivalenceTransform};
pub use product::{squareify, tensor_product};

use crate::algorithm::BilinearAlgorithm;
use crate::verify::verify_brent;
use crate::{Error, Result};

fn require_valid(alg: &BilinearAlgorithm, what: &str) -> Result<()> {
    let report = verify_brent(alg);
    if report.valid {
        Ok(())
    } else {
        Err(Error::InvalidAlgorithm(format!(
            "{what} fails {} Brent equations",
            report.violations.len()
        )))
    }
}
