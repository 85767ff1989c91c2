use super::duality::rotate_alg;
use super::require_valid;
use crate::algorithm::{BilinearAlgorithm, DimensionTriple, Product};
use crate::Result;

/// Kronecker composition: an algorithm for `MM(m1 m2, k1 k2, n1 n2)` of rank `R1 R2`.
///
/// Product `(s1, s2)` sits at index `s1 * R2 + s2`; row and column indices are flattened
/// as `i1 * m2 + i2`, i.e. `a1` acts on the blocks and `a2` inside them.
pub fn tensor_product(a1: &BilinearAlgorithm, a2: &BilinearAlgorithm) -> Result<BilinearAlgorithm> {
    require_valid(a1, "left factor")?;
    require_valid(a2, "right factor")?;
    Ok(tensor_product_unchecked(a1, a2))
}

fn tensor_product_unchecked(a1: &BilinearAlgorithm, a2: &BilinearAlgorithm) -> BilinearAlgorithm {
    let (d1, d2) = (a1.dims(), a2.dims());
    let dims =
        DimensionTriple::new(d1.m() * d2.m(), d1.k() * d2.k(), d1.n() * d2.n()).expect("products of positive sizes");
    let mut products = Vec::with_capacity(a1.rank() * a2.rank());
    for p1 in a1.products() {
        for p2 in a2.products() {
            products.push(Product {
                u: p1.u.kron(&p2.u),
                v: p1.v.kron(&p2.v),
                w: p1.w.kron(&p2.w),
            });
        }
    }
    BilinearAlgorithm::new(dims, products).expect("Kronecker shapes are consistent")
}

/// `alg ⊗ rot(alg) ⊗ rot²(alg)`: a square algorithm of side `m k n` and rank `R^3` with the
/// same exponent as `alg`.
pub fn squareify(alg: &BilinearAlgorithm) -> Result<BilinearAlgorithm> {
    require_valid(alg, "input algorithm")?;
    let once = rotate_alg(alg);
    let twice = rotate_alg(&once);
    Ok(tensor_product_unchecked(&tensor_product_unchecked(alg, &once), &twice))
}
