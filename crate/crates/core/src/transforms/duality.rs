use std::fmt;
use std::str::FromStr;

use super::require_valid;
use crate::algorithm::{BilinearAlgorithm, DimensionTriple, Product};
use crate::{Error, Result};

/// The six ways of reassigning the roles of `A`, `B` and `D` in `trace(A B D)`, named by the
/// dimension triple of the resulting problem when the input solves `MM(m, k, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DualityPermutation {
    /// `(m, k, n)`, the identity.
    Mkn,
    /// `(k, n, m)`: `trace(ABD) = trace(BDA)`.
    Knm,
    /// `(n, m, k)`: `trace(ABD) = trace(DAB)`.
    Nmk,
    /// `(m, n, k)`: `trace(ABD) = trace(D^T B^T A^T)`.
    Mnk,
    /// `(k, m, n)`.
    Kmn,
    /// `(n, k, m)`: the transposed problem `B^T A^T`.
    Nkm,
}

impl DualityPermutation {
    pub const ALL: [DualityPermutation; 6] = [
        DualityPermutation::Mkn,
        DualityPermutation::Knm,
        DualityPermutation::Nmk,
        DualityPermutation::Mnk,
        DualityPermutation::Kmn,
        DualityPermutation::Nkm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DualityPermutation::Mkn => "mkn",
            DualityPermutation::Knm => "knm",
            DualityPermutation::Nmk => "nmk",
            DualityPermutation::Mnk => "mnk",
            DualityPermutation::Kmn => "kmn",
            DualityPermutation::Nkm => "nkm",
        }
    }

    pub fn is_cyclic(self) -> bool {
        matches!(
            self,
            DualityPermutation::Mkn | DualityPermutation::Knm | DualityPermutation::Nmk
        )
    }

    pub fn apply_to_dims(self, d: DimensionTriple) -> DimensionTriple {
        let (m, k, n) = (d.m(), d.k(), d.n());
        let (a, b, c) = match self {
            DualityPermutation::Mkn => (m, k, n),
            DualityPermutation::Knm => (k, n, m),
            DualityPermutation::Nmk => (n, m, k),
            DualityPermutation::Mnk => (m, n, k),
            DualityPermutation::Kmn => (k, m, n),
            DualityPermutation::Nkm => (n, k, m),
        };
        DimensionTriple::new(a, b, c).expect("permuted dims stay positive")
    }
}

impl fmt::Display for DualityPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DualityPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DualityPermutation::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::BadArgument(format!(
                    "unknown permutation `{s}`, expected one of mkn, knm, nmk, mnk, kmn, nkm"
                ))
            })
    }
}

/// Rotates roles `(A, B, D) -> (B, D, A)`: the product `u(A) v(B) w(D)` becomes
/// `u'(B) v'(D) w'(A)` with `u' = V`, `v' = W^T`, `w' = U^T`.
fn rotate(p: &Product) -> Product {
    Product {
        u: p.v.clone(),
        v: p.w.transpose(),
        w: p.u.transpose(),
    }
}

/// Uses `trace(ABD) = trace(D^T B^T A^T)`: `u' = W`, `v' = V^T`, `w' = U`.
fn reflect(p: &Product) -> Product {
    Product {
        u: p.w.clone(),
        v: p.v.transpose(),
        w: p.u.clone(),
    }
}

fn map_products(alg: &BilinearAlgorithm, dims: DimensionTriple, f: impl Fn(&Product) -> Product) -> BilinearAlgorithm {
    BilinearAlgorithm::new(dims, alg.products().iter().map(f).collect()).expect("dual slices have the permuted shapes")
}

pub(crate) fn rotate_alg(alg: &BilinearAlgorithm) -> BilinearAlgorithm {
    let d = alg.dims();
    map_products(alg, DualityPermutation::Knm.apply_to_dims(d), rotate)
}

fn reflect_alg(alg: &BilinearAlgorithm) -> BilinearAlgorithm {
    let d = alg.dims();
    map_products(alg, DualityPermutation::Mnk.apply_to_dims(d), reflect)
}

/// The algorithm for the permuted problem, with the same rank. The input must be valid.
pub fn dual(alg: &BilinearAlgorithm, perm: DualityPermutation) -> Result<BilinearAlgorithm> {
    require_valid(alg, "input algorithm")?;
    Ok(dual_unchecked(alg, perm))
}

pub(crate) fn dual_unchecked(alg: &BilinearAlgorithm, perm: DualityPermutation) -> BilinearAlgorithm {
    match perm {
        DualityPermutation::Mkn => alg.clone(),
        DualityPermutation::Knm => rotate_alg(alg),
        DualityPermutation::Nmk => rotate_alg(&rotate_alg(alg)),
        DualityPermutation::Mnk => reflect_alg(alg),
        DualityPermutation::Kmn => reflect_alg(&rotate_alg(alg)),
        DualityPermutation::Nkm => reflect_alg(&rotate_alg(&rotate_alg(alg))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{classical, pan_aggregation, strassen_222};
    use crate::verify::verify_brent;

    #[test]
    fn all_duals_of_strassen_are_valid() {
        for perm in DualityPermutation::ALL {
            let d = dual(&strassen_222(), perm).unwrap();
            assert_eq!(d.rank(), 7);
            assert!(verify_brent(&d).valid, "{perm}");
        }
    }

    #[test]
    fn rectangular_duals_have_permuted_dims() {
        let alg = classical(DimensionTriple::new(2, 3, 4).unwrap());
        for perm in DualityPermutation::ALL {
            let d = dual(&alg, perm).unwrap();
            assert_eq!(d.dims(), perm.apply_to_dims(alg.dims()));
            assert_eq!(d.rank(), 24);
            assert!(verify_brent(&d).valid, "{perm}");
        }
        assert_eq!(
            dual(&alg, DualityPermutation::Knm).unwrap().dims(),
            DimensionTriple::new(3, 4, 2).unwrap()
        );
    }

    #[test]
    fn rotation_has_order_three() {
        let alg = pan_aggregation(2).unwrap();
        let back = rotate_alg(&rotate_alg(&rotate_alg(&alg)));
        assert_eq!(back, alg);
        let reflected = reflect_alg(&reflect_alg(&alg));
        assert_eq!(reflected, alg);
    }

    #[test]
    fn invalid_input_is_rejected() {
        let broken = strassen_222()
            .with_coefficient(0, crate::Tensor::V, 0, 0, crate::scalar::rational_int(0))
            .unwrap();
        assert!(matches!(
            dual(&broken, DualityPermutation::Knm),
            Err(Error::InvalidAlgorithm(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for perm in DualityPermutation::ALL {
            assert_eq!(perm.name().parse::<DualityPermutation>().unwrap(), perm);
        }
        assert!("xyz".parse::<DualityPermutation>().is_err());
    }
}
