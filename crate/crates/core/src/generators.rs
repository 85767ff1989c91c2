//! Constructors for concrete algorithms.

use num_traits::One;

use crate::algorithm::{BilinearAlgorithm, CoeffMatrix, DimensionTriple, Product};
use crate::scalar::{rational_int, Rational};
use crate::{Error, Result};

/// The schoolbook algorithm: one product `a[l][g] b[g][q]` per `(l, g, q)`, in
/// lexicographic order, rank `m k n`.
pub fn classical(dims: DimensionTriple) -> BilinearAlgorithm {
    let (m, k, n) = (dims.m(), dims.k(), dims.n());
    let mut products = Vec::with_capacity(m * k * n);
    for l in 0..m {
        for g in 0..k {
            for q in 0..n {
                products.push(Product {
                    u: CoeffMatrix::unit(m, k, l, g),
                    v: CoeffMatrix::unit(k, n, g, q),
                    w: CoeffMatrix::unit(m, n, l, q),
                });
            }
        }
    }
    BilinearAlgorithm::new(dims, products).expect("classical shapes are consistent")
}

fn sparse(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> CoeffMatrix {
    CoeffMatrix::from_entries(rows, cols, entries.iter().map(|&(r, c, x)| (r, c, rational_int(x))))
        .expect("entries are in range")
}

/// Strassen's seven products for `2 x 2` times `2 x 2`.
pub fn strassen_222() -> BilinearAlgorithm {
    // (u, v, w) with a11 = (0,0), a12 = (0,1), a21 = (1,0), a22 = (1,1)
    type Slice = &'static [(usize, usize, i64)];
    #[rustfmt::skip]
    let table: [(Slice, Slice, Slice); 7] = [
        // (a11 + a22)(b11 + b22) -> c11, c22
        (&[(0, 0, 1), (1, 1, 1)], &[(0, 0, 1), (1, 1, 1)], &[(0, 0, 1), (1, 1, 1)]),
        // (a21 + a22) b11 -> c21, -c22
        (&[(1, 0, 1), (1, 1, 1)], &[(0, 0, 1)], &[(1, 0, 1), (1, 1, -1)]),
        // a11 (b12 - b22) -> c12, c22
        (&[(0, 0, 1)], &[(0, 1, 1), (1, 1, -1)], &[(0, 1, 1), (1, 1, 1)]),
        // a22 (b21 - b11) -> c11, c21
        (&[(1, 1, 1)], &[(1, 0, 1), (0, 0, -1)], &[(0, 0, 1), (1, 0, 1)]),
        // (a11 + a12) b22 -> -c11, c12
        (&[(0, 0, 1), (0, 1, 1)], &[(1, 1, 1)], &[(0, 0, -1), (0, 1, 1)]),
        // (a21 - a11)(b11 + b12) -> c22
        (&[(1, 0, 1), (0, 0, -1)], &[(0, 0, 1), (0, 1, 1)], &[(1, 1, 1)]),
        // (a12 - a22)(b21 + b22) -> c11
        (&[(0, 1, 1), (1, 1, -1)], &[(1, 0, 1), (1, 1, 1)], &[(0, 0, 1)]),
    ];
    let products = table
        .iter()
        .map(|(u, v, w)| Product {
            u: sparse(2, 2, u),
            v: sparse(2, 2, v),
            w: sparse(2, 2, w),
        })
        .collect();
    BilinearAlgorithm::new(DimensionTriple::square(2).unwrap(), products).unwrap()
}

/// Rank of the trilinear aggregation scheme for side `n`: `n^3 / 2 + 3 n^2`.
pub fn pan_rank(n: usize) -> usize {
    n * n * n / 2 + 3 * n * n
}

/// The trilinear aggregation scheme for `n x n` times `n x n`, `n` even.
///
/// For every `(i, j, h)` with `i + j + h` even there is one aggregate product
/// `(a[i][j] + a[h+1][i+1]) (b[j][h] + b[i+1][j+1]) (d[h][i] + d[j+1][h+1])`. It carries the
/// wanted terms for `(i, j, h)` and for `(h+1, i+1, j+1)`, and six unwanted cross terms which
/// three families of `n^2` correction products remove:
///
/// * per `(i, h)`: `a[h+1][i+1] * sum_j (b[j][h] + b[i+1][j+1]) * d[h][i]`
/// * per `(i, j)`: `a[i][j] * b[i+1][j+1] * sum_h (d[h][i] + d[j+1][h+1])`
/// * per `(j, h)`: `sum_i (a[i][j] + a[h+1][i+1]) * b[j][h] * d[j+1][h+1]`
///
/// where each sum runs over the free index with `i + j + h` even. The parity test uses the
/// loop indices in `[0, n)`; the shifted subscripts wrap `n` to `0`. Corrections enter with
/// coefficient `-1` on their `w` slice. The third factor `d[q][l]` becomes `w[l][q]`.
///
/// When a shifted subscript coincides with an unshifted one the two terms merge, so some
/// coefficients are `2` rather than `1`.
pub fn pan_aggregation(n: usize) -> Result<BilinearAlgorithm> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::BadArgument(format!(
            "the aggregation scheme needs an even side n >= 2, got {n}"
        )));
    }
    let s = |x: usize| (x + 1) % n;
    let even = |i: usize, j: usize, h: usize| (i + j + h).is_multiple_of(2);
    let one = Rational::one;
    let minus = || -Rational::one();
    let cm = |entries: Vec<(usize, usize, Rational)>| {
        CoeffMatrix::from_entries(n, n, entries).expect("indices are reduced mod n")
    };

    let mut products = Vec::with_capacity(pan_rank(n));
    for i in 0..n {
        for j in 0..n {
            for h in 0..n {
                if !even(i, j, h) {
                    continue;
                }
                products.push(Product {
                    u: cm(vec![(i, j, one()), (s(h), s(i), one())]),
                    v: cm(vec![(j, h, one()), (s(i), s(j), one())]),
                    // d[h][i] -> w[i][h], d[j+1][h+1] -> w[h+1][j+1]
                    w: cm(vec![(i, h, one()), (s(h), s(j), one())]),
                });
            }
        }
    }
    for i in 0..n {
        for h in 0..n {
            let v = (0..n)
                .filter(|&j| even(i, j, h))
                .flat_map(|j| [(j, h, one()), (s(i), s(j), one())])
                .collect();
            products.push(Product {
                u: cm(vec![(s(h), s(i), one())]),
                v: cm(v),
                w: cm(vec![(i, h, minus())]),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let w = (0..n)
                .filter(|&h| even(i, j, h))
                .flat_map(|h| [(i, h, minus()), (s(h), s(j), minus())])
                .collect();
            products.push(Product {
                u: cm(vec![(i, j, one())]),
                v: cm(vec![(s(i), s(j), one())]),
                w: cm(w),
            });
        }
    }
    for j in 0..n {
        for h in 0..n {
            let u = (0..n)
                .filter(|&i| even(i, j, h))
                .flat_map(|i| [(i, j, one()), (s(h), s(i), one())])
                .collect();
            products.push(Product {
                u: cm(u),
                v: cm(vec![(j, h, one())]),
                w: cm(vec![(s(h), s(j), minus())]),
            });
        }
    }
    debug_assert_eq!(products.len(), pan_rank(n));
    BilinearAlgorithm::new(DimensionTriple::square(n)?, products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_brent;
    use num_traits::Signed;

    #[test]
    fn classical_ranks() {
        for (m, k, n) in [(1, 1, 1), (2, 2, 2), (2, 3, 4)] {
            let alg = classical(DimensionTriple::new(m, k, n).unwrap());
            assert_eq!(alg.rank(), m * k * n);
            assert!(verify_brent(&alg).valid);
        }
    }

    #[test]
    fn strassen_shape() {
        let alg = strassen_222();
        assert_eq!(alg.rank(), 7);
        assert!(alg.coefficients().all(|c| c.is_integer() && c.abs() <= Rational::one()));
        assert!(verify_brent(&alg).valid);
    }

    #[test]
    fn pan_small_sides() {
        for n in [2, 4, 6] {
            let alg = pan_aggregation(n).unwrap();
            assert_eq!(alg.rank(), pan_rank(n));
            assert!(verify_brent(&alg).valid, "n = {n}");
        }
        assert_eq!(pan_rank(2), 16);
        assert_eq!(pan_rank(34), 23120);
    }

    #[test]
    fn pan_rejects_odd_and_tiny() {
        for n in [0, 1, 3, 5] {
            assert!(matches!(pan_aggregation(n), Err(Error::BadArgument(_))));
        }
    }
}
