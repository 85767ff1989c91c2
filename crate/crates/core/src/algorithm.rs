//! The bilinear algorithm data model.
//!
//! A rank-`R` algorithm for `MM(m, k, n)` is a list of `R` products. Product `s` multiplies
//! the linear form `sum u[s][i][j] a[i][j]` of the `m x k` left operand by the linear form
//! `sum v[s][g][h] b[g][h]` of the `k x n` right operand, and adds `w[s][l][q]` times the
//! result into output entry `c[l][q]`. In the trilinear picture the third factor of product
//! `s` is `sum w[s][l][q] d[q][l]` with `D` of shape `n x m`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::scalar::{is_unit_or_zero, Rational};
use crate::{Error, Result};

/// The shape `(m, k, n)` of the product of an `m x k` and a `k x n` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionTriple {
    m: usize,
    k: usize,
    n: usize,
}

impl DimensionTriple {
    pub fn new(m: usize, k: usize, n: usize) -> Result<Self> {
        if m == 0 || k == 0 || n == 0 {
            return Err(Error::BadArgument(format!(
                "dimensions must be positive, got ({m}, {k}, {n})"
            )));
        }
        Ok(DimensionTriple { m, k, n })
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn volume(&self) -> u128 {
        self.m as u128 * self.k as u128 * self.n as u128
    }

    pub fn is_square(&self) -> bool {
        self.m == self.k && self.k == self.n
    }
}

impl fmt::Display for DimensionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.m, self.k, self.n)
    }
}

/// A sparse coefficient matrix: the nonzero entries of one `u`, `v` or `w` slice, sorted
/// by position with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Rational)>,
}

impl CoeffMatrix {
    /// Collects entries, summing repeated positions and dropping zeros.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (r, c, x) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Dimension(format!(
                    "coefficient position ({r}, {c}) outside {rows}x{cols}"
                )));
            }
            let slot = acc.entry((r, c)).or_insert_with(Rational::zero);
            *slot += x;
        }
        Ok(CoeffMatrix {
            rows,
            cols,
            entries: acc
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|((r, c), x)| (r, c, x))
                .collect(),
        })
    }

    /// A matrix with a single `1` at `(r, c)`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        assert!(r < rows && c < cols);
        CoeffMatrix {
            rows,
            cols,
            entries: vec![(r, c, Rational::one())],
        }
    }

    pub fn from_dense(m: &Matrix<Rational>) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m[(r, c)].is_zero() {
                    entries.push((r, c, m[(r, c)].clone()));
                }
            }
        }
        CoeffMatrix {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_dense(&self) -> Matrix<Rational> {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (r, c, x) in &self.entries {
            out[(*r, *c)] = x.clone();
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, Rational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries
            .binary_search_by(|(er, ec, _)| (*er, *ec).cmp(&(r, c)))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, x)| (*c, *r, x.clone())).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        CoeffMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Kronecker product: entry `((r1, r2), (c1, c2))` is `self[r1][c1] * other[r2][c2]`,
    /// with `(r1, r2)` flattened to `r1 * other.rows + r2`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, x1) in &self.entries {
            for (r2, c2, x2) in &other.entries {
                entries.push((r1 * other.rows + r2, c1 * other.cols + c2, x1 * x2));
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        CoeffMatrix {
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            entries,
        }
    }

    /// Count of coefficients outside `{-1, 0, 1}`.
    pub fn non_unit_count(&self) -> usize {
        self.entries.iter().filter(|(_, _, x)| !is_unit_or_zero(x)).count()
    }
}

/// One bilinear product of an algorithm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Product {
    pub u: CoeffMatrix,
    pub v: CoeffMatrix,
    pub w: CoeffMatrix,
}

/// A triple of coefficient tensors `(U, V, W)` for `MM(m, k, n)`.
///
/// Construction only checks shapes; whether the triple actually computes the matrix
/// product is decided by [`verify_brent`](crate::verify_brent).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BilinearAlgorithm {
    dims: DimensionTriple,
    products: Vec<Product>,
}

impl BilinearAlgorithm {
    pub fn new(dims: DimensionTriple, products: Vec<Product>) -> Result<Self> {
        if products.is_empty() {
            return Err(Error::BadArgument("an algorithm needs at least one product".into()));
        }
        let (m, k, n) = (dims.m, dims.k, dims.n);
        for (s, p) in products.iter().enumerate() {
            for (name, cm, rows, cols) in [("U", &p.u, m, k), ("V", &p.v, k, n), ("W", &p.w, m, n)] {
                if cm.rows != rows || cm.cols != cols {
                    return Err(Error::Dimension(format!(
                        "product {}: {name} slice is {}x{}, expected {rows}x{cols}",
                        s + 1,
                        cm.rows,
                        cm.cols
                    )));
                }
            }
        }
        Ok(BilinearAlgorithm { dims, products })
    }

    pub fn dims(&self) -> DimensionTriple {
        self.dims
    }

    pub fn rank(&self) -> usize {
        self.products.len()
    }

    pub fn products(&self) -> &[Product] {
        &self.products
    }

    pub fn u(&self, s: usize) -> &CoeffMatrix {
        &self.products[s].u
    }

    pub fn v(&self, s: usize) -> &CoeffMatrix {
        &self.products[s].v
    }

    pub fn w(&self, s: usize) -> &CoeffMatrix {
        &self.products[s].w
    }

    /// Total nonzero coefficients in `(U, V, W)`.
    pub fn nnz(&self) -> (usize, usize, usize) {
        self.products
            .iter()
            .fold((0, 0, 0), |(a, b, c), p| (a + p.u.nnz(), b + p.v.nnz(), c + p.w.nnz()))
    }

    /// Every coefficient of the algorithm, in product order.
    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        self.products.iter().flat_map(|p| {
            p.u.entries
                .iter()
                .chain(&p.v.entries)
                .chain(&p.w.entries)
                .map(|(_, _, x)| x)
        })
    }

    /// The same algorithm with its products reordered so that slot `s` holds old product
    /// `order[s]`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        BilinearAlgorithm {
            dims: self.dims,
            products: order.iter().map(|&s| self.products[s].clone()).collect(),
        }
    }

    /// Products sorted into a canonical order, for comparing algorithms up to the order in
    /// which their products are listed.
    pub fn canonical_products(&self) -> Vec<Product> {
        let mut ps = self.products.clone();
        ps.sort_by(|a, b| {
            let key = |p: &Product| {
                [&p.u, &p.v, &p.w].map(|cm| {
                    cm.entries
                        .iter()
                        .map(|(r, c, x)| (*r, *c, x.clone()))
                        .collect::<Vec<_>>()
                })
            };
            key(a).cmp(&key(b))
        });
        ps
    }

    /// Replaces a single coefficient, mostly useful for building corrupted variants.
    pub fn with_coefficient(&self, s: usize, tensor: Tensor, r: usize, c: usize, value: Rational) -> Result<Self> {
        let mut out = self.clone();
        let p = out
            .products
            .get_mut(s)
            .ok_or_else(|| Error::BadArgument(format!("no product {s}")))?;
        let cm = match tensor {
            Tensor::U => &mut p.u,
            Tensor::V => &mut p.v,
            Tensor::W => &mut p.w,
        };
        let rest = cm.entries.iter().filter(|(er, ec, _)| (*er, *ec) != (r, c)).cloned();
        *cm = CoeffMatrix::from_entries(cm.rows, cm.cols, rest.chain(std::iter::once((r, c, value))))?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tensor {
    U,
    V,
    W,
}
