//! Dense row-major matrices over a [`Ring`].

use std::fmt::{self, Write as _};
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::scalar::{Field, Ring};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{what} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sum")?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "difference")?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub(crate) fn zip_with(&self, other: &Self, mut f: impl FnMut(&T, &T) -> T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub(crate) fn add_assign_ref(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = a.clone() + b.clone();
        }
    }

    pub(crate) fn sub_assign_ref(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = a.clone() - b.clone();
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    /// Copy of the `rows`x`cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block out of range"
        );
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    /// Embeds `self` in the top-left corner of a larger zero matrix.
    pub fn zero_padded(&self, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        out.set_block(0, 0, self);
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = &self[(r, c)];
                    if r == c {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
        }
        f.write_str("]")
    }
}

/// The schoolbook product `C[l][q] = sum_g A[l][g] B[g][q]`.
pub fn mat_classical_multiply<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for l in 0..a.rows {
        for q in 0..b.cols {
            let mut acc = T::zero();
            for g in 0..a.cols {
                acc = acc + a[(l, g)].clone() * b[(g, q)].clone();
            }
            out[(l, q)] = acc;
        }
    }
    Ok(out)
}

impl<T: Field> Matrix<T> {
    /// Gauss-Jordan inverse with row pivoting. Used as the reference inverse and to tell a
    /// singular matrix apart from a failed pivot in the block-recursive inverse.
    pub fn gauss_jordan_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !work[(r, col)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                work.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = work[(col, col)].checked_inv().ok_or(Error::SingularMatrix)?;
            for c in 0..n {
                work[(col, c)] = work[(col, c)].clone() * p.clone();
                inv[(col, c)] = inv[(col, c)].clone() * p.clone();
            }
            for r in 0..n {
                if r == col || work[(r, col)].is_zero() {
                    continue;
                }
                let factor = work[(r, col)].clone();
                for c in 0..n {
                    work[(r, c)] = work[(r, c)].clone() - factor.clone() * work[(col, c)].clone();
                    inv[(r, c)] = inv[(r, c)].clone() - factor.clone() * inv[(col, c)].clone();
                }
            }
        }
        Ok(inv)
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.gauss_jordan_inverse(), Err(Error::SingularMatrix))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<T: Ring + FromStr> Matrix<T> {
    /// Parses the text format: a `rows cols` header line followed by `rows` lines of
    /// `cols` whitespace-separated entries. Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(hline, "header must be `rows cols`"))?;
        let &[rows, cols] = dims.as_slice() else {
            return Err(Error::parse(hline, "header must be `rows cols`"));
        };
        if rows == 0 || cols == 0 {
            return Err(Error::parse(hline, "dimensions must be positive"));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(hline + r + 1, format!("expected {rows} rows, found {r}")))?;
            let before = data.len();
            for tok in line.split_whitespace() {
                let x = tok
                    .parse::<T>()
                    .map_err(|_| Error::parse(lno, format!("bad entry `{tok}`")))?;
                data.push(x);
            }
            if data.len() - before != cols {
                return Err(Error::parse(
                    lno,
                    format!("expected {cols} entries, found {}", data.len() - before),
                ));
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(Error::parse(lno, "trailing content after matrix"));
        }
        Matrix::new(rows, cols, data)
    }
}

impl<T: Ring> Matrix<T> {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, rational_int, Rational};
    use crate::ModularScalar;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int_matrix(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rational_int).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn classical_product_by_hand() {
        let a = int_matrix(vec![vec![1, 2], vec![3, 4]]);
        let b = int_matrix(vec![vec![5, 6], vec![7, 8]]);
        let c = mat_classical_multiply(&a, &b).unwrap();
        assert_eq!(c, int_matrix(vec![vec![19, 22], vec![43, 50]]));
        assert_eq!(mat_classical_multiply(&Matrix::identity(2), &b).unwrap(), b);
    }

    #[test]
    fn classical_dimension_error() {
        let a = Matrix::<Rational>::zeros(2, 3);
        let b = Matrix::<Rational>::zeros(2, 2);
        assert!(matches!(mat_classical_multiply(&a, &b), Err(Error::Dimension(_))));
    }

    #[test]
    fn construction_checks() {
        assert!(Matrix::<Rational>::new(0, 1, vec![]).is_err());
        assert!(Matrix::new(2, 2, vec![rational_int(1)]).is_err());
        assert!(Matrix::from_rows(vec![vec![rational_int(1)], vec![]]).is_err());
    }

    #[test]
    fn inverse_and_singularity() {
        let a = int_matrix(vec![vec![0, 1], vec![1, 1]]);
        let inv = a.gauss_jordan_inverse().unwrap();
        assert!(mat_classical_multiply(&a, &inv).unwrap().is_identity());
        assert!(int_matrix(vec![vec![1, 2], vec![2, 4]]).is_singular());
    }

    #[test]
    fn text_round_trip() {
        let a = Matrix::from_rows(vec![
            vec![rational(1, 2).unwrap(), rational_int(-3)],
            vec![rational(7, -9).unwrap(), rational_int(0)],
        ])
        .unwrap();
        let text = a.to_text();
        assert_eq!(text, "2 2\n1/2 -3\n-7/9 0\n");
        assert_eq!(Matrix::<Rational>::parse_text(&text).unwrap(), a);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = Matrix::<Rational>::parse_text("2 2\n1 2\n3\n").unwrap_err();
        assert_eq!(err, Error::parse(3, "expected 2 entries, found 1"));
        let err = Matrix::<Rational>::parse_text("2 2\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Matrix::<Rational>::parse_text("2 2\n1 x\n3 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    type F = ModularScalar<{ crate::MERSENNE_61 }>;

    proptest! {
        #[test]
        fn modular_product_matches_reduced_rational(seed in any::<u64>(), m in 1usize..6, k in 1usize..6, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ints = |len: usize| -> Vec<i64> { (0..len).map(|_| rng.gen_range(-1_000_000_000i64..1_000_000_000)).collect() };
            let (a, b) = (ints(m * k), ints(k * n));
            let exact = mat_classical_multiply(
                &Matrix::new(m, k, a.iter().map(|&x| rational_int(x)).collect()).unwrap(),
                &Matrix::new(k, n, b.iter().map(|&x| rational_int(x)).collect()).unwrap(),
            ).unwrap();
            let modular = mat_classical_multiply(
                &Matrix::new(m, k, a.iter().map(|&x| F::from_i64(x)).collect()).unwrap(),
                &Matrix::new(k, n, b.iter().map(|&x| F::from_i64(x)).collect()).unwrap(),
            ).unwrap();
            prop_assert_eq!(exact.map(|x| F::from_rational(x).unwrap()), modular);
        }
    }
}
