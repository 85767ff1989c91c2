//! Recursive application of a square base algorithm, and the reductions between matrix
//! multiplication and matrix inversion.

use crate::algorithm::BilinearAlgorithm;
use crate::execute::{CostReport, Lowered};
use crate::matrix::{mat_classical_multiply, Matrix};
use crate::scalar::{Field, Ring};
use crate::verify::verify_brent;
use crate::{Error, Result};

/// A validated square base algorithm plus the side below which the recursion switches to
/// the schoolbook product. Inputs are zero-padded to the next power of the base side.
#[derive(Debug, Clone)]
pub struct RecursionConfig {
    base: BilinearAlgorithm,
    threshold: usize,
}

impl RecursionConfig {
    pub fn new(base: BilinearAlgorithm, threshold: usize) -> Result<Self> {
        let dims = base.dims();
        if !dims.is_square() {
            return Err(Error::BadArgument(format!(
                "recursion needs a square base algorithm, got {dims}; squareify it first"
            )));
        }
        if dims.m() < 2 {
            return Err(Error::BadArgument("base algorithm side must be at least 2".into()));
        }
        if threshold == 0 {
            return Err(Error::BadArgument("threshold must be at least 1".into()));
        }
        let report = verify_brent(&base);
        if !report.valid {
            return Err(Error::InvalidAlgorithm(format!(
                "base algorithm fails {} Brent equations",
                report.violations.len()
            )));
        }
        Ok(RecursionConfig { base, threshold })
    }

    pub fn base(&self) -> &BilinearAlgorithm {
        &self.base
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn base_side(&self) -> usize {
        self.base.dims().m()
    }

    /// Side the recursion actually runs on for a `side x side` input.
    pub fn padded_side(&self, side: usize) -> usize {
        if side < self.threshold {
            return side;
        }
        let mut p = 1;
        while p < side {
            p *= self.base_side();
        }
        p
    }
}

fn classical_cost(side: usize) -> CostReport {
    let s = side as u64;
    CostReport {
        bilinear_mults: s * s * s,
        additions: s * s * (s - 1),
        ..Default::default()
    }
}

/// Multiplies two `K x K` matrices by recursing through the base algorithm, with blocks
/// of the operands standing in for the scalar entries.
///
/// Sides below the threshold, and `1 x 1` blocks, are multiplied classically. The cost
/// report includes the work spent on padding.
pub fn recursive_multiply<T: Ring>(
    cfg: &RecursionConfig,
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<(Matrix<T>, CostReport)> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "recursive multiplication needs equal square operands, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let side = a.rows();
    let lowered = Lowered::<T>::new(&cfg.base)?;
    let padded = cfg.padded_side(side);
    let mut cost = CostReport::default();
    let c = if padded == side {
        multiply_rec(cfg, &lowered, a, b, &mut cost)?
    } else {
        let c = multiply_rec(
            cfg,
            &lowered,
            &a.zero_padded(padded, padded),
            &b.zero_padded(padded, padded),
            &mut cost,
        )?;
        c.block(0, 0, side, side)
    };
    cost.context = format!(
        "recursive K={side} padded={padded} base rank {} side {} threshold {}",
        cfg.base.rank(),
        cfg.base_side(),
        cfg.threshold
    );
    Ok((c, cost))
}

fn multiply_rec<T: Ring>(
    cfg: &RecursionConfig,
    lowered: &Lowered<T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
    cost: &mut CostReport,
) -> Result<Matrix<T>> {
    let side = a.rows();
    if side < cfg.threshold || side == 1 {
        *cost += &classical_cost(side);
        return mat_classical_multiply(a, b);
    }
    let n0 = cfg.base_side();
    debug_assert_eq!(side % n0, 0);
    let bs = side / n0;
    let area = (bs * bs) as u64;
    let split = |m: &Matrix<T>| -> Vec<Matrix<T>> {
        (0..n0 * n0)
            .map(|pos| m.block((pos / n0) * bs, (pos % n0) * bs, bs, bs))
            .collect()
    };
    let a_blocks = split(a);
    let b_blocks = split(b);

    let mut products = Vec::with_capacity(lowered.left.len());
    for (lf, rf) in lowered.left.iter().zip(&lowered.right) {
        for form in [lf, rf] {
            let (adds, mults) = form.cost();
            cost.additions += adds * area;
            cost.scalar_mults += mults * area;
        }
        let x = lf.eval(|pos| &a_blocks[pos]).unwrap_or_else(|| Matrix::zeros(bs, bs));
        let y = rf.eval(|pos| &b_blocks[pos]).unwrap_or_else(|| Matrix::zeros(bs, bs));
        products.push(multiply_rec(cfg, lowered, &x, &y, cost)?);
    }

    let mut c = Matrix::zeros(side, side);
    for (pos, of) in lowered.outputs.iter().enumerate() {
        let (adds, mults) = of.cost();
        cost.additions += adds * area;
        cost.scalar_mults += mults * area;
        if let Some(block) = of.eval(|s| &products[s]) {
            c.set_block((pos / n0) * bs, (pos % n0) * bs, &block);
        }
    }
    Ok(c)
}

/// Closed-form operation counts of [`recursive_multiply`] with threshold 1 on a `K x K`
/// input, `K = n0^t`: `R^t` multiplications, and additions from
/// `adds(K) = R adds(K / n0) + A (K / n0)^2` where `A` is the number of additions in one
/// application of the base algorithm (likewise for coefficient multiplications).
pub fn cost_model(alg: &BilinearAlgorithm, side: usize) -> Result<CostReport> {
    let dims = alg.dims();
    if !dims.is_square() || dims.m() < 2 {
        return Err(Error::BadArgument(format!(
            "cost model needs a square base of side >= 2, got {dims}"
        )));
    }
    let n0 = dims.m();
    let mut t = 0u32;
    let mut p = 1usize;
    while p < side {
        p *= n0;
        t += 1;
    }
    if p != side {
        return Err(Error::BadArgument(format!("{side} is not a power of {n0}")));
    }
    debug_assert_eq!(n0.pow(t), side);
    let report = predict(alg, side, 1)?;
    Ok(report.with_context(format!("predicted K={side} base rank {}", alg.rank())))
}

/// Prediction mirroring [`recursive_multiply`] for any configuration, padding included.
pub fn predicted_cost(cfg: &RecursionConfig, side: usize) -> Result<CostReport> {
    let padded = cfg.padded_side(side);
    if padded < cfg.threshold {
        return Ok(classical_cost(padded));
    }
    predict(&cfg.base, padded, cfg.threshold)
}

fn predict(alg: &BilinearAlgorithm, side: usize, threshold: usize) -> Result<CostReport> {
    // coefficient conversion cannot fail for the rationals themselves
    let lowered = Lowered::<crate::Rational>::new(alg)?;
    let (base_adds, base_mults) = lowered.linear_cost();
    let rank = alg.rank() as u64;
    let n0 = alg.dims().m();

    // walk down to the leaf side, then back up
    let mut sides = Vec::new();
    let mut s = side;
    sides.push(s);
    while !(s < threshold || s == 1) {
        s /= n0;
        sides.push(s);
    }
    let leaf = *sides.last().expect("non-empty");
    let mut acc = classical_cost(leaf);
    for w in sides.windows(2).rev() {
        let area = (w[1] * w[1]) as u64;
        acc = CostReport {
            bilinear_mults: rank * acc.bilinear_mults,
            scalar_mults: rank * acc.scalar_mults + base_mults * area,
            additions: rank * acc.additions + base_adds * area,
            ..Default::default()
        };
    }
    Ok(acc)
}

/// Inverts a square matrix by 2x2 block elimination:
///
/// ```text
/// X11 = A11^-1,  T = A21 X11,  S = A22 - T A12,  Y = S^-1,
/// X12 = -X11 A12 Y,  X21 = -Y T,  X22 = Y,  X11' = X11 - X12 T
/// ```
///
/// Two half-size inversions and six half-size products per level, the products computed
/// with [`recursive_multiply`]. The input is padded with an identity block up to a power of
/// two. No pivoting is done: a vanishing leading block of an invertible matrix gives
/// [`Error::PivotFailure`], a singular matrix gives [`Error::SingularMatrix`].
pub fn recursive_invert<T: Field>(cfg: &RecursionConfig, a: &Matrix<T>) -> Result<(Matrix<T>, CostReport)> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "cannot invert a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let side = a.rows();
    let padded = side.next_power_of_two();
    let work = if padded == side {
        a.clone()
    } else {
        let mut w = Matrix::identity(padded);
        w.set_block(0, 0, a);
        w
    };
    let mut cost = CostReport::default();
    match invert_rec(cfg, &work, 0, &mut cost) {
        Ok(x) => {
            cost.context = format!("recursive inverse K={side} padded={padded}");
            Ok((x.block(0, 0, side, side), cost))
        }
        Err(Error::PivotFailure { size }) => {
            if a.is_singular() {
                Err(Error::SingularMatrix)
            } else {
                Err(Error::PivotFailure { size })
            }
        }
        Err(e) => Err(e),
    }
}

fn invert_rec<T: Field>(
    cfg: &RecursionConfig,
    a: &Matrix<T>,
    offset: usize,
    cost: &mut CostReport,
) -> Result<Matrix<T>> {
    let side = a.rows();
    if side == 1 {
        cost.divisions += 1;
        let inv = a[(0, 0)]
            .checked_inv()
            .ok_or(Error::PivotFailure { size: offset + 1 })?;
        return Matrix::new(1, 1, vec![inv]);
    }
    let h = side / 2;
    let area = (h * h) as u64;
    let mul = |x: &Matrix<T>, y: &Matrix<T>, cost: &mut CostReport| -> Result<Matrix<T>> {
        let (p, c) = recursive_multiply(cfg, x, y)?;
        *cost += &c;
        Ok(p)
    };
    let a11 = a.block(0, 0, h, h);
    let a12 = a.block(0, h, h, h);
    let a21 = a.block(h, 0, h, h);
    let a22 = a.block(h, h, h, h);

    let x11 = invert_rec(cfg, &a11, offset, cost)?;
    let t = mul(&a21, &x11, cost)?;
    let s = a22.try_sub(&mul(&t, &a12, cost)?)?;
    cost.additions += area;
    let y = invert_rec(cfg, &s, offset + h, cost)?;
    let u = mul(&x11, &a12, cost)?;
    let x12 = mul(&u, &y, cost)?.neg();
    let x21 = mul(&y, &t, cost)?.neg();
    let x11 = x11.try_sub(&mul(&x12, &t, cost)?)?;
    cost.additions += area;

    let mut out = Matrix::zeros(side, side);
    out.set_block(0, 0, &x11);
    out.set_block(0, h, &x12);
    out.set_block(h, 0, &x21);
    out.set_block(h, h, &y);
    Ok(out)
}

/// Computes `A B` with a single inversion: the inverse of the unit upper block-triangular
///
/// ```text
/// [ I  A  0 ]            [ I  -A  AB ]
/// [ 0  I  B ]   is       [ 0   I  -B ]
/// [ 0  0  I ]            [ 0   0   I ]
/// ```
pub fn multiply_via_inversion<T, F>(a: &Matrix<T>, b: &Matrix<T>, invert: F) -> Result<Matrix<T>>
where
    T: Field,
    F: FnOnce(&Matrix<T>) -> Result<Matrix<T>>,
{
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    let mut big = Matrix::identity(m + k + n);
    big.set_block(0, m, a);
    big.set_block(m, m + k, b);
    let inv = invert(&big)?;
    if inv.rows() != m + k + n || !inv.is_square() {
        return Err(Error::Dimension("inversion returned a matrix of the wrong size".into()));
    }
    Ok(inv.block(0, m + k, m, n))
}
