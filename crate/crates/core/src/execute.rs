//! Running an algorithm on concrete matrices, with operation counts.

use std::fmt;
use std::ops::{Add, AddAssign};

use num_traits::One;

use crate::algorithm::{BilinearAlgorithm, CoeffMatrix};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Ring};
use crate::{Error, Result};

/// Operation counts of one execution.
///
/// * `bilinear_mults`: multiplications of two data-dependent values (the `R` products, or
///   the scalar products at the leaves of a recursion).
/// * `scalar_mults`: multiplications by a coefficient outside `{-1, 0, 1}`.
/// * `additions`: additions and subtractions of two nonzero terms.
/// * `divisions`: reciprocals taken (inversion only).
///
/// Multiplying by `±1` and adding a zero term are free.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostReport {
    pub bilinear_mults: u64,
    pub scalar_mults: u64,
    pub additions: u64,
    pub divisions: u64,
    pub context: String,
}

impl CostReport {
    pub fn new(context: impl Into<String>) -> Self {
        CostReport {
            context: context.into(),
            ..Default::default()
        }
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }

    /// Counts only, so reports from different runs can be compared.
    pub fn counts(&self) -> (u64, u64, u64, u64) {
        (self.bilinear_mults, self.scalar_mults, self.additions, self.divisions)
    }

    pub fn total_operations(&self) -> u64 {
        self.bilinear_mults + self.scalar_mults + self.additions + self.divisions
    }
}

impl AddAssign<&CostReport> for CostReport {
    fn add_assign(&mut self, rhs: &CostReport) {
        self.bilinear_mults += rhs.bilinear_mults;
        self.scalar_mults += rhs.scalar_mults;
        self.additions += rhs.additions;
        self.divisions += rhs.divisions;
    }
}

impl Add for CostReport {
    type Output = CostReport;
    fn add(mut self, rhs: CostReport) -> CostReport {
        self += &rhs;
        self
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} bilinear mults, {} scalar mults, {} additions",
            self.bilinear_mults, self.scalar_mults, self.additions
        )?;
        if self.divisions > 0 {
            write!(f, ", {} divisions", self.divisions)?;
        }
        if !self.context.is_empty() {
            write!(f, " [{}]", self.context)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoeffKind {
    One,
    MinusOne,
    Other,
}

/// A linear combination `sum coeff * x[pos]` with coefficients mapped into the ring.
#[derive(Debug, Clone)]
pub(crate) struct LinearCombination<T> {
    pub terms: Vec<(usize, T, CoeffKind)>,
}

impl<T: Ring> LinearCombination<T> {
    fn new(terms: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(pos, c)| {
                let kind = if c.is_one() {
                    CoeffKind::One
                } else if (-c.clone()).is_one() {
                    CoeffKind::MinusOne
                } else {
                    CoeffKind::Other
                };
                let x = T::from_rational(&c).ok_or_else(|| Error::Coefficient(c.to_string()))?;
                Ok((pos, x, kind))
            })
            .collect::<Result<_>>()?;
        Ok(LinearCombination { terms })
    }

    fn from_coeffs(cm: &CoeffMatrix) -> Result<Self> {
        Self::new(cm.entries().iter().map(|(r, c, x)| (r * cm.cols() + c, x.clone())))
    }

    /// Additions and coefficient multiplications needed to form the combination once.
    pub fn cost(&self) -> (u64, u64) {
        let adds = self.terms.len().saturating_sub(1) as u64;
        let mults = self.terms.iter().filter(|t| t.2 == CoeffKind::Other).count() as u64;
        (adds, mults)
    }

    pub fn eval<'a, X>(&self, values: impl Fn(usize) -> &'a X) -> Option<X>
    where
        X: Combine<T> + 'a,
    {
        let mut acc: Option<X> = None;
        for (pos, coeff, kind) in &self.terms {
            let x = values(*pos);
            acc = Some(match acc {
                None => x.scaled(coeff, *kind),
                Some(mut a) => {
                    a.accumulate(x, coeff, *kind);
                    a
                }
            });
        }
        acc
    }
}

/// Values that can be scaled by a ring coefficient and summed: scalars or blocks.
pub(crate) trait Combine<T>: Sized {
    fn scaled(&self, coeff: &T, kind: CoeffKind) -> Self;
    fn accumulate(&mut self, x: &Self, coeff: &T, kind: CoeffKind);
}

impl<T: Ring> Combine<T> for T {
    fn scaled(&self, coeff: &T, kind: CoeffKind) -> Self {
        match kind {
            CoeffKind::One => self.clone(),
            CoeffKind::MinusOne => -self.clone(),
            CoeffKind::Other => coeff.clone() * self.clone(),
        }
    }

    fn accumulate(&mut self, x: &Self, coeff: &T, kind: CoeffKind) {
        *self = match kind {
            CoeffKind::One => self.clone() + x.clone(),
            CoeffKind::MinusOne => self.clone() - x.clone(),
            CoeffKind::Other => self.clone() + coeff.clone() * x.clone(),
        };
    }
}

impl<T: Ring> Combine<T> for Matrix<T> {
    fn scaled(&self, coeff: &T, kind: CoeffKind) -> Self {
        match kind {
            CoeffKind::One => self.clone(),
            CoeffKind::MinusOne => self.neg(),
            CoeffKind::Other => self.scale(coeff),
        }
    }

    fn accumulate(&mut self, x: &Self, coeff: &T, kind: CoeffKind) {
        match kind {
            CoeffKind::One => self.add_assign_ref(x),
            CoeffKind::MinusOne => self.sub_assign_ref(x),
            CoeffKind::Other => self.add_assign_ref(&x.scale(coeff)),
        }
    }
}

/// An algorithm with its coefficients mapped into the ring `T`, laid out for execution:
/// the `R` left and right linear forms, and for every output position the combination of
/// products that forms it.
#[derive(Debug, Clone)]
pub(crate) struct Lowered<T> {
    pub left: Vec<LinearCombination<T>>,
    pub right: Vec<LinearCombination<T>>,
    /// Indexed by `l * n + q`; positions in the combination are product indices.
    pub outputs: Vec<LinearCombination<T>>,
}

impl<T: Ring> Lowered<T> {
    pub fn new(alg: &BilinearAlgorithm) -> Result<Self> {
        let dims = alg.dims();
        let left = alg
            .products()
            .iter()
            .map(|p| LinearCombination::from_coeffs(&p.u))
            .collect::<Result<_>>()?;
        let right = alg
            .products()
            .iter()
            .map(|p| LinearCombination::from_coeffs(&p.v))
            .collect::<Result<_>>()?;
        let mut per_output: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dims.m() * dims.n()];
        for (s, p) in alg.products().iter().enumerate() {
            for (l, q, x) in p.w.entries() {
                per_output[l * dims.n() + q].push((s, x.clone()));
            }
        }
        let outputs = per_output
            .into_iter()
            .map(LinearCombination::new)
            .collect::<Result<_>>()?;
        Ok(Lowered { left, right, outputs })
    }

    /// Additions and coefficient multiplications of one application, where every operand
    /// is a single element.
    pub fn linear_cost(&self) -> (u64, u64) {
        self.left
            .iter()
            .chain(&self.right)
            .chain(&self.outputs)
            .map(LinearCombination::cost)
            .fold((0, 0), |(a, m), (da, dm)| (a + da, m + dm))
    }
}

/// Runs the algorithm once on `A` (`m x k`) and `B` (`k x n`): forms the `R` products
/// `P_s = u_s(A) v_s(B)` and returns `C` with `c[l][q] = sum_s w[s][l][q] P_s`.
///
/// The result equals `A B` exactly when the algorithm is valid.
pub fn apply_elementary<T: Ring>(
    alg: &BilinearAlgorithm,
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<(Matrix<T>, CostReport)> {
    let dims = alg.dims();
    if (a.rows(), a.cols()) != (dims.m(), dims.k()) || (b.rows(), b.cols()) != (dims.k(), dims.n()) {
        return Err(Error::Dimension(format!(
            "algorithm for {} applied to {}x{} and {}x{}",
            dims,
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let lowered = Lowered::<T>::new(alg)?;
    let products: Vec<T> = lowered
        .left
        .iter()
        .zip(&lowered.right)
        .map(|(lf, rf)| {
            let x = lf.eval(|pos| &a.as_slice()[pos]).unwrap_or_else(T::zero);
            let y = rf.eval(|pos| &b.as_slice()[pos]).unwrap_or_else(T::zero);
            x * y
        })
        .collect();
    let data = lowered
        .outputs
        .iter()
        .map(|of| of.eval(|s| &products[s]).unwrap_or_else(T::zero))
        .collect();
    let c = Matrix::new(dims.m(), dims.n(), data)?;

    let (additions, scalar_mults) = lowered.linear_cost();
    let report = CostReport {
        bilinear_mults: alg.rank() as u64,
        scalar_mults,
        additions,
        divisions: 0,
        context: format!("elementary {} rank {}", dims, alg.rank()),
    };
    Ok((c, report))
}
