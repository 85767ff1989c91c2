//! Deciding whether a triple `(U, V, W)` computes the matrix product.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::algorithm::{BilinearAlgorithm, CoeffMatrix};
use crate::modular::PrimeField;
use crate::scalar::Rational;
use crate::{Error, Result};

/// One failing Brent equation, identified by the output position `(l, q)`, the left
/// operand position `(i, j)` and the right operand position `(g, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub lq: (usize, usize),
    pub ij: (usize, usize),
    pub gh: (usize, usize),
    pub expected: Rational,
    pub actual: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(l,q)=({},{}) (i,j)=({},{}) (g,h)=({},{}): expected {}, got {}",
            self.lq.0, self.lq.1, self.ij.0, self.ij.1, self.gh.0, self.gh.1, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

// (l, q, i, j, g, h)
type Key = (usize, usize, usize, usize, usize, usize);

/// Checks the Brent equations
/// `sum_s u[s][i][j] v[s][g][h] w[s][l][q] = [i = l][j = g][h = q]` exactly.
///
/// Only products of nonzero coefficients are visited, so the cost is
/// `sum_s nnz(u_s) nnz(v_s) nnz(w_s)` rather than `(mkn)^2 R`.
pub fn verify_brent(alg: &BilinearAlgorithm) -> VerificationReport {
    let mut sums: BTreeMap<Key, Rational> = BTreeMap::new();
    for p in alg.products() {
        for (i, j, cu) in p.u.entries() {
            for (g, h, cv) in p.v.entries() {
                let uv = cu * cv;
                for (l, q, cw) in p.w.entries() {
                    *sums.entry((*l, *q, *i, *j, *g, *h)).or_insert_with(Rational::zero) += &uv * cw;
                }
            }
        }
    }

    let dims = alg.dims();
    let mut violations = Vec::new();
    for (&(l, q, i, j, g, h), actual) in &sums {
        let expected = if i == l && j == g && h == q {
            Rational::one()
        } else {
            Rational::zero()
        };
        if *actual != expected {
            violations.push(Violation {
                lq: (l, q),
                ij: (i, j),
                gh: (g, h),
                expected,
                actual: actual.clone(),
            });
        }
    }
    for l in 0..dims.m() {
        for g in 0..dims.k() {
            for q in 0..dims.n() {
                if !sums.contains_key(&(l, q, l, g, g, q)) {
                    violations.push(Violation {
                        lq: (l, q),
                        ij: (l, g),
                        gh: (g, q),
                        expected: Rational::one(),
                        actual: Rational::zero(),
                    });
                }
            }
        }
    }
    violations.sort_by_key(|v| (v.lq, v.ij, v.gh));
    VerificationReport {
        valid: violations.is_empty(),
        violations,
    }
}

fn linear_form(field: &PrimeField, cm: &CoeffMatrix, x: &[u64], cols: usize) -> Result<u64> {
    let mut acc = 0;
    for (r, c, coeff) in cm.entries() {
        acc = field.add(acc, field.mul(field.from_rational(coeff)?, x[r * cols + c]));
    }
    Ok(acc)
}

/// Randomized check of the trilinear identity
/// `sum_s u_s(A) v_s(B) w_s(D) = trace(A B D)` over GF(`p`), where
/// `w_s(D) = sum w[s][l][q] d[q][l]` for `D` of shape `n x m`.
///
/// Returns `false` at the first trial that disagrees. A valid algorithm always passes; an
/// invalid one passes a single trial with probability at most `3 / p`.
pub fn verify_trilinear_random<R: Rng + ?Sized>(
    alg: &BilinearAlgorithm,
    trials: usize,
    p: u64,
    rng: &mut R,
) -> Result<bool> {
    if trials == 0 {
        return Err(Error::BadArgument("at least one trial is required".into()));
    }
    let field = PrimeField::new(p)?;
    let dims = alg.dims();
    let (m, k, n) = (dims.m(), dims.k(), dims.n());
    let largest = [m, k, n, alg.rank()].into_iter().max().unwrap_or(1) as u64;
    if p <= largest {
        return Err(Error::BadField(format!(
            "prime {p} must exceed max(m, k, n, R) = {largest}"
        )));
    }

    for _ in 0..trials {
        let a: Vec<u64> = (0..m * k).map(|_| field.random(rng)).collect();
        let b: Vec<u64> = (0..k * n).map(|_| field.random(rng)).collect();
        let d: Vec<u64> = (0..n * m).map(|_| field.random(rng)).collect();

        // trace(ABD) = sum_{i,j,h} a[i][j] b[j][h] d[h][i]
        let mut expected = 0;
        for i in 0..m {
            for j in 0..k {
                for h in 0..n {
                    let t = field.mul(field.mul(a[i * k + j], b[j * n + h]), d[h * m + i]);
                    expected = field.add(expected, t);
                }
            }
        }

        let mut actual = 0;
        for prod in alg.products() {
            let ua = linear_form(&field, &prod.u, &a, k)?;
            if ua == 0 {
                continue;
            }
            let vb = linear_form(&field, &prod.v, &b, n)?;
            if vb == 0 {
                continue;
            }
            // w is indexed [l][q] and pairs with d[q][l]
            let mut wd = 0;
            for (l, q, coeff) in prod.w.entries() {
                wd = field.add(wd, field.mul(field.from_rational(coeff)?, d[q * m + l]));
            }
            actual = field.add(actual, field.mul(field.mul(ua, vb), wd));
        }

        if actual != expected {
            return Ok(false);
        }
    }
    Ok(true)
}
