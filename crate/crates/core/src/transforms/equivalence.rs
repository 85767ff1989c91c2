use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algorithm::{BilinearAlgorithm, CoeffMatrix, DimensionTriple, Product};
use crate::matrix::{mat_classical_multiply, Matrix};
use crate::scalar::{rational, rational_int, Rational};
use crate::{Error, Result};

/// An element of the group acting on triples `(U, V, W)`: three pairs of mutually inverse
/// matrices and a relabelling `t` of the products.
///
/// The action is
///
/// ```text
/// u'[s][i][j] = sum sigma[i][x] nabla[j][y] u[t(s)][x][y]     U' = sigma U nabla^T
/// v'[s][g][h] = sum lambda[x][g] mu[h][y] v[t(s)][x][y]       V' = lambda^T V mu^T
/// w'[s][l][q] = sum gamma[x][l] beta[y][q] w[t(s)][x][y]      W' = gamma^T W beta
/// ```
///
/// with `sigma gamma = I`, `nabla lambda = I` and `mu beta = I`. It maps an algorithm for
/// `A B` to one computing `sigma^T A nabla lambda B mu` before the output map undoes the
/// outer factors, so validity is preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceTransform {
    sigma: Matrix<Rational>,
    gamma: Matrix<Rational>,
    nabla: Matrix<Rational>,
    lambda: Matrix<Rational>,
    mu: Matrix<Rational>,
    beta: Matrix<Rational>,
    perm: Vec<usize>,
}

fn check_inverse_pair(a: &Matrix<Rational>, b: &Matrix<Rational>, names: &str) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::BadTransform(format!("{names} must be square of equal size")));
    }
    let prod = mat_classical_multiply(a, b).map_err(|e| Error::BadTransform(e.to_string()))?;
    if !prod.is_identity() {
        return Err(Error::BadTransform(format!("{names} are not inverses of one another")));
    }
    Ok(())
}

impl EquivalenceTransform {
    /// `perm[s]` is the zero-based source product for output slot `s`.
    pub fn new(
        sigma: Matrix<Rational>,
        gamma: Matrix<Rational>,
        nabla: Matrix<Rational>,
        lambda: Matrix<Rational>,
        mu: Matrix<Rational>,
        beta: Matrix<Rational>,
        perm: Vec<usize>,
    ) -> Result<Self> {
        check_inverse_pair(&sigma, &gamma, "sigma and gamma")?;
        check_inverse_pair(&nabla, &lambda, "nabla and lambda")?;
        check_inverse_pair(&mu, &beta, "mu and beta")?;
        let mut seen = vec![false; perm.len()];
        for &t in &perm {
            if t >= perm.len() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::BadTransform("product relabelling is not a bijection".into()));
            }
        }
        if perm.is_empty() {
            return Err(Error::BadTransform("empty product relabelling".into()));
        }
        Ok(EquivalenceTransform {
            sigma,
            gamma,
            nabla,
            lambda,
            mu,
            beta,
            perm,
        })
    }

    pub fn identity(dims: DimensionTriple, rank: usize) -> Self {
        let (m, k, n) = (dims.m(), dims.k(), dims.n());
        EquivalenceTransform {
            sigma: Matrix::identity(m),
            gamma: Matrix::identity(m),
            nabla: Matrix::identity(k),
            lambda: Matrix::identity(k),
            mu: Matrix::identity(n),
            beta: Matrix::identity(n),
            perm: (0..rank).collect(),
        }
    }

    /// A pure relabelling of the products.
    pub fn permutation(dims: DimensionTriple, perm: Vec<usize>) -> Result<Self> {
        let id = Self::identity(dims, perm.len());
        Self::new(id.sigma, id.gamma, id.nabla, id.lambda, id.mu, id.beta, perm)
    }

    pub fn dims(&self) -> DimensionTriple {
        DimensionTriple::new(self.sigma.rows(), self.nabla.rows(), self.mu.rows()).expect("positive")
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// The six matrices in the order sigma, gamma, nabla, lambda, mu, beta.
    pub fn matrices(&self) -> [(&'static str, &Matrix<Rational>); 6] {
        [
            ("sigma", &self.sigma),
            ("gamma", &self.gamma),
            ("nabla", &self.nabla),
            ("lambda", &self.lambda),
            ("mu", &self.mu),
            ("beta", &self.beta),
        ]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
}

fn sandwich(left: &Matrix<Rational>, x: &CoeffMatrix, right: &Matrix<Rational>) -> CoeffMatrix {
    let lx = mat_classical_multiply(left, &x.to_dense()).expect("shapes checked");
    CoeffMatrix::from_dense(&mat_classical_multiply(&lx, right).expect("shapes checked"))
}

pub fn apply_equivalence(alg: &BilinearAlgorithm, t: &EquivalenceTransform) -> Result<BilinearAlgorithm> {
    if t.dims() != alg.dims() || t.rank() != alg.rank() {
        return Err(Error::BadTransform(format!(
            "transform for {} rank {} applied to {} rank {}",
            t.dims(),
            t.rank(),
            alg.dims(),
            alg.rank()
        )));
    }
    let nabla_t = t.nabla.transpose();
    let lambda_t = t.lambda.transpose();
    let mu_t = t.mu.transpose();
    let gamma_t = t.gamma.transpose();
    let products = t
        .perm
        .iter()
        .map(|&src| {
            let p = &alg.products()[src];
            Product {
                u: sandwich(&t.sigma, &p.u, &nabla_t),
                v: sandwich(&lambda_t, &p.v, &mu_t),
                w: sandwich(&gamma_t, &p.w, &t.beta),
            }
        })
        .collect();
    BilinearAlgorithm::new(alg.dims(), products)
}

/// A random invertible matrix `L D U` with unit-triangular `L`, `U` carrying small integer
/// entries and a diagonal `D` of small nonzero rationals.
fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> Matrix<Rational> {
    const DIAG: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2), (3, 1), (1, 3)];
    let lower = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => rational_int(1),
        std::cmp::Ordering::Greater => rational_int(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Less => rational_int(0),
    });
    let diag = Matrix::from_fn(n, n, |r, c| {
        if r == c {
            let (p, q) = DIAG[rng.gen_range(0..DIAG.len())];
            rational(p, q).expect("nonzero denominator")
        } else {
            rational_int(0)
        }
    });
    let upper = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Equal => rational_int(1),
        std::cmp::Ordering::Less => rational_int(rng.gen_range(-2..=2)),
        std::cmp::Ordering::Greater => rational_int(0),
    });
    let ld = mat_classical_multiply(&lower, &diag).expect("square");
    mat_classical_multiply(&ld, &upper).expect("square")
}

/// A reproducible random group element for the given shape, seeded by `seed`.
pub fn random_equivalence(dims: DimensionTriple, rank: usize, seed: u64) -> EquivalenceTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pair = |n: usize| {
        let a = random_invertible(n, &mut rng);
        let b = a.gauss_jordan_inverse().expect("L D U is invertible");
        (a, b)
    };
    let (sigma, gamma) = pair(dims.m());
    let (nabla, lambda) = pair(dims.k());
    let (mu, beta) = pair(dims.n());
    let mut perm: Vec<usize> = (0..rank).collect();
    perm.shuffle(&mut rng);
    EquivalenceTransform::new(sigma, gamma, nabla, lambda, mu, beta, perm)
        .expect("random transform satisfies its invariants")
}
