//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per criterion and
//! exits nonzero if any failed.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use mmalg::{
    apply_equivalence, classical, cost_model, dual, exponent, generic_lower_bound, known_bounds,
    mat_classical_multiply, multiply_via_inversion, pan_aggregation, random_equivalence, rational, recursive_invert,
    recursive_multiply, sanity_rank_lower_bound, strassen_222, verify_brent, verify_trilinear_random,
    BilinearAlgorithm, DimensionTriple, DualityPermutation, EquivalenceTransform, Gf61, Matrix, Rational,
    RecursionConfig, Tensor, MERSENNE_61,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dims(m: usize, k: usize, n: usize) -> DimensionTriple {
    DimensionTriple::new(m, k, n).unwrap()
}

fn gf_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<Gf61> {
    Matrix::from_fn(rows, cols, |_, _| Gf61::random(rng))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rational(rng.gen_range(-5..=5), rng.gen_range(1..=3)).unwrap()
}

fn rational_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| small_rational(rng))
}

/// `L U` with unit lower `L` and upper `U` with nonzero diagonal, so every leading
/// principal minor is nonzero.
fn lu_matrix(n: usize, rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    let lower = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Greater => rational(rng.gen_range(-2..=2), 1).unwrap(),
        std::cmp::Ordering::Equal => Rational::one(),
        std::cmp::Ordering::Less => Rational::zero(),
    });
    let upper = Matrix::from_fn(n, n, |r, c| match r.cmp(&c) {
        std::cmp::Ordering::Less => rational(rng.gen_range(-2..=2), 1).unwrap(),
        std::cmp::Ordering::Equal => rational(*[-2, -1, 1, 2, 3].get(rng.gen_range(0..5)).unwrap(), 1).unwrap(),
        std::cmp::Ordering::Greater => Rational::zero(),
    });
    mat_classical_multiply(&lower, &upper).unwrap()
}

fn aggregation_validity() -> Outcome {
    for n in (2..=12).step_by(2) {
        let alg = pan_aggregation(n).map_err(|e| e.to_string())?;
        let expected = n * n * n / 2 + 3 * n * n;
        ensure(alg.rank() == expected, || {
            format!("n = {n}: rank {} != {expected}", alg.rank())
        })?;
        let report = verify_brent(&alg);
        ensure(report.valid, || {
            format!("n = {n}: {} Brent violations", report.violations.len())
        })?;
    }
    Ok("n = 2..12 valid, rank n^3/2 + 3n^2".into())
}

fn exponent_reproduction() -> Outcome {
    let pan34 = pan_aggregation(34).map_err(|e| e.to_string())?;
    ensure(pan34.rank() == 23120, || format!("rank {}", pan34.rank()))?;
    let e34 = exponent(&pan34).map_err(|e| e.to_string())?;
    ensure((e34 - 2.8495).abs() <= 5e-4, || format!("exponent(pan 34) = {e34}"))?;
    let es = exponent(&strassen_222()).map_err(|e| e.to_string())?;
    ensure((es - 7f64.log2()).abs() <= 1e-12, || {
        format!("exponent(strassen) = {es}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for n in [14, 20, 34] {
        let alg = pan_aggregation(n).map_err(|e| e.to_string())?;
        let ok = verify_trilinear_random(&alg, 20, MERSENNE_61, &mut rng).map_err(|e| e.to_string())?;
        ensure(ok, || format!("random trilinear check failed at n = {n}"))?;
    }
    Ok(format!(
        "pan(34) exponent {e34:.6}, strassen {es:.15}, random checks at n = 14, 20, 34"
    ))
}

fn corrupt(alg: &BilinearAlgorithm, rng: &mut ChaCha8Rng) -> BilinearAlgorithm {
    let d = alg.dims();
    let s = rng.gen_range(0..alg.rank());
    let (tensor, current, rows, cols) = match rng.gen_range(0..3) {
        0 => (Tensor::U, alg.u(s), d.m(), d.k()),
        1 => (Tensor::V, alg.v(s), d.k(), d.n()),
        _ => (Tensor::W, alg.w(s), d.m(), d.n()),
    };
    let (r, c) = (rng.gen_range(0..rows), rng.gen_range(0..cols));
    // denominators of small_rational never reach 7, so the shift is never zero
    let value = current.get(r, c) + small_rational(rng) + rational(1, 7).unwrap();
    alg.with_coefficient(s, tensor, r, c, value).unwrap()
}

fn verifier_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shipped = vec![
        strassen_222(),
        classical(dims(2, 2, 2)),
        classical(dims(2, 3, 4)),
        pan_aggregation(2).unwrap(),
        pan_aggregation(4).unwrap(),
        pan_aggregation(6).unwrap(),
    ];
    let (mut cases, mut valid) = (0, 0);
    for alg in &shipped {
        for round in 0..40 {
            let candidate = if round < 5 { alg.clone() } else { corrupt(alg, &mut rng) };
            let exact = verify_brent(&candidate).valid;
            let random = verify_trilinear_random(&candidate, 20, MERSENNE_61, &mut rng).map_err(|e| e.to_string())?;
            ensure(exact == random, || {
                format!("disagreement on case {cases}: brent {exact}, random {random}")
            })?;
            cases += 1;
            valid += usize::from(exact);
        }
    }
    ensure(cases >= 200, || format!("only {cases} cases"))?;
    Ok(format!("{cases} cases ({valid} valid), zero disagreements"))
}

fn duality_suite() -> Outcome {
    for (alg, rank) in [(strassen_222(), 7), (classical(dims(2, 3, 4)), 24)] {
        for perm in DualityPermutation::ALL {
            let d = dual(&alg, perm).map_err(|e| e.to_string())?;
            ensure(verify_brent(&d).valid, || {
                format!("{perm} dual of {} invalid", alg.dims())
            })?;
            ensure(d.rank() == rank, || format!("{perm} dual rank {}", d.rank()))?;
            ensure(d.dims() == perm.apply_to_dims(alg.dims()), || {
                format!("{perm} dual dims {}", d.dims())
            })?;
        }
    }
    Ok("12 duals valid with ranks 7 and 24".into())
}

fn recursion_counts() -> Outcome {
    let start = Instant::now();
    let strassen = strassen_222();
    let cfg = RecursionConfig::new(strassen.clone(), 1).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 1..=6u32 {
        let side = 1usize << t;
        let a = gf_matrix(side, side, &mut rng);
        let b = gf_matrix(side, side, &mut rng);
        let (c, cost) = recursive_multiply(&cfg, &a, &b).map_err(|e| e.to_string())?;
        ensure(cost.bilinear_mults == 7u64.pow(t), || {
            format!("K = {side}: {} mults", cost.bilinear_mults)
        })?;
        let model = cost_model(&strassen, side).map_err(|e| e.to_string())?;
        ensure(cost.additions == model.additions, || {
            format!("K = {side}: {} additions, model {}", cost.additions, model.additions)
        })?;
        ensure(c == mat_classical_multiply(&a, &b).unwrap(), || {
            format!("K = {side}: wrong product")
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.1} s"))?;
    Ok(format!("K = 2..64: 7^t mults, additions match the model ({secs:.2} s)"))
}

fn inversion_reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = RecursionConfig::new(strassen_222(), 2).map_err(|e| e.to_string())?;
    for case in 0..50 {
        let side = case % 32 + 1;
        let a = lu_matrix(side, &mut rng);
        let (x, _) = recursive_invert(&cfg, &a).map_err(|e| format!("side {side}: {e}"))?;
        ensure(mat_classical_multiply(&a, &x).unwrap().is_identity(), || {
            format!("side {side}: A X != I")
        })?;
    }
    for case in 0..50 {
        let (m, k, n) = (case % 8 + 1, (case * 3) % 8 + 1, (case * 5) % 8 + 1);
        let a = rational_matrix(m, k, &mut rng);
        let b = rational_matrix(k, n, &mut rng);
        let c =
            multiply_via_inversion(&a, &b, |t| recursive_invert(&cfg, t).map(|(x, _)| x)).map_err(|e| e.to_string())?;
        ensure(c == mat_classical_multiply(&a, &b).unwrap(), || {
            format!("case {case}: wrong product")
        })?;
    }
    Ok("50 inversions up to 32x32, 50 products via inversion up to 8x8".into())
}

fn equivalence_action() -> Outcome {
    let strassen = strassen_222();
    for seed in 0..100 {
        let t = random_equivalence(strassen.dims(), 7, seed);
        let image = apply_equivalence(&strassen, &t).map_err(|e| e.to_string())?;
        ensure(image.rank() == 7 && verify_brent(&image).valid, || {
            format!("seed {seed} invalid")
        })?;
    }
    let id = EquivalenceTransform::identity(strassen.dims(), 7);
    ensure(apply_equivalence(&strassen, &id).unwrap() == strassen, || {
        "identity moved strassen".into()
    })?;
    Ok("100 seeds valid rank 7, identity fixed".into())
}

fn bounds_sanity() -> Outcome {
    let mut algs = vec![strassen_222(), classical(dims(2, 3, 4)), classical(dims(3, 1, 5))];
    algs.extend((2..=12).step_by(2).map(|n| pan_aggregation(n).unwrap()));
    for perm in DualityPermutation::ALL {
        algs.push(dual(&classical(dims(2, 3, 4)), perm).unwrap());
    }
    for alg in &algs {
        let d = alg.dims();
        ensure(alg.rank() >= (d.m() + d.n() - 1) * d.k(), || {
            format!("{d}: rank {}", alg.rank())
        })?;
        ensure(sanity_rank_lower_bound(alg), || format!("{d}: sanity check"))?;
        ensure(generic_lower_bound(d) == ((d.m() + d.n() - 1) * d.k()) as u128, || {
            format!("{d}: bound")
        })?;
    }
    let table = known_bounds();
    let expected = [
        ((2, 2, 2), "[7,7]"),
        ((2, 3, 3), "[15,16]"),
        ((2, 3, 4), "[19,-]"),
        ((3, 3, 3), "[18,-]"),
        ((2, 4, 4), "[-,27]"),
    ];
    for ((m, k, n), shown) in expected {
        let entry = table
            .exact_entry(dims(m, k, n))
            .ok_or_else(|| format!("no entry for {m}x{k}x{n}"))?;
        let show = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        let got = format!("[{},{}]", show(entry.lower), show(entry.upper));
        ensure(got == shown, || format!("{m}x{k}x{n}: {got} != {shown}"))?;
    }
    let r233 = table.lookup(dims(2, 3, 3));
    ensure(r233.lower == Some(15) && r233.upper == Some(16), || {
        format!("r(2,3,3) {r233}")
    })?;
    for n in 3..=8u64 {
        let row = table.lookup(dims(2, 2, n as usize));
        ensure(row.lower == Some(3 * n + 2), || {
            format!("r(2,2,{n}) lower {:?}", row.lower)
        })?;
    }
    Ok(format!(
        "{} algorithms respect (m+n-1)k, table entries exact",
        algs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("aggregation validity", aggregation_validity),
        ("exponent reproduction", exponent_reproduction),
        ("verifier equivalence", verifier_equivalence),
        ("duality suite", duality_suite),
        ("recursion counts", recursion_counts),
        ("inversion reductions", inversion_reductions),
        ("equivalence action", equivalence_action),
        ("bounds sanity", bounds_sanity),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
