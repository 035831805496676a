//! Acceptance suite: nine end-to-end criteria, each with a time limit.
//! Prints one PASS/FAIL line per criterion and exits non-zero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use gic_core::catalog::{self, EG3_CODE};
use gic_core::subset::combinations;
use gic_core::{
    check_c1_c2, code_from_matroid_rep, code_to_representation, decoding_matrix, gic_from_matroid,
    gic_from_polymatroid, is_perfect, matroid_rep_from_code, mu, polymatroid_rep_from_code, representation_to_code,
    solve_perfect_scalar_binary, verify_code, DiscretePolymatroid, FieldMatrix, GicProblem, GicRepresentation,
    IntVector, Matroid, Modulus, Origin, SearchConfig, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn eg1() -> Result<(), String> {
    let (p, code) = catalog::eg1();
    let report = verify_code(&p, &code).map_err(err)?;
    ensure!(report.passed(), "receivers {:?} cannot decode", report.failing());
    ensure!(code.length() == 3, "expected 3 transmissions");
    let rep = code_to_representation(&p, &code).map_err(err)?;
    let conditions = check_c1_c2(&rep, &p).map_err(err)?;
    ensure!(conditions.all(), "C1/C2 fail: {conditions:?}");
    ensure!(representation_to_code(&rep, &p).map_err(err)? == code, "representation does not give back L");
    Ok(())
}

fn eg3() -> Result<(), String> {
    let d = catalog::eg3_polymatroid();
    let c = gic_from_polymatroid(&d).map_err(err)?;
    let v = |c: &[u32]| IntVector::new(c.to_vec());
    let mut basis = d.basis_vectors();
    basis.sort();
    let mut expected = vec![v(&[1, 1, 1]), v(&[1, 0, 2]), v(&[0, 1, 2])];
    expected.sort();
    ensure!(basis == expected, "basis vectors {basis:?}");
    ensure!(d.minimal_excluded_vectors() == vec![v(&[1, 1, 2])], "excluded vectors {:?}", d.minimal_excluded_vectors());
    ensure!(mu(&c.problem) == 4, "μ = {}", mu(&c.problem));
    let code = catalog::code_from_sums(&c, &EG3_CODE).map_err(err)?;
    ensure!(is_perfect(&c.problem, &code).map_err(err)?, "the listed code is not perfect");
    let rep = polymatroid_rep_from_code(&c.problem, &code, &d, 1).map_err(err)?;
    ensure!(DiscretePolymatroid::from_subspaces(&rep).map_err(err)? == d, "extracted representation differs");
    Ok(())
}

fn eg4() -> Result<(), String> {
    let d = catalog::eg4_polymatroid();
    let c = gic_from_polymatroid(&d).map_err(err)?;
    let out = solve_perfect_scalar_binary(&c.problem, &SearchConfig::default()).map_err(err)?;
    ensure!(out.verdict == Verdict::NoneExists, "solver verdict {:?}", out.verdict);
    ensure!(out.candidates_tested <= 1 << 15, "{} candidates tested", out.candidates_tested);
    let rep = d.find_representation(Modulus::GF2, 1 << 24).map_err(err)?.found();
    ensure!(rep.is_some(), "no binary representation found");
    ensure!(DiscretePolymatroid::from_subspaces(&rep.unwrap()).map_err(err)? == d, "representation differs");
    Ok(())
}

fn u23() -> Result<(), String> {
    let rep = FieldMatrix::parse_text(Modulus::GF2, "1 0 1; 0 1 1").map_err(err)?;
    let m = Matroid::from_matrix(&rep).map_err(err)?;
    let c = gic_from_matroid(&m).map_err(err)?;
    let code = code_from_matroid_rep(&rep, &c.problem).map_err(err)?;
    let listed = catalog::code_from_sums(&c, &["y1+x1", "y2+x2", "y3+x1+x2"]).map_err(err)?;
    ensure!(code == listed, "generated code differs from the listed one");

    let r1: [(&[usize], &str, &str); 6] = [
        (&[1, 2], "x1", "c1+y1"),
        (&[1, 2], "x2", "c2+y2"),
        (&[1, 3], "x1", "c1+y1"),
        (&[1, 3], "x2", "c3+c1+y3+y1"),
        (&[2, 3], "x1", "c3+c2+y3+y2"),
        (&[2, 3], "x2", "c2+y2"),
    ];
    for (basis, demand, expr) in r1 {
        let rx = receiver_index(&c, |o| matches!(o, Origin::R1 { basis: b, demand: d } if b == basis && d == demand));
        decoder_for(&c, &code, rx, expr)?;
    }
    for (demand, expr) in [("y1", "y2+y3+c1+c2+c3"), ("y2", "y1+y3+c1+c2+c3"), ("y3", "y1+y2+c1+c2+c3")] {
        let rx = receiver_index(&c, |o| matches!(o, Origin::R2 { demand: d, .. } if d == demand));
        decoder_for(&c, &code, rx, expr)?;
    }
    for (demand, expr) in [("y1", "x1+c1"), ("y2", "x2+c2"), ("y3", "x1+x2+c3")] {
        let rx = receiver_index(&c, |o| matches!(o, Origin::R3 { demand: d } if d == demand));
        decoder_for(&c, &code, rx, expr)?;
    }
    for (i, r) in c.problem.receivers().iter().enumerate() {
        let dm = decoding_matrix(&c.problem, &code, i, 0).map_err(err)?;
        let product = r.knowledge().hcat(code.matrix()).map_err(err)?.matmul(&dm).map_err(err)?;
        ensure!(&product == r.demand(), "receiver {i}: product identity fails");
    }
    Ok(())
}

fn u24() -> Result<(), String> {
    let m = Matroid::uniform(2, 4).map_err(err)?;
    ensure!(!m.find_binary_representation(1 << 24).map_err(err)?.is_found(), "U(2,4) reported binary");
    let c = gic_from_matroid(&m).map_err(err)?;
    let out = solve_perfect_scalar_binary(&c.problem, &SearchConfig::default()).map_err(err)?;
    ensure!(out.verdict == Verdict::NoneExists, "solver verdict {:?}", out.verdict);
    ensure!(out.normalized && out.candidates_tested <= 1 << 8, "{} candidates tested", out.candidates_tested);
    let ternary = m.find_representation(Modulus::GF3, 1 << 24).map_err(err)?.found();
    ensure!(ternary.is_some(), "no ternary representation found");
    ensure!(Matroid::from_matrix(&ternary.unwrap()).map_err(err)? == m, "ternary representation differs");
    let listed = Matroid::from_matrix(&catalog::u24_ternary_representation()).map_err(err)?;
    ensure!(listed == m, "listed ternary matrix is not U(2,4)");
    Ok(())
}

fn hamming() -> Result<(), String> {
    let g = catalog::hamming_generator();
    let m = Matroid::from_matrix(&g).map_err(err)?;
    ensure!(m.bases().len() == 28, "{} bases", m.bases().len());
    let listed: Vec<u32> =
        [[1, 2, 4, 7], [1, 2, 5, 6], [1, 3, 4, 6], [1, 3, 5, 7], [2, 3, 4, 5], [2, 3, 6, 7], [4, 5, 6, 7]]
            .iter()
            .map(|c| c.iter().fold(0, |s, e| s | 1 << (e - 1)))
            .collect();
    ensure!(m.circuits() == listed, "circuits {:?}", m.circuits());
    let c = gic_from_matroid(&m).map_err(err)?;
    ensure!(c.problem.receivers().len() == 147, "{} receivers", c.problem.receivers().len());
    ensure!(mu(&c.problem) == 7, "μ = {}", mu(&c.problem));
    let code = code_from_matroid_rep(&g, &c.problem).map_err(err)?;
    ensure!(code.length() == 7 && is_perfect(&c.problem, &code).map_err(err)?, "code is not perfect");
    let back = matroid_rep_from_code(&c.problem, &code).map_err(err)?;
    ensure!(Matroid::from_matrix(&back).map_err(err)? == m, "extracted representation differs");
    Ok(())
}

fn random_equivalence() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7431);
    let mut passing = 0;
    for trial in 0..1000 {
        let q = if rng.gen_bool(0.5) { Modulus::GF2 } else { Modulus::GF3 };
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=2));
        let receivers = rng.gen_range(1..=4);
        let p = random_problem(&mut rng, q, m, n, receivers);
        let code = random_code(&mut rng, &p, 4);
        let id = FieldMatrix::identity(q, m * n);
        let blocks = (0..m).map(|i| id.column_range(i * n..(i + 1) * n)).collect();
        let rep = GicRepresentation::new(blocks, code.matrix().clone()).map_err(err)?;
        let passes = verify_code(&p, &code).map_err(err)?.passed();
        let c2 = check_c1_c2(&rep, &p).map_err(err)?.c2_holds();
        ensure!(passes == c2, "trial {trial}: verify {passes}, C2 {c2}");
        if passes {
            passing += 1;
            let induced = code_to_representation(&p, &code).map_err(err)?;
            ensure!(representation_to_code(&induced, &p).map_err(err)? == code, "trial {trial}: round trip changes L");
        }
    }
    ensure!(passing > 100, "only {passing} passing codes sampled");
    Ok(())
}

fn random_matroid_round_trip() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7433);
    for trial in 0..200 {
        let k = rng.gen_range(1..=3);
        let m = rng.gen_range(k..=6);
        let a = random_full_rank_binary(&mut rng, k, m);
        let mat = Matroid::from_matrix(&a).map_err(err)?;
        let c = gic_from_matroid(&mat).map_err(err)?;
        let code = code_from_matroid_rep(&a, &c.problem).map_err(err)?;
        let back = matroid_rep_from_code(&c.problem, &code).map_err(err)?;
        ensure!(Matroid::from_matrix(&back).map_err(err)? == mat, "trial {trial}: rank tables differ");
    }
    Ok(())
}

fn mu_bound() -> Result<(), String> {
    let mut problems = 0;
    for m in 1..=3 {
        let pool = conventional_receivers(m);
        let indices: Vec<usize> = (0..pool.len()).collect();
        for size in 1..=3 {
            for pick in combinations(&indices, size) {
                let receivers = pick.iter().map(|&i| pool[i].clone()).collect();
                let p = GicProblem::new(Modulus::GF2, m, 1, receivers).map_err(err)?;
                let mu = mu(&p);
                for l in 0..mu {
                    ensure!(
                        !some_code_of_length(&p, l),
                        "m = {m}, receivers {pick:?}: a code of length {l} < μ = {mu}"
                    );
                }
                problems += 1;
            }
        }
    }
    ensure!(problems == 1 + 14 + 298, "{problems} problems enumerated");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 9] = [
        ("1 small coded-side-information problem and its representation", eg1, Duration::from_millis(10)),
        ("2 polymatroid pipeline with a perfect code", eg3, Duration::from_millis(100)),
        ("3 representable polymatroid without a perfect binary code", eg4, Duration::from_secs(5)),
        ("4 U(2,3) code and decoding procedures", u23, Duration::from_millis(10)),
        ("5 U(2,4) binary nonexistence and ternary representation", u24, Duration::from_secs(1)),
        ("6 Hamming matroid at full size", hamming, Duration::from_secs(1)),
        ("7 code/representation equivalence on 1000 random pairs", random_equivalence, Duration::from_secs(30)),
        ("8 matroid round trip on 200 random binary matrices", random_matroid_round_trip, Duration::from_secs(30)),
        ("9 μ lower bound on every micro problem", mu_bound, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result =
            result.and_then(
                |()| {
                    if elapsed <= limit {
                        Ok(())
                    } else {
                        Err(format!("took {elapsed:?}, limit {limit:?}"))
                    }
                },
            );
        match result {
            Ok(()) => println!("PASS criterion {name} ({elapsed:.2?})"),
            Err(e) => {
                failures += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {e}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
