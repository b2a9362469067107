//! Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p autfp-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use autfp_core::corpus::{
    random_affine, random_affine_word, random_non_affine_word, random_point, random_word, rng,
};
use autfp_core::linalg::{c64, euclidean_norm, frobenius_norm, real_matrix, real_vector};
use autfp_core::verify::distinct_corpus;
use autfp_core::wirtinger::DEFAULT_FD_STEP;
use autfp_core::{
    affineness, compare, fingerprint, kernel_residual, levi_log_norm, parse_automorphism, serialize,
    wirtinger_levi_fd, AutomorphismWord, CMatrix, CVector, ComplexPolynomial, Generator, HermitianMatrix, Outcome,
    SamplingConfig, Thresholds,
};

const DIMS: [usize; 2] = [2, 3];
const MAX_LEN: usize = 6;
const MAX_DEGREE: u32 = 4;

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check {
        ok,
        detail: detail.into(),
    }
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn fd_levi(word: &AutomorphismWord, z: &CVector) -> HermitianMatrix {
    let g = |p: &CVector| euclidean_norm(&word.evaluate(p).unwrap()).ln();
    wirtinger_levi_fd(g, z, DEFAULT_FD_STEP).unwrap()
}

fn oracle_agreement() -> Check {
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for &n in &DIMS {
        let mut r = rng(101 + n as u64);
        for _ in 0..100 {
            let w = random_word(&mut r, n, MAX_LEN, MAX_DEGREE).theta_normalize();
            let z = random_point(&mut r, n, 0.5, 2.0);
            let closed = levi_log_norm(&w, &z).unwrap();
            let err = max_entry(&(closed.as_matrix() - fd_levi(&w, &z).as_matrix()));
            worst = worst.max(err / (1e-4 * closed.frobenius_norm()).max(1e-5));
            pairs += 1;
        }
    }
    check(worst <= 1.0, format!("{pairs} pairs, worst error / allowed = {worst:.3e}"))
}

/// Words and points shared by criteria 2 and 3: 50 words x 20 points per dimension.
fn psh_samples(n: usize) -> Vec<(AutomorphismWord, CVector)> {
    let mut r = rng(202 + n as u64);
    let mut out = Vec::new();
    for _ in 0..50 {
        let w = random_word(&mut r, n, MAX_LEN, MAX_DEGREE).theta_normalize();
        for _ in 0..20 {
            out.push((w.clone(), random_point(&mut r, n, 0.5, 2.0)));
        }
    }
    out
}

fn plurisubharmonicity() -> Check {
    let mut min = f64::INFINITY;
    let mut count = 0;
    for &n in &DIMS {
        for (w, z) in psh_samples(n) {
            min = min.min(levi_log_norm(&w, &z).unwrap().min_eigenvalue());
            count += 1;
        }
    }
    check(min >= -1e-9, format!("{count} samples, min eigenvalue = {min:.3e}"))
}

fn kernel_rank() -> Check {
    let mut worst = 0.0f64;
    let mut max_rank_n2 = 0;
    for &n in &DIMS {
        for (w, z) in psh_samples(n) {
            worst = worst.max(kernel_residual(&w, &z).unwrap());
            if n == 2 {
                max_rank_n2 = max_rank_n2.max(levi_log_norm(&w, &z).unwrap().numerical_rank(1e-8, 1e-12));
            }
        }
    }
    check(
        worst < 1e-8 && max_rank_n2 <= 1,
        format!("max kernel residual = {worst:.3e}, max rank (n=2) = {max_rank_n2}"),
    )
}

fn dimension_one() -> Check {
    let cfg = SamplingConfig::default();
    let th = Thresholds::default();
    let mut r = rng(404);
    let corpus: Vec<_> = (0..20).map(|_| random_affine_word(&mut r, 1, 3)).collect();
    let prints: Vec<_> = corpus.iter().map(|w| fingerprint(w, &cfg).unwrap()).collect();
    let largest = prints
        .iter()
        .flat_map(|f| f.samples().iter().map(|s| s.levi().get(0, 0).norm()))
        .fold(0.0, f64::max);
    let mut mismatches = 0;
    for i in 0..prints.len() {
        for j in i..prints.len() {
            let v = compare(&prints[i], &prints[j], &th).unwrap();
            let jets_differ = v.value_distance > th.distinct || v.derivative_distance > th.distinct;
            let expected = if i == j || !jets_differ { Outcome::Equal } else { Outcome::Distinct };
            if v.outcome != expected {
                mismatches += 1;
            }
        }
    }
    check(
        largest < 1e-9 && mismatches == 0,
        format!("max |L| = {largest:.3e}, verdicts disagreeing with jets = {mismatches}"),
    )
}

fn injectivity() -> Check {
    let cfg = SamplingConfig::default();
    let th = Thresholds::default();
    let (mut pairs, mut equal, mut inconclusive, mut no_witness, mut bad_jets) = (0, 0, 0, 0, 0);
    for &n in &DIMS {
        let corpus = distinct_corpus(&mut rng(505 + n as u64), n, 50);
        bad_jets += corpus.iter().filter(|w| !w.jet1().is_exactly_normalized()).count();
        let prints: Vec<_> = corpus.iter().map(|w| fingerprint(w, &cfg).unwrap()).collect();
        for i in 0..prints.len() {
            for j in (i + 1)..prints.len() {
                let v = compare(&prints[i], &prints[j], &th).unwrap();
                pairs += 1;
                match v.outcome {
                    Outcome::Equal => equal += 1,
                    Outcome::Inconclusive => inconclusive += 1,
                    Outcome::Distinct if v.witness.is_none() => no_witness += 1,
                    Outcome::Distinct => {}
                }
            }
        }
    }
    check(
        equal + inconclusive + no_witness + bad_jets == 0,
        format!(
            "{pairs} pairs, equal = {equal}, inconclusive = {inconclusive}, without witness = {no_witness}, jets off (0, I) = {bad_jets}"
        ),
    )
}

fn coset_invariance() -> Check {
    let cfg = SamplingConfig::default();
    let mut worst = 0.0f64;
    for &n in &DIMS {
        let mut r = rng(606 + n as u64);
        for _ in 0..20 {
            let w = random_word(&mut r, n, MAX_LEN - 1, MAX_DEGREE);
            let h = AutomorphismWord::from_generator(Generator::Affine(random_affine(&mut r, n)));
            let hw = h.compose(&w).unwrap();
            let (a, b) = (fingerprint(&w, &cfg).unwrap(), fingerprint(&hw, &cfg).unwrap());
            for (s, t) in a.samples().iter().zip(b.samples()) {
                worst = worst.max(s.levi().distance(t.levi()));
            }
        }
    }
    check(worst < 1e-8, format!("max Frobenius distance = {worst:.3e}"))
}

fn affine_criterion() -> Check {
    let cfg = SamplingConfig::default();
    let tol = Thresholds::default().eq;
    let (mut accepted, mut rejected, mut total) = (0, 0, 0);
    for &n in &DIMS {
        let mut r = rng(707 + n as u64);
        for _ in 0..20 {
            let rep = affineness(&random_affine_word(&mut r, n, 3), &cfg, tol).unwrap();
            accepted += rep.is_affine as usize;
        }
        for _ in 0..20 {
            let rep = affineness(&random_non_affine_word(&mut r, n, MAX_LEN, MAX_DEGREE), &cfg, tol).unwrap();
            rejected += (!rep.is_affine && rep.witness.is_some()) as usize;
        }
        total += 20;
    }
    check(
        accepted == total && rejected == total,
        format!("affine accepted {accepted}/{total}, non-affine rejected with witness {rejected}/{total}"),
    )
}

fn rel_gap(a: &CVector, b: &CVector, scale: f64) -> f64 {
    euclidean_norm(&(a - b)) / (1.0 + scale)
}

fn group_algebra() -> Check {
    let (mut inverse, mut assoc, mut roundtrip) = (0.0f64, 0.0f64, 0.0f64);
    for &n in &DIMS {
        let mut r = rng(808 + n as u64);
        for _ in 0..10 {
            let w = random_word(&mut r, n, MAX_LEN, MAX_DEGREE);
            let inv = w.inverse();
            let back = parse_automorphism(&serialize(&w), n).unwrap();
            for _ in 0..100 {
                let z = random_point(&mut r, n, 0.0, 2.0);
                let fz = w.evaluate(&z).unwrap();
                let zn = euclidean_norm(&z);
                inverse = inverse.max(rel_gap(&inv.evaluate(&fz).unwrap(), &z, zn));
                inverse = inverse.max(rel_gap(&w.evaluate(&inv.evaluate(&z).unwrap()).unwrap(), &z, zn));
                roundtrip = roundtrip.max(rel_gap(&back.evaluate(&z).unwrap(), &fz, zn));
            }
        }
        for _ in 0..10 {
            let [a, b, c] = [0, 1, 2].map(|_| random_word(&mut r, n, 2, MAX_DEGREE));
            let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
            let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
            for _ in 0..100 {
                let z = random_point(&mut r, n, 0.0, 1.0);
                let nested = a.evaluate(&b.evaluate(&c.evaluate(&z).unwrap()).unwrap()).unwrap();
                let scale = euclidean_norm(&nested);
                assoc = assoc.max(rel_gap(&ab_c.evaluate(&z).unwrap(), &a_bc.evaluate(&z).unwrap(), scale));
                assoc = assoc.max(rel_gap(&ab_c.evaluate(&z).unwrap(), &nested, scale));
            }
        }
    }
    check(
        inverse < 1e-9 && assoc < 1e-9 && roundtrip < 1e-12,
        format!("inverse = {inverse:.3e}, associativity = {assoc:.3e}, text round trip = {roundtrip:.3e}"),
    )
}

fn hand_computed() -> Check {
    let z = real_vector(&[1.0, 0.0]);
    let p = ComplexPolynomial::from_terms(2, [(vec![2, 0], c64(1.0, 0.0))]).unwrap();
    let shear = AutomorphismWord::from_generator(Generator::shear(1, p).unwrap());
    let identity = AutomorphismWord::identity(2);
    let cases = [
        (&shear, real_matrix(2, &[0.125, 0.125, 0.125, 0.125])),
        (&identity, real_matrix(2, &[0.0, 0.0, 0.0, 0.5])),
    ];
    let (mut closed_err, mut fd_err) = (0.0f64, 0.0f64);
    for (w, golden) in &cases {
        closed_err = closed_err.max(frobenius_norm(&(levi_log_norm(w, &z).unwrap().as_matrix() - golden)));
        fd_err = fd_err.max(max_entry(&(fd_levi(w, &z).as_matrix() - golden)));
    }
    check(
        closed_err < 1e-9 && fd_err < 1e-5,
        format!("closed form off by {closed_err:.3e}, finite differences off by {fd_err:.3e}"),
    )
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle agreement", oracle_agreement),
        ("plurisubharmonicity", plurisubharmonicity),
        ("rank/kernel rigidity", kernel_rank),
        ("n=1 collapse", dimension_one),
        ("desk-scale injectivity", injectivity),
        ("coset invariance", coset_invariance),
        ("affineness criterion", affine_criterion),
        ("group algebra", group_algebra),
        ("hand-computed values", hand_computed),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let c = run();
        failures += !c.ok as usize;
        println!(
            "{} {}. {name}: {} ({:.1}s)",
            if c.ok { "PASS" } else { "FAIL" },
            i + 1,
            c.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
