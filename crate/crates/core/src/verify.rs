//! Invariant suites run over seeded corpora (`autfp verify`).
//!
//! Each suite reports the number of checks, the worst observed metric
//! against its tolerance, and up to [`MAX_COUNTEREXAMPLES`] failing words in
//! canonical text form.

use rand::Rng;

use crate::algebra::{AutomorphismWord, Generator};
use crate::corpus::{
    max_evaluation_gap, random_affine, random_affine_word, random_non_affine_word, random_normalized_word,
    random_point, random_word, rng,
};
use crate::fingerprint::{affineness, compare, fingerprint, Outcome, SamplingConfig, Thresholds, Witness};
use crate::lang::{parse_automorphism, serialize};
use crate::linalg::{euclidean_norm, frobenius_norm, CMatrix, CVector};
use crate::wirtinger::{
    kernel_residual, levi_log_norm, wirtinger_levi_fd, DEFAULT_FD_STEP, DEFAULT_PSD_TOL,
};

pub const MAX_COUNTEREXAMPLES: usize = 5;
pub const MAX_WORD_LEN: usize = 6;
pub const MAX_DEGREE: u32 = 4;

const GROUP_TOL: f64 = 1e-9;
const JET_TOL: f64 = 1e-12;
const KERNEL_TOL: f64 = 1e-8;
const COSET_TOL: f64 = 1e-8;
const RETRACTION_TOL: f64 = 1e-10;
const ROUNDTRIP_TOL: f64 = 1e-12;
const COLLAPSE_TOL: f64 = 1e-9;
const RANK_REL_TOL: f64 = 1e-8;
const RANK_ABS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub dim: usize,
    pub seed: u64,
    pub sampling: SamplingConfig,
    pub thresholds: Thresholds,
    pub psd_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dim: 2,
            seed: 1,
            sampling: SamplingConfig::default(),
            thresholds: Thresholds::default(),
            psd_tol: DEFAULT_PSD_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub word: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// Worst value of the suite's metric; compared against `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub counterexamples: Vec<Counterexample>,
}

struct Tally {
    name: &'static str,
    cases: usize,
    worst: f64,
    tolerance: f64,
    failed: bool,
    counterexamples: Vec<Counterexample>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            cases: 0,
            worst: 0.0,
            tolerance,
            failed: false,
            counterexamples: Vec::new(),
        }
    }

    /// Records `value`, which must stay below the tolerance.
    fn below(&mut self, value: f64, word: &AutomorphismWord, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
        if !(value < self.tolerance) {
            self.fail(word, detail());
        }
    }

    /// Records a boolean check.
    fn holds(&mut self, ok: bool, word: &AutomorphismWord, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(word, detail());
        }
    }

    fn fail(&mut self, word: &AutomorphismWord, detail: String) {
        self.failed = true;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(Counterexample {
                word: serialize(word),
                detail,
            });
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            passed: !self.failed,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            counterexamples: self.counterexamples,
        }
    }
}

fn rel_gap(a: &CVector, b: &CVector, z: &CVector) -> f64 {
    euclidean_norm(&(a - b)) / (1.0 + euclidean_norm(z))
}

/// Inverse round trip, identity element and associativity under evaluation.
pub fn group_axioms(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x01);
    let mut t = Tally::new("group-axioms", GROUP_TOL);
    let id = AutomorphismWord::identity(n);
    for _ in 0..10 {
        let w = random_word(&mut r, n, 5, MAX_DEGREE);
        let inv = w.inverse();
        let w_inv = w.compose(&inv).expect("same dimension");
        let left_id = id.compose(&w).expect("same dimension");
        for _ in 0..100 {
            let z = random_point(&mut r, n, 0.0, 2.0);
            let fz = w.evaluate(&z).expect("dimension");
            let back = inv.evaluate(&fz).expect("dimension");
            t.below(rel_gap(&back, &z, &z), &w, || format!("W⁻¹(W(z)) ≠ z at {z:?}"));
            let there = w_inv.evaluate(&z).expect("dimension");
            t.below(rel_gap(&there, &z, &z), &w, || format!("W∘W⁻¹(z) ≠ z at {z:?}"));
            let lz = left_id.evaluate(&z).expect("dimension");
            t.below(rel_gap(&lz, &fz, &z), &w, || "id∘W ≠ W".into());
        }
    }
    for _ in 0..5 {
        let a = random_word(&mut r, n, 2, MAX_DEGREE);
        let b = random_word(&mut r, n, 2, MAX_DEGREE);
        let c = random_word(&mut r, n, 2, MAX_DEGREE);
        let ab_c = a.compose(&b).and_then(|ab| ab.compose(&c)).expect("same dimension");
        let a_bc = b.compose(&c).and_then(|bc| a.compose(&bc)).expect("same dimension");
        for _ in 0..100 {
            let z = random_point(&mut r, n, 0.0, 1.0);
            let nested = a
                .evaluate(&b.evaluate(&c.evaluate(&z).expect("dim")).expect("dim"))
                .expect("dim");
            let x = ab_c.evaluate(&z).expect("dim");
            let y = a_bc.evaluate(&z).expect("dim");
            let scale = 1.0 + euclidean_norm(&nested);
            t.below(euclidean_norm(&(&x - &y)) / scale, &ab_c, || "(A∘B)∘C ≠ A∘(B∘C)".into());
            t.below(euclidean_norm(&(&x - &nested)) / scale, &ab_c, || "compose disagrees with nested evaluation".into());
        }
    }
    t.finish()
}

/// `D(W1∘W2)(0) = DW1(W2(0)) · DW2(0)`.
pub fn chain_rule(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x02);
    let mut t = Tally::new("jet-chain-rule", 1e-10);
    for _ in 0..50 {
        let w1 = random_word(&mut r, n, 3, MAX_DEGREE);
        let w2 = random_word(&mut r, n, 3, MAX_DEGREE);
        let composed = w1.compose(&w2).expect("same dimension").jet1();
        let j2 = w2.jet1();
        let outer = w1.jacobian(&j2.value_at_zero).expect("dimension");
        let expected = outer * &j2.derivative_at_zero;
        let gap = frobenius_norm(&(&composed.derivative_at_zero - &expected)) / (1.0 + frobenius_norm(&expected));
        t.below(gap, &w1, || "chain rule at the origin fails".into());
    }
    t.finish()
}

/// Θ∘Θ = Θ, jet of Θ(W) is (0, I), and fingerprint samples of W and Θ(W) agree.
pub fn retraction(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x03);
    let mut t = Tally::new("retraction", RETRACTION_TOL);
    for _ in 0..20 {
        let w = random_word(&mut r, n, MAX_WORD_LEN, MAX_DEGREE);
        let once = w.theta_normalize();
        let twice = once.theta_normalize();
        for _ in 0..20 {
            let z = random_point(&mut r, n, 0.0, 2.0);
            let a = once.evaluate(&z).expect("dim");
            let b = twice.evaluate(&z).expect("dim");
            t.below(rel_gap(&a, &b, &z), &w, || "Θ(Θ(W)) ≠ Θ(W)".into());
        }
        let jet = once.jet1();
        let ident = CMatrix::identity(n, n);
        let jet_gap = euclidean_norm(&jet.value_at_zero).max(frobenius_norm(&(&jet.derivative_at_zero - ident)));
        t.holds(jet_gap < JET_TOL, &w, || format!("jet of Θ(W) off (0, I) by {jet_gap:e}"));
        let direct = fingerprint(&w, &cfg.sampling);
        let normalized = fingerprint(&once, &cfg.sampling);
        match (direct, normalized) {
            (Ok(f), Ok(g)) => {
                let d = f
                    .samples()
                    .iter()
                    .zip(g.samples())
                    .map(|(a, b)| max_entry(&(a.levi().as_matrix() - b.levi().as_matrix())))
                    .fold(0.0, f64::max);
                t.below(d, &w, || "fingerprint(W) and fingerprint(Θ(W)) disagree".into());
            }
            (Err(e), _) | (_, Err(e)) => t.holds(false, &w, || e.to_string()),
        }
    }
    t.finish()
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Closed-form Levi matrix against the finite-difference oracle.
///
/// The metric is the entrywise error divided by `max(1e-5, 1e-4 ||L||)`, so
/// the tolerance is 1.
pub fn levi_oracle(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x04);
    let mut t = Tally::new("levi-oracle", 1.0);
    for _ in 0..100 {
        let w = random_word(&mut r, n, MAX_WORD_LEN, MAX_DEGREE);
        let z = random_point(&mut r, n, 0.5, 2.0);
        let closed = match levi_log_norm(&w, &z) {
            Ok(l) => l,
            Err(e) => {
                t.holds(false, &w, || e.to_string());
                continue;
            }
        };
        let g = |p: &CVector| euclidean_norm(&w.evaluate(p).expect("dim")).ln();
        match wirtinger_levi_fd(g, &z, DEFAULT_FD_STEP) {
            Ok(fd) => {
                let err = max_entry(&(closed.as_matrix() - fd.as_matrix()));
                let allowed = (1e-4 * closed.frobenius_norm()).max(1e-5);
                t.below(err / allowed, &w, || format!("entrywise error {err:e} at {z:?}"));
            }
            Err(e) => t.holds(false, &w, || e.to_string()),
        }
    }
    t.finish()
}

/// Minimum eigenvalue of `L(log ||F||)` at 1000 samples across 50 words.
pub fn plurisubharmonicity(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x05);
    let mut t = Tally::new("plurisubharmonicity", cfg.psd_tol);
    for _ in 0..50 {
        let w = random_word(&mut r, n, MAX_WORD_LEN, MAX_DEGREE);
        for _ in 0..20 {
            let z = random_point(&mut r, n, 0.5, 2.0);
            match levi_log_norm(&w, &z) {
                Ok(l) => {
                    let min = l.min_eigenvalue();
                    t.below(-min, &w, || format!("min eigenvalue {min:e} at {z:?}"));
                }
                Err(e) => t.holds(false, &w, || e.to_string()),
            }
        }
    }
    t.finish()
}

/// `J⁻¹ F` spans a kernel direction of the Levi matrix, so its rank is at
/// most `n − 1`.
pub fn kernel_rank(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x05);
    let mut t = Tally::new("kernel-rank", KERNEL_TOL);
    for _ in 0..50 {
        let w = random_word(&mut r, n, MAX_WORD_LEN, MAX_DEGREE);
        for _ in 0..20 {
            let z = random_point(&mut r, n, 0.5, 2.0);
            match (kernel_residual(&w, &z), levi_log_norm(&w, &z)) {
                (Ok(res), Ok(l)) => {
                    t.below(res, &w, || format!("kernel residual {res:e} at {z:?}"));
                    let rank = l.numerical_rank(RANK_REL_TOL, RANK_ABS_FLOOR);
                    t.holds(rank < n, &w, || format!("numerical rank {rank} at {z:?}"));
                }
                (Err(e), _) | (_, Err(e)) => t.holds(false, &w, || e.to_string()),
            }
        }
    }
    t.finish()
}

/// In dimension one every normalized Levi value vanishes and fingerprints
/// reduce to jets: each word equals the affine map with its jet, and distinct
/// affine maps are separated by jets alone. Always runs with `n = 1`.
pub fn dimension_one(cfg: &VerifyConfig) -> SuiteReport {
    let mut r = rng(cfg.seed ^ 0x06);
    let mut t = Tally::new("dimension-one-collapse", COLLAPSE_TOL);
    let mut corpus = Vec::new();
    while corpus.len() < 20 {
        let w = if r.random_bool(0.5) {
            random_affine_word(&mut r, 1, 3)
        } else {
            random_word(&mut r, 1, 4, MAX_DEGREE)
        };
        corpus.push(w);
    }
    let mut prints = Vec::new();
    for w in &corpus {
        let fp = match fingerprint(w, &cfg.sampling) {
            Ok(f) => f,
            Err(e) => {
                t.holds(false, w, || e.to_string());
                continue;
            }
        };
        for s in fp.samples() {
            let v = s.levi().get(0, 0).norm();
            t.below(v, w, || format!("Levi value {v:e} at {:?}", s.point()));
        }
        let affine = AutomorphismWord::from_generator(Generator::Affine(fp.jet().to_affine()));
        let jet_twin = fingerprint(&affine, &cfg.sampling).expect("affine fingerprint");
        let verdict = compare(&fp, &jet_twin, &cfg.thresholds).expect("same sampling");
        t.holds(verdict.outcome == Outcome::Equal, w, || {
            format!("word and its 1-jet compared {}", verdict.outcome.as_str())
        });
        prints.push((w, fp));
    }
    for i in 0..prints.len() {
        for j in (i + 1)..prints.len() {
            let v = compare(&prints[i].1, &prints[j].1, &cfg.thresholds).expect("same sampling");
            let expect_distinct = v.value_distance > cfg.thresholds.distinct || v.derivative_distance > cfg.thresholds.distinct;
            t.holds(
                expect_distinct == (v.outcome == Outcome::Distinct)
                    && (v.outcome != Outcome::Distinct || matches!(v.witness, Some(Witness::Jet { .. }))),
                prints[i].0,
                || format!("pair ({i}, {j}) compared {}", v.outcome.as_str()),
            );
        }
    }
    t.finish()
}

/// Builds `count` words pairwise separated by more than `1e-3` at some probe
/// point. In dimension one the words are affine (the only automorphisms);
/// otherwise they are normalized shear words with jet `(0, I)`.
pub fn distinct_corpus<R: Rng>(r: &mut R, n: usize, count: usize) -> Vec<AutomorphismWord> {
    let probes: Vec<CVector> = (0..8).map(|_| random_point(r, n, 0.5, 1.5)).collect();
    let mut corpus: Vec<AutomorphismWord> = Vec::new();
    while corpus.len() < count {
        let w = if n == 1 {
            random_affine_word(r, 1, 2)
        } else {
            random_normalized_word(r, n, 3, MAX_DEGREE)
        };
        if corpus.iter().all(|c| max_evaluation_gap(c, &w, &probes) > 1e-3) {
            corpus.push(w);
        }
    }
    corpus
}

/// Pairwise comparison of a corpus of distinct words: every verdict must be
/// `distinct` with a witness.
pub fn injectivity(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x07);
    let mut t = Tally::new("injectivity", 1.0);
    let corpus = distinct_corpus(&mut r, n, 50);
    let prints: Vec<_> = corpus
        .iter()
        .map(|w| fingerprint(w, &cfg.sampling))
        .collect();
    for i in 0..corpus.len() {
        for j in (i + 1)..corpus.len() {
            match (&prints[i], &prints[j]) {
                (Ok(a), Ok(b)) => {
                    let v = compare(a, b, &cfg.thresholds).expect("same sampling");
                    t.holds(v.outcome == Outcome::Distinct && v.witness.is_some(), &corpus[i], || {
                        format!("pair with {} compared {}", serialize(&corpus[j]), v.outcome.as_str())
                    });
                }
                (Err(e), _) | (_, Err(e)) => t.holds(false, &corpus[i], || e.to_string()),
            }
        }
    }
    t.finish()
}

/// Normalized Levi samples of `H∘W` and `W` coincide for affine `H`.
pub fn coset_invariance(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x08);
    let mut t = Tally::new("coset-invariance", COSET_TOL);
    for _ in 0..20 {
        let w = random_word(&mut r, n, MAX_WORD_LEN - 1, MAX_DEGREE);
        let h = AutomorphismWord::from_generator(Generator::Affine(random_affine(&mut r, n)));
        let hw = h.compose(&w).expect("same dimension");
        match (fingerprint(&w, &cfg.sampling), fingerprint(&hw, &cfg.sampling)) {
            (Ok(a), Ok(b)) => {
                let d = a.max_levi_distance(&b).expect("same sampling");
                t.below(d, &hw, || format!("max Levi distance {d:e}"));
            }
            (Err(e), _) | (_, Err(e)) => t.holds(false, &hw, || e.to_string()),
        }
    }
    t.finish()
}

/// `is_affine` accepts affine words and rejects non-affine ones with a
/// witness. In dimension one every word must be accepted.
pub fn affine_criterion(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x09);
    let mut t = Tally::new("affine-criterion", 1.0);
    let tol = cfg.thresholds.eq;
    for k in 0..40 {
        let (w, expect_affine) = if k < 20 {
            (random_affine_word(&mut r, n, 3), true)
        } else if n == 1 {
            (random_word(&mut r, 1, 4, MAX_DEGREE), true)
        } else {
            (random_non_affine_word(&mut r, n, MAX_WORD_LEN, MAX_DEGREE), false)
        };
        match affineness(&w, &cfg.sampling, tol) {
            Ok(rep) => t.holds(rep.is_affine == expect_affine && (rep.is_affine || rep.witness.is_some()), &w, || {
                format!("is_affine = {} (max deviation {:e})", rep.is_affine, rep.max_distance)
            }),
            Err(e) => t.holds(false, &w, || e.to_string()),
        }
    }
    t.finish()
}

/// `parse(serialize(W))` evaluates like `W`.
pub fn text_roundtrip(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.dim;
    let mut r = rng(cfg.seed ^ 0x0a);
    let mut t = Tally::new("text-roundtrip", ROUNDTRIP_TOL);
    for _ in 0..20 {
        let w = random_word(&mut r, n, 4, MAX_DEGREE);
        let text = serialize(&w);
        match parse_automorphism(&text, n) {
            Ok(back) => {
                for _ in 0..50 {
                    let z = random_point(&mut r, n, 0.0, 2.0);
                    let a = w.evaluate(&z).expect("dim");
                    let b = back.evaluate(&z).expect("dim");
                    t.below(rel_gap(&a, &b, &z), &w, || "round trip changes evaluation".into());
                }
            }
            Err(e) => t.holds(false, &w, || e.to_string()),
        }
    }
    t.finish()
}

/// Every suite, in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    vec![
        group_axioms(cfg),
        chain_rule(cfg),
        retraction(cfg),
        levi_oracle(cfg),
        plurisubharmonicity(cfg),
        kernel_rank(cfg),
        dimension_one(cfg),
        injectivity(cfg),
        coset_invariance(cfg),
        affine_criterion(cfg),
        text_roundtrip(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_in_dimension_one() {
        let cfg = VerifyConfig {
            dim: 1,
            ..VerifyConfig::default()
        };
        for report in run_all(&cfg) {
            assert!(report.passed, "{report:?}");
            assert!(report.cases > 0, "{} ran no checks", report.name);
        }
    }

    #[test]
    fn tally_caps_counterexamples() {
        let w = AutomorphismWord::identity(2);
        let mut t = Tally::new("demo", 1.0);
        for _ in 0..10 {
            t.below(2.0, &w, || "too big".into());
        }
        t.below(f64::NAN, &w, || "nan".into());
        let report = t.finish();
        assert!(!report.passed);
        assert_eq!(report.cases, 11);
        assert_eq!(report.counterexamples.len(), MAX_COUNTEREXAMPLES);
        assert!(report.worst.is_nan() || report.worst == 2.0);
    }
}
