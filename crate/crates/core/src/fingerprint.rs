//! Sampled fingerprints `(F(0), DF(0), L(log ||Θ(F)||))` and their comparison.
//!
//! `Θ(F) = DF(0)⁻¹ (F − F(0))` is the normalized representative of `F`
//! (see [`AutomorphismWord::theta_normalize`]). The Levi field is sampled on
//! spheres around the origin at seed-reproducible points. Sampling can refute
//! equality of two Levi fields but never certify it, so [`compare`] keeps a
//! dead band between its equality and distinctness thresholds and reports
//! `Inconclusive` inside it.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AutomorphismWord, Jet1};
use crate::linalg::{euclidean_norm, frobenius_norm, CVector, C64};
use crate::wirtinger::{levi_log_norm, levi_log_norm_identity, LeviSample, WirtingerError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FingerprintError {
    #[error(transparent)]
    Wirtinger(#[from] WirtingerError),
    #[error("invalid sampling configuration: {0}")]
    InvalidSampling(String),
    #[error("fingerprints were sampled differently: {0}")]
    ConfigMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingConfig {
    pub seed: u64,
    pub radii: Vec<f64>,
    pub count_per_radius: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            seed: 1,
            radii: vec![0.5, 1.0, 2.0],
            count_per_radius: 16,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<(), FingerprintError> {
        if self.radii.is_empty() {
            return Err(FingerprintError::InvalidSampling("no radii given".into()));
        }
        if let Some(r) = self.radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(FingerprintError::InvalidSampling(format!("radius {r} is not positive")));
        }
        if self.count_per_radius == 0 {
            return Err(FingerprintError::InvalidSampling("count per radius must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Distances below this count as equal.
    pub eq: f64,
    /// Distances above this count as distinct.
    pub distinct: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { eq: 1e-8, distinct: 1e-4 }
    }
}

/// Additive recurrence constants for `dim` dimensions: powers of the inverse
/// of the positive root of `x^(dim+1) = x + 1`.
fn kronecker_steps(dim: usize) -> Vec<f64> {
    let mut phi = 2.0_f64;
    let exponent = 1.0 / (dim as f64 + 1.0);
    for _ in 0..64 {
        phi = (1.0 + phi).powf(exponent);
    }
    (1..=dim).map(|k| phi.powi(-(k as i32)).fract()).collect()
}

/// Deterministic points on the spheres `||z|| = r` for each radius `r`.
///
/// Directions come from a seeded low-discrepancy sequence in `[0,1)^(2n)`,
/// mapped to complex Gaussians by Box–Muller and normalized. Point `k`
/// overall uses sequence index `k`, so each radius gets its own directions.
pub fn sample_points(dim: usize, config: &SamplingConfig) -> Result<Vec<CVector>, FingerprintError> {
    config.validate()?;
    if dim == 0 {
        return Err(FingerprintError::InvalidSampling("dimension must be at least 1".into()));
    }
    let steps = kronecker_steps(2 * dim);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let offsets: Vec<f64> = (0..2 * dim).map(|_| rng.random::<f64>()).collect();

    let mut points = Vec::with_capacity(config.radii.len() * config.count_per_radius);
    let mut index = 0u64;
    for &radius in &config.radii {
        let mut produced = 0;
        while produced < config.count_per_radius {
            index += 1;
            let u: Vec<f64> = offsets
                .iter()
                .zip(&steps)
                .map(|(o, s)| (o + index as f64 * s).fract())
                .collect();
            let direction = CVector::from_iterator(
                dim,
                (0..dim).map(|i| {
                    let r = (-2.0 * (1.0 - u[2 * i]).ln()).sqrt();
                    C64::from_polar(r, 2.0 * PI * u[2 * i + 1])
                }),
            );
            let norm = euclidean_norm(&direction);
            if !(norm > 1e-8) {
                continue;
            }
            points.push(direction * C64::new(radius / norm, 0.0));
            produced += 1;
        }
    }
    Ok(points)
}

/// Sampled image of an automorphism under the embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    dim: usize,
    jet: Jet1,
    samples: Vec<LeviSample>,
    sampling: SamplingConfig,
}

impl Fingerprint {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jet(&self) -> &Jet1 {
        &self.jet
    }

    pub fn samples(&self) -> &[LeviSample] {
        &self.samples
    }

    pub fn sampling(&self) -> &SamplingConfig {
        &self.sampling
    }

    fn check_compatible(&self, other: &Fingerprint) -> Result<(), FingerprintError> {
        if self.dim != other.dim {
            return Err(FingerprintError::ConfigMismatch(format!(
                "dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        if self.sampling != other.sampling || self.samples.len() != other.samples.len() {
            return Err(FingerprintError::ConfigMismatch(
                "seed, radii or count differ".into(),
            ));
        }
        Ok(())
    }

    /// Largest Frobenius distance between corresponding Levi samples,
    /// ignoring the jets.
    pub fn max_levi_distance(&self, other: &Fingerprint) -> Result<f64, FingerprintError> {
        self.check_compatible(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.levi().distance(b.levi()))
            .fold(0.0, f64::max))
    }
}

/// Jet of `word` plus the Levi matrices of `log ||Θ(word)||` at the sample points.
pub fn fingerprint(word: &AutomorphismWord, config: &SamplingConfig) -> Result<Fingerprint, FingerprintError> {
    let points = sample_points(word.dim(), config)?;
    let normalized = word.theta_normalize();
    let samples = points
        .into_iter()
        .map(|z| {
            let levi = levi_log_norm(&normalized, &z)?;
            LeviSample::new(z, levi)
        })
        .collect::<Result<Vec<_>, WirtingerError>>()?;
    Ok(Fingerprint {
        dim: word.dim(),
        jet: word.jet1(),
        samples,
        sampling: config.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Equal,
    Distinct,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Equal => "equal",
            Outcome::Distinct => "distinct",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

/// Evidence that two fingerprints differ.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Levi matrices differ at `point` by `distance` (Frobenius).
    Sample { index: usize, point: CVector, distance: f64 },
    /// The 1-jets differ.
    Jet { value_distance: f64, derivative_distance: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub jet_equal: bool,
    pub value_distance: f64,
    pub derivative_distance: f64,
    pub max_levi_distance: f64,
}

/// Compares two fingerprints sampled with the same configuration.
///
/// A Levi witness is preferred over a jet witness when both exist.
pub fn compare(f1: &Fingerprint, f2: &Fingerprint, thresholds: &Thresholds) -> Result<ComparisonVerdict, FingerprintError> {
    f1.check_compatible(f2)?;
    let value_distance = euclidean_norm(&(&f1.jet.value_at_zero - &f2.jet.value_at_zero));
    let derivative_distance = frobenius_norm(&(&f1.jet.derivative_at_zero - &f2.jet.derivative_at_zero));
    let jet_equal = value_distance < thresholds.eq && derivative_distance < thresholds.eq;
    let jet_distinct = value_distance > thresholds.distinct || derivative_distance > thresholds.distinct;

    let mut worst: Option<(usize, f64)> = None;
    for (k, (a, b)) in f1.samples.iter().zip(&f2.samples).enumerate() {
        let d = a.levi().distance(b.levi());
        if worst.is_none_or(|(_, w)| d > w) {
            worst = Some((k, d));
        }
    }
    let max_levi_distance = worst.map_or(0.0, |(_, d)| d);

    let levi_witness = worst
        .filter(|&(_, d)| d > thresholds.distinct)
        .map(|(index, distance)| Witness::Sample {
            index,
            point: f1.samples[index].point().clone(),
            distance,
        });

    let (outcome, witness) = if let Some(w) = levi_witness {
        (Outcome::Distinct, Some(w))
    } else if jet_distinct {
        (
            Outcome::Distinct,
            Some(Witness::Jet {
                value_distance,
                derivative_distance,
            }),
        )
    } else if jet_equal && max_levi_distance < thresholds.eq {
        (Outcome::Equal, None)
    } else {
        (Outcome::Inconclusive, None)
    };

    Ok(ComparisonVerdict {
        outcome,
        witness,
        jet_equal,
        value_distance,
        derivative_distance,
        max_levi_distance,
    })
}

/// Result of the sampled pluriharmonicity test for `log(||Θ(F)|| / ||z||)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinenessReport {
    pub is_affine: bool,
    pub max_distance: f64,
    /// Sample with the largest deviation when the test fails.
    pub witness: Option<(CVector, f64)>,
}

pub fn affineness(word: &AutomorphismWord, config: &SamplingConfig, tol: f64) -> Result<AffinenessReport, FingerprintError> {
    let fp = fingerprint(word, config)?;
    let mut worst: Option<(&CVector, f64)> = None;
    for s in fp.samples() {
        let reference = levi_log_norm_identity(s.point())?;
        let d = s.levi().distance(&reference);
        if worst.is_none_or(|(_, w)| d > w) {
            worst = Some((s.point(), d));
        }
    }
    let max_distance = worst.map_or(0.0, |(_, d)| d);
    let is_affine = max_distance < tol;
    Ok(AffinenessReport {
        is_affine,
        max_distance,
        witness: if is_affine { None } else { worst.map(|(p, d)| (p.clone(), d)) },
    })
}

/// Whether `log(||Θ(F)|| / ||z||)` is pluriharmonic at every sample, within `tol`.
pub fn is_affine(word: &AutomorphismWord, config: &SamplingConfig, tol: f64) -> Result<bool, FingerprintError> {
    affineness(word, config, tol).map(|r| r.is_affine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ComplexPolynomial, Generator};
    use crate::linalg::{c64, real_matrix, real_vector, CMatrix};

    fn shear_word(e: u32) -> AutomorphismWord {
        let p = ComplexPolynomial::from_terms(2, [(vec![e, 0], c64(1.0, 0.0))]).unwrap();
        AutomorphismWord::from_generator(Generator::shear(1, p).unwrap())
    }

    fn small_config(radii: Vec<f64>, count: usize, seed: u64) -> SamplingConfig {
        SamplingConfig {
            seed,
            radii,
            count_per_radius: count,
        }
    }

    #[test]
    fn sample_points_are_deterministic() {
        let cfg = small_config(vec![1.0], 4, 7);
        assert_eq!(sample_points(2, &cfg).unwrap(), sample_points(2, &cfg).unwrap());
        let other = small_config(vec![1.0], 4, 8);
        assert_ne!(sample_points(2, &cfg).unwrap(), sample_points(2, &other).unwrap());
    }

    #[test]
    fn sample_points_lie_on_requested_spheres() {
        let cfg = SamplingConfig::default();
        for n in 1..=4 {
            let pts = sample_points(n, &cfg).unwrap();
            assert_eq!(pts.len(), 48);
            for (k, p) in pts.iter().enumerate() {
                let r = cfg.radii[k / 16];
                assert!((euclidean_norm(p) - r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_dimensional_points_are_distinct() {
        let pts = sample_points(1, &small_config(vec![0.5, 2.0], 8, 1)).unwrap();
        assert_eq!(pts.len(), 16);
        for (i, a) in pts.iter().enumerate() {
            assert!(euclidean_norm(a) > 0.0);
            for b in &pts[i + 1..] {
                assert!(euclidean_norm(&(a - b)) > 1e-6);
            }
        }
    }

    #[test]
    fn invalid_sampling_rejected() {
        assert!(sample_points(2, &small_config(vec![], 4, 1)).is_err());
        assert!(sample_points(2, &small_config(vec![-1.0], 4, 1)).is_err());
        assert!(sample_points(2, &small_config(vec![1.0], 0, 1)).is_err());
    }

    #[test]
    fn identity_fingerprint_matches_closed_form() {
        let fp = fingerprint(&AutomorphismWord::identity(2), &SamplingConfig::default()).unwrap();
        assert!(fp.jet().is_exactly_normalized());
        for s in fp.samples() {
            let z = s.point();
            let sq = z.norm_squared();
            for i in 0..2 {
                for j in 0..2 {
                    let delta = if i == j { sq } else { 0.0 };
                    // L[i][j] = (δ_ij S − z_i conj(z_j)) / (2 S²)
                    let expected = (c64(delta, 0.0) - z[i] * z[j].conj()) / (2.0 * sq * sq);
                    assert!((s.levi().get(i, j) - expected).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn affine_fingerprint_matches_identity_samples() {
        let a = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.5), c64(0.0, 1.0), c64(-1.0, 0.0), c64(2.0, 0.0)]);
        let w = AutomorphismWord::from_generator(Generator::affine(a, real_vector(&[3.0, -1.0])).unwrap());
        let cfg = SamplingConfig::default();
        let fa = fingerprint(&w, &cfg).unwrap();
        let fi = fingerprint(&AutomorphismWord::identity(2), &cfg).unwrap();
        assert!(fa.max_levi_distance(&fi).unwrap() < 1e-12);
        let v = compare(&fa, &fi, &Thresholds::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
        assert!(matches!(v.witness, Some(Witness::Jet { .. })));
    }

    #[test]
    fn reflexive_comparison_is_equal() {
        let cfg = SamplingConfig::default();
        let f = fingerprint(&shear_word(2), &cfg).unwrap();
        let v = compare(&f, &f, &Thresholds::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Equal);
        assert!(v.jet_equal && v.witness.is_none());
    }

    #[test]
    fn quadratic_and_cubic_shears_are_distinct() {
        let cfg = SamplingConfig::default();
        let f2 = fingerprint(&shear_word(2), &cfg).unwrap();
        let f3 = fingerprint(&shear_word(3), &cfg).unwrap();
        let v = compare(&f2, &f3, &Thresholds::default()).unwrap();
        assert_eq!(v.outcome, Outcome::Distinct);
        assert!(v.jet_equal);
        match v.witness {
            Some(Witness::Sample { distance, .. }) => assert!(distance > 1e-4),
            other => panic!("expected a sample witness, got {other:?}"),
        }
    }

    #[test]
    fn dead_band_is_inconclusive() {
        let cfg = small_config(vec![1.0], 4, 3);
        let f = fingerprint(&shear_word(2), &cfg).unwrap();
        let g = fingerprint(&shear_word(2), &cfg).unwrap();
        // Same fingerprints but an equality threshold of zero can never be met.
        let v = compare(&f, &g, &Thresholds { eq: 0.0, distinct: 1e-4 }).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.witness.is_none());
    }

    #[test]
    fn mismatched_sampling_is_an_error() {
        let f = fingerprint(&shear_word(2), &small_config(vec![1.0], 4, 3)).unwrap();
        let g = fingerprint(&shear_word(2), &small_config(vec![1.0], 4, 4)).unwrap();
        assert!(matches!(
            compare(&f, &g, &Thresholds::default()),
            Err(FingerprintError::ConfigMismatch(_))
        ));
    }

    #[test]
    fn affineness_examples() {
        let cfg = SamplingConfig::default();
        let a = Generator::affine(real_matrix(2, &[2.0, 1.0, 0.0, 1.0]), real_vector(&[1.0, 0.0])).unwrap();
        assert!(is_affine(&AutomorphismWord::from_generator(a), &cfg, 1e-8).unwrap());

        let report = affineness(&shear_word(2), &cfg, 1e-8).unwrap();
        assert!(!report.is_affine);
        assert!(report.witness.is_some());

        // The pinned witness value at (1, 0).
        let probe = small_config(vec![1.0], 1, 0);
        let l = levi_log_norm(&shear_word(2), &real_vector(&[1.0, 0.0])).unwrap();
        let id = levi_log_norm_identity(&real_vector(&[1.0, 0.0])).unwrap();
        assert!((l.distance(&id) - (0.125f64.powi(2) * 3.0 + 0.375f64.powi(2)).sqrt()).abs() < 1e-15);
        assert!(!is_affine(&shear_word(2), &probe, 1e-8).unwrap());
    }

    #[test]
    fn one_dimensional_words_are_affine() {
        let cfg = SamplingConfig::default();
        let a = CMatrix::from_element(1, 1, c64(3.0, 0.0));
        let shift = ComplexPolynomial::constant(1, c64(0.0, 2.0));
        let w = AutomorphismWord::new(
            1,
            vec![
                Generator::affine(a, real_vector(&[2.0])).unwrap(),
                Generator::shear(0, shift).unwrap(),
            ],
        )
        .unwrap();
        let fp = fingerprint(&w, &cfg).unwrap();
        assert!(fp.samples().iter().all(|s| s.levi().get(0, 0).norm() < 1e-9));
        assert!(is_affine(&w, &cfg, 1e-8).unwrap());
    }
}
