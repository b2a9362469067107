//! Seeded random words and points for property checks.
//!
//! Generators are kept at desk scale: coefficients of modulus at most
//! `COEFF_SCALE`, shear degrees between 2 and the requested maximum, and
//! affine matrices with relative determinant above `MIN_REL_DET`. Words mixing
//! shears are additionally rejected unless every intermediate value of the
//! word and of its inverse stays below [`GROWTH_BOUND`] on fixed probe points
//! of the radius-2 sphere; iterated quartic shears otherwise reach magnitudes
//! where round trips lose all precision.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AffineMap, AutomorphismWord, ComplexPolynomial, Generator, Shear};
use crate::linalg::{euclidean_norm, relative_determinant, CMatrix, CVector, C64};

pub const COEFF_SCALE: f64 = 0.5;
pub const GROWTH_BOUND: f64 = 1e3;
const MIN_REL_DET: f64 = 0.2;
const PROBE_RADIUS: f64 = 2.0;
const PROBE_COUNT: usize = 32;
const PROBE_SEED: u64 = 0x7a3e_5eed;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the disk of the given radius.
pub fn random_complex<R: Rng>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, 2.0 * PI * rng.random::<f64>())
}

/// Coefficient with modulus in `[0.2, 1] * scale` and uniform phase.
fn random_coefficient<R: Rng>(rng: &mut R, scale: f64) -> C64 {
    C64::from_polar(scale * rng.random_range(0.2..=1.0), 2.0 * PI * rng.random::<f64>())
}

/// Uniform direction with norm drawn uniformly from `[r_min, r_max]`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize, r_min: f64, r_max: f64) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let r = (-2.0 * u1.ln()).sqrt();
            C64::from_polar(r, 2.0 * PI * rng.random::<f64>())
        });
        let norm = euclidean_norm(&v);
        if norm > 1e-6 {
            let radius = rng.random_range(r_min..=r_max);
            return v * C64::new(radius / norm, 0.0);
        }
    }
}

pub fn random_affine<R: Rng>(rng: &mut R, n: usize) -> AffineMap {
    loop {
        let a = CMatrix::from_fn(n, n, |_, _| random_complex(rng, 1.0));
        if relative_determinant(&a) > MIN_REL_DET {
            let b = CVector::from_fn(n, |_, _| random_complex(rng, 1.0));
            return AffineMap::new(a, b).expect("well-conditioned by construction");
        }
    }
}

/// Random polynomial in the variables other than `skip`, with 1 to 3 terms of
/// degree in `min_degree..=max_degree`. In dimension one the only admissible
/// shear polynomials are constants.
pub fn random_shear_polynomial<R: Rng>(
    rng: &mut R,
    n: usize,
    skip: usize,
    min_degree: u32,
    max_degree: u32,
) -> ComplexPolynomial {
    if n == 1 {
        return ComplexPolynomial::constant(1, random_coefficient(rng, 1.0));
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != skip).collect();
    loop {
        let terms = rng.random_range(1..=3);
        let p = ComplexPolynomial::from_terms(
            n,
            (0..terms).map(|_| {
                let degree = rng.random_range(min_degree..=max_degree);
                let mut exps = vec![0u32; n];
                for _ in 0..degree {
                    exps[others[rng.random_range(0..others.len())]] += 1;
                }
                (exps, random_coefficient(rng, COEFF_SCALE))
            }),
        )
        .expect("exponent vectors have length n");
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_shear<R: Rng>(rng: &mut R, n: usize, min_degree: u32, max_degree: u32) -> Shear {
    let k = rng.random_range(0..n);
    Shear::new(k, random_shear_polynomial(rng, n, k, min_degree, max_degree)).expect("p avoids z_k")
}

/// Largest norm along the evaluation of `word` at `z`, input included.
pub fn max_intermediate_norm(word: &AutomorphismWord, z: &CVector) -> f64 {
    let mut v = z.clone();
    let mut largest = euclidean_norm(&v);
    for g in word.generators() {
        v = g.apply(&v);
        largest = largest.max(euclidean_norm(&v));
    }
    largest
}

/// Whether `word` and its inverse stay below [`GROWTH_BOUND`] on the probe sphere.
pub fn is_tame(word: &AutomorphismWord) -> bool {
    let mut r = rng(PROBE_SEED);
    let probes: Vec<CVector> = (0..PROBE_COUNT)
        .map(|_| random_point(&mut r, word.dim(), PROBE_RADIUS, PROBE_RADIUS))
        .collect();
    let inverse = word.inverse();
    probes.iter().all(|z| {
        max_intermediate_norm(word, z) < GROWTH_BOUND && max_intermediate_norm(&inverse, z) < GROWTH_BOUND
    })
}

fn tame_word<R: Rng>(rng: &mut R, mut draw: impl FnMut(&mut R) -> AutomorphismWord) -> AutomorphismWord {
    loop {
        let w = draw(rng);
        if is_tame(&w) {
            return w;
        }
    }
}

/// A tame word of 1 to `max_len` generators; each is affine with probability
/// 1/3, otherwise a shear of degree `2..=max_degree`.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize, max_degree: u32) -> AutomorphismWord {
    tame_word(rng, |rng| {
        let len = rng.random_range(1..=max_len);
        let generators = (0..len)
            .map(|_| {
                if rng.random_bool(1.0 / 3.0) {
                    Generator::Affine(random_affine(rng, n))
                } else {
                    Generator::Shear(random_shear(rng, n, 2, max_degree))
                }
            })
            .collect();
        AutomorphismWord::new(n, generators).expect("generators share dimension n")
    })
}

/// A tame word of shears without constant or linear terms, so its jet is `(0, I)`.
pub fn random_normalized_word<R: Rng>(rng: &mut R, n: usize, max_len: usize, max_degree: u32) -> AutomorphismWord {
    tame_word(rng, |rng| {
        let len = rng.random_range(1..=max_len);
        let generators = (0..len)
            .map(|_| Generator::Shear(random_shear(rng, n, 2, max_degree)))
            .collect();
        AutomorphismWord::new(n, generators).expect("generators share dimension n")
    })
}

pub fn random_affine_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> AutomorphismWord {
    let len = rng.random_range(1..=max_len);
    let generators = (0..len).map(|_| Generator::Affine(random_affine(rng, n))).collect();
    AutomorphismWord::new(n, generators).expect("generators share dimension n")
}

/// A word that is not affine: at least one shear of degree `>= 2` in
/// dimension `n >= 2`, wrapped in random affine maps.
pub fn random_non_affine_word<R: Rng>(rng: &mut R, n: usize, max_len: usize, max_degree: u32) -> AutomorphismWord {
    assert!(n >= 2, "every automorphism of C is affine");
    tame_word(rng, |rng| {
        let core = random_normalized_word(rng, n, max_len.saturating_sub(2).max(1), max_degree);
        let outer = AutomorphismWord::from_generator(Generator::Affine(random_affine(rng, n)));
        let inner = AutomorphismWord::from_generator(Generator::Affine(random_affine(rng, n)));
        outer
            .compose(&core)
            .and_then(|w| w.compose(&inner))
            .expect("same dimension")
    })
}

/// Largest `||W1(z) − W2(z)||` over `probes`.
pub fn max_evaluation_gap(w1: &AutomorphismWord, w2: &AutomorphismWord, probes: &[CVector]) -> f64 {
    probes
        .iter()
        .map(|z| {
            let a = w1.evaluate(z).expect("probe dimension");
            let b = w2.evaluate(z).expect("probe dimension");
            euclidean_norm(&(a - b))
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        let a = random_word(&mut rng(5), 3, 6, 4);
        let b = random_word(&mut rng(5), 3, 6, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn normalized_words_have_identity_jet() {
        let mut r = rng(11);
        for _ in 0..20 {
            let w = random_normalized_word(&mut r, 3, 6, 4);
            assert!(w.jet1().is_exactly_normalized());
        }
    }

    #[test]
    fn random_words_are_tame() {
        let mut r = rng(4);
        for _ in 0..20 {
            assert!(is_tame(&random_word(&mut r, 2, 6, 4)));
        }
        // z2 += z1^4 then z1 += z2^4 overflows the bound at radius 2.
        let wild = crate::lang::parse_automorphism("shear(1, z2^4) . shear(2, z1^4)", 2).unwrap();
        assert!(!is_tame(&wild));
    }

    #[test]
    fn points_respect_radius_bounds() {
        let mut r = rng(2);
        for _ in 0..100 {
            let p = random_point(&mut r, 2, 0.5, 2.0);
            let norm = euclidean_norm(&p);
            assert!((0.5 - 1e-12..=2.0 + 1e-12).contains(&norm));
        }
    }

    #[test]
    fn one_dimensional_shears_are_translations() {
        let mut r = rng(3);
        let s = random_shear(&mut r, 1, 2, 4);
        assert!(s.polynomial().is_constant());
    }
}
