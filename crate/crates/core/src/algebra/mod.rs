//! Tame automorphisms of `C^n`: words of affine maps and elementary shears.
//!
//! A word `[g1, g2, ..., gm]` is the map `gm ∘ ... ∘ g2 ∘ g1`: the first
//! listed generator is applied first. Words are never expanded into a single
//! polynomial map; values and Jacobians are propagated generator by
//! generator with the chain rule.
//!
//! Coordinates are zero-based in this API (`z1` is coordinate `0`). The text
//! format in [`crate::lang`] uses the one-based names.

mod polynomial;

use thiserror::Error;

use crate::linalg::{is_invertible, relative_determinant, CMatrix, CVector, C64};

pub use polynomial::{ComplexPolynomial, Monomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("affine matrix is singular (relative |det| = {relative_det:e})")]
    SingularMatrix { relative_det: f64 },
    #[error("shear on z{coordinate} depends on z{coordinate}")]
    SelfReferentialShear { coordinate: usize },
    #[error("coordinate z{index} out of range 1..={dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
}

/// `z ↦ A z + b` with `A` invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    matrix: CMatrix,
    translation: CVector,
}

impl AffineMap {
    pub fn new(matrix: CMatrix, translation: CVector) -> Result<Self, AlgebraError> {
        let n = translation.len();
        if n == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: if matrix.nrows() != n { matrix.nrows() } else { matrix.ncols() },
            });
        }
        if !is_invertible(&matrix) {
            return Err(AlgebraError::SingularMatrix {
                relative_det: relative_determinant(&matrix),
            });
        }
        Ok(AffineMap { matrix, translation })
    }

    pub fn identity(dim: usize) -> Self {
        AffineMap {
            matrix: CMatrix::identity(dim, dim),
            translation: CVector::zeros(dim),
        }
    }

    pub fn linear(matrix: CMatrix) -> Result<Self, AlgebraError> {
        let n = matrix.nrows();
        Self::new(matrix, CVector::zeros(n))
    }

    pub fn translation_by(translation: CVector) -> Result<Self, AlgebraError> {
        let n = translation.len();
        Self::new(CMatrix::identity(n, n), translation)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &CVector {
        &self.translation
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, z: &CVector) -> CVector {
        &self.matrix * z + &self.translation
    }

    /// `(A⁻¹, −A⁻¹ b)`.
    pub fn inverse(&self) -> Self {
        let inv = invert_matrix(&self.matrix);
        let translation = -(&inv * &self.translation);
        AffineMap {
            matrix: inv,
            translation,
        }
    }
}

fn invert_matrix(m: &CMatrix) -> CMatrix {
    m.clone()
        .try_inverse()
        .expect("matrix was checked invertible at construction")
}

/// `z_k ← z_k + p(z)` where `p` does not involve `z_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shear {
    coordinate: usize,
    poly: ComplexPolynomial,
    gradient: Vec<ComplexPolynomial>,
}

impl Shear {
    /// `coordinate` is zero-based.
    pub fn new(coordinate: usize, poly: ComplexPolynomial) -> Result<Self, AlgebraError> {
        let dim = poly.dim();
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if coordinate >= dim {
            return Err(AlgebraError::CoordinateOutOfRange {
                index: coordinate + 1,
                dim,
            });
        }
        if poly.depends_on(coordinate) {
            return Err(AlgebraError::SelfReferentialShear {
                coordinate: coordinate + 1,
            });
        }
        let gradient = (0..dim).map(|j| poly.partial(j)).collect();
        Ok(Shear {
            coordinate,
            poly,
            gradient,
        })
    }

    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn polynomial(&self) -> &ComplexPolynomial {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn apply(&self, z: &CVector) -> CVector {
        let mut out = z.clone();
        out[self.coordinate] += self.poly.eval(z.as_slice());
        out
    }

    pub fn jacobian(&self, z: &CVector) -> CMatrix {
        let n = self.dim();
        let mut jac = CMatrix::identity(n, n);
        for (j, dp) in self.gradient.iter().enumerate() {
            if !dp.is_zero() {
                jac[(self.coordinate, j)] += dp.eval(z.as_slice());
            }
        }
        jac
    }

    pub fn inverse(&self) -> Self {
        Shear {
            coordinate: self.coordinate,
            poly: -&self.poly,
            gradient: self.gradient.iter().map(|g| -g).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Affine(AffineMap),
    Shear(Shear),
}

impl Generator {
    pub fn affine(matrix: CMatrix, translation: CVector) -> Result<Self, AlgebraError> {
        AffineMap::new(matrix, translation).map(Generator::Affine)
    }

    /// Elementary shear on the zero-based `coordinate`.
    pub fn shear(coordinate: usize, poly: ComplexPolynomial) -> Result<Self, AlgebraError> {
        Shear::new(coordinate, poly).map(Generator::Shear)
    }

    pub fn dim(&self) -> usize {
        match self {
            Generator::Affine(a) => a.dim(),
            Generator::Shear(s) => s.dim(),
        }
    }

    pub fn apply(&self, z: &CVector) -> CVector {
        match self {
            Generator::Affine(a) => a.apply(z),
            Generator::Shear(s) => s.apply(z),
        }
    }

    pub fn jacobian(&self, z: &CVector) -> CMatrix {
        match self {
            Generator::Affine(a) => a.matrix.clone(),
            Generator::Shear(s) => s.jacobian(z),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Generator::Affine(a) => Generator::Affine(a.inverse()),
            Generator::Shear(s) => Generator::Shear(s.inverse()),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Generator::Affine(_))
    }
}

/// A tame automorphism of `C^n` as a word of generators; the empty word is
/// the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismWord {
    dim: usize,
    generators: Vec<Generator>,
}

impl AutomorphismWord {
    pub fn identity(dim: usize) -> Self {
        AutomorphismWord {
            dim,
            generators: Vec::new(),
        }
    }

    pub fn new(dim: usize, generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        Ok(AutomorphismWord { dim, generators })
    }

    pub fn from_generator(generator: Generator) -> Self {
        AutomorphismWord {
            dim: generator.dim(),
            generators: vec![generator],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_purely_affine(&self) -> bool {
        self.generators.iter().all(Generator::is_affine)
    }

    fn check_point(&self, z: &CVector) -> Result<(), AlgebraError> {
        if z.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, z: &CVector) -> Result<CVector, AlgebraError> {
        self.check_point(z)?;
        Ok(self.generators.iter().fold(z.clone(), |w, g| g.apply(&w)))
    }

    pub fn jacobian(&self, z: &CVector) -> Result<CMatrix, AlgebraError> {
        self.evaluate_with_jacobian(z).map(|(_, j)| j)
    }

    /// `(F(z), DF(z))` in one pass along the word.
    pub fn evaluate_with_jacobian(&self, z: &CVector) -> Result<(CVector, CMatrix), AlgebraError> {
        self.check_point(z)?;
        let mut w = z.clone();
        let mut jac = CMatrix::identity(self.dim, self.dim);
        for g in &self.generators {
            jac = g.jacobian(&w) * jac;
            w = g.apply(&w);
        }
        Ok((w, jac))
    }

    pub fn inverse(&self) -> Self {
        AutomorphismWord {
            dim: self.dim,
            generators: self.generators.iter().rev().map(Generator::inverse).collect(),
        }
    }

    /// The word for `self ∘ inner` (`inner` is applied first).
    pub fn compose(&self, inner: &AutomorphismWord) -> Result<Self, AlgebraError> {
        if inner.dim != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: inner.dim,
            });
        }
        let mut generators = inner.generators.clone();
        generators.extend(self.generators.iter().cloned());
        Ok(AutomorphismWord {
            dim: self.dim,
            generators,
        })
    }

    /// Appends `g`, which becomes the last map applied.
    pub fn then(mut self, g: Generator) -> Result<Self, AlgebraError> {
        if g.dim() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: g.dim(),
            });
        }
        self.generators.push(g);
        Ok(self)
    }

    pub fn jet1(&self) -> Jet1 {
        let (value, derivative) = self
            .evaluate_with_jacobian(&CVector::zeros(self.dim))
            .expect("origin has the word's dimension");
        Jet1 {
            value_at_zero: value,
            derivative_at_zero: derivative,
        }
    }

    /// `DF(0)⁻¹ (F − F(0))`, the representative of the left affine coset
    /// of `F` with jet `(0, I)`.
    ///
    /// A word whose jet is exactly `(0, I)` is returned unchanged.
    pub fn theta_normalize(&self) -> Self {
        let jet = self.jet1();
        if jet.is_exactly_normalized() {
            return self.clone();
        }
        let correction = AffineMap {
            matrix: jet.derivative_at_zero.clone(),
            translation: jet.value_at_zero.clone(),
        }
        .inverse();
        let mut out = self.clone();
        out.generators.push(Generator::Affine(correction));
        out
    }
}

/// `(F(0), DF(0))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    pub value_at_zero: CVector,
    pub derivative_at_zero: CMatrix,
}

impl Jet1 {
    pub fn new(value_at_zero: CVector, derivative_at_zero: CMatrix) -> Result<Self, AlgebraError> {
        let affine = AffineMap::new(derivative_at_zero, value_at_zero)?;
        Ok(Jet1 {
            value_at_zero: affine.translation,
            derivative_at_zero: affine.matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.value_at_zero.len()
    }

    pub fn is_exactly_normalized(&self) -> bool {
        let n = self.dim();
        self.value_at_zero.iter().all(|c| *c == C64::new(0.0, 0.0))
            && self.derivative_at_zero == CMatrix::identity(n, n)
    }

    /// The affine map `z ↦ F(0) + DF(0) z` with the same jet.
    pub fn to_affine(&self) -> AffineMap {
        AffineMap {
            matrix: self.derivative_at_zero.clone(),
            translation: self.value_at_zero.clone(),
        }
    }
}
