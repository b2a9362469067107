//! JSON report structures. Complex numbers are `[re, im]` pairs; matrices are
//! lists of rows. Floats are written in shortest round-trip form.

use serde::Serialize;

use autfp_core::fingerprint::AffinenessReport;
use autfp_core::verify::SuiteReport;
use autfp_core::{CMatrix, CVector, ComparisonVerdict, Fingerprint, HermitianMatrix, Witness};

pub type Complex = [f64; 2];

pub fn vector(v: &CVector) -> Vec<Complex> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

pub fn matrix(m: &CMatrix) -> Vec<Vec<Complex>> {
    m.row_iter().map(|row| row.iter().map(|c| [c.re, c.im]).collect()).collect()
}

#[derive(Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub inputs: Vec<InputEcho>,
    pub result: R,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub n: Option<usize>,
    pub seed: u64,
    pub radii: Vec<f64>,
    pub count: usize,
    pub eps_eq: f64,
    pub eps_distinct: f64,
    pub psd_tol: f64,
    pub output: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub source: String,
    pub canonical: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ErrorResult {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    pub input: Option<String>,
    pub span: Option<[usize; 2]>,
}

#[derive(Debug, Serialize)]
pub struct Jet {
    pub value: Vec<Complex>,
    pub derivative: Vec<Vec<Complex>>,
}

#[derive(Debug, Serialize)]
pub struct Sample {
    pub point: Vec<Complex>,
    pub levi: Vec<Vec<Complex>>,
    pub min_eigenvalue: f64,
}

impl Sample {
    pub fn new(point: &CVector, levi: &HermitianMatrix) -> Self {
        Sample {
            point: vector(point),
            levi: matrix(levi.as_matrix()),
            min_eigenvalue: levi.min_eigenvalue(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FingerprintResult {
    pub jet: Jet,
    pub samples: Vec<Sample>,
    /// Levi matrices at explicitly requested points (`--at`).
    pub probes: Vec<Sample>,
}

impl FingerprintResult {
    pub fn new(fp: &Fingerprint, probes: Vec<Sample>) -> Self {
        FingerprintResult {
            jet: Jet {
                value: vector(&fp.jet().value_at_zero),
                derivative: matrix(&fp.jet().derivative_at_zero),
            },
            samples: fp.samples().iter().map(|s| Sample::new(s.point(), s.levi())).collect(),
            probes,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Sample { index: usize, point: Vec<Complex>, distance: f64 },
    Jet { value_distance: f64, derivative_distance: f64 },
}

#[derive(Debug, Serialize)]
pub struct CompareResult {
    pub outcome: &'static str,
    pub jet_equal: bool,
    pub value_distance: f64,
    pub derivative_distance: f64,
    pub max_levi_distance: f64,
    pub witness: Option<WitnessJson>,
}

impl From<&ComparisonVerdict> for CompareResult {
    fn from(v: &ComparisonVerdict) -> Self {
        CompareResult {
            outcome: v.outcome.as_str(),
            jet_equal: v.jet_equal,
            value_distance: v.value_distance,
            derivative_distance: v.derivative_distance,
            max_levi_distance: v.max_levi_distance,
            witness: v.witness.as_ref().map(|w| match w {
                Witness::Sample { index, point, distance } => WitnessJson::Sample {
                    index: *index,
                    point: vector(point),
                    distance: *distance,
                },
                Witness::Jet {
                    value_distance,
                    derivative_distance,
                } => WitnessJson::Jet {
                    value_distance: *value_distance,
                    derivative_distance: *derivative_distance,
                },
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AffineWitness {
    pub point: Vec<Complex>,
    pub distance: f64,
}

#[derive(Debug, Serialize)]
pub struct IsAffineResult {
    pub is_affine: bool,
    pub tolerance: f64,
    pub max_distance: f64,
    pub witness: Option<AffineWitness>,
}

impl IsAffineResult {
    pub fn new(r: &AffinenessReport, tolerance: f64) -> Self {
        IsAffineResult {
            is_affine: r.is_affine,
            tolerance,
            max_distance: r.max_distance,
            witness: r.witness.as_ref().map(|(p, d)| AffineWitness {
                point: vector(p),
                distance: *d,
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ParseResult {
    pub canonical: String,
    pub generators: usize,
}

#[derive(Debug, Serialize)]
pub struct InvertResult {
    pub inverse: String,
}

#[derive(Debug, Serialize)]
pub struct EvalResult {
    pub point: Vec<Complex>,
    pub value: Vec<Complex>,
    pub jacobian: Vec<Vec<Complex>>,
}

#[derive(Debug, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub counterexamples: Vec<Counterexample>,
}

impl From<&SuiteReport> for Suite {
    fn from(s: &SuiteReport) -> Self {
        Suite {
            name: s.name,
            passed: s.passed,
            cases: s.cases,
            worst: s.worst,
            tolerance: s.tolerance,
            counterexamples: s
                .counterexamples
                .iter()
                .map(|c| Counterexample {
                    word: c.word.clone(),
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyResult {
    pub all_passed: bool,
    pub suites: Vec<Suite>,
}
