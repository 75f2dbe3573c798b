use std::collections::BTreeMap;

use pseudoherm::io::MatrixFile;
use pseudoherm::{c64, Classification, ComplexMatrix, MetricOperator};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub input_digest: String,
    pub classification: Option<ClassificationOut>,
    pub residuals: BTreeMap<String, f64>,
    pub metric: Option<MatrixFile>,
    pub signature: Option<[usize; 2]>,
    pub spectrum: Vec<[f64; 2]>,
    pub notes: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &'static str, input: &[u8]) -> Self {
        Self {
            schema: SCHEMA,
            command,
            input_digest: digest(input),
            classification: None,
            residuals: BTreeMap::new(),
            metric: None,
            signature: None,
            spectrum: Vec::new(),
            notes: String::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn with_classification(mut self, c: &Classification) -> Self {
        self.spectrum = c.spectrum.eigenvalues().iter().map(|l| pair(*l)).collect();
        self.residuals
            .insert("hermiticity".into(), c.diagnostics.hermiticity_residual);
        self.classification = Some(ClassificationOut::from(c));
        self
    }

    pub fn set_metric(&mut self, eta: &MetricOperator) {
        let sig = eta.signature();
        self.signature = Some([sig.positive, sig.negative]);
        self.metric = Some(MatrixFile::from_matrix(eta.matrix()));
    }

    pub fn residual(&mut self, name: &str, value: f64) {
        self.residuals.insert(name.into(), value);
    }

    pub fn output(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("output serializes");
        self.outputs.insert(name.into(), v);
    }

    pub fn output_matrix(&mut self, name: &str, m: &ComplexMatrix) {
        self.output(name, MatrixFile::from_matrix(m));
    }

    pub fn note(&mut self, text: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationOut {
    pub kind: &'static str,
    pub hermiticity_residual: f64,
    pub diag_score: f64,
    pub max_rel_imag: f64,
    pub pair_count: usize,
    pub unpaired: Option<[f64; 2]>,
}

impl From<&Classification> for ClassificationOut {
    fn from(c: &Classification) -> Self {
        let d = &c.diagnostics;
        Self {
            kind: c.kind.as_str(),
            hermiticity_residual: d.hermiticity_residual,
            diag_score: d.diag_score,
            max_rel_imag: d.max_rel_imag,
            pair_count: d.pair_count,
            unpaired: d.unpaired.map(pair),
        }
    }
}

fn pair(z: c64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
