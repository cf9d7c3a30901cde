use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;

/// Relative slack tolerance used unless a caller overrides it.
pub const DEFAULT_SLACK_TOL: f64 = 1e-8;

/// Gauge label for checks stated in the operator order rather than a norm.
pub const OPERATOR_ORDER: &str = "operator-order";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Kadison,
    BlockGram,
    VarianceBound,
    GrussNorm,
    GrussNormEta,
    GrussOperator,
    BallVariance,
    HadamardGruss,
    DiscreteGruss,
    ScalarGruss,
    ScalarGrussBpr,
    FieldGruss,
    Stinespring,
    OrbitCommutator,
    CounterexampleBlockGram,
    CounterexampleGruss,
}

impl CheckId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Kadison => "kadison",
            CheckId::BlockGram => "block_gram",
            CheckId::VarianceBound => "variance_bound",
            CheckId::GrussNorm => "gruss_norm",
            CheckId::GrussNormEta => "gruss_norm_eta",
            CheckId::GrussOperator => "gruss_operator",
            CheckId::BallVariance => "ball_variance",
            CheckId::HadamardGruss => "hadamard_gruss",
            CheckId::DiscreteGruss => "discrete_gruss",
            CheckId::ScalarGruss => "scalar_gruss",
            CheckId::ScalarGrussBpr => "scalar_gruss_bpr",
            CheckId::FieldGruss => "field_gruss",
            CheckId::Stinespring => "stinespring",
            CheckId::OrbitCommutator => "orbit_commutator",
            CheckId::CounterexampleBlockGram => "counterexample_block_gram",
            CheckId::CounterexampleGruss => "counterexample_gruss",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
    /// Algebra dimension entering `|||I_{kn}|||`.
    pub k: usize,
    pub rank: Option<usize>,
}

/// One verdict `lhs ≤ rhs`, with `slack = rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check_id: CheckId,
    pub gauge: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub tol: f64,
    pub seed: u64,
    /// SHA-256 of the inputs, hex encoded.
    pub digest: String,
    pub dims: Dims,
    pub details: BTreeMap<String, Value>,
}

impl InequalityReport {
    pub fn new(check_id: CheckId, gauge: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        InequalityReport {
            check_id,
            gauge: gauge.into(),
            lhs,
            rhs,
            slack,
            satisfied: slack_ok(slack, rhs, tol),
            tol,
            seed: 0,
            digest: String::new(),
            dims: Dims::default(),
            details: BTreeMap::new(),
        }
    }

    pub fn with_dims(mut self, dims: Dims) -> Self {
        self.dims = dims;
        self
    }

    pub fn with_digest(mut self, digest: String) -> Self {
        self.digest = digest;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn is_exploratory(&self) -> bool {
        self.details
            .get("exploratory")
            .and_then(Value::as_bool)
            .unwrap_or(false)
    }

    /// A violation is a failed verdict on a non-exploratory check.
    pub fn is_violation(&self) -> bool {
        !self.satisfied && !self.is_exploratory()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// `slack ≥ −tol·(1 + rhs)`.
pub fn slack_ok(slack: f64, rhs: f64, tol: f64) -> bool {
    slack >= -tol * (1.0 + rhs.abs())
}

/// Incremental SHA-256 over the exact bits of the inputs.
#[derive(Debug, Clone, Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(label: &str) -> Self {
        let mut h = Sha256::new();
        h.update(label.as_bytes());
        InputDigest(h)
    }

    pub fn matrix(mut self, a: &ComplexMatrix) -> Self {
        self.0.update((a.nrows() as u64).to_le_bytes());
        self.0.update((a.ncols() as u64).to_le_bytes());
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                self.0.update(a[(i, j)].re.to_bits().to_le_bytes());
                self.0.update(a[(i, j)].im.to_bits().to_le_bytes());
            }
        }
        self
    }

    pub fn matrices(self, list: &[ComplexMatrix]) -> Self {
        list.iter().fold(self.count(list.len()), |d, a| d.matrix(a))
    }

    pub fn scalars(mut self, values: &[f64]) -> Self {
        self = self.count(values.len());
        for v in values {
            self.0.update(v.to_bits().to_le_bytes());
        }
        self
    }

    pub fn count(mut self, n: usize) -> Self {
        self.0.update((n as u64).to_le_bytes());
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

pub const CSV_COLUMNS: [&str; 14] = [
    "check_id",
    "gauge",
    "lhs",
    "rhs",
    "slack",
    "satisfied",
    "tol",
    "seed",
    "digest",
    "m",
    "n",
    "k",
    "rank",
    "details",
];

/// Shortest round-trip text for a float, as written in the JSON output.
pub fn format_float(x: f64) -> String {
    serde_json::to_string(&x).expect("float serializes")
}

/// CSV with the columns of [`CSV_COLUMNS`]; `details` is a JSON object.
/// Each `preamble` line is written first, prefixed with `# `.
pub fn reports_to_csv(reports: &[InequalityReport], preamble: &[String]) -> Result<String> {
    let mut out = Vec::new();
    for line in preamble {
        out.extend_from_slice(format!("# {line}\n").as_bytes());
    }
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(CSV_COLUMNS)
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        for r in reports {
            let rank = r.dims.rank.map(|x| x.to_string()).unwrap_or_default();
            let details = serde_json::to_string(&r.details).expect("details serialize");
            w.write_record([
                r.check_id.as_str().to_string(),
                r.gauge.clone(),
                format_float(r.lhs),
                format_float(r.rhs),
                format_float(r.slack),
                r.satisfied.to_string(),
                format_float(r.tol),
                r.seed.to_string(),
                r.digest.clone(),
                r.dims.m.to_string(),
                r.dims.n.to_string(),
                r.dims.k.to_string(),
                rank,
                details,
            ])
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        }
        w.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    }
    Ok(String::from_utf8(out).expect("csv output is UTF-8"))
}
