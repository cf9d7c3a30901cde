//! Unitarily invariant norms through symmetric gauge functions.
//!
//! A norm is `|||A||| = g(s(A))` for a symmetric gauge `g` evaluated on the
//! singular values. Vectors are implicitly zero-padded, so `|||A ⊕ 0||| =
//! |||A|||` holds for every gauge here.

use crate::error::{Error, Result};
use crate::linalg::{singular_values, ComplexMatrix};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Default tolerance for majorization and norm-ordering verdicts.
pub const DEFAULT_NORM_TOL: f64 = 1e-8;

/// A symmetric gauge function on finitely supported nonnegative vectors.
///
/// Implementors get the padding convention for free: they are only ever
/// handed the nonzero prefix of a descending singular-value list, possibly
/// followed by zeros, and must ignore trailing zeros.
pub trait SymmetricGauge: Send + Sync {
    fn label(&self) -> String;
    fn evaluate(&self, values: &[f64]) -> f64;
}

/// The built-in gauge families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GaugeSpec {
    Operator,
    KyFan(usize),
    /// `p ≥ 1`; `p = ∞` is the operator norm.
    Schatten(f64),
}

impl GaugeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GaugeSpec::Operator => Ok(()),
            GaugeSpec::KyFan(0) => Err(Error::Config("Ky Fan index must be at least 1".into())),
            GaugeSpec::KyFan(_) => Ok(()),
            GaugeSpec::Schatten(p) if p.is_nan() || p < 1.0 => {
                Err(Error::Config(format!("Schatten exponent must be ≥ 1, got {p}")))
            }
            GaugeSpec::Schatten(_) => Ok(()),
        }
    }

    /// The gauges swept by default.
    pub fn standard_set() -> Vec<GaugeSpec> {
        vec![
            GaugeSpec::Operator,
            GaugeSpec::KyFan(2),
            GaugeSpec::Schatten(1.0),
            GaugeSpec::Schatten(2.0),
            GaugeSpec::Schatten(3.0),
        ]
    }

    /// Parse a comma-separated gauge list such as `op,kyfan:2,schatten:1.5`.
    pub fn parse_list(list: &str) -> Result<Vec<GaugeSpec>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl SymmetricGauge for GaugeSpec {
    fn label(&self) -> String {
        self.to_string()
    }

    fn evaluate(&self, values: &[f64]) -> f64 {
        match *self {
            GaugeSpec::Operator => values.iter().copied().fold(0.0, f64::max),
            GaugeSpec::KyFan(k) => {
                let mut sorted = values.to_vec();
                sorted.sort_by(|a, b| b.total_cmp(a));
                sorted.iter().take(k).sum()
            }
            GaugeSpec::Schatten(p) if p.is_infinite() => values.iter().copied().fold(0.0, f64::max),
            GaugeSpec::Schatten(1.0) => values.iter().sum(),
            GaugeSpec::Schatten(p) => {
                let top = values.iter().copied().fold(0.0, f64::max);
                if top == 0.0 {
                    return 0.0;
                }
                let sum: f64 = values.iter().map(|v| (v / top).powf(p)).sum();
                top * sum.powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for GaugeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeSpec::Operator => write!(f, "op"),
            GaugeSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            GaugeSpec::Schatten(p) if p.is_infinite() => write!(f, "schatten:inf"),
            GaugeSpec::Schatten(p) => write!(f, "schatten:{p}"),
        }
    }
}

impl FromStr for GaugeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        let bad = |why: &str| Error::Config(format!("invalid gauge `{token}`: {why}"));
        let gauge = match token.split_once(':') {
            None if token == "op" || token == "operator" => GaugeSpec::Operator,
            None => return Err(bad("expected `op`, `kyfan:K` or `schatten:P`")),
            Some(("kyfan", k)) => GaugeSpec::KyFan(
                k.parse()
                    .map_err(|_| bad(&format!("`{k}` is not a positive integer")))?,
            ),
            Some(("schatten", p)) => {
                let p = if p == "inf" {
                    f64::INFINITY
                } else {
                    p.parse().map_err(|_| bad(&format!("`{p}` is not a decimal number")))?
                };
                GaugeSpec::Schatten(p)
            }
            Some((family, _)) => return Err(bad(&format!("unknown family `{family}`"))),
        };
        gauge.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(gauge)
    }
}

impl TryFrom<String> for GaugeSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GaugeSpec> for String {
    fn from(g: GaugeSpec) -> String {
        g.to_string()
    }
}

/// `|||A||| = g(s(A))`.
pub fn gauge_norm(g: &dyn SymmetricGauge, a: &ComplexMatrix) -> Result<f64> {
    let s = singular_values(a)?;
    Ok(g.evaluate(s.values()))
}

/// `|||I_k|||`, computed from the gauge on the all-ones vector of length `k`.
pub fn identity_norm(g: &dyn SymmetricGauge, k: usize) -> f64 {
    g.evaluate(&vec![1.0; k])
}

/// Outcome of a (weak, possibly logarithmic) majorization test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    /// 1-based index `k` of the first failing partial sum or product.
    pub first_violation_index: Option<usize>,
    pub margins: Vec<f64>,
}

impl MajorizationVerdict {
    fn from_margins(margins: Vec<f64>, tol: f64) -> Self {
        let first = margins.iter().position(|&m| m < -tol).map(|i| i + 1);
        MajorizationVerdict {
            holds: first.is_none(),
            first_violation_index: first,
            margins,
        }
    }
}

fn sorted_desc(values: &[f64], len: usize) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.resize(len, 0.0);
    v
}

/// Ky Fan dominance `s(A) ≺_w s(B)`: margins are `Σ_{j≤k} s_j(B) − Σ_{j≤k} s_j(A)`
/// for `k` up to the larger dimension; holds when every margin is `≥ −tol`.
pub fn ky_fan_dominates(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<MajorizationVerdict> {
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    let len = a.nrows().max(a.ncols()).max(b.nrows()).max(b.ncols());
    weak_majorization(&sa.padded(len), &sb.padded(len), false, tol)
}

/// Weak majorization `x ≺_w y`, or weak log-majorization when `logarithmic`.
///
/// Inputs are sorted descending and zero-padded to a common length. In
/// logarithmic mode the margin at `k` is `(Π y − Π x) / Π y` (or `Π y − Π x`
/// when `Π y = 0`), so a margin `≥ −tol` means `Π x ≤ Π y · (1 + tol)`.
pub fn weak_majorization(x: &[f64], y: &[f64], logarithmic: bool, tol: f64) -> Result<MajorizationVerdict> {
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("majorization inputs must be finite".into()));
    }
    if logarithmic && x.iter().chain(y).any(|&v| v < 0.0) {
        return Err(Error::Domain("log-majorization needs nonnegative entries".into()));
    }
    let len = x.len().max(y.len());
    let x = sorted_desc(x, len);
    let y = sorted_desc(y, len);
    let mut margins = Vec::with_capacity(len);
    if logarithmic {
        let (mut px, mut py) = (1.0, 1.0);
        for k in 0..len {
            px *= x[k];
            py *= y[k];
            margins.push(if py > 0.0 { (py - px) / py } else { py - px });
        }
    } else {
        let (mut sx, mut sy) = (0.0, 0.0);
        for k in 0..len {
            sx += x[k];
            sy += y[k];
            margins.push(sy - sx);
        }
    }
    Ok(MajorizationVerdict::from_margins(margins, tol))
}
