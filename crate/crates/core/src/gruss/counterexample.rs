//! The reduction map `Φ(X) = 2 tr(X) I₃ − X` is 2-positive but not
//! 3-positive. For the operands below it breaks both the block positivity
//! used in the norm bound and the operator-norm inequality itself.

use super::checks::block_gram;
use super::report::{CheckId, Dims, InequalityReport, InputDigest, DEFAULT_SLACK_TOL};
use crate::cpmaps::{is_completely_positive, reduction_map, LinearMap, MatrixMap};
use crate::error::Result;
use crate::json::matrix_to_json;
use crate::linalg::{from_real_rows, op_norm, ComplexMatrix};
use crate::orbit::{orbit_diameter, DiameterOptions};
use serde::Serialize;
use serde_json::{json, Value};

/// The operands `A` (a permutation with spectrum `{1, 1, −1}`) and the
/// Hermitian `B` with spectrum `{0, (1 ± √5)/2}`.
pub fn counterexample_operands() -> (ComplexMatrix, ComplexMatrix) {
    let a = from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
    let b = from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 1.0]]);
    (a, b)
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleBundle {
    /// Reports for `Φ` itself; these are expected to fail.
    pub raw: Vec<InequalityReport>,
    /// Reports for `Φ/5`, which is unital; recorded as exploratory.
    pub normalized: Vec<InequalityReport>,
    /// The map and operands, in the input formats.
    pub instance: Value,
}

impl CounterexampleBundle {
    pub fn reports(&self) -> impl Iterator<Item = &InequalityReport> {
        self.raw.iter().chain(&self.normalized)
    }

    pub fn violations(&self) -> usize {
        self.reports().filter(|r| r.is_violation()).count()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("bundle serializes")
    }
}

fn variant_reports(
    normalize: bool,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    d_a: f64,
    d_b: f64,
) -> Result<Vec<InequalityReport>> {
    let map = reduction_map(3, normalize)?;
    let variant = if normalize { "normalized" } else { "raw" };
    let tol = DEFAULT_SLACK_TOL;
    let digest = InputDigest::new(variant)
        .matrix(map.choi().matrix())
        .matrix(a)
        .matrix(b)
        .finish();
    let dims = Dims {
        m: 3,
        n: 3,
        k: 9,
        rank: None,
    };
    let common = |r: InequalityReport| {
        let r = r
            .detail("variant", variant)
            .detail("unitality_defect", map.unitality_defect())
            .detail("choi_min_eigenvalue", is_completely_positive(&map, tol).min_eigenvalue)
            .with_dims(dims)
            .with_digest(digest.clone());
        if normalize {
            r.detail("exploratory", true)
        } else {
            r
        }
    };

    let gram = block_gram(&map, a, b, tol)?;
    let gram_report = InequalityReport::new(
        CheckId::CounterexampleBlockGram,
        super::report::OPERATOR_ORDER,
        (-gram.verdict.min_eigenvalue).max(0.0),
        0.0,
        tol,
    )
    .detail("min_eigenvalue", gram.verdict.min_eigenvalue);

    let d = map.apply(&(a * b))? - map.apply(a)? * map.apply(b)?;
    let gruss_report = InequalityReport::new(CheckId::CounterexampleGruss, "op", op_norm(&d), 0.25 * d_a * d_b, tol)
        .detail("d_A", d_a)
        .detail("d_B", d_b);
    Ok(vec![common(gram_report), common(gruss_report)])
}

pub fn choi_counterexample() -> Result<CounterexampleBundle> {
    let (a, b) = counterexample_operands();
    let opts = DiameterOptions::default();
    let d_a = orbit_diameter(&a, &opts)?.d;
    let d_b = orbit_diameter(&b, &opts)?.d;
    let instance = json!({
        "map": LinearMap::Reduction(reduction_map(3, false)?).to_json(),
        "A": matrix_to_json(&a),
        "B": matrix_to_json(&b),
    });
    Ok(CounterexampleBundle {
        raw: variant_reports(false, &a, &b, d_a, d_b)?,
        normalized: variant_reports(true, &a, &b, d_a, d_b)?,
        instance,
    })
}
