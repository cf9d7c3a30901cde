//! Linear maps `Φ: M_m → M_n` in Kraus, Choi and direct form.
//!
//! Kraus convention: `Φ(X) = Σ K_i X K_i*` with `K_i` of shape `n × m`;
//! unital means `Σ K_i K_i* = I_n`. Choi convention: `C = Σ_ij E_ij ⊗ Φ(E_ij)`,
//! so block `(i, j)` of `C` (blocks of size `n`) is `Φ(E_ij)`.

use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{
    self, c64, eigh_unchecked, identity, matrix_unit, op_norm, psd_verdict_unchecked, random_gaussian, trace,
    ComplexMatrix, PsdVerdict, DEFAULT_RANK_TOL, DEFAULT_TOL,
};
use crate::rng::{derive_seed, SplitMix64};
use serde::{Deserialize, Serialize};

/// A linear map between square matrix algebras.
pub trait MatrixMap: Send + Sync {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;

    /// Action on an `m × m` input; shapes are not checked.
    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix;

    /// Number of Kraus operators, when the map is stored in Kraus form.
    fn kraus_rank(&self) -> Option<usize> {
        None
    }

    fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let m = self.input_dim();
        if x.shape() != (m, m) {
            return Err(Error::Shape(format!(
                "map expects {m}×{m} input, got {}×{}",
                x.nrows(),
                x.ncols()
            )));
        }
        Ok(self.apply_unchecked(x))
    }

    fn choi(&self) -> ChoiMatrix {
        let (m, n) = (self.input_dim(), self.output_dim());
        let mut c = ComplexMatrix::zeros(m * n, m * n);
        for i in 0..m {
            for j in 0..m {
                let block = self.apply_unchecked(&matrix_unit(m, i, j));
                c.view_mut((i * n, j * n), (n, n)).copy_from(&block);
            }
        }
        ChoiMatrix { m, n, matrix: c }
    }

    /// `‖Φ(I_m) − I_n‖`.
    fn unitality_defect(&self) -> f64 {
        let out = self.apply_unchecked(&identity(self.input_dim()));
        if out.nrows() != out.ncols() {
            return f64::INFINITY;
        }
        op_norm(&(out - identity(self.output_dim())))
    }
}

/// Map stored as a list of Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    m: usize,
    n: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausMap {
    pub fn new(m: usize, n: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("map dimensions must be positive".into()));
        }
        for (i, k) in kraus.iter().enumerate() {
            if k.shape() != (n, m) {
                return Err(Error::Shape(format!(
                    "Kraus operator {i} is {}×{}, expected {n}×{m}",
                    k.nrows(),
                    k.ncols()
                )));
            }
            linalg::ensure_finite(k)?;
        }
        Ok(KrausMap { m, n, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        KrausMap {
            m: dim,
            n: dim,
            kraus: vec![identity(dim)],
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unitality_defect() <= tol
    }
}

impl MatrixMap for KrausMap {
    fn input_dim(&self) -> usize {
        self.m
    }

    fn output_dim(&self) -> usize {
        self.n
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }

    fn kraus_rank(&self) -> Option<usize> {
        Some(self.kraus.len())
    }
}

/// Choi matrix of a map `M_m → M_n`; also usable directly as the map.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    m: usize,
    n: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(m: usize, n: usize, matrix: ComplexMatrix) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("map dimensions must be positive".into()));
        }
        if matrix.shape() != (m * n, m * n) {
            return Err(Error::Shape(format!(
                "Choi matrix must be {}×{}, got {}×{}",
                m * n,
                m * n,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        linalg::ensure_finite(&matrix)?;
        Ok(ChoiMatrix { m, n, matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Φ(E_ij)`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        self.matrix
            .view((i * self.n, j * self.n), (self.n, self.n))
            .into_owned()
    }

    /// PSD verdict on the Choi matrix: the exact complete-positivity test.
    pub fn psd_verdict(&self, tol: f64) -> PsdVerdict {
        if linalg::ensure_hermitian(&self.matrix, tol).is_err() {
            let v = psd_verdict_unchecked(&self.matrix, tol);
            return PsdVerdict { psd: false, ..v };
        }
        psd_verdict_unchecked(&self.matrix, tol)
    }
}

impl MatrixMap for ChoiMatrix {
    fn input_dim(&self) -> usize {
        self.m
    }

    fn output_dim(&self) -> usize {
        self.n
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..self.m {
            for j in 0..self.m {
                let xij = x[(i, j)];
                if xij != c64(0.0, 0.0) {
                    out += self.matrix.view((i * n, j * n), (n, n)) * xij;
                }
            }
        }
        out
    }

    fn choi(&self) -> ChoiMatrix {
        self.clone()
    }
}

/// Choi's reduction-type map `X ↦ 2·tr(X)·I_d − X`, optionally scaled by
/// `1/(2d − 1)` to make it unital. It is not completely positive, so it has
/// no Kraus form and is evaluated directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionMap {
    d: usize,
    normalize: bool,
}

impl ReductionMap {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn normalized(&self) -> bool {
        self.normalize
    }

    fn scale(&self) -> f64 {
        if self.normalize {
            1.0 / (2 * self.d - 1) as f64
        } else {
            1.0
        }
    }
}

pub fn reduction_map(d: usize, normalize: bool) -> Result<ReductionMap> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("reduction map needs d ≥ 2, got {d}")));
    }
    Ok(ReductionMap { d, normalize })
}

impl MatrixMap for ReductionMap {
    fn input_dim(&self) -> usize {
        self.d
    }

    fn output_dim(&self) -> usize {
        self.d
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let tr = trace(x);
        let out = identity(self.d) * (tr * 2.0) - x;
        out * c64(self.scale(), 0.0)
    }
}

/// Any of the supported map representations.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearMap {
    Kraus(KrausMap),
    Choi(ChoiMatrix),
    Reduction(ReductionMap),
}

impl LinearMap {
    fn inner(&self) -> &dyn MatrixMap {
        match self {
            LinearMap::Kraus(k) => k,
            LinearMap::Choi(c) => c,
            LinearMap::Reduction(r) => r,
        }
    }

    /// Kraus form. Reduction maps have none; Choi matrices must be PSD.
    pub fn to_kraus(&self, rank_tol: f64) -> Result<KrausMap> {
        match self {
            LinearMap::Kraus(k) => Ok(k.clone()),
            LinearMap::Choi(c) => choi_to_kraus(c, rank_tol),
            LinearMap::Reduction(r) => Err(Error::NoKrausForm(format!(
                "reduction map on M_{} is not completely positive",
                r.d
            ))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MapJson::from(self)).expect("map serializes")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        decode_map(value)?.try_into()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        decode_map(crate::json::parse_str(text, "map JSON")?)?.try_into()
    }
}

impl MatrixMap for LinearMap {
    fn input_dim(&self) -> usize {
        self.inner().input_dim()
    }

    fn output_dim(&self) -> usize {
        self.inner().output_dim()
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.inner().apply_unchecked(x)
    }

    fn kraus_rank(&self) -> Option<usize> {
        self.inner().kraus_rank()
    }

    fn choi(&self) -> ChoiMatrix {
        self.inner().choi()
    }
}

impl From<KrausMap> for LinearMap {
    fn from(k: KrausMap) -> Self {
        LinearMap::Kraus(k)
    }
}

impl From<ReductionMap> for LinearMap {
    fn from(r: ReductionMap) -> Self {
        LinearMap::Reduction(r)
    }
}

impl From<ChoiMatrix> for LinearMap {
    fn from(c: ChoiMatrix) -> Self {
        LinearMap::Choi(c)
    }
}

/// Wire format for maps.
#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum MapJson {
    Kraus {
        m: usize,
        n: usize,
        #[serde(with = "json::matrix_vec")]
        kraus: Vec<ComplexMatrix>,
    },
    Choi {
        m: usize,
        n: usize,
        #[serde(rename = "C", with = "json::matrix")]
        c: ComplexMatrix,
    },
    Reduction {
        d: usize,
        normalize: bool,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausFields {
    m: usize,
    n: usize,
    #[serde(with = "json::matrix_vec")]
    kraus: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChoiFields {
    m: usize,
    n: usize,
    #[serde(rename = "C", with = "json::matrix")]
    c: ComplexMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReductionFields {
    d: usize,
    normalize: bool,
}

// Dispatch on `kind` by hand: a tagged enum buffers its content and the
// error path to a bad field would be lost.
fn decode_map(value: serde_json::Value) -> Result<MapJson> {
    let what = "map JSON";
    let serde_json::Value::Object(mut fields) = value else {
        return Err(Error::InvalidInput(format!("{what}: expected an object")));
    };
    let kind = match fields.remove("kind") {
        Some(serde_json::Value::String(k)) => k,
        Some(_) => return Err(Error::InvalidInput(format!("{what}: field `kind` must be a string"))),
        None => return Err(Error::InvalidInput(format!("{what}: missing field `kind`"))),
    };
    let body = serde_json::Value::Object(fields);
    Ok(match kind.as_str() {
        "kraus" => {
            let f: KrausFields = json::parse_value(body, what)?;
            MapJson::Kraus {
                m: f.m,
                n: f.n,
                kraus: f.kraus,
            }
        }
        "choi" => {
            let f: ChoiFields = json::parse_value(body, what)?;
            MapJson::Choi { m: f.m, n: f.n, c: f.c }
        }
        "reduction" => {
            let f: ReductionFields = json::parse_value(body, what)?;
            MapJson::Reduction {
                d: f.d,
                normalize: f.normalize,
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "{what}: field `kind`: unknown variant `{other}`, expected `kraus`, `choi` or `reduction`"
            )))
        }
    })
}

impl From<&LinearMap> for MapJson {
    fn from(map: &LinearMap) -> Self {
        match map {
            LinearMap::Kraus(k) => MapJson::Kraus {
                m: k.m,
                n: k.n,
                kraus: k.kraus.clone(),
            },
            LinearMap::Choi(c) => MapJson::Choi {
                m: c.m,
                n: c.n,
                c: c.matrix.clone(),
            },
            LinearMap::Reduction(r) => MapJson::Reduction {
                d: r.d,
                normalize: r.normalize,
            },
        }
    }
}

impl TryFrom<MapJson> for LinearMap {
    type Error = Error;

    fn try_from(raw: MapJson) -> Result<Self> {
        Ok(match raw {
            MapJson::Kraus { m, n, kraus } => LinearMap::Kraus(KrausMap::new(m, n, kraus)?),
            MapJson::Choi { m, n, c } => LinearMap::Choi(ChoiMatrix::new(m, n, c)?),
            MapJson::Reduction { d, normalize } => LinearMap::Reduction(reduction_map(d, normalize)?),
        })
    }
}

pub fn kraus_to_choi(map: &KrausMap) -> ChoiMatrix {
    map.choi()
}

/// Kraus operators from the spectral decomposition of a PSD Choi matrix.
/// Eigenvalues at or below `rank_tol · λ_max` are dropped.
pub fn choi_to_kraus(choi: &ChoiMatrix, rank_tol: f64) -> Result<KrausMap> {
    let verdict = choi.psd_verdict(DEFAULT_TOL);
    if !verdict.psd {
        return Err(Error::NotPsd {
            min_eigenvalue: verdict.min_eigenvalue,
        });
    }
    let (m, n) = (choi.m, choi.n);
    let eig = eigh_unchecked(&choi.matrix);
    let cutoff = rank_tol * eig.max().max(0.0);
    let mut kraus = Vec::new();
    for (idx, &lambda) in eig.values.iter().enumerate().rev() {
        if lambda <= cutoff || lambda <= 0.0 {
            continue;
        }
        let root = lambda.sqrt();
        let v = eig.vectors.column(idx);
        kraus.push(ComplexMatrix::from_fn(n, m, |a, i| v[i * n + a] * root));
    }
    KrausMap::new(m, n, kraus)
}

/// `Φ_s = id_{M_s} ⊗ Φ`, acting blockwise on `s × s` block matrices.
pub struct Amplified<'a> {
    inner: &'a dyn MatrixMap,
    s: usize,
}

pub fn amplify(map: &dyn MatrixMap, s: usize) -> Result<Amplified<'_>> {
    if s == 0 {
        return Err(Error::InvalidInput("amplification order must be at least 1".into()));
    }
    Ok(Amplified { inner: map, s })
}

impl Amplified<'_> {
    pub fn order(&self) -> usize {
        self.s
    }
}

impl MatrixMap for Amplified<'_> {
    fn input_dim(&self) -> usize {
        self.s * self.inner.input_dim()
    }

    fn output_dim(&self) -> usize {
        self.s * self.inner.output_dim()
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let (m, n) = (self.inner.input_dim(), self.inner.output_dim());
        let mut out = ComplexMatrix::zeros(self.s * n, self.s * n);
        for p in 0..self.s {
            for q in 0..self.s {
                let block = x.view((p * m, q * m), (m, m)).into_owned();
                out.view_mut((p * n, q * n), (n, n))
                    .copy_from(&self.inner.apply_unchecked(&block));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityMode {
    /// Complete positivity via the Choi matrix; the order is ignored.
    ExactComplete,
    /// Random PSD Gram inputs to `Φ_k`; success is evidence, not proof.
    Sampled,
}

/// An input block matrix whose image under `Φ_k` is not PSD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityWitness {
    pub order: usize,
    #[serde(with = "json::matrix")]
    pub input: ComplexMatrix,
    pub min_eigenvalue: f64,
}

impl PositivityWitness {
    /// Recompute `λ_min(Φ_k(input))`.
    pub fn replay(&self, map: &dyn MatrixMap) -> Result<f64> {
        let amp = amplify(map, self.order)?;
        let out = amp.apply(&self.input)?;
        Ok(psd_verdict_unchecked(&out, DEFAULT_TOL).min_eigenvalue)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub order_tested: usize,
    pub mode: PositivityMode,
    pub holds: bool,
    pub trials_run: usize,
    pub witness: Option<PositivityWitness>,
}

/// `Σ_ij E_ij ⊗ E_ij` in `M_m(M_m)`: the input whose image under `Φ_m` is the Choi matrix.
pub fn choi_witness_input(m: usize) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            w[(i * m + i, j * m + j)] = c64(1.0, 0.0);
        }
    }
    w
}

fn failing(out: &ComplexMatrix, tol: f64) -> Option<f64> {
    let hermitian = linalg::ensure_hermitian(out, tol).is_ok();
    let v = psd_verdict_unchecked(out, tol);
    if !hermitian || !v.psd {
        Some(v.min_eigenvalue)
    } else {
        None
    }
}

/// Test `k`-positivity of `map`.
///
/// In sampled mode, `preloaded` inputs (each `km × km`, PSD) are tried first,
/// then `trials` random Gram matrices `G*G` whose row count cycles through
/// `1..=km` so low-rank inputs are well represented. The first failure stops
/// the search and is returned as the witness.
pub fn positivity_order_test(
    map: &dyn MatrixMap,
    k: usize,
    mode: PositivityMode,
    trials: usize,
    seed: u64,
    tol: f64,
    preloaded: &[ComplexMatrix],
) -> Result<PositivityVerdict> {
    if k == 0 {
        return Err(Error::InvalidInput("positivity order must be at least 1".into()));
    }
    let m = map.input_dim();
    match mode {
        PositivityMode::ExactComplete => {
            let choi = map.choi();
            let v = choi.psd_verdict(tol);
            let witness = (!v.psd).then(|| PositivityWitness {
                order: m,
                input: choi_witness_input(m),
                min_eigenvalue: v.min_eigenvalue,
            });
            Ok(PositivityVerdict {
                order_tested: m,
                mode,
                holds: v.psd,
                trials_run: 1,
                witness,
            })
        }
        PositivityMode::Sampled => {
            let amp = amplify(map, k)?;
            let dim = k * m;
            let mut run = 0;
            for input in preloaded {
                run += 1;
                let out = amp.apply(input)?;
                if let Some(min_eigenvalue) = failing(&out, tol) {
                    let witness = PositivityWitness {
                        order: k,
                        input: input.clone(),
                        min_eigenvalue,
                    };
                    return Ok(PositivityVerdict {
                        order_tested: k,
                        mode,
                        holds: false,
                        trials_run: run,
                        witness: Some(witness),
                    });
                }
            }
            let mut rng = SplitMix64::new(seed);
            for t in 0..trials {
                run += 1;
                let rows = 1 + t % dim;
                let g = random_gaussian(rows, dim, &mut rng);
                let input = g.adjoint() * g;
                let out = amp.apply_unchecked(&input);
                if let Some(min_eigenvalue) = failing(&out, tol) {
                    let witness = PositivityWitness {
                        order: k,
                        input,
                        min_eigenvalue,
                    };
                    return Ok(PositivityVerdict {
                        order_tested: k,
                        mode,
                        holds: false,
                        trials_run: run,
                        witness: Some(witness),
                    });
                }
            }
            Ok(PositivityVerdict {
                order_tested: k,
                mode,
                holds: true,
                trials_run: run,
                witness: None,
            })
        }
    }
}

/// Random unital CP map with `r` Kraus operators: draw Gaussian `G_i`, set
/// `S = Σ G_i G_i*` and `K_i = S^{-1/2} G_i`.
pub fn random_unital_cp(m: usize, n: usize, r: usize, seed: u64) -> Result<KrausMap> {
    if m == 0 || n == 0 || r == 0 {
        return Err(Error::Config("dimensions and Kraus rank must be positive".into()));
    }
    if r * m < n {
        return Err(Error::Config(format!(
            "Kraus rank {r} with input dimension {m} cannot be unital on M_{n}"
        )));
    }
    const ATTEMPTS: u64 = 8;
    for attempt in 0..ATTEMPTS {
        let mut rng = SplitMix64::new(if attempt == 0 { seed } else { derive_seed(seed, attempt) });
        let gs: Vec<ComplexMatrix> = (0..r).map(|_| random_gaussian(n, m, &mut rng)).collect();
        let mut s = ComplexMatrix::zeros(n, n);
        for g in &gs {
            s += g * g.adjoint();
        }
        let eig = eigh_unchecked(&s);
        if eig.min() <= 1e-12 * eig.max() {
            continue;
        }
        let inv_sqrt = eig.map_values(|v| 1.0 / v.sqrt());
        let kraus = gs.iter().map(|g| &inv_sqrt * g).collect();
        return KrausMap::new(m, n, kraus);
    }
    Err(Error::Domain(format!(
        "could not draw a nonsingular frame after {ATTEMPTS} attempts"
    )))
}

/// `Σ_j C_j* X_j C_j` for a family with `Σ_j C_j* C_j = I`.
pub fn conditional_expectation(c: &[ComplexMatrix], x: &[ComplexMatrix], tol: f64) -> Result<ComplexMatrix> {
    if c.len() != x.len() {
        return Err(Error::Shape(format!(
            "{} coefficients but {} operands",
            c.len(),
            x.len()
        )));
    }
    let first = c.first().ok_or_else(|| Error::InvalidInput("empty family".into()))?;
    let dim = first.ncols();
    let mut norm = ComplexMatrix::zeros(dim, dim);
    for (j, cj) in c.iter().enumerate() {
        if cj.ncols() != dim || x[j].shape() != (cj.nrows(), cj.nrows()) {
            return Err(Error::Shape(format!("entry {j} has inconsistent shape")));
        }
        norm += cj.adjoint() * cj;
    }
    let defect = op_norm(&(norm - identity(dim)));
    if defect > tol {
        return Err(Error::Domain(format!("Σ C_j* C_j differs from I by {defect:.3e}")));
    }
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (cj, xj) in c.iter().zip(x) {
        out += cj.adjoint() * xj * cj;
    }
    Ok(out)
}

/// `Σ_t μ_t A_t` for probability weights `μ_t`.
pub fn quadrature_field_expectation(fields: &[ComplexMatrix], weights: &[f64], tol: f64) -> Result<ComplexMatrix> {
    if fields.len() != weights.len() {
        return Err(Error::Shape(format!(
            "{} fields but {} weights",
            fields.len(),
            weights.len()
        )));
    }
    let first = fields
        .first()
        .ok_or_else(|| Error::InvalidInput("empty field".into()))?;
    if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
        return Err(Error::Domain("weights must be finite and nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::Domain(format!("weights sum to {total}, not 1")));
    }
    let mut out = ComplexMatrix::zeros(first.nrows(), first.ncols());
    for (t, (a, &w)) in fields.iter().zip(weights).enumerate() {
        if a.shape() != first.shape() {
            return Err(Error::Shape(format!(
                "field {t} has shape {:?}, expected {:?}",
                a.shape(),
                first.shape()
            )));
        }
        out += a * c64(w, 0.0);
    }
    Ok(out)
}

/// Exact CP verdict from the Choi matrix.
pub fn is_completely_positive(map: &dyn MatrixMap, tol: f64) -> PsdVerdict {
    map.choi().psd_verdict(tol)
}

/// Rank of the Choi matrix (the minimal number of Kraus operators for CP maps).
pub fn choi_rank(map: &dyn MatrixMap) -> usize {
    linalg::numerical_rank(map.choi().matrix(), DEFAULT_RANK_TOL).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{block2, from_real_diagonal, from_real_rows, is_psd, random_isometry};

    fn counterexample_pair() -> (ComplexMatrix, ComplexMatrix) {
        let a = from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
        let b = from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0], &[1.0, 0.0, 1.0]]);
        (a, b)
    }

    #[test]
    fn identity_map_applies_as_identity() {
        let mut rng = SplitMix64::new(1);
        let x = random_gaussian(3, 3, &mut rng);
        assert_eq!(KrausMap::identity(3).apply(&x).unwrap(), x);
        assert!(KrausMap::identity(3).apply(&identity(2)).is_err());
    }

    #[test]
    fn reduction_map_examples() {
        let raw = reduction_map(3, false).unwrap();
        assert_eq!(raw.apply(&identity(3)).unwrap(), identity(3) * c64(5.0, 0.0));
        let e11 = matrix_unit(3, 0, 0);
        assert_eq!(raw.apply(&e11).unwrap(), from_real_diagonal(&[1.0, 2.0, 2.0]));
        let norm = reduction_map(3, true).unwrap();
        assert!(op_norm(&(norm.apply(&identity(3)).unwrap() - identity(3))) < 1e-15);
        assert!(reduction_map(1, false).is_err());
        assert!(matches!(
            LinearMap::from(raw).to_kraus(1e-10),
            Err(Error::NoKrausForm(_))
        ));
    }

    #[test]
    fn identity_choi_is_rank_one() {
        let choi = kraus_to_choi(&KrausMap::identity(2));
        assert_eq!(choi.matrix(), &choi_witness_input(2));
        assert_eq!(linalg::numerical_rank(choi.matrix(), 1e-10).unwrap(), 1);
    }

    #[test]
    fn identity_choi_matrix_is_the_trace_map() {
        // C = I_{mn} means Φ(E_ij) = δ_ij I_n, i.e. Φ(X) = tr(X) I_n.
        let (m, n) = (2, 3);
        let choi = ChoiMatrix::new(m, n, identity(m * n)).unwrap();
        let kraus = choi_to_kraus(&choi, DEFAULT_RANK_TOL).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..5 {
            let x = random_gaussian(m, m, &mut rng);
            let want = identity(n) * trace(&x);
            assert!(op_norm(&(choi.apply(&x).unwrap() - &want)) < 1e-12);
            assert!(op_norm(&(kraus.apply(&x).unwrap() - &want)) < 1e-12);
        }
    }

    #[test]
    fn reduction_choi_is_indefinite() {
        let choi = reduction_map(3, false).unwrap().choi();
        let v = choi.psd_verdict(DEFAULT_TOL);
        assert!(!v.psd);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-12);
        assert!(matches!(choi_to_kraus(&choi, 1e-10), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn choi_round_trip_preserves_action() {
        for seed in 0..10 {
            let map = random_unital_cp(3, 2, 4, seed).unwrap();
            let back = choi_to_kraus(&kraus_to_choi(&map), DEFAULT_RANK_TOL).unwrap();
            let mut rng = SplitMix64::new(seed + 100);
            let x = random_gaussian(3, 3, &mut rng);
            let diff = map.apply(&x).unwrap() - back.apply(&x).unwrap();
            assert!(op_norm(&diff) <= 1e-10);
        }
    }

    #[test]
    fn amplification_examples() {
        let map = random_unital_cp(2, 2, 2, 9).unwrap();
        let mut rng = SplitMix64::new(2);
        let x = random_gaussian(2, 2, &mut rng);
        assert_eq!(amplify(&map, 1).unwrap().apply(&x).unwrap(), map.apply(&x).unwrap());

        let id = KrausMap::identity(2);
        let big = random_gaussian(6, 6, &mut rng);
        assert_eq!(amplify(&id, 3).unwrap().apply(&big).unwrap(), big);
        assert!(amplify(&id, 2).unwrap().apply(&big).is_err());
        assert!(amplify(&id, 0).is_err());
    }

    #[test]
    fn amplified_off_diagonal_product() {
        // Φ_2([[0,A],[A*,0]]·[[0,0],[0,B]]) = [[0, Φ(AB)], [0, 0]].
        let map = random_unital_cp(3, 2, 3, 4).unwrap();
        let mut rng = SplitMix64::new(6);
        let a = random_gaussian(3, 3, &mut rng);
        let b = random_gaussian(3, 3, &mut rng);
        let z3 = ComplexMatrix::zeros(3, 3);
        let left = block2(&z3, &a, &a.adjoint(), &z3).unwrap();
        let right = block2(&z3, &z3, &z3, &b).unwrap();
        let out = amplify(&map, 2).unwrap().apply(&(left * right)).unwrap();
        let z2 = ComplexMatrix::zeros(2, 2);
        let want = block2(&z2, &map.apply(&(&a * &b)).unwrap(), &z2, &z2).unwrap();
        assert!(op_norm(&(out - want)) < 1e-12);
    }

    #[test]
    fn identity_is_completely_positive() {
        for k in 1..4 {
            let v = positivity_order_test(
                &KrausMap::identity(2),
                k,
                PositivityMode::ExactComplete,
                0,
                0,
                1e-9,
                &[],
            )
            .unwrap();
            assert!(v.holds);
        }
    }

    #[test]
    fn reduction_map_fails_three_positivity_on_choi_witness() {
        let map = reduction_map(3, false).unwrap();
        let (a, b) = counterexample_pair();
        let row = {
            let mut r = ComplexMatrix::zeros(3, 9);
            r.view_mut((0, 0), (3, 3)).copy_from(&a);
            r.view_mut((0, 3), (3, 3)).copy_from(&b);
            r.view_mut((0, 6), (3, 3)).copy_from(&identity(3));
            r
        };
        let counterexample_block = row.adjoint() * row;
        // The block built from the counterexample pair is mapped to a PSD matrix.
        let v = positivity_order_test(
            &map,
            3,
            PositivityMode::Sampled,
            0,
            0,
            1e-9,
            std::slice::from_ref(&counterexample_block),
        )
        .unwrap();
        assert!(v.holds);
        // The maximally entangled input exposes the failure.
        let v = positivity_order_test(
            &map,
            3,
            PositivityMode::Sampled,
            0,
            0,
            1e-9,
            &[counterexample_block, choi_witness_input(3)],
        )
        .unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(w.min_eigenvalue < -1e-9);
        assert!(w.replay(&map).unwrap() < -1e-9);
    }

    #[test]
    fn reduction_map_is_two_positive_on_samples() {
        for normalize in [false, true] {
            let map = reduction_map(3, normalize).unwrap();
            let v = positivity_order_test(&map, 2, PositivityMode::Sampled, 2000, 17, 1e-9, &[]).unwrap();
            assert!(v.holds, "{normalize}");
            assert_eq!(v.trials_run, 2000);
        }
    }

    #[test]
    fn exact_mode_witness_replays() {
        let map = reduction_map(3, true).unwrap();
        let v = positivity_order_test(&map, 1, PositivityMode::ExactComplete, 0, 0, 1e-9, &[]).unwrap();
        assert!(!v.holds);
        assert!(v.witness.unwrap().replay(&map).unwrap() < -1e-9);
    }

    #[test]
    fn random_unital_cp_properties() {
        let trivial = random_unital_cp(1, 1, 1, 3).unwrap();
        assert!((trivial.kraus()[0][(0, 0)].norm() - 1.0).abs() < 1e-15);
        for (m, n, r) in [(2, 3, 2), (3, 3, 9), (4, 2, 1), (2, 4, 2)] {
            let map = random_unital_cp(m, n, r, 77).unwrap();
            let mut s = ComplexMatrix::zeros(n, n);
            for k in map.kraus() {
                s += k * k.adjoint();
            }
            assert!(op_norm(&(s - identity(n))) <= 1e-10);
            assert!(is_completely_positive(&map, 1e-9).psd);
            assert_eq!(map, random_unital_cp(m, n, r, 77).unwrap());
        }
        assert!(matches!(random_unital_cp(2, 3, 1, 0), Err(Error::Config(_))));
    }

    #[test]
    fn conditional_expectation_examples() {
        let mut rng = SplitMix64::new(12);
        let a = random_gaussian(3, 3, &mut rng);
        assert_eq!(
            conditional_expectation(&[identity(3)], std::slice::from_ref(&a), 1e-12).unwrap(),
            a
        );

        let n = 4;
        let xs: Vec<_> = (0..n).map(|_| random_gaussian(2, 2, &mut rng)).collect();
        let cs = vec![identity(2) * c64(1.0 / (n as f64).sqrt(), 0.0); n];
        let mean = xs.iter().fold(ComplexMatrix::zeros(2, 2), |acc, x| acc + x) * c64(1.0 / n as f64, 0.0);
        assert!(op_norm(&(conditional_expectation(&cs, &xs, 1e-12).unwrap() - mean)) < 1e-14);

        let q = random_isometry(6, 2, &mut rng);
        let cs: Vec<_> = (0..3).map(|j| q.view((2 * j, 0), (2, 2)).into_owned()).collect();
        let ones = vec![identity(2); 3];
        let out = conditional_expectation(&cs, &ones, 1e-10).unwrap();
        assert!(op_norm(&(out - identity(2))) < 1e-12);

        let bad = vec![identity(2), identity(2)];
        assert!(matches!(
            conditional_expectation(&bad, &ones[..2], 1e-10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn quadrature_examples() {
        let mut rng = SplitMix64::new(13);
        let a = random_gaussian(2, 2, &mut rng);
        let b = random_gaussian(2, 2, &mut rng);
        assert_eq!(
            quadrature_field_expectation(std::slice::from_ref(&a), &[1.0], 1e-12).unwrap(),
            a
        );
        let mid = quadrature_field_expectation(&[a.clone(), b.clone()], &[0.5, 0.5], 1e-12).unwrap();
        assert!(op_norm(&(mid - (&a + &b) * c64(0.5, 0.0))) < 1e-15);
        let constant =
            quadrature_field_expectation(&[a.clone(), a.clone(), a.clone()], &[0.2, 0.3, 0.5], 1e-12).unwrap();
        assert!(op_norm(&(constant - &a)) < 1e-14);
        assert!(matches!(
            quadrature_field_expectation(&[a.clone(), b], &[0.5, 0.6], 1e-9),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn map_json_round_trip() {
        let maps = vec![
            LinearMap::from(random_unital_cp(2, 3, 2, 1).unwrap()),
            LinearMap::from(reduction_map(3, true).unwrap()),
            LinearMap::from(random_unital_cp(2, 2, 1, 1).unwrap().choi()),
        ];
        for map in maps {
            let text = map.to_json().to_string();
            assert_eq!(LinearMap::from_json_str(&text).unwrap(), map);
        }
        let err = LinearMap::from_json_str(r#"{"kind":"kraus","m":2,"n":2,"kraus":[{"rows":2,"cols":3,"data":[]}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("data"), "{err}");
        assert!(LinearMap::from_json_str(r#"{"kind":"unitary"}"#).is_err());
    }

    #[test]
    fn kadison_holds_for_cp_unital() {
        let mut rng = SplitMix64::new(21);
        for seed in 0..30 {
            let map = random_unital_cp(3, 2, 1 + (seed as usize % 6), seed).unwrap();
            let a = random_gaussian(3, 3, &mut rng);
            let defect =
                map.apply(&(a.adjoint() * &a)).unwrap() - map.apply(&a.adjoint()).unwrap() * map.apply(&a).unwrap();
            assert!(is_psd(&defect, 1e-9).unwrap().psd);
        }
    }
}
