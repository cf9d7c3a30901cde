//! Stinespring dilations `Φ(X) = V* π(X) V` with `π(X) = X ⊗ I_r`.
//!
//! The dilation space is `ℂ^m ⊗ ℂ^r` (system first, multiplicity second):
//! index `(a, i)` sits at `a·r + i`. From Kraus operators `K_i` the isometry
//! is `V = Σ_i K_i* ⊗ e_i`, i.e. `V[(a, i), b] = conj(K_i[b, a])`.

use crate::cpmaps::{is_completely_positive, KrausMap, MatrixMap};
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{identity, kron, op_norm, random_gaussian, ComplexMatrix, DEFAULT_RANK_TOL, DEFAULT_TOL};
use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StinespringDilation {
    m: usize,
    n: usize,
    r: usize,
    #[serde(rename = "V", with = "json::matrix")]
    v: ComplexMatrix,
    minimal: bool,
}

impl StinespringDilation {
    /// Assemble a dilation from parts; only shapes are validated.
    pub fn from_parts(m: usize, n: usize, r: usize, v: ComplexMatrix, minimal: bool) -> Result<Self> {
        if v.shape() != (m * r, n) {
            return Err(Error::Shape(format!(
                "V must be {}×{n}, got {}×{}",
                m * r,
                v.nrows(),
                v.ncols()
            )));
        }
        Ok(StinespringDilation { m, n, r, v, minimal })
    }

    pub fn input_dim(&self) -> usize {
        self.m
    }

    pub fn output_dim(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self) -> usize {
        self.r
    }

    /// `dim 𝒦 = m · r`.
    pub fn dimension(&self) -> usize {
        self.m * self.r
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// `π(X) = X ⊗ I_r`.
    pub fn represent(&self, x: &ComplexMatrix) -> ComplexMatrix {
        kron(x, &identity(self.r))
    }

    /// `V* π(X) V`.
    pub fn compress(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.v.adjoint() * self.represent(x) * &self.v
    }

    pub fn isometry_defect(&self) -> f64 {
        op_norm(&(self.v.adjoint() * &self.v - identity(self.n)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("dilation serializes")
    }
}

impl MatrixMap for StinespringDilation {
    fn input_dim(&self) -> usize {
        self.m
    }

    fn output_dim(&self) -> usize {
        self.n
    }

    fn apply_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.compress(x)
    }
}

/// Dilation of a unital CP map given in Kraus form.
pub fn build_stinespring(map: &KrausMap) -> Result<StinespringDilation> {
    let (m, n) = (map.input_dim(), map.output_dim());
    let defect = map.unitality_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::Domain(format!("map is not unital: ‖Φ(I) − I‖ = {defect:.3e}")));
    }
    let cp = is_completely_positive(map, DEFAULT_TOL);
    if !cp.psd {
        return Err(Error::Domain(format!(
            "map is not completely positive: λ_min(Choi) = {:.3e}",
            cp.min_eigenvalue
        )));
    }
    let r = map.kraus().len();
    if r == 0 {
        return Err(Error::Domain("map has no Kraus operators".into()));
    }
    let mut v = ComplexMatrix::zeros(m * r, n);
    for (i, k) in map.kraus().iter().enumerate() {
        for a in 0..m {
            for b in 0..n {
                v[(a * r + i, b)] = k[(b, a)].conj();
            }
        }
    }
    Ok(StinespringDilation {
        m,
        n,
        r,
        v,
        minimal: false,
    })
}

/// Restrict to `span{π(E_ij) V e_l}`.
///
/// Because `π(M_m) = M_m ⊗ I`, that span is `ℂ^m ⊗ W` with `W ⊆ ℂ^r` spanned
/// by the multiplicity components `w_{a,b}[i] = V[(a,i), b]`. An orthonormal
/// basis `Q` of `W` (numerical rank with cutoff `rank_tol · s_1`) gives the
/// new isometry `(I_m ⊗ Q*) V` with multiplicity `dim W`.
pub fn minimize_stinespring(d: &StinespringDilation, rank_tol: f64) -> Result<StinespringDilation> {
    let (m, n, r) = (d.m, d.n, d.r);
    let mut components = ComplexMatrix::zeros(r, m * n);
    for a in 0..m {
        for b in 0..n {
            for i in 0..r {
                components[(i, a * n + b)] = d.v[(a * r + i, b)];
            }
        }
    }
    let svd = components.svd(true, false);
    let u = svd.u.expect("requested U");
    let s = &svd.singular_values;
    let s_max = s.iter().copied().fold(0.0, f64::max);
    let mut keep: Vec<usize> = (0..s.len())
        .filter(|&k| s[k] > rank_tol * s_max && s[k] > 0.0)
        .collect();
    keep.sort_by(|&x, &y| s[y].total_cmp(&s[x]));
    let new_r = keep.len().max(1);
    let mut q = ComplexMatrix::zeros(r, new_r);
    for (col, &k) in keep.iter().enumerate() {
        q.set_column(col, &u.column(k));
    }
    if keep.is_empty() {
        // Only possible for a zero V, which is not an isometry; keep one direction.
        q[(0, 0)] = crate::linalg::c64(1.0, 0.0);
    }
    if new_r >= r {
        return Ok(StinespringDilation {
            minimal: true,
            ..d.clone()
        });
    }
    let projector = kron(&identity(m), &q.adjoint());
    let v = projector * &d.v;
    Ok(StinespringDilation {
        m,
        n,
        r: new_r,
        v,
        minimal: true,
    })
}

/// Largest of: reconstruction error over random inputs, isometry defect and
/// the `*`-homomorphism defects of `π` on random pairs.
pub fn verify_stinespring(d: &StinespringDilation, map: &dyn MatrixMap, trials: usize, seed: u64) -> Result<f64> {
    if map.input_dim() != d.m || map.output_dim() != d.n {
        return Err(Error::Shape(format!(
            "dilation is for M_{} → M_{} but the map is M_{} → M_{}",
            d.m,
            d.n,
            map.input_dim(),
            map.output_dim()
        )));
    }
    let mut worst = d.isometry_defect();
    let id = d.represent(&identity(d.m));
    worst = worst.max(op_norm(&(id - identity(d.dimension()))));
    let mut rng = SplitMix64::new(seed);
    for _ in 0..trials {
        let x = random_gaussian(d.m, d.m, &mut rng);
        let y = random_gaussian(d.m, d.m, &mut rng);
        worst = worst.max(op_norm(&(d.compress(&x) - map.apply(&x)?)));
        let (px, py) = (d.represent(&x), d.represent(&y));
        worst = worst.max(op_norm(&(d.represent(&(&x * &y)) - &px * &py)));
        worst = worst.max(op_norm(&(d.represent(&x.adjoint()) - px.adjoint())));
    }
    Ok(worst)
}

/// Build and minimize in one step.
pub fn minimal_stinespring(map: &KrausMap) -> Result<StinespringDilation> {
    minimize_stinespring(&build_stinespring(map)?, DEFAULT_RANK_TOL)
}
