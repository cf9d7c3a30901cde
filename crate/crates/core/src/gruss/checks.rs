use super::report::{slack_ok, CheckId, Dims, InequalityReport, InputDigest, DEFAULT_SLACK_TOL, OPERATOR_ORDER};
use crate::cpmaps::{
    conditional_expectation, is_completely_positive, positivity_order_test, quadrature_field_expectation, MatrixMap,
    PositivityMode, PositivityVerdict,
};
use crate::error::{Error, Result};
use crate::linalg::{
    abs, block2, eigh_unchecked, ensure_hermitian, hadamard, identity, kron, op_norm, psd_verdict_unchecked,
    singular_values, ComplexMatrix, PsdVerdict,
};
use crate::norms::{gauge_norm, identity_norm, SymmetricGauge};
use crate::orbit::{ball_membership, orbit_diameter, BallSpec, DiameterOptions};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Relative slack tolerance for verdicts.
    pub tol: f64,
    /// Tolerance for positivity, unitality and membership preconditions.
    pub precondition_tol: f64,
    /// Algebra dimension `k`; `None` means `m²`.
    pub algebra_dim: Option<usize>,
    /// Positivity order required in the `η`-positive variant.
    pub eta: usize,
    /// Random Gram inputs drawn for the sampled `η`-positivity test.
    pub eta_trials: usize,
    /// Recorded in reports; also seeds the `η`-positivity sampler.
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol: DEFAULT_SLACK_TOL,
            precondition_tol: 1e-9,
            algebra_dim: None,
            eta: 12,
            eta_trials: 16,
            seed: 0,
        }
    }
}

/// `Φ(X*Y) − Φ(X*)Φ(Y)`.
fn defect(map: &dyn MatrixMap, x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let xs = x.adjoint();
    map.apply_unchecked(&(&xs * y)) - map.apply_unchecked(&xs) * map.apply_unchecked(y)
}

fn ball_json(ball: &BallSpec) -> Value {
    json!({"m": [ball.lower.re, ball.lower.im], "M": [ball.upper.re, ball.upper.im]})
}

/// Report for `|D| ⪯ c·I`: the verdict is the PSD test of `cI − |D|`, and
/// `lhs = ‖D‖`, `rhs = c` carry the equivalent scalar form.
fn operator_report(check_id: CheckId, d: &ComplexMatrix, c: f64, tol: f64) -> InequalityReport {
    let n = d.nrows();
    let residual = identity(n) * crate::linalg::c64(c, 0.0) - abs(d);
    let residual_min = eigh_unchecked(&residual).min();
    let mut report = InequalityReport::new(check_id, OPERATOR_ORDER, op_norm(d), c, tol);
    let scalar = report.satisfied;
    report.satisfied = slack_ok(residual_min, c, tol);
    report
        .detail("residual_min_eigenvalue", residual_min)
        .detail("scalar_satisfied", scalar)
        .detail("verdicts_agree", scalar == slack_ok(residual_min, c, tol))
}

fn ensure_in_ball(a: &ComplexMatrix, ball: &BallSpec, tol: f64, what: &str) -> Result<()> {
    let r = ball_membership(a, ball, tol)?;
    if r.inside {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} lies outside its ball (defect {:.3e})",
            r.defect
        )))
    }
}

/// `Φ(A*A) − Φ(A*)Φ(A)` and its PSD verdict.
#[derive(Debug, Clone)]
pub struct KadisonDefect {
    pub defect: ComplexMatrix,
    pub verdict: PsdVerdict,
    /// `1 + ‖Φ(A*A)‖`, the scale for the eigenvalue tolerance.
    pub scale: f64,
}

/// `2n × 2n` block matrix of defects for the pair `(A, B)`.
#[derive(Debug, Clone)]
pub struct BlockGram {
    pub matrix: ComplexMatrix,
    pub verdict: PsdVerdict,
}

/// A map with one or two operands, validated once and reused across gauges.
pub struct GrussInstance<'a> {
    map: &'a dyn MatrixMap,
    a: ComplexMatrix,
    b: ComplexMatrix,
    d_a: f64,
    d_b: f64,
    cp: PsdVerdict,
    digest: String,
    opts: CheckOptions,
}

impl<'a> GrussInstance<'a> {
    pub fn new(map: &'a dyn MatrixMap, a: &ComplexMatrix, b: &ComplexMatrix, opts: &CheckOptions) -> Result<Self> {
        let m = map.input_dim();
        for (x, name) in [(a, "A"), (b, "B")] {
            if x.shape() != (m, m) {
                return Err(Error::Shape(format!(
                    "{name} must be {m}×{m}, got {}×{}",
                    x.nrows(),
                    x.ncols()
                )));
            }
            crate::linalg::ensure_finite(x)?;
        }
        let unital = map.unitality_defect();
        if unital > opts.precondition_tol {
            return Err(Error::Precondition(format!(
                "map is not unital (‖Φ(I) − I‖ = {unital:.3e})"
            )));
        }
        let diam = DiameterOptions::default();
        let d_a = orbit_diameter(a, &diam)?.d;
        let d_b = if a == b { d_a } else { orbit_diameter(b, &diam)?.d };
        let cp = is_completely_positive(map, opts.precondition_tol);
        let digest = InputDigest::new("gruss")
            .matrix(map.choi().matrix())
            .matrix(a)
            .matrix(b)
            .finish();
        Ok(GrussInstance {
            map,
            a: a.clone(),
            b: b.clone(),
            d_a,
            d_b,
            cp,
            digest,
            opts: *opts,
        })
    }

    pub fn single(map: &'a dyn MatrixMap, a: &ComplexMatrix, opts: &CheckOptions) -> Result<Self> {
        Self::new(map, a, a, opts)
    }

    pub fn d_a(&self) -> f64 {
        self.d_a
    }

    pub fn d_b(&self) -> f64 {
        self.d_b
    }

    pub fn cp_verdict(&self) -> PsdVerdict {
        self.cp
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn dims(&self) -> Dims {
        let m = self.map.input_dim();
        Dims {
            m,
            n: self.map.output_dim(),
            k: self.algebra_dim(),
            rank: self.map.kraus_rank(),
        }
    }

    fn algebra_dim(&self) -> usize {
        let m = self.map.input_dim();
        self.opts.algebra_dim.unwrap_or(m * m)
    }

    fn finish(&self, report: InequalityReport) -> InequalityReport {
        report
            .with_dims(self.dims())
            .with_digest(self.digest.clone())
            .with_seed(self.opts.seed)
    }

    fn require_cp(&self) -> Result<()> {
        if self.cp.psd {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "complete positivity failed: Choi matrix has λ_min = {:.6e}",
                self.cp.min_eigenvalue
            )))
        }
    }

    pub fn kadison(&self) -> Result<KadisonDefect> {
        self.require_cp()?;
        let aa = self.map.apply_unchecked(&(self.a.adjoint() * &self.a));
        let defect = defect(self.map, &self.a, &self.a);
        let verdict = psd_verdict_unchecked(&defect, self.opts.precondition_tol);
        Ok(KadisonDefect {
            defect,
            verdict,
            scale: 1.0 + op_norm(&aa),
        })
    }

    /// Kadison verdict as a report with `lhs = max(0, −λ_min)` and `rhs = 0`.
    pub fn kadison_report(&self) -> Result<InequalityReport> {
        let k = self.kadison()?;
        let lhs = (-k.verdict.min_eigenvalue).max(0.0);
        let report = InequalityReport::new(CheckId::Kadison, OPERATOR_ORDER, lhs, 0.0, self.opts.tol)
            .detail("min_eigenvalue", k.verdict.min_eigenvalue)
            .detail("scale", k.scale);
        Ok(self.finish(report))
    }

    pub fn block_gram(&self) -> BlockGram {
        let (a, b) = (&self.a, &self.b);
        let matrix = block2(
            &defect(self.map, a, a),
            &defect(self.map, a, b),
            &defect(self.map, b, a),
            &defect(self.map, b, b),
        )
        .expect("blocks share a shape");
        let verdict = psd_verdict_unchecked(&matrix, self.opts.precondition_tol);
        BlockGram { matrix, verdict }
    }

    pub fn block_gram_report(&self, check_id: CheckId) -> InequalityReport {
        let g = self.block_gram();
        let lhs = (-g.verdict.min_eigenvalue).max(0.0);
        let report = InequalityReport::new(check_id, OPERATOR_ORDER, lhs, 0.0, self.opts.tol)
            .detail("min_eigenvalue", g.verdict.min_eigenvalue);
        self.finish(report)
    }

    /// `|||Φ(A*A) − Φ(A*)Φ(A)|||^{1/2} ≤ ½ √|||I_{kn}||| · d_A`.
    pub fn variance_bound(&self, gauge: &dyn SymmetricGauge) -> Result<InequalityReport> {
        let k = self.kadison()?;
        let n = self.map.output_dim();
        let id_kn = identity_norm(gauge, self.algebra_dim() * n);
        // The square root would lift round-off of order ε to order √ε, so
        // singular values at the round-off floor count as zero.
        let floor = 16.0 * f64::EPSILON * (n as f64) * k.scale;
        let s: Vec<f64> = singular_values(&k.defect)?
            .values()
            .iter()
            .map(|&v| if v <= floor { 0.0 } else { v })
            .collect();
        let lhs = gauge.evaluate(&s).sqrt();
        let rhs = 0.5 * id_kn.sqrt() * self.d_a;
        let report = InequalityReport::new(CheckId::VarianceBound, gauge.label(), lhs, rhs, self.opts.tol)
            .detail("d_A", self.d_a)
            .detail("identity_norm_kn", id_kn)
            .detail("kadison_min_eigenvalue", k.verdict.min_eigenvalue)
            .detail("kadison_scale", k.scale);
        Ok(self.finish(report))
    }

    /// Sampled `η`-positivity evidence, with `η = opts.eta`.
    pub fn eta_evidence(&self) -> Result<PositivityVerdict> {
        positivity_order_test(
            self.map,
            self.opts.eta,
            PositivityMode::Sampled,
            self.opts.eta_trials,
            self.opts.seed,
            self.opts.precondition_tol,
            &[],
        )
    }

    fn norm_sides(&self, gauge: &dyn SymmetricGauge) -> Result<(f64, f64, f64, f64)> {
        let n = self.map.output_dim();
        let id_n = identity_norm(gauge, n);
        let id_kn = identity_norm(gauge, self.algebra_dim() * n);
        let lhs = gauge_norm(gauge, &defect(self.map, &self.a.adjoint(), &self.b))?;
        let rhs = 0.25 * id_n * id_kn * self.d_a * self.d_b;
        Ok((lhs, rhs, id_n, id_kn))
    }

    /// `|||Φ(AB) − Φ(A)Φ(B)||| ≤ ¼ |||I_n||| |||I_{kn}||| d_A d_B` for completely positive `Φ`.
    pub fn gruss_norm(&self, gauge: &dyn SymmetricGauge) -> Result<InequalityReport> {
        self.require_cp()?;
        let (lhs, rhs, id_n, id_kn) = self.norm_sides(gauge)?;
        let report = InequalityReport::new(CheckId::GrussNorm, gauge.label(), lhs, rhs, self.opts.tol)
            .detail("d_A", self.d_a)
            .detail("d_B", self.d_b)
            .detail("identity_norm_n", id_n)
            .detail("identity_norm_kn", id_kn)
            .detail("positivity_mode", "exact_complete");
        Ok(self.finish(report))
    }

    /// The same bound with only sampled `η`-positivity evidence. Orders
    /// below 12 are labelled exploratory and never count as violations.
    pub fn gruss_norm_eta(&self, gauge: &dyn SymmetricGauge, evidence: &PositivityVerdict) -> Result<InequalityReport> {
        if !evidence.holds {
            let min = evidence.witness.as_ref().map_or(f64::NAN, |w| w.min_eigenvalue);
            return Err(Error::Domain(format!(
                "sampled {}-positivity failed (λ_min = {min:.6e})",
                evidence.order_tested
            )));
        }
        let (lhs, rhs, id_n, id_kn) = self.norm_sides(gauge)?;
        let mut report = InequalityReport::new(CheckId::GrussNormEta, gauge.label(), lhs, rhs, self.opts.tol)
            .detail("d_A", self.d_a)
            .detail("d_B", self.d_b)
            .detail("identity_norm_n", id_n)
            .detail("identity_norm_kn", id_kn)
            .detail("positivity_mode", "sampled")
            .detail("eta", evidence.order_tested)
            .detail("eta_trials_run", evidence.trials_run);
        if evidence.order_tested < 12 {
            report = report.detail("exploratory", true);
        }
        Ok(self.finish(report))
    }

    /// `|Φ(AB) − Φ(A)Φ(B)| ⪯ ¼ |M₁ − m₁| |M₂ − m₂| I` for `A`, `B` in the given balls.
    pub fn gruss_operator(&self, ball_a: &BallSpec, ball_b: &BallSpec) -> Result<InequalityReport> {
        self.require_cp()?;
        ensure_in_ball(&self.a, ball_a, self.opts.precondition_tol, "A")?;
        ensure_in_ball(&self.b, ball_b, self.opts.precondition_tol, "B")?;
        let d = defect(self.map, &self.a.adjoint(), &self.b);
        let c = 0.25 * ball_a.width() * ball_b.width();
        let report = operator_report(CheckId::GrussOperator, &d, c, self.opts.tol)
            .detail("ball_A", ball_json(ball_a))
            .detail("ball_B", ball_json(ball_b));
        Ok(self.finish(report))
    }

    /// `Φ(A*A) − Φ(A)*Φ(A) ⪯ ¼ |M − m|² I` for `A` in the ball.
    pub fn ball_variance(&self, ball: &BallSpec) -> Result<InequalityReport> {
        let k = self.kadison()?;
        ensure_in_ball(&self.a, ball, self.opts.precondition_tol, "A")?;
        let c = 0.25 * ball.width() * ball.width();
        let n = k.defect.nrows();
        let residual = identity(n) * crate::linalg::c64(c, 0.0) - &k.defect;
        let residual_min = eigh_unchecked(&residual).min();
        let lhs = eigh_unchecked(&k.defect).max().max(0.0);
        let mut report = InequalityReport::new(CheckId::BallVariance, OPERATOR_ORDER, lhs, c, self.opts.tol);
        report.satisfied = slack_ok(residual_min, c, self.opts.tol);
        let report = report
            .detail("residual_min_eigenvalue", residual_min)
            .detail("ball", ball_json(ball));
        Ok(self.finish(report))
    }
}

pub fn kadison_defect(map: &dyn MatrixMap, a: &ComplexMatrix, opts: &CheckOptions) -> Result<KadisonDefect> {
    GrussInstance::single(map, a, opts)?.kadison()
}

pub fn check_variance_bound(
    map: &dyn MatrixMap,
    a: &ComplexMatrix,
    gauge: &dyn SymmetricGauge,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    GrussInstance::single(map, a, opts)?.variance_bound(gauge)
}

/// With `eta_mode`, complete positivity is replaced by sampled
/// `opts.eta`-positivity evidence.
pub fn check_gruss_norm(
    map: &dyn MatrixMap,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    gauge: &dyn SymmetricGauge,
    eta_mode: bool,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let inst = GrussInstance::new(map, a, b, opts)?;
    if eta_mode {
        let evidence = inst.eta_evidence()?;
        inst.gruss_norm_eta(gauge, &evidence)
    } else {
        inst.gruss_norm(gauge)
    }
}

pub fn check_gruss_operator(
    map: &dyn MatrixMap,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    ball_a: &BallSpec,
    ball_b: &BallSpec,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    GrussInstance::new(map, a, b, opts)?.gruss_operator(ball_a, ball_b)
}

pub fn check_ball_variance(
    map: &dyn MatrixMap,
    a: &ComplexMatrix,
    ball: &BallSpec,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    GrussInstance::single(map, a, opts)?.ball_variance(ball)
}

/// Block matrix of defects and its PSD verdict. No positivity is assumed of `map`.
pub fn block_gram(map: &dyn MatrixMap, a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<BlockGram> {
    let m = map.input_dim();
    if a.shape() != (m, m) || b.shape() != (m, m) {
        return Err(Error::Shape(format!("block_gram needs {m}×{m} operands")));
    }
    let matrix = block2(
        &defect(map, a, a),
        &defect(map, a, b),
        &defect(map, b, a),
        &defect(map, b, b),
    )?;
    let verdict = psd_verdict_unchecked(&matrix, tol);
    Ok(BlockGram { matrix, verdict })
}

/// `V: ℂⁿ → ℂⁿ ⊗ ℂⁿ`, `V e_i = e_i ⊗ e_i`, so that `V*(X ⊗ Y)V = X ∘ Y`.
/// The basis vector `e_i ⊗ e_j` sits at index `i·n + j`.
pub fn selective_isometry(n: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(n * n, n);
    for i in 0..n {
        v[(i * n + i, i)] = crate::linalg::c64(1.0, 0.0);
    }
    v
}

/// `X ∘ Y` computed as `V*(X ⊗ Y)V`.
pub fn hadamard_via_isometry(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = x.nrows();
    if x.shape() != (n, n) || y.shape() != (n, n) {
        return Err(Error::Shape("Hadamard operands must be square of equal size".into()));
    }
    let v = selective_isometry(n);
    Ok(v.adjoint() * kron(x, y) * v)
}

fn exact_hadamard(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let via = hadamard_via_isometry(x, y)?;
    let direct = hadamard(x, y)?;
    if via != direct {
        return Err(Error::Domain("V*(X⊗Y)V differs from X∘Y".into()));
    }
    Ok(via)
}

/// `|(A₁B₁)∘(A₂B₂) − (A₁∘A₂)(B₁∘B₂)| ⪯ ¼ |M₁ − m₁| |M₂ − m₂| I`
/// with `A₁ ⊗ A₂` and `B₁ ⊗ B₂` in the two balls.
pub fn check_hadamard_gruss(
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
    b1: &ComplexMatrix,
    b2: &ComplexMatrix,
    ball_1: &BallSpec,
    ball_2: &BallSpec,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let n = a1.nrows();
    for (x, name) in [(a1, "A1"), (a2, "A2"), (b1, "B1"), (b2, "B2")] {
        if x.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "{name} must be {n}×{n}, got {}×{}",
                x.nrows(),
                x.ncols()
            )));
        }
        crate::linalg::ensure_finite(x)?;
    }
    ensure_in_ball(&kron(a1, a2), ball_1, opts.precondition_tol, "A1 ⊗ A2")?;
    ensure_in_ball(&kron(b1, b2), ball_2, opts.precondition_tol, "B1 ⊗ B2")?;
    let product = exact_hadamard(&(a1 * b1), &(a2 * b2))?;
    let d = product - exact_hadamard(a1, a2)? * exact_hadamard(b1, b2)?;
    let c = 0.25 * ball_1.width() * ball_2.width();
    let digest = InputDigest::new("hadamard")
        .matrices(&[a1.clone(), a2.clone(), b1.clone(), b2.clone()])
        .finish();
    Ok(operator_report(CheckId::HadamardGruss, &d, c, opts.tol)
        .detail("ball_1", ball_json(ball_1))
        .detail("ball_2", ball_json(ball_2))
        .with_dims(Dims {
            m: n * n,
            n,
            k: n * n * n * n,
            rank: Some(1),
        })
        .with_digest(digest)
        .with_seed(opts.seed))
}

/// Real intervals `[lower_a, upper_a]` and `[lower_b, upper_b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower_a: f64,
    pub upper_a: f64,
    pub lower_b: f64,
    pub upper_b: f64,
}

impl Bounds {
    pub fn new(lower_a: f64, upper_a: f64, lower_b: f64, upper_b: f64) -> Self {
        Bounds {
            lower_a,
            upper_a,
            lower_b,
            upper_b,
        }
    }

    pub fn widths(&self) -> (f64, f64) {
        (self.upper_a - self.lower_a, self.upper_b - self.lower_b)
    }

    fn to_json(self) -> Value {
        json!([self.lower_a, self.upper_a, self.lower_b, self.upper_b])
    }
}

fn ensure_spectrum_within(x: &ComplexMatrix, lo: f64, hi: f64, tol: f64, what: &str) -> Result<()> {
    ensure_hermitian(x, tol).map_err(|e| Error::Precondition(format!("{what}: {e}")))?;
    let eig = eigh_unchecked(x);
    let slack = tol * (1.0 + lo.abs().max(hi.abs()));
    if eig.min() < lo - slack || eig.max() > hi + slack {
        return Err(Error::Precondition(format!(
            "{what} has spectrum [{:.6e}, {:.6e}] outside [{lo}, {hi}]",
            eig.min(),
            eig.max()
        )));
    }
    Ok(())
}

/// `|Σ C_j* A_j B_j C_j − (Σ C_j* A_j C_j)(Σ C_j* B_j C_j)| ⪯ ¼ (M₁ − m₁)(M₂ − m₂) I`
/// for `Σ C_j* C_j = I` and Hermitian `A_j`, `B_j` with spectra in the bounds.
pub fn check_discrete_gruss(
    c: &[ComplexMatrix],
    a: &[ComplexMatrix],
    b: &[ComplexMatrix],
    bounds: Bounds,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    if c.len() != a.len() || c.len() != b.len() {
        return Err(Error::Shape(format!(
            "{} coefficients, {} A terms, {} B terms",
            c.len(),
            a.len(),
            b.len()
        )));
    }
    let first = c.first().ok_or_else(|| Error::InvalidInput("empty family".into()))?;
    let dim = first.ncols();
    let mut frame = ComplexMatrix::zeros(dim, dim);
    for (j, cj) in c.iter().enumerate() {
        if cj.ncols() != dim || a[j].shape() != (cj.nrows(), cj.nrows()) || b[j].shape() != a[j].shape() {
            return Err(Error::Shape(format!("entry {j} has inconsistent shape")));
        }
        frame += cj.adjoint() * cj;
    }
    let frame_defect = op_norm(&(frame - identity(dim)));
    if frame_defect > opts.precondition_tol {
        return Err(Error::Precondition(format!(
            "Σ C_j* C_j differs from I by {frame_defect:.3e}"
        )));
    }
    for j in 0..c.len() {
        ensure_spectrum_within(
            &a[j],
            bounds.lower_a,
            bounds.upper_a,
            opts.precondition_tol,
            &format!("A[{j}]"),
        )?;
        ensure_spectrum_within(
            &b[j],
            bounds.lower_b,
            bounds.upper_b,
            opts.precondition_tol,
            &format!("B[{j}]"),
        )?;
    }
    let products: Vec<ComplexMatrix> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    let tol = opts.precondition_tol;
    let d = conditional_expectation(c, &products, tol)?
        - conditional_expectation(c, a, tol)? * conditional_expectation(c, b, tol)?;
    let (wa, wb) = bounds.widths();
    let digest = InputDigest::new("discrete")
        .matrices(c)
        .matrices(a)
        .matrices(b)
        .finish();
    Ok(operator_report(CheckId::DiscreteGruss, &d, 0.25 * wa * wb, opts.tol)
        .detail("bounds", bounds.to_json())
        .detail("terms", c.len())
        .with_dims(Dims {
            m: first.nrows(),
            n: dim,
            k: c.len(),
            rank: None,
        })
        .with_digest(digest)
        .with_seed(opts.seed))
}

/// `⌊n/2⌋/n · (1 − ⌊n/2⌋/n)`.
pub fn bpr_constant(n: usize) -> f64 {
    let h = n / 2;
    (h * (n - h)) as f64 / (n * n) as f64
}

/// `⌊n/2⌋/n · (1 − ⌊n/2⌋/n) ≤ ¼`, compared exactly as `4h(n − h) ≤ n²`.
pub fn bpr_not_above_classical(n: usize) -> bool {
    let (n, h) = (n as u128, (n / 2) as u128);
    4 * h * (n - h) <= n * n
}

/// Classical and refined discrete Grüss bounds for
/// `|mean(ab) − mean(a)·mean(b)|`.
pub fn check_scalar_gruss(a: &[f64], b: &[f64], bounds: Bounds, opts: &CheckOptions) -> Result<[InequalityReport; 2]> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "sequences have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::InvalidInput("sequences must be nonempty".into()));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("sequences must be finite".into()));
    }
    for (name, xs, lo, hi) in [
        ("a", a, bounds.lower_a, bounds.upper_a),
        ("b", b, bounds.lower_b, bounds.upper_b),
    ] {
        if let Some(i) = xs.iter().position(|&x| x < lo || x > hi) {
            return Err(Error::Precondition(format!(
                "{name}[{i}] = {} lies outside [{lo}, {hi}]",
                xs[i]
            )));
        }
    }
    let n = a.len();
    let len = n as f64;
    let mean_ab = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / len;
    let mean_a = a.iter().sum::<f64>() / len;
    let mean_b = b.iter().sum::<f64>() / len;
    let lhs = (mean_ab - mean_a * mean_b).abs();
    let (wa, wb) = bounds.widths();
    let digest = InputDigest::new("scalar").scalars(a).scalars(b).finish();
    let dims = Dims {
        m: n,
        n: 1,
        k: n,
        rank: None,
    };
    let build = |id, rhs| {
        InequalityReport::new(id, "scalar", lhs, rhs, opts.tol)
            .detail("bounds", bounds.to_json())
            .with_dims(dims)
            .with_digest(digest.clone())
            .with_seed(opts.seed)
    };
    Ok([
        build(CheckId::ScalarGruss, 0.25 * wa * wb),
        build(CheckId::ScalarGrussBpr, bpr_constant(n) * wa * wb),
    ])
}

/// `|Σ μ_t A_t B_t − (Σ μ_t A_t)(Σ μ_t B_t)| ⪯ ¼ |M₁ − m₁| |M₂ − m₂| I`
/// for probability weights `μ` and every `A_t`, `B_t` in its ball.
pub fn check_field_gruss(
    fields_a: &[ComplexMatrix],
    fields_b: &[ComplexMatrix],
    weights: &[f64],
    ball_1: &BallSpec,
    ball_2: &BallSpec,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    if fields_a.len() != fields_b.len() {
        return Err(Error::Shape(format!(
            "{} A fields but {} B fields",
            fields_a.len(),
            fields_b.len()
        )));
    }
    for (t, (x, y)) in fields_a.iter().zip(fields_b).enumerate() {
        if x.nrows() != x.ncols() || y.shape() != x.shape() {
            return Err(Error::Shape(format!(
                "field {t} must hold square matrices of equal size"
            )));
        }
        ensure_in_ball(x, ball_1, opts.precondition_tol, &format!("A[{t}]"))?;
        ensure_in_ball(y, ball_2, opts.precondition_tol, &format!("B[{t}]"))?;
    }
    let tol = opts.precondition_tol;
    let products: Vec<ComplexMatrix> = fields_a.iter().zip(fields_b).map(|(x, y)| x * y).collect();
    let d = quadrature_field_expectation(&products, weights, tol)?
        - quadrature_field_expectation(fields_a, weights, tol)? * quadrature_field_expectation(fields_b, weights, tol)?;
    let n = d.nrows();
    let digest = InputDigest::new("fields")
        .matrices(fields_a)
        .matrices(fields_b)
        .scalars(weights)
        .finish();
    Ok(operator_report(
        CheckId::FieldGruss,
        &d,
        0.25 * ball_1.width() * ball_2.width(),
        opts.tol,
    )
    .detail("ball_1", ball_json(ball_1))
    .detail("ball_2", ball_json(ball_2))
    .detail("points", weights.len())
    .with_dims(Dims {
        m: n,
        n,
        k: weights.len(),
        rank: None,
    })
    .with_digest(digest)
    .with_seed(opts.seed))
}
