//! Seeded sweeps over random instances, aggregated independently of the
//! execution schedule.

use super::checks::{
    check_discrete_gruss, check_field_gruss, check_hadamard_gruss, check_scalar_gruss, Bounds, CheckOptions,
    GrussInstance,
};
use super::report::{CheckId, InequalityReport, DEFAULT_SLACK_TOL};
use crate::cpmaps::{random_unital_cp, KrausMap, LinearMap};
use crate::dilation::{minimal_stinespring, verify_stinespring};
use crate::error::{Error, Result};
use crate::json::matrix_to_json;
use crate::linalg::{
    direct_sum_all, eigh_unchecked, kron, random_gaussian, random_hermitian, random_isometry, ComplexMatrix,
};
use crate::norms::GaugeSpec;
use crate::orbit::{commutator_lower_bound, tight_ball};
use crate::rng::{derive_seed, SplitMix64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// A group of checks drawn on a shared random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Kadison defect, block positivity, Stinespring reconstruction, orbit commutator bound.
    Structure,
    /// Variance bound and norm Grüss bound for completely positive maps.
    Norm,
    /// Norm Grüss bound under sampled `η`-positivity.
    EtaNorm,
    /// Operator-order Grüss bound and ball variance with tight balls.
    Operator,
    Hadamard,
    Discrete,
    Scalar,
    Fields,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Structure,
        Family::Norm,
        Family::EtaNorm,
        Family::Operator,
        Family::Hadamard,
        Family::Discrete,
        Family::Scalar,
        Family::Fields,
    ];

    /// Index mixed into the trial seed, so families draw independent instances.
    fn stream(&self) -> u64 {
        match self {
            Family::Structure => 1,
            Family::Norm => 2,
            Family::EtaNorm => 3,
            Family::Operator => 4,
            Family::Hadamard => 5,
            Family::Discrete => 6,
            Family::Scalar => 7,
            Family::Fields => 8,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Structure => "structure",
            Family::Norm => "norm",
            Family::EtaNorm => "eta_norm",
            Family::Operator => "operator",
            Family::Hadamard => "hadamard",
            Family::Discrete => "discrete",
            Family::Scalar => "scalar",
            Family::Fields => "fields",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Named sets of families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Structural self-consistency of maps, dilations and diameters.
    Core,
    /// Every Grüss-type inequality.
    Gruss,
    All,
}

impl Suite {
    pub fn families(&self) -> Vec<Family> {
        match self {
            Suite::Core => vec![Family::Structure],
            Suite::Gruss => Family::ALL[1..].to_vec(),
            Suite::All => Family::ALL.to_vec(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Suite::Core),
            "gruss" => Ok(Suite::Gruss),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!(
                "unknown suite `{other}` (expected all, core or gruss)"
            ))),
        }
    }
}

/// Number of Kraus operators: a fixed count or `m·n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RankChoice {
    Fixed(usize),
    Full,
}

impl RankChoice {
    /// The requested rank, raised to `⌈n/m⌉` when fewer operators could not be unital.
    pub fn resolve(&self, m: usize, n: usize) -> usize {
        let r = match *self {
            RankChoice::Fixed(r) => r,
            RankChoice::Full => m * n,
        };
        r.max(n.div_ceil(m))
    }

    pub fn parse_list(list: &str) -> Result<Vec<RankChoice>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl FromStr for RankChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "mn" => Ok(RankChoice::Full),
            _ => match s.parse::<usize>() {
                Ok(0) | Err(_) => Err(Error::Config(format!(
                    "invalid rank `{s}` (expected a positive integer or `full`)"
                ))),
                Ok(r) => Ok(RankChoice::Fixed(r)),
            },
        }
    }
}

impl TryFrom<String> for RankChoice {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RankChoice> for String {
    fn from(r: RankChoice) -> String {
        match r {
            RankChoice::Fixed(r) => r.to_string(),
            RankChoice::Full => "full".into(),
        }
    }
}

/// Sweep configuration. Each trial picks `m`, `n` and the rank uniformly
/// from the given lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub families: Vec<Family>,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub kraus_rank: Vec<RankChoice>,
    pub trials: usize,
    pub seed: u64,
    pub gauges: Vec<GaugeSpec>,
    pub tol: f64,
    pub eta: usize,
    pub eta_trials: usize,
    /// Algebra dimension `k`; `None` means `m²`.
    pub algebra_dim: Option<usize>,
    /// Keep every report in the aggregate, not just the summaries.
    pub keep_reports: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            families: Suite::Gruss.families(),
            m: vec![2, 3, 4],
            n: vec![2, 3, 4],
            kraus_rank: vec![RankChoice::Fixed(1), RankChoice::Fixed(2), RankChoice::Full],
            trials: 100,
            seed: 0,
            gauges: GaugeSpec::standard_set(),
            tol: DEFAULT_SLACK_TOL,
            eta: 12,
            eta_trials: 16,
            algebra_dim: None,
            keep_reports: false,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        for (name, list) in [("m", &self.m), ("n", &self.n)] {
            if list.is_empty() || list.contains(&0) {
                return Err(Error::Config(format!("`{name}` needs at least one positive dimension")));
            }
        }
        if self.kraus_rank.is_empty() {
            return Err(Error::Config("`rank` needs at least one value".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("`trials` must be at least 1".into()));
        }
        if self.gauges.is_empty() {
            return Err(Error::Config("no gauges selected".into()));
        }
        for g in &self.gauges {
            g.validate()?;
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Config(format!(
                "tolerance must be finite and nonnegative, got {}",
                self.tol
            )));
        }
        if self.eta == 0 {
            return Err(Error::Config("`eta` must be at least 1".into()));
        }
        if self.algebra_dim == Some(0) {
            return Err(Error::Config("algebra dimension must be positive".into()));
        }
        Ok(())
    }

    fn options(&self, seed: u64) -> CheckOptions {
        CheckOptions {
            tol: self.tol,
            algebra_dim: self.algebra_dim,
            eta: self.eta,
            eta_trials: self.eta_trials,
            seed,
            ..CheckOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial: usize,
    pub seed: u64,
    pub family: Family,
    pub message: String,
}

/// Everything one trial produced.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub reports: Vec<InequalityReport>,
    pub errors: Vec<TrialError>,
    /// Serialized inputs of each family that produced a violation.
    pub instances: BTreeMap<Family, Value>,
}

/// A violating report together with the inputs that reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub report: InequalityReport,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregate {
    pub trials: usize,
    pub checks_run: usize,
    pub violations: usize,
    /// Reports labelled exploratory; never counted as violations.
    pub exploratory: usize,
    /// Smallest slack per check id and gauge.
    pub min_slack_by_check: BTreeMap<String, BTreeMap<String, f64>>,
    pub errors: Vec<TrialError>,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reports: Option<Vec<InequalityReport>>,
}

impl SweepAggregate {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("aggregate serializes")
    }

    /// Slack minima flattened as `(check, gauge, min_slack)`.
    pub fn min_slacks(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.min_slack_by_check
            .iter()
            .flat_map(|(c, by_gauge)| by_gauge.iter().map(move |(g, s)| (c.as_str(), g.as_str(), *s)))
    }
}

/// Combine trial outcomes (in any order) into an aggregate; outcomes are
/// sorted by trial index first, so the result does not depend on scheduling.
pub fn aggregate(trials: usize, mut outcomes: Vec<TrialOutcome>, keep_reports: bool) -> SweepAggregate {
    outcomes.sort_by_key(|o| o.trial);
    let mut agg = SweepAggregate {
        trials,
        checks_run: 0,
        violations: 0,
        exploratory: 0,
        min_slack_by_check: BTreeMap::new(),
        errors: Vec::new(),
        witnesses: Vec::new(),
        reports: keep_reports.then(Vec::new),
    };
    for outcome in outcomes {
        for report in &outcome.reports {
            agg.checks_run += 1;
            if report.is_exploratory() {
                agg.exploratory += 1;
            }
            let slot = agg
                .min_slack_by_check
                .entry(report.check_id.to_string())
                .or_default()
                .entry(report.gauge.clone())
                .or_insert(f64::INFINITY);
            *slot = slot.min(report.slack);
            if report.is_violation() {
                agg.violations += 1;
                let instance = family_of(report.check_id)
                    .and_then(|f| outcome.instances.get(&f).cloned())
                    .unwrap_or(Value::Null);
                agg.witnesses.push(Witness {
                    trial: outcome.trial,
                    seed: outcome.seed,
                    report: report.clone(),
                    instance,
                });
            }
        }
        agg.errors.extend(outcome.errors);
        if let Some(list) = agg.reports.as_mut() {
            list.extend(outcome.reports);
        }
    }
    agg
}

fn family_of(id: CheckId) -> Option<Family> {
    Some(match id {
        CheckId::Kadison | CheckId::BlockGram | CheckId::Stinespring | CheckId::OrbitCommutator => Family::Structure,
        CheckId::VarianceBound | CheckId::GrussNorm => Family::Norm,
        CheckId::GrussNormEta => Family::EtaNorm,
        CheckId::GrussOperator | CheckId::BallVariance => Family::Operator,
        CheckId::HadamardGruss => Family::Hadamard,
        CheckId::DiscreteGruss => Family::Discrete,
        CheckId::ScalarGruss | CheckId::ScalarGrussBpr => Family::Scalar,
        CheckId::FieldGruss => Family::Fields,
        CheckId::CounterexampleBlockGram | CheckId::CounterexampleGruss => return None,
    })
}

fn pick<T: Copy>(rng: &mut SplitMix64, list: &[T]) -> T {
    list[rng.index(list.len())]
}

struct MapInstance {
    map: KrausMap,
    a: ComplexMatrix,
    b: ComplexMatrix,
}

impl MapInstance {
    fn draw(config: &CheckConfig, rng: &mut SplitMix64) -> Result<Self> {
        let m = pick(rng, &config.m);
        let n = pick(rng, &config.n);
        let r = pick(rng, &config.kraus_rank).resolve(m, n);
        let map = random_unital_cp(m, n, r, rng.next_u64())?;
        let a = random_gaussian(m, m, rng);
        let b = random_gaussian(m, m, rng);
        Ok(MapInstance { map, a, b })
    }

    fn to_json(&self) -> Value {
        json!({
            "map": LinearMap::Kraus(self.map.clone()).to_json(),
            "A": matrix_to_json(&self.a),
            "B": matrix_to_json(&self.b),
        })
    }
}

fn matrices_json(list: &[ComplexMatrix]) -> Value {
    Value::Array(list.iter().map(matrix_to_json).collect())
}

type FamilyRun = Result<(Vec<InequalityReport>, Value)>;

fn run_structure(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let inst = MapInstance::draw(config, rng)?;
    let opts = config.options(seed);
    let g = GrussInstance::new(&inst.map, &inst.a, &inst.b, &opts)?;
    let mut reports = vec![g.kadison_report()?, g.block_gram_report(CheckId::BlockGram)];

    let (m, n) = (inst.map.kraus()[0].ncols(), inst.map.kraus()[0].nrows());
    let dilation = minimal_stinespring(&inst.map)?;
    let defect = verify_stinespring(&dilation, &inst.map, 3, rng.next_u64())?;
    let bound = m * m * n;
    let mut stinespring = InequalityReport::new(CheckId::Stinespring, "op", defect, 0.0, config.tol)
        .detail("dilation_dimension", dilation.dimension())
        .detail("dimension_bound", bound)
        .with_dims(g.dims())
        .with_digest(g.digest().to_string())
        .with_seed(seed);
    if dilation.dimension() > bound {
        stinespring.satisfied = false;
    }
    reports.push(stinespring);

    let lower = commutator_lower_bound(&inst.a, 64, rng.next_u64())?;
    reports.push(
        InequalityReport::new(CheckId::OrbitCommutator, "op", lower.value, g.d_a(), config.tol)
            .with_dims(g.dims())
            .with_digest(g.digest().to_string())
            .with_seed(seed),
    );
    Ok((reports, inst.to_json()))
}

fn run_norm(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let inst = MapInstance::draw(config, rng)?;
    let g = GrussInstance::new(&inst.map, &inst.a, &inst.b, &config.options(seed))?;
    let mut reports = Vec::new();
    for gauge in &config.gauges {
        reports.push(g.variance_bound(gauge)?);
        reports.push(g.gruss_norm(gauge)?);
    }
    Ok((reports, inst.to_json()))
}

fn run_eta_norm(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let inst = MapInstance::draw(config, rng)?;
    let g = GrussInstance::new(&inst.map, &inst.a, &inst.b, &config.options(rng.next_u64()))?;
    let evidence = g.eta_evidence()?;
    let reports = config
        .gauges
        .iter()
        .map(|gauge| g.gruss_norm_eta(gauge, &evidence).map(|r| r.with_seed(seed)))
        .collect::<Result<_>>()?;
    Ok((reports, inst.to_json()))
}

fn run_operator(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let inst = MapInstance::draw(config, rng)?;
    let g = GrussInstance::new(&inst.map, &inst.a, &inst.b, &config.options(seed))?;
    let (ball_a, ball_b) = (tight_ball(&inst.a)?, tight_ball(&inst.b)?);
    let reports = vec![g.gruss_operator(&ball_a, &ball_b)?, g.ball_variance(&ball_a)?];
    Ok((reports, inst.to_json()))
}

fn run_hadamard(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let n = pick(rng, &config.n);
    let [a1, a2, b1, b2] = std::array::from_fn(|_| random_gaussian(n, n, rng));
    let ball_1 = tight_ball(&kron(&a1, &a2))?;
    let ball_2 = tight_ball(&kron(&b1, &b2))?;
    let report = check_hadamard_gruss(&a1, &a2, &b1, &b2, &ball_1, &ball_2, &config.options(seed))?;
    Ok((
        vec![report],
        json!({"A1": matrix_to_json(&a1), "A2": matrix_to_json(&a2), "B1": matrix_to_json(&b1), "B2": matrix_to_json(&b2)}),
    ))
}

fn spectral_range(list: &[ComplexMatrix]) -> (f64, f64) {
    list.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        let e = eigh_unchecked(x);
        (lo.min(e.min()), hi.max(e.max()))
    })
}

fn run_discrete(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let n = pick(rng, &config.n);
    let terms = 1 + rng.index(4);
    let frame = random_isometry(terms * n, n, rng);
    let c: Vec<_> = (0..terms).map(|j| frame.rows(j * n, n).into_owned()).collect();
    let a: Vec<_> = (0..terms).map(|_| random_hermitian(n, rng)).collect();
    let b: Vec<_> = (0..terms).map(|_| random_hermitian(n, rng)).collect();
    let (la, ua) = spectral_range(&a);
    let (lb, ub) = spectral_range(&b);
    let report = check_discrete_gruss(&c, &a, &b, Bounds::new(la, ua, lb, ub), &config.options(seed))?;
    Ok((
        vec![report],
        json!({"C": matrices_json(&c), "A": matrices_json(&a), "B": matrices_json(&b)}),
    ))
}

fn run_scalar(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let len = 2 + rng.index(15);
    let a: Vec<f64> = (0..len).map(|_| rng.normal()).collect();
    let b: Vec<f64> = (0..len).map(|_| rng.normal()).collect();
    let range = |xs: &[f64]| {
        xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
    };
    let ((la, ua), (lb, ub)) = (range(&a), range(&b));
    let reports = check_scalar_gruss(&a, &b, Bounds::new(la, ua, lb, ub), &config.options(seed))?;
    Ok((reports.to_vec(), json!({"a": a, "b": b})))
}

fn run_fields(config: &CheckConfig, seed: u64, rng: &mut SplitMix64) -> FamilyRun {
    let n = pick(rng, &config.n);
    let points = 1 + rng.index(5);
    let raw: Vec<f64> = (0..points).map(|_| rng.uniform(0.1, 1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let fa: Vec<_> = (0..points).map(|_| random_gaussian(n, n, rng)).collect();
    let fb: Vec<_> = (0..points).map(|_| random_gaussian(n, n, rng)).collect();
    // A ball containing the direct sum contains every point of the field.
    let ball_1 = tight_ball(&direct_sum_all(&fa))?;
    let ball_2 = tight_ball(&direct_sum_all(&fb))?;
    let report = check_field_gruss(&fa, &fb, &weights, &ball_1, &ball_2, &config.options(seed))?;
    Ok((
        vec![report],
        json!({"A": matrices_json(&fa), "B": matrices_json(&fb), "weights": weights}),
    ))
}

/// Run every configured family on trial `trial`. Errors are recorded, not raised.
pub fn run_trial(config: &CheckConfig, trial: usize) -> TrialOutcome {
    let seed = derive_seed(config.seed, trial as u64);
    let mut outcome = TrialOutcome {
        trial,
        seed,
        reports: Vec::new(),
        errors: Vec::new(),
        instances: BTreeMap::new(),
    };
    for &family in &config.families {
        let mut rng = SplitMix64::new(derive_seed(seed, family.stream()));
        let run = match family {
            Family::Structure => run_structure(config, seed, &mut rng),
            Family::Norm => run_norm(config, seed, &mut rng),
            Family::EtaNorm => run_eta_norm(config, seed, &mut rng),
            Family::Operator => run_operator(config, seed, &mut rng),
            Family::Hadamard => run_hadamard(config, seed, &mut rng),
            Family::Discrete => run_discrete(config, seed, &mut rng),
            Family::Scalar => run_scalar(config, seed, &mut rng),
            Family::Fields => run_fields(config, seed, &mut rng),
        };
        match run {
            Ok((reports, instance)) => {
                if reports.iter().any(InequalityReport::is_violation) {
                    outcome.instances.insert(family, instance);
                }
                outcome.reports.extend(reports);
            }
            Err(e) => outcome.errors.push(TrialError {
                trial,
                seed,
                family,
                message: e.to_string(),
            }),
        }
    }
    outcome
}

/// Run `config.trials` trials on `workers` threads.
pub fn sweep(config: &CheckConfig, workers: usize) -> Result<SweepAggregate> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(config, t))
            .collect()
    });
    Ok(aggregate(config.trials, outcomes, config.keep_reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(families: Vec<Family>, trials: usize) -> CheckConfig {
        CheckConfig {
            families,
            trials,
            seed: 42,
            eta_trials: 2,
            ..CheckConfig::default()
        }
    }

    #[test]
    fn rank_resolution() {
        assert_eq!(RankChoice::Fixed(1).resolve(2, 4), 2);
        assert_eq!(RankChoice::Fixed(1).resolve(3, 2), 1);
        assert_eq!(RankChoice::Full.resolve(3, 4), 12);
        assert_eq!(
            RankChoice::parse_list("1, 2,full").unwrap(),
            vec![RankChoice::Fixed(1), RankChoice::Fixed(2), RankChoice::Full]
        );
        assert!("0".parse::<RankChoice>().is_err());
    }

    #[test]
    fn every_family_runs_clean() {
        let config = small(Family::ALL.to_vec(), 6);
        let agg = sweep(&config, 2).unwrap();
        assert!(agg.errors.is_empty(), "{:?}", agg.errors);
        assert_eq!(agg.violations, 0, "{:?}", agg.witnesses);
        assert_eq!(agg.trials, 6);
        for id in [
            "kadison",
            "stinespring",
            "gruss_norm",
            "gruss_norm_eta",
            "hadamard_gruss",
            "scalar_gruss_bpr",
            "field_gruss",
        ] {
            assert!(agg.min_slack_by_check.contains_key(id), "{id}");
        }
    }

    #[test]
    fn single_trial_matches_direct_run() {
        let config = CheckConfig {
            keep_reports: true,
            ..small(vec![Family::Norm], 1)
        };
        let agg = sweep(&config, 1).unwrap();
        assert_eq!(agg.reports.unwrap(), run_trial(&config, 0).reports);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let config = small(vec![Family::Norm, Family::Operator, Family::Scalar], 8);
        let one = serde_json::to_string(&sweep(&config, 1).unwrap().to_json()).unwrap();
        let four = serde_json::to_string(&sweep(&config, 4).unwrap().to_json()).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn injected_violation_is_counted_with_witness() {
        let bundle = crate::gruss::choi_counterexample().unwrap();
        let mut outcome = run_trial(&small(vec![Family::Scalar], 1), 0);
        outcome.reports.push(bundle.raw[1].clone());
        let agg = aggregate(1, vec![outcome], false);
        assert_eq!(agg.violations, 1);
        assert_eq!(agg.witnesses[0].report.check_id, CheckId::CounterexampleGruss);

        let empty = aggregate(0, Vec::new(), false);
        assert_eq!(empty.to_json()["trials"], 0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(small(vec![], 1).validate().is_err());
        assert!(small(vec![Family::Norm], 0).validate().is_err());
        assert!(CheckConfig {
            m: vec![0],
            ..CheckConfig::default()
        }
        .validate()
        .is_err());
    }
}
