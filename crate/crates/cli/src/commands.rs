use crate::args::{
    CheckArgs, CheckKind, CounterexampleArgs, DiameterArgs, DilationArgs, MethodArg, SamplingArgs, SuiteArg, SweepArgs,
};
use crate::output::{emit, unix_millis, Payload, RunManifest};
use gruss_core::cpmaps::LinearMap;
use gruss_core::dilation::{build_stinespring, minimize_stinespring, verify_stinespring};
use gruss_core::gruss::{
    aggregate, choi_counterexample, sweep, CheckConfig, CheckOptions, Family, GrussInstance, InequalityReport,
    RankChoice, Suite, SweepAggregate, TrialOutcome,
};
use gruss_core::json::matrix_from_str;
use gruss_core::linalg::DEFAULT_RANK_TOL;
use gruss_core::norms::GaugeSpec;
use gruss_core::orbit::{orbit_diameter, tight_ball, DiameterOptions, MethodChoice};
use gruss_core::{ComplexMatrix, Error};
use serde_json::{json, Value};
use std::fs;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Environment variable overriding the sweep worker count.
pub const THREADS_ENV: &str = "GRUSS_LAB_THREADS";

pub type CmdResult = Result<i32, String>;

fn workers() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got `{v}`")),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, String> {
    matrix_from_str(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_map(path: &Path) -> Result<LinearMap, String> {
    LinearMap::from_json_str(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_dims(flag: &str, list: &str) -> Result<Vec<usize>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| format!("--{flag}: `{s}` is not a positive integer"))
        })
        .collect()
}

fn config_from(sampling: &SamplingArgs, families: Vec<Family>, keep_reports: bool) -> Result<CheckConfig, String> {
    let config = CheckConfig {
        families,
        m: parse_dims("m", &sampling.m)?,
        n: parse_dims("n", &sampling.n)?,
        kraus_rank: RankChoice::parse_list(&sampling.rank).map_err(|e| format!("--rank: {e}"))?,
        trials: sampling.trials,
        seed: sampling.seed,
        gauges: GaugeSpec::parse_list(&sampling.gauges).map_err(|e| format!("--gauges: {e}"))?,
        tol: sampling.tol,
        eta: sampling.eta,
        eta_trials: sampling.eta_trials,
        algebra_dim: sampling.algebra_dim,
        keep_reports,
    };
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn family_for(kind: CheckKind) -> Family {
    match kind {
        CheckKind::Main1 => Family::Norm,
        CheckKind::The2 => Family::EtaNorm,
        CheckKind::Main2 => Family::Operator,
        CheckKind::Hadamard => Family::Hadamard,
        CheckKind::Discrete => Family::Discrete,
        CheckKind::Scalar => Family::Scalar,
        CheckKind::Fields => Family::Fields,
    }
}

fn summary_line(agg: &SweepAggregate) -> String {
    format!(
        "trials={} checks_run={} violations={} exploratory={} errors={}",
        agg.trials,
        agg.checks_run,
        agg.violations,
        agg.exploratory,
        agg.errors.len()
    )
}

fn aggregate_payload(agg: &SweepAggregate) -> Payload {
    let witnesses =
        (!agg.witnesses.is_empty()).then(|| serde_json::to_value(&agg.witnesses).expect("witnesses serialize"));
    Payload {
        result: agg.to_json(),
        reports: agg.reports.clone().unwrap_or_default(),
        summary: summary_line(agg),
        witnesses,
    }
}

fn finish_aggregate(agg: &SweepAggregate) -> i32 {
    for e in &agg.errors {
        eprintln!("warning: trial {} ({}): {}", e.trial, e.family, e.message);
    }
    eprintln!("{}", summary_line(agg));
    if agg.violations > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn single_instance(args: &CheckArgs, config: &CheckConfig) -> Result<SweepAggregate, String> {
    let (map_path, a_path) = (
        args.map.as_ref().expect("checked by caller"),
        args.a.as_ref().expect("clap requires --a"),
    );
    let map = read_map(map_path)?;
    let a = read_matrix(a_path)?;
    let b = match &args.b {
        Some(p) => read_matrix(p)?,
        None => a.clone(),
    };
    let opts = CheckOptions {
        tol: config.tol,
        algebra_dim: config.algebra_dim,
        eta: config.eta,
        eta_trials: config.eta_trials,
        seed: config.seed,
        ..CheckOptions::default()
    };
    let inst = GrussInstance::new(&map, &a, &b, &opts).map_err(|e| e.to_string())?;
    let mut reports: Vec<InequalityReport> = Vec::new();
    let run = || -> Result<Vec<InequalityReport>, Error> {
        let mut out = Vec::new();
        match args.kind {
            CheckKind::Main1 => {
                for g in &config.gauges {
                    out.push(inst.variance_bound(g)?);
                    out.push(inst.gruss_norm(g)?);
                }
            }
            CheckKind::The2 => {
                let evidence = inst.eta_evidence()?;
                for g in &config.gauges {
                    out.push(inst.gruss_norm_eta(g, &evidence)?);
                }
            }
            CheckKind::Main2 => {
                let (ball_a, ball_b) = (tight_ball(&a)?, tight_ball(&b)?);
                out.push(inst.gruss_operator(&ball_a, &ball_b)?);
                out.push(inst.ball_variance(&ball_a)?);
            }
            _ => unreachable!("single-instance mode is limited to map checks"),
        }
        Ok(out)
    };
    reports.extend(run().map_err(|e| e.to_string())?);
    let instance = json!({
        "map": map.to_json(),
        "A": gruss_core::json::matrix_to_json(&a),
        "B": gruss_core::json::matrix_to_json(&b),
    });
    let family = family_for(args.kind);
    let mut instances = std::collections::BTreeMap::new();
    if reports.iter().any(InequalityReport::is_violation) {
        instances.insert(family, instance);
    }
    let outcome = TrialOutcome {
        trial: 0,
        seed: config.seed,
        reports,
        errors: Vec::new(),
        instances,
    };
    Ok(aggregate(1, vec![outcome], true))
}

pub fn check(argv: &[String], args: &CheckArgs) -> CmdResult {
    let started = unix_millis();
    let family = family_for(args.kind);
    let keep = args.keep_reports || args.output.format == crate::args::Format::Csv || args.map.is_some();
    let config = config_from(&args.sampling, vec![family], keep)?;
    let agg = if args.map.is_some() {
        if !matches!(args.kind, CheckKind::Main1 | CheckKind::The2 | CheckKind::Main2) {
            return Err("--map/--a/--b apply only to main1, the2 and main2".into());
        }
        single_instance(args, &config)?
    } else {
        sweep(&config, workers()?).map_err(|e| e.to_string())?
    };
    let mut config_json = serde_json::to_value(&config).expect("config serializes");
    if let Some(p) = &args.map {
        config_json["map_file"] = json!(p.display().to_string());
    }
    let manifest = RunManifest::new(argv, config_json, config.seed);
    emit(
        manifest,
        aggregate_payload(&agg),
        args.output.out.as_deref(),
        args.output.format,
        started,
    )?;
    Ok(finish_aggregate(&agg))
}

pub fn sweep_cmd(argv: &[String], args: &SweepArgs) -> CmdResult {
    let started = unix_millis();
    let suite = match args.suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Core => Suite::Core,
        SuiteArg::Gruss => Suite::Gruss,
    };
    let keep = args.keep_reports || args.output.format == crate::args::Format::Csv;
    let config = config_from(&args.sampling, suite.families(), keep)?;
    let agg = sweep(&config, workers()?).map_err(|e| e.to_string())?;
    let mut config_json = serde_json::to_value(&config).expect("config serializes");
    config_json["suite"] = serde_json::to_value(suite).expect("suite serializes");
    let manifest = RunManifest::new(argv, config_json, config.seed);
    emit(
        manifest,
        aggregate_payload(&agg),
        args.output.out.as_deref(),
        args.output.format,
        started,
    )?;
    Ok(finish_aggregate(&agg))
}

pub fn counterexample(argv: &[String], args: &CounterexampleArgs) -> CmdResult {
    let started = unix_millis();
    let bundle = choi_counterexample().map_err(|e| e.to_string())?;
    let violations = bundle.violations();
    let reports: Vec<InequalityReport> = bundle.reports().cloned().collect();
    let witnesses: Vec<Value> = bundle
        .reports()
        .filter(|r| r.is_violation())
        .map(|r| json!({"report": r.to_json(), "instance": bundle.instance.clone()}))
        .collect();
    let payload = Payload {
        result: bundle.to_json(),
        reports,
        summary: format!("violations={violations}"),
        witnesses: (!witnesses.is_empty()).then_some(Value::Array(witnesses)),
    };
    let manifest = RunManifest::new(argv, json!({"map": "reduction", "dim": 3}), 0);
    emit(
        manifest,
        payload,
        args.output.out.as_deref(),
        args.output.format,
        started,
    )?;
    for r in &bundle.raw {
        eprintln!(
            "{} ({}): lhs={} rhs={} slack={} satisfied={}",
            r.check_id, r.gauge, r.lhs, r.rhs, r.slack, r.satisfied
        );
    }
    Ok(if violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

pub fn diameter(argv: &[String], args: &DiameterArgs) -> CmdResult {
    let started = unix_millis();
    let a = read_matrix(&args.input)?;
    let method = match args.method {
        MethodArg::Auto => MethodChoice::Auto,
        MethodArg::Hermitian => MethodChoice::Hermitian,
        MethodArg::Disk => MethodChoice::Disk,
        MethodArg::Descent => MethodChoice::Descent,
    };
    if !(args.tol.is_finite() && args.tol >= 0.0) {
        return Err(format!("--tol must be finite and nonnegative, got {}", args.tol));
    }
    let opts = DiameterOptions {
        method,
        tol: args.tol,
        ..DiameterOptions::default()
    };
    let result = orbit_diameter(&a, &opts).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let config = json!({"input": args.input.display().to_string(), "method": method, "tol": args.tol});
    let payload = Payload {
        result: serde_json::to_value(result).expect("diameter serializes"),
        reports: Vec::new(),
        summary: String::new(),
        witnesses: None,
    };
    emit(
        RunManifest::new(argv, config, 0),
        payload,
        args.out.as_deref(),
        crate::args::Format::Json,
        started,
    )?;
    Ok(EXIT_OK)
}

pub fn dilation(argv: &[String], args: &DilationArgs) -> CmdResult {
    let started = unix_millis();
    let map = read_map(&args.map)?;
    let kraus = map
        .to_kraus(DEFAULT_RANK_TOL)
        .map_err(|e| format!("{}: {e}", args.map.display()))?;
    let mut d = build_stinespring(&kraus).map_err(|e| format!("{}: {e}", args.map.display()))?;
    if args.minimize {
        d = minimize_stinespring(&d, DEFAULT_RANK_TOL).map_err(|e| e.to_string())?;
    }
    let mut result = d.to_json();
    let mut code = EXIT_OK;
    if args.verify {
        let defect = verify_stinespring(&d, &kraus, 20, args.seed).map_err(|e| e.to_string())?;
        result["verify_defect"] = json!(defect);
        result["verified"] = json!(defect <= args.tol);
        if defect > args.tol {
            eprintln!("dilation defect {defect:e} exceeds {:e}", args.tol);
            code = EXIT_VIOLATION;
        }
    }
    let config = json!({
        "map": args.map.display().to_string(),
        "minimize": args.minimize,
        "verify": args.verify,
        "tol": args.tol,
    });
    let payload = Payload {
        result,
        reports: Vec::new(),
        summary: String::new(),
        witnesses: None,
    };
    emit(
        RunManifest::new(argv, config, args.seed),
        payload,
        args.out.as_deref(),
        crate::args::Format::Json,
        started,
    )?;
    Ok(code)
}
