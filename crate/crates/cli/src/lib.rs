//! Experiment driver: reads a family config, runs one named experiment,
//! writes a CSV table and a JSON summary of its checks.
//!
//! Exit codes: 1 for config problems, 2 when the family fails validation,
//! 3 for numerical failures and failed checks.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use xjacobi::asympt::{
    discrepancy_table, mehler_heine, mehler_heine_table, ratio_asymptotics, ratio_limit, ratio_table,
    regular_zero_discrepancy, zero_gap_table, zero_split,
};
use xjacobi::darboux::{partner_coefficients, sigma, ExceptionalFamily, FamilySpec};
use xjacobi::opmatrix::{build_me, q_primitive, ConstantMode};
use xjacobi::output::Table;
use xjacobi::selfinv::{
    build_self_inversive, statement_interval, sweep, sweep_table, symbol_image_distance, toeplitz_section_spectrum,
};
use xjacobi::spectra::{
    char_poly_value, christoffel_moments, determinantal_oracle, equilibrium_moments, moments_table,
    trace_gap_experiment, trace_gap_table,
};

pub const EXPERIMENTS: &[&str] = &[
    "family-check",
    "moments",
    "traces",
    "zeros",
    "discrepancy",
    "ratio",
    "mehler-heine",
    "selfinv-sweep",
    "spectrum",
    "determinant-oracle",
];

#[derive(Debug, Clone, Parser)]
#[command(name = "xjacobi", about = "Run numerical experiments on one-step exceptional Jacobi families")]
pub struct Args {
    /// JSON config: either `{"family": {...}, ...}` or a bare family document.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the experiment named in the config.
    #[arg(long)]
    pub experiment: Option<String>,
    /// Output directory; `<experiment>.csv` and `<experiment>.summary.json` go here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn usage() -> String {
    format!(
        "usage: xjacobi --config <path> [--experiment <name>] [--out <dir>] [--seed <int>]\nexperiments: {}",
        EXPERIMENTS.join(", ")
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilySpec,
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub n_list: Option<Vec<usize>>,
    #[serde(default)]
    pub l_max: Option<usize>,
    /// `[re, im]` pairs.
    #[serde(default)]
    pub z_list: Option<Vec<[f64; 2]>>,
    /// CSV path used when `--out` is absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid JSON: {e}")))?;
        let wrapped = v.get("family").is_some();
        if wrapped {
            serde_json::from_value(v).map_err(|e| CliError::config(format!("invalid config: {e}")))
        } else {
            let family = serde_json::from_value(v).map_err(|e| CliError::config(format!("invalid family: {e}")))?;
            Ok(Self {
                family,
                experiment: None,
                n_list: None,
                l_max: None,
                z_list: None,
                output: None,
                seed: None,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn family(e: xjacobi::Error) -> Self {
        Self {
            code: 2,
            message: format!("family validation failed: {e}"),
        }
    }

    fn numeric(e: xjacobi::Error) -> Self {
        Self {
            code: 3,
            message: format!("numerical failure: {e}"),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub family: FamilySpec,
    pub seed: u64,
    pub csv: String,
    pub rows: usize,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Runs the experiment and writes its artifacts. Failed checks are returned
/// as an exit-3 error after the files are written.
pub fn run(args: &Args) -> Result<Summary, CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let name = args
        .experiment
        .clone()
        .or_else(|| cfg.experiment.clone())
        .ok_or_else(|| CliError::config(format!("no experiment given\n{}", usage())))?;
    if !EXPERIMENTS.contains(&name.as_str()) {
        return Err(CliError::config(format!("unknown experiment '{name}'\n{}", usage())));
    }
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let fam = cfg.family.build().map_err(CliError::family)?;
    let (table, checks) = run_experiment(&name, &fam, &cfg, seed).map_err(CliError::numeric)?;

    let csv_path = match (&args.out, &cfg.output) {
        (Some(dir), _) => dir.join(format!("{name}.csv")),
        (None, Some(p)) => p.clone(),
        (None, None) => PathBuf::from(format!("{name}.csv")),
    };
    let summary_path = csv_path.with_extension("summary.json");
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))?;
    }
    write_file(&csv_path, &table.to_csv_string().map_err(CliError::numeric)?)?;
    let summary = Summary {
        experiment: name,
        family: cfg.family.clone(),
        seed,
        csv: csv_path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
        rows: table.rows.len(),
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&summary_path, &(json + "\n"))?;
    if let Some(bad) = summary.checks.iter().find(|c| !c.pass) {
        return Err(CliError {
            code: 3,
            message: format!("check '{}' failed: {}", bad.name, bad.detail),
        });
    }
    Ok(summary)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

type Outcome = xjacobi::Result<(Table, Vec<Check>)>;

fn z_probes(cfg: &ExperimentConfig, default: &[[f64; 2]]) -> Vec<Complex64> {
    cfg.z_list
        .clone()
        .unwrap_or_else(|| default.to_vec())
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

fn sizes(cfg: &ExperimentConfig, default: &[usize]) -> Vec<usize> {
    cfg.n_list.clone().unwrap_or_else(|| default.to_vec())
}

pub fn run_experiment(name: &str, fam: &ExceptionalFamily, cfg: &ExperimentConfig, seed: u64) -> Outcome {
    match name {
        "family-check" => family_check(fam, cfg),
        "moments" => moments(fam, cfg),
        "traces" => traces(fam, cfg),
        "zeros" => zeros(fam, cfg),
        "discrepancy" => discrepancy(fam, cfg),
        "ratio" => ratio(fam, cfg),
        "mehler-heine" => mh(fam, cfg),
        "selfinv-sweep" => selfinv_sweep(fam, seed),
        "spectrum" => spectrum(fam, cfg),
        "determinant-oracle" => determinant_oracle_experiment(fam, cfg),
        other => Err(xjacobi::Error::Config(format!("unknown experiment '{other}'"))),
    }
}

fn family_check(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let n = sizes(cfg, &[25]).into_iter().max().unwrap_or(25);
    let rule = fam.weight_quadrature(2 * (n + fam.b.degree()))?;
    let table: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| fam.orthonormal_values(n, x)).collect::<Result<_, _>>()?;
    let mut gram = 0.0f64;
    for i in 0..=n {
        for j in i..=n {
            let ip: f64 = table.iter().zip(&rule.weights).map(|(v, w)| w * v[i] * v[j]).sum();
            gram = gram.max((ip - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let mut sigma_dev = 0.0f64;
    let raw: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| fam.exceptional_values(n, x)).collect();
    for k in 0..=n {
        let norm = raw.iter().zip(&rule.weights).map(|(v, w)| w * v[k] * v[k]).sum::<f64>().sqrt();
        let s = sigma(fam, k)?;
        sigma_dev = sigma_dev.max((norm - s).abs() / s);
    }
    let pc = partner_coefficients(fam);
    let mut partner = 0.0f64;
    for k in 0..=n.min(20) {
        for i in 0..40 {
            let x = -0.98 + 1.96 * (i as f64 + 0.5) / 40.0;
            let [y, d1, d2] = fam.exceptional_derivatives(k, x);
            let terms = [(1.0 - x * x) * d2, pc.q_hat.eval(x) * d1, pc.r_hat.eval(x) * y, -fam.lambda_n(k) * y];
            let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max).max(1.0);
            partner = partner.max(terms.iter().sum::<f64>().abs() / scale);
        }
    }
    let mut t = Table::new(&["quantity", "value"]);
    let rows: [(&str, f64); 6] = [
        ("lambda_tilde", fam.lambda_tilde),
        ("riccati_spread", fam.riccati_spread),
        ("gram_deviation", gram),
        ("sigma_relative_deviation", sigma_dev),
        ("partner_ode_residual", partner),
        ("complete", if fam.is_complete() { 1.0 } else { 0.0 }),
    ];
    for (q, v) in rows {
        t.push(vec![q.into(), v.into()]);
    }
    let checks = vec![
        check("riccati", fam.riccati_spread <= 1e-8, format!("spread {:e}", fam.riccati_spread)),
        check("orthonormality", gram <= 1e-9, format!("max Gram deviation {gram:e} up to n={n}")),
        check("sigma", sigma_dev <= 1e-8, format!("max relative deviation {sigma_dev:e}")),
        check("partner-ode", partner <= 1e-7, format!("scaled residual {partner:e}")),
    ];
    Ok((t, checks))
}

fn moments(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[50, 100, 200, 400]);
    let l_max = cfg.l_max.unwrap_or(6);
    let t = moments_table(fam, &ns, l_max, ConstantMode::Zero)?;
    let mut checks = Vec::new();
    if let (Some(&first), Some(&last)) = (ns.first(), ns.last()) {
        if first != last {
            let eq = equilibrium_moments(&q_primitive(fam, ConstantMode::Zero), l_max);
            let a = christoffel_moments(fam, first, l_max, ConstantMode::Zero)?;
            let b = christoffel_moments(fam, last, l_max, ConstantMode::Zero)?;
            for l in 1..=l_max {
                let (ga, gb) = ((a[l] - eq[l]).abs(), (b[l] - eq[l]).abs());
                checks.push(check(
                    &format!("moment-gap-decreases-l{l}"),
                    gb < ga,
                    format!("n={first}: {ga:e}, n={last}: {gb:e}"),
                ));
            }
        }
    }
    Ok((t, checks))
}

fn traces(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[50, 500]);
    let l_max = cfg.l_max.unwrap_or(3);
    let t = trace_gap_table(fam, &ns, l_max, ConstantMode::Zero)?;
    let mut checks = Vec::new();
    if let (Some(&first), Some(&last)) = (ns.first(), ns.last()) {
        for l in 1..=l_max {
            let ga = trace_gap_experiment(fam, l, first, ConstantMode::Zero)?;
            let gb = trace_gap_experiment(fam, l, last, ConstantMode::Zero)?;
            let pass = gb < 0.02 && (first == last || gb < ga);
            checks.push(check(
                &format!("trace-gap-l{l}"),
                pass,
                format!("n={first}: {ga:e}, n={last}: {gb:e}, threshold 0.02"),
            ));
        }
    }
    Ok((t, checks))
}

fn zeros(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[20, 50, 100, 200]);
    let t = zero_gap_table(fam, &ns)?;
    let mut checks = Vec::new();
    for &n in &ns {
        let s = zero_split(fam, n)?;
        checks.push(check(
            &format!("clean-split-n{n}"),
            s.is_clean() && s.min_regular_gap() > 1e-9,
            format!(
                "{} regular, {} exceptional, degree {}, min gap {:e}",
                s.regular.len(),
                s.exceptional.len(),
                s.degree,
                s.min_regular_gap()
            ),
        ));
    }
    Ok((t, checks))
}

fn discrepancy(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[50, 100, 200, 400]);
    let t = discrepancy_table(fam, &ns)?;
    let checks = regular_zero_discrepancy(fam, &ns)?
        .iter()
        .map(|p| {
            check(
                &format!("discrepancy-bound-n{}", p.n),
                p.value <= p.bound,
                format!("{:e} vs bound {:e}", p.value, p.bound),
            )
        })
        .collect();
    Ok((t, checks))
}

fn ratio(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[50, 200, 400]);
    let zs = z_probes(cfg, &[[2.0, 0.0]]);
    let t = ratio_table(fam, &ns, &zs)?;
    let mut checks = Vec::new();
    if let (Some(&first), Some(&last)) = (ns.first(), ns.last()) {
        for &z in &zs {
            let err = |n| -> xjacobi::Result<f64> { Ok((ratio_asymptotics(fam, z, n)? - ratio_limit(z)).norm()) };
            let (ea, eb) = (err(first)?, err(last)?);
            checks.push(check(
                &format!("ratio-error-decreases-z{z}"),
                first == last || eb < ea,
                format!("n={first}: {ea:e}, n={last}: {eb:e}"),
            ));
        }
    }
    Ok((t, checks))
}

fn mh(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[500]);
    let zs = z_probes(cfg, &[[0.5, 0.0], [1.0, 0.0], [2.0, 0.0]]);
    let t = mehler_heine_table(fam, &ns, &zs)?;
    let mut checks = Vec::new();
    for &n in &ns {
        for &z in &zs {
            let e = mehler_heine(fam, z, n)?.rel_err();
            checks.push(check(&format!("mehler-heine-n{n}-z{z}"), e <= 1e-2, format!("relative error {e:e}")));
        }
    }
    Ok((t, checks))
}

fn selfinv_sweep(fam: &ExceptionalFamily, seed: u64) -> Outcome {
    let (lo, hi) = statement_interval(fam)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lambdas = Vec::with_capacity(100);
    while lambdas.len() < 100 {
        let l: f64 = rng.gen_range(lo - 1.0..hi + 1.0);
        if (l - lo).abs() > 1e-9 && (l - hi).abs() > 1e-9 {
            lambdas.push(l);
        }
    }
    let l = build_self_inversive(fam, 0.0).l;
    let rows = sweep(fam, &lambdas)?;
    let bad = rows.iter().filter(|r| !r.consistent(l)).count();
    let checks = vec![check(
        "interval-classification",
        bad == 0,
        format!("{bad} of {} lambdas inconsistent with [{lo}, {hi}]", rows.len()),
    )];
    Ok((sweep_table(&rows), checks))
}

fn spectrum(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[400]);
    let (lo, hi) = statement_interval(fam)?;
    let mut t = Table::new(&["n", "index", "eigenvalue"]);
    let mut checks = Vec::new();
    for &n in &ns {
        let ev = toeplitz_section_spectrum(fam, n)?;
        for (i, &e) in ev.iter().enumerate() {
            t.push(vec![n.into(), i.into(), e.into()]);
        }
        let (emin, emax) = (ev[0], ev[ev.len() - 1]);
        checks.push(check(
            &format!("confined-n{n}"),
            emin >= lo - 1e-6 && emax <= hi + 1e-6,
            format!("[{emin}, {emax}] within [{lo}, {hi}]"),
        ));
        let h = symbol_image_distance(fam, &ev, n);
        checks.push(check(&format!("fills-n{n}"), h < 0.05, format!("Hausdorff distance {h:e}")));
    }
    Ok((t, checks))
}

fn determinant_oracle_experiment(fam: &ExceptionalFamily, cfg: &ExperimentConfig) -> Outcome {
    let ns = sizes(cfg, &[1, 2]);
    let zs = z_probes(cfg, &[[2.0, 0.0], [-0.5, 0.0], [0.3, 0.7], [-1.2, -0.4], [3.0, 1.0]]);
    let nmax = ns.iter().copied().max().unwrap_or(1);
    let me = build_me(fam, nmax, ConstantMode::Zero)?;
    let mut t = Table::new(&["N", "z", "oracle", "determinant", "rel_err"]);
    let mut worst = 0.0f64;
    for &n in &ns {
        let section = me.leading(n).to_dense();
        for &z in &zs {
            let o = determinantal_oracle(fam, n, z, ConstantMode::Zero)?;
            let d = char_poly_value(&section, z);
            let rel = (o.value - d).norm() / d.norm();
            worst = worst.max(rel);
            t.push(vec![n.into(), z.into(), o.value.into(), d.into(), rel.into()]);
        }
    }
    let checks = vec![check("oracle-matches-determinant", worst <= 1e-4, format!("max relative gap {worst:e}"))];
    Ok((t, checks))
}
