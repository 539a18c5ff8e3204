//! Command-line front end: experiment orchestration, parameter sweeps,
//! reproducible artifacts.
//!
//! Every subcommand reads one [`ExperimentConfig`], runs a probe from
//! [`crate::analysis`] or [`crate::pullback`], and writes CSV artifacts plus
//! a JSON run-manifest into the output directory. CSV files carry a
//! `# schema:` comment line so downstream plotting scripts can detect format
//! drift. All randomness is derived from the resolved seed; outputs are
//! byte-identical for identical `(config, seed)` regardless of `--threads`.
//!
//! Seed precedence, lowest to highest: built-in default, `RDS_SYNC_SEED`,
//! the config file's `seed` key, `--seed`.
//!
//! Exit codes: 0 success; 2 config error; 3 internal-consistency error
//! (e.g. the two Lyapunov estimates disagree); 4 I/O error.

use crate::analysis::{
    accessibility_probe, containment_probe, contractibility_test, default_pair_set, lyapunov_mc,
    render_verdict, stability_probe, sync_mc, SyncVerdict, Verdict, VerdictSettings,
};
use crate::circle::CirclePoint;
use crate::config::{parse_config_from, ExperimentConfig, ExperimentKind};
use crate::engine::{RandomMapSystem, TrajectoryEnsemble};
use crate::lift::{detect_subperiods, detect_subperiods_grid, Lift, PeriodCount, SubperiodReport};
use crate::noise::NoiseStream;
use crate::pullback::{cluster_atoms, pullback_measure};
use crate::quadrature::lyapunov_quadrature;
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Lowest-precedence seed source.
pub const ENV_SEED: &str = "RDS_SYNC_SEED";

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "rds-sync",
    version,
    about = "Simulation and statistical analysis of i.i.d. random circle maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    /// Experiment config file (`key = value` lines).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed override (takes precedence over the config file and RDS_SYNC_SEED).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default: the config's `out`, default `out`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads for the parallel probes (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy, Debug)]
pub enum CommandKind {
    /// Evolve a point ensemble and record its diameter over time.
    Simulate,
    /// Lyapunov exponent by adaptive quadrature and Monte Carlo.
    Lyapunov,
    /// Detect displacement subperiods (exact for trigonometric polynomials).
    Subperiods,
    /// Two-point contraction probabilities over a pair grid.
    Contract,
    /// Source-to-arc accessibility probabilities.
    Access,
    /// Finite-horizon synchronisation probabilities per pair.
    Sync,
    /// Ball-contraction probability versus initial radius, plus containment.
    Stability,
    /// Pullback measures, their cluster structure, random fixed points.
    Pullback,
    /// Combined three-condition synchronisation verdict.
    Verdict,
    /// Sweep a scalar lift parameter; one verdict row per value.
    Sweep,
}

impl CommandKind {
    pub fn kind(self) -> ExperimentKind {
        match self {
            CommandKind::Simulate => ExperimentKind::Simulate,
            CommandKind::Lyapunov => ExperimentKind::Lyapunov,
            CommandKind::Subperiods => ExperimentKind::Subperiods,
            CommandKind::Contract => ExperimentKind::Contract,
            CommandKind::Access => ExperimentKind::Access,
            CommandKind::Sync => ExperimentKind::Sync,
            CommandKind::Stability => ExperimentKind::Stability,
            CommandKind::Pullback => ExperimentKind::Pullback,
            CommandKind::Verdict => ExperimentKind::Verdict,
            CommandKind::Sweep => ExperimentKind::Sweep,
        }
    }
}

#[derive(Debug)]
enum RunError {
    Config(String),
    Internal(String),
    Io(String),
}

impl RunError {
    fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Internal(_) => EXIT_INTERNAL,
            RunError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            RunError::Config(m) | RunError::Internal(m) | RunError::Io(m) => m,
        }
    }
}

/// Runs a parsed command line to completion. Returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let started = Instant::now();
    match execute(&cli, started) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("rds-sync: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, started: Instant) -> Result<(), RunError> {
    let mut cfg = resolve_config(cli)?;
    cfg.experiment = Some(cli.command.kind());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| RunError::Internal(format!("thread pool: {e}")))?;
    let files = pool.install(|| run_command(cli.command, &cfg))?;
    write_artifacts(&cfg, &files, cli, started)
}

/// Builds the effective config from defaults, environment, file, and flags.
fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, RunError> {
    let mut base = ExperimentConfig::default();
    if let Ok(raw) = std::env::var(ENV_SEED) {
        let raw = raw.trim();
        if !raw.is_empty() {
            base.seed = raw
                .parse()
                .map_err(|_| RunError::Config(format!("{ENV_SEED}={raw:?} is not a valid seed")))?;
        }
    }
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Io(format!("reading {}: {e}", path.display())))?;
            parse_config_from(&text, base)
                .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?
        }
        None => base,
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.display().to_string();
    }
    Ok(cfg)
}

fn write_artifacts(
    cfg: &ExperimentConfig,
    files: &[(String, String)],
    cli: &Cli,
    started: Instant,
) -> Result<(), RunError> {
    let dir = Path::new(&cfg.out);
    std::fs::create_dir_all(dir)
        .map_err(|e| RunError::Io(format!("creating {}: {e}", dir.display())))?;
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| RunError::Io(format!("writing {}: {e}", path.display())))?;
    }
    let manifest = serde_json::json!({
        "schema": "rds-sync/run-manifest/v1",
        "command": cfg.experiment.expect("set by execute").to_string(),
        "seed": cfg.seed,
        "threads": cli.threads,
        "package": {
            "name": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
        },
        "artifacts": files.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
        "wall_seconds": started.elapsed().as_secs_f64(),
        "config": cfg.to_config_string(),
    });
    let path = dir.join("manifest.json");
    let body = serde_json::to_string_pretty(&manifest)
        .map_err(|e| RunError::Internal(format!("manifest serialisation: {e}")))?;
    std::fs::write(&path, body + "\n")
        .map_err(|e| RunError::Io(format!("writing {}: {e}", path.display())))
}

/// CSV builder: schema comment, header line, then rows. Fields containing
/// commas, quotes or newlines are quoted per RFC 4180.
struct Csv {
    buf: String,
}

impl Csv {
    fn new(schema: &str, columns: &str) -> Csv {
        Csv {
            buf: format!("# schema: rds-sync/{schema}/v1\n{columns}\n"),
        }
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let mut first = true;
        for field in fields {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(&csv_escape(&field));
        }
        self.buf.push('\n');
    }

    fn finish(self) -> String {
        self.buf
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn system(cfg: &ExperimentConfig) -> RandomMapSystem {
    RandomMapSystem::from_lift(cfg.lift.to_lift())
}

fn verdict_settings(cfg: &ExperimentConfig) -> VerdictSettings {
    VerdictSettings {
        seed: cfg.seed,
        horizon: cfg.horizon,
        n_samples: cfg.n_samples,
        n_pairs: cfg.n_pairs,
        contract_margin: cfg.contract_margin,
        n_sources: cfg.n_sources,
        n_arcs: cfg.n_arcs,
        arc_radius: cfg.arc_radius,
        access_horizon: cfg.access_horizon,
        access_samples: cfg.access_samples,
        lyap_steps: cfg.n_steps,
        lyap_samples: cfg.lyap_samples,
        quad_tol: cfg.quad_tol,
        subperiod_grid: cfg.grid_size,
        subperiod_tol: cfg.subperiod_tol,
        rational_max_denominator: cfg.rational_max_denominator,
        rational_tol: cfg.rational_tol,
        consistency_sigma: cfg.consistency_sigma,
    }
}

fn run_command(
    command: CommandKind,
    cfg: &ExperimentConfig,
) -> Result<Vec<(String, String)>, RunError> {
    match command {
        CommandKind::Simulate => cmd_simulate(cfg),
        CommandKind::Lyapunov => cmd_lyapunov(cfg),
        CommandKind::Subperiods => cmd_subperiods(cfg),
        CommandKind::Contract => cmd_contract(cfg),
        CommandKind::Access => cmd_access(cfg),
        CommandKind::Sync => cmd_sync(cfg),
        CommandKind::Stability => cmd_stability(cfg),
        CommandKind::Pullback => cmd_pullback(cfg),
        CommandKind::Verdict => cmd_verdict(cfg),
        CommandKind::Sweep => cmd_sweep(cfg),
    }
}

fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let omega = NoiseStream::for_sample(cfg.seed, "simulate", 0);
    let mut ens = TrajectoryEnsemble::equispaced(cfg.ensemble_size);
    ens.evolve(&sys, &omega, cfg.horizon, cfg.record_every);
    let mut csv = Csv::new("simulate", "t,diameter");
    for &(t, d) in &ens.diameter_history {
        csv.row([t.to_string(), d.to_string()]);
    }
    Ok(vec![("simulate.csv".to_string(), csv.finish())])
}

fn cmd_lyapunov(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let quad = lyapunov_quadrature(&sys.lift, cfg.quad_tol)
        .map_err(|e| RunError::Internal(format!("lyapunov quadrature: {e}")))?;
    let mc = lyapunov_mc(&sys, cfg.n_steps, cfg.lyap_samples, cfg.seed);
    let diff = (mc.estimate.value - quad.value).abs();
    let limit = cfg.consistency_sigma * mc.estimate.stderr + quad.error_bound;
    if diff > limit {
        return Err(RunError::Internal(format!(
            "lyapunov estimates disagree: quadrature {} vs monte carlo {} \
             (|diff| {diff:e} > limit {limit:e})",
            quad.value, mc.estimate.value
        )));
    }
    let mut csv = Csv::new("lyapunov", "method,n_steps,n_samples,value,stderr");
    csv.row([
        "quadrature".to_string(),
        "0".to_string(),
        quad.panels.to_string(),
        quad.value.to_string(),
        quad.error_bound.to_string(),
    ]);
    csv.row([
        "mc".to_string(),
        cfg.n_steps.to_string(),
        cfg.lyap_samples.to_string(),
        mc.estimate.value.to_string(),
        mc.estimate.stderr.to_string(),
    ]);
    Ok(vec![("lyapunov.csv".to_string(), csv.finish())])
}

fn subperiod_rows(csv: &mut Csv, method: &str, report: &SubperiodReport) {
    let period_count = match report.period_count {
        PeriodCount::Infinite => "infinite".to_string(),
        PeriodCount::Finite(n) => n.to_string(),
    };
    if report.subperiods.is_empty() {
        csv.row([
            method.to_string(),
            period_count,
            "0".to_string(),
            String::new(),
        ]);
    } else {
        for s in &report.subperiods {
            csv.row([
                method.to_string(),
                period_count.clone(),
                report.subperiods.len().to_string(),
                s.to_string(),
            ]);
        }
    }
}

fn cmd_subperiods(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let exact = detect_subperiods(&sys.lift, cfg.grid_size, cfg.subperiod_tol);
    let grid = detect_subperiods_grid(&sys.lift, cfg.grid_size, cfg.subperiod_tol);
    let mut csv = Csv::new("subperiods", "method,period_count,n_subperiods,subperiod");
    subperiod_rows(&mut csv, "exact", &exact);
    subperiod_rows(&mut csv, "grid", &grid);
    Ok(vec![("subperiods.csv".to_string(), csv.finish())])
}

fn cmd_contract(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let pairs = default_pair_set(cfg.n_pairs);
    let results = contractibility_test(
        &sys,
        &pairs,
        cfg.horizon,
        cfg.n_samples,
        cfg.contract_margin,
        cfg.seed,
    );
    let mut csv = Csv::new(
        "contract",
        "pair_id,x0,y0,prob,stderr,min_dist_min,min_dist_q1,min_dist_median,min_dist_q3,min_dist_max",
    );
    for (i, r) in results.iter().enumerate() {
        let [lo, q1, med, q3, hi] = r.min_dist_summary;
        csv.row([
            i.to_string(),
            r.pair.0.pos().to_string(),
            r.pair.1.pos().to_string(),
            r.prob.value.to_string(),
            r.prob.stderr.to_string(),
            lo.to_string(),
            q1.to_string(),
            med.to_string(),
            q3.to_string(),
            hi.to_string(),
        ]);
    }
    Ok(vec![("contract.csv".to_string(), csv.finish())])
}

fn cmd_access(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let report = accessibility_probe(
        &sys,
        cfg.n_sources,
        cfg.n_arcs,
        cfg.arc_radius,
        cfg.access_horizon,
        cfg.access_samples,
        cfg.seed,
    );
    let mut csv = Csv::new("access", "source,arc_center,radius,hit_prob,stderr");
    for (si, source) in report.sources.iter().enumerate() {
        for (ai, center) in report.arc_centers.iter().enumerate() {
            let e = &report.hit_prob[si][ai];
            csv.row([
                source.pos().to_string(),
                center.pos().to_string(),
                report.arc_radius.to_string(),
                e.value.to_string(),
                e.stderr.to_string(),
            ]);
        }
    }
    Ok(vec![("access.csv".to_string(), csv.finish())])
}

fn cmd_sync(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let pairs = default_pair_set(cfg.n_pairs);
    let results = sync_mc(
        &sys,
        &pairs,
        cfg.horizon,
        cfg.n_samples,
        cfg.eps_sync,
        cfg.window,
        cfg.record_every,
        cfg.seed,
    );
    let mut csv = Csv::new("sync", "pair_id,x0,y0,t,median_dist,p_synced,stderr");
    for (i, r) in results.iter().enumerate() {
        for &(t, d) in &r.decay {
            csv.row([
                i.to_string(),
                r.pair.0.pos().to_string(),
                r.pair.1.pos().to_string(),
                t.to_string(),
                d.to_string(),
                r.p_synced.value.to_string(),
                r.p_synced.stderr.to_string(),
            ]);
        }
    }
    Ok(vec![("sync.csv".to_string(), csv.finish())])
}

fn cmd_stability(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let center = CirclePoint::new(cfg.x0);
    let mut csv = Csv::new("stability", "probe,size,epsilon,p_hat,stderr,n_samples");
    let stab = stability_probe(
        &sys,
        center,
        &cfg.radii,
        cfg.horizon,
        cfg.n_samples,
        cfg.eps_sync,
        cfg.seed,
    );
    for (r, e) in &stab {
        csv.row([
            "stability".to_string(),
            r.to_string(),
            cfg.eps_sync.to_string(),
            e.value.to_string(),
            e.stderr.to_string(),
            e.n_samples.to_string(),
        ]);
    }
    for &delta in &cfg.deltas {
        let e = containment_probe(
            &sys,
            center,
            cfg.epsilon,
            delta,
            cfg.horizon,
            cfg.n_samples,
            cfg.contract_margin,
            cfg.seed,
        );
        csv.row([
            "containment".to_string(),
            delta.to_string(),
            cfg.epsilon.to_string(),
            e.value.to_string(),
            e.stderr.to_string(),
            e.n_samples.to_string(),
        ]);
    }
    Ok(vec![("stability.csv".to_string(), csv.finish())])
}

fn cmd_pullback(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let mut csv = Csv::new(
        "pullback",
        "stream_id,T,n_clusters,cluster_index,center,mass,spread,non_atomic",
    );
    for s in 0..cfg.n_streams {
        let omega = NoiseStream::for_sample(cfg.seed, "pullback", s);
        let measure = pullback_measure(&sys, &omega, cfg.pullback_steps, cfg.pullback_grid);
        let report = cluster_atoms(&measure, cfg.merge_radius);
        for (ci, cl) in report.clusters.iter().enumerate() {
            csv.row([
                s.to_string(),
                cfg.pullback_steps.to_string(),
                report.n_clusters().to_string(),
                ci.to_string(),
                cl.center.pos().to_string(),
                cl.mass.to_string(),
                cl.spread.to_string(),
                u8::from(report.non_atomic).to_string(),
            ]);
        }
    }
    Ok(vec![("pullback.csv".to_string(), csv.finish())])
}

fn verdict_rows(csv: &mut Csv, verdict: &SyncVerdict) {
    let cond = |name: &str, o: &crate::analysis::ConditionOutcome, caveat: &str| {
        [
            name.to_string(),
            o.method.to_string(),
            o.estimate
                .as_ref()
                .map(|e| e.value.to_string())
                .unwrap_or_default(),
            o.estimate
                .as_ref()
                .map(|e| e.stderr.to_string())
                .unwrap_or_default(),
            u8::from(o.pass).to_string(),
            caveat.to_string(),
        ]
    };
    let empirical_caveat = |method: &str| {
        if method == "empirical" {
            "verified empirically, not proved"
        } else {
            ""
        }
    };
    csv.row(cond(
        "minimal_set",
        &verdict.minimality,
        empirical_caveat(verdict.minimality.method),
    ));
    csv.row(cond(
        "contractibility",
        &verdict.contractibility,
        empirical_caveat(verdict.contractibility.method),
    ));
    let st = &verdict.stable_trajectories;
    csv.row([
        "stable_trajectories".to_string(),
        "quadrature".to_string(),
        st.lambda_quadrature.value.to_string(),
        st.lambda_quadrature.error_bound.to_string(),
        u8::from(st.pass).to_string(),
        String::new(),
    ]);
    csv.row([
        "stable_trajectories".to_string(),
        "mc".to_string(),
        st.lambda_mc.value.to_string(),
        st.lambda_mc.stderr.to_string(),
        u8::from(st.pass).to_string(),
        String::new(),
    ]);
    for d in &verdict.disqualifiers {
        csv.row([
            "disqualifier".to_string(),
            "exact".to_string(),
            String::new(),
            String::new(),
            "0".to_string(),
            d.to_string(),
        ]);
    }
    csv.row([
        "overall".to_string(),
        "combined".to_string(),
        verdict.verdict.to_string(),
        String::new(),
        u8::from(verdict.verdict == Verdict::StablySynchronising).to_string(),
        verdict.caveats.join("; "),
    ]);
}

fn cmd_verdict(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let sys = system(cfg);
    let settings = verdict_settings(cfg);
    let verdict = render_verdict(&sys, &settings).map_err(|e| RunError::Internal(e.to_string()))?;
    let mut csv = Csv::new("verdict", "condition,method,value,stderr,pass,caveat");
    verdict_rows(&mut csv, &verdict);
    Ok(vec![("verdict.csv".to_string(), csv.finish())])
}

fn cmd_sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, String)>, RunError> {
    let param = cfg
        .sweep_param
        .clone()
        .ok_or_else(|| RunError::Config("sweep requires `sweep_param` in the config".into()))?;
    let settings = verdict_settings(cfg);
    let mut csv = Csv::new(
        "sweep",
        "param,value,verdict,lambda,lambda_bound,lambda_mc,lambda_mc_stderr",
    );
    let mut k: u64 = 0;
    loop {
        let v = cfg.sweep_from + k as f64 * cfg.sweep_step;
        if v > cfg.sweep_to + cfg.sweep_step * 1e-9 {
            break;
        }
        let lift = match param.as_str() {
            "a" => Lift::sine(v),
            "c" => Lift::rotation(v),
            other => {
                return Err(RunError::Config(format!(
                    "unsupported sweep parameter `{other}`"
                )))
            }
        };
        let sys = RandomMapSystem::from_lift(lift);
        let verdict =
            render_verdict(&sys, &settings).map_err(|e| RunError::Internal(e.to_string()))?;
        let st = &verdict.stable_trajectories;
        csv.row([
            param.clone(),
            v.to_string(),
            verdict.verdict.to_string(),
            st.lambda_quadrature.value.to_string(),
            st.lambda_quadrature.error_bound.to_string(),
            st.lambda_mc.value.to_string(),
            st.lambda_mc.stderr.to_string(),
        ]);
        k += 1;
    }
    Ok(vec![("sweep.csv".to_string(), csv.finish())])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_escaping_quotes_awkward_fields() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn verdict_settings_mirror_the_config() {
        let cfg = ExperimentConfig {
            seed: 9,
            grid_size: 512,
            n_steps: 77,
            ..ExperimentConfig::default()
        };
        let s = verdict_settings(&cfg);
        assert_eq!(s.seed, 9);
        assert_eq!(s.subperiod_grid, 512);
        assert_eq!(s.lyap_steps, 77);
        assert_eq!(s.n_pairs, cfg.n_pairs);
    }

    #[test]
    fn every_subcommand_maps_to_a_config_kind() {
        let all = [
            CommandKind::Simulate,
            CommandKind::Lyapunov,
            CommandKind::Subperiods,
            CommandKind::Contract,
            CommandKind::Access,
            CommandKind::Sync,
            CommandKind::Stability,
            CommandKind::Pullback,
            CommandKind::Verdict,
            CommandKind::Sweep,
        ];
        let kinds: Vec<ExperimentKind> = all.iter().map(|c| c.kind()).collect();
        assert_eq!(kinds, ExperimentKind::ALL);
    }

    #[test]
    fn cli_parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "rds-sync",
            "lyapunov",
            "--seed",
            "42",
            "--threads",
            "2",
            "--out",
            "results",
        ])
        .unwrap();
        assert_eq!(cli.seed, Some(42));
        assert_eq!(cli.threads, Some(2));
        assert!(matches!(cli.command, CommandKind::Lyapunov));
    }
}
