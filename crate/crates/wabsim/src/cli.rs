//! Command implementations behind the `wabsim` binary: scenario loading,
//! validation reports, artifact-writing runs, and calibration checks.
//!
//! Everything here is a plain library function so integration tests and
//! examples can drive the exact code the binary runs. Exit codes: 0 success,
//! 1 failed validation or missed calibration targets, 2 I/O or parse errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{
    run, run_o2i, EngineError, MeasurementRecord, O2iReport, RunOutput, Scenario, SimEvent,
};

/// A failed command, mapped to a process exit code by the binary.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("scenario is invalid:\n{0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no artifacts found in {0} (expected summary.json or o2i_report.json)")]
    NoArtifacts(PathBuf),
}

impl CliError {
    /// 2 for I/O and parse failures, 1 for everything semantic.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::NoArtifacts(_) => 2,
            CliError::Invalid(_) | CliError::Engine(_) => 1,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Reads and parses a scenario file without validating it.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let json = read_file(path)?;
    Scenario::from_json_str(&json).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// What `validate` prints (as pretty JSON).
#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub scenario: String,
    pub ok: bool,
    pub problems: Vec<String>,
    pub nodes: usize,
    pub duration_s: f64,
    pub ticks: u64,
    /// "mobility" for timeline runs, "placement_study" when `o2i` is set.
    pub mode: String,
}

/// Parses and validates a scenario, reporting every problem found.
pub fn cmd_validate(path: &Path) -> Result<ValidateReport, CliError> {
    let sc = load_scenario(path)?;
    let problems: Vec<String> = sc.validate().iter().map(|e| e.to_string()).collect();
    let ticks = if sc.tick_s > 0.0 {
        (sc.duration_s / sc.tick_s).round().max(0.0) as u64
    } else {
        0
    };
    Ok(ValidateReport {
        scenario: sc.name.clone(),
        ok: problems.is_empty(),
        problems,
        nodes: sc.nodes.len(),
        duration_s: sc.duration_s,
        ticks,
        mode: if sc.o2i.is_some() {
            "placement_study".into()
        } else {
            "mobility".into()
        },
    })
}

/// On-disk encoding of the measurement timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Files produced by `run`.
#[derive(Debug, Clone, Serialize)]
pub struct RunArtifacts {
    pub scenario: String,
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Header of `records.csv`.
pub const RECORDS_CSV_HEADER: &str =
    "t,x,y,fr2_rsrp,fr2_sinr,fr2_mcs,fr2_bler,fr1_mcs,fr1_bler,e2e_dl,e2e_ul,ssb,csirs";

/// Renders the per-tick records in the stable CSV layout.
pub fn records_csv(records: &[MeasurementRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(RECORDS_CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{:.3},{:.3},{:.3},{:.2},{:.2},{},{:.6},{},{:.6},{:.0},{:.0},{},{}",
            r.t_s,
            r.x_m,
            r.y_m,
            r.fr2.rsrp_dbm,
            r.fr2.sinr_db,
            r.fr2.mcs,
            r.fr2.bler,
            r.fr1.mcs,
            r.fr1.bler,
            r.e2e_dl_bps,
            r.e2e_ul_bps,
            r.fr2.serving_ssb,
            r.fr2.serving_csirs,
        )
        .expect("string write");
    }
    out
}

fn events_jsonl(events: &[SimEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&serde_json::to_string(ev).expect("serializable"));
        out.push('\n');
    }
    out
}

/// Roll-up statistics of one mobility run, consumed by `calibrate-check`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub ticks: usize,
    pub peak_fr2_rsrp_dbm: f64,
    pub min_fr2_rsrp_dbm: f64,
    pub outage_floor_dbm: f64,
    pub handovers: usize,
    pub ssb_switches: u64,
    pub csirs_switches: u64,
    pub mean_ul_bps: f64,
    /// Pearson correlation of backhaul RSRP against delivered DL goodput.
    pub rsrp_goodput_correlation: Option<f64>,
    pub los_window_s: Option<[f64; 2]>,
    pub los_mean_dl_bps: Option<f64>,
    pub los_ssb_switches: Option<u64>,
    pub deep_nlos_window_s: Option<[f64; 2]>,
    pub deep_nlos_max_dl_bps: Option<f64>,
    pub deep_nlos_ticks: Option<usize>,
    pub first_dl_collapse: Option<CollapseInfo>,
}

/// The first tick where delivered DL goodput fell under half of its
/// line-of-sight mean.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CollapseInfo {
    pub t_s: f64,
    pub e2e_dl_bps: f64,
    pub fr2_bler: f64,
    pub fr2_rsrp_dbm: f64,
    /// RSRP still cleared the outage floor when goodput collapsed.
    pub above_outage_floor: bool,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return None;
    }
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

fn in_window(t: f64, w: [f64; 2]) -> bool {
    t >= w[0] - 1e-9 && t <= w[1] + 1e-9
}

/// Computes the roll-up of a finished run.
pub fn summarize(sc: &Scenario, out: &RunOutput) -> RunSummary {
    let rs = &out.records;
    let peak = rs.iter().map(|r| r.fr2.rsrp_dbm).fold(f64::MIN, f64::max);
    let min = rs.iter().map(|r| r.fr2.rsrp_dbm).fold(f64::MAX, f64::min);
    let handovers = out
        .events
        .iter()
        .filter(|e| matches!(e.kind, crate::engine::SimEventKind::HandoverTriggered { .. }))
        .count();
    let ssb_switches = rs.iter().filter(|r| r.ssb_switch).count() as u64;
    let csirs_switches = rs.iter().filter(|r| r.csirs_switch).count() as u64;
    let corr = pearson(
        &rs.iter()
            .map(|r| (r.fr2.rsrp_dbm, r.e2e_dl_bps))
            .collect::<Vec<_>>(),
    );

    let los = sc.segments.los;
    let los_mean_dl = los.and_then(|w| {
        mean(
            rs.iter()
                .filter(|r| in_window(r.t_s, w))
                .map(|r| r.e2e_dl_bps),
        )
    });
    let los_ssb = los.map(|w| {
        rs.iter()
            .filter(|r| in_window(r.t_s, w) && r.ssb_switch)
            .count() as u64
    });
    let deep = sc.segments.deep_nlos;
    let deep_rs = |w: [f64; 2]| rs.iter().filter(move |r| in_window(r.t_s, w));
    let deep_max_dl = deep.and_then(|w| deep_rs(w).map(|r| r.e2e_dl_bps).reduce(f64::max));
    let deep_ticks = deep.map(|w| deep_rs(w).count());

    let collapse = los_mean_dl.and_then(|m| {
        let threshold = 0.5 * m;
        rs.iter()
            .find(|r| r.e2e_dl_bps < threshold)
            .map(|r| CollapseInfo {
                t_s: r.t_s,
                e2e_dl_bps: r.e2e_dl_bps,
                fr2_bler: r.fr2.bler,
                fr2_rsrp_dbm: r.fr2.rsrp_dbm,
                above_outage_floor: r.fr2.rsrp_dbm > sc.outage_floor_dbm,
            })
    });

    RunSummary {
        scenario: out.scenario_name.clone(),
        seed: out.seed,
        ticks: rs.len(),
        peak_fr2_rsrp_dbm: peak,
        min_fr2_rsrp_dbm: min,
        outage_floor_dbm: sc.outage_floor_dbm,
        handovers,
        ssb_switches,
        csirs_switches,
        mean_ul_bps: mean(rs.iter().map(|r| r.e2e_ul_bps)).unwrap_or(0.0),
        rsrp_goodput_correlation: corr,
        los_window_s: los,
        los_mean_dl_bps: los_mean_dl,
        los_ssb_switches: los_ssb,
        deep_nlos_window_s: deep,
        deep_nlos_max_dl_bps: deep_max_dl,
        deep_nlos_ticks: deep_ticks,
        first_dl_collapse: collapse,
    }
}

/// Layout of `se_table.csv`.
pub const SE_TABLE_CSV_HEADER: &str =
    "system,position,x,y,rsrp_dbm,dl_bps,ul_bps,dl_se_bps_hz,ul_se_bps_hz";

/// Renders the placement-study table in the stable CSV layout.
pub fn se_table_csv(sc: &Scenario, report: &O2iReport) -> String {
    let positions = sc.o2i.as_ref().map(|s| s.positions.as_slice()).unwrap_or(&[]);
    let mut out = String::new();
    out.push_str(SE_TABLE_CSV_HEADER);
    out.push('\n');
    for (system, cells) in [("fr2_only", &report.fr2_only), ("wab", &report.wab)] {
        for c in cells {
            let [x, y] = positions.get(c.position - 1).copied().unwrap_or([0.0, 0.0]);
            writeln!(
                out,
                "{system},{},{x:.3},{y:.3},{:.2},{:.0},{:.0},{:.6},{:.6}",
                c.position, c.rsrp_dbm, c.dl_bps, c.ul_bps, c.dl_se_bps_hz, c.ul_se_bps_hz,
            )
            .expect("string write");
        }
    }
    out
}

/// Runs a scenario file and writes its artifacts into `out_dir`.
///
/// Mobility scenarios produce `records.csv` (or `.json`), `events.jsonl`,
/// `summary.json`, and `network.json`; placement studies produce
/// `se_table.csv`, `o2i_report.json`, `events.jsonl`, and `network.json`.
pub fn cmd_run(
    path: &Path,
    out_dir: &Path,
    seed: Option<u64>,
    format: OutputFormat,
) -> Result<RunArtifacts, CliError> {
    let mut sc = load_scenario(path)?;
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    let problems = sc.validate();
    if !problems.is_empty() {
        let joined = problems
            .iter()
            .map(|e| format!("  - {e}"))
            .collect::<Vec<_>>()
            .join("\n");
        return Err(CliError::Invalid(joined));
    }
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let mut files = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<(), CliError> {
        let p = out_dir.join(name);
        write_file(&p, &contents)?;
        log::debug!("wrote {}", p.display());
        files.push(p);
        Ok(())
    };

    if sc.o2i.is_some() {
        let out = run_o2i(&sc)?;
        emit("se_table.csv", se_table_csv(&sc, &out.report))?;
        emit("o2i_report.json", to_json_pretty(&out.report))?;
        emit("events.jsonl", events_jsonl(&out.events))?;
        emit("network.json", to_json_pretty(&out.network))?;
    } else {
        let out = run(&sc)?;
        match format {
            OutputFormat::Csv => emit("records.csv", records_csv(&out.records))?,
            OutputFormat::Json => emit("records.json", to_json_pretty(&out.records))?,
        }
        emit("events.jsonl", events_jsonl(&out.events))?;
        emit("summary.json", to_json_pretty(&summarize(&sc, &out)))?;
        emit("network.json", to_json_pretty(&out.network))?;
    }

    Ok(RunArtifacts {
        scenario: sc.name,
        out_dir: out_dir.to_path_buf(),
        files,
    })
}

/// One calibration target and what the artifacts showed.
#[derive(Debug, Clone, Serialize)]
pub struct TargetCheck {
    pub name: String,
    pub target: String,
    pub observed: String,
    pub pass: bool,
}

impl TargetCheck {
    fn new(name: &str, target: impl Into<String>, observed: impl Into<String>, pass: bool) -> Self {
        TargetCheck {
            name: name.into(),
            target: target.into(),
            observed: observed.into(),
            pass,
        }
    }
}

/// What `calibrate-check` prints.
#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub checked_dir: PathBuf,
    pub checks: Vec<TargetCheck>,
    pub passed: usize,
    pub failed: usize,
}

impl CalibrationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "absent".into(), |v| format!("{v:.4}"))
}

fn vehicular_checks(s: &RunSummary) -> Vec<TargetCheck> {
    let mut checks = Vec::new();
    checks.push(TargetCheck::new(
        "peak_backhaul_rsrp",
        "within [-85, -81] dBm",
        format!("{:.2} dBm", s.peak_fr2_rsrp_dbm),
        (-85.0..=-81.0).contains(&s.peak_fr2_rsrp_dbm),
    ));
    checks.push(TargetCheck::new(
        "los_mean_dl_goodput",
        "within [40e6, 60e6] bps",
        fmt_opt(s.los_mean_dl_bps),
        s.los_mean_dl_bps.is_some_and(|v| (40e6..=60e6).contains(&v)),
    ));
    checks.push(TargetCheck::new(
        "mean_ul_goodput",
        "within [0.3e6, 3e6] bps",
        format!("{:.0} bps", s.mean_ul_bps),
        (0.3e6..=3e6).contains(&s.mean_ul_bps),
    ));
    checks.push(TargetCheck::new(
        "deep_nlos_dl_goodput",
        "exactly 0 bps over a non-empty window",
        fmt_opt(s.deep_nlos_max_dl_bps),
        s.deep_nlos_max_dl_bps == Some(0.0) && s.deep_nlos_ticks.is_some_and(|n| n > 0),
    ));
    checks.push(TargetCheck::new(
        "rsrp_goodput_correlation",
        "Pearson r > 0.6",
        fmt_opt(s.rsrp_goodput_correlation),
        s.rsrp_goodput_correlation.is_some_and(|r| r > 0.6),
    ));
    let collapse_ok = s.first_dl_collapse.as_ref().is_some_and(|c| {
        c.fr2_bler > 0.2 && c.above_outage_floor
    });
    checks.push(TargetCheck::new(
        "collapse_precedes_outage",
        "first DL collapse has BLER > 0.2 with RSRP above the outage floor",
        s.first_dl_collapse.as_ref().map_or_else(
            || "no collapse".into(),
            |c| {
                format!(
                    "t={:.1}s bler={:.4} rsrp={:.2} dBm (floor {:.0})",
                    c.t_s,
                    c.fr2_bler,
                    c.fr2_rsrp_dbm,
                    s.outage_floor_dbm
                )
            },
        ),
        collapse_ok,
    ));
    checks.push(TargetCheck::new(
        "beam_stability",
        "0 SSB switches inside the LOS window, >= 1 CSI-RS switch overall",
        format!(
            "los_ssb_switches={}, csirs_switches={}",
            s.los_ssb_switches.map_or_else(|| "absent".into(), |v| v.to_string()),
            s.csirs_switches
        ),
        s.los_ssb_switches == Some(0) && s.csirs_switches >= 1,
    ));
    checks
}

fn o2i_checks(r: &O2iReport) -> Vec<TargetCheck> {
    let mut checks = Vec::new();
    let near = [1usize, 2];
    let near_ok = near.iter().all(|&p| {
        let direct = r.fr2_only.iter().find(|c| c.position == p);
        let relay = r.wab.iter().find(|c| c.position == p);
        matches!((direct, relay), (Some(d), Some(w)) if d.dl_se_bps_hz > w.dl_se_bps_hz)
    });
    checks.push(TargetCheck::new(
        "direct_dl_se_wins_near_the_facade",
        "fr2_only DL SE > wab DL SE at positions 1 and 2",
        summarize_se(r, &near, |c| c.dl_se_bps_hz),
        near_ok,
    ));
    let deep = [3usize, 5];
    let deep_ok = deep.iter().all(|&p| {
        let direct = r.fr2_only.iter().find(|c| c.position == p);
        let relay = r.wab.iter().find(|c| c.position == p);
        matches!((direct, relay), (Some(d), Some(w)) if w.ul_se_bps_hz >= d.ul_se_bps_hz)
    });
    checks.push(TargetCheck::new(
        "relay_ul_se_wins_deep_indoors",
        "wab UL SE >= fr2_only UL SE at positions 3 and 5",
        summarize_se(r, &deep, |c| c.ul_se_bps_hz),
        deep_ok,
    ));
    let ext_ok = r.extension.len() >= 2
        && r.extension[1..].iter().all(|alt| {
            alt.dl_bps > r.extension[0].dl_bps && alt.ul_bps > r.extension[0].ul_bps
        });
    let ext_obs = r
        .extension
        .iter()
        .map(|e| format!("wab@{}: dl={:.0} ul={:.0}", e.wab_position, e.dl_bps, e.ul_bps))
        .collect::<Vec<_>>()
        .join("; ");
    checks.push(TargetCheck::new(
        "moving_the_relay_extends_coverage",
        "every alternative placement beats the baseline in DL and UL goodput",
        ext_obs,
        ext_ok,
    ));
    checks
}

fn summarize_se(r: &O2iReport, positions: &[usize], f: impl Fn(&crate::engine::SeCell) -> f64) -> String {
    positions
        .iter()
        .map(|&p| {
            let d = r.fr2_only.iter().find(|c| c.position == p).map(&f);
            let w = r.wab.iter().find(|c| c.position == p).map(&f);
            format!("p{p}: fr2_only={} wab={}", fmt_opt(d), fmt_opt(w))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Checks run artifacts in `dir` against the shipped calibration targets.
///
/// Mobility artifacts (`summary.json`) are held to the vehicular targets and
/// study artifacts (`o2i_report.json`) to the indoor-coverage targets;
/// a directory containing both is checked against both.
pub fn cmd_calibrate_check(dir: &Path) -> Result<CalibrationReport, CliError> {
    let summary_path = dir.join("summary.json");
    let report_path = dir.join("o2i_report.json");
    let mut checks = Vec::new();

    if summary_path.exists() {
        let summary: RunSummary =
            serde_json::from_str(&read_file(&summary_path)?).map_err(|source| CliError::Parse {
                path: summary_path.clone(),
                source,
            })?;
        checks.extend(vehicular_checks(&summary));
    }
    if report_path.exists() {
        let report: O2iReport =
            serde_json::from_str(&read_file(&report_path)?).map_err(|source| CliError::Parse {
                path: report_path.clone(),
                source,
            })?;
        checks.extend(o2i_checks(&report));
    }
    if checks.is_empty() {
        return Err(CliError::NoArtifacts(dir.to_path_buf()));
    }

    let passed = checks.iter().filter(|c| c.pass).count();
    let failed = checks.len() - passed;
    Ok(CalibrationReport {
        checked_dir: dir.to_path_buf(),
        checks,
        passed,
        failed,
    })
}
