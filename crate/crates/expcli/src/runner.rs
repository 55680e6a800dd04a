//! Experiment dispatch and deterministic persistence.
//!
//! A run writes one CSV per measured series, a JSON report, and a manifest
//! into the output directory. Every file lands via temp-then-rename, so an
//! interrupted run never leaves a partial file at its final path. Identical
//! configuration and seed reproduce bit-identical CSV bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use sha2::{Digest, Sha256};

use kdvbbm_core::dynamics::{
    energy_drift_rate, integrate_fixed, solve_to, split_point, SolveConfig, Trajectory,
};
use kdvbbm_core::error::Error as CoreError;
use kdvbbm_core::estimates::{
    bilinear_sharpness_form, corpus_sweep, max_and_mean, EstimateFamily,
};
use kdvbbm_core::pathology::{illposed_scan, inflation_experiment, series_remainder_check};
use kdvbbm_core::report::{fit_exponent, CheckOp, ExperimentReport, Series};
use kdvbbm_core::rng::CounterRng;
use kdvbbm_core::spectral::{self, SobolevIndex, SpectralField};
use kdvbbm_core::symbols::SymbolTable;
use kdvbbm_core::Result as CoreResult;

use crate::config::{ExpParams, ResolvedConfig, SimParams};

pub struct RunOutput {
    pub report: ExperimentReport,
    pub dir: PathBuf,
    pub run_id: String,
}

fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

fn solve_config(cfg: &ResolvedConfig, diag_s: &[f64]) -> SolveConfig {
    SolveConfig {
        dt: cfg.dt,
        picard_iters: cfg.picard_iters,
        c_s: cfg.c_s,
        tol: cfg.tol,
        scheme: cfg.scheme,
        diag_s: if diag_s.is_empty() {
            vec![1.0]
        } else {
            diag_s.to_vec()
        },
        ..SolveConfig::default()
    }
}

fn initial_field(n: usize, sim: &SimParams) -> CoreResult<SpectralField> {
    let mut f = SpectralField::zero(n);
    for &(k, a) in &sim.sin {
        f = f.add(&SpectralField::sin_wave(n, k, a)?)?;
    }
    for &(k, a) in &sim.cos {
        f = f.add(&SpectralField::cos_wave(n, k, a)?)?;
    }
    Ok(f)
}

fn trajectory_series(traj: &Trajectory, s_list: &[f64]) -> Series {
    let mut columns = vec!["t".to_string(), "E".to_string(), "mean".to_string()];
    for s in s_list {
        columns.push(format!("H_{s}"));
    }
    let rows = (0..traj.len())
        .map(|i| {
            let mut row = vec![traj.times[i], traj.energy[i], traj.means[i].re];
            row.extend(&traj.norms[i]);
            row
        })
        .collect();
    Series {
        name: "trajectory".to_string(),
        columns,
        rows,
    }
}

fn mean_drift(traj: &Trajectory) -> f64 {
    traj.means
        .iter()
        .map(|m| (m - traj.means[0]).norm())
        .fold(0.0, f64::max)
}

fn run_simulate(cfg: &ResolvedConfig, sim: &SimParams) -> CoreResult<(ExperimentReport, Vec<(PathBuf, String)>)> {
    let table = SymbolTable::build(&cfg.params, cfg.n)?;
    let scfg = solve_config(cfg, &sim.s_list);
    let eta0 = initial_field(cfg.n, sim)?;
    let traj = solve_to(&eta0, sim.t_end, &scfg, &table)?;

    let mut report = ExperimentReport::new("simulate");
    report.series.push(trajectory_series(&traj, &scfg.diag_s));
    report.add_check("mean invariance", mean_drift(&traj), 1e-13, CheckOp::Le);
    let last = traj.last_state().expect("trajectory nonempty");
    report.add_check(
        "final reality defect",
        last.reality_defect(),
        1e-12 * (1.0 + last.l1()),
        CheckOp::Le,
    );

    let mut files = Vec::new();
    if sim.snapshots {
        let every = sim.snapshot_every.max(1);
        for (i, state) in traj.states.iter().enumerate().step_by(every) {
            let mut buf = Vec::new();
            spectral::write_snapshot(state, &mut buf)?;
            files.push((
                PathBuf::from(format!("snapshots/step_{i:06}.csv")),
                String::from_utf8(buf).expect("snapshot is ascii"),
            ));
        }
    }
    Ok((report, files))
}

fn run_energy_audit(cfg: &ResolvedConfig, sim: &SimParams) -> CoreResult<ExperimentReport> {
    let table = SymbolTable::build(&cfg.params, cfg.n)?;
    let scfg = solve_config(cfg, &sim.s_list);
    let eta0 = initial_field(cfg.n, sim)?;
    let steps = ((sim.t_end / scfg.dt).round() as usize).max(1);
    let dt = sim.t_end / steps as f64;
    let traj = integrate_fixed(&eta0, 0.0, steps, dt, &scfg, &table)?;

    let mut report = ExperimentReport::new("energy-audit");
    report.series.push(trajectory_series(&traj, &scfg.diag_s));
    report.add_check("mean invariance", mean_drift(&traj), 1e-13, CheckOp::Le);

    if cfg.params.is_energy_conserving() {
        let e0 = traj.energy[0];
        let drift = traj
            .energy
            .iter()
            .map(|e| (e - e0).abs())
            .fold(0.0, f64::max)
            / e0.abs().max(1e-300);
        report.add_check("max relative energy drift", drift, 1e-8, CheckOp::Le);
    } else {
        // centered finite difference of the measured energy against the
        // analytic drift rate, wherever the rate is resolvable
        let mut worst = 0.0f64;
        let mut compared = 0usize;
        for i in 1..traj.len() - 1 {
            let fd = (traj.energy[i + 1] - traj.energy[i - 1])
                / (traj.times[i + 1] - traj.times[i - 1]);
            if fd.abs() <= 1e-10 {
                continue;
            }
            let rate = energy_drift_rate(&traj.states[i], &cfg.params);
            worst = worst.max(((fd - rate) / rate).abs());
            compared += 1;
        }
        report.add_check(
            "drift identity dE/dt vs (gamma - 7/48) integral",
            worst,
            1e-4,
            CheckOp::Le,
        );
        report.add_check("drift identity sample count", compared as f64, 3.0, CheckOp::Ge);
    }
    Ok(report)
}

fn run_estimates(
    cfg: &ResolvedConfig,
    p: &crate::config::EstimatesParams,
) -> CoreResult<ExperimentReport> {
    let n1 = p.n;
    let n2 = 2 * p.n;
    let table = SymbolTable::build(&cfg.params, 3 * n2)?;
    let rng = CounterRng::new(cfg.seed);
    let mut report = ExperimentReport::new("estimates");

    let combos: Vec<(EstimateFamily, Vec<f64>)> = vec![
        (EstimateFamily::BilinearOmega, p.s_bilinear.clone()),
        (EstimateFamily::TauPlain, p.s_tau.clone()),
        (EstimateFamily::TauDerivative, vec![1.0]),
        (EstimateFamily::PsiCubic, p.s_psi_cubic.clone()),
        (EstimateFamily::PsiCubicDerivative, vec![1.0]),
        (EstimateFamily::PsiGrad, p.s_psi_grad.clone()),
        (EstimateFamily::PsiGradDerivative, vec![1.0]),
    ];
    for (family, s_values) in combos {
        let mut rows = Vec::new();
        for &s in &s_values {
            let idx = SobolevIndex(s);
            let a = corpus_sweep(family, idx, n1, p.samples, &rng, &table)?;
            let b = corpus_sweep(family, idx, n2, p.samples, &rng, &table)?;
            let (max1, mean1) = max_and_mean(&a);
            let (max2, mean2) = max_and_mean(&b);
            rows.push(vec![s, n1 as f64, max1, mean1]);
            rows.push(vec![s, n2 as f64, max2, mean2]);
            report.add_check(
                &format!("{} s={s}: max stable under doubling", family.name()),
                (max2 - max1).abs() / max1,
                0.05,
                CheckOp::Lt,
            );
        }
        report.add_series(family.name(), &["s", "n", "max_ratio", "mean_ratio"], rows);
    }

    // sharpness witness of the bilinear bound: slope -2s in N
    let mut rows = Vec::new();
    for &s in &p.sharpness_s {
        let pts: Vec<(f64, f64)> = p
            .sharpness_n
            .iter()
            .map(|&n| {
                bilinear_sharpness_form(n, SobolevIndex(s)).map(|v| (n as f64, v))
            })
            .collect::<CoreResult<_>>()?;
        for &(n, v) in &pts {
            rows.push(vec![s, n, v]);
        }
        let (slope, stderr) = fit_exponent(&pts)?;
        if s == 0.0 {
            report.add_fit("sharpness slope s=0", slope, stderr, 0.0, f64::INFINITY, false);
            report.add_check("sharpness slope s=0 within 0.05", slope.abs(), 0.05, CheckOp::Le);
        } else {
            report.add_fit(
                &format!("sharpness slope s={s}"),
                slope,
                stderr,
                -2.0 * s,
                0.10,
                true,
            );
        }
    }
    report.add_series("sharpness", &["s", "n", "value"], rows);
    Ok(report)
}

fn run_illposed(
    cfg: &ResolvedConfig,
    p: &crate::config::IllposedParams,
) -> CoreResult<ExperimentReport> {
    let n_max = *p.n_list.iter().max().expect("validated nonempty");
    let table = SymbolTable::build(&cfg.params, 2 * (n_max.max(p.series_n) + p.k0))?;
    let mut report = illposed_scan(&p.n_list, p.k0, SobolevIndex(p.s), p.t, &table)?;

    // analytic-series remainder at one scale rides along with the scan
    let scfg = solve_config(cfg, &[1.0]);
    let series = series_remainder_check(
        p.series_eps,
        p.series_n,
        p.k0,
        p.t,
        SobolevIndex(p.s),
        &scfg,
        &table,
    )?;
    report.series.extend(series.series);
    report.fits.extend(series.fits);
    report.checks.extend(series.checks);
    report.passed &= series.passed;
    Ok(report)
}

fn run_inflate(
    cfg: &ResolvedConfig,
    p: &crate::config::InflateParams,
) -> CoreResult<ExperimentReport> {
    let k_max = *p.k1_list.iter().max().expect("validated nonempty");
    let table = SymbolTable::build(&cfg.params, 2 * (k_max + 1))?;
    let scfg = solve_config(cfg, &[1.0]);
    inflation_experiment(
        &p.k1_list,
        p.sigma,
        p.theta,
        SobolevIndex(p.s),
        p.t,
        &scfg,
        &table,
    )
}

/// Deterministic rough-tail data for the splitting runs: coefficients of
/// modulus ⟨k⟩^{-(s+tail)} with seeded phases, sitting in H^s with a genuine
/// high-frequency tail.
pub fn split_data_field(n: usize, s: f64, tail: f64, seed: u64) -> SpectralField {
    let rng = CounterRng::new(seed);
    let mut f = SpectralField::zero(n);
    for k in 1..=n as i64 {
        let amp = (1.0 + (k * k) as f64).powf(-(s + tail) / 2.0);
        let phase = 2.0 * std::f64::consts::PI * rng.stream(k as u64).uniform();
        let c = num_complex::Complex64::from_polar(amp, phase);
        f.set_coeff(k, c).expect("in range");
        f.set_coeff(-k, c.conj()).expect("in range");
    }
    f
}

fn run_split(cfg: &ResolvedConfig, p: &crate::config::SplitParams) -> CoreResult<ExperimentReport> {
    let table = SymbolTable::build(&cfg.params, p.field_n)?;
    let scfg = solve_config(cfg, &[1.0]);
    let eta0 = split_data_field(p.field_n, p.s, p.tail, cfg.seed);
    let s = SobolevIndex(p.s);

    let mut report = ExperimentReport::new("split");
    let mut rows = Vec::new();
    let mut h_pts = Vec::new();
    let mut u_scaled = Vec::new();
    let mut worst_consistency = 0.0f64;
    for &cut in &p.cuts {
        let point = split_point(&eta0, s, cut, &scfg, &table)?;
        let u_ratio = point.u_h2 / (cut as f64).powf(2.0 - p.s);
        rows.push(vec![
            cut as f64,
            point.t0,
            point.u_h2,
            point.h_h2,
            u_ratio,
            point.energy_increment,
            point.consistency_h1,
        ]);
        h_pts.push((cut as f64, point.h_h2));
        u_scaled.push(u_ratio);
        worst_consistency = worst_consistency.max(point.consistency_h1);
    }
    report.add_series(
        "split",
        &["n_cut", "t0", "u_h2", "h_h2", "u_h2_over_scale", "energy_increment", "consistency_h1"],
        rows,
    );
    let (slope, stderr) = fit_exponent(&h_pts)?;
    report.add_fit("h_smoothing_vs_cut", slope, stderr, p.s - 3.0, 0.15, true);
    let u_max = u_scaled.iter().cloned().fold(0.0, f64::max);
    let u_min = u_scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    report.add_check("u_h2 / N^{2-s} bounded across sweep", u_max / u_min, 4.0, CheckOp::Le);
    report.add_check(
        "split consistency vs unsplit solve (H1)",
        worst_consistency,
        1e-9,
        CheckOp::Le,
    );
    Ok(report)
}

/// Pure dispatch: run the experiment and return its report plus any extra
/// deterministic files (snapshots).
pub fn execute(cfg: &ResolvedConfig) -> CoreResult<(ExperimentReport, Vec<(PathBuf, String)>)> {
    let mut out = match &cfg.exp {
        ExpParams::Simulate(p) => run_simulate(cfg, p)?,
        ExpParams::EnergyAudit(p) => (run_energy_audit(cfg, p)?, Vec::new()),
        ExpParams::Estimates(p) => (run_estimates(cfg, p)?, Vec::new()),
        ExpParams::IllposedScan(p) => (run_illposed(cfg, p)?, Vec::new()),
        ExpParams::Inflate(p) => (run_inflate(cfg, p)?, Vec::new()),
        ExpParams::Split(p) => (run_split(cfg, p)?, Vec::new()),
    };
    out.0.experiment = cfg.kind.name().to_string();
    let prev = out.0.inputs.take();
    out.0.set_inputs(merge_inputs(prev, cfg));
    Ok(out)
}

fn merge_inputs(existing: serde_json::Value, cfg: &ResolvedConfig) -> serde_json::Value {
    let mut map = match existing {
        serde_json::Value::Object(m) => m,
        serde_json::Value::Null => serde_json::Map::new(),
        other => {
            let mut m = serde_json::Map::new();
            m.insert("experiment_inputs".into(), other);
            m
        }
    };
    map.insert(
        "config".into(),
        serde_json::to_value(cfg).expect("config serializes"),
    );
    serde_json::Value::Object(map)
}

fn series_csv(series: &Series) -> String {
    let mut out = String::new();
    out.push_str(&series.columns.join(","));
    out.push('\n');
    for row in &series.rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            let _ = write!(out, "{}", fmt_g17(*v));
            first = false;
        }
        out.push('\n');
    }
    out
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn run_id(cfg: &ResolvedConfig) -> String {
    let blob = serde_json::to_string(cfg).expect("config serializes");
    let digest = Sha256::digest(blob.as_bytes());
    let mut s = String::with_capacity(40);
    for b in digest.iter().take(20) {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// Run, then persist every artifact atomically. Experiment failures are
/// recorded in the report (with whatever series were produced) rather than
/// aborting the write.
pub fn run_and_persist(cfg: &ResolvedConfig) -> anyhow::Result<RunOutput> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let (mut report, files) = match execute(cfg) {
        Ok(out) => out,
        Err(e) => {
            let mut rep = ExperimentReport::new(cfg.kind.name());
            rep.set_inputs(merge_inputs(serde_json::Value::Null, cfg));
            if let CoreError::BlowUp { t, partial, .. } = &e {
                if let Some(traj) = partial {
                    rep.series.push(trajectory_series(traj, &[1.0]));
                }
                rep.record_error(format!("blow-up at t = {t}"));
            } else {
                rep.record_error(e.to_string());
            }
            (rep, Vec::new())
        }
    };
    report.timing_s = clock.elapsed().as_secs_f64();

    let dir = cfg.out.clone();
    fs::create_dir_all(&dir)?;
    for series in &report.series {
        let path = dir.join(format!("{}.csv", series.name));
        write_atomic(&path, series_csv(series).as_bytes())?;
    }
    for (rel, content) in &files {
        write_atomic(&dir.join(rel), content.as_bytes())?;
    }
    write_atomic(
        &dir.join("report.json"),
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;

    let id = run_id(cfg);
    let manifest = serde_json::json!({
        "run_id": id,
        "experiment": cfg.kind.name(),
        "preset": cfg.preset,
        "params": cfg.params,
        "param_provenance": cfg.param_provenance,
        "seed": cfg.seed,
        "config": cfg,
        "started_unix_s": started,
        "wall_s": report.timing_s,
        "passed": report.passed,
    });
    write_atomic(
        &dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?.as_bytes(),
    )?;
    Ok(RunOutput {
        report,
        dir,
        run_id: id,
    })
}
