//! Flat key-value run configuration with one nesting level for the
//! experiment block. Unknown keys are errors, and validation reports every
//! violated field at once: a silent typo in an exponent parameter would
//! invalidate an experiment.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use kdvbbm_core::dynamics::Scheme;
use kdvbbm_core::symbols::{ModelParams, Preset};

/// (preset name, resolved coefficients, per-field provenance notes).
type ParamsPart = (Option<String>, ModelParams, Vec<(String, String)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExperimentKind {
    Simulate,
    EnergyAudit,
    Estimates,
    IllposedScan,
    Inflate,
    Split,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::EnergyAudit => "energy-audit",
            ExperimentKind::Estimates => "estimates",
            ExperimentKind::IllposedScan => "illposed-scan",
            ExperimentKind::Inflate => "inflate",
            ExperimentKind::Split => "split",
        }
    }
}

/// Every violated field, collected before failing.
#[derive(Debug)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    pub gamma1: Option<f64>,
    pub delta1: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub a1: Option<f64>,
    pub b1: Option<f64>,
    pub c1: Option<f64>,
    pub d1: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
    pub out: Option<String>,
    pub scheme: Option<String>,
    pub picard_iters: Option<usize>,
    pub c_s: Option<f64>,
    pub tol: Option<f64>,
    pub params: Option<RawParams>,
    pub experiment: Option<toml::Table>,
}

impl RawConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError {
            violations: vec![format!("toml: {e}")],
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimParams {
    pub t_end: f64,
    /// (mode, amplitude) pairs of sine components of the initial data.
    pub sin: Vec<(i64, f64)>,
    pub cos: Vec<(i64, f64)>,
    pub s_list: Vec<f64>,
    pub snapshots: bool,
    pub snapshot_every: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimatesParams {
    pub n: usize,
    pub samples: u64,
    pub s_bilinear: Vec<f64>,
    pub s_tau: Vec<f64>,
    pub s_psi_cubic: Vec<f64>,
    pub s_psi_grad: Vec<f64>,
    pub sharpness_n: Vec<usize>,
    pub sharpness_s: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IllposedParams {
    pub n_list: Vec<usize>,
    pub k0: usize,
    pub s: f64,
    pub t: f64,
    /// Also run the analytic-series remainder fit at this scale.
    pub series_n: usize,
    pub series_eps: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InflateParams {
    pub k1_list: Vec<usize>,
    pub sigma: f64,
    pub theta: f64,
    pub s: f64,
    pub t: f64,
    pub allow_negative_delta3: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitParams {
    pub cuts: Vec<usize>,
    pub s: f64,
    pub field_n: usize,
    /// Extra spectral decay beyond the critical ⟨k⟩^{-s} tail of the data.
    pub tail: f64,
}

#[derive(Clone, Debug, Serialize)]
pub enum ExpParams {
    Simulate(SimParams),
    EnergyAudit(SimParams),
    Estimates(EstimatesParams),
    IllposedScan(IllposedParams),
    Inflate(InflateParams),
    Split(SplitParams),
}

/// Fully resolved run configuration; everything an experiment needs, plus
/// the provenance notes saying which identity filled each derived
/// coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedConfig {
    pub kind: ExperimentKind,
    pub preset: Option<String>,
    pub params: ModelParams,
    pub param_provenance: Vec<(String, String)>,
    pub seed: u64,
    pub n: usize,
    pub dt: f64,
    pub out: PathBuf,
    pub scheme: Scheme,
    pub picard_iters: usize,
    pub c_s: f64,
    pub tol: f64,
    pub exp: ExpParams,
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub preset: Option<String>,
}

fn resolve_params(
    raw: &RawConfig,
    overrides: &Overrides,
    errs: &mut Vec<String>,
) -> Option<ParamsPart> {
    let preset_name = overrides.preset.clone().or_else(|| raw.preset.clone());
    let explicit = raw.params.clone();
    if preset_name.is_some() && explicit.is_some() {
        errs.push("give either `preset` or a [params] block, not both".into());
        return None;
    }
    let mut prov = Vec::new();
    if let Some(name) = &preset_name {
        match Preset::from_name(name) {
            Ok(p) => {
                prov.push(("gamma1".into(), format!("preset {name}")));
                prov.push(("delta1".into(), format!("preset {name}")));
                push_identity_notes(&mut prov);
                return Some((Some(name.clone()), p.params(), prov));
            }
            Err(e) => {
                errs.push(e.to_string());
                return None;
            }
        }
    }
    let Some(p) = explicit else {
        // default preset when nothing is given
        prov.push(("gamma1".into(), "preset hamiltonian (default)".into()));
        prov.push(("delta1".into(), "preset hamiltonian (default)".into()));
        push_identity_notes(&mut prov);
        return Some((Some("hamiltonian".into()), Preset::Hamiltonian.params(), prov));
    };
    let primary = [p.gamma1, p.delta1];
    let octet = [p.a, p.b, p.c, p.d, p.a1, p.b1, p.c1, p.d1];
    let primary_given = primary.iter().filter(|v| v.is_some()).count();
    let octet_given = octet.iter().filter(|v| v.is_some()).count();
    if primary_given == 2 && octet_given == 0 {
        match ModelParams::from_primary(p.gamma1.unwrap(), p.delta1.unwrap()) {
            Ok(m) => {
                prov.push(("gamma1".into(), "given".into()));
                prov.push(("delta1".into(), "given".into()));
                push_identity_notes(&mut prov);
                Some((None, m, prov))
            }
            Err(e) => {
                errs.push(format!("params: {e}"));
                None
            }
        }
    } else if octet_given == 8 && primary_given == 0 {
        match ModelParams::from_abcd(
            p.a.unwrap(),
            p.b.unwrap(),
            p.c.unwrap(),
            p.d.unwrap(),
            p.a1.unwrap(),
            p.b1.unwrap(),
            p.c1.unwrap(),
            p.d1.unwrap(),
        ) {
            Ok(m) => {
                prov.push(("gamma1".into(), "octet: (b+d-rho)/2, rho = b+d-1/6".into()));
                prov.push(("gamma2".into(), "octet: (a+c+rho)/2".into()));
                prov.push((
                    "delta1".into(),
                    "octet: [2(b1+d1) - (b-d+rho)(1/6-a-d) - d(c-a+rho)]/4".into(),
                ));
                prov.push((
                    "delta2".into(),
                    "octet: [2(a1+c1) - (c-a+rho)(1/6-a) + rho/3]/4".into(),
                ));
                prov.push(("gamma".into(), "octet: [5 - 9(b+d) + 9 rho]/24".into()));
                prov.push(("delta3".into(), "identity: 1 - delta2/delta1".into()));
                prov.push((
                    "gamma3".into(),
                    "identity: gamma2 + gamma1 delta2/delta1".into(),
                ));
                Some((None, m, prov))
            }
            Err(e) => {
                errs.push(format!("params: {e}"));
                None
            }
        }
    } else {
        errs.push(format!(
            "[params] must give exactly {{gamma1, delta1}} or the full octet \
             {{a,b,c,d,a1,b1,c1,d1}} (got {primary_given} primary and {octet_given} octet fields)"
        ));
        None
    }
}

fn push_identity_notes(prov: &mut Vec<(String, String)>) {
    prov.push(("gamma2".into(), "identity: 1/6 - gamma1".into()));
    prov.push(("gamma".into(), "identity: (5 - 18 gamma1)/24".into()));
    prov.push((
        "delta2".into(),
        "identity: delta1 + 19/360 - gamma1/6".into(),
    ));
    prov.push(("delta3".into(), "identity: 1 - delta2/delta1".into()));
    prov.push((
        "gamma3".into(),
        "identity: gamma2 + gamma1 delta2/delta1".into(),
    ));
}

struct Block<'a> {
    table: Option<&'a toml::Table>,
    used: BTreeSet<String>,
    errs: Vec<String>,
}

impl<'a> Block<'a> {
    fn new(table: Option<&'a toml::Table>) -> Self {
        Self {
            table,
            used: BTreeSet::new(),
            errs: Vec::new(),
        }
    }

    fn get(&mut self, key: &str) -> Option<&'a toml::Value> {
        self.used.insert(key.to_string());
        self.table.and_then(|t| t.get(key))
    }

    fn f64(&mut self, key: &str, default: f64) -> f64 {
        match self.get(key) {
            None => default,
            Some(v) => match v.as_float().or_else(|| v.as_integer().map(|i| i as f64)) {
                Some(x) => x,
                None => {
                    self.errs.push(format!("experiment.{key}: expected a number"));
                    default
                }
            },
        }
    }

    fn usize_(&mut self, key: &str, default: usize) -> usize {
        match self.get(key) {
            None => default,
            Some(v) => match v.as_integer() {
                Some(x) if x >= 0 => x as usize,
                _ => {
                    self.errs
                        .push(format!("experiment.{key}: expected a non-negative integer"));
                    default
                }
            },
        }
    }

    fn bool_(&mut self, key: &str, default: bool) -> bool {
        match self.get(key) {
            None => default,
            Some(v) => match v.as_bool() {
                Some(x) => x,
                None => {
                    self.errs.push(format!("experiment.{key}: expected a boolean"));
                    default
                }
            },
        }
    }

    fn usize_list(&mut self, key: &str, default: &[usize]) -> Vec<usize> {
        match self.get(key) {
            None => default.to_vec(),
            Some(v) => {
                let mut out = Vec::new();
                let Some(arr) = v.as_array() else {
                    self.errs.push(format!("experiment.{key}: expected an array"));
                    return default.to_vec();
                };
                for item in arr {
                    match item.as_integer() {
                        Some(x) if x > 0 => out.push(x as usize),
                        _ => self
                            .errs
                            .push(format!("experiment.{key}: entries must be positive integers")),
                    }
                }
                out
            }
        }
    }

    fn f64_list(&mut self, key: &str, default: &[f64]) -> Vec<f64> {
        match self.get(key) {
            None => default.to_vec(),
            Some(v) => {
                let mut out = Vec::new();
                let Some(arr) = v.as_array() else {
                    self.errs.push(format!("experiment.{key}: expected an array"));
                    return default.to_vec();
                };
                for item in arr {
                    match item.as_float().or_else(|| item.as_integer().map(|i| i as f64)) {
                        Some(x) => out.push(x),
                        None => self
                            .errs
                            .push(format!("experiment.{key}: entries must be numbers")),
                    }
                }
                out
            }
        }
    }

    /// Array of [mode, amplitude] pairs.
    fn wave_list(&mut self, key: &str, default: &[(i64, f64)]) -> Vec<(i64, f64)> {
        match self.get(key) {
            None => default.to_vec(),
            Some(v) => {
                let mut out = Vec::new();
                let Some(arr) = v.as_array() else {
                    self.errs
                        .push(format!("experiment.{key}: expected an array of [mode, amp] pairs"));
                    return default.to_vec();
                };
                for item in arr {
                    let pair = item.as_array().and_then(|p| {
                        if p.len() != 2 {
                            return None;
                        }
                        let k = p[0].as_integer()?;
                        let a = p[1].as_float().or_else(|| p[1].as_integer().map(|i| i as f64))?;
                        Some((k, a))
                    });
                    match pair {
                        Some(p) => out.push(p),
                        None => self
                            .errs
                            .push(format!("experiment.{key}: entries must be [mode, amp] pairs")),
                    }
                }
                out
            }
        }
    }

    /// Fail closed: anything not consumed is an error.
    fn finish(mut self, kind: ExperimentKind) -> Vec<String> {
        if let Some(t) = self.table {
            for key in t.keys() {
                if !self.used.contains(key) && key != "kind" {
                    self.errs.push(format!(
                        "experiment.{key}: unknown key for `{}`",
                        kind.name()
                    ));
                }
            }
            if let Some(k) = t.get("kind").and_then(|v| v.as_str()) {
                if k != kind.name() {
                    self.errs.push(format!(
                        "experiment.kind says `{k}` but the `{}` subcommand was invoked",
                        kind.name()
                    ));
                }
            }
        }
        self.errs
    }
}

pub fn resolve(
    kind: ExperimentKind,
    raw: &RawConfig,
    overrides: &Overrides,
) -> Result<ResolvedConfig, ConfigError> {
    let mut errs = Vec::new();

    let params_part = resolve_params(raw, overrides, &mut errs);

    let default_n = match kind {
        ExperimentKind::EnergyAudit => 128,
        ExperimentKind::Split => 256,
        _ => 64,
    };
    let n = raw.n.unwrap_or(default_n);
    if n < 1 {
        errs.push("n: must be >= 1".into());
    }
    let dt = raw.dt.unwrap_or(1e-3);
    if !(dt > 0.0) || !dt.is_finite() {
        errs.push("dt: must be positive and finite".into());
    }
    let scheme = match raw.scheme.as_deref() {
        None | Some("if-rk4") => Scheme::IntegratingFactorRk4,
        Some("picard") => Scheme::PicardQuadrature,
        Some(other) => {
            errs.push(format!("scheme: unknown `{other}` (use if-rk4 or picard)"));
            Scheme::IntegratingFactorRk4
        }
    };
    let picard_iters = raw.picard_iters.unwrap_or(4);
    if picard_iters < 1 {
        errs.push("picard_iters: must be >= 1".into());
    }
    let c_s = raw.c_s.unwrap_or(0.25);
    if !(c_s > 0.0) {
        errs.push("c_s: must be positive".into());
    }
    let tol = raw.tol.unwrap_or(1e-12);
    if !(tol > 0.0) {
        errs.push("tol: must be positive".into());
    }

    let block = raw.experiment.as_ref();
    let mut b = Block::new(block);
    let exp = match kind {
        ExperimentKind::Simulate | ExperimentKind::EnergyAudit => {
            type Waves = &'static [(i64, f64)];
            let default_data: (Waves, Waves) = match kind {
                ExperimentKind::Simulate => (&[(1, 1.0)], &[]),
                _ => (&[(1, 1.0)], &[(2, 0.5)]),
            };
            let t_end = b.f64("t_end", if kind == ExperimentKind::Simulate { 0.1 } else { 1.0 });
            if !(t_end > 0.0) {
                b.errs.push("experiment.t_end: must be positive".into());
            }
            let sin = b.wave_list("sin", default_data.0);
            let cos = b.wave_list("cos", default_data.1);
            for (k, _) in sin.iter().chain(&cos) {
                if k.unsigned_abs() as usize > n {
                    b.errs
                        .push(format!("experiment data mode {k} exceeds resolution n = {n}"));
                }
            }
            let s_list = b.f64_list("s_list", &[1.0]);
            let snapshots = b.bool_("snapshots", false);
            let snapshot_every = b.usize_("snapshot_every", 100);
            let p = SimParams {
                t_end,
                sin,
                cos,
                s_list,
                snapshots,
                snapshot_every,
            };
            if kind == ExperimentKind::Simulate {
                ExpParams::Simulate(p)
            } else {
                ExpParams::EnergyAudit(p)
            }
        }
        ExperimentKind::Estimates => {
            let samples = b.usize_("samples", 400) as u64;
            if samples < 10 {
                b.errs.push("experiment.samples: need at least 10".into());
            }
            ExpParams::Estimates(EstimatesParams {
                n,
                samples,
                s_bilinear: b.f64_list("s_bilinear", &[0.0, 1.0, 2.0]),
                s_tau: b.f64_list("s_tau", &[0.0, 1.0, 2.0]),
                s_psi_cubic: b.f64_list("s_psi_cubic", &[0.6, 1.0, 2.0]),
                s_psi_grad: b.f64_list("s_psi_grad", &[1.0, 2.0]),
                sharpness_n: b.usize_list("sharpness_n", &[16, 32, 64, 128, 256, 512]),
                sharpness_s: b.f64_list("sharpness_s", &[0.0, -0.25, -0.5]),
            })
        }
        ExperimentKind::IllposedScan => {
            let p = IllposedParams {
                n_list: b.usize_list("n_list", &[32, 64, 128, 256, 512]),
                k0: b.usize_("k0", 1),
                s: b.f64("s", 0.5),
                t: b.f64("t", 0.05),
                series_n: b.usize_("series_n", 16),
                series_eps: b.f64("series_eps", 0.1),
            };
            if !(p.s < 1.0) {
                b.errs.push("experiment.s: scan expects s < 1".into());
            }
            if p.k0 < 1 {
                b.errs.push("experiment.k0: must be >= 1".into());
            }
            if p.n_list.len() < 3 {
                b.errs.push("experiment.n_list: need at least 3 scales".into());
            }
            ExpParams::IllposedScan(p)
        }
        ExperimentKind::Inflate => {
            let p = InflateParams {
                k1_list: b.usize_list("k1_list", &[16, 32, 64, 128]),
                sigma: b.f64("sigma", 0.3),
                theta: b.f64("theta", 3.5),
                s: b.f64("s", 0.5),
                t: b.f64("t", 1e-3),
                allow_negative_delta3: b.bool_("allow_negative_delta3", false),
            };
            if !(p.sigma > 0.0 && p.sigma < 1.0 - p.s) {
                b.errs
                    .push("experiment.sigma: need 0 < sigma < 1 - s".into());
            }
            if !(p.theta > 3.0) {
                b.errs.push("experiment.theta: need theta > 3".into());
            }
            if p.k1_list.len() < 3 {
                b.errs.push("experiment.k1_list: need at least 3 scales".into());
            }
            if let Some((_, m, _)) = &params_part {
                if m.delta3 <= 0.0 && !p.allow_negative_delta3 {
                    b.errs.push(
                        "inflate: delta3 <= 0 for these coefficients; set \
                         experiment.allow_negative_delta3 = true to probe anyway"
                            .into(),
                    );
                }
            }
            ExpParams::Inflate(p)
        }
        ExperimentKind::Split => {
            let p = SplitParams {
                cuts: b.usize_list("cuts", &[8, 16, 32, 64]),
                s: b.f64("s", 1.5),
                field_n: b.usize_("field_n", n),
                tail: b.f64("tail", 0.55),
            };
            if !(p.s >= 1.0 && p.s < 2.0) {
                b.errs.push("experiment.s: splitting needs 1 <= s < 2".into());
            }
            if p.cuts.len() < 3 {
                b.errs.push("experiment.cuts: need at least 3 cutoffs".into());
            }
            if let Some(&c) = p.cuts.iter().max() {
                if 2 * c >= p.field_n {
                    b.errs.push(format!(
                        "experiment.field_n: {} leaves no tail above the largest cutoff {c}",
                        p.field_n
                    ));
                }
            }
            if !(p.tail > 0.5) {
                b.errs
                    .push("experiment.tail: need > 0.5 so the data sits in H^s".into());
            }
            ExpParams::Split(p)
        }
    };
    errs.extend(b.finish(kind));

    let out = overrides
        .out
        .clone()
        .or_else(|| raw.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("runs"));
    let seed = overrides.seed.or(raw.seed).unwrap_or(0);

    if !errs.is_empty() {
        return Err(ConfigError { violations: errs });
    }
    let (preset, params, param_provenance) = params_part.expect("no errors implies params");
    Ok(ResolvedConfig {
        kind,
        preset,
        params,
        param_provenance,
        seed,
        n,
        dt,
        out,
        scheme,
        picard_iters,
        c_s,
        tol,
        exp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let raw = RawConfig::default();
        let cfg = resolve(ExperimentKind::EnergyAudit, &raw, &Overrides::default()).unwrap();
        assert_eq!(cfg.n, 128);
        assert_eq!(cfg.preset.as_deref(), Some("hamiltonian"));
        assert!(cfg
            .param_provenance
            .iter()
            .any(|(f, how)| f == "gamma2" && how.contains("1/6 - gamma1")));
    }

    #[test]
    fn unknown_keys_fail_closed_and_collect() {
        let raw = RawConfig::from_toml_str(
            "dt = -1.0\n[experiment]\nt_end = 0.5\nnot_a_key = 3\n",
        )
        .unwrap();
        let err = resolve(ExperimentKind::Simulate, &raw, &Overrides::default()).unwrap_err();
        assert!(err.violations.iter().any(|v| v.contains("not_a_key")));
        assert!(err.violations.iter().any(|v| v.contains("dt")));
        assert_eq!(err.violations.len(), 2, "{err}");
    }

    #[test]
    fn top_level_unknown_key_rejected() {
        assert!(RawConfig::from_toml_str("bogus = 1\n").is_err());
    }

    #[test]
    fn preset_conflicts_with_params() {
        let raw = RawConfig::from_toml_str(
            "preset = \"hamiltonian\"\n[params]\ngamma1 = 0.1\ndelta1 = 0.1\n",
        )
        .unwrap();
        let err = resolve(ExperimentKind::Simulate, &raw, &Overrides::default()).unwrap_err();
        assert!(err.violations[0].contains("not both"));
    }

    #[test]
    fn octet_params_accepted() {
        let raw = RawConfig::from_toml_str(
            "[params]\na = 0.0\nb = 0.16666666666666666\nc = 0.0\nd = 0.16666666666666666\n\
             a1 = 0.034722222222222224\nb1 = 0.009722222222222222\n\
             c1 = 0.034722222222222224\nd1 = 0.009722222222222222\n",
        )
        .unwrap();
        let cfg = resolve(ExperimentKind::Simulate, &raw, &Overrides::default()).unwrap();
        assert!((cfg.params.gamma - 7.0 / 48.0).abs() < 1e-12);
        assert!(cfg
            .param_provenance
            .iter()
            .any(|(f, how)| f == "delta2" && how.contains("octet")));
    }

    #[test]
    fn inflate_guards_negative_delta3() {
        let raw = RawConfig::default(); // hamiltonian: delta3 = -14
        let err = resolve(ExperimentKind::Inflate, &raw, &Overrides::default()).unwrap_err();
        assert!(err.violations[0].contains("delta3"));

        let raw = RawConfig::from_toml_str("[experiment]\nallow_negative_delta3 = true\n").unwrap();
        assert!(resolve(ExperimentKind::Inflate, &raw, &Overrides::default()).is_ok());

        let raw = RawConfig::from_toml_str("preset = \"inflation\"\n").unwrap();
        assert!(resolve(ExperimentKind::Inflate, &raw, &Overrides::default()).is_ok());
    }

    #[test]
    fn overrides_take_precedence() {
        let raw = RawConfig::from_toml_str("seed = 7\nout = \"a\"\n").unwrap();
        let ov = Overrides {
            out: Some(PathBuf::from("b")),
            seed: Some(9),
            preset: Some("inflation".into()),
        };
        let cfg = resolve(ExperimentKind::Simulate, &raw, &ov).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.out, PathBuf::from("b"));
        assert_eq!(cfg.preset.as_deref(), Some("inflation"));
    }
}
