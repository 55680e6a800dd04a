//! Time integration of the model in its bounded-multiplier form.
//!
//! The evolution integrated here is
//!
//! ```text
//! i η_t = φ(∂x) η + F(η),   F(η) = τ(∂x)η² − (1/8) ψ(∂x)η³ − (7/48) ψ(∂x)(η_x)²
//! ```
//!
//! equivalently η_t = L η + N(η) with L = −i φ(k) diagonal and N(η) = −i F(η).
//! Because every multiplier is bounded, the system is non-stiff: the
//! fifth-order derivatives of the original formulation are absorbed into the
//! symbols. F itself maps real fields to coefficient sets with
//! c(−k) = −conj(c(k)); the −i factor carried at each evolution call site
//! restores reality, so trajectories stay real to rounding level.
//!
//! All symbols vanish at k = 0, so the solution mean is conserved exactly by
//! both schemes.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{CheckOp, ExperimentReport};
use crate::spectral::{dealias_grid, sobolev_norm, SobolevIndex, SpectralField};
use crate::symbols::{Frame, ModelParams, Symbol, SymbolTable};

/// H¹ norm past which a run is declared blown up. Norm-inflation runs
/// intentionally reach large norms, so the threshold is generous.
pub const BLOWUP_H1: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Classical RK4 applied to w(t) = S(−t)η(t), whose right-hand side is
    /// bounded; the linear phase is integrated exactly.
    IntegratingFactorRk4,
    /// Fixed-point sweeps of the Duhamel integral with Simpson-node
    /// quadrature (interior node integrated with the matching
    /// degree-two interpolatory weights).
    PicardQuadrature,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveConfig {
    pub dt: f64,
    pub picard_iters: usize,
    /// Local-theory constant in T̄ = c_s / (r (1 + 2r)); not computable from
    /// the analysis, default 1/4, overridable.
    pub c_s: f64,
    /// Early-stop tolerance for Picard sweeps.
    pub tol: f64,
    pub scheme: Scheme,
    #[serde(skip)]
    pub frame: Frame,
    /// Regularity exponents tracked in per-step diagnostics.
    pub diag_s: Vec<f64>,
    /// Exponent used for the local-window norm r = ‖η‖_{H^s}.
    pub local_s: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            picard_iters: 4,
            c_s: 0.25,
            tol: 1e-12,
            scheme: Scheme::IntegratingFactorRk4,
            frame: Frame::Standard,
            diag_s: vec![1.0],
            local_s: 1.0,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::domain("dt must be positive and finite"));
        }
        if self.picard_iters < 1 {
            return Err(Error::domain("picard_iters must be >= 1"));
        }
        if !(self.c_s > 0.0) {
            return Err(Error::domain("c_s must be positive"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::domain("tol must be positive"));
        }
        Ok(())
    }
}

/// Time-stamped states plus per-step diagnostics.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub energy: Vec<f64>,
    /// One row per step, one column per entry of `SolveConfig::diag_s`.
    pub norms: Vec<Vec<f64>>,
    pub means: Vec<Complex64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&SpectralField> {
        self.states.last()
    }

    fn record(&mut self, t: f64, state: SpectralField, cfg: &SolveConfig, p: &ModelParams) {
        self.times.push(t);
        self.energy.push(energy(&state, p));
        self.norms.push(
            cfg.diag_s
                .iter()
                .map(|&s| sobolev_norm(&state, SobolevIndex(s)))
                .collect(),
        );
        self.means.push(state.mean());
        self.states.push(state);
    }

    /// Structural invariants: strictly increasing times, uniform mode range,
    /// diagnostics aligned with states.
    pub fn check_consistency(&self) -> Result<()> {
        let n = self.times.len();
        if self.states.len() != n
            || self.energy.len() != n
            || self.norms.len() != n
            || self.means.len() != n
        {
            return Err(Error::domain("trajectory diagnostics length mismatch"));
        }
        for w in self.times.windows(2) {
            if !(w[1] > w[0]) && !(w[1] < w[0]) {
                return Err(Error::domain("trajectory times not strictly monotone"));
            }
        }
        if let Some(first) = self.states.first() {
            if self.states.iter().any(|s| s.max_mode() != first.max_mode()) {
                return Err(Error::domain("trajectory states differ in max mode"));
            }
        }
        Ok(())
    }
}

/// F(η) = τ(∂x)η² − (1/8)ψ(∂x)η³ − (7/48)ψ(∂x)(η_x)², every product
/// evaluated alias-free. The k = 0 coefficient is always zero.
pub fn rhs_f(eta: &SpectralField, table: &SymbolTable) -> Result<SpectralField> {
    if eta.max_mode() > table.max_mode() {
        return Err(Error::ModeRange {
            needed: eta.max_mode(),
            have: table.max_mode(),
        });
    }
    let n = eta.max_mode();
    let m = dealias_grid(n);
    let g = eta.to_physical(m)?;
    let gx = eta.derivative().to_physical(m)?;
    let mut sq = vec![0.0; m];
    let mut cb = vec![0.0; m];
    let mut dsq = vec![0.0; m];
    for j in 0..m {
        sq[j] = g[j] * g[j];
        cb[j] = sq[j] * g[j];
        dsq[j] = gx[j] * gx[j];
    }
    let w = SpectralField::from_physical(&sq, n)?;
    let v = SpectralField::from_physical(&cb, n)?;
    let z = SpectralField::from_physical(&dsq, n)?;
    combine_f(&w, &v, &z, table)
}

fn combine_f(
    w: &SpectralField,
    v: &SpectralField,
    z: &SpectralField,
    table: &SymbolTable,
) -> Result<SpectralField> {
    let off = table.max_mode() as i64;
    let tau = table.values(Symbol::Tau);
    let psi = table.values(Symbol::Psi);
    let mut out = SpectralField::zero(w.max_mode());
    for (k, cw) in w.modes() {
        let i = (k + off) as usize;
        let val = tau[i] * cw - psi[i] * (v.coeff(k) / 8.0 + z.coeff(k) * (7.0 / 48.0));
        out.set_coeff(k, val)?;
    }
    Ok(out)
}

/// F(v+u) − F(u) in expanded form:
/// τ(∂x)(v² + 2uv) − (1/8)ψ(∂x)(v³ + 3uv² + 3u²v) − (7/48)ψ(∂x)(v_x² + 2v_x u_x).
pub fn rhs_f_difference(
    v: &SpectralField,
    u: &SpectralField,
    table: &SymbolTable,
) -> Result<SpectralField> {
    if v.max_mode() != u.max_mode() {
        return Err(Error::ModeRange {
            needed: v.max_mode().max(u.max_mode()),
            have: v.max_mode().min(u.max_mode()),
        });
    }
    if v.max_mode() > table.max_mode() {
        return Err(Error::ModeRange {
            needed: v.max_mode(),
            have: table.max_mode(),
        });
    }
    let n = v.max_mode();
    let m = dealias_grid(n);
    let sv = v.to_physical(m)?;
    let su = u.to_physical(m)?;
    let svx = v.derivative().to_physical(m)?;
    let sux = u.derivative().to_physical(m)?;
    let mut q2 = vec![0.0; m];
    let mut q3 = vec![0.0; m];
    let mut qz = vec![0.0; m];
    for j in 0..m {
        let (a, b) = (su[j], sv[j]);
        q2[j] = b * b + 2.0 * a * b;
        q3[j] = b * b * b + 3.0 * a * b * b + 3.0 * a * a * b;
        qz[j] = svx[j] * svx[j] + 2.0 * svx[j] * sux[j];
    }
    let w = SpectralField::from_physical(&q2, n)?;
    let vv = SpectralField::from_physical(&q3, n)?;
    let z = SpectralField::from_physical(&qz, n)?;
    combine_f(&w, &vv, &z, table)
}

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// N(η) = −i F(η): the real-field form of the nonlinearity entering the
/// Duhamel integral.
pub fn rhs_duhamel(eta: &SpectralField, table: &SymbolTable) -> Result<SpectralField> {
    Ok(rhs_f(eta, table)?.rotated(MINUS_I))
}

/// Per-step phase factors for the mode range of the evolved field.
struct StepPhases {
    half: Vec<Complex64>,
    half_inv: Vec<Complex64>,
    full: Vec<Complex64>,
    off: i64,
}

impl StepPhases {
    fn new(table: &SymbolTable, frame: Frame, n_field: usize, dt: f64) -> Self {
        let phase = table.phase(frame);
        let t_off = table.max_mode() as i64;
        let n = n_field as i64;
        let mut half = Vec::with_capacity(2 * n_field + 1);
        let mut half_inv = Vec::with_capacity(2 * n_field + 1);
        let mut full = Vec::with_capacity(2 * n_field + 1);
        for k in -n..=n {
            let p = phase[(k + t_off) as usize];
            half.push(Complex64::from_polar(1.0, -p * dt / 2.0));
            half_inv.push(Complex64::from_polar(1.0, p * dt / 2.0));
            full.push(Complex64::from_polar(1.0, -p * dt));
        }
        Self {
            half,
            half_inv,
            full,
            off: n,
        }
    }

    fn mul(&self, which: &[Complex64], f: &SpectralField) -> SpectralField {
        let off = self.off;
        f.map_modes(|k, c| c * which[(k + off) as usize])
    }
}

fn lin_comb(terms: &[(f64, &SpectralField)]) -> SpectralField {
    let n = terms[0].1.max_mode();
    let mut out = SpectralField::zero(n);
    let out_ref = &mut out;
    for &(a, f) in terms {
        *out_ref = out_ref
            .add(&f.scaled(a))
            .expect("lin_comb fields share max mode");
    }
    out
}

fn step_ifrk4(
    eta: &SpectralField,
    dt: f64,
    ph: &StepPhases,
    table: &SymbolTable,
) -> Result<SpectralField> {
    let n1 = rhs_duhamel(eta, table)?;
    let u2 = ph.mul(&ph.half, &lin_comb(&[(1.0, eta), (dt / 2.0, &n1)]));
    let n2 = rhs_duhamel(&u2, table)?;
    let u3 = ph
        .mul(&ph.half, eta)
        .add(&n2.scaled(dt / 2.0))
        .expect("same max mode");
    let n3 = rhs_duhamel(&u3, table)?;
    let u4 = ph
        .mul(&ph.full, eta)
        .add(&ph.mul(&ph.half, &n3).scaled(dt))
        .expect("same max mode");
    let n4 = rhs_duhamel(&u4, table)?;

    let acc = lin_comb(&[
        (1.0, &ph.mul(&ph.full, &n1)),
        (2.0, &ph.mul(&ph.half, &n2)),
        (2.0, &ph.mul(&ph.half, &n3)),
        (1.0, &n4),
    ]);
    Ok(ph
        .mul(&ph.full, eta)
        .add(&acc.scaled(dt / 6.0))
        .expect("same max mode"))
}

fn step_picard(
    eta: &SpectralField,
    dt: f64,
    ph: &StepPhases,
    table: &SymbolTable,
    iters: usize,
    tol: f64,
) -> Result<SpectralField> {
    let lin_h = ph.mul(&ph.half, eta);
    let lin_f = ph.mul(&ph.full, eta);
    let n0 = rhs_duhamel(eta, table)?;
    let n0_h = ph.mul(&ph.half, &n0);
    let n0_f = ph.mul(&ph.full, &n0);

    let mut y_h = lin_h.clone();
    let mut y_f = lin_f.clone();
    for _ in 0..iters {
        let n_h = rhs_duhamel(&y_h, table)?;
        let n_f = rhs_duhamel(&y_f, table)?;
        // interior node: interpolatory weights [5/24, 1/3, -1/24] on {0, dt/2, dt}
        let y_h_new = lin_h
            .add(&lin_comb(&[
                (dt * 5.0 / 24.0, &n0_h),
                (dt / 3.0, &n_h),
                (-dt / 24.0, &ph.mul(&ph.half_inv, &n_f)),
            ]))
            .expect("same max mode");
        // endpoint: Simpson weights [1/6, 2/3, 1/6]
        let y_f_new = lin_f
            .add(&lin_comb(&[
                (dt / 6.0, &n0_f),
                (dt * 2.0 / 3.0, &ph.mul(&ph.half, &n_h)),
                (dt / 6.0, &n_f),
            ]))
            .expect("same max mode");
        let delta = sobolev_norm(&y_f_new.sub(&y_f).expect("same max mode"), SobolevIndex(0.0));
        let scale = sobolev_norm(&y_f, SobolevIndex(0.0));
        y_h = y_h_new;
        y_f = y_f_new;
        if delta <= tol * (1.0 + scale) {
            break;
        }
    }
    Ok(y_f)
}

fn check_state(state: &SpectralField, t: f64, last_good: &SpectralField) -> Result<()> {
    if !state.is_finite() || sobolev_norm(state, SobolevIndex(1.0)) > BLOWUP_H1 {
        return Err(Error::BlowUp {
            t,
            last_good: Box::new(last_good.clone()),
            partial: None,
        });
    }
    Ok(())
}

/// Advance one step of size cfg.dt. Both schemes are autonomous in the
/// evolved field; `t` only stamps the blow-up signal.
pub fn step(
    eta: &SpectralField,
    t: f64,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<SpectralField> {
    cfg.validate()?;
    let ph = StepPhases::new(table, cfg.frame, eta.max_mode(), cfg.dt);
    let next = match cfg.scheme {
        Scheme::IntegratingFactorRk4 => step_ifrk4(eta, cfg.dt, &ph, table)?,
        Scheme::PicardQuadrature => {
            step_picard(eta, cfg.dt, &ph, table, cfg.picard_iters, cfg.tol)?
        }
    };
    check_state(&next, t + cfg.dt, eta)?;
    Ok(next)
}

/// Fixed-step integration (dt may be negative for reversal checks),
/// recording state and diagnostics at every node.
pub fn integrate_fixed(
    eta0: &SpectralField,
    t0: f64,
    n_steps: usize,
    dt: f64,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<Trajectory> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(Error::domain("integration step must be nonzero"));
    }
    let p = *table.params();
    let ph = StepPhases::new(table, cfg.frame, eta0.max_mode(), dt);
    let mut traj = Trajectory::default();
    traj.record(t0, eta0.clone(), cfg, &p);
    let mut state = eta0.clone();
    for i in 0..n_steps {
        let t_next = t0 + dt * (i as f64 + 1.0);
        let next = match cfg.scheme {
            Scheme::IntegratingFactorRk4 => step_ifrk4(&state, dt, &ph, table)?,
            Scheme::PicardQuadrature => {
                step_picard(&state, dt, &ph, table, cfg.picard_iters, cfg.tol)?
            }
        };
        if let Err(Error::BlowUp { t, last_good, .. }) = check_state(&next, t_next, &state) {
            return Err(Error::BlowUp {
                t,
                last_good,
                partial: Some(Box::new(traj)),
            });
        }
        state = next;
        traj.record(t_next, state.clone(), cfg, &p);
    }
    Ok(traj)
}

/// One local window of the contraction argument.
#[derive(Clone, Debug)]
pub struct LocalSolve {
    /// Window predicted by T̄ = c_s / (r (1 + 2r)).
    pub t_bar: f64,
    /// Window actually integrated (halved adaptively if the growth bound
    /// failed mid-window).
    pub window: f64,
    pub trajectory: Trajectory,
    /// First time at which sup ‖η‖_{H^s} > 2‖η₀‖_{H^s} was observed on the
    /// *predicted* window, if it ever was.
    pub growth_violation: Option<f64>,
    /// Set when s < 1, below the regularity the local theory covers.
    pub low_regularity: bool,
}

/// Integrate one local existence window [0, T̄] and assert the doubling
/// bound sup_t ‖η(t)‖_{H^s} <= 2‖η₀‖_{H^s}.
pub fn solve_local(
    eta0: &SpectralField,
    s: SobolevIndex,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<LocalSolve> {
    cfg.validate()?;
    let r = sobolev_norm(eta0, s);
    if !(r > 0.0) {
        return Err(Error::domain("local window needs ‖η₀‖ > 0"));
    }
    let t_bar = cfg.c_s / (r * (1.0 + 2.0 * r));
    let bound = 2.0 * r * (1.0 + 1e-12);
    let mut window = t_bar;
    let mut violation = None;
    for _ in 0..7 {
        let n = (window / cfg.dt).ceil().max(1.0) as usize;
        let dt_eff = window / n as f64;
        let traj = integrate_fixed(eta0, 0.0, n, dt_eff, cfg, table)?;
        let mut broke_at = None;
        for (i, state) in traj.states.iter().enumerate() {
            if sobolev_norm(state, s) > bound {
                broke_at = Some(traj.times[i]);
                break;
            }
        }
        match broke_at {
            None => {
                return Ok(LocalSolve {
                    t_bar,
                    window,
                    trajectory: traj,
                    growth_violation: violation,
                    low_regularity: s.0 < 1.0,
                })
            }
            Some(t) => {
                violation.get_or_insert(t);
                window /= 2.0;
            }
        }
    }
    Err(Error::domain(format!(
        "growth bound still violated at window {window:.3e} (first at t = {:?})",
        violation
    )))
}

/// Chain local windows until time `t_end`, recording diagnostics at every
/// step.
pub fn solve_to(
    eta0: &SpectralField,
    t_end: f64,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_end > 0.0) {
        return Err(Error::domain("t_end must be positive"));
    }
    let p = *table.params();
    let mut traj = Trajectory::default();
    traj.record(0.0, eta0.clone(), cfg, &p);
    let mut state = eta0.clone();
    let mut t = 0.0;
    while t < t_end * (1.0 - 1e-14) {
        let r = sobolev_norm(&state, SobolevIndex(cfg.local_s));
        let t_bar = if r > 0.0 {
            cfg.c_s / (r * (1.0 + 2.0 * r))
        } else {
            t_end - t
        };
        let window = t_bar.min(t_end - t);
        let n = (window / cfg.dt).ceil().max(1.0) as usize;
        let dt_eff = window / n as f64;
        let chunk = match integrate_fixed(&state, t, n, dt_eff, cfg, table) {
            Ok(c) => c,
            Err(Error::BlowUp { t, last_good, partial }) => {
                // splice the partial chunk onto what we already have
                if let Some(part) = partial {
                    for i in 1..part.len() {
                        traj.times.push(part.times[i]);
                        traj.states.push(part.states[i].clone());
                        traj.energy.push(part.energy[i]);
                        traj.norms.push(part.norms[i].clone());
                        traj.means.push(part.means[i]);
                    }
                }
                return Err(Error::BlowUp {
                    t,
                    last_good,
                    partial: Some(Box::new(traj)),
                });
            }
            Err(e) => return Err(e),
        };
        for i in 1..chunk.len() {
            traj.times.push(chunk.times[i]);
            traj.states.push(chunk.states[i].clone());
            traj.energy.push(chunk.energy[i]);
            traj.norms.push(chunk.norms[i].clone());
            traj.means.push(chunk.means[i]);
        }
        state = chunk.states.last().expect("chunk nonempty").clone();
        t += window;
    }
    Ok(traj)
}

/// E(η) = (1/2) ∫ η² + γ₁ η_x² + δ₁ η_xx² dx = π Σ_k ϕ(k) |c(k)|².
pub fn energy(eta: &SpectralField, p: &ModelParams) -> f64 {
    let mut sum = 0.0;
    for (k, c) in eta.modes() {
        sum += p.varphi(k as f64) * c.norm_sqr();
    }
    std::f64::consts::PI * sum
}

/// dE/dt = (γ − 7/48) ∫ η_x³ dx, by dealiased quadrature. Exactly zero when
/// γ = 7/48.
pub fn energy_drift_rate(eta: &SpectralField, p: &ModelParams) -> f64 {
    let factor = p.gamma - 7.0 / 48.0;
    if factor.abs() <= crate::symbols::CONSTRAINT_TOL {
        return 0.0;
    }
    let m = dealias_grid(eta.max_mode());
    let gx = eta
        .derivative()
        .to_physical(m)
        .expect("real field derivative stays real");
    let integral: f64 =
        gx.iter().map(|&v| v * v * v).sum::<f64>() * 2.0 * std::f64::consts::PI / m as f64;
    factor * integral
}

/// η₀ = u₀ + v₀ with û₀ = η̂₀ χ_{|k| <= N_cut}. Both parts keep the full
/// mode range so they can be evolved at the original resolution.
pub fn split_data(eta0: &SpectralField, n_cut: usize) -> Result<(SpectralField, SpectralField)> {
    if n_cut < 1 || n_cut >= eta0.max_mode() {
        return Err(Error::domain(format!(
            "cutoff must satisfy 1 <= N_cut < max_mode (got {n_cut} vs {})",
            eta0.max_mode()
        )));
    }
    let low = eta0.map_modes(|k, c| {
        if k.unsigned_abs() as usize <= n_cut {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let high = eta0.sub(&low)?;
    Ok((low, high))
}

/// One step of the coupled pair (u, v): u follows the plain flow, v follows
/// i v_t = φ(∂x)v + F(v+u) − F(u). Their sum retraces the unsplit flow up to
/// rounding.
fn step_pair_ifrk4(
    u: &SpectralField,
    v: &SpectralField,
    dt: f64,
    ph: &StepPhases,
    table: &SymbolTable,
) -> Result<(SpectralField, SpectralField)> {
    let pair_rhs = |uu: &SpectralField, vv: &SpectralField| -> Result<(SpectralField, SpectralField)> {
        let nu = rhs_duhamel(uu, table)?;
        let nw = rhs_duhamel(&uu.add(vv)?, table)?;
        let nv = nw.sub(&nu)?;
        Ok((nu, nv))
    };
    let (nu1, nv1) = pair_rhs(u, v)?;
    let u2 = ph.mul(&ph.half, &lin_comb(&[(1.0, u), (dt / 2.0, &nu1)]));
    let v2 = ph.mul(&ph.half, &lin_comb(&[(1.0, v), (dt / 2.0, &nv1)]));
    let (nu2, nv2) = pair_rhs(&u2, &v2)?;
    let u3 = ph.mul(&ph.half, u).add(&nu2.scaled(dt / 2.0))?;
    let v3 = ph.mul(&ph.half, v).add(&nv2.scaled(dt / 2.0))?;
    let (nu3, nv3) = pair_rhs(&u3, &v3)?;
    let u4 = ph.mul(&ph.full, u).add(&ph.mul(&ph.half, &nu3).scaled(dt))?;
    let v4 = ph.mul(&ph.full, v).add(&ph.mul(&ph.half, &nv3).scaled(dt))?;
    let (nu4, nv4) = pair_rhs(&u4, &v4)?;

    let assemble = |a: &SpectralField,
                    n1: &SpectralField,
                    n2: &SpectralField,
                    n3: &SpectralField,
                    n4: &SpectralField|
     -> Result<SpectralField> {
        let acc = lin_comb(&[
            (1.0, &ph.mul(&ph.full, n1)),
            (2.0, &ph.mul(&ph.half, n2)),
            (2.0, &ph.mul(&ph.half, n3)),
            (1.0, n4),
        ]);
        ph.mul(&ph.full, a).add(&acc.scaled(dt / 6.0))
    };
    Ok((
        assemble(u, &nu1, &nu2, &nu3, &nu4)?,
        assemble(v, &nv1, &nv2, &nv3, &nv4)?,
    ))
}

/// Measurements of one low/high frequency splitting run at a single cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct SplitPoint {
    pub n_cut: usize,
    pub t0: f64,
    pub u_h2: f64,
    pub h_h2: f64,
    pub v0_h2: f64,
    pub energy_increment: f64,
    /// ‖(u+v)(t₀) − η(t₀)‖_{H¹} against the unsplit solve.
    pub consistency_h1: f64,
}

/// Evolve the split pair to t₀ = N_cut^{−2(2−s)} and measure the smoothing
/// of the high-frequency Duhamel part h = v − S(t)v₀.
pub fn split_point(
    eta0: &SpectralField,
    s: SobolevIndex,
    n_cut: usize,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<SplitPoint> {
    cfg.validate()?;
    if !(s.0 >= 1.0 && s.0 < 2.0) {
        return Err(Error::domain("splitting run needs 1 <= s < 2"));
    }
    let (u0, v0) = split_data(eta0, n_cut)?;
    let t0 = (n_cut as f64).powf(-2.0 * (2.0 - s.0));
    let n_steps = (t0 / cfg.dt).ceil().max(1.0) as usize;
    let dt = t0 / n_steps as f64;
    let ph = StepPhases::new(table, cfg.frame, eta0.max_mode(), dt);

    let mut u = u0.clone();
    let mut v = v0.clone();
    let mut eta = eta0.clone();
    for i in 0..n_steps {
        let t_next = dt * (i + 1) as f64;
        let (un, vn) = step_pair_ifrk4(&u, &v, dt, &ph, table)?;
        check_state(&un, t_next, &u)?;
        check_state(&vn, t_next, &v)?;
        u = un;
        v = vn;
        eta = step_ifrk4(&eta, dt, &ph, table)?;
    }
    let h = v.sub(&table.semigroup(&v0, t0, cfg.frame)?)?;
    let u_plus_h = u.add(&h)?;
    let p = table.params();
    let h2 = SobolevIndex(2.0);
    Ok(SplitPoint {
        n_cut,
        t0,
        u_h2: sobolev_norm(&u, h2),
        h_h2: sobolev_norm(&h, h2),
        v0_h2: sobolev_norm(&v0, h2),
        energy_increment: energy(&u_plus_h, p) - energy(&u, p),
        consistency_h1: sobolev_norm(&u.add(&v)?.sub(&eta)?, SobolevIndex(1.0)),
    })
}

/// Single-cutoff splitting experiment: measurements plus the consistency
/// check against the unsplit solver.
pub fn splitting_experiment(
    eta0: &SpectralField,
    s: SobolevIndex,
    n_cut: usize,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("split");
    let point = split_point(eta0, s, n_cut, cfg, table)?;
    report.add_series(
        "split_point",
        &["n_cut", "t0", "u_h2", "h_h2", "energy_increment", "consistency_h1"],
        vec![vec![
            point.n_cut as f64,
            point.t0,
            point.u_h2,
            point.h_h2,
            point.energy_increment,
            point.consistency_h1,
        ]],
    );
    report.add_check(
        "split consistency vs unsplit solve (H1)",
        point.consistency_h1,
        1e-9,
        CheckOp::Le,
    );
    Ok(report)
}
