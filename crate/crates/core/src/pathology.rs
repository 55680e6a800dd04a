//! Explicit second Picard iterate, its resonance bookkeeping, and the two
//! experiment families built on it: the high-frequency data scan that makes
//! the flow map discontinuous below H¹, and the shifted-frame norm-inflation
//! construction.
//!
//! The second iterate of the Duhamel fixed point is quadratic in the data:
//!
//! ```text
//! I₂(h,h,t) = −i ∫₀ᵗ S(t−t') [ τ(∂x)(S(t')h)² − (7/48) ψ(∂x)((S(t')h)_x)² ] dt'
//! ```
//!
//! In coefficients it collapses to a mode-pair sum weighted by the
//! interaction kernel 𝒳 and the resonance function Θ:
//!
//! ```text
//! 𝒳(k,k₁) = k/(4ϕ(k)) · (3 − 4γk² + (7/12) k₁(k−k₁))
//! Θ(k,k₁) = φ(k) − φ(k−k₁) − φ(k₁)
//! F(I₂)(k) = −i t e^{-iφ(k)t} Σ_{k₁} 𝒳(k,k₁) ĥ(k₁) ĥ(k−k₁) e^{itΘ/2} sinc(tΘ/2)
//! ```
//!
//! where the oscillatory factor is the sinc-stable form of
//! (e^{itΘ}−1)/(iΘ)·i, finite and accurate through Θ → 0 resonances.

use num_complex::Complex64;

use crate::dynamics::{integrate_fixed, SolveConfig};
use crate::error::{Error, Result};
use crate::report::{fit_exponent, CheckOp, ExperimentReport};
use crate::spectral::{dealias_grid, sobolev_norm, SobolevIndex, SpectralField};
use crate::symbols::{Frame, Symbol, SymbolTable};

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// (e^{iθΔ}−1)/Δ evaluated as i·θ·e^{iθΔ/2}·sinc(θΔ/2); finite and smooth
/// through Δ = 0.
pub fn oscillatory_factor(theta_val: f64, t: f64) -> Complex64 {
    let half = t * theta_val / 2.0;
    Complex64::new(0.0, t * sinc(half)) * Complex64::from_polar(1.0, half)
}

/// Resonance function Θ(k, k₁) = φ(k) − φ(k−k₁) − φ(k₁).
pub fn theta(k: i64, k1: i64, table: &SymbolTable, frame: Frame) -> Result<f64> {
    let n = table.max_mode() as i64;
    for m in [k, k1, k - k1] {
        if m.abs() > n {
            return Err(Error::ModeRange {
                needed: m.unsigned_abs() as usize,
                have: table.max_mode(),
            });
        }
    }
    let phase = table.phase(frame);
    let v = |m: i64| phase[(m + n) as usize];
    Ok(v(k) - v(k - k1) - v(k1))
}

/// Interaction kernel of the second iterate,
/// 𝒳(k,k₁) = k/(4ϕ(k)) (3 − 4γk² + (7/12) k₁(k−k₁)).
pub fn chi(k: i64, k1: i64, table: &SymbolTable) -> Result<f64> {
    let vp = table.value(Symbol::Varphi, k)?;
    let p = table.params();
    let kf = k as f64;
    Ok(kf / (4.0 * vp) * (3.0 - 4.0 * p.gamma * kf * kf + (7.0 / 12.0) * (k1 * (k - k1)) as f64))
}

/// I₂ by the exact mode-pair sum. `h` must be reality-symmetric; the result
/// is a real field supported in (supp h + supp h), truncated at h's range.
pub fn second_iterate_formula(
    h: &SpectralField,
    t: f64,
    table: &SymbolTable,
    frame: Frame,
) -> Result<SpectralField> {
    if h.max_mode() > table.max_mode() {
        return Err(Error::ModeRange {
            needed: h.max_mode(),
            have: table.max_mode(),
        });
    }
    let n = h.max_mode() as i64;
    let off = table.max_mode() as i64;
    let phase = table.phase(frame);
    let supp = h.support();
    let mut out = SpectralField::zero(h.max_mode());
    for k in -n..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        for &k1 in &supp {
            let c2 = h.coeff(k - k1);
            if c2.norm_sqr() == 0.0 {
                continue;
            }
            let th = phase[(k + off) as usize]
                - phase[(k - k1 + off) as usize]
                - phase[(k1 + off) as usize];
            let x = chi(k, k1, table)?;
            let half = t * th / 2.0;
            acc += h.coeff(k1) * c2 * (x * sinc(half)) * Complex64::from_polar(1.0, half);
        }
        if acc.norm_sqr() > 0.0 {
            let outer = Complex64::new(0.0, -t)
                * Complex64::from_polar(1.0, -phase[(k + off) as usize] * t);
            out.set_coeff(k, outer * acc)?;
        }
    }
    Ok(out)
}

/// I₂ by composite Simpson quadrature of the Duhamel integral: the
/// independent oracle for [`second_iterate_formula`]. Panels are sized from
/// `cfg.dt`.
pub fn second_iterate_quadrature(
    h: &SpectralField,
    t: f64,
    table: &SymbolTable,
    cfg: &SolveConfig,
    frame: Frame,
) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::domain("quadrature needs t >= 0"));
    }
    let mut panels = ((t / cfg.dt).ceil() as usize).max(2);
    if panels % 2 == 1 {
        panels += 1;
    }
    let n = h.max_mode();
    let m = dealias_grid(n);
    let off = table.max_mode() as i64;
    let tau = table.values(Symbol::Tau);
    let psi = table.values(Symbol::Psi);

    // τ(∂x)g² − (7/48) ψ(∂x)(g_x)² for g = S(t')h
    let bracket = |g: &SpectralField| -> Result<SpectralField> {
        let s = g.to_physical(m)?;
        let sx = g.derivative().to_physical(m)?;
        let sq: Vec<f64> = s.iter().map(|v| v * v).collect();
        let dsq: Vec<f64> = sx.iter().map(|v| v * v).collect();
        let w = SpectralField::from_physical(&sq, n)?;
        let z = SpectralField::from_physical(&dsq, n)?;
        Ok(w.map_modes(|k, c| {
            let i = (k + off) as usize;
            c * tau[i] - z.coeff(k) * (psi[i] * 7.0 / 48.0)
        }))
    };

    let dt = t / panels as f64;
    let mut acc = SpectralField::zero(n);
    for i in 0..=panels {
        let ti = i as f64 * dt;
        let weight = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let g = table.semigroup(h, ti, frame)?;
        let term = table.semigroup(&bracket(&g)?, t - ti, frame)?;
        acc = acc.add(&term.scaled(weight * dt / 3.0))?;
    }
    Ok(acc.rotated(Complex64::new(0.0, -1.0)))
}

/// High-frequency block data: â(k) = 1/(N√k₀) for |k| in {N−k₀, …, N+k₀}.
/// Its H¹ norm is N-independent while every H^s norm with s < 1 vanishes as
/// N grows.
#[derive(Clone, Debug)]
pub struct IllposedData {
    pub n: usize,
    pub k0: usize,
    pub field: SpectralField,
}

impl IllposedData {
    pub fn new(n: usize, k0: usize, max_mode: usize) -> Result<Self> {
        if k0 < 1 || n <= k0 {
            return Err(Error::domain("need N > k0 >= 1"));
        }
        if max_mode < n + k0 {
            return Err(Error::ModeRange {
                needed: n + k0,
                have: max_mode,
            });
        }
        let amp = 1.0 / (n as f64 * (k0 as f64).sqrt());
        let mut field = SpectralField::zero(max_mode);
        for k in (n - k0) as i64..=(n + k0) as i64 {
            field.set_coeff(k, Complex64::new(amp, 0.0))?;
            field.set_coeff(-k, Complex64::new(amp, 0.0))?;
        }
        Ok(Self { n, k0, field })
    }

    /// Exact value of ‖η_N‖²_{H^s} by direct summation of the definition.
    pub fn norm_sq_exact(&self, s: f64) -> f64 {
        let amp2 = 1.0 / (self.n as f64 * self.n as f64 * self.k0 as f64);
        let mut sum = 0.0;
        for j in -(self.k0 as i64)..=self.k0 as i64 {
            let k = self.n as i64 + j;
            sum += (1.0 + (k * k) as f64).powf(s);
        }
        2.0 * std::f64::consts::PI * 2.0 * sum * amp2
    }
}

/// Mean-zero two-mode data k₁^{σ−1}(sin k₁x + sin (k₁+1)x) driving the
/// norm-inflation construction.
#[derive(Clone, Debug)]
pub struct InflationData {
    pub k1: usize,
    pub sigma: f64,
    pub field: SpectralField,
}

impl InflationData {
    pub fn new(k1: usize, sigma: f64, max_mode: usize) -> Result<Self> {
        if k1 < 2 {
            return Err(Error::domain("inflation data needs k1 >= 2"));
        }
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::domain("sigma must lie in (0, 1)"));
        }
        if max_mode < k1 + 1 {
            return Err(Error::ModeRange {
                needed: k1 + 1,
                have: max_mode,
            });
        }
        let amp = (k1 as f64).powf(sigma - 1.0);
        let field = SpectralField::sin_wave(max_mode, k1 as i64, amp)?
            .add(&SpectralField::sin_wave(max_mode, k1 as i64 + 1, amp)?)?;
        Ok(Self { k1, sigma, field })
    }
}

/// Closed-form second iterate of the inflation data in the shifted frame:
/// eight single-mode terms, each a time-oscillatory integral of the form
/// ∫₀ᵗ S(t−t') c sin(mx − ℓt') dt' = c · t sinc(Δt/2) sin(mx − (φ̃(m)+ℓ)t/2)
/// with Δ = φ̃(m) − ℓ.
pub fn inflation_eta1_closed_form(
    data: &InflationData,
    t: f64,
    table: &SymbolTable,
) -> Result<SpectralField> {
    let k1 = data.k1 as i64;
    let k2 = k1 + 1;
    let need = 2 * (data.k1 + 1);
    if data.field.max_mode() < need || table.max_mode() < need {
        return Err(Error::ModeRange {
            needed: need,
            have: data.field.max_mode().min(table.max_mode()),
        });
    }
    let phase = |m: i64| table.value(Symbol::PhiShifted, m);
    let tau = |m: i64| table.value(Symbol::Tau, m);
    let psi = |m: i64| table.value(Symbol::Psi, m);
    let p1 = phase(k1)?;
    let p2 = phase(k2)?;
    let k1f = k1 as f64;
    let k2f = k2 as f64;

    // (mode m, phase speed ℓ, real amplitude −i·c) for the four τ-terms of
    // (S(t')η̄)² and the four ψ-terms of −(7/48)(∂x S(t')η̄)²
    let terms: [(i64, f64, f64); 8] = [
        (2 * k1, 2.0 * p1, -0.5 * tau(2 * k1)?),
        (2 * k2, 2.0 * p2, -0.5 * tau(2 * k2)?),
        (k1 - k2, p1 - p2, tau(k1 - k2)?),
        (k1 + k2, p1 + p2, -tau(k1 + k2)?),
        (2 * k1, 2.0 * p1, -(7.0 * k1f * k1f / 96.0) * psi(2 * k1)?),
        (2 * k2, 2.0 * p2, -(7.0 * k2f * k2f / 96.0) * psi(2 * k2)?),
        (k1 - k2, p1 - p2, -(7.0 * k1f * k2f / 48.0) * psi(k1 - k2)?),
        (k1 + k2, p1 + p2, -(7.0 * k1f * k2f / 48.0) * psi(k1 + k2)?),
    ];

    let scale = (data.k1 as f64).powf(2.0 * (data.sigma - 1.0));
    let mut out = SpectralField::zero(data.field.max_mode());
    for (m, ell, r) in terms {
        let delta = phase(m)? - ell;
        let amp = r * t * sinc(delta * t / 2.0) * scale;
        let center = (phase(m)? + ell) * t / 2.0;
        // amp·sin(mx − center): e^{-i center}/(2i) at +m, conjugate at −m
        let plus = Complex64::from_polar(1.0, -center) * Complex64::new(0.0, -0.5) * amp;
        let cur_p = out.coeff(m);
        out.set_coeff(m, cur_p + plus)?;
        let cur_m = out.coeff(-m);
        out.set_coeff(-m, cur_m + plus.conj())?;
    }
    Ok(out)
}

fn solve_to_time(
    eta0: &SpectralField,
    t: f64,
    cfg: &SolveConfig,
    table: &SymbolTable,
    min_steps: usize,
) -> Result<SpectralField> {
    let n = ((t / cfg.dt).ceil() as usize).max(min_steps);
    let dt = t / n as f64;
    let traj = integrate_fixed(eta0, 0.0, n, dt, cfg, table)?;
    Ok(traj.last_state().expect("nonempty").clone())
}

/// Scan the block-data family over N: the H^s norm of the data decays like
/// N^{s−1} while ‖I₂‖_{H^s} keeps an N-independent positive floor and the
/// first Fourier mode of I₂ obeys the explicit t-linear lower bound.
pub fn illposed_scan(
    n_list: &[usize],
    k0: usize,
    s: SobolevIndex,
    t: f64,
    table: &SymbolTable,
) -> Result<ExperimentReport> {
    if n_list.len() < 3 {
        return Err(Error::domain("scan needs at least 3 values of N"));
    }
    if !(s.0 < 1.0) {
        return Err(Error::domain("scan expects s < 1"));
    }
    let n_max = *n_list.iter().max().expect("nonempty");
    if table.max_mode() < 2 * (n_max + k0) {
        return Err(Error::ModeRange {
            needed: 2 * (n_max + k0),
            have: table.max_mode(),
        });
    }

    // measured Θ-bound over the interacting pairs at output modes ±1 (the
    // modes the lower-bound chain actually uses); fixes the valid t-window
    let mut c_theta: f64 = 0.0;
    for &n in n_list {
        let data = IllposedData::new(n, k0, 2 * (n + k0))?;
        let supp = data.field.support();
        for k in [-1i64, 1] {
            for &k1 in &supp {
                if data.field.coeff(k - k1).norm_sqr() == 0.0 {
                    continue;
                }
                c_theta = c_theta.max(theta(k, k1, table, Frame::Standard)?.abs());
            }
        }
    }
    c_theta /= k0 as f64;
    let t_window = std::f64::consts::PI / (4.0 * c_theta * k0 as f64);

    let mut report = ExperimentReport::new("illposed-scan");
    report.add_check("t inside valid window pi/(4 C k0)", t, t_window, CheckOp::Lt);

    let mut rows = Vec::new();
    let mut eta_norms = Vec::new();
    let mut i2_norms = Vec::new();
    let mut mode1_bound_ratio = f64::INFINITY;
    let mut c_x = f64::INFINITY;
    for &n in n_list {
        let data = IllposedData::new(n, k0, 2 * (n + k0))?;
        let eta_hs = sobolev_norm(&data.field, s);
        let i2 = second_iterate_formula(&data.field, t, table, Frame::Standard)?;
        let i2_hs = sobolev_norm(&i2, s);
        let f1 = i2.coeff(1).norm();
        let x_scale = chi(1, -(n as i64), table)?.abs() / ((n * n) as f64 * k0 as f64);
        c_x = c_x.min(x_scale);
        eta_norms.push((n as f64, eta_hs));
        i2_norms.push(i2_hs);
        rows.push(vec![n as f64, eta_hs, i2_hs, i2_hs * i2_hs, f1, x_scale]);
    }
    // the lower bound uses the sweep-wide kernel constant
    for (row, &n) in rows.iter().zip(n_list) {
        let f1 = row[4];
        let bound = (0.5_f64).sqrt() * t * c_x;
        mode1_bound_ratio = mode1_bound_ratio.min(f1 / bound);
        let _ = n;
    }
    report.add_series(
        "illposed_scan",
        &["n", "eta_hs", "i2_hs", "i2_hs_sq", "f_i2_mode1", "chi_scale"],
        rows,
    );

    let (slope, stderr) = fit_exponent(&eta_norms)?;
    report.add_fit("data_norm_vs_n", slope, stderr, s.0 - 1.0, 0.05, true);

    let min_i2 = i2_norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_i2 = i2_norms.iter().cloned().fold(0.0, f64::max);
    report.add_check("i2 floor: min >= 0.5 max", min_i2, 0.5 * max_i2, CheckOp::Ge);
    report.add_check(
        "mode-1 lower bound |F(I2)(1)| >= (sqrt2/2) t c_X",
        mode1_bound_ratio,
        1.0,
        CheckOp::Ge,
    );
    let mut inputs = serde_json::Map::new();
    inputs.insert("k0".into(), k0.into());
    inputs.insert("s".into(), s.0.into());
    inputs.insert("t".into(), t.into());
    inputs.insert("c_theta".into(), c_theta.into());
    inputs.insert("t_window".into(), t_window.into());
    inputs.insert("c_x".into(), c_x.into());
    report.set_inputs(serde_json::Value::Object(inputs));
    Ok(report)
}

/// Solve from ε·η_N, subtract the linear flow and ε²I₂, and fit the ε-power
/// of what is left: the remainder of the analytic data-to-solution series
/// is cubic in ε.
pub fn series_remainder_check(
    eps: f64,
    n: usize,
    k0: usize,
    t: f64,
    s: SobolevIndex,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<ExperimentReport> {
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(Error::domain("series check expects 0 < eps <= 0.1"));
    }
    let field_n = 2 * (n + k0);
    if table.max_mode() < field_n {
        return Err(Error::ModeRange {
            needed: field_n,
            have: table.max_mode(),
        });
    }
    let data = IllposedData::new(n, k0, field_n)?;
    let i2_unit = second_iterate_formula(&data.field, t, table, Frame::Standard)?;
    let lin_unit = table.semigroup(&data.field, t, Frame::Standard)?;
    let c0 = sobolev_norm(&i2_unit, s);

    let mut report = ExperimentReport::new("series-remainder");
    let mut rows = Vec::new();
    let mut rem_pts = Vec::new();
    let mut eta_hs_base = 0.0;
    for (i, e) in [eps, eps / 2.0, eps / 4.0].into_iter().enumerate() {
        let eta = solve_to_time(&data.field.scaled(e), t, cfg, table, 8)?;
        let rem = eta
            .sub(&lin_unit.scaled(e))?
            .sub(&i2_unit.scaled(e * e))?;
        let rem_h1 = sobolev_norm(&rem, SobolevIndex(1.0));
        let rem_hs = sobolev_norm(&rem, s);
        let eta_hs = sobolev_norm(&eta, s);
        if i == 0 {
            eta_hs_base = eta_hs;
        }
        rows.push(vec![e, rem_h1, rem_hs, eta_hs]);
        rem_pts.push((e, rem_h1));
    }
    report.add_series("series_remainder", &["eps", "rem_h1", "rem_hs", "eta_hs"], rows);
    let (slope, stderr) = fit_exponent(&rem_pts)?;
    report.add_fit("remainder_vs_eps", slope, stderr, 3.0, 0.10, true);
    // solution keeps the quadratic floor (C0/4)ε² once N is large
    report.add_check(
        "solution >= (C0/4) eps^2",
        eta_hs_base,
        0.25 * c0 * eps * eps,
        CheckOp::Ge,
    );
    let mut inputs = serde_json::Map::new();
    inputs.insert("n".into(), n.into());
    inputs.insert("k0".into(), k0.into());
    inputs.insert("t".into(), t.into());
    inputs.insert("s".into(), s.0.into());
    inputs.insert("c0".into(), c0.into());
    report.set_inputs(serde_json::Value::Object(inputs));
    Ok(report)
}

/// Shifted-frame norm-inflation sweep over k₁: small data (slope σ−1+s),
/// second iterate growing like k₁^{2σ}t at fixed t, and a remainder that
/// decays in k₁ at the blow-up times T_j = k₁^{−θσ}.
#[allow(clippy::too_many_arguments)]
pub fn inflation_experiment(
    k1_list: &[usize],
    sigma: f64,
    theta_exp: f64,
    s: SobolevIndex,
    fixed_t: f64,
    cfg: &SolveConfig,
    table: &SymbolTable,
) -> Result<ExperimentReport> {
    if k1_list.len() < 3 {
        return Err(Error::domain("inflation sweep needs at least 3 values"));
    }
    if !(sigma > 0.0 && sigma < 1.0 - s.0) {
        return Err(Error::domain("need 0 < sigma < 1 - s"));
    }
    if !(theta_exp > 3.0) {
        return Err(Error::domain("need theta > 3"));
    }
    let k_max = *k1_list.iter().max().expect("nonempty");
    if table.max_mode() < 2 * (k_max + 1) {
        return Err(Error::ModeRange {
            needed: 2 * (k_max + 1),
            have: table.max_mode(),
        });
    }
    let delta3 = table.params().delta3;
    // δ₃ <= 0 runs are probes: measured, reported, not asserted
    let assert_fits = delta3 > 0.0;

    let shifted_cfg = SolveConfig {
        frame: Frame::Shifted,
        ..cfg.clone()
    };

    let mut report = ExperimentReport::new("inflate");
    let mut rows = Vec::new();
    let mut data_pts = Vec::new();
    let mut eta1_fixed_pts = Vec::new();
    let mut eta1_tj_pts = Vec::new();
    let mut zeta_pts = Vec::new();
    for &k1 in k1_list {
        let field_n = 2 * (k1 + 1);
        let data = InflationData::new(k1, sigma, field_n)?;
        let t_j = (k1 as f64).powf(-theta_exp * sigma);
        let data_hs = sobolev_norm(&data.field, s);
        let eta1_fixed = sobolev_norm(&inflation_eta1_closed_form(&data, fixed_t, table)?, s);
        let eta1_tj_field = inflation_eta1_closed_form(&data, t_j, table)?;
        let eta1_tj = sobolev_norm(&eta1_tj_field, s);

        let eta_full = solve_to_time(&data.field, t_j, &shifted_cfg, table, 32)?;
        let zeta = eta_full
            .sub(&table.semigroup(&data.field, t_j, Frame::Shifted)?)?
            .sub(&eta1_tj_field)?;
        let zeta_h1 = sobolev_norm(&zeta, SobolevIndex(1.0));

        rows.push(vec![k1 as f64, t_j, data_hs, eta1_fixed, eta1_tj, zeta_h1]);
        data_pts.push((k1 as f64, data_hs));
        eta1_fixed_pts.push((k1 as f64, eta1_fixed));
        eta1_tj_pts.push((k1 as f64, eta1_tj));
        zeta_pts.push((k1 as f64, zeta_h1));
    }
    report.add_series(
        "inflation",
        &["k1", "t_j", "data_hs", "eta1_fixed_t_hs", "eta1_tj_hs", "zeta_tj_h1"],
        rows,
    );

    let (sl_data, se_data) = fit_exponent(&data_pts)?;
    report.add_fit("data_norm_vs_k1", sl_data, se_data, sigma - 1.0 + s.0, 0.05, assert_fits);
    let (sl_e1, se_e1) = fit_exponent(&eta1_fixed_pts)?;
    report.add_fit("eta1_fixed_t_vs_k1", sl_e1, se_e1, 2.0 * sigma, 0.05, assert_fits);
    let (sl_tj, se_tj) = fit_exponent(&eta1_tj_pts)?;
    report.add_fit(
        "eta1_at_tj_vs_k1",
        sl_tj,
        se_tj,
        (2.0 - theta_exp) * sigma,
        0.10,
        false,
    );
    let (sl_z, se_z) = fit_exponent(&zeta_pts)?;
    report.add_fit("zeta_at_tj_vs_k1", sl_z, se_z, (3.0 - theta_exp) * sigma, 1.0, false);
    report.add_check("zeta slope negative", sl_z, 0.0, CheckOp::Lt);
    let _ = se_z;

    let mut inputs = serde_json::Map::new();
    inputs.insert("sigma".into(), sigma.into());
    inputs.insert("theta".into(), theta_exp.into());
    inputs.insert("s".into(), s.0.into());
    inputs.insert("fixed_t".into(), fixed_t.into());
    inputs.insert("delta3".into(), delta3.into());
    inputs.insert("delta3_positive".into(), (delta3 > 0.0).into());
    report.set_inputs(serde_json::Value::Object(inputs));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{rhs_f, rhs_f_difference};
    use crate::rng::CounterRng;
    use crate::symbols::Preset;
    use std::f64::consts::PI;

    fn table(preset: Preset, n: usize) -> SymbolTable {
        SymbolTable::build(&preset.params(), n).unwrap()
    }

    #[test]
    fn theta_trivial_zeros_and_value() {
        let t = table(Preset::Hamiltonian, 16);
        for k in -8i64..=8 {
            assert_eq!(theta(k, 0, &t, Frame::Standard).unwrap(), 0.0);
            assert_eq!(theta(k, k, &t, Frame::Standard).unwrap(), 0.0);
        }
        // rational oracle: Θ(2,1) = φ(2) − 2φ(1) = 60/31 − 690/391
        let expect = 60.0 / 31.0 - 690.0 / 391.0;
        assert!((theta(2, 1, &t, Frame::Standard).unwrap() - expect).abs() < 1e-14);
        assert!(theta(20, 1, &t, Frame::Standard).is_err());
    }

    #[test]
    fn chi_values_and_scaling() {
        let t = table(Preset::Hamiltonian, 1030);
        for k1 in [-5i64, 1, 9] {
            assert_eq!(chi(0, k1, &t).unwrap(), 0.0);
        }
        // rational oracle at (1, -8): bracket = 3 − 7/12 + (7/12)(−8)(9)
        let expect = (3.0 - 7.0 / 12.0 + (7.0 / 12.0) * (-72.0)) / (4.0 * 391.0 / 360.0);
        assert!((chi(1, -8, &t).unwrap() - expect).abs() < 1e-12);

        // |𝒳(1, −N)| ~ N²: doubling N quadruples the kernel
        for n in [64i64, 128, 256] {
            let r = chi(1, -2 * n, &t).unwrap() / chi(1, -n, &t).unwrap();
            assert!((r - 4.0).abs() < 0.05, "N={n}: ratio {r}");
        }
    }

    #[test]
    fn oscillatory_factor_stable_through_resonance() {
        let t = 0.05;
        let mut expo = -14.0;
        while expo <= 0.0 {
            let th = 10f64.powf(expo);
            let stable = oscillatory_factor(th, t);
            assert!(stable.re.is_finite() && stable.im.is_finite());
            if (t * th).abs() > 1e-3 {
                // direct evaluation well-conditioned: cancellation error
                // eps/(tθ) sits below the 1e-12 comparison
                let direct = (Complex64::from_polar(1.0, t * th) - 1.0) / th;
                assert!(
                    (stable - direct).norm() <= 1e-12 * direct.norm(),
                    "theta={th:.3e}"
                );
            } else {
                // near the resonance the factor degenerates smoothly to i·t
                let drift = (stable - Complex64::new(0.0, t)).norm();
                assert!(
                    drift <= 0.75 * t * t * th + 1e-16 * t,
                    "theta={th:.3e}, drift={drift:.3e}"
                );
            }
            expo += 0.25;
        }
    }

    #[test]
    fn second_iterate_trivial_cases() {
        let t = table(Preset::Hamiltonian, 32);
        let h = IllposedData::new(8, 1, 32).unwrap().field;
        assert_eq!(
            second_iterate_formula(&h, 0.0, &t, Frame::Standard)
                .unwrap()
                .l1(),
            0.0
        );

        // single mode input: output supported on {±2m} only (mode 0 killed)
        let m = 5i64;
        let sin_m = SpectralField::sin_wave(16, m, 1.0).unwrap();
        let i2 = second_iterate_formula(&sin_m, 0.07, &table(Preset::Hamiltonian, 16), Frame::Standard)
            .unwrap();
        for (k, c) in i2.modes() {
            if c.norm() > 1e-15 {
                assert!(k.abs() == 2 * m, "unexpected mode {k}");
            }
        }
        assert!(i2.reality_defect() < 1e-14 * (1.0 + i2.l1()));
    }

    #[test]
    fn second_iterate_support_arithmetic() {
        // band input: output confined to (B+B) within range
        let mut h = SpectralField::zero(20);
        for k in 5..=7i64 {
            h.set_coeff(k, Complex64::new(0.3, 0.0)).unwrap();
            h.set_coeff(-k, Complex64::new(0.3, 0.0)).unwrap();
        }
        let t = table(Preset::Hamiltonian, 20);
        let i2 = second_iterate_formula(&h, 0.02, &t, Frame::Standard).unwrap();
        for (k, c) in i2.modes() {
            if c.norm() > 1e-18 {
                let a = k.abs();
                assert!((10..=14).contains(&a) || (1..=2).contains(&a), "mode {k}");
            }
        }
    }

    #[test]
    fn formula_matches_quadrature_oracle() {
        let t = table(Preset::Hamiltonian, 34);
        let data = IllposedData::new(16, 1, 34).unwrap();
        let cfg = SolveConfig::default();
        assert_eq!(
            second_iterate_quadrature(&data.field, 0.0, &t, &cfg, Frame::Standard)
                .unwrap()
                .l1(),
            0.0
        );
        let a = second_iterate_formula(&data.field, 0.05, &t, Frame::Standard).unwrap();
        let b = second_iterate_quadrature(&data.field, 0.05, &t, &cfg, Frame::Standard).unwrap();
        let err = sobolev_norm(&a.sub(&b).unwrap(), SobolevIndex(1.0));
        assert!(err < 1e-8, "formula vs quadrature: {err:.3e}");
    }

    #[test]
    fn small_sigma_data_norm_slope_approaches_ill_posed_family() {
        // as σ → 0 the data-norm exponent σ−1+s tends to the s−1 decay of
        // the block-data family
        let s = SobolevIndex(0.5);
        let sigma = 0.05;
        let pts: Vec<(f64, f64)> = [16usize, 32, 64, 128]
            .iter()
            .map(|&k1| {
                let d = InflationData::new(k1, sigma, k1 + 1).unwrap();
                (k1 as f64, sobolev_norm(&d.field, s))
            })
            .collect();
        let (slope, _) = crate::report::fit_exponent(&pts).unwrap();
        let expect = sigma - 1.0 + s.0;
        assert!((slope - expect).abs() < 0.02, "slope {slope} vs {expect}");
        assert!(expect < 0.0 && (expect - (s.0 - 1.0)).abs() <= sigma + 1e-15);
    }

    #[test]
    fn quadrature_linear_in_t_at_leading_order() {
        let t = table(Preset::Hamiltonian, 34);
        let data = IllposedData::new(16, 1, 34).unwrap();
        let cfg = SolveConfig { dt: 1e-5, ..Default::default() };
        let t0 = 1e-3;
        let full = second_iterate_quadrature(&data.field, t0, &t, &cfg, Frame::Standard).unwrap();
        let half = second_iterate_quadrature(&data.field, t0 / 2.0, &t, &cfg, Frame::Standard).unwrap();
        let r = sobolev_norm(&half, SobolevIndex(1.0)) / sobolev_norm(&full, SobolevIndex(1.0));
        assert!((r - 0.5).abs() < 5e-3, "small-t ratio {r}");
    }

    #[test]
    fn illposed_data_norms() {
        // k0 = 1: ‖η_N‖_{H¹} ≈ sqrt(12π) up to edge terms, exact by the
        // direct summation oracle
        let d = IllposedData::new(64, 1, 130).unwrap();
        let h1 = sobolev_norm(&d.field, SobolevIndex(1.0));
        assert!((h1 * h1 / d.norm_sq_exact(1.0) - 1.0).abs() < 1e-12);
        assert!((h1 / (12.0 * PI).sqrt() - 1.0).abs() < 0.01);

        // H^s norms shrink with N for s < 1
        let d2 = IllposedData::new(128, 1, 258).unwrap();
        assert!(
            sobolev_norm(&d2.field, SobolevIndex(0.5))
                < sobolev_norm(&d.field, SobolevIndex(0.5))
        );
        assert!(IllposedData::new(4, 4, 16).is_err());
        assert!(IllposedData::new(8, 1, 5).is_err());
    }

    #[test]
    fn inflation_data_shape() {
        let d = InflationData::new(16, 0.3, 34).unwrap();
        assert_eq!(d.field.mean(), Complex64::new(0.0, 0.0));
        assert_eq!(d.field.support().len(), 4);
        assert!(InflationData::new(1, 0.3, 10).is_err());
        assert!(InflationData::new(8, 1.2, 20).is_err());
    }

    #[test]
    fn closed_form_zero_at_t_zero_and_matches_quadrature() {
        let tb = table(Preset::Inflation, 34);
        let d = InflationData::new(16, 0.3, 34).unwrap();
        assert_eq!(inflation_eta1_closed_form(&d, 0.0, &tb).unwrap().l1(), 0.0);

        let cfg = SolveConfig { dt: 2e-5, ..Default::default() };
        let t0 = 1e-3;
        let a = inflation_eta1_closed_form(&d, t0, &tb).unwrap();
        let b = second_iterate_quadrature(&d.field, t0, &tb, &cfg, Frame::Shifted).unwrap();
        let err = sobolev_norm(&a.sub(&b).unwrap(), SobolevIndex(1.0));
        assert!(err < 1e-8, "closed form vs quadrature: {err:.3e}");
    }

    #[test]
    fn low_mode_term_dominates_inflation_iterate() {
        let tb = table(Preset::Inflation, 260);
        let s = SobolevIndex(0.5);
        let t0 = 1e-3;
        for k1 in [32usize, 128] {
            let d = InflationData::new(k1, 0.3, 2 * (k1 + 1)).unwrap();
            let e1 = inflation_eta1_closed_form(&d, t0, &tb).unwrap();
            let total = sobolev_norm(&e1, s);
            // strip modes ±1 and compare
            let rest = e1.map_modes(|k, c| if k.abs() == 1 { Complex64::new(0.0, 0.0) } else { c });
            assert!(
                sobolev_norm(&rest, s) < 0.02 * total,
                "k1={k1}: high modes carry {:.3e} of {:.3e}",
                sobolev_norm(&rest, s),
                total
            );
            // mode-±1 amplitude tracks k1^{2σ}·t up to the (1+1/k1) factor
            let kernel = 7.0 / 48.0 * (k1 * (k1 + 1)) as f64
                * tb.value(Symbol::Psi, 1).unwrap()
                - tb.value(Symbol::Tau, 1).unwrap();
            let expect = (k1 as f64).powf(2.0 * (0.3 - 1.0)) * kernel.abs() * t0
                * PI.sqrt()
                * (1.0 + 1.0f64).sqrt().powf(0.5); // ⟨1⟩^s with s = 1/2
            let got = sobolev_norm(
                &e1.map_modes(|k, c| if k.abs() == 1 { c } else { Complex64::new(0.0, 0.0) }),
                s,
            );
            assert!(
                (got / expect - 1.0).abs() < 1e-6,
                "k1={k1}: {got:.6e} vs {expect:.6e}"
            );
        }
    }

    #[test]
    fn nonlinearity_decomposition_identity() {
        // F(a+b+c) = F(a) + [F(a + (b+c)) − F(a)]: the grouped expansion used
        // to organize the remainder equals the direct evaluation
        let tb = table(Preset::Inflation, 24);
        let rng = CounterRng::new(555);
        let mk = |stream: u64, amp: f64| {
            let mut f = SpectralField::zero(24);
            let mut st = rng.stream(stream);
            for k in 1..=24i64 {
                let z = Complex64::new(st.standard_normal(), st.standard_normal())
                    * (amp / (1.0 + (k * k) as f64));
                f.set_coeff(k, z).unwrap();
                f.set_coeff(-k, z.conj()).unwrap();
            }
            f
        };
        let a = mk(0, 0.8);
        let b = mk(1, 0.3);
        let c = mk(2, 0.05);
        let bc = b.add(&c).unwrap();
        let direct = rhs_f(&a.add(&bc).unwrap(), &tb).unwrap();
        let grouped = rhs_f(&a, &tb)
            .unwrap()
            .add(&rhs_f_difference(&bc, &a, &tb).unwrap())
            .unwrap();
        let err = sobolev_norm(&direct.sub(&grouped).unwrap(), SobolevIndex(0.0));
        assert!(err < 1e-10, "decomposition defect {err:.3e}");
    }

    #[test]
    fn illposed_scan_small_smoke() {
        let tb = table(Preset::Hamiltonian, 2 * (64 + 1));
        let rep = illposed_scan(&[16, 32, 64], 1, SobolevIndex(0.5), 0.05, &tb).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
    }

    #[test]
    fn inflation_experiment_small_smoke() {
        let tb = table(Preset::Inflation, 2 * (32 + 1));
        let cfg = SolveConfig::default();
        let rep = inflation_experiment(
            &[8, 16, 32],
            0.3,
            3.5,
            SobolevIndex(0.5),
            1e-3,
            &cfg,
            &tb,
        )
        .unwrap();
        // small k1 values: fits are recorded; the zeta check must at least run
        assert_eq!(rep.series.len(), 1);
        assert!(rep.checks.iter().any(|c| c.name.contains("zeta")));
    }
}
