//! Numerical probes of the multilinear multiplier estimates: empirical
//! quotients over randomized corpora, and the explicit trilinear form whose
//! growth shows the bilinear bound is sharp below L².
//!
//! None of this proves an inequality; the quotients are empirical lower
//! bounds on the implicit constants, and stability of corpus maxima under
//! doubling of the resolution is reported as evidence of uniformity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::spectral::{product_exact, sobolev_norm, SobolevIndex, SpectralField};
use crate::symbols::{Symbol, SymbolTable};

/// ω(k) = |k| / (1 + k²), the comparison multiplier every bounded symbol is
/// dominated by.
pub fn omega(k: i64) -> f64 {
    let kk = k as f64;
    kk.abs() / (1.0 + kk * kk)
}

fn weighted_norm(f: &SpectralField, s: f64, weight: impl Fn(i64) -> f64) -> f64 {
    let mut sum = 0.0;
    for (k, c) in f.modes() {
        let kk = k as f64;
        let w = weight(k);
        sum += (1.0 + kk * kk).powf(s) * w * w * c.norm_sqr();
    }
    (2.0 * std::f64::consts::PI * sum).sqrt()
}

fn ratio_or_zero(num: f64, den: f64) -> Result<f64> {
    if den == 0.0 {
        if num == 0.0 {
            Ok(0.0)
        } else {
            Err(Error::ZeroDenominator)
        }
    } else {
        Ok(num / den)
    }
}

/// ‖ω(∂x)(uv)‖_{H^s} / (‖u‖_{H^s} ‖v‖_{H^s}) with the product exact.
pub fn omega_bilinear_ratio(u: &SpectralField, v: &SpectralField, s: SobolevIndex) -> Result<f64> {
    let du = sobolev_norm(u, s);
    let dv = sobolev_norm(v, s);
    if du == 0.0 || dv == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let p = product_exact(u, v)?;
    Ok(weighted_norm(&p, s.0, omega) / (du * dv))
}

/// The sharpness witness of the bilinear bound: coefficient blocks around
/// ±N interacting down to modes {-1, 0, 1}. Evaluated directly as a double
/// sum over the tiny supports, so negative s costs nothing. Grows like
/// N^{-2s}, unbounded for s < 0.
pub fn bilinear_sharpness_form(n: usize, s: SobolevIndex) -> Result<f64> {
    if n < 4 {
        return Err(Error::domain("sharpness form needs N >= 4"));
    }
    let n = n as i64;
    let a_supp = [n - 1, n, n + 1];
    let b_supp = [-n - 1, -n, -n + 1];
    let c_supp = [-1i64, 0, 1];
    let bracket = |k: i64| (1.0 + (k * k) as f64).sqrt();
    let mut total = 0.0;
    for &j in &a_supp {
        for &m in &b_supp {
            let k = j + m;
            if !c_supp.contains(&k) {
                continue;
            }
            let kk = k as f64;
            total += kk.abs() * bracket(k).powf(s.0)
                / ((1.0 + kk * kk) * bracket(j).powf(s.0) * bracket(m).powf(s.0));
        }
    }
    // ‖a‖‖b‖‖c‖ = 3^{3/2} for three unit blocks of width 3
    Ok(total / 27.0_f64.sqrt())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TauRatios {
    /// ‖τ(∂x)(uv)‖_{H^s} / (‖u‖_{H^s}‖v‖_{H^s})
    pub plain: f64,
    /// ‖∂x τ(∂x)(uv)‖_{H¹} / (‖u‖_{H¹}‖v‖_{H¹})
    pub derivative: f64,
}

fn table_value_fn<'a>(table: &'a SymbolTable, sym: Symbol) -> Result<impl Fn(i64) -> f64 + 'a> {
    let vals = table.values(sym);
    let off = table.max_mode() as i64;
    Ok(move |k: i64| vals[(k + off) as usize])
}

fn require_range(table: &SymbolTable, needed: usize) -> Result<()> {
    if table.max_mode() < needed {
        return Err(Error::ModeRange {
            needed,
            have: table.max_mode(),
        });
    }
    Ok(())
}

pub fn tau_ratios(
    u: &SpectralField,
    v: &SpectralField,
    s: SobolevIndex,
    table: &SymbolTable,
) -> Result<TauRatios> {
    require_range(table, u.max_mode() + v.max_mode())?;
    let p = product_exact(u, v)?;
    let tau = table_value_fn(table, Symbol::Tau)?;
    let plain = ratio_or_zero(
        weighted_norm(&p, s.0, &tau),
        sobolev_norm(u, s) * sobolev_norm(v, s),
    )?;
    let h1 = SobolevIndex(1.0);
    let derivative = ratio_or_zero(
        weighted_norm(&p, 1.0, |k| k as f64 * tau(k)),
        sobolev_norm(u, h1) * sobolev_norm(v, h1),
    )?;
    Ok(TauRatios { plain, derivative })
}

/// Cubic quotients ‖ψ(∂x)(uvw)‖_{H^s} / ∏‖·‖_{H^s} and the H¹ variant with
/// an outer derivative. The hypothesis s > 1/2 is enforced.
pub fn psi_cubic_ratios(
    u: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
    s: SobolevIndex,
    table: &SymbolTable,
) -> Result<(f64, f64)> {
    if !(s.0 > 0.5) {
        return Err(Error::domain("cubic estimate requires s > 1/2"));
    }
    require_range(table, u.max_mode() + v.max_mode() + w.max_mode())?;
    let triple = product_exact(&product_exact(u, v)?, w)?;
    let psi = table_value_fn(table, Symbol::Psi)?;
    let cubic = ratio_or_zero(
        weighted_norm(&triple, s.0, &psi),
        sobolev_norm(u, s) * sobolev_norm(v, s) * sobolev_norm(w, s),
    )?;
    let h1 = SobolevIndex(1.0);
    let cubic_derivative = ratio_or_zero(
        weighted_norm(&triple, 1.0, |k| k as f64 * psi(k)),
        sobolev_norm(u, h1) * sobolev_norm(v, h1) * sobolev_norm(w, h1),
    )?;
    Ok((cubic, cubic_derivative))
}

/// Gradient-pair quotients ‖ψ(∂x)(u_x v_x)‖_{H^s} / (‖u‖_{H^s}‖v‖_{H^s})
/// and the H¹ variant. The hypothesis s >= 1 is enforced.
pub fn psi_grad_ratios(
    u: &SpectralField,
    v: &SpectralField,
    s: SobolevIndex,
    table: &SymbolTable,
) -> Result<(f64, f64)> {
    if !(s.0 >= 1.0) {
        return Err(Error::domain("gradient-pair estimate requires s >= 1"));
    }
    require_range(table, u.max_mode() + v.max_mode())?;
    let pair = product_exact(&u.derivative(), &v.derivative())?;
    let psi = table_value_fn(table, Symbol::Psi)?;
    let grad = ratio_or_zero(
        weighted_norm(&pair, s.0, &psi),
        sobolev_norm(u, s) * sobolev_norm(v, s),
    )?;
    let h1 = SobolevIndex(1.0);
    let grad_derivative = ratio_or_zero(
        weighted_norm(&pair, 1.0, |k| k as f64 * psi(k)),
        sobolev_norm(u, h1) * sobolev_norm(v, h1),
    )?;
    Ok((grad, grad_derivative))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PsiRatios {
    pub cubic: f64,
    pub cubic_derivative: f64,
    pub grad_pair: f64,
    pub grad_pair_derivative: f64,
}

/// All four ψ quotients at once; requires s >= 1 so that every family's
/// hypothesis holds (the cubic-only range (1/2, 1) is served by
/// [`psi_cubic_ratios`]).
pub fn psi_ratios(
    u: &SpectralField,
    v: &SpectralField,
    w: &SpectralField,
    s: SobolevIndex,
    table: &SymbolTable,
) -> Result<PsiRatios> {
    if !(s.0 >= 1.0) {
        return Err(Error::domain("combined psi quotients require s >= 1"));
    }
    let (cubic, cubic_derivative) = psi_cubic_ratios(u, v, w, s, table)?;
    let (grad_pair, grad_pair_derivative) = psi_grad_ratios(u, v, s, table)?;
    Ok(PsiRatios {
        cubic,
        cubic_derivative,
        grad_pair,
        grad_pair_derivative,
    })
}

/// How corpus coefficients are drawn: flat complex Gaussians, or Gaussians
/// damped by ⟨k⟩^{-s-1} to probe near-extremal low-mode concentration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CorpusKind {
    Flat,
    Decay,
}

/// One empirical quotient with enough descriptor data to reproduce it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RatioSample {
    pub s: f64,
    pub ratio: f64,
    pub sample: u64,
    pub n: usize,
    pub kind: CorpusKind,
}

/// Reality-symmetric trig polynomial with independent Gaussian coefficients.
/// Flat and decay samples share the same Gaussian draws, and a field at
/// resolution N is the literal prefix of the same sample at 2N, so maxima
/// comparisons across N use common random numbers.
pub fn corpus_field(
    rng: &CounterRng,
    sample: u64,
    component: u64,
    n: usize,
    kind: CorpusKind,
    s: f64,
) -> SpectralField {
    let mut f = SpectralField::zero(n);
    for k in 1..=n as i64 {
        let w0 = rng.word(sample * 8 + component, 2 * k as u64);
        let w1 = rng.word(sample * 8 + component, 2 * k as u64 + 1);
        let g = |w: u64| {
            let u1 = (((w >> 11) + 1) as f64) * (1.0 / 9_007_199_254_740_992.0);
            let u2 = ((w.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11) as f64 + 0.5)
                * (1.0 / 9_007_199_254_740_992.0);
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        };
        let amp = match kind {
            CorpusKind::Flat => 1.0,
            CorpusKind::Decay => (1.0 + (k * k) as f64).powf(-(s + 1.0) / 2.0),
        };
        let z = num_complex::Complex64::new(g(w0), g(w1)) * amp * std::f64::consts::FRAC_1_SQRT_2;
        f.set_coeff(k, z).expect("in range");
        f.set_coeff(-k, z.conj()).expect("in range");
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EstimateFamily {
    BilinearOmega,
    TauPlain,
    TauDerivative,
    PsiCubic,
    PsiCubicDerivative,
    PsiGrad,
    PsiGradDerivative,
}

impl EstimateFamily {
    pub fn name(self) -> &'static str {
        match self {
            EstimateFamily::BilinearOmega => "bilinear-omega",
            EstimateFamily::TauPlain => "tau",
            EstimateFamily::TauDerivative => "tau-derivative",
            EstimateFamily::PsiCubic => "psi-cubic",
            EstimateFamily::PsiCubicDerivative => "psi-cubic-derivative",
            EstimateFamily::PsiGrad => "psi-grad",
            EstimateFamily::PsiGradDerivative => "psi-grad-derivative",
        }
    }

    /// Regularity values admissible for this family's hypothesis.
    pub fn admissible(self, s: f64) -> bool {
        match self {
            EstimateFamily::BilinearOmega | EstimateFamily::TauPlain => s >= 0.0,
            EstimateFamily::PsiCubic => s > 0.5,
            EstimateFamily::PsiGrad => s >= 1.0,
            // the H¹ derivative variants are pinned to s = 1
            EstimateFamily::TauDerivative
            | EstimateFamily::PsiCubicDerivative
            | EstimateFamily::PsiGradDerivative => (s - 1.0).abs() < 1e-12,
        }
    }
}

/// Evaluate one family's quotient over a seeded corpus of `samples` fields
/// (alternating flat / decay kinds) at resolution N.
pub fn corpus_sweep(
    family: EstimateFamily,
    s: SobolevIndex,
    n: usize,
    samples: u64,
    rng: &CounterRng,
    table: &SymbolTable,
) -> Result<Vec<RatioSample>> {
    if !family.admissible(s.0) {
        return Err(Error::domain(format!(
            "s = {} outside the hypothesis of {}",
            s.0,
            family.name()
        )));
    }
    let mut out = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let kind = if i % 2 == 0 { CorpusKind::Decay } else { CorpusKind::Flat };
        let u = corpus_field(rng, i, 0, n, kind, s.0);
        let v = corpus_field(rng, i, 1, n, kind, s.0);
        let ratio = match family {
            EstimateFamily::BilinearOmega => omega_bilinear_ratio(&u, &v, s)?,
            EstimateFamily::TauPlain => tau_ratios(&u, &v, s, table)?.plain,
            EstimateFamily::TauDerivative => tau_ratios(&u, &v, s, table)?.derivative,
            EstimateFamily::PsiCubic | EstimateFamily::PsiCubicDerivative => {
                let w = corpus_field(rng, i, 2, n, kind, s.0);
                let (c, cd) = psi_cubic_ratios(&u, &v, &w, s, table)?;
                if family == EstimateFamily::PsiCubic {
                    c
                } else {
                    cd
                }
            }
            EstimateFamily::PsiGrad => psi_grad_ratios(&u, &v, s, table)?.0,
            EstimateFamily::PsiGradDerivative => psi_grad_ratios(&u, &v, s, table)?.1,
        };
        out.push(RatioSample {
            s: s.0,
            ratio,
            sample: i,
            n,
            kind,
        });
    }
    Ok(out)
}

pub fn max_and_mean(samples: &[RatioSample]) -> (f64, f64) {
    let max = samples.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let mean = samples.iter().map(|r| r.ratio).sum::<f64>() / samples.len().max(1) as f64;
    (max, mean)
}
