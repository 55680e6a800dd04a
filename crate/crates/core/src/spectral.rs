//! Real periodic functions on [0, 2π) stored as complex Fourier coefficients
//! over the symmetric mode range {-N, ..., N}.
//!
//! Convention: c(k) = (1/2π) ∫₀^{2π} f(x) e^{-ikx} dx, so that
//! f(x) = Σ_{|k|<=N} c(k) e^{ikx} and a real-valued f satisfies
//! c(-k) = conj(c(k)). The k = 0 coefficient of a real field is stored with
//! a zero imaginary part.
//!
//! Nonlinear products are evaluated pointwise on a zero-padded grid of at
//! least 4N+1 points, which keeps quadratic *and* cubic products alias-free
//! for every retained mode; a sharp 3/2 rule would not cover the cubic term.
//! Any operation that produces modes beyond N either truncates explicitly
//! ([`product`]) or returns an enlarged field ([`product_exact`]).

use std::cell::RefCell;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Absolute floor of the reality-defect tolerance; the actual threshold is
/// scaled by the coefficient mass of the field being checked.
pub const REALITY_TOL: f64 = 1e-12;

/// Sobolev regularity exponent. Negative values are permitted (they are
/// needed by the sharpness counterexample for the bilinear estimate).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevIndex(pub f64);

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::domain("Sobolev index must be finite"))
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Smallest power-of-two grid on which quadratic and cubic products of an
/// N-mode field are alias-free for the retained modes |k| <= N.
pub fn dealias_grid(max_mode: usize) -> usize {
    (4 * max_mode + 1).next_power_of_two().max(8)
}

/// A periodic function represented by its Fourier coefficients on
/// {-N, ..., N}. Immutable value semantics: every operation returns a new
/// field, so fields can be shared read-only across workers.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    max_mode: usize,
    /// index i holds the coefficient of mode k = i - max_mode
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zero(max_mode: usize) -> Self {
        Self {
            max_mode,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * max_mode + 1],
        }
    }

    pub fn from_coeffs(max_mode: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * max_mode + 1 {
            return Err(Error::domain(format!(
                "expected {} coefficients for max mode {max_mode}, got {}",
                2 * max_mode + 1,
                coeffs.len()
            )));
        }
        Ok(Self { max_mode, coeffs })
    }

    pub fn from_modes(max_mode: usize, modes: &[(i64, Complex64)]) -> Result<Self> {
        let mut f = Self::zero(max_mode);
        for &(k, c) in modes {
            f.set_coeff(k, c)?;
        }
        Ok(f)
    }

    /// amp·sin(kx): coefficients ∓ i·amp/2 at ±k (the zero field for k = 0).
    pub fn sin_wave(max_mode: usize, k: i64, amp: f64) -> Result<Self> {
        if k == 0 {
            return Ok(Self::zero(max_mode));
        }
        Self::from_modes(
            max_mode,
            &[
                (k, Complex64::new(0.0, -amp / 2.0)),
                (-k, Complex64::new(0.0, amp / 2.0)),
            ],
        )
    }

    /// amp·cos(kx): coefficients amp/2 at ±k (the constant amp for k = 0).
    pub fn cos_wave(max_mode: usize, k: i64, amp: f64) -> Result<Self> {
        if k == 0 {
            return Self::from_modes(max_mode, &[(0, Complex64::new(amp, 0.0))]);
        }
        Self::from_modes(
            max_mode,
            &[
                (k, Complex64::new(amp / 2.0, 0.0)),
                (-k, Complex64::new(amp / 2.0, 0.0)),
            ],
        )
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    fn idx(&self, k: i64) -> usize {
        (k + self.max_mode as i64) as usize
    }

    /// Coefficient of mode k; zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.max_mode {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[self.idx(k)]
        }
    }

    pub fn set_coeff(&mut self, k: i64, v: Complex64) -> Result<()> {
        if k.unsigned_abs() as usize > self.max_mode {
            return Err(Error::ModeRange {
                needed: k.unsigned_abs() as usize,
                have: self.max_mode,
            });
        }
        let i = self.idx(k);
        self.coeffs[i] = v;
        Ok(())
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.max_mode as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Modes with a nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.modes()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn mean(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// max_k |c(-k) - conj(c(k))|; zero for a field describing a real function.
    pub fn reality_defect(&self) -> f64 {
        let mut d: f64 = self.coeff(0).im.abs();
        for k in 1..=self.max_mode as i64 {
            d = d.max((self.coeff(-k) - self.coeff(k).conj()).norm());
        }
        d
    }

    /// Σ|c(k)|, used to scale tolerance checks.
    pub fn l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.map_modes(|_, c| c * a)
    }

    /// Multiply every coefficient by a fixed complex unit (e.g. -i to pass
    /// from the multiplier form of the nonlinearity to a real field).
    pub fn rotated(&self, z: Complex64) -> Self {
        self.map_modes(|_, c| c * z)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.max_mode != other.max_mode {
            return Err(Error::ModeRange {
                needed: self.max_mode.max(other.max_mode),
                have: self.max_mode.min(other.max_mode),
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            max_mode: self.max_mode,
            coeffs,
        })
    }

    pub fn map_modes(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let n = self.max_mode as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f(i as i64 - n, c))
            .collect();
        Self {
            max_mode: self.max_mode,
            coeffs,
        }
    }

    /// Same function on a different mode range: explicit truncation (drops
    /// coefficients) or zero-extension. Never implicit.
    pub fn resized(&self, max_mode: usize) -> Self {
        let mut out = Self::zero(max_mode);
        let n = max_mode.min(self.max_mode) as i64;
        for k in -n..=n {
            let i = out.idx(k);
            out.coeffs[i] = self.coeff(k);
        }
        out
    }

    /// Discrete Fourier coefficients of samples on the uniform grid
    /// x_j = 2πj/M, normalized to c(k) = (1/2π)∫ f e^{-ikx} dx. Exact for
    /// band-limited data when M >= 2N+1.
    pub fn from_physical(samples: &[f64], max_mode: usize) -> Result<Self> {
        let m = samples.len();
        if m < 2 * max_mode + 1 {
            return Err(Error::Resolution {
                needed: max_mode,
                got: m,
            });
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft_forward(&mut buf);
        let mut out = Self::zero(max_mode);
        let scale = 1.0 / m as f64;
        for k in -(max_mode as i64)..=max_mode as i64 {
            let src = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            let i = out.idx(k);
            out.coeffs[i] = buf[src] * scale;
        }
        // real input: the mean is real; drop the rounding-level imaginary part
        let i0 = out.idx(0);
        out.coeffs[i0].im = 0.0;
        Ok(out)
    }

    /// Evaluate Σ c(k) e^{ikx_j} on the M-point grid. The imaginary residue
    /// must sit at rounding level, otherwise the field does not describe a
    /// real function and a corrupted-field error is returned.
    pub fn to_physical(&self, m: usize) -> Result<Vec<f64>> {
        if m < 2 * self.max_mode + 1 {
            return Err(Error::Resolution {
                needed: self.max_mode,
                got: m,
            });
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, c) in self.modes() {
            let dst = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            buf[dst] = c;
        }
        fft_inverse(&mut buf);
        let tol = REALITY_TOL * (1.0 + self.l1());
        let mut defect: f64 = 0.0;
        for c in &buf {
            defect = defect.max(c.im.abs());
        }
        if !defect.is_finite() || defect > tol {
            return Err(Error::CorruptedField { defect });
        }
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    /// c(k) -> ik·c(k).
    pub fn derivative(&self) -> Self {
        self.map_modes(|k, c| Complex64::new(0.0, k as f64) * c)
    }
}

/// ‖f‖_{H^s} = (2π)^{1/2} (Σ ⟨k⟩^{2s} |c(k)|²)^{1/2} with ⟨k⟩ = (1+k²)^{1/2}.
pub fn sobolev_norm(f: &SpectralField, s: SobolevIndex) -> f64 {
    let mut sum = 0.0;
    for (k, c) in f.modes() {
        let kk = k as f64;
        sum += (1.0 + kk * kk).powf(s.0) * c.norm_sqr();
    }
    (2.0 * std::f64::consts::PI * sum).sqrt()
}

/// Homogeneous counterpart with weight |k|^{2s}; the k = 0 mode carries no
/// homogeneous content and is skipped.
pub fn hom_sobolev_norm(f: &SpectralField, s: SobolevIndex) -> f64 {
    let mut sum = 0.0;
    for (k, c) in f.modes() {
        if k == 0 {
            continue;
        }
        let kk = (k as f64).abs();
        sum += kk.powf(2.0 * s.0) * c.norm_sqr();
    }
    (2.0 * std::f64::consts::PI * sum).sqrt()
}

/// Truncation to |k| <= N of the exact convolution of two N-mode fields,
/// computed alias-free on the zero-padded grid.
pub fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.max_mode() != g.max_mode() {
        return Err(Error::ModeRange {
            needed: f.max_mode().max(g.max_mode()),
            have: f.max_mode().min(g.max_mode()),
        });
    }
    let n = f.max_mode();
    let m = dealias_grid(n);
    let a = f.to_physical(m)?;
    let b = g.to_physical(m)?;
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    SpectralField::from_physical(&prod, n)
}

/// Exact convolution on the enlarged range |k| <= N_f + N_g (no truncation).
pub fn product_exact(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let n_out = f.max_mode() + g.max_mode();
    let m = (2 * n_out + 1).next_power_of_two().max(8);
    let a = f.to_physical(m)?;
    let b = g.to_physical(m)?;
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    SpectralField::from_physical(&prod, n_out)
}

fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Snapshot format: header `k,re,im`, one row per k in {-N, ..., N},
/// 17 significant digits.
pub fn write_snapshot<W: Write>(f: &SpectralField, w: &mut W) -> Result<()> {
    writeln!(w, "k,re,im")?;
    for (k, c) in f.modes() {
        writeln!(w, "{},{},{}", k, fmt_g17(c.re), fmt_g17(c.im))?;
    }
    Ok(())
}

/// Read a snapshot and verify the reality invariant on load.
pub fn read_snapshot<R: BufRead>(r: &mut R) -> Result<SpectralField> {
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == "k,re,im" => {}
        _ => return Err(Error::domain("snapshot missing `k,re,im` header")),
    }
    let mut rows: Vec<(i64, Complex64)> = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split(',');
        let parse = |p: Option<&str>| -> Result<f64> {
            p.ok_or_else(|| Error::domain("short snapshot row"))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::domain(format!("bad snapshot number: {e}")))
        };
        let k = parts
            .next()
            .ok_or_else(|| Error::domain("short snapshot row"))?
            .trim()
            .parse::<i64>()
            .map_err(|e| Error::domain(format!("bad snapshot mode: {e}")))?;
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        rows.push((k, Complex64::new(re, im)));
    }
    let n = rows.iter().map(|(k, _)| k.unsigned_abs()).max().unwrap_or(0) as usize;
    if rows.len() != 2 * n + 1 {
        return Err(Error::domain(format!(
            "snapshot has {} rows, expected {} for max mode {n}",
            rows.len(),
            2 * n + 1
        )));
    }
    let f = SpectralField::from_modes(n, &rows)?;
    let defect = f.reality_defect();
    if defect > REALITY_TOL * (1.0 + f.l1()) {
        return Err(Error::CorruptedField { defect });
    }
    Ok(f)
}
