//! Periodic spectral representation of real fields.
//!
//! A field is stored as Hermitian-symmetric Fourier coefficients on the
//! wavenumbers `k_j = 2*pi*j/L`, `j = -N/2 .. N/2 - 1`, with the Nyquist
//! mode `j = -N/2` pinned to zero. Coefficients are normalized so that a
//! pointwise product of two fields corresponds to the plain (unweighted)
//! convolution of their coefficient arrays and `c_0` is the mean of the
//! samples. With this convention the constant-free convolution formulas of
//! the symbol calculus hold verbatim at the discrete level.
//!
//! Quadratic products are computed by Galerkin truncation (direct
//! convolution over in-band pairs), which is alias-exact for band-limited
//! factors; a 3/2-zero-padded physical product serves as a cross-check
//! oracle.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{FkdvError, Result};
use crate::symbols::odd_abs_pow;

/// Relative tolerance for the Galerkin vs. padded-product cross-check.
pub const ALIAS_CHECK_TOL: f64 = 1e-12;

/// How quadratic products are kept alias-free. Galerkin truncation (exact
/// convolution over retained modes) is alias-free by construction; the
/// 3/2-padded physical product exists as a cross-check oracle only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DealiasPolicy {
    #[default]
    GalerkinTruncation,
}

/// How the zero mode of a singular multiplier (`1/(ik)` at `k = 0`) is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroModePolicy {
    /// Map `c_0 -> 0`. The constant is immaterial whenever the
    /// antiderivative only appears inside a differentiated expression.
    Annihilate,
    /// Error out unless the field is mean-zero.
    Strict,
}

/// Fourier multiplier specifications. All five symbols are real-even or
/// imaginary-odd, so each preserves Hermitian symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    /// `|D|^alpha`, symbol `|k|^alpha`. For `alpha < 0` the zero mode is
    /// annihilated (same convention as the antiderivative).
    FractionalAbs { alpha: f64 },
    /// `d/dx`, symbol `i k`.
    Derivative,
    /// `|D|^alpha d/dx`, symbol `i sign(k) |k|^(1+alpha)`; finite at `k = 0`
    /// for all `alpha > -1`.
    Dispersion { alpha: f64 },
    /// Hilbert transform, symbol `-i sign(k)`.
    Hilbert,
    /// `(d/dx)^-1`, symbol `-i/k` away from `k = 0`.
    AntiDerivative { policy: ZeroModePolicy },
}

/// Periodic grid: `N` equispaced points on `[0, L)`.
///
/// `N` must be even and at least 16. FFT plans are cached on the grid, so
/// grids are created once and shared via `Arc`.
pub struct SpectralGrid {
    n: usize,
    length: f64,
    two_pi_over_l: f64,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl SpectralGrid {
    pub fn new(n: usize, length: f64) -> Result<Arc<Self>> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(FkdvError::InvalidConfig(format!(
                "grid size must be even and >= 16, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(FkdvError::InvalidConfig(format!(
                "domain length must be positive and finite, got {length}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Arc::new(SpectralGrid {
            n,
            length,
            two_pi_over_l: 2.0 * std::f64::consts::PI / length,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Largest retained mode index `J = N/2 - 1` (Nyquist excluded).
    pub fn max_mode(&self) -> i64 {
        (self.n / 2 - 1) as i64
    }

    /// Physical wavenumber `k_j = 2*pi*j / L`.
    pub fn wavenumber(&self, j: i64) -> f64 {
        self.two_pi_over_l * j as f64
    }

    /// Retained mode indices `-J ..= J`.
    pub fn mode_indices(&self) -> impl Iterator<Item = i64> {
        let jmax = self.max_mode();
        -jmax..=jmax
    }

    /// Sample locations `x_i = i L / N`.
    pub fn sample_points(&self) -> Vec<f64> {
        (0..self.n).map(|i| i as f64 * self.dx()).collect()
    }

    pub fn dealias_policy(&self) -> DealiasPolicy {
        DealiasPolicy::GalerkinTruncation
    }
}

/// A real-valued periodic function stored as Hermitian-symmetric Fourier
/// coefficients (FFT index order, Nyquist pinned to zero).
///
/// Hermitian symmetry `c_{-j} = conj(c_j)` and `Im c_0 = 0` hold exactly by
/// construction: every operation computes the half spectrum `j >= 0` and
/// mirrors it.
#[derive(Debug, Clone)]
pub struct RealField {
    grid: Arc<SpectralGrid>,
    coeffs: Vec<Complex64>,
}

impl RealField {
    pub fn zero(grid: &Arc<SpectralGrid>) -> Self {
        RealField {
            grid: Arc::clone(grid),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    /// Build from the half spectrum `f(j)`, `j = 0 ..= J`; the negative side
    /// is the exact conjugate mirror, the imaginary part of `f(0)` is dropped.
    pub fn from_half_fn(grid: &Arc<SpectralGrid>, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let n = grid.n();
        let jmax = grid.max_mode();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[0] = Complex64::new(f(0).re, 0.0);
        for j in 1..=jmax {
            let v = f(j);
            coeffs[j as usize] = v;
            coeffs[n - j as usize] = v.conj();
        }
        RealField {
            grid: Arc::clone(grid),
            coeffs,
        }
    }

    /// Forward transform of `N` physical samples; `c_0` becomes the mean.
    pub fn from_samples(grid: &Arc<SpectralGrid>, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(FkdvError::SampleCount {
                expected: grid.n(),
                got: samples.len(),
            });
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(FkdvError::NonFiniteSample(i));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        grid.fft.process(&mut buf);
        let scale = 1.0 / grid.n() as f64;
        Ok(RealField::from_half_fn(grid, |j| buf[j as usize] * scale))
    }

    /// Set the listed non-negative modes, all others zero; repeated indices
    /// sum. `c_{-j}` mirrors automatically; the imaginary part of a `j = 0`
    /// entry is dropped.
    pub fn from_modes(grid: &Arc<SpectralGrid>, modes: &[(i64, Complex64)]) -> Result<Self> {
        let jmax = grid.max_mode();
        for &(j, _) in modes {
            if j < 0 || j > jmax {
                return Err(FkdvError::ModeOutOfBand(j));
            }
        }
        Ok(RealField::from_half_fn(grid, |j| {
            modes
                .iter()
                .filter(|&&(m, _)| m == j)
                .map(|&(_, c)| c)
                .sum()
        }))
    }

    /// Mean-zero field with uniformly random coefficients on `1 <= j <= j_cut`.
    pub fn random_band_limited(grid: &Arc<SpectralGrid>, j_cut: i64, rng: &mut impl Rng) -> Self {
        let j_cut = j_cut.min(grid.max_mode());
        let modes: Vec<Complex64> = (0..=j_cut)
            .map(|j| {
                if j == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            })
            .collect();
        RealField::from_half_fn(grid, |j| {
            if j <= j_cut {
                modes[j as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// Coefficient at mode `j` for `j` in `[-N/2, N/2)`; the Nyquist row is
    /// pinned to zero.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.grid.n() as i64;
        debug_assert!(j >= -n / 2 && j < n / 2);
        self.coeffs[j.rem_euclid(n) as usize]
    }

    /// Inverse transform to `N` physical samples.
    pub fn to_samples(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        self.grid.ifft.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// Coefficients in linear mode order `j = -J ..= J` (length `2J + 1`).
    pub(crate) fn to_linear(&self) -> Vec<Complex64> {
        let jmax = self.grid.max_mode();
        (-jmax..=jmax).map(|j| self.coeff(j)).collect()
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn check_grid(&self, other: &RealField) -> Result<()> {
        if self.grid.as_ref() != other.grid.as_ref() {
            return Err(FkdvError::GridMismatch("fields live on different grids"));
        }
        Ok(())
    }

    /// Discrete `L^2(0, L)` pairing `(f, g) = integral f g dx`, evaluated
    /// spectrally with the same `L`-weighted normalization as the norms.
    pub fn inner(&self, other: &RealField) -> Result<f64> {
        self.check_grid(other)?;
        let jmax = self.grid.max_mode();
        let mut acc = self.coeff(0).re * other.coeff(0).re;
        for j in 1..=jmax {
            acc += 2.0 * (self.coeff(j) * other.coeff(j).conj()).re;
        }
        Ok(self.grid.length() * acc)
    }

    /// Discrete surrogate of the `H^s` norm:
    /// `( L * sum_j (1 + k_j^2)^s |c_j|^2 )^(1/2)`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let jmax = self.grid.max_mode();
        let mut acc = self.coeff(0).norm_sqr();
        for j in 1..=jmax {
            let k = self.grid.wavenumber(j);
            acc += 2.0 * (1.0 + k * k).powf(s) * self.coeff(j).norm_sqr();
        }
        (self.grid.length() * acc).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `max_x |u(x)|` over the grid points.
    pub fn linf_norm(&self) -> f64 {
        self.to_samples().iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// `max_x |u'(x)|` over the grid points.
    pub fn grad_max(&self) -> f64 {
        self.derivative(1)
            .to_samples()
            .iter()
            .fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// Fraction of the `L^2` energy carried by the top third of the retained
    /// mode range.
    pub fn tail_fraction(&self) -> f64 {
        let jmax = self.grid.max_mode();
        let cut = 2 * jmax / 3;
        let mut total = self.coeff(0).norm_sqr();
        let mut tail = 0.0;
        for j in 1..=jmax {
            let e = 2.0 * self.coeff(j).norm_sqr();
            total += e;
            if j > cut {
                tail += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// Apply a Fourier multiplier `c_j -> sigma(k_j) c_j`.
    pub fn apply(&self, spec: Multiplier) -> Result<RealField> {
        if let Multiplier::AntiDerivative {
            policy: ZeroModePolicy::Strict,
        } = spec
        {
            let c0 = self.coeffs[0].re;
            if c0.abs() > 1e-13 * self.l2_norm().max(f64::MIN_POSITIVE) {
                return Err(FkdvError::ZeroMode(c0));
            }
        }
        let grid = &self.grid;
        Ok(RealField::from_half_fn(grid, |j| {
            let c = self.coeff(j);
            let k = grid.wavenumber(j);
            match spec {
                Multiplier::FractionalAbs { alpha } => {
                    if j == 0 {
                        // |0|^alpha is 0 for alpha > 0 and singular for
                        // alpha < 0; both conventions send c_0 to 0.
                        if alpha == 0.0 {
                            c
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    } else {
                        c * k.abs().powf(alpha)
                    }
                }
                Multiplier::Derivative => c * Complex64::new(0.0, k),
                Multiplier::Dispersion { alpha } => {
                    c * Complex64::new(0.0, odd_abs_pow(k, 1.0 + alpha))
                }
                Multiplier::Hilbert => {
                    if j == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c * Complex64::new(0.0, -k.signum())
                    }
                }
                Multiplier::AntiDerivative { .. } => {
                    if j == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c * Complex64::new(0.0, -1.0 / k)
                    }
                }
            }
        }))
    }

    /// `(d/dx)^order` via `(i k)^order`.
    pub fn derivative(&self, order: u32) -> RealField {
        let grid = &self.grid;
        RealField::from_half_fn(grid, |j| {
            let k = grid.wavenumber(j);
            let mag = k.powi(order as i32);
            let f = match order % 4 {
                0 => Complex64::new(mag, 0.0),
                1 => Complex64::new(0.0, mag),
                2 => Complex64::new(-mag, 0.0),
                _ => Complex64::new(0.0, -mag),
            };
            self.coeff(j) * f
        })
    }

    /// Spatial reflection `u(x) -> u(-x)`; on coefficients `c_j -> conj(c_j)`.
    pub fn reflect(&self) -> RealField {
        RealField::from_half_fn(&self.grid, |j| self.coeff(j).conj())
    }

    pub fn scale(&self, a: f64) -> RealField {
        RealField::from_half_fn(&self.grid, |j| self.coeff(j) * a)
    }

    pub fn add(&self, other: &RealField) -> Result<RealField> {
        self.check_grid(other)?;
        Ok(RealField::from_half_fn(&self.grid, |j| {
            self.coeff(j) + other.coeff(j)
        }))
    }

    pub fn sub(&self, other: &RealField) -> Result<RealField> {
        self.check_grid(other)?;
        Ok(RealField::from_half_fn(&self.grid, |j| {
            self.coeff(j) - other.coeff(j)
        }))
    }
}

/// Galerkin pointwise product `f g`: plain truncated convolution of the
/// coefficient arrays, both factors in-band.
pub fn product_galerkin(f: &RealField, g: &RealField) -> Result<RealField> {
    f.check_grid(g)?;
    let grid = f.grid();
    let jmax = grid.max_mode();
    let fl = f.to_linear();
    let gl = g.to_linear();
    let off = jmax;
    Ok(RealField::from_half_fn(grid, |j| {
        let lo = (-jmax).max(j - jmax);
        let hi = jmax.min(j + jmax);
        let mut s = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            s += fl[(j - m + off) as usize] * gl[(m + off) as usize];
        }
        s
    }))
}

/// Galerkin evaluation of `u u_x`: `c_out(j) = (i k_j / 2) * sum_m c(j-m) c(m)`
/// with both factors in-band. Alias-exact for band-limited fields.
pub fn quadratic_term_fast(u: &RealField) -> RealField {
    let grid = u.grid();
    let jmax = grid.max_mode();
    let lin = u.to_linear();
    let off = jmax; // linear index of mode 0
    RealField::from_half_fn(grid, |j| {
        let lo = (-jmax).max(j - jmax);
        let hi = jmax.min(j + jmax);
        let mut s = Complex64::new(0.0, 0.0);
        for m in lo..=hi {
            s += lin[(j - m + off) as usize] * lin[(m + off) as usize];
        }
        s * Complex64::new(0.0, 0.5 * grid.wavenumber(j))
    })
}

/// `u u_x` computed two ways — Galerkin convolution and a 3/2-zero-padded
/// physical product — asserted to agree to [`ALIAS_CHECK_TOL`] relative.
/// Returns the Galerkin route.
pub fn quadratic_term(u: &RealField) -> Result<RealField> {
    let galerkin = quadratic_term_fast(u);
    let padded = quadratic_padded_oracle(u);
    let scale = galerkin.l2_norm().max(padded.l2_norm());
    if scale > 0.0 {
        let rel = galerkin.sub(&padded)?.l2_norm() / scale;
        if rel > ALIAS_CHECK_TOL {
            return Err(FkdvError::AliasingCheck {
                rel,
                tol: ALIAS_CHECK_TOL,
            });
        }
    }
    Ok(galerkin)
}

/// Pointwise square `u^2` via a 3/2-zero-padded physical product, truncated
/// to the retained band. Alias-free for band-limited input: on the padded
/// grid the quadratic images fall entirely outside the kept modes.
pub fn pointwise_square_padded(u: &RealField) -> RealField {
    let grid = u.grid();
    let n = grid.n();
    let m = 3 * n / 2;
    let jmax = grid.max_mode();

    let mut planner = FftPlanner::new();
    let ifft_m = planner.plan_fft_inverse(m);
    let fft_m = planner.plan_fft_forward(m);

    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for j in -jmax..=jmax {
        buf[j.rem_euclid(m as i64) as usize] = u.coeff(j);
    }
    ifft_m.process(&mut buf);
    for c in buf.iter_mut() {
        let s = c.re;
        *c = Complex64::new(s * s, 0.0);
    }
    fft_m.process(&mut buf);
    let scale = 1.0 / m as f64;
    RealField::from_half_fn(grid, |j| buf[j.rem_euclid(m as i64) as usize] * scale)
}

/// Cross-check route for [`quadratic_term`]: padded physical square followed
/// by differentiation, `u u_x = (u^2)_x / 2`.
pub fn quadratic_padded_oracle(u: &RealField) -> RealField {
    pointwise_square_padded(u).derivative(1).scale(0.5)
}
