//! Scalar evaluation of the bilinear Fourier symbols.
//!
//! The central object is the two-variable symbol
//!
//! ```text
//!     m(a, b) = (a + b) / ( 2 [ |a|^alpha a + |b|^alpha b - |a+b|^alpha (a+b) ] ),
//! ```
//!
//! which solves `-(a+b)/2 + m(a,b) [ |a|^alpha a + |b|^alpha b - |a+b|^alpha (a+b) ] = 0`
//! and therefore removes the quadratic nonlinearity under the normal-form
//! change of unknown. Its denominator vanishes exactly on the three lines
//! `a = 0`, `b = 0`, `a + b = 0`; the first two are genuine poles, the third
//! is removable with limit `|a|^(-alpha) / (2 (1 + alpha))` for `alpha > 0`
//! and `0` for `alpha < 0`.
//!
//! The companion symbol `n(a, b) = -i / (2 [ ... ])` (same denominator)
//! satisfies `i (a + b) n(a, b) = m(a, b)` and is purely imaginary; this
//! module returns its imaginary part.
//!
//! Fractional powers of signed arguments are always evaluated as
//! `sign(x) |x|^(1+alpha)` — never as a power of a negative base.

use serde::{Deserialize, Serialize};

use crate::error::{FkdvError, Result};
use crate::regions::FreqTriple;

/// `sign(x) * |x|^p`, with `0^p = 0`.
pub fn odd_abs_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

/// Dispersion exponent plus the relative threshold below which an argument
/// pair counts as singular.
///
/// The primary range is `alpha` in `(-1, 1) \ {0}`; `alpha = -1` and
/// `alpha = 2` are admitted for closed-form oracle checks. `alpha = 0` makes
/// the denominator vanish identically and is rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolParams {
    pub alpha: f64,
    pub delta_sing: f64,
}

impl SymbolParams {
    pub const DEFAULT_DELTA: f64 = 1e-9;

    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_delta(alpha, Self::DEFAULT_DELTA)
    }

    pub fn with_delta(alpha: f64, delta_sing: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha == 0.0 {
            return Err(FkdvError::InvalidSymbolParams(format!(
                "alpha must be finite and nonzero, got {alpha}"
            )));
        }
        if !(delta_sing > 0.0 && delta_sing <= 1e-3) {
            return Err(FkdvError::InvalidSymbolParams(format!(
                "delta_sing must lie in (0, 1e-3], got {delta_sing}"
            )));
        }
        Ok(SymbolParams { alpha, delta_sing })
    }
}

/// Result of a scalar symbol evaluation. Poles yield an explicit marker,
/// never a finite stand-in: the caller chooses the quadrature convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolValue {
    Finite(f64),
    /// The argument pair lies (within `delta_sing` relative distance) on a
    /// pole line of the symbol.
    Pole,
    /// The argument pair is outside the symbol's domain.
    Invalid,
}

impl SymbolValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            SymbolValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    #[track_caller]
    pub fn unwrap_finite(self) -> f64 {
        self.finite().expect("symbol value is not finite")
    }
}

/// Denominator bracket `|a|^alpha a + |b|^alpha b - |s|^alpha s` with `s`
/// supplied by the caller (so lattice callers can pass the exact sum).
pub(crate) fn bracket(a: f64, b: f64, s: f64, alpha: f64) -> f64 {
    odd_abs_pow(a, 1.0 + alpha) + odd_abs_pow(b, 1.0 + alpha) - odd_abs_pow(s, 1.0 + alpha)
}

pub(crate) fn m_from_parts(a: f64, b: f64, s: f64, p: &SymbolParams) -> SymbolValue {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        return SymbolValue::Invalid;
    }
    let tol = p.delta_sing * scale;
    if a.abs() <= tol || b.abs() <= tol {
        return SymbolValue::Pole;
    }
    if s.abs() <= tol {
        // Removable line a + b = 0: limit value |a|^(-alpha) / (2 (1+alpha))
        // for alpha > 0, zero for alpha < 0. Evaluated through |a b| so that
        // snapped near-line pairs keep m(a, b) = m(b, a) exact.
        return SymbolValue::Finite(if p.alpha > 0.0 {
            (a.abs() * b.abs()).powf(-p.alpha / 2.0) / (2.0 * (1.0 + p.alpha))
        } else {
            0.0
        });
    }
    SymbolValue::Finite(s / (2.0 * bracket(a, b, s, p.alpha)))
}

pub(crate) fn n_from_parts(a: f64, b: f64, s: f64, p: &SymbolParams) -> SymbolValue {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        return SymbolValue::Invalid;
    }
    let tol = p.delta_sing * scale;
    if a.abs() <= tol || b.abs() <= tol || s.abs() <= tol {
        return SymbolValue::Pole;
    }
    SymbolValue::Finite(-1.0 / (2.0 * bracket(a, b, s, p.alpha)))
}

/// The normal-form symbol `m(a, b)`.
pub fn m_eval(a: f64, b: f64, p: &SymbolParams) -> SymbolValue {
    m_from_parts(a, b, a + b, p)
}

/// Imaginary part of the antiderivative symbol `n(a, b) = i * n_eval(a, b)`.
/// All three lines of the denominator's zero set are poles of `n`.
pub fn n_eval(a: f64, b: f64, p: &SymbolParams) -> SymbolValue {
    n_from_parts(a, b, a + b, p)
}

/// One skew-symmetry sample `m(xi-eta, eta) eta + m(eta-xi, xi) xi`, together
/// with the magnitude scale `|m1 eta| + |m2 xi|` the residual is measured
/// against.
#[derive(Debug, Clone, Copy)]
pub struct SkewResidual {
    pub value: f64,
    pub scale: f64,
}

impl SkewResidual {
    pub fn relative(&self) -> f64 {
        self.value.abs() / self.scale.max(f64::MIN_POSITIVE)
    }
}

/// Skew-symmetry residual; `None` when `(xi, eta)` lies within `delta_sing`
/// relative distance of a singular line (skipped marker).
pub fn skew_residual(xi: f64, eta: f64, p: &SymbolParams) -> Option<SkewResidual> {
    let scale = xi.abs().max(eta.abs()).max((xi - eta).abs());
    if scale == 0.0 {
        return None;
    }
    let tol = p.delta_sing * scale;
    if xi.abs() <= tol || eta.abs() <= tol || (xi - eta).abs() <= tol {
        return None;
    }
    let m1 = m_eval(xi - eta, eta, p).finite()?;
    let m2 = m_eval(eta - xi, xi, p).finite()?;
    Some(SkewResidual {
        value: m1 * eta + m2 * xi,
        scale: (m1 * eta).abs() + (m2 * xi).abs(),
    })
}

/// Relative residual of the defining identity at `(xi, eta)`:
/// `|-xi/2 + m(xi-eta, eta) [ |xi-eta|^a (xi-eta) + |eta|^a eta - |xi|^a xi ]| / |xi|`.
/// `None` within `delta_sing` relative distance of a singular line.
pub fn defining_identity_residual(xi: f64, eta: f64, p: &SymbolParams) -> Option<f64> {
    let scale = xi.abs().max(eta.abs()).max((xi - eta).abs());
    if scale == 0.0 {
        return None;
    }
    let tol = p.delta_sing * scale;
    if xi.abs() <= tol || eta.abs() <= tol || (xi - eta).abs() <= tol {
        return None;
    }
    let m = m_eval(xi - eta, eta, p).finite()?;
    let res = -0.5 * xi + m * bracket(xi - eta, eta, xi, p.alpha);
    Some(res.abs() / xi.abs())
}

/// Global growth envelope of `|m|`:
/// `|a|^(1-alpha)/|b| + |b|^(1-alpha)/|a|` for `alpha` in `(0, 1)`, and
/// `|a+b|^beta (|a|^(1-beta)/|b|^(1-beta) + |b|^(1-beta)/|a|^(1-beta))` for
/// `beta = -alpha` in `(0, 1)`.
pub fn envelope(a: f64, b: f64, p: &SymbolParams) -> SymbolValue {
    if a == 0.0 || b == 0.0 || a + b == 0.0 {
        return SymbolValue::Invalid;
    }
    if p.alpha > 0.0 && p.alpha < 1.0 {
        let e = a.abs().powf(1.0 - p.alpha) / b.abs() + b.abs().powf(1.0 - p.alpha) / a.abs();
        SymbolValue::Finite(e)
    } else if p.alpha > -1.0 && p.alpha < 0.0 {
        let beta = -p.alpha;
        let r = (a.abs() / b.abs()).powf(1.0 - beta);
        SymbolValue::Finite((a + b).abs().powf(beta) * (r + 1.0 / r))
    } else {
        SymbolValue::Invalid
    }
}

/// The six zeros of the polar denominator `mu(theta)`: the lines
/// `cos = 0`, `sin = 0`, `cos + sin = 0` on the unit circle.
pub const MU_ZEROS: [f64; 6] = [
    0.0,
    std::f64::consts::FRAC_PI_2,
    3.0 * std::f64::consts::FRAC_PI_4,
    std::f64::consts::PI,
    3.0 * std::f64::consts::FRAC_PI_2,
    7.0 * std::f64::consts::FRAC_PI_4,
];

/// `mu(theta) = |cos|^a cos + |sin|^a sin - |cos+sin|^a (cos+sin)`; the
/// denominator of `m` restricted to the unit circle, so that
/// `m(r cos, r sin) = (cos + sin) / (2 r^alpha mu(theta))`.
pub fn polar_mu(theta: f64, p: &SymbolParams) -> f64 {
    let (s, c) = theta.sin_cos();
    let q = 1.0 + p.alpha;
    odd_abs_pow(c, q) + odd_abs_pow(s, q) - odd_abs_pow(c + s, q)
}

fn circle_distance(theta: f64, zero: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (theta - zero).rem_euclid(two_pi);
    d.min(two_pi - d)
}

/// Minimum and maximum of `|m| / envelope` over the unit circle, excluding
/// `excl`-neighbourhoods of the six zeros of `mu`. Both extremes are finite
/// and stabilise as the sample count grows.
pub fn envelope_equivalence_sweep(p: &SymbolParams, theta_samples: usize, excl: f64) -> (f64, f64) {
    assert!(
        excl > 0.0 && excl < 0.1,
        "exclusion radius must lie in (0, 0.1)"
    );
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for i in 0..theta_samples {
        let theta = two_pi * (i as f64 + 0.5) / theta_samples as f64;
        if MU_ZEROS.iter().any(|&z| circle_distance(theta, z) < excl) {
            continue;
        }
        let (s, c) = theta.sin_cos();
        let (m, e) = match (m_eval(c, s, p), envelope(c, s, p)) {
            (SymbolValue::Finite(m), SymbolValue::Finite(e)) => (m, e),
            _ => continue,
        };
        let ratio = m.abs() / e;
        c1 = c1.min(ratio);
        c2 = c2.max(ratio);
    }
    (c1, c2)
}

/// Log-log slope of `|mu|` against the distance to a zero, fitted over
/// distances `1e-6 .. 1e-3`. Recovers the order of the zero: `1` for
/// `alpha` in `(0, 1)` and `1 + alpha` for `alpha` in `(-1, 0)`.
pub fn zero_order(theta_star: f64, p: &SymbolParams) -> Result<f64> {
    if !MU_ZEROS
        .iter()
        .any(|&z| circle_distance(theta_star, z) < 1e-9)
    {
        return Err(FkdvError::SymbolDomain(
            "theta_star is not a zero of the polar denominator",
        ));
    }
    // 13 log-spaced distances spanning the fitting window.
    let pts: Vec<(f64, f64)> = (0..13)
        .map(|i| {
            let d = 10f64.powf(-6.0 + 3.0 * i as f64 / 12.0);
            (d.ln(), polar_mu(theta_star + d, p).abs().ln())
        })
        .collect();
    Ok(least_squares_slope(&pts))
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// The commutator symbol `m(xi-eta, eta)/xi - m(xi-eta, sigma)/(xi-eta+sigma)`
/// whose cancellation structure moves two derivatives off the high modes.
pub fn commutator_symbol(t: FreqTriple, p: &SymbolParams) -> SymbolValue {
    if t.sigma == t.eta {
        // xi - eta + sigma = xi: the two fractions are identical and the
        // difference collapses before any evaluation, poles included.
        return SymbolValue::Finite(0.0);
    }
    let a = t.xi - t.eta;
    let s2 = a + t.sigma;
    let m1 = match m_from_parts(a, t.eta, t.xi, p) {
        SymbolValue::Finite(v) => v,
        other => return other,
    };
    let m2 = match m_from_parts(a, t.sigma, s2, p) {
        SymbolValue::Finite(v) => v,
        other => return other,
    };
    if t.xi == 0.0 || s2 == 0.0 {
        return SymbolValue::Pole;
    }
    SymbolValue::Finite(m1 / t.xi - m2 / s2)
}

/// Numerator of the commutator symbol over the positive cone:
/// `sigma^(1+a) - (xi-eta+sigma)^(1+a) - (eta^(1+a) - xi^(1+a))`.
/// Requires all four power arguments positive.
pub fn commutator_numerator(t: FreqTriple, p: &SymbolParams) -> SymbolValue {
    let s2 = (t.xi - t.eta) + t.sigma;
    if t.xi <= 0.0 || t.eta <= 0.0 || t.sigma <= 0.0 || s2 <= 0.0 {
        return SymbolValue::Invalid;
    }
    let q = 1.0 + p.alpha;
    SymbolValue::Finite(t.sigma.powf(q) - s2.powf(q) - (t.eta.powf(q) - t.xi.powf(q)))
}

/// Empirical supremum of
/// `|numerator| * eta^(1-alpha) / ( |xi-eta| (|xi-eta| + |eta-sigma|) )`
/// over the positive near-diagonal cone with `eta >= 1`, excluding points
/// with `|xi - eta| < delta_sing * eta`.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorBound {
    pub max_ratio: f64,
    pub samples_used: usize,
}

pub fn commutator_bound_sweep(p: &SymbolParams, samples: usize, seed: u64) -> CommutatorBound {
    use crate::regions::region_flags;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = 0.0f64;
    let mut used = 0;
    while used < samples {
        let eta = rng.gen_range(1.2f64.ln()..1e3f64.ln()).exp();
        let mu: f64 = rng.gen_range(-0.1..0.1);
        let nu: f64 = rng.gen_range(-0.1..0.1);
        let t = FreqTriple::new((1.0 + mu) * eta, eta, (1.0 + nu) * eta);
        if !region_flags(t).in_a2c_plus {
            continue;
        }
        if (t.xi - t.eta).abs() < p.delta_sing * t.eta {
            continue;
        }
        let q = match commutator_numerator(t, p) {
            SymbolValue::Finite(v) => v,
            _ => continue,
        };
        let denom = (t.xi - t.eta).abs() * ((t.xi - t.eta).abs() + (t.eta - t.sigma).abs());
        let ratio = q.abs() * t.eta.powf(1.0 - p.alpha) / denom;
        max_ratio = max_ratio.max(ratio);
        used += 1;
    }
    CommutatorBound {
        max_ratio,
        samples_used: used,
    }
}
