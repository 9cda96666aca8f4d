//! Frequency-region decomposition of `(xi, eta, sigma)` space.
//!
//! The quartic energy estimates split frequency space into
//!
//! - `A1`: the low-frequency slab `min(|xi|, |eta|, |sigma|) < 1`;
//! - `A2`: inside the complement of `A1`, the set where
//!   `|z2|/10 < |z1 - z2| + |z2 - z3|` for some assignment of
//!   `(z1, z2, z3)` to a permutation of `(xi, eta, sigma)` — derivatives can
//!   be moved onto the difference frequencies there;
//! - `A2c` (its complement in the complement of `A1`), a narrow diagonal
//!   cone on which all three variables share a sign; its positive part is
//!   `A2c_plus` with `xi, eta, sigma >= 1`.
//!
//! The change of variables `eta -> xi - eta + sigma` swaps the difference
//! frequencies `xi - eta` and `eta - sigma`, leaves the quartic measure
//! invariant, and maps `A2c_plus` onto `B = B1 ∩ B2` below. Points in the
//! symmetric difference of `A2c_plus` and `B` are confined to a thin
//! near-unit slab, which [`swap_containment_check`] verifies numerically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A frequency triple `(xi, eta, sigma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqTriple {
    pub xi: f64,
    pub eta: f64,
    pub sigma: f64,
}

impl FreqTriple {
    pub fn new(xi: f64, eta: f64, sigma: f64) -> Self {
        FreqTriple { xi, eta, sigma }
    }

    /// Relative offset `mu = (xi - eta) / eta`, small on the diagonal cone.
    pub fn mu(&self) -> f64 {
        (self.xi - self.eta) / self.eta
    }

    /// Relative offset `nu = (sigma - eta) / eta`.
    pub fn nu(&self) -> f64 {
        (self.sigma - self.eta) / self.eta
    }
}

/// Membership flags for a frequency triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionFlags {
    pub in_a1: bool,
    pub in_a2: bool,
    pub in_a2c_plus: bool,
    pub in_b1: bool,
    pub in_b2: bool,
    pub in_b: bool,
}

/// Evaluate all region predicates verbatim from their defining inequalities.
/// The existential over assignments in `A2` is implemented as a loop over
/// all six permutations of `(xi, eta, sigma)`.
pub fn region_flags(t: FreqTriple) -> RegionFlags {
    let (x, e, s) = (t.xi, t.eta, t.sigma);
    let in_a1 = x.abs().min(e.abs()).min(s.abs()) < 1.0;

    let spread = |z1: f64, z2: f64, z3: f64| 0.1 * z2.abs() < (z1 - z2).abs() + (z2 - z3).abs();
    let some_spread = spread(e, x, s)
        || spread(s, x, e)
        || spread(x, e, s)
        || spread(s, e, x)
        || spread(x, s, e)
        || spread(e, s, x);
    let in_a2 = !in_a1 && some_spread;

    let in_a2c_plus = !in_a1 && !in_a2 && x >= 1.0 && e >= 1.0 && s >= 1.0;

    let es = x - e + s;
    let in_b1 = x >= 1.0 && es >= 1.0 && s >= 1.0;
    let in_b2 = (s - e).abs() + (x - s).abs() <= 0.1 * x
        && (x - e).abs() + (s - x).abs() <= 0.1 * s
        && (e - s).abs() + (x - e).abs() <= 0.1 * es;

    RegionFlags {
        in_a1,
        in_a2,
        in_a2c_plus,
        in_b1,
        in_b2,
        in_b: in_b1 && in_b2,
    }
}

/// The change of variables `eta -> xi - eta + sigma`. An involution; it
/// swaps the difference frequencies `xi - eta` and `eta - sigma` and maps
/// the positive diagonal cone onto `B`.
pub fn cov_map(t: FreqTriple) -> FreqTriple {
    FreqTriple::new(t.xi, t.xi - t.eta + t.sigma, t.sigma)
}

/// Outcome of [`swap_containment_check`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub sampled: usize,
    pub in_symmetric_difference: usize,
    pub violations: usize,
}

/// Sample triples from a `[-100, 100]^3` slab plus targeted draws near the
/// region boundaries; for every sample in the symmetric difference of
/// `A2c_plus` and `B`, assert
/// `1/2 <= xi, eta, sigma <= 3/2 + 30 (|xi - eta| + |eta - sigma|)`.
/// Returns the number of violations (contract: zero).
pub fn swap_containment_check(samples: usize, seed: u64) -> ContainmentReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_diff = 0;
    let mut violations = 0;
    for i in 0..samples {
        let t = match i % 5 {
            0 => FreqTriple::new(
                rng.gen_range(-100.0..100.0),
                rng.gen_range(-100.0..100.0),
                rng.gen_range(-100.0..100.0),
            ),
            1 | 2 => {
                // diagonal cone straddling the 1/10 spread boundary
                let eta = rng.gen_range(0.2f64.ln()..50f64.ln()).exp();
                let t = FreqTriple::new(
                    (1.0 + rng.gen_range(-0.15..0.15)) * eta,
                    eta,
                    (1.0 + rng.gen_range(-0.15..0.15)) * eta,
                );
                if i % 5 == 2 {
                    cov_map(t)
                } else {
                    t
                }
            }
            3 => {
                // xi - eta + sigma near the unit threshold
                let xi = rng.gen_range(0.8..1.4);
                let sigma = rng.gen_range(0.8..1.4);
                FreqTriple::new(xi, xi + sigma - 1.0 + rng.gen_range(-0.3..0.3), sigma)
            }
            _ => {
                // cone anchored near the unit cube corner
                let eta = rng.gen_range(0.85..1.35);
                FreqTriple::new(
                    (1.0 + rng.gen_range(-0.12..0.12)) * eta,
                    eta,
                    (1.0 + rng.gen_range(-0.12..0.12)) * eta,
                )
            }
        };
        let f = region_flags(t);
        if f.in_a2c_plus != f.in_b {
            in_diff += 1;
            let bound = 1.5 + 30.0 * ((t.xi - t.eta).abs() + (t.eta - t.sigma).abs());
            let lo = t.xi >= 0.5 && t.eta >= 0.5 && t.sigma >= 0.5;
            let hi = t.xi <= bound && t.eta <= bound && t.sigma <= bound;
            if !(lo && hi) {
                violations += 1;
            }
        }
    }
    ContainmentReport {
        sampled: samples,
        in_symmetric_difference: in_diff,
        violations,
    }
}
