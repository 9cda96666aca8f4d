//! Lifespan sweep: how the first stopping time scales with the amplitude.
//!
//! For each rung of a geometric amplitude ladder the solver runs until a
//! stop trigger fires, with horizon `factor / eps^2`. Only rungs ending in a
//! physical trigger (norm doubling or gradient blow-up) enter the slope fit;
//! runs ending at the horizon or by loss of resolution are censored. The fit
//! is compared against the slope `-2` lower-bound scaling and the `-1`
//! hyperbolic baseline as a consistency check — the theory gives a lower
//! bound, so equality is never asserted.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FkdvError, Result};
use crate::evolution::{cfl_dt, integrate, EvolveConfig, StopReason};
use crate::experiments::{build_profile, fit_loglog, ExperimentConfig, FitResult, RunSummary};
use crate::spectral::SpectralGrid;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LifespanRecord {
    pub eps: f64,
    pub t_star: f64,
    pub stop: StopReason,
    pub grid_n: usize,
    /// Censored runs (horizon, under-resolved, or a numerical fault) never
    /// enter slope fits.
    pub censored: bool,
}

#[derive(Debug, Clone)]
pub struct LifespanOutput {
    pub records: Vec<LifespanRecord>,
    pub fit: Option<FitResult>,
    /// `(eps, t_star at 2N, relative difference)` for uncensored rungs when
    /// the resolution check is enabled.
    pub robustness: Vec<(f64, f64, f64)>,
    /// Consecutive uncensored ratios `t_star(eps_{i+1}) / t_star(eps_i)`.
    pub ratios: Vec<f64>,
    pub all_censored: bool,
    pub csv: String,
    pub summary: RunSummary,
}

fn one_run(cfg: &ExperimentConfig, eps: f64, grid_n: usize) -> Result<LifespanRecord> {
    let grid = SpectralGrid::new(grid_n, cfg.grid_length)?;
    let u0 = build_profile(&grid, cfg.profile, cfg.n_sob, cfg.seed).scale(eps);
    let dt = cfl_dt(&grid, &u0, cfg.cfl);
    let horizon = cfg.lifespan_horizon_factor / (eps * eps);
    let mut ecfg = EvolveConfig::new(cfg.alpha, dt, horizon);
    ecfg.n_sob = cfg.n_sob;
    // T* resolution: a couple hundred detection points per expected lifespan
    ecfg.record_every = ((horizon / dt / 2000.0).ceil() as usize).max(1);
    let traj = integrate(&u0, &ecfg, None)?;
    let censored = !matches!(
        traj.stop,
        StopReason::NormDoubling | StopReason::GradientBlowup
    );
    Ok(LifespanRecord {
        eps,
        t_star: traj.stop_time,
        stop: traj.stop,
        grid_n,
        censored,
    })
}

pub fn run_lifespan(cfg: &ExperimentConfig) -> Result<LifespanOutput> {
    cfg.validate()?;
    if cfg.eps_ladder.is_empty() {
        return Err(FkdvError::InvalidConfig(
            "lifespan needs an eps ladder".into(),
        ));
    }

    let records: Vec<LifespanRecord> = cfg
        .eps_ladder
        .par_iter()
        .map(|&eps| one_run(cfg, eps, cfg.grid_n))
        .collect::<Result<_>>()?;

    let uncensored: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| !r.censored)
        .map(|r| (r.eps, r.t_star))
        .collect();
    let all_censored = uncensored.is_empty();
    let fit = fit_loglog(&uncensored).ok();

    let mut ratios = Vec::new();
    for w in records.windows(2) {
        if !w[0].censored && !w[1].censored {
            ratios.push(w[1].t_star / w[0].t_star);
        }
    }

    let robustness: Vec<(f64, f64, f64)> = if cfg.lifespan_resolution_check {
        records
            .par_iter()
            .filter(|r| !r.censored)
            .map(|r| -> Result<(f64, f64, f64)> {
                let hi = one_run(cfg, r.eps, cfg.grid_n * 2)?;
                let rel = (hi.t_star - r.t_star).abs() / r.t_star;
                Ok((r.eps, hi.t_star, rel))
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut csv = String::from("eps,t_star,stop_reason,grid_n,censored\n");
    for r in &records {
        csv.push_str(&format!(
            "{:.17e},{:.17e},{},{},{}\n",
            r.eps, r.t_star, r.stop, r.grid_n, r.censored
        ));
    }

    let mut summary = RunSummary::new(cfg);
    if let Some(f) = &fit {
        summary.push_fit("lifespan", f);
    }
    Ok(LifespanOutput {
        records,
        fit,
        robustness,
        ratios,
        all_censored,
        csv,
        summary,
    })
}
