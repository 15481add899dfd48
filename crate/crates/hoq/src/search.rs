//! Parameter search over the QAOA angle box: dense p=1 grids, seeded
//! COBYLA runs and the multi-seed experiment protocol.

use std::cell::{Cell, RefCell};
use std::f64::consts::{PI, TAU};

use hoq_core::encode::{self, Scheme};
use hoq_core::qaoa::{self, QaoaParams, QaoaProblem, RunResult};
use hoq_core::{Coeff, ColoringProblem};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Mixer angle range. The mixer is π-periodic up to a global sign.
pub const BETA_RANGE: (f64, f64) = (0.0, PI);
/// Phase angle range. Integer spectra make the phase 2π-periodic.
pub const GAMMA_RANGE: (f64, f64) = (0.0, TAU);

pub const DEFAULT_RESOLUTION: usize = 128;
pub const DEFAULT_BUDGET: usize = 200;
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub beta_index: usize,
    pub gamma_index: usize,
    pub beta: f64,
    pub gamma: f64,
    pub relative_error: f64,
    pub success_probability: f64,
}

/// A p=1 landscape sampled on a uniform grid. Surfaces are stored row-major
/// with β along rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub resolution: usize,
    pub beta_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub relative_error: Vec<f64>,
    pub success_probability: Vec<f64>,
    pub best: GridPoint,
}

impl GridResult {
    pub fn beta(&self, i: usize) -> f64 {
        axis_value(self.beta_range, self.resolution, i)
    }

    pub fn gamma(&self, j: usize) -> f64 {
        axis_value(self.gamma_range, self.resolution, j)
    }

    pub fn point(&self, i: usize, j: usize) -> GridPoint {
        let k = i * self.resolution + j;
        GridPoint {
            beta_index: i,
            gamma_index: j,
            beta: self.beta(i),
            gamma: self.gamma(j),
            relative_error: self.relative_error[k],
            success_probability: self.success_probability[k],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let r = self.resolution;
        (0..r * r).map(move |k| self.point(k / r, k % r))
    }
}

fn axis_value(range: (f64, f64), resolution: usize, i: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / resolution as f64
}

fn check_range(axis: &'static str, (lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::EmptyRange { axis, lo, hi })
    }
}

fn check_spectrum(problem: &QaoaProblem) -> Result<()> {
    qaoa::relative_error(problem.emin(), problem.emin(), problem.emax())?;
    Ok(())
}

/// Evaluates p=1 QAOA at every point of a `resolution × resolution` grid over
/// the half-open ranges. The best point is the first minimum of the
/// relative-error surface in row-major order.
pub fn grid_search(
    problem: &QaoaProblem,
    resolution: usize,
    beta_range: (f64, f64),
    gamma_range: (f64, f64),
) -> Result<GridResult> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    check_range("beta", beta_range)?;
    check_range("gamma", gamma_range)?;
    check_spectrum(problem)?;

    let samples: Vec<(f64, f64)> = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let beta = axis_value(beta_range, resolution, k / resolution);
            let gamma = axis_value(gamma_range, resolution, k % resolution);
            let run = problem.run(&QaoaParams::new(vec![beta], vec![gamma])?)?;
            Ok((run.relative_error, run.success_probability))
        })
        .collect::<Result<_>>()?;
    let (relative_error, success_probability): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();

    let mut best = 0;
    for (k, &v) in relative_error.iter().enumerate() {
        if v < relative_error[best] {
            best = k;
        }
    }
    let mut out = GridResult {
        resolution,
        beta_range,
        gamma_range,
        relative_error,
        success_probability,
        best: GridPoint {
            beta_index: 0,
            gamma_index: 0,
            beta: 0.0,
            gamma: 0.0,
            relative_error: 0.0,
            success_probability: 0.0,
        },
    };
    out.best = out.point(best / resolution, best % resolution);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Maximum objective evaluations per run.
    pub budget: usize,
    /// Initial trust-region radius as a fraction of each axis range.
    pub rho_fraction: f64,
    /// Absolute parameter tolerance.
    pub xtol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            rho_fraction: 0.1,
            xtol: 1e-4,
        }
    }
}

/// Uniform start inside the angle box.
pub fn random_start(layers: usize, rng: &mut impl Rng) -> QaoaParams {
    let betas = (0..layers).map(|_| rng.gen_range(BETA_RANGE.0..BETA_RANGE.1)).collect();
    let gammas = (0..layers).map(|_| rng.gen_range(GAMMA_RANGE.0..GAMMA_RANGE.1)).collect();
    QaoaParams::new(betas, gammas).expect("equal lengths")
}

/// Minimizes relative error with COBYLA from a seeded uniform start.
pub fn optimize(problem: &QaoaProblem, layers: usize, seed: u64, config: &OptimizerConfig) -> Result<RunResult> {
    if layers == 0 {
        return Err(Error::NoLayers);
    }
    let start = random_start(layers, &mut ChaCha8Rng::seed_from_u64(seed));
    optimize_from(problem, &start, config)
}

/// Minimizes relative error with COBYLA from `start`. The result is the
/// best point evaluated, so it is never worse than the start.
pub fn optimize_from(problem: &QaoaProblem, start: &QaoaParams, config: &OptimizerConfig) -> Result<RunResult> {
    let p = start.layers();
    if p == 0 {
        return Err(Error::NoLayers);
    }
    if config.budget == 0 {
        return Err(Error::ZeroBudget);
    }
    check_spectrum(problem)?;

    let mut bounds = vec![BETA_RANGE; p];
    bounds.extend(std::iter::repeat_n(GAMMA_RANGE, p));
    let rho: Vec<f64> = bounds.iter().map(|(lo, hi)| config.rho_fraction * (hi - lo)).collect();
    let x0 = start.to_flat();

    let evaluations = Cell::new(0usize);
    let best = RefCell::new((f64::INFINITY, x0.clone()));
    let objective = |x: &[f64], _: &mut ()| -> f64 {
        evaluations.set(evaluations.get() + 1);
        let value = score(problem, x);
        let mut best = best.borrow_mut();
        if value < best.0 {
            *best = (value, x.to_vec());
        }
        value
    };
    let no_constraints: &[fn(&[f64], &mut ()) -> f64] = &[];
    let tols = cobyla::StopTols {
        xtol_abs: vec![config.xtol; 2 * p],
        ..Default::default()
    };
    // Both outcomes carry a usable point; the tracked best is authoritative.
    let _ = cobyla::minimize(
        objective,
        &x0,
        &bounds,
        no_constraints,
        (),
        config.budget,
        cobyla::RhoBeg::Set(rho),
        Some(tols),
    );

    let (_, x) = best.into_inner();
    let mut result = problem.run(&QaoaParams::from_flat(&x)?)?;
    result.evaluations = evaluations.get().max(1);
    Ok(result)
}

fn score(problem: &QaoaProblem, x: &[f64]) -> f64 {
    let Ok(params) = QaoaParams::from_flat(x) else {
        return f64::INFINITY;
    };
    let state = problem.evolve(&params);
    match problem.expectation(&state) {
        Ok(e) => qaoa::relative_error(e, problem.emin(), problem.emax()).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

/// Linear-interpolation quantile of sorted data at `q ∈ [0, 1]`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `[Q1 − 1.5·IQR, Q3 + 1.5·IQR]` for non-empty data.
pub fn iqr_fences(samples: &[f64]) -> (f64, f64) {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    (q1 - 1.5 * iqr, q3 + 1.5 * iqr)
}

/// Which samples lie inside the fences, without the sample-count check.
pub fn iqr_keep_mask(samples: &[f64]) -> Vec<bool> {
    if samples.is_empty() {
        return Vec::new();
    }
    let (lo, hi) = iqr_fences(samples);
    samples.iter().map(|&v| v >= lo && v <= hi).collect()
}

/// Drops samples outside the 1.5·IQR fences, keeping input order.
pub fn iqr_filter(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.len() < 4 {
        return Err(Error::TooFewSamples(samples.len()));
    }
    Ok(samples
        .iter()
        .zip(iqr_keep_mask(samples))
        .filter(|(_, keep)| *keep)
        .map(|(&v, _)| v)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub scheme: Scheme,
    pub p: usize,
    pub seed: u64,
    pub relative_error: f64,
    pub success_probability: f64,
    pub evaluations: usize,
    pub params: QaoaParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub schemes: Vec<Scheme>,
    pub p_max: usize,
    pub samples: usize,
    pub seed: u64,
    /// Constraint weight for the reduced scheme.
    pub lambda: Coeff,
    pub optimizer: OptimizerConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schemes: Scheme::ALL.to_vec(),
            p_max: 5,
            samples: 10,
            seed: DEFAULT_SEED,
            lambda: Coeff::from_integer(3),
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<SampleRecord>,
    /// `filtered[k]` marks `records[k]` as an outlier in its (scheme, p)
    /// cell by success probability. Cells under 4 samples are never filtered.
    pub filtered: Vec<bool>,
}

impl ExperimentResult {
    /// The records surviving the outlier filter.
    pub fn kept(&self) -> impl Iterator<Item = &SampleRecord> {
        self.records.iter().zip(&self.filtered).filter(|(_, f)| !**f).map(|(r, _)| r)
    }

    pub fn cell(&self, scheme: Scheme, p: usize) -> impl Iterator<Item = &SampleRecord> {
        self.records.iter().filter(move |r| r.scheme == scheme && r.p == p)
    }
}

/// Runs `samples` seeded optimizations for every (scheme, p ≤ p_max) cell.
///
/// Per-run seeds are drawn in cell order from one generator seeded with the
/// master seed. Records come back grouped by cell in config order, then by
/// seed, whatever order the workers finish in.
pub fn experiment(problem: &ColoringProblem, config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.p_max == 0 {
        return Err(Error::NoLayers);
    }
    if config.samples == 0 {
        return Err(Error::NoSamples);
    }
    let problems: Vec<QaoaProblem> = config
        .schemes
        .iter()
        .map(|&s| {
            let prog = encode::encode(problem, s, config.lambda)?;
            Ok(QaoaProblem::new(&prog.poly.energy_table()?)?)
        })
        .collect::<Result<_>>()?;

    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let mut jobs = Vec::new();
    for s in 0..config.schemes.len() {
        for p in 1..=config.p_max {
            for _ in 0..config.samples {
                jobs.push((s, p, master.next_u64()));
            }
        }
    }
    jobs.sort_by_key(|&(s, p, seed)| (s, p, seed));

    let records: Vec<SampleRecord> = jobs
        .par_iter()
        .map(|&(s, p, seed)| {
            let run = optimize(&problems[s], p, seed, &config.optimizer)?;
            Ok(SampleRecord {
                scheme: config.schemes[s],
                p,
                seed,
                relative_error: run.relative_error,
                success_probability: run.success_probability,
                evaluations: run.evaluations,
                params: run.params,
            })
        })
        .collect::<Result<_>>()?;

    let mut filtered = vec![false; records.len()];
    for cell in records.chunks(config.samples).enumerate() {
        let (c, rows) = cell;
        if rows.len() < 4 {
            continue;
        }
        let values: Vec<f64> = rows.iter().map(|r| r.success_probability).collect();
        for (k, keep) in iqr_keep_mask(&values).into_iter().enumerate() {
            filtered[c * config.samples + k] = !keep;
        }
    }
    Ok(ExperimentResult { records, filtered })
}

/// Median of non-empty data.
pub fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile(&sorted, 0.5)
}
