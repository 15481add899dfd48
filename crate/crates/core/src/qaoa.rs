//! Noise-free QAOA on diagonal Hamiltonians.
//!
//! A layer applies the phase `e^{-iγE(x)}` elementwise, then the mixer
//! `e^{-iβX}` on every qubit. Runs start from the uniform superposition.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gadget::cis;
use crate::poly::EnergyTable;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Largest numerator spread served from a phase lookup table.
const PHASE_LUT_LIMIT: i64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return Err(Error::ParamLength {
                layers: betas.len().max(gammas.len()),
                betas: betas.len(),
                gammas: gammas.len(),
            });
        }
        Ok(Self { betas, gammas })
    }

    pub fn zero_layers() -> Self {
        Self {
            betas: Vec::new(),
            gammas: Vec::new(),
        }
    }

    /// Splits `[β_1..β_p, γ_1..γ_p]`.
    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::ParamLength {
                layers: x.len() / 2,
                betas: x.len() / 2 + 1,
                gammas: x.len() / 2,
            });
        }
        let (b, g) = x.split_at(x.len() / 2);
        Self::new(b.to_vec(), g.to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn layers(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn uniform(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let a = 1.0 / libm::sqrt(dim as f64);
        Self {
            num_qubits,
            amps: vec![Complex64::new(a, 0.0); dim],
        }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: amps.len().next_power_of_two(),
                got: amps.len(),
            });
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// `e^{-iβX}` on every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (c, s) = (libm::cos(beta), libm::sin(beta));
        let mut h = 1;
        while h < self.amps.len() {
            for block in self.amps.chunks_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    // [c, -is; -is, c]
                    *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *b = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
                }
            }
            h *= 2;
        }
    }
}

/// Precomputed view of an energy table for repeated QAOA runs.
#[derive(Debug, Clone)]
pub struct QaoaProblem {
    num_qubits: usize,
    numerators: Vec<i64>,
    denom: f64,
    energies: Vec<f64>,
    ground: Vec<usize>,
    emin: f64,
    emax: f64,
    lut_base: Option<i64>,
    lut_len: usize,
}

impl QaoaProblem {
    /// Uses the table's exact ground states as winning states.
    pub fn new(table: &EnergyTable) -> Result<Self> {
        let ground = table.ground_states();
        Self::with_ground_set(table, ground)
    }

    pub fn with_ground_set(table: &EnergyTable, mut ground: Vec<usize>) -> Result<Self> {
        let n = table.num_vars();
        if n > MAX_QUBITS {
            return Err(Error::CapExceeded {
                what: "simulated qubits",
                size: n as u64,
                cap: MAX_QUBITS as u64,
            });
        }
        if ground.is_empty() {
            return Err(Error::EmptyGroundSet);
        }
        ground.sort_unstable();
        ground.dedup();
        if let Some(&bad) = ground.iter().find(|&&g| g >= table.len()) {
            return Err(Error::DimensionMismatch {
                expected: table.len(),
                got: bad,
            });
        }
        let numerators = table.numerators().to_vec();
        let lo = numerators.iter().copied().min().unwrap_or(0);
        let hi = numerators.iter().copied().max().unwrap_or(0);
        let (lut_base, lut_len) = match hi.checked_sub(lo) {
            Some(spread) if spread < PHASE_LUT_LIMIT => (Some(lo), spread as usize + 1),
            _ => (None, 0),
        };
        let energies = table.to_f64();
        let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let emax = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            num_qubits: n,
            numerators,
            denom: table.denominator() as f64,
            energies,
            ground,
            emin,
            emax,
            lut_base,
            lut_len,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn ground_set(&self) -> &[usize] {
        &self.ground
    }

    pub fn emin(&self) -> f64 {
        self.emin
    }

    pub fn emax(&self) -> f64 {
        self.emax
    }

    /// `e^{-iγE}` elementwise.
    pub fn apply_phase(&self, state: &mut StateVector, gamma: f64) {
        match self.lut_base {
            Some(base) => {
                let lut: Vec<Complex64> = (0..self.lut_len)
                    .map(|k| cis(-gamma * (base + k as i64) as f64 / self.denom))
                    .collect();
                for (a, &v) in state.amps.iter_mut().zip(&self.numerators) {
                    *a *= lut[(v - base) as usize];
                }
            }
            None => {
                for (a, &e) in state.amps.iter_mut().zip(&self.energies) {
                    *a *= cis(-gamma * e);
                }
            }
        }
    }

    pub fn evolve(&self, params: &QaoaParams) -> StateVector {
        let mut state = StateVector::uniform(self.num_qubits);
        for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
            self.apply_phase(&mut state, gamma);
            state.apply_mixer(beta);
        }
        state
    }

    pub fn run(&self, params: &QaoaParams) -> Result<RunResult> {
        let state = self.evolve(params);
        let expectation = self.expectation(&state)?;
        Ok(RunResult {
            expectation,
            relative_error: relative_error(expectation, self.emin, self.emax)?,
            success_probability: success_probability(&state, &self.ground)?,
            params: params.clone(),
            evaluations: 1,
        })
    }

    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        expectation_values(state, &self.energies)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub expectation: f64,
    pub relative_error: f64,
    pub success_probability: f64,
    pub params: QaoaParams,
    /// Objective evaluations spent producing this result.
    pub evaluations: usize,
}

pub fn run_qaoa(table: &EnergyTable, ground_set: &[usize], params: &QaoaParams) -> Result<RunResult> {
    QaoaProblem::with_ground_set(table, ground_set.to_vec())?.run(params)
}

/// `Σ |a_i|² E_i`.
pub fn expectation(state: &StateVector, table: &EnergyTable) -> Result<f64> {
    expectation_values(state, &table.to_f64())
}

fn expectation_values(state: &StateVector, energies: &[f64]) -> Result<f64> {
    if state.amps.len() != energies.len() {
        return Err(Error::DimensionMismatch {
            expected: energies.len(),
            got: state.amps.len(),
        });
    }
    Ok(state.amps.iter().zip(energies).map(|(a, e)| a.norm_sqr() * e).sum())
}

/// Total probability on the winning states.
pub fn success_probability(state: &StateVector, ground_set: &[usize]) -> Result<f64> {
    if ground_set.is_empty() {
        return Err(Error::EmptyGroundSet);
    }
    let mut total = 0.0;
    for &g in ground_set {
        let a = state.amps.get(g).ok_or(Error::DimensionMismatch {
            expected: state.amps.len(),
            got: g,
        })?;
        total += a.norm_sqr();
    }
    Ok(total.clamp(0.0, 1.0))
}

/// `(E - emin)/(emax - emin)`, clamped to `[0, 1]`.
pub fn relative_error(expectation: f64, emin: f64, emax: f64) -> Result<f64> {
    if emax.partial_cmp(&emin) != Some(core::cmp::Ordering::Greater) {
        return Err(Error::DegenerateSpectrum { emin, emax });
    }
    Ok(((expectation - emin) / (emax - emin)).clamp(0.0, 1.0))
}
