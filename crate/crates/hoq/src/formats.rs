//! On-disk representations. Coefficients travel as exact `"p/q"` strings;
//! a bare integer `"p"` is accepted on input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use hoq_core::encode::{QubitLabel, Scheme};
use hoq_core::gadget::{Gate, GateCircuit};
use hoq_core::{Coeff, ColoringProblem, IsingProgram, SpinPolynomial};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{ExperimentResult, GridResult};

pub fn coeff_to_string(c: Coeff) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn parse_coeff(s: &str) -> Result<Coeff> {
    s.trim()
        .parse::<Coeff>()
        .map_err(|e| Error::format("coefficient", format!("{s:?}: {e}")))
}

pub fn coeff_to_f64(c: Coeff) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub vars: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub num_vars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(poly: &SpinPolynomial) -> Self {
        Self {
            num_vars: poly.num_vars(),
            terms: poly
                .terms()
                .map(|(vars, c)| TermJson {
                    vars: vars.to_vec(),
                    coeff: coeff_to_string(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<SpinPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.vars.clone(), parse_coeff(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpinPolynomial::from_terms(self.num_vars, terms)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub colors: usize,
}

impl ProblemJson {
    pub fn from_problem(p: &ColoringProblem) -> Self {
        Self {
            n: p.num_vertices(),
            edges: p.edges().iter().map(|&(u, v)| [u, v]).collect(),
            colors: p.colors(),
        }
    }

    pub fn to_problem(&self) -> Result<ColoringProblem> {
        Ok(ColoringProblem::new(
            self.n,
            self.edges.iter().map(|e| (e[0], e[1])),
            self.colors,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LabelJson {
    Bit { vertex: usize, bit: usize },
    Color { vertex: usize, color: usize },
    Aux { left: usize, right: usize },
}

impl From<QubitLabel> for LabelJson {
    fn from(l: QubitLabel) -> Self {
        match l {
            QubitLabel::Bit { vertex, bit } => LabelJson::Bit { vertex, bit },
            QubitLabel::Color { vertex, color } => LabelJson::Color { vertex, color },
            QubitLabel::Aux { left, right } => LabelJson::Aux { left, right },
        }
    }
}

impl From<LabelJson> for QubitLabel {
    fn from(l: LabelJson) -> Self {
        match l {
            LabelJson::Bit { vertex, bit } => QubitLabel::Bit { vertex, bit },
            LabelJson::Color { vertex, color } => QubitLabel::Color { vertex, color },
            LabelJson::Aux { left, right } => QubitLabel::Aux { left, right },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramJson {
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub problem: ProblemJson,
    pub var_map: Vec<LabelJson>,
    pub polynomial: PolyJson,
}

impl ProgramJson {
    pub fn from_program(prog: &IsingProgram) -> Self {
        Self {
            scheme: prog.scheme.name().to_owned(),
            lambda: prog.lambda.map(coeff_to_string),
            problem: ProblemJson::from_problem(&prog.problem),
            var_map: prog.labels.iter().map(|&l| l.into()).collect(),
            polynomial: PolyJson::from_poly(&prog.poly),
        }
    }

    pub fn to_program(&self) -> Result<IsingProgram> {
        let scheme = Scheme::from_name(&self.scheme).ok_or_else(|| Error::format("scheme", self.scheme.clone()))?;
        let poly = self.polynomial.to_poly()?;
        if self.var_map.len() != poly.num_vars() {
            return Err(Error::format(
                "program",
                format!("{} labels for {} variables", self.var_map.len(), poly.num_vars()),
            ));
        }
        Ok(IsingProgram {
            poly,
            scheme,
            labels: self.var_map.iter().map(|&l| l.into()).collect(),
            problem: self.problem.to_problem()?,
            lambda: self.lambda.as_deref().map(parse_coeff).transpose()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum GateJson {
    Cx { control: usize, target: usize },
    Rz { qubit: usize, multiplier: String },
}

/// A circuit for `e^{-iγH}`; each `rz` rotates by `multiplier · γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub width: usize,
    pub global_phase: String,
    pub gates: Vec<GateJson>,
}

impl CircuitJson {
    pub fn from_circuit(circ: &GateCircuit) -> Self {
        Self {
            width: circ.width(),
            global_phase: coeff_to_string(circ.global_phase()),
            gates: circ
                .gates()
                .iter()
                .map(|g| match *g {
                    Gate::Cx { control, target } => GateJson::Cx { control, target },
                    Gate::Rz { qubit, multiplier } => GateJson::Rz {
                        qubit,
                        multiplier: coeff_to_string(multiplier),
                    },
                })
                .collect(),
        }
    }

    pub fn to_circuit(&self) -> Result<GateCircuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                Ok(match g {
                    GateJson::Cx { control, target } => Gate::Cx {
                        control: *control,
                        target: *target,
                    },
                    GateJson::Rz { qubit, multiplier } => Gate::Rz {
                        qubit: *qubit,
                        multiplier: parse_coeff(multiplier)?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GateCircuit::new(self.width, gates, parse_coeff(&self.global_phase)?)?)
    }
}

/// OpenQASM 2 text for the circuit at a fixed `gamma`. The global phase is
/// not representable and is dropped.
pub fn to_qasm(circ: &GateCircuit, gamma: f64) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circ.width());
    for g in circ.gates() {
        let _ = match *g {
            Gate::Cx { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            Gate::Rz { qubit, multiplier } => {
                writeln!(out, "rz({}) q[{qubit}];", coeff_to_f64(multiplier) * gamma)
            }
        };
    }
    out
}

pub const RESULTS_HEADER: &str = "scheme,p,seed,relative_error,success_probability,evaluations,filtered";
pub const SURFACE_HEADER: &str = "beta,gamma,relative_error,success_probability";

pub fn results_csv(result: &ExperimentResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER.split(','))?;
    for (r, &f) in result.records.iter().zip(&result.filtered) {
        w.write_record([
            r.scheme.name().to_owned(),
            r.p.to_string(),
            r.seed.to_string(),
            r.relative_error.to_string(),
            r.success_probability.to_string(),
            r.evaluations.to_string(),
            u8::from(f).to_string(),
        ])?;
    }
    finish_csv(w)
}

pub fn surface_csv(grid: &GridResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SURFACE_HEADER.split(','))?;
    for pt in grid.points() {
        w.write_record([
            pt.beta.to_string(),
            pt.gamma.to_string(),
            pt.relative_error.to_string(),
            pt.success_probability.to_string(),
        ])?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::format("csv", e.to_string()))
}

/// Writes through a temp file in the destination directory, then renames,
/// so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
