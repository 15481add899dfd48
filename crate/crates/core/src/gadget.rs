//! Compilation of `exp(-iγH)` for diagonal `H` into CX and Rz gates.
//!
//! Each order-`m` term `c·Z_{q0}…Z_{q(m-1)}` becomes a descending CX ladder
//! `CX(q0,q1) … CX(q(m-2),q(m-1))` that folds the parity onto the last
//! qubit, one `Rz(2cγ)` there, and the mirrored ladder: `2(m-1)` CX per
//! term. Linear terms are a lone Rz and the constant is a global phase.
//!
//! Angles are exact multiples of γ. `Rz(θ) = diag(e^{-iθ/2}, e^{iθ/2})`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Coeff, SpinPolynomial};

/// Default width cap for [`verify_circuit`].
pub const VERIFY_WIDTH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Cx { control: usize, target: usize },
    /// `Rz(multiplier · γ)`.
    Rz { qubit: usize, multiplier: Coeff },
}

impl Gate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Cx { control, target } => (control, Some(target)),
            Gate::Rz { qubit, .. } => (qubit, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateCircuit {
    width: usize,
    gates: Vec<Gate>,
    /// The circuit carries an extra `e^{-iγ·global_phase}`.
    global_phase: Coeff,
}

impl GateCircuit {
    pub fn new(width: usize, gates: Vec<Gate>, global_phase: Coeff) -> Result<Self> {
        for g in &gates {
            let (a, b) = g.qubits();
            for q in core::iter::once(a).chain(b) {
                if q >= width {
                    return Err(Error::QubitOutOfRange { qubit: q, width });
                }
            }
            if b == Some(a) {
                return Err(Error::DegenerateCx(a));
            }
        }
        Ok(Self {
            width,
            gates,
            global_phase,
        })
    }

    pub fn empty(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            global_phase: Coeff::zero(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> Coeff {
        self.global_phase
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx { .. })).count()
    }

    pub fn rz_count(&self) -> usize {
        self.gates.len() - self.cx_count()
    }

    /// Applies the circuit at angle `gamma` to a full statevector in place.
    pub fn apply(&self, amps: &mut [Complex64], gamma: f64) -> Result<()> {
        let dim = 1usize << self.width;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        for g in &self.gates {
            match *g {
                Gate::Cx { control, target } => {
                    let (cm, tm) = (1usize << control, 1usize << target);
                    for i in 0..dim {
                        if i & cm != 0 && i & tm == 0 {
                            amps.swap(i, i | tm);
                        }
                    }
                }
                Gate::Rz { qubit, multiplier } => {
                    let half = multiplier.to_f64().unwrap_or(f64::NAN) * gamma / 2.0;
                    let (down, up) = (cis(-half), cis(half));
                    let m = 1usize << qubit;
                    for (i, a) in amps.iter_mut().enumerate() {
                        *a *= if i & m == 0 { down } else { up };
                    }
                }
            }
        }
        let phase = cis(-self.global_phase.to_f64().unwrap_or(f64::NAN) * gamma);
        amps.iter_mut().for_each(|a| *a *= phase);
        Ok(())
    }

    /// Image of the basis state `index`: CX/Rz circuits map basis states to
    /// phased basis states.
    pub fn apply_to_basis(&self, index: usize, gamma: f64) -> (usize, Complex64) {
        let mut state = index;
        let mut angle = -self.global_phase.to_f64().unwrap_or(f64::NAN) * gamma;
        for g in &self.gates {
            match *g {
                Gate::Cx { control, target } => {
                    if state >> control & 1 == 1 {
                        state ^= 1 << target;
                    }
                }
                Gate::Rz { qubit, multiplier } => {
                    let half = multiplier.to_f64().unwrap_or(f64::NAN) * gamma / 2.0;
                    angle += if state >> qubit & 1 == 0 { -half } else { half };
                }
            }
        }
        (state, cis(angle))
    }
}

pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

fn ladder(gates: &mut Vec<Gate>, qubits: &[usize], coeff: Coeff) {
    let last = *qubits.last().expect("non-empty term");
    let rungs: Vec<Gate> = qubits
        .windows(2)
        .map(|w| Gate::Cx {
            control: w[0],
            target: w[1],
        })
        .collect();
    gates.extend(rungs.iter().cloned());
    gates.push(Gate::Rz {
        qubit: last,
        multiplier: coeff * Coeff::from_integer(2),
    });
    gates.extend(rungs.into_iter().rev());
}

/// Lowers `poly` with the terms visited in `order`. Each entry of `order`
/// is the qubit sequence for one non-constant term (any permutation of the
/// term's variables); together they must cover every non-constant term
/// exactly once.
pub fn compile(poly: &SpinPolynomial, order: &[Vec<usize>]) -> Result<GateCircuit> {
    let mut seen = BTreeSet::new();
    let mut gates = Vec::new();
    for seq in order {
        let mut key = seq.clone();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTermOrder(format!("repeated qubit in {seq:?}")));
        }
        let coeff = poly.coefficient(&key);
        if key.is_empty() || coeff.is_zero() {
            return Err(Error::InvalidTermOrder(format!("{seq:?} is not a term")));
        }
        if !seen.insert(key) {
            return Err(Error::InvalidTermOrder(format!("{seq:?} appears twice")));
        }
        ladder(&mut gates, seq, coeff);
    }
    let expected = poly.non_constant_terms().count();
    if seen.len() != expected {
        return Err(Error::InvalidTermOrder(format!(
            "{} of {expected} terms covered",
            seen.len()
        )));
    }
    GateCircuit::new(poly.num_vars(), gates, poly.constant_term())
}

/// Terms in lexicographic order with ascending qubits.
pub fn natural_order(poly: &SpinPolynomial) -> Vec<Vec<usize>> {
    poly.non_constant_terms().map(|(v, _)| v.to_vec()).collect()
}

pub fn compile_natural(poly: &SpinPolynomial) -> GateCircuit {
    compile(poly, &natural_order(poly)).expect("natural order covers every term")
}

/// `Σ max(0, 2(m-1))` over the non-constant terms.
pub fn ladder_cx_total(poly: &SpinPolynomial) -> usize {
    poly.non_constant_terms().map(|(v, _)| 2 * (v.len() - 1)).sum()
}

fn prefix_inside(prev: &[usize], term: &[usize]) -> usize {
    prev.iter().take_while(|q| term.binary_search(q).is_ok()).count()
}

fn ordered_after(prev: &[usize], term: &[usize]) -> Vec<usize> {
    let k = prefix_inside(prev, term);
    let mut seq = prev[..k].to_vec();
    seq.extend(term.iter().filter(|q| !prev[..k].contains(q)));
    seq
}

/// Sequences the terms so that consecutive ladders open with the same CX.
///
/// Terms of order ≥ 2 are grouped by a shared leading qubit pair chosen
/// greedily: the pair contained in the most ungrouped terms, preferring
/// pairs that are the whole of some quadratic term (those have no other
/// choice), then the lexicographically smallest pair. Within a group each
/// term reuses the longest prefix of its predecessor's qubit sequence, so
/// the closing rungs of one ladder meet identical opening rungs of the next.
/// Linear terms go last. The result is deterministic.
pub fn order_terms(poly: &SpinPolynomial) -> Vec<Vec<usize>> {
    let mut remaining: BTreeSet<Vec<usize>> = poly
        .non_constant_terms()
        .filter(|(v, _)| v.len() >= 2)
        .map(|(v, _)| v.to_vec())
        .collect();
    let mut out = Vec::with_capacity(poly.num_terms());
    while !remaining.is_empty() {
        let mut scores: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for term in &remaining {
            for (a, &i) in term.iter().enumerate() {
                for &j in &term[a + 1..] {
                    let s = scores.entry((i, j)).or_default();
                    s.0 += 1;
                    s.1 += usize::from(term.len() == 2);
                }
            }
        }
        let mut best: Option<((usize, usize), (usize, usize))> = None;
        for (pair, score) in scores {
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((pair, score));
            }
        }
        let ((i, j), _) = best.expect("remaining terms have pairs");
        let mut group: Vec<Vec<usize>> = remaining
            .iter()
            .filter(|t| t.binary_search(&i).is_ok() && t.binary_search(&j).is_ok())
            .cloned()
            .collect();
        for t in &group {
            remaining.remove(t);
        }
        group.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let first = group.remove(0);
        let mut prev = vec![i, j];
        prev.extend(first.iter().filter(|&&q| q != i && q != j));
        out.push(prev.clone());
        while !group.is_empty() {
            // Longest shared prefix; the sort above settles ties.
            let (pos, _) = group
                .iter()
                .enumerate()
                .map(|(p, t)| (p, prefix_inside(&prev, t)))
                .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            let term = group.remove(pos);
            prev = ordered_after(&prev, &term);
            out.push(prev.clone());
        }
    }
    out.extend(poly.non_constant_terms().filter(|(v, _)| v.len() == 1).map(|(v, _)| v.to_vec()));
    out
}

/// Removes pairs of identical CX gates with no gate in between on either of
/// their qubits, repeating until nothing changes. Only gates on disjoint
/// qubits are commuted past each other.
pub fn cancel_pass(circ: &GateCircuit) -> GateCircuit {
    let mut gates = circ.gates.clone();
    loop {
        let before = gates.len();
        gates = cancel_sweep(&gates, circ.width);
        if gates.len() == before {
            break;
        }
    }
    GateCircuit {
        width: circ.width,
        gates,
        global_phase: circ.global_phase,
    }
}

fn cancel_sweep(gates: &[Gate], width: usize) -> Vec<Gate> {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(gates.len());
    // Live gates touching each qubit, most recent last.
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); width];
    for g in gates {
        match *g {
            Gate::Cx { control, target } => {
                let top_c = touching[control].last().copied();
                if top_c.is_some() && top_c == touching[target].last().copied() {
                    let k = top_c.unwrap_or_default();
                    if out[k].as_ref() == Some(g) {
                        out[k] = None;
                        touching[control].pop();
                        touching[target].pop();
                        continue;
                    }
                }
                touching[control].push(out.len());
                touching[target].push(out.len());
                out.push(Some(g.clone()));
            }
            Gate::Rz { qubit, .. } => {
                touching[qubit].push(out.len());
                out.push(Some(g.clone()));
            }
        }
    }
    out.into_iter().flatten().collect()
}

/// Largest amplitude deviation between `circ` at `gamma` and the exact
/// diagonal `exp(-iγ·E)` built from `poly`'s energy table, checked on every
/// computational basis state.
pub fn verify_circuit(circ: &GateCircuit, poly: &SpinPolynomial, gamma: f64) -> Result<f64> {
    verify_circuit_capped(circ, poly, gamma, VERIFY_WIDTH_CAP)
}

pub fn verify_circuit_capped(circ: &GateCircuit, poly: &SpinPolynomial, gamma: f64, cap: usize) -> Result<f64> {
    if circ.width > cap {
        return Err(Error::CapExceeded {
            what: "verification width",
            size: circ.width as u64,
            cap: cap as u64,
        });
    }
    if poly.num_vars() != circ.width {
        return Err(Error::DimensionMismatch {
            expected: circ.width,
            got: poly.num_vars(),
        });
    }
    let energies = poly.energy_table_capped(cap)?.to_f64();
    let mut worst: f64 = 0.0;
    for (index, &e) in energies.iter().enumerate() {
        let want = cis(-gamma * e);
        let (image, phase) = circ.apply_to_basis(index, gamma);
        let dev = if image == index {
            (phase - want).norm()
        } else {
            // |index> lands elsewhere: the amplitude there is 0, not `want`.
            1.0
        };
        worst = worst.max(dev);
    }
    Ok(worst)
}
