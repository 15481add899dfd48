//! Ising encodings of graph coloring.
//!
//! Three schemes are provided:
//!
//! - **binary**: `l = ⌈log₂ c⌉` spins per vertex holding the color index,
//!   most-significant bit first, spin `+1` ↔ bit 0. Adjacency penalties are
//!   products `Π_k (1 + σ_u^k σ_v^k)` of order up to `2l`; when `c` is not a
//!   power of two every vertex also carries a sum of multi-state penalties
//!   (MSPs) excluding the color indices `≥ c`.
//! - **unary**: one spin per (vertex, color), `μ = -1` marks the chosen color,
//!   with a 1-of-`c` constraint per vertex. Quadratic throughout.
//! - **reduced**: the binary encoding quadratized by repeatedly replacing a
//!   spin pair `s_i s_j` with `1 + s_i + s_j - 2A` for a fresh auxiliary `A`,
//!   plus a weighted constraint that vanishes exactly when the replacement
//!   holds.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coloring::{Coloring, ColoringProblem};
use crate::error::{Error, Result};
use crate::poly::{Coeff, SpinAssignment, SpinPolynomial};

/// Variable cap for the brute-force safe-λ search.
pub const SAFE_LAMBDA_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Binary,
    Unary,
    Reduced,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Binary, Scheme::Reduced, Scheme::Unary];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Binary => "binary",
            Scheme::Unary => "unary",
            Scheme::Reduced => "reduced",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "binary" => Some(Scheme::Binary),
            "unary" => Some(Scheme::Unary),
            "reduced" => Some(Scheme::Reduced),
            _ => None,
        }
    }
}

impl core::fmt::Display for Scheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// What a qubit stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitLabel {
    /// Bit `bit` (0 = most significant) of a vertex's color index.
    Bit { vertex: usize, bit: usize },
    /// One-hot flag for `color` at `vertex`.
    Color { vertex: usize, color: usize },
    /// Auxiliary spin standing in for the product of qubits `left` and `right`.
    Aux { left: usize, right: usize },
}

/// A Hamiltonian together with the meaning of its qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingProgram {
    pub poly: SpinPolynomial,
    pub scheme: Scheme,
    pub labels: Vec<QubitLabel>,
    pub problem: ColoringProblem,
    /// Constraint weight; only set for the reduced scheme.
    pub lambda: Option<Coeff>,
}

impl IsingProgram {
    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    /// Bits per vertex for the binary and reduced schemes.
    pub fn bits_per_vertex(&self) -> usize {
        bits_for_colors(self.problem.colors())
    }

    /// Reads a coloring back from a spin assignment. `Ok(None)` marks an
    /// assignment that encodes no coloring (an illegal color index, or a
    /// vertex that is not exactly one-hot).
    pub fn decode(&self, assignment: &SpinAssignment) -> Result<Option<Coloring>> {
        if assignment.len() != self.num_qubits() {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits(),
                got: assignment.len(),
            });
        }
        let spins = assignment.values();
        let n = self.problem.num_vertices();
        let c = self.problem.colors();
        let mut colors = vec![0usize; n];
        match self.scheme {
            Scheme::Binary | Scheme::Reduced => {
                let l = self.bits_per_vertex();
                for (v, slot) in colors.iter_mut().enumerate() {
                    let index = (0..l).fold(0usize, |acc, k| acc << 1 | usize::from(spins[v * l + k] < 0));
                    if index >= c {
                        return Ok(None);
                    }
                    *slot = index;
                }
            }
            Scheme::Unary => {
                for (v, slot) in colors.iter_mut().enumerate() {
                    let block = &spins[v * c..(v + 1) * c];
                    let mut hot = block.iter().enumerate().filter(|(_, &s)| s < 0).map(|(k, _)| k);
                    match (hot.next(), hot.next()) {
                        (Some(k), None) => *slot = k,
                        _ => return Ok(None),
                    }
                }
            }
        }
        Ok(Some(Coloring::new(colors)))
    }
}

/// `⌈log₂ c⌉`, with 0 for `c ≤ 1`.
pub fn bits_for_colors(colors: usize) -> usize {
    if colors <= 1 {
        0
    } else {
        (usize::BITS - (colors - 1).leading_zeros()) as usize
    }
}

fn int(v: i64) -> Coeff {
    Coeff::from_integer(v)
}

/// `1 + sign·s_q`.
fn affine(num_vars: usize, q: usize, sign: i64) -> SpinPolynomial {
    SpinPolynomial::from_terms(num_vars, [(vec![], int(1)), (vec![q], int(sign))]).expect("qubit in range")
}

/// One multi-state penalty: the top `fixed.len()` bits of the color index
/// are pinned, the remaining low bits are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiStatePenalty {
    /// Pinned bit values, most significant first.
    pub fixed: Vec<bool>,
    /// Total bits per color index.
    pub bits: usize,
}

impl MultiStatePenalty {
    /// Number of color indices this penalty covers.
    pub fn block_size(&self) -> usize {
        1 << (self.bits - self.fixed.len())
    }

    /// First covered color index.
    pub fn first_state(&self) -> usize {
        let prefix = self.fixed.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        prefix << (self.bits - self.fixed.len())
    }

    /// `Π_k (1 ∓ σ^k)` over the pinned bits of `node`'s qubit block.
    pub fn polynomial(&self, node: usize, num_vars: usize) -> SpinPolynomial {
        let mut p = SpinPolynomial::constant(num_vars, int(1));
        for (k, &bit) in self.fixed.iter().enumerate() {
            let factor = affine(num_vars, node * self.bits + k, if bit { -1 } else { 1 });
            p = p.checked_mul(&factor).expect("same universe");
        }
        p
    }
}

/// Greedy cover of the illegal color indices `c..2^l` by power-of-two
/// blocks, walking down from `2^l - 1`. Each block pins the top
/// `l - ⌊log₂ p⌋` bits of the current target state, where `p` is the number
/// of states still to penalize; one block is emitted per set bit of
/// `2^l - c`.
pub fn multi_state_penalties(colors: usize, bits: usize) -> Result<Vec<MultiStatePenalty>> {
    if colors == 0 || colors > 1 << bits {
        return Err(Error::PaletteTooLarge {
            colors,
            bits: bits as u32,
        });
    }
    let mut remaining = (1usize << bits) - colors;
    let mut target = (1usize << bits) - 1;
    let mut out = Vec::new();
    while remaining > 0 {
        let free = (usize::BITS - 1 - remaining.leading_zeros()) as usize;
        let pinned = bits - free;
        let fixed = (0..pinned).map(|k| target >> (bits - 1 - k) & 1 == 1).collect();
        out.push(MultiStatePenalty { fixed, bits });
        target -= 1 << free;
        remaining -= 1 << free;
    }
    Ok(out)
}

/// Penalty on `node`'s qubit block that is zero on legal color indices
/// (`< colors`) and positive on every illegal one.
pub fn illegal_state_penalty(colors: usize, node: usize, bits: usize, num_vars: usize) -> Result<SpinPolynomial> {
    let mut total = SpinPolynomial::zero(num_vars);
    for msp in multi_state_penalties(colors, bits)? {
        total = total.checked_add(&msp.polynomial(node, num_vars))?;
    }
    Ok(total)
}

pub fn encode_binary(problem: &ColoringProblem) -> Result<IsingProgram> {
    let c = problem.colors();
    if c < 2 {
        return Err(Error::TooFewColors(c));
    }
    let l = bits_for_colors(c);
    let nq = problem.num_vertices() * l;
    let mut poly = SpinPolynomial::zero(nq);
    for &(u, v) in problem.edges() {
        let mut edge = SpinPolynomial::constant(nq, int(1));
        for k in 0..l {
            let factor = SpinPolynomial::from_terms(nq, [(vec![], int(1)), (vec![u * l + k, v * l + k], int(1))])?;
            edge = edge.checked_mul(&factor)?;
        }
        poly = poly.checked_add(&edge)?;
    }
    for node in 0..problem.num_vertices() {
        poly = poly.checked_add(&illegal_state_penalty(c, node, l, nq)?)?;
    }
    let labels = (0..problem.num_vertices())
        .flat_map(|vertex| (0..l).map(move |bit| QubitLabel::Bit { vertex, bit }))
        .collect();
    Ok(IsingProgram {
        poly,
        scheme: Scheme::Binary,
        labels,
        problem: problem.clone(),
        lambda: None,
    })
}

pub fn encode_unary(problem: &ColoringProblem) -> Result<IsingProgram> {
    let c = problem.colors();
    if c < 2 {
        return Err(Error::TooFewColors(c));
    }
    let nq = problem.num_vertices() * c;
    let mut poly = SpinPolynomial::zero(nq);
    for v in 0..problem.num_vertices() {
        let mut onehot = SpinPolynomial::constant(nq, int(2 - c as i64));
        for k in 0..c {
            onehot.add_term(&[v * c + k], int(1))?;
        }
        poly = poly.checked_add(&onehot.checked_mul(&onehot)?)?;
    }
    for &(u, v) in problem.edges() {
        for k in 0..c {
            let clash = affine(nq, u * c + k, -1).checked_mul(&affine(nq, v * c + k, -1))?;
            poly = poly.checked_add(&clash)?;
        }
    }
    let labels = (0..problem.num_vertices())
        .flat_map(|vertex| (0..c).map(move |color| QubitLabel::Color { vertex, color }))
        .collect();
    Ok(IsingProgram {
        poly,
        scheme: Scheme::Unary,
        labels,
        problem: problem.clone(),
        lambda: None,
    })
}

/// How [`reduce_order`] picks the next spin pair to replace.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PairStrategy {
    /// The pair occurring in the most terms of degree ≥ 3; ties go to the
    /// lexicographically smallest `(i, j)`.
    #[default]
    MostFrequent,
    /// Replace exactly these pairs, in order.
    Fixed(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Substitution {
    pub left: usize,
    pub right: usize,
    pub aux: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionCertificate {
    pub substitutions: Vec<Substitution>,
    pub lambda: Coeff,
    /// Smallest positive integer weight preserving the ground states, when
    /// the reduced space is small enough to check exhaustively.
    pub safe_lambda: Option<i64>,
    /// Qubit count before reduction.
    pub original_qubits: usize,
    /// Objective with every replacement applied.
    pub objective: SpinPolynomial,
    /// Unweighted sum of the equality constraints.
    pub constraint: SpinPolynomial,
}

impl ReductionCertificate {
    fn empty(prog: &IsingProgram, lambda: Coeff) -> Self {
        let nq = prog.num_qubits();
        Self {
            substitutions: Vec::new(),
            lambda,
            safe_lambda: None,
            original_qubits: nq,
            objective: prog.poly.clone(),
            constraint: SpinPolynomial::zero(nq),
        }
    }

    pub fn is_safe(&self) -> Option<bool> {
        self.safe_lambda.map(|s| self.lambda >= int(s))
    }

    /// Extends an assignment of the original qubits with the auxiliary
    /// values that satisfy every replacement.
    pub fn lift(&self, original: &SpinAssignment) -> Result<SpinAssignment> {
        if original.len() != self.original_qubits {
            return Err(Error::LengthMismatch {
                expected: self.original_qubits,
                got: original.len(),
            });
        }
        let mut spins = original.values().to_vec();
        spins.resize(self.original_qubits + self.substitutions.len(), 1);
        for s in &self.substitutions {
            spins[s.aux] = if spins[s.left] < 0 && spins[s.right] < 0 { -1 } else { 1 };
        }
        SpinAssignment::new(spins)
    }

    /// Whether every auxiliary equals the product-replacement it stands for.
    pub fn is_consistent(&self, full: &SpinAssignment) -> bool {
        let s = full.values();
        self.substitutions.iter().all(|sub| {
            let product = s[sub.left] * s[sub.right];
            product == 1 + s[sub.left] + s[sub.right] - 2 * s[sub.aux]
        })
    }

    /// The original-qubit prefix of a reduced assignment.
    pub fn project(&self, full: &SpinAssignment) -> SpinAssignment {
        SpinAssignment::new(full.values()[..self.original_qubits].to_vec()).expect("spins stay valid")
    }
}

fn most_frequent_pair(poly: &SpinPolynomial) -> Option<(usize, usize)> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (vars, _) in poly.terms().filter(|(v, _)| v.len() >= 3) {
        for (a, &i) in vars.iter().enumerate() {
            for &j in &vars[a + 1..] {
                *counts.entry((i, j)).or_default() += 1;
            }
        }
    }
    // BTreeMap iterates in ascending key order, so the first maximum wins ties.
    let mut best: Option<((usize, usize), usize)> = None;
    for (pair, count) in counts {
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((pair, count));
        }
    }
    best.map(|(pair, _)| pair)
}

/// `-2A(s_i + s_j + 1) + (1 + s_i)(1 + s_j) + 2`: zero when
/// `s_i s_j = 1 + s_i + s_j - 2A`, at least 4 otherwise.
pub fn pair_constraint(num_vars: usize, i: usize, j: usize, aux: usize) -> SpinPolynomial {
    let mut p = SpinPolynomial::zero(num_vars);
    for (vars, c) in [
        (&[aux, i][..], -2),
        (&[aux, j][..], -2),
        (&[aux][..], -2),
        (&[][..], 3),
        (&[i][..], 1),
        (&[j][..], 1),
        (&[i, j][..], 1),
    ] {
        p.add_term(vars, int(c)).expect("indices in range");
    }
    p
}

/// Quadratizes a program by auxiliary-variable substitution.
///
/// The output polynomial is `objective + λ·constraint`. Programs of degree
/// ≤ 2 come back unchanged with an empty certificate.
pub fn reduce_order(
    prog: &IsingProgram,
    lambda: Coeff,
    strategy: &PairStrategy,
) -> Result<(IsingProgram, ReductionCertificate)> {
    if lambda <= Coeff::zero() {
        return Err(Error::NonPositiveLambda);
    }
    if prog.poly.degree() <= 2 {
        return Ok((prog.clone(), ReductionCertificate::empty(prog, lambda)));
    }
    let original = prog.num_qubits();
    let mut objective = prog.poly.clone();
    let mut constraint_terms: Vec<(usize, usize, usize)> = Vec::new();
    let mut fixed = match strategy {
        PairStrategy::Fixed(pairs) => Some(pairs.iter().copied()),
        PairStrategy::MostFrequent => None,
    };
    while objective.degree() > 2 {
        let pair = match fixed.as_mut() {
            Some(iter) => iter.next(),
            None => most_frequent_pair(&objective),
        };
        let Some((i, j)) = pair else {
            return Err(Error::ReductionStalled(objective.degree()));
        };
        if i == j {
            return Err(Error::DegeneratePair(i));
        }
        let (i, j) = (i.min(j), i.max(j));
        let aux = objective.num_vars();
        objective = objective.with_num_vars(aux + 1)?;
        let repl = SpinPolynomial::from_terms(
            aux + 1,
            [(vec![], int(1)), (vec![i], int(1)), (vec![j], int(1)), (vec![aux], int(-2))],
        )?;
        objective = objective.substitute_pair(i, j, &repl)?;
        constraint_terms.push((i, j, aux));
    }
    let total = objective.num_vars();
    let mut constraint = SpinPolynomial::zero(total);
    for &(i, j, aux) in &constraint_terms {
        constraint = constraint.checked_add(&pair_constraint(total, i, j, aux))?;
    }
    let poly = objective.checked_add(&constraint.scale(lambda))?;

    let substitutions: Vec<Substitution> = constraint_terms
        .iter()
        .map(|&(left, right, aux)| Substitution { left, right, aux })
        .collect();
    let mut labels = prog.labels.clone();
    labels.extend(substitutions.iter().map(|s| QubitLabel::Aux {
        left: s.left,
        right: s.right,
    }));

    let safe_lambda = if total <= SAFE_LAMBDA_CAP {
        minimal_safe_lambda(&prog.poly, &objective, &constraint)?
    } else {
        None
    };
    let certificate = ReductionCertificate {
        substitutions,
        lambda,
        safe_lambda,
        original_qubits: original,
        objective,
        constraint,
    };
    let reduced = IsingProgram {
        poly,
        scheme: Scheme::Reduced,
        labels,
        problem: prog.problem.clone(),
        lambda: Some(lambda),
    };
    Ok((reduced, certificate))
}

/// Whether `objective + λ·constraint` has the same minimum as `original`
/// with every minimizer satisfying all constraints.
pub fn lambda_preserves_ground_states(
    original: &SpinPolynomial,
    objective: &SpinPolynomial,
    constraint: &SpinPolynomial,
    lambda: Coeff,
) -> Result<bool> {
    let reduced = objective.checked_add(&constraint.scale(lambda))?;
    let target = original.energy_table()?.min();
    let table = reduced.energy_table()?;
    let con = constraint.energy_table()?;
    if table.min() != target {
        return Ok(false);
    }
    Ok(table.ground_states().into_iter().all(|i| con.numerators()[i] == 0))
}

/// Smallest positive integer λ for which the reduction keeps exactly the
/// original ground states (lifted with consistent auxiliaries).
pub fn minimal_safe_lambda(
    original: &SpinPolynomial,
    objective: &SpinPolynomial,
    constraint: &SpinPolynomial,
) -> Result<Option<i64>> {
    let con = constraint.energy_table()?;
    let obj = objective.energy_table()?;
    let Some(&smallest_violation) = con.numerators().iter().filter(|&&v| v > 0).min() else {
        return Ok(Some(1));
    };
    // Past this weight any violated state sits strictly above the target.
    let gap = original.energy_table()?.min() - obj.min();
    let step = Coeff::new(smallest_violation, con.denominator());
    let bound = (gap / step).floor().to_integer().max(0) + 1;
    for lambda in 1..=bound {
        if lambda_preserves_ground_states(original, objective, constraint, int(lambda))? {
            return Ok(Some(lambda));
        }
    }
    Err(Error::Overflow("safe lambda search exceeded its bound"))
}

/// Two-qubit gate count of the unary encoding: `2ce + nc(c-1)`.
pub fn predicted_cx_unary(n: u64, e: u64, c: u64) -> u64 {
    2 * c * e + n * c * c.saturating_sub(1)
}

/// Closed form `(2^l - 2)[(2e + n)l - 2(e + n)]`, transcribed as published.
///
/// The sum it simplifies stops at `k = l - 1`, so it omits the full-order
/// adjacency products; on the four corners map it gives 16 while the
/// compiled Hamiltonian needs 40. Kept for comparison only.
pub fn predicted_cx_binary_closed_form(n: i64, e: i64, l: u32) -> i64 {
    ((1i64 << l) - 2) * ((2 * e + n) * l as i64 - 2 * (e + n))
}

/// The summation `2e Σ C(l,k)(2k-1) + 2n Σ C(l,k)(k-1)` over `k = 1..l-1`
/// that the closed form simplifies.
pub fn predicted_cx_binary_sum(n: i64, e: i64, l: u32) -> i64 {
    let l = l as i64;
    let (mut adj, mut con) = (0i64, 0i64);
    for k in 1..l {
        let b = binomial(l, k);
        adj += b * (2 * k - 1);
        con += b * (k - 1);
    }
    2 * e * adj + 2 * n * con
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Builds `problem` under `scheme`. `lambda` only matters for
/// [`Scheme::Reduced`], which quadratizes the binary encoding with the
/// default pair strategy.
pub fn encode(problem: &ColoringProblem, scheme: Scheme, lambda: Coeff) -> Result<IsingProgram> {
    match scheme {
        Scheme::Binary => encode_binary(problem),
        Scheme::Unary => encode_unary(problem),
        Scheme::Reduced => {
            let (mut prog, _) = reduce_order(&encode_binary(problem)?, lambda, &PairStrategy::MostFrequent)?;
            prog.scheme = Scheme::Reduced;
            prog.lambda = Some(lambda);
            Ok(prog)
        }
    }
}

/// Human-readable one-liner for a program.
pub fn describe(prog: &IsingProgram) -> alloc::string::String {
    format!(
        "scheme={} qubits={} terms={} degree={}",
        prog.scheme,
        prog.num_qubits(),
        prog.poly.non_constant_terms().count(),
        prog.poly.degree()
    )
}
