//! Exact multilinear polynomials over spin variables `s ∈ {+1, -1}`.
//!
//! A [`SpinPolynomial`] is kept in multilinear normal form: every monomial is
//! a sorted, duplicate-free index set (`s² = 1` is reduced on construction)
//! and no stored coefficient is zero. The empty index set is the constant
//! term.
//!
//! Basis-index convention used by [`EnergyTable`] and [`SpinAssignment`]:
//! bit `j` of a basis index (LSB = variable 0) equal to 0 means spin `+1`,
//! equal to 1 means spin `-1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Coeff = Ratio<i64>;

/// Default variable cap for [`SpinPolynomial::energy_table`].
pub const DEFAULT_TABLE_CAP: usize = 24;

/// Sorted symmetric difference of two sorted index sets.
fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorted union of two sorted, duplicate-free index sets.
fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn accumulate(terms: &mut BTreeMap<Vec<usize>, Coeff>, vars: Vec<usize>, coeff: Coeff) {
    if coeff.is_zero() {
        return;
    }
    let entry = terms.entry(vars);
    match entry {
        alloc::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        alloc::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = *o.get() + coeff;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<usize>, Coeff>,
}

impl SpinPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: Coeff) -> Self {
        let mut p = Self::zero(num_vars);
        accumulate(&mut p.terms, Vec::new(), value);
        p
    }

    /// The single spin `s_index`.
    pub fn spin(num_vars: usize, index: usize) -> Result<Self> {
        Self::monomial(num_vars, &[index], Coeff::one())
    }

    /// `coeff · Π s_v` over `vars`; repeated variables cancel pairwise.
    pub fn monomial(num_vars: usize, vars: &[usize], coeff: Coeff) -> Result<Self> {
        let mut p = Self::zero(num_vars);
        p.add_term(vars, coeff)?;
        Ok(p)
    }

    /// Builds a polynomial from `(vars, coeff)` pairs, normalizing each
    /// monomial and merging equal ones.
    pub fn from_terms<I, V>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, Coeff)>,
        V: AsRef<[usize]>,
    {
        let mut p = Self::zero(num_vars);
        for (vars, coeff) in terms {
            p.add_term(vars.as_ref(), coeff)?;
        }
        Ok(p)
    }

    /// Adds `coeff · Π s_v` in place.
    pub fn add_term(&mut self, vars: &[usize], coeff: Coeff) -> Result<()> {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        let mut normal = Vec::with_capacity(sorted.len());
        for v in sorted {
            if v >= self.num_vars {
                return Err(Error::VariableOutOfRange {
                    index: v,
                    num_vars: self.num_vars,
                });
            }
            if normal.last() == Some(&v) {
                normal.pop();
            } else {
                normal.push(v);
            }
        }
        accumulate(&mut self.terms, normal, coeff);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Largest monomial size; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All stored terms in lexicographic order of their index sets.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], Coeff)> + '_ {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn non_constant_terms(&self) -> impl Iterator<Item = (&[usize], Coeff)> + '_ {
        self.terms().filter(|(k, _)| !k.is_empty())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn count_terms_of_degree(&self, degree: usize) -> usize {
        self.terms.keys().filter(|k| k.len() == degree).count()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&[])
    }

    /// Coefficient of the monomial with exactly this (sorted) index set.
    pub fn coefficient(&self, vars: &[usize]) -> Coeff {
        self.terms.get(vars).copied().unwrap_or_else(Coeff::zero)
    }

    /// Same polynomial over a larger variable universe.
    pub fn with_num_vars(&self, num_vars: usize) -> Result<Self> {
        if let Some(max) = self.terms.keys().filter_map(|k| k.last()).max() {
            if *max >= num_vars {
                return Err(Error::VariableOutOfRange {
                    index: *max,
                    num_vars,
                });
            }
        }
        Ok(Self {
            num_vars,
            terms: self.terms.clone(),
        })
    }

    fn check_universe(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::UniverseMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            accumulate(&mut out.terms, k.clone(), *v);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(-Coeff::one()))
    }

    /// Distributive product; monomials multiply by symmetric difference.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_universe(other)?;
        let mut out = Self::zero(self.num_vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                accumulate(&mut out.terms, symmetric_difference(a, b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Coeff) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (k, v) in &self.terms {
            accumulate(&mut out.terms, k.clone(), v * factor);
        }
        out
    }

    pub fn evaluate(&self, assignment: &SpinAssignment) -> Result<Coeff> {
        if assignment.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: assignment.len(),
            });
        }
        let spins = assignment.values();
        Ok(self
            .terms
            .iter()
            .map(|(vars, c)| {
                let negative = vars.iter().filter(|&&v| spins[v] < 0).count() % 2 == 1;
                if negative {
                    -*c
                } else {
                    *c
                }
            })
            .fold(Coeff::zero(), |acc, x| acc + x))
    }

    /// Every term containing both `i` and `j` has `s_i s_j` replaced by
    /// `replacement` (degree ≤ 1) and is re-expanded; other terms are kept.
    pub fn substitute_pair(&self, i: usize, j: usize, replacement: &Self) -> Result<Self> {
        self.check_universe(replacement)?;
        if i == j {
            return Err(Error::DegeneratePair(i));
        }
        for v in [i, j] {
            if v >= self.num_vars {
                return Err(Error::VariableOutOfRange {
                    index: v,
                    num_vars: self.num_vars,
                });
            }
        }
        if replacement.degree() > 1 {
            return Err(Error::ReplacementDegree(replacement.degree()));
        }
        let mut out = Self::zero(self.num_vars);
        for (vars, c) in &self.terms {
            if vars.binary_search(&i).is_ok() && vars.binary_search(&j).is_ok() {
                let rest: Vec<usize> = vars.iter().copied().filter(|&v| v != i && v != j).collect();
                for (r, rc) in &replacement.terms {
                    accumulate(&mut out.terms, symmetric_difference(&rest, r), c * rc);
                }
            } else {
                accumulate(&mut out.terms, vars.clone(), *c);
            }
        }
        Ok(out)
    }

    pub fn energy_table(&self) -> Result<EnergyTable> {
        self.energy_table_capped(DEFAULT_TABLE_CAP)
    }

    /// Diagonal of the Hamiltonian over all `2^n` basis states.
    ///
    /// Coefficients are brought to a common denominator and placed at their
    /// bitmask; a fast Walsh–Hadamard transform then yields
    /// `Σ_m c_m (-1)^{popcount(x & m)}` at every index `x`.
    pub fn energy_table_capped(&self, cap: usize) -> Result<EnergyTable> {
        let n = self.num_vars;
        if n > cap {
            return Err(Error::CapExceeded {
                what: "energy table variables",
                size: n as u64,
                cap: cap as u64,
            });
        }
        let denom = self
            .terms
            .values()
            .fold(1i64, |acc, c| acc.lcm(c.denom()));
        let mut bound: i64 = 0;
        let mut values = vec![0i64; 1usize << n];
        for (vars, c) in &self.terms {
            let scaled = c
                .numer()
                .checked_mul(denom / c.denom())
                .ok_or(Error::Overflow("scaling energy table"))?;
            bound = bound
                .checked_add(scaled.abs())
                .ok_or(Error::Overflow("bounding energy table"))?;
            let mask = vars.iter().fold(0usize, |m, &v| m | (1 << v));
            values[mask] = scaled;
        }
        let mut h = 1;
        while h < values.len() {
            for block in values.chunks_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x + y;
                    *b = x - y;
                }
            }
            h *= 2;
        }
        Ok(EnergyTable {
            num_vars: n,
            denom,
            numerators: values,
        })
    }
}

/// A ±1 value per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidSpin(bad));
        }
        Ok(Self(values))
    }

    pub fn all_up(num_vars: usize) -> Self {
        Self(vec![1; num_vars])
    }

    /// Assignment for a basis index (bit `j` set ↔ `s_j = -1`).
    pub fn from_index(num_vars: usize, index: usize) -> Self {
        Self(
            (0..num_vars)
                .map(|j| if index >> j & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < 0)
            .fold(0, |acc, (j, _)| acc | 1 << j)
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Exact energies of all `2^n` basis states, stored as integer numerators
/// over one common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyTable {
    num_vars: usize,
    denom: i64,
    numerators: Vec<i64>,
}

impl EnergyTable {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn denominator(&self) -> i64 {
        self.denom
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn get(&self, index: usize) -> Coeff {
        Coeff::new(self.numerators[index], self.denom)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let d = self.denom as f64;
        self.numerators.iter().map(|&v| v as f64 / d).collect()
    }

    pub fn min(&self) -> Coeff {
        Coeff::new(*self.numerators.iter().min().unwrap_or(&0), self.denom)
    }

    pub fn max(&self) -> Coeff {
        Coeff::new(*self.numerators.iter().max().unwrap_or(&0), self.denom)
    }

    /// Basis indices attaining the minimum energy, ascending.
    pub fn ground_states(&self) -> Vec<usize> {
        let Some(&min) = self.numerators.iter().min() else {
            return Vec::new();
        };
        self.numerators
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == min)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn mean(&self) -> Coeff {
        let sum: i128 = self.numerators.iter().map(|&v| v as i128).sum();
        let len = self.numerators.len() as i128;
        let g = sum.gcd(&len);
        let (num, den) = (sum / g, len / g * self.denom as i128);
        Coeff::new(
            num.to_i64().expect("mean numerator fits i64"),
            den.to_i64().expect("mean denominator fits i64"),
        )
    }
}

/// Multilinear polynomial over binary variables `x ∈ {0, 1}` (`x² = x`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboPolynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<usize>, Coeff>,
}

impl QuboPolynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I, V>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (V, Coeff)>,
        V: AsRef<[usize]>,
    {
        let mut q = Self::zero(num_vars);
        for (vars, coeff) in terms {
            q.add_term(vars.as_ref(), coeff)?;
        }
        Ok(q)
    }

    pub fn add_term(&mut self, vars: &[usize], coeff: Coeff) -> Result<()> {
        if let Some(&v) = vars.iter().find(|&&v| v >= self.num_vars) {
            return Err(Error::VariableOutOfRange {
                index: v,
                num_vars: self.num_vars,
            });
        }
        accumulate(&mut self.terms, union(vars, &[]), coeff);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], Coeff)> + '_ {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn evaluate(&self, bits: &[u8]) -> Result<Coeff> {
        if bits.len() != self.num_vars {
            return Err(Error::LengthMismatch {
                expected: self.num_vars,
                got: bits.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .filter(|(vars, _)| vars.iter().all(|&v| bits[v] != 0))
            .fold(Coeff::zero(), |acc, (_, c)| acc + c))
    }
}

/// Expands each subset of `vars`; `sign` is the per-variable factor applied
/// to the non-constant half of `(1 + sign·y)`.
fn expand_subsets(vars: &[usize], mut emit: impl FnMut(Vec<usize>, u32)) {
    let k = vars.len();
    for mask in 0u64..(1u64 << k) {
        let subset: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| vars[b]).collect();
        emit(subset, mask.count_ones());
    }
}

/// Change of variable `x_i = (1 - s_i)/2`, so `s = +1 ↔ x = 0`.
pub fn qubo_to_ising(q: &QuboPolynomial) -> SpinPolynomial {
    let mut out = SpinPolynomial::zero(q.num_vars);
    for (vars, c) in &q.terms {
        let scale = *c / Coeff::from_integer(1i64 << vars.len());
        expand_subsets(vars, |subset, size| {
            let sign = if size % 2 == 1 { -scale } else { scale };
            accumulate(&mut out.terms, subset, sign);
        });
    }
    out
}

/// Inverse change of variable `s_i = 1 - 2x_i`.
pub fn ising_to_qubo(h: &SpinPolynomial) -> QuboPolynomial {
    let mut out = QuboPolynomial::zero(h.num_vars);
    for (vars, c) in &h.terms {
        expand_subsets(vars, |subset, size| {
            let factor = Coeff::from_integer((-2i64).pow(size));
            accumulate(&mut out.terms, subset, c * factor);
        });
    }
    out
}

/// `Σ |c|` over non-constant terms; handy upper bound on energy spread.
pub fn coefficient_l1(p: &SpinPolynomial) -> Coeff {
    p.non_constant_terms()
        .fold(Coeff::zero(), |acc, (_, c)| acc + c.abs())
}
